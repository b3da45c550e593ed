"""Severi-Brauer birationality: finite-field geometry and Brauer-class certificates."""

from .brauer import BrauerClass, SBVariety, decide_birational, make_class
from .certificates import Certificate, build_certificate, check_certificate
from .fields import FieldContext, FieldElement, make_context
from .projective import LinSubspace, ProjPoint

__version__ = "0.1.0"

__all__ = [
    "BrauerClass", "SBVariety", "decide_birational", "make_class",
    "Certificate", "build_certificate", "check_certificate",
    "FieldContext", "FieldElement", "make_context",
    "LinSubspace", "ProjPoint",
]
