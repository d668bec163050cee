"""aupoly: almost-universality of ternary quadratic polynomials with odd
prime power conductor.

Decides whether H(x) = (Q(x) + 2B(nu, x)) / p^alpha represents all but
finitely many positive integers, and cross-checks every verdict against an
exact lattice-point enumeration oracle.
"""

from .engine import Verdict, analyze, decide, local_scan, predict_exceptions
from .lattice import (
    Coset,
    GramMatrix3,
    Instance,
    Rejection,
    ShiftVector,
    ShortCircuit,
    conductor,
    coset,
    discriminant,
    gate,
    norm_ideal,
    shift_translate,
    superlattice,
    validate_instance,
)
from .oracle import enumerate_coset, gaps, stabilization

__version__ = "0.1.0"

__all__ = [
    "Coset",
    "GramMatrix3",
    "Instance",
    "Rejection",
    "ShiftVector",
    "ShortCircuit",
    "Verdict",
    "analyze",
    "conductor",
    "coset",
    "decide",
    "discriminant",
    "enumerate_coset",
    "gaps",
    "gate",
    "local_scan",
    "norm_ideal",
    "predict_exceptions",
    "shift_translate",
    "stabilization",
    "superlattice",
    "validate_instance",
    "__version__",
]
