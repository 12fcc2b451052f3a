"""Exact symbolic verification over real quadratic fields."""
from .binet import Field, UnsupportedError, binet_normalize, field_of
from .core import (
    BOUNDED,
    BOUNDED_LIMIT,
    CLOSED,
    FALSIFIED,
    PROVEN,
    SUM_INDUCTION,
    VERIFIED,
    Equivalence,
    ParityCase,
    ProofOutcome,
    atom_poly,
    prove,
    prove_closed,
    prove_sum,
    relation_equivalent,
    worst,
)
from .laurent import LaurentPoly
from .quadfield import QuadRat, squarefree_split

__all__ = [
    "BOUNDED",
    "BOUNDED_LIMIT",
    "CLOSED",
    "FALSIFIED",
    "PROVEN",
    "SUM_INDUCTION",
    "VERIFIED",
    "Equivalence",
    "Field",
    "LaurentPoly",
    "ParityCase",
    "ProofOutcome",
    "QuadRat",
    "UnsupportedError",
    "atom_poly",
    "binet_normalize",
    "field_of",
    "prove",
    "prove_closed",
    "prove_sum",
    "relation_equivalent",
    "squarefree_split",
    "worst",
]
