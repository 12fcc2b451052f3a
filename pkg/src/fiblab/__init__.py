"""Exact verification, classification and rediscovery of Fibonacci identities.

Identities are written in a small DSL (``F[n+1]^3 + F[n]^3 - F[n-1]^3 = F[3n] ;
n >= 1``), checked by exact sweeps, proved symbolically over Q(sqrt(5)), sorted
into cubic classes and searched for as integer relations. :mod:`fiblab.tiling`
builds the Fibonacci cube spirals.
"""
from .catalog import Catalog, CatalogEntry, CatalogError, shipped, verify_all
from .classifier import classify
from .discovery import discover, search
from .dsl import DSLError, Identity, parse, render
from .evaluator import CheckReport, check_identity, eval_expr
from .kernels import IMPLEMENTATION as KERNELS
from .prover import ProofOutcome, prove, relation_equivalent
from .sequences import fib, gen_fib, k_fib, lucas
from .tiling import analyze, generate

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "CatalogEntry",
    "CatalogError",
    "CheckReport",
    "DSLError",
    "Identity",
    "KERNELS",
    "ProofOutcome",
    "analyze",
    "check_identity",
    "classify",
    "discover",
    "eval_expr",
    "fib",
    "gen_fib",
    "generate",
    "k_fib",
    "lucas",
    "parse",
    "prove",
    "relation_equivalent",
    "render",
    "search",
    "shipped",
    "verify_all",
]
