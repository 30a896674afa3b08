"""Verification of size-parameterized quantum circuits with synchronized
weighted tree automata (SWTAs) and weighted tree transducers (WTTs)."""

from .algebra import AlgebraicComplex, make_number, parse_scalar, format_scalar
from .trees import PerfectTree, basis_tree, format_tree, parse_tree
from .swta import LinearForm, Swta, evaluate, union, prime_tail, domain_dfa, is_empty
from .wtt import Wtt, apply, compose, compose_all, image
from .paramgen import make_box, parameterize, validate_box
from .verify import Verdict, domain_relate, functional_relate, bounded_oracle, verify_triple, equivalent_circuits
from .models import parse_model, format_model, load_model, save_model, parse_circuit

__all__ = [
    "AlgebraicComplex", "make_number", "parse_scalar", "format_scalar",
    "PerfectTree", "basis_tree", "format_tree", "parse_tree",
    "LinearForm", "Swta", "evaluate", "union", "prime_tail", "domain_dfa", "is_empty",
    "Wtt", "apply", "compose", "compose_all", "image",
    "make_box", "parameterize", "validate_box",
    "Verdict", "domain_relate", "functional_relate", "bounded_oracle", "verify_triple", "equivalent_circuits",
    "parse_model", "format_model", "load_model", "save_model", "parse_circuit",
]
