"""Exact counting, primitive sets and constructions over F_q[x]."""

from fractions import Fraction

from . import _core
from ._core import (
    BudgetExceeded,
    DomainError,
    Error,
    ParseError,
    check_primitive,
    count_table,
    evaluate_g,
    kth_irreducible,
    mertens,
    pi_cumulative,
    pi_prime,
    run_cli,
)

__all__ = [
    "BudgetExceeded",
    "DomainError",
    "Error",
    "ParseError",
    "check_primitive",
    "count_table",
    "erdos_sum",
    "evaluate_g",
    "kth_irreducible",
    "mertens",
    "pi_cumulative",
    "pi_prime",
    "run_cli",
    "t_sequence",
]


def erdos_sum(q, horizon, polys):
    """Exact sum of 1/(q^deg a * deg a) as a Fraction."""
    return Fraction(_core.erdos_sum(q, horizon, list(polys)))


def t_sequence(q=2, growth="powlog:eps=0.1"):
    """(k0, partial_sum, tail_bound) of the certified t-sequence, sums as Fractions."""
    k0, partial, tail = _core.t_sequence_k0(q, growth)
    return k0, Fraction(partial), Fraction(tail)
