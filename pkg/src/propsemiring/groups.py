"""Propositional encoding of the group axioms for a finite carrier {0..n-1}.

Atom X_ijk stands for "x_i * x_j = x_k" and gets index i + j*n + k*n^2 + 1.
Element 0 plays the identity e. Quantifiers are expanded over the carrier,
so the encoding has n^3 atoms and is only practical for n = 2.
"""

from __future__ import annotations

from itertools import product

from .deduction import Theory, conjoin
from .formula import Atom, Formula, Implies, Or, And

SUPPORTED_ORDERS = (2,)


class UnsupportedOrder(ValueError):
    pass


def product_atom(i: int, j: int, k: int, n: int) -> Atom:
    return Atom(i + j * n + k * n * n + 1)


def _disjoin(formulas: list[Formula]) -> Formula:
    acc = formulas[0]
    for phi in formulas[1:]:
        acc = Or(acc, phi)
    return acc


def associativity(n: int) -> Formula:
    """Both directions of (x*y)*a = x*(y*a) over all element choices."""
    clauses = []
    for x, y, z, a, b, c in product(range(n), repeat=6):
        xyz, yab = product_atom(x, y, z, n), product_atom(y, a, b, n)
        clauses.append(Implies(And(And(xyz, yab), product_atom(x, b, c, n)), product_atom(z, a, c, n)))
        clauses.append(Implies(And(And(xyz, yab), product_atom(z, a, c, n)), product_atom(x, b, c, n)))
    return conjoin(clauses)


def right_identity(n: int) -> Formula:
    return conjoin([product_atom(x, 0, x, n) for x in range(n)])


def right_inverse(n: int) -> Formula:
    return conjoin([_disjoin([product_atom(x, y, 0, n) for y in range(n)]) for x in range(n)])


def left_inverse(n: int) -> Formula:
    """The query: every y has some x with x*y = e."""
    return conjoin([_disjoin([product_atom(x, y, 0, n) for x in range(n)]) for y in range(n)])


def group_theory(n: int) -> tuple[Theory, Formula]:
    """The axioms G1-G3 as a theory, and the left-inverse query."""
    if n not in SUPPORTED_ORDERS:
        raise UnsupportedOrder(
            f"group order {n} needs {n ** 3} atoms, i.e. 2**{n ** 3} minterms; "
            f"only order 2 is tractable"
        )
    theory = Theory((
        ("G1", associativity(n)),
        ("G2", right_identity(n)),
        ("G3", right_inverse(n)),
    ))
    return theory, left_inverse(n)
