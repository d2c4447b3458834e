"""Rewriting of semiring terms with the rule set R1 (r1..r8).

Terms live in the free commutative semiring over x_i, x_i^c and the minterm
generators y_k of a fixed level n. A term is a sum (``+``, the semiring
``∘``) of monomials (``*``, the semiring ``·``). The rules, oriented left to
right:

    r1  y_k * y_k       => y_k
    r2  y_k * y_j       => 0          (k != j)
    r3  y_k + y_k       => y_k
    r4  x_i             => sum of y_j, j in A_i       (x_i true in minterm j)
    r5  x_i^c           => sum of y_j, j in A_i^c
    r6  y_0 + ... + y_{2^n-1} => 1
    r7  1 + y_k         => 1
    r8  1 + 1           => 1

Every reduced term is 0, 1, or a sum of distinct y_k that is not the full
index range. This module is a second route to the normal form computed by
:mod:`propsemiring.minterm` and is used to cross-check it.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from typing import Callable, Iterable, Optional

from .formula import And, Atom, Formula, Implies, Neg, Or, _Bottom, _Top, max_atom
from .minterm import MintermSet

Trace = Optional[Callable[[str], None]]

# generator kinds, listed from greatest to smallest
_KIND_RANK = {"x": 4, "xc": 3, "y": 2, "one": 1, "zero": 0}


class RewriteError(ValueError):
    """Malformed term or a term that is not in normal form."""


class TermTooLarge(RewriteError):
    """Flattening a formula into a sum of monomials exceeded the budget."""


@total_ordering
@dataclass(frozen=True, slots=True)
class Generator:
    kind: str
    index: int = 0
    level: int = 0

    def __post_init__(self) -> None:
        if self.kind not in _KIND_RANK:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind in ("x", "xc") and self.index < 1:
            raise ValueError("atom generators need index >= 1")
        if self.kind == "y" and not (self.level >= 1 and 0 <= self.index < 1 << self.level):
            raise ValueError(f"y{self.index} is not a minterm of level {self.level}")

    @property
    def key(self) -> tuple[int, int]:
        # larger key means greater generator: x1 > x2 > ... > x1c > ... > y0 > y1 > ...
        return (_KIND_RANK[self.kind], -self.index)

    def __lt__(self, other: Generator) -> bool:
        return self.key < other.key

    def __str__(self) -> str:
        if self.kind == "x":
            return f"x{self.index}"
        if self.kind == "xc":
            return f"x{self.index}c"
        if self.kind == "y":
            return f"y{self.index}"
        return "1" if self.kind == "one" else "0"


def X(i: int) -> Generator:
    return Generator("x", i)


def Xc(i: int) -> Generator:
    return Generator("xc", i)


def Y(k: int, n: int) -> Generator:
    return Generator("y", k, n)


ONE = Generator("one")
ZERO = Generator("zero")


def generator_order(a: Generator, b: Generator) -> int:
    """Three-way comparison: positive if ``a`` is the greater generator."""
    if a.kind == "y" and b.kind == "y" and a.level != b.level:
        raise RewriteError("y generators of different levels are not comparable")
    return (a.key > b.key) - (a.key < b.key)


@total_ordering
@dataclass(frozen=True, slots=True)
class Monomial:
    """A product of generators, kept sorted from greatest to smallest.

    The empty product is the unit 1. Use :meth:`of` to build one; it drops
    unit factors and returns ``None`` for a product containing 0.
    """

    factors: tuple[Generator, ...] = ()

    @classmethod
    def of(cls, factors: Iterable[Generator]) -> Optional[Monomial]:
        kept = []
        for g in factors:
            if g.kind == "zero":
                return None
            if g.kind != "one":
                kept.append(g)
        return cls(tuple(sorted(kept, reverse=True)))

    @property
    def key(self) -> tuple:
        # tuple comparison is lexicographic with a proper prefix being smaller
        return tuple(g.key for g in self.factors)

    def __lt__(self, other: Monomial) -> bool:
        return self.key < other.key

    def is_one(self) -> bool:
        return not self.factors

    def __str__(self) -> str:
        return "*".join(map(str, self.factors)) if self.factors else "1"


@dataclass(frozen=True, slots=True)
class RigTerm:
    """A sum of monomials, stored sorted from greatest to smallest (a multiset)."""

    summands: tuple[Monomial, ...] = ()

    @classmethod
    def of(cls, summands: Iterable[Monomial]) -> RigTerm:
        return cls(tuple(sorted(summands, reverse=True)))

    @property
    def key(self) -> tuple:
        return tuple(m.key for m in self.summands)

    def is_zero(self) -> bool:
        return not self.summands

    def is_one(self) -> bool:
        return len(self.summands) == 1 and self.summands[0].is_one()

    def __str__(self) -> str:
        return render_term(self.summands)


def render_term(summands: Iterable[Monomial]) -> str:
    parts = [str(m) for m in summands]
    return " + ".join(parts) if parts else "0"


THETA = RigTerm()
UNIT = RigTerm((Monomial(),))


@lru_cache(maxsize=None)
def expansion_indices(i: int, positive: bool, n: int) -> tuple[int, ...]:
    """Indices k = sum k_j 2^(j-1) over all digit vectors with k_i = 1 (or 0)."""
    if not 1 <= i <= n:
        raise RewriteError(f"x{i} used at level {n}")
    want = 1 if positive else 0
    found = []
    for digits in itertools.product((0, 1), repeat=n):
        # digits[j - 1] is k_j
        if digits[i - 1] == want:
            found.append(sum(d << j for j, d in enumerate(digits)))
    return tuple(sorted(found))


@lru_cache(maxsize=None)
def expansion_set(i: int, positive: bool, n: int) -> frozenset[int]:
    return frozenset(expansion_indices(i, positive, n))


# -- formula injection --------------------------------------------------------


def _nnf(phi: Formula, positive: bool = True) -> Formula:
    """Push negations down to atoms (De Morgan, double negation)."""
    if isinstance(phi, Atom):
        return phi if positive else Neg(phi)
    if isinstance(phi, Neg):
        return _nnf(phi.arg, not positive)
    if isinstance(phi, Implies):
        return _nnf(Or(Neg(phi.left), phi.right), positive)
    if isinstance(phi, And):
        cls = And if positive else Or
        return cls(_nnf(phi.left, positive), _nnf(phi.right, positive))
    if isinstance(phi, Or):
        cls = Or if positive else And
        return cls(_nnf(phi.left, positive), _nnf(phi.right, positive))
    if isinstance(phi, (_Top, _Bottom)):
        true = isinstance(phi, _Top) == positive
        return _Top() if true else _Bottom()
    raise TypeError(f"not a formula: {phi!r}")


def _check_level(phi: Formula, n: int) -> None:
    if n < 1:
        raise RewriteError("rewriting needs a level n >= 1")
    if max_atom(phi) > n:
        raise RewriteError(f"formula mentions x{max_atom(phi)} but level is {n}")


def inject(phi: Formula, n: int, *, max_monomials: int = 200_000) -> RigTerm:
    """Translate ``phi`` into a flat sum of monomials over x_i, x_i^c.

    And becomes the product (distributed over sums), Or the sum, and
    negation is pushed to the atoms first.
    """
    _check_level(phi, n)

    def go(node: Formula) -> list[tuple[Generator, ...]]:
        if isinstance(node, Atom):
            return [(X(node.index),)]
        if isinstance(node, Neg):  # only on atoms after _nnf
            return [(Xc(node.arg.index),)]
        if isinstance(node, _Top):
            return [()]
        if isinstance(node, _Bottom):
            return []
        if isinstance(node, Or):
            out = go(node.left) + go(node.right)
        else:
            left, right = go(node.left), go(node.right)
            if len(left) * len(right) > max_monomials:
                raise TermTooLarge(f"more than {max_monomials} monomials")
            out = [a + b for a in left for b in right]
        if len(out) > max_monomials:
            raise TermTooLarge(f"more than {max_monomials} monomials")
        return out

    return RigTerm.of(Monomial.of(f) for f in go(_nnf(phi)))


# -- reduction ----------------------------------------------------------------


def _validate(t: RigTerm, n: int) -> None:
    for m in t.summands:
        for g in m.factors:
            if g.kind in ("x", "xc") and g.index > n:
                raise RewriteError(f"{g} exceeds level {n}")
            if g.kind == "y" and g.level != n:
                raise RewriteError(f"{g} belongs to level {g.level}, not {n}")


class _Sum:
    """Accumulates reduced summands (1 or single y_k), applying r3, r7, r8, r6."""

    def __init__(self, n: int, trace: Trace):
        self.n = n
        self.trace = trace
        self.ys: set[int] = set()
        self.one = False
        self.steps = 0

    def _emit(self, line: str) -> None:
        self.steps += 1
        if self.trace:
            self.trace(line)

    def add_y(self, k: int) -> None:
        if self.one:
            self._emit(f"1 + y{k} => 1 [rule r7]")
        elif k in self.ys:
            self._emit(f"y{k} + y{k} => y{k} [rule r3]")
        else:
            self.ys.add(k)

    def add_one(self) -> None:
        if self.one:
            self._emit("1 + 1 => 1 [rule r8]")
            return
        self.one = True
        for k in sorted(self.ys):
            self._emit(f"1 + y{k} => 1 [rule r7]")
        self.ys.clear()

    def merge(self, reduced) -> None:
        if reduced is None:
            self.add_one()
        else:
            for k in sorted(reduced):
                self.add_y(k)

    def finish(self):
        """None stands for 1, otherwise the frozenset of y indices."""
        if not self.one and len(self.ys) == 1 << self.n:
            self._emit(f"{render_term(Monomial((Y(k, self.n),)) for k in range(1 << self.n))} => 1 [rule r6]")
            self.one = True
            self.ys.clear()
        return None if self.one else frozenset(self.ys)


def _reduce_monomial(u: tuple[Generator, ...], n: int, trace: Trace):
    """Reduce one monomial by a worklist: collapse first, then expand its greatest x."""
    acc = _Sum(n, trace)
    emit = acc._emit
    stack = [u]
    while stack:
        m = stack.pop()
        ys = [g for g in m if g.kind == "y"]
        dup = next((a for a, b in zip(ys, ys[1:]) if a == b), None)
        if dup is not None:
            rest = list(m)
            rest.remove(dup)
            reduced = tuple(rest)
            emit(f"{_mono_str(m)} => {_mono_str(reduced)} [rule r1]")
            stack.append(reduced)
            continue
        if len(ys) >= 2:
            emit(f"{_mono_str(m)} => 0 [rule r2]")
            continue
        if m and m[0].kind in ("x", "xc"):
            g = m[0]
            rest = m[1:]
            if ys and trace is None:
                # r4/r5 followed at once by r2 on every child but the one
                # matching the y already present, then r1 on that child
                indices = expansion_set(g.index, g.kind == "x", n)
                acc.steps += len(indices) + 1
                if ys[0].index in indices:
                    stack.append(rest)
                continue
            children = [tuple(sorted(rest + (Y(j, n),), reverse=True))
                        for j in expansion_indices(g.index, g.kind == "x", n)]
            rule = "r4" if g.kind == "x" else "r5"
            emit(f"{_mono_str(m)} => {' + '.join(_mono_str(c) for c in children)} [rule {rule}]")
            stack.extend(reversed(children))
            continue
        if not m:
            acc.add_one()
        else:
            acc.add_y(m[0].index)
    return acc.finish()


_reduce_monomial_cached = lru_cache(maxsize=1 << 16)(lambda u, n: _reduce_monomial(u, n, None))


def _mono_str(factors: tuple[Generator, ...]) -> str:
    return "*".join(map(str, factors)) if factors else "1"


def _to_term(reduced, n: int) -> RigTerm:
    if reduced is None:
        return UNIT
    return RigTerm.of(Monomial((Y(k, n),)) for k in reduced)


def reduce(
    t: RigTerm,
    n: int,
    *,
    rng: Optional[random.Random] = None,
    trace: Trace = None,
    check_order: bool = False,
    max_steps: Optional[int] = None,
) -> RigTerm:
    """Rewrite ``t`` at level ``n`` to its normal form.

    The default strategy reduces each monomial on its own (collapse with
    r1/r2 before expanding the greatest x by r4/r5) and then merges the
    results with r3/r7/r8/r6. Passing ``rng`` switches to a single-redex
    engine that picks a random rule kind, then a random instance of it, at
    every step; ``check_order`` (single-redex engine only, with the first redex
    when no ``rng`` is given) asserts the term strictly decreases each step.
    """
    _validate(t, n)
    if rng is not None or check_order:
        return _reduce_stepwise(t, n, rng, trace, check_order, max_steps)
    total = _Sum(n, trace)
    for m in t.summands:
        if trace:
            reduced = _reduce_monomial(m.factors, n, trace)
        else:
            reduced = _reduce_monomial_cached(m.factors, n)
        total.merge(reduced)
    return _to_term(total.finish(), n)


@lru_cache(maxsize=1 << 14)
def _local_redexes(m: tuple[Generator, ...]) -> tuple[tuple, ...]:
    """Rule instances inside one monomial: r1 per duplicated y, r2, r4/r5 per distinct x."""
    found = []
    ys = [g for g in m if g.kind == "y"]
    for a, b in zip(ys, ys[1:]):
        if a == b and ("r1", a) not in found:
            found.append(("r1", a))
    if len(set(ys)) >= 2:
        found.append(("r2", None))
    for fpos, g in enumerate(m):
        if g.kind in ("x", "xc") and (fpos == 0 or m[fpos - 1] != g):
            found.append(("r4" if g.kind == "x" else "r5", g))
    return tuple(found)


class _StepEngine:
    """A term under single-step rewriting, with redexes tracked incrementally."""

    def __init__(self, t: RigTerm, n: int, rng, trace: Trace):
        self.n, self.rng, self.trace = n, rng, trace
        self.mons: dict[int, tuple[Generator, ...]] = {}
        self.active: list[int] = []
        self.where: dict[int, int] = {}
        self.singles: dict[int, list[int]] = {}
        self.ones: list[int] = []
        self.next_id = 0
        for m in t.summands:
            self.add(m.factors)

    def add(self, m: tuple[Generator, ...]) -> None:
        i = self.next_id
        self.next_id += 1
        self.mons[i] = m
        if _local_redexes(m):
            self.where[i] = len(self.active)
            self.active.append(i)
        elif not m:
            self.ones.append(i)
        else:
            self.singles.setdefault(m[0].index, []).append(i)

    def remove(self, i: int) -> tuple[Generator, ...]:
        m = self.mons.pop(i)
        if i in self.where:
            # swap-remove keeps random choice O(1)
            pos = self.where.pop(i)
            last = self.active.pop()
            if last != i:
                self.active[pos] = last
                self.where[last] = pos
        elif not m:
            self.ones.remove(i)
        else:
            bucket = self.singles[m[0].index]
            bucket.remove(i)
            if not bucket:
                del self.singles[m[0].index]
        return m

    def _pick(self, seq):
        return seq[0] if self.rng is None else self.rng.choice(seq)

    def kinds(self) -> list[str]:
        out = ["local"] if self.active else []
        if any(len(b) >= 2 for b in self.singles.values()):
            out.append("r3")
        if self.ones and self.singles:
            out.append("r7")
        if len(self.ones) >= 2:
            out.append("r8")
        if len(self.singles) == 1 << self.n:
            out.append("r6")
        return out

    def step(self, kind: str) -> str:
        n = self.n
        if kind == "local":
            i = self._pick(self.active)
            rule, g = self._pick(_local_redexes(self.mons[i]))
            m = self.remove(i)
            if rule == "r1":
                rest = list(m)
                rest.remove(g)
                new = tuple(rest)
                self.add(new)
                return f"{_mono_str(m)} => {_mono_str(new)} [rule r1]"
            if rule == "r2":
                return f"{_mono_str(m)} => 0 [rule r2]"
            fpos = m.index(g)
            rest = m[:fpos] + m[fpos + 1:]
            children = [tuple(sorted(rest + (Y(j, n),), reverse=True))
                        for j in expansion_indices(g.index, g.kind == "x", n)]
            for c in children:
                self.add(c)
            rhs = " + ".join(_mono_str(c) for c in children)
            return f"{_mono_str(m)} => {rhs} [rule {rule}]"
        if kind == "r3":
            k = self._pick(sorted(k for k, b in self.singles.items() if len(b) >= 2))
            s = _mono_str(self.remove(self.singles[k][-1]))
            return f"{s} + {s} => {s} [rule r3]"
        if kind == "r7":
            k = self._pick(sorted(self.singles))
            s = _mono_str(self.remove(self.singles[k][-1]))
            return f"1 + {s} => 1 [rule r7]"
        if kind == "r8":
            self.remove(self.ones[-1])
            return "1 + 1 => 1 [rule r8]"
        if kind == "r6":
            lhs = " + ".join(_mono_str(self.remove(self.singles[k][-1])) for k in range(1 << n))
            self.add(())
            return f"{lhs} => 1 [rule r6]"
        raise AssertionError(kind)

    def key(self) -> tuple:
        return tuple(sorted((tuple(g.key for g in m) for m in self.mons.values()), reverse=True))

    def result(self) -> RigTerm:
        return RigTerm.of(Monomial(m) for m in self.mons.values())


def _reduce_stepwise(t, n, rng, trace, check_order, max_steps) -> RigTerm:
    engine = _StepEngine(t, n, rng, trace)
    if max_steps is None:
        # each r4/r5 at most doubles-and-halves the y count per factor; generous bound
        width = sum(len(m.factors) + 1 for m in t.summands)
        max_steps = 10 * width * (1 << n) * (n + 1) + 1000
    key = engine.key() if check_order else None
    for _ in range(max_steps):
        kinds = engine.kinds()
        if not kinds:
            return engine.result()
        # pick the rule kind first so expansions do not crowd out contractions
        line = engine.step(engine._pick(kinds))
        if trace:
            trace(line)
        if check_order:
            new_key = engine.key()
            if not new_key < key:
                raise AssertionError(f"step did not decrease the term: {line}")
            key = new_key
    raise RewriteError(f"no normal form within {max_steps} steps")


def normalize(phi: Formula, n: int, *, trace: Trace = None) -> RigTerm:
    """Reduce ``inject(phi, n)`` innermost-first without flattening it.

    Each subformula is reduced to a sum of y's before its parent is formed,
    so products only ever meet two reduced sums: every pair y_j*y_k
    collapses by r1 (j == k) or r2 (j != k).
    """
    _check_level(phi, n)

    def go(node: Formula):
        if isinstance(node, Atom) or isinstance(node, Neg):
            i = node.index if isinstance(node, Atom) else node.arg.index
            positive = isinstance(node, Atom)
            acc = _Sum(n, trace)
            idx = expansion_indices(i, positive, n)
            if trace:
                lit = f"x{i}" if positive else f"x{i}c"
                acc._emit(f"{lit} => {' + '.join(f'y{j}' for j in idx)} [rule {'r4' if positive else 'r5'}]")
            for j in idx:
                acc.add_y(j)
            return acc.finish()
        if isinstance(node, _Top):
            return None
        if isinstance(node, _Bottom):
            return frozenset()
        left, right = go(node.left), go(node.right)
        if isinstance(node, Or):
            acc = _Sum(n, trace)
            acc.merge(left)
            acc.merge(right)
            return acc.finish()
        # product: 1 is the multiplicative unit
        if left is None:
            return right
        if right is None:
            return left
        if trace:
            kept = set()
            for j in sorted(left):
                for k in sorted(right):
                    if j == k:
                        trace(f"y{j}*y{k} => y{j} [rule r1]")
                        kept.add(j)
                    else:
                        trace(f"y{j}*y{k} => 0 [rule r2]")
            return frozenset(kept)
        return left & right

    return _to_term(go(_nnf(phi)), n)


def to_minterms(t: RigTerm, n: int) -> MintermSet:
    """Read a reduced term as a minterm set."""
    if t.is_one():
        return MintermSet.one(n)
    ks = []
    for m in t.summands:
        if len(m.factors) != 1 or m.factors[0].kind != "y":
            raise RewriteError(f"not in normal form: {m}")
        g = m.factors[0]
        if g.level != n:
            raise RewriteError(f"{g} belongs to level {g.level}, not {n}")
        ks.append(g.index)
    if len(set(ks)) != len(ks):
        raise RewriteError("not in normal form: repeated summand")
    return MintermSet.from_indices(n, ks)


def rewrite_normal_form(phi: Formula, n: int, *, trace: Trace = None, flat_budget: int = 20_000) -> RigTerm:
    """Normal form of ``phi`` via the flat route when small, else innermost-first."""
    try:
        t = inject(phi, n, max_monomials=flat_budget)
    except TermTooLarge:
        return normalize(phi, n, trace=trace)
    return reduce(t, n, trace=trace)


def random_term(rng: random.Random, n: int, *, max_summands: int = 4, max_factors: int = 4) -> RigTerm:
    """A random term over x_i, x_i^c, y_k (level n) and 1, for testing strategies."""
    summands = []
    for _ in range(rng.randint(0, max_summands)):
        factors = []
        for _ in range(rng.randint(0, max_factors)):
            r = rng.random()
            if r < 0.35:
                factors.append(X(rng.randint(1, n)))
            elif r < 0.7:
                factors.append(Xc(rng.randint(1, n)))
            elif r < 0.95:
                factors.append(Y(rng.randrange(1 << n), n))
            else:
                factors.append(ONE)
        m = Monomial.of(factors)
        if m is not None:
            summands.append(m)
    return RigTerm.of(summands)
