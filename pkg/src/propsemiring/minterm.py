"""Minterm index sets: canonical normal forms of the free I-C semiring on N atoms.

An element over atoms x1..xN is the set D of minterm indices k in
[0, 2**N) such that y_k occurs in its normal form sum. Minterm k makes
atom x_i true iff bit (i - 1) of k is set. ``D`` is stored as a Python int
used as a bit vector, so meet/join/complement are single big-int operations.

The empty set is the zero (theta) and the full set is the one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .formula import And, Atom, Formula, Implies, Neg, Or, _Bottom, _Top, max_atom

DEFAULT_ATOM_CAP = 24
HARD_ATOM_CEILING = 30


class AtomCapError(ValueError):
    """The requested level would exceed the configured atom cap."""


class LevelMismatchError(ValueError):
    """Binary operation on minterm sets of different levels."""


def _check_cap(n: int, cap: int) -> None:
    if cap > HARD_ATOM_CEILING:
        raise AtomCapError(f"atom cap {cap} exceeds hard ceiling {HARD_ATOM_CEILING}")
    if n > cap:
        raise AtomCapError(f"{n} atoms requested but the atom cap is {cap} (2**{n} minterms)")


def _full(n: int) -> int:
    return (1 << (1 << n)) - 1


def _repeat(pattern: int, width: int, total: int) -> int:
    """Tile a ``width``-bit pattern until it is ``total`` bits wide (both powers of two)."""
    while width < total:
        pattern |= pattern << width
        width <<= 1
    return pattern


@dataclass(frozen=True, slots=True)
class MintermSet:
    """A set of minterm indices at a fixed level (atom count)."""

    atom_count: int
    bits: int

    def __post_init__(self) -> None:
        if self.atom_count < 0:
            raise ValueError("atom_count must be non-negative")
        if self.bits < 0 or self.bits >> (1 << self.atom_count):
            raise ValueError(f"bits do not fit in 2**{self.atom_count} minterms")

    @classmethod
    def zero(cls, n: int) -> MintermSet:
        return cls(n, 0)

    @classmethod
    def one(cls, n: int) -> MintermSet:
        return cls(n, _full(n))

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> MintermSet:
        size = 1 << n
        bits = 0
        for k in indices:
            if not 0 <= k < size:
                raise ValueError(f"minterm index {k} out of range for {n} atoms")
            bits |= 1 << k
        return cls(n, bits)

    @property
    def size(self) -> int:
        """Number of minterms at this level, 2**atom_count."""
        return 1 << self.atom_count

    def is_zero(self) -> bool:
        return self.bits == 0

    def is_one(self) -> bool:
        return self.bits == _full(self.atom_count)

    def issubset(self, other: MintermSet) -> bool:
        _same_level(self, other)
        return self.bits & ~other.bits == 0

    def __contains__(self, k: int) -> bool:
        return 0 <= k < self.size and bool(self.bits >> k & 1)

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __or__(self, other: MintermSet) -> MintermSet:
        return join(self, other)

    def __and__(self, other: MintermSet) -> MintermSet:
        return meet(self, other)

    def __invert__(self) -> MintermSet:
        return complement(self)

    def __sub__(self, other: MintermSet) -> MintermSet:
        _same_level(self, other)
        return MintermSet(self.atom_count, self.bits & ~other.bits)

    def __repr__(self) -> str:
        return f"MintermSet(n={self.atom_count}, {{{', '.join(map(str, self))}}})"

    def to_json(self) -> dict:
        return {"n": self.atom_count, "minterms": list(self)}

    @classmethod
    def from_json(cls, data: dict) -> MintermSet:
        n = int(data["n"])
        if data.get("top"):
            return cls.one(n)
        return cls.from_indices(n, data["minterms"])


def _same_level(a: MintermSet, b: MintermSet) -> None:
    if a.atom_count != b.atom_count:
        raise LevelMismatchError(
            f"level mismatch: {a.atom_count} vs {b.atom_count}; embed to a common level first"
        )


def atom_set(i: int, positive: bool = True, n: int = 1, *, cap: int = DEFAULT_ATOM_CAP) -> MintermSet:
    """Minterms in which x_i is true (``positive``) or false.

    >>> sorted(atom_set(1, True, 2))
    [1, 3]
    """
    if not 1 <= i <= n:
        raise ValueError(f"atom x{i} outside 1..{n}")
    _check_cap(n, cap)
    half = 1 << (i - 1)
    block = ((1 << half) - 1) << half  # half zeros then half ones
    if not positive:
        block = (1 << half) - 1
    return MintermSet(n, _repeat(block, 2 * half, 1 << n))


def join(a: MintermSet, b: MintermSet) -> MintermSet:
    _same_level(a, b)
    return MintermSet(a.atom_count, a.bits | b.bits)


def meet(a: MintermSet, b: MintermSet) -> MintermSet:
    _same_level(a, b)
    return MintermSet(a.atom_count, a.bits & b.bits)


def complement(a: MintermSet) -> MintermSet:
    return MintermSet(a.atom_count, a.bits ^ _full(a.atom_count))


def compile_formula(phi: Formula, n: int | None = None, *, cap: int = DEFAULT_ATOM_CAP) -> MintermSet:
    """The minterm set of ``phi`` over atoms x1..xn (default n = max_atom(phi))."""
    needed = max_atom(phi)
    if n is None:
        n = needed
    if n < needed:
        raise ValueError(f"formula mentions x{needed} but level is {n}")
    _check_cap(n, cap)
    full = _full(n)
    atom_cache: dict[int, int] = {}

    def go(node: Formula) -> int:
        if isinstance(node, Atom):
            if node.index not in atom_cache:
                atom_cache[node.index] = atom_set(node.index, True, n, cap=cap).bits
            return atom_cache[node.index]
        if isinstance(node, Neg):
            return go(node.arg) ^ full
        if isinstance(node, And):
            return go(node.left) & go(node.right)
        if isinstance(node, Or):
            return go(node.left) | go(node.right)
        if isinstance(node, Implies):
            return (go(node.left) ^ full) | go(node.right)
        if isinstance(node, _Top):
            return full
        if isinstance(node, _Bottom):
            return 0
        raise TypeError(f"not a formula: {node!r}")

    return MintermSet(n, go(phi))


def embed(a: MintermSet, m: int, *, cap: int = DEFAULT_ATOM_CAP) -> MintermSet:
    """Image of ``a`` at level ``m``: bit l is set iff bit (l mod 2**N) is set in ``a``."""
    if m < a.atom_count:
        raise ValueError(f"cannot embed level {a.atom_count} into smaller level {m}")
    _check_cap(m, cap)
    return MintermSet(m, _repeat(a.bits, a.size, 1 << m))


def canonicalize(a: MintermSet) -> MintermSet:
    """Smallest-level set that embeds to ``a`` (halve while both halves agree)."""
    n, bits = a.atom_count, a.bits
    while n > 0:
        half = 1 << (n - 1)
        low = bits & ((1 << half) - 1)
        if bits >> half != low:
            break
        n, bits = n - 1, low
    return MintermSet(n, bits)


def permute_minterms(a: MintermSet, perm: Sequence[int]) -> MintermSet:
    """Move minterm k to ``perm[k]``; ``perm`` must be a bijection on 0..2**N-1."""
    size = a.size
    if len(perm) != size or sorted(perm) != list(range(size)):
        raise ValueError(f"not a permutation of 0..{size - 1}")
    bits = 0
    for k in a:
        bits |= 1 << perm[k]
    return MintermSet(a.atom_count, bits)


@dataclass(frozen=True, slots=True, eq=False)
class LeveledElement:
    """An element (value, level) of the direct limit over all levels.

    Equality and hashing follow the direct-limit equivalence: two elements
    are equal iff they coincide after embedding both to a common level.
    """

    value: MintermSet

    @property
    def level(self) -> int:
        return self.value.atom_count

    @classmethod
    def of(cls, phi: Formula, level: int | None = None, *, cap: int = DEFAULT_ATOM_CAP) -> LeveledElement:
        if level is None:
            level = max(1, max_atom(phi))
        return cls(compile_formula(phi, level, cap=cap))

    def canonical(self) -> MintermSet:
        return canonicalize(self.value)

    def at(self, m: int) -> MintermSet:
        return embed(self.value, m, cap=HARD_ATOM_CEILING)

    def _lift(self, other: LeveledElement) -> tuple[MintermSet, MintermSet]:
        k = max(self.level, other.level)
        return self.at(k), other.at(k)

    def __or__(self, other: LeveledElement) -> LeveledElement:
        a, b = self._lift(other)
        return LeveledElement(a | b)

    def __and__(self, other: LeveledElement) -> LeveledElement:
        a, b = self._lift(other)
        return LeveledElement(a & b)

    def __invert__(self) -> LeveledElement:
        return LeveledElement(~self.value)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LeveledElement):
            return NotImplemented
        return equals(self, other)

    def __hash__(self) -> int:
        return hash(self.canonical())


def equals(a: LeveledElement, b: LeveledElement) -> bool:
    """Direct-limit equality: equal after embedding both to the larger level."""
    k = max(a.level, b.level)
    return a.at(k) == b.at(k)
