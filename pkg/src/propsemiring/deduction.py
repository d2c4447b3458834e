"""Entailment over finite theories, decided by inclusion of minterm sets.

A theory entails a goal iff the meet of the theory's minterm sets is
contained in the goal's minterm set, at any level covering every atom
involved. The empty theory has the full set as its meet, so it entails
exactly the tautologies. An inconsistent theory (empty meet) entails
everything and is flagged as such.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formula import And, Formula, Neg, Or, max_atom, parse_theory, SymbolTable
from .minterm import DEFAULT_ATOM_CAP, MintermSet, atom_set, compile_formula

DEFAULT_COUNTEREXAMPLE_CAP = 16


@dataclass(frozen=True)
class Theory:
    """An ordered, finite list of named formulas."""

    items: tuple[tuple[str, Formula], ...] = ()

    def __post_init__(self) -> None:
        names = [name for name, _ in self.items]
        if len(set(names)) != len(names):
            raise ValueError("formula names in a theory must be unique")

    @classmethod
    def of(cls, *formulas: Formula) -> Theory:
        return cls(tuple((f"alpha{i}", phi) for i, phi in enumerate(formulas, start=1)))

    @classmethod
    def parse(cls, text: str, symbols: SymbolTable | None = None) -> Theory:
        items, _ = parse_theory(text, symbols)
        return cls(tuple(items))

    @property
    def formulas(self) -> list[Formula]:
        return [phi for _, phi in self.items]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.formulas)

    def extend(self, phi: Formula, name: str | None = None) -> Theory:
        name = name or f"alpha{len(self.items) + 1}"
        return Theory(self.items + ((name, phi),))

    def max_atom(self) -> int:
        return max((max_atom(phi) for phi in self.formulas), default=0)


def _level(theory: Theory, *others: Formula) -> int:
    return max([1, theory.max_atom()] + [max_atom(phi) for phi in others])


def gamma_set(theory: Theory, level: int, *, cap: int = DEFAULT_ATOM_CAP) -> MintermSet:
    """Meet of the minterm sets of all formulas in ``theory`` at ``level``."""
    acc = MintermSet.one(level)
    for phi in theory.formulas:
        acc = acc & compile_formula(phi, level, cap=cap)
    return acc


@dataclass(frozen=True)
class EntailmentReport:
    verdict: bool
    level: int
    gamma_set: MintermSet
    goal_set: MintermSet
    counterexamples: tuple[int, ...] = ()
    counterexample_count: int = 0
    inconsistent: bool = False

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "level": self.level,
            "gamma": list(self.gamma_set),
            "goal": list(self.goal_set),
            "counterexamples": list(self.counterexamples),
            "counterexample_count": self.counterexample_count,
            "inconsistent": self.inconsistent,
        }

    @classmethod
    def from_json(cls, data: dict) -> EntailmentReport:
        level = int(data["level"])
        return cls(
            verdict=bool(data["verdict"]),
            level=level,
            gamma_set=MintermSet.from_indices(level, data["gamma"]),
            goal_set=MintermSet.from_indices(level, data["goal"]),
            counterexamples=tuple(data["counterexamples"]),
            counterexample_count=int(data["counterexample_count"]),
            inconsistent=bool(data["inconsistent"]),
        )


def _report(gamma: MintermSet, goal: MintermSet, max_counterexamples: int) -> EntailmentReport:
    missing = gamma - goal
    count = len(missing)
    shown = []
    for k in missing:
        if len(shown) >= max_counterexamples:
            break
        shown.append(k)
    return EntailmentReport(
        verdict=count == 0,
        level=gamma.atom_count,
        gamma_set=gamma,
        goal_set=goal,
        counterexamples=tuple(shown),
        counterexample_count=count,
        inconsistent=gamma.is_zero(),
    )


def entails(
    theory: Theory,
    goal: Formula,
    *,
    level: int | None = None,
    max_counterexamples: int = DEFAULT_COUNTEREXAMPLE_CAP,
    cap: int = DEFAULT_ATOM_CAP,
) -> EntailmentReport:
    """Decide whether ``theory`` entails ``goal``.

    ``level`` defaults to the largest atom index in the theory and goal
    (at least 1); any larger level gives the same verdict.
    """
    needed = _level(theory, goal)
    level = needed if level is None else level
    if level < needed:
        raise ValueError(f"level {level} is below the largest atom index {needed}")
    gamma = gamma_set(theory, level, cap=cap)
    goal_set = compile_formula(goal, level, cap=cap)
    return _report(gamma, goal_set, max_counterexamples)


def implication(alpha: Formula, beta: Formula) -> Formula:
    """``~alpha | beta``."""
    return Or(Neg(alpha), beta)


def conjoin(theory: Theory | Sequence[Formula]) -> Formula:
    """Left-fold ``&`` over the formulas of a non-empty theory."""
    formulas = theory.formulas if isinstance(theory, Theory) else list(theory)
    if not formulas:
        raise ValueError("cannot conjoin an empty theory")
    acc = formulas[0]
    for phi in formulas[1:]:
        acc = And(acc, phi)
    return acc


def is_tautology(phi: Formula, *, cap: int = DEFAULT_ATOM_CAP) -> bool:
    return compile_formula(phi, max(1, max_atom(phi)), cap=cap).is_one()


class AtomStatus(enum.Enum):
    FORCED_TRUE = "ForcedTrue"
    FORCED_FALSE = "ForcedFalse"
    UNDETERMINED = "Undetermined"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ForcedAtoms:
    """Per-atom status under a theory. ``statuses`` is empty when inconsistent."""

    level: int
    inconsistent: bool
    statuses: dict[int, AtomStatus] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "inconsistent": self.inconsistent,
            "atoms": {f"x{i}": str(s) for i, s in self.statuses.items()},
        }


def forced_atoms(theory: Theory, *, cap: int = DEFAULT_ATOM_CAP) -> ForcedAtoms:
    """Which atoms the theory pins to true or false."""
    level = _level(theory)
    gamma = gamma_set(theory, level, cap=cap)
    if gamma.is_zero():
        return ForcedAtoms(level, True)
    statuses = {}
    for i in range(1, level + 1):
        if gamma.issubset(atom_set(i, True, level, cap=cap)):
            statuses[i] = AtomStatus.FORCED_TRUE
        elif gamma.issubset(atom_set(i, False, level, cap=cap)):
            statuses[i] = AtomStatus.FORCED_FALSE
        else:
            statuses[i] = AtomStatus.UNDETERMINED
    return ForcedAtoms(level, False, statuses)


def consequences(theory: Theory, queries: Iterable[Formula], *, cap: int = DEFAULT_ATOM_CAP) -> list[bool]:
    """Entailment verdict for each query, sharing one meet of the theory."""
    queries = list(queries)
    level = _level(theory, *queries)
    gamma = gamma_set(theory, level, cap=cap)
    return [gamma.issubset(compile_formula(q, level, cap=cap)) for q in queries]


def models(theory: Theory, *, limit: int | None = None, cap: int = DEFAULT_ATOM_CAP) -> tuple[int, list[dict[int, bool]]]:
    """Total number of satisfying valuations and up to ``limit`` of them."""
    level = _level(theory)
    gamma = gamma_set(theory, level, cap=cap)
    out = []
    for k in gamma:
        if limit is not None and len(out) >= limit:
            break
        out.append(decode_minterm(k, level))
    return len(gamma), out


def decode_minterm(k: int, level: int) -> dict[int, bool]:
    """Valuation of x1..x_level encoded by minterm ``k``."""
    return {i: bool(k >> (i - 1) & 1) for i in range(1, level + 1)}
