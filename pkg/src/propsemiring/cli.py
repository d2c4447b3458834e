"""Command-line front end.

Exit codes: 0 success / entailed, 1 not entailed (or not equivalent),
2 bad input, 3 atom cap exceeded, 4 rewrite cross-check mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, TextIO

from .deduction import (
    DEFAULT_COUNTEREXAMPLE_CAP,
    Theory,
    conjoin,
    consequences,
    decode_minterm,
    entails,
    forced_atoms,
    gamma_set,
    models,
)
from .formula import Formula, FormulaSyntaxError, SymbolTable, max_atom, parse_theory, parse_with_symbols, render
from .groups import UnsupportedOrder, group_theory
from .minterm import (
    DEFAULT_ATOM_CAP,
    HARD_ATOM_CEILING,
    AtomCapError,
    LeveledElement,
    MintermSet,
    canonicalize,
    compile_formula,
)
from .rewrite import rewrite_normal_form, to_minterms

EXIT_OK = 0
EXIT_NOT_ENTAILED = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4


class CrossCheckFailure(RuntimeError):
    pass


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    max_atoms: int = DEFAULT_ATOM_CAP
    output_format: str = "text"
    check_rewrite: bool = False
    trace_rewrites: bool = False
    counterexample_cap: int = DEFAULT_COUNTEREXAMPLE_CAP

    def __post_init__(self) -> None:
        if not 1 <= self.max_atoms <= HARD_ATOM_CEILING:
            raise AtomCapError(f"--max-atoms must be between 1 and {HARD_ATOM_CEILING}")
        if self.output_format not in ("text", "json"):
            raise InputError(f"unknown format {self.output_format!r}")
        if self.counterexample_cap < 1:
            raise InputError("--cap must be positive")


class Runner:
    def __init__(self, config: RunConfig, out: TextIO, err: TextIO):
        self.config = config
        self.out = out
        self.err = err

    @property
    def json(self) -> bool:
        return self.config.output_format == "json"

    def write(self, text: str = "") -> None:
        print(text, file=self.out)

    def dump(self, data) -> None:
        self.write(json.dumps(data, indent=2))

    def _trace(self) -> Optional[Callable[[str], None]]:
        if not self.config.trace_rewrites:
            return None
        return lambda line: print(line, file=self.err)

    @property
    def checking(self) -> bool:
        return self.config.check_rewrite or self.config.trace_rewrites

    def cross_check(self, phi: Formula, level: int, expected: MintermSet) -> str:
        """Normal form via rewriting; raises CrossCheckFailure if it disagrees."""
        n = max(1, level)
        term = rewrite_normal_form(phi, n, trace=self._trace())
        got = to_minterms(term, n)
        want = compile_formula(phi, n, cap=self.config.max_atoms) if level != n else expected
        if got != want:
            raise CrossCheckFailure(
                f"rewrite normal form {sorted(got)} differs from minterm set {sorted(want)} for {render(phi)}"
            )
        return str(term)

    # -- subcommands -----------------------------------------------------

    def normalize(self, formula: Optional[str], file: Optional[str]) -> int:
        if (formula is None) == (file is None):
            raise InputError("give either a formula or --file")
        if file is not None:
            items, _ = parse_theory(_read(file))
            if not items:
                raise InputError(f"{file} contains no formulas")
            phi = conjoin([f for _, f in items])
        else:
            phi, _ = parse_with_symbols(formula)
        level = max_atom(phi)
        value = compile_formula(phi, level, cap=self.config.max_atoms)
        canon = canonicalize(value)
        rewritten = self.cross_check(phi, level, value) if self.checking else None
        if self.json:
            data = canon.to_json()
            if rewritten is not None:
                data["rewrite"] = rewritten
            self.dump(data)
        else:
            self.write(_show(canon))
            if rewritten is not None:
                self.write(f"rewrite: {rewritten}  (agrees)")
        return EXIT_OK

    def _load_theory(self, path: str) -> tuple[Theory, SymbolTable]:
        items, symbols = parse_theory(_read(path))
        return Theory(tuple(items)), symbols

    def _check_theory(self, theory: Theory, level: int) -> None:
        if not self.checking or not len(theory):
            return
        self.cross_check(conjoin(theory), level, gamma_set(theory, level, cap=self.config.max_atoms))

    def entail(self, theory_file: str, goal_text: str) -> int:
        theory, symbols = self._load_theory(theory_file)
        goal, _ = parse_with_symbols(goal_text, symbols)
        report = entails(
            theory, goal, max_counterexamples=self.config.counterexample_cap, cap=self.config.max_atoms
        )
        self._check_theory(theory, report.level)
        if self.checking:
            self.cross_check(goal, report.level, report.goal_set)
        names = symbols.names
        if self.json:
            self.dump(report.to_json())
        else:
            if report.inconsistent:
                self.write("WARNING: theory is INCONSISTENT (no valuation satisfies it); it entails everything")
            self.write(f"level: {report.level}")
            self.write(f"theory minterms: {_show_set(report.gamma_set)}")
            self.write(f"goal minterms:   {_show_set(report.goal_set)}")
            if report.verdict:
                self.write("entailed")
            else:
                self.write(f"not entailed: {report.counterexample_count} counterexample(s)")
                for k in report.counterexamples:
                    self.write(f"  {_valuation(k, report.level, names)}")
                hidden = report.counterexample_count - len(report.counterexamples)
                if hidden:
                    self.write(f"  ... {hidden} more")
        return EXIT_OK if report.verdict else EXIT_NOT_ENTAILED

    def equiv(self, left: str, right: str) -> int:
        symbols = SymbolTable()
        a, _ = parse_with_symbols(left, symbols)
        b, _ = parse_with_symbols(right, symbols)
        ea = LeveledElement.of(a, cap=self.config.max_atoms)
        eb = LeveledElement.of(b, cap=self.config.max_atoms)
        same = ea == eb
        if self.json:
            self.dump({"equivalent": same, "left": ea.canonical().to_json(), "right": eb.canonical().to_json()})
        else:
            self.write(f"left:  {_show(ea.canonical())}")
            self.write(f"right: {_show(eb.canonical())}")
            self.write("equivalent" if same else "not equivalent")
        return EXIT_OK if same else EXIT_NOT_ENTAILED

    def forced(self, theory_file: str) -> int:
        theory, symbols = self._load_theory(theory_file)
        result = forced_atoms(theory, cap=self.config.max_atoms)
        self._check_theory(theory, result.level)
        names = symbols.names
        if self.json:
            self.dump(result.to_json())
            return EXIT_OK
        if result.inconsistent:
            self.write("*** INCONSISTENT THEORY: no valuation satisfies every formula ***")
            return EXIT_OK
        width = max(len(_atom_name(i, names)) for i in result.statuses)
        for i, status in result.statuses.items():
            self.write(f"{_atom_name(i, names):<{width}}  {status}")
        return EXIT_OK

    def consequences(self, theory_file: str, queries: list[str]) -> int:
        theory, symbols = self._load_theory(theory_file)
        parsed = [parse_with_symbols(q, symbols)[0] for q in queries]
        verdicts = consequences(theory, parsed, cap=self.config.max_atoms)
        if self.json:
            self.dump([{"query": q, "entailed": v} for q, v in zip(queries, verdicts)])
        else:
            for q, v in zip(queries, verdicts):
                self.write(f"{'entailed    ' if v else 'not entailed'}  {q}")
        return EXIT_OK

    def models(self, theory_file: str) -> int:
        theory, symbols = self._load_theory(theory_file)
        total, shown = models(theory, limit=self.config.counterexample_cap, cap=self.config.max_atoms)
        names = symbols.names
        if self.json:
            self.dump({
                "count": total,
                "models": [{_atom_name(i, names): int(v) for i, v in m.items()} for m in shown],
            })
        else:
            self.write(f"{total} model(s)")
            for m in shown:
                self.write("  " + " ".join(f"{_atom_name(i, names)}={int(v)}" for i, v in m.items()))
            if total > len(shown):
                self.write(f"  ... {total - len(shown)} more")
        return EXIT_OK

    def group_demo(self, order: int) -> int:
        theory, query = group_theory(order)
        level = order ** 3
        report = entails(theory, query, level=level, cap=self.config.max_atoms)
        self._check_theory(theory, level)
        if self.json:
            self.dump({"order": order, "intersection": list(report.gamma_set),
                       "query": list(report.goal_set), "verdict": report.verdict})
        else:
            self.write(f"group order {order}: {level} atoms X_ijk (x_i*x_j = x_k) at index i + j*n + k*n^2 + 1")
            self.write(f"G1 & G2 & G3 minterms: {_show_set(report.gamma_set)}")
            self.write(f"left-inverse query holds on {len(report.goal_set)} of {report.goal_set.size} minterms")
            self.write("left inverses exist: " + ("entailed" if report.verdict else "not entailed"))
        return EXIT_OK if report.verdict else EXIT_NOT_ENTAILED


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _show_set(s: MintermSet) -> str:
    return "{" + ", ".join(map(str, s)) + "}"


def _show(s: MintermSet) -> str:
    if s.is_one():
        return "1"
    if s.is_zero():
        return "0"
    return f"n={s.atom_count} {_show_set(s)}"


def _atom_name(i: int, names: dict[int, str]) -> str:
    return names.get(i, f"x{i}")


def _valuation(k: int, level: int, names: dict[int, str]) -> str:
    return " ".join(f"{_atom_name(i, names)}={int(v)}" for i, v in decode_minterm(k, level).items())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-atoms", type=int, default=DEFAULT_ATOM_CAP, metavar="N",
                        help=f"atom cap (default {DEFAULT_ATOM_CAP}, at most {HARD_ATOM_CEILING})")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--check-rewrite", action="store_true",
                        help="also compute normal forms by term rewriting and compare")
    common.add_argument("--trace", action="store_true",
                        help="print every rewrite step to stderr (implies --check-rewrite)")
    common.add_argument("--cap", type=int, default=DEFAULT_COUNTEREXAMPLE_CAP, metavar="K",
                        help="maximum counterexamples / models to list")

    parser = argparse.ArgumentParser(prog="propsemiring", description="Propositional entailment via minterm sets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common], help="print the normal form of a formula")
    p.add_argument("formula", nargs="?")
    p.add_argument("-f", "--file", help="theory file; its formulas are conjoined")

    p = sub.add_parser("entail", parents=[common], help="decide whether a theory entails a goal")
    p.add_argument("theory")
    p.add_argument("goal")

    p = sub.add_parser("equiv", parents=[common], help="compare two formulas as semiring elements")
    p.add_argument("left")
    p.add_argument("right")

    p = sub.add_parser("forced", parents=[common], help="atoms the theory forces true or false")
    p.add_argument("theory")

    p = sub.add_parser("consequences", parents=[common], help="check several queries against a theory")
    p.add_argument("theory")
    p.add_argument("queries", nargs="+")

    p = sub.add_parser("models", parents=[common], help="list satisfying valuations")
    p.add_argument("theory")

    p = sub.add_parser("group-demo", parents=[common], help="left inverses from the group axioms")
    p.add_argument("--order", type=int, default=2)
    return parser


def main(argv: Optional[list[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            max_atoms=args.max_atoms,
            output_format=args.format,
            check_rewrite=args.check_rewrite,
            trace_rewrites=args.trace,
            counterexample_cap=args.cap,
        )
        runner = Runner(config, out, err)
        if args.command == "normalize":
            return runner.normalize(args.formula, args.file)
        if args.command == "entail":
            return runner.entail(args.theory, args.goal)
        if args.command == "equiv":
            return runner.equiv(args.left, args.right)
        if args.command == "forced":
            return runner.forced(args.theory)
        if args.command == "consequences":
            return runner.consequences(args.theory, args.queries)
        if args.command == "models":
            return runner.models(args.theory)
        if args.command == "group-demo":
            return runner.group_demo(args.order)
    except (FormulaSyntaxError, InputError, UnsupportedOrder) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARSE
    except AtomCapError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_CAP
    except CrossCheckFailure as exc:
        print(f"internal error: {exc}", file=err)
        return EXIT_MISMATCH
    raise AssertionError(args.command)


if __name__ == "__main__":
    sys.exit(main())
