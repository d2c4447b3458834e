"""Acceptance criteria, one test each, at the stated tolerances.

Each test prints a single ``[n] PASS/FAIL`` line; the terminal summary
repeats them under "acceptance criteria".
"""

import random
import time
from importlib.resources import files

from propsemiring.deduction import (
    AtomStatus,
    Theory,
    conjoin,
    consequences,
    entails,
    forced_atoms,
    gamma_set,
    implication,
    is_tautology,
)
from propsemiring.formula import And, Atom, Neg, evaluate, max_atom, parse
from propsemiring.groups import group_theory
from propsemiring.minterm import (
    LeveledElement,
    MintermSet,
    atom_set,
    compile_formula,
    complement,
    embed,
    join,
    meet,
)
from propsemiring.rewrite import random_term, reduce, rewrite_normal_form, to_minterms

from acceptance_log import criterion
from formulas import random_formula


def data(name):
    return files("propsemiring").joinpath("data", name).read_text(encoding="utf-8")


def within(start, seconds):
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f}s, limit {seconds}s"


def truth_table(phi, n):
    return {k for k in range(2 ** n) if evaluate(phi, {i: bool(k >> (i - 1) & 1) for i in range(1, n + 1)})}


def test_criterion_1_suspects_puzzle():
    with criterion(1, "suspects puzzle: clue intersection, forced atoms, consequences"):
        start = time.perf_counter()
        theory = Theory.parse(data("example2.txt"))
        problems = []
        got = list(gamma_set(theory, 4))
        if got != [5, 6, 9, 11, 13]:
            problems.append(f"intersection is {got}, expected [5, 6, 9, 11, 13]")
        forced = forced_atoms(theory)
        if forced.inconsistent or set(forced.statuses.values()) != {AtomStatus.UNDETERMINED}:
            problems.append(f"forced atoms {forced.to_json()}")
        queries = [parse("x1 | x2"), parse("x3 | x4"), parse("~x1 | ~x2 | ~x3")]
        if consequences(theory, queries) != [True, True, True]:
            problems.append("a consequence query failed")
        within(start, 1.0)
        assert not problems, "; ".join(problems)


def test_criterion_2_group_axioms():
    with criterion(2, "order-2 group axioms give {105, 255}, left inverses entailed"):
        start = time.perf_counter()
        theory, query = group_theory(2)
        report = entails(theory, query)
        assert report.level == 8
        assert list(report.gamma_set) == [105, 255]
        assert report.gamma_set.issubset(compile_formula(parse("(x1 | x2) & (x3 | x4)"), 8))
        assert report.verdict
        within(start, 1.0)


def test_criterion_3_parity_puzzle():
    with criterion(3, "parity puzzle: theory entails x2 | x3"):
        start = time.perf_counter()
        report = entails(Theory.parse(data("example1.txt")), parse(data("example1_goal.txt")))
        assert report.verdict
        within(start, 1.0)


def test_criterion_4_hat_puzzle():
    with criterion(4, "hat puzzle induction step entails ~x2 | x4 | x5"):
        start = time.perf_counter()
        theory = Theory.parse(data("example3.txt"))
        assert theory.max_atom() == 5
        assert entails(theory, parse(data("example3_goal.txt"))).verdict
        within(start, 1.0)


def test_criterion_5_oracle_equivalence():
    with criterion(5, "1000 random formulas: rewrite = compile = truth table"):
        start = time.perf_counter()
        rng = random.Random(20261016)
        mismatches = []
        for _ in range(1000):
            phi = random_formula(rng, max_atoms=6, depth=8)
            n = max(1, max_atom(phi))
            semantic = compile_formula(phi, n)
            rewritten = to_minterms(rewrite_normal_form(phi, n), n)
            brute = truth_table(phi, n)
            if not (rewritten == semantic and set(semantic) == brute):
                mismatches.append(phi)
        assert not mismatches, f"{len(mismatches)} mismatches, first {mismatches[0]}"
        within(start, 60.0)


def test_criterion_6_algebraic_properties():
    with criterion(6, "semiring and I-C axioms at n = 1..6, embed injective and functorial"):
        rng = random.Random(6)
        failures = 0
        for n in range(1, 7):
            full = 2 ** (2 ** n)
            zero, one = MintermSet.zero(n), MintermSet.one(n)
            for _ in range(1000):
                a, b, c = (MintermSet(n, rng.randrange(full)) for _ in range(3))
                t = complement(a)
                ok = (
                    join(a, b) == join(b, a)
                    and join(join(a, b), c) == join(a, join(b, c))
                    and join(a, zero) == a
                    and meet(a, b) == meet(b, a)
                    and meet(meet(a, b), c) == meet(a, meet(b, c))
                    and meet(a, one) == a
                    and meet(a, join(b, c)) == join(meet(a, b), meet(a, c))
                    and meet(a, zero) == zero
                    and meet(a, t) == zero
                    and join(a, t) == one
                    and meet(a, a) == a
                    and join(a, a) == a
                )
                failures += not ok
            for _ in range(300):
                a, b = MintermSet(n, rng.randrange(full)), MintermSet(n, rng.randrange(full))
                m = n + rng.randint(0, 3)
                k = m + rng.randint(0, 3)
                if (a != b) and embed(a, m) == embed(b, m):
                    failures += 1
                if embed(embed(a, m), k) != embed(a, k):
                    failures += 1
        assert failures == 0, f"{failures} failures"


def test_criterion_7_deduction_properties():
    with criterion(7, "deduction: implication, inclusion, conjunction, level stability (500 each)"):
        rng = random.Random(7)
        counts = dict.fromkeys(("implication", "inclusion", "conjunction", "level"), 0)
        failures = []
        for _ in range(500):
            alpha = random_formula(rng, max_atoms=5, depth=5)
            beta = random_formula(rng, max_atoms=5, depth=5)
            alphas = [random_formula(rng, max_atoms=5, depth=4) for _ in range(rng.randint(1, 4))]
            verdict = entails(Theory.of(alpha), beta).verdict
            m = max(1, max_atom(alpha), max_atom(beta))
            # independent oracle: no valuation makes alpha true and beta false
            brute = truth_table(alpha, m) <= truth_table(beta, m)
            if verdict != brute or verdict != is_tautology(implication(alpha, beta)):
                failures.append(("implication", alpha, beta))
            counts["implication"] += 1
            if verdict != compile_formula(alpha, m).issubset(compile_formula(beta, m)):
                failures.append(("inclusion", alpha, beta))
            counts["inclusion"] += 1
            theory = Theory.of(*alphas)
            report = entails(theory, beta)
            if report.verdict != entails(Theory.of(conjoin(theory)), beta).verdict:
                failures.append(("conjunction", alphas, beta))
            counts["conjunction"] += 1
            if report.verdict != entails(theory, beta, level=report.level + 4).verdict:
                failures.append(("level", alphas, beta))
            counts["level"] += 1
        assert min(counts.values()) >= 500
        assert not failures, f"{len(failures)} failures, first {failures[0]}"


def test_criterion_8_growing_atom_theories():
    with criterion(8, "theories {x1..xk}, k = 1..10: consistent, shrinking, no contradiction"):
        start = time.perf_counter()
        contradiction = And(Atom(1), Neg(Atom(1)))
        previous = None
        for k in range(1, 11):
            theory = Theory.of(*(Atom(i) for i in range(1, k + 1)))
            report = entails(theory, contradiction)
            assert report.level == k
            assert not report.gamma_set.is_zero()
            assert not report.verdict
            # the meet of A_1..A_k, compared in the direct limit
            meet_k = LeveledElement(gamma_set(theory, k))
            expected = MintermSet.one(k)
            for i in range(1, k + 1):
                expected = expected & atom_set(i, True, k)
            assert meet_k == LeveledElement(expected)
            if previous is not None:
                assert meet_k != previous
                assert embed(meet_k.value, 10).issubset(embed(previous.value, 10))
            previous = meet_k
        within(start, 1.0)


def test_criterion_9_confluence_sampling():
    with criterion(9, "200 random terms at n <= 4: random rule order = deterministic"):
        start = time.perf_counter()
        rng = random.Random(9)
        disagreements = 0
        for case in range(200):
            n = case % 4 + 1
            t = random_term(rng, n)
            expected = reduce(t, n)
            if reduce(t, n, rng=random.Random(rng.random())) != expected:
                disagreements += 1
        assert disagreements == 0
        within(start, 30.0)
