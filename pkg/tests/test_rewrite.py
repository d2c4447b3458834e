import random

import pytest
from hypothesis import given, settings, strategies as st

from propsemiring.formula import Atom, Neg, max_atom, parse
from propsemiring.minterm import complement, compile_formula
from propsemiring.rewrite import (
    ONE,
    ZERO,
    Monomial,
    RewriteError,
    RigTerm,
    TermTooLarge,
    X,
    Xc,
    Y,
    expansion_indices,
    generator_order,
    inject,
    normalize,
    random_term,
    reduce,
    rewrite_normal_form,
    to_minterms,
)

from formulas import formulas

EXAMPLE2 = [
    "~(~x1 & ~x2) | ~x3 & ~x4",
    "~(~x3 & ~x4) | ~x1 & ~x2",
    "~(x1 & x2) | (x3 | x4) & ~(x3 & x4)",
    "~(x2 & x3) | x1 & x4 | ~x1 & ~x4",
    "x1 | x2 | x3 | x4",
]


def ys(n, *ks):
    return RigTerm.of(Monomial((Y(k, n),)) for k in ks)


def nf(phi, n):
    return reduce(inject(phi, n), n)


# -- generators and order -----------------------------------------------------


@pytest.mark.parametrize(
    "a, b, sign",
    [
        (X(1), Xc(1), 1),
        (Y(0, 3), Y(1, 3), 1),
        (X(2), X(5), 1),
        (X(5), X(2), -1),
        (Xc(3), Y(0, 2), 1),
        (Y(3, 2), ONE, 1),
        (ONE, ZERO, 1),
        (X(4), X(4), 0),
    ],
)
def test_generator_order(a, b, sign):
    assert generator_order(a, b) == sign
    assert generator_order(b, a) == -sign


def test_generator_order_chain_matches_display():
    n = 3
    chain = [X(1), X(2), X(3), Xc(1), Xc(2), Xc(3)] + [Y(k, n) for k in range(8)]
    assert sorted(chain, reverse=True) == chain


def test_y_levels_do_not_mix():
    with pytest.raises(RewriteError):
        generator_order(Y(0, 1), Y(0, 2))
    with pytest.raises(ValueError):
        Y(4, 2)


def test_monomial_order_prefix_is_smaller():
    short = Monomial.of([X(1)])
    longer = Monomial.of([X(1), X(2)])
    assert short < longer
    # not a prefix: lexicographic on the sorted factor sequences
    assert Monomial.of([X(1), Xc(2)]) < Monomial.of([X(1), X(3)])
    assert Monomial.of([X(2), X(1)]).factors == (X(1), X(2))
    assert Monomial.of([X(1), ZERO]) is None
    assert Monomial.of([ONE, ONE]).is_one()


# -- inject -----------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, expected",
    [
        ("x1 & x2", "x1*x2"),
        ("~x1", "x1c"),
        ("~(x1 & x2)", "x1c + x2c"),
        ("x1 | 0", "x1"),
        ("1", "1"),
        ("0", "0"),
        ("x1 -> x2", "x2 + x1c"),
        ("(x1 | x2) & x3", "x1*x3 + x2*x3"),
    ],
)
def test_inject(text, expected):
    assert str(inject(parse(text), 3)) == expected


def test_inject_de_morgan_agrees_with_complement():
    phi = parse("x1 & x2")
    assert to_minterms(nf(Neg(phi), 2), 2) == complement(compile_formula(phi, 2))


def test_inject_budget_and_levels():
    wide = parse(" & ".join(f"(x{i} | ~x{i + 1})" for i in range(1, 21)))
    with pytest.raises(TermTooLarge):
        inject(wide, 21, max_monomials=1000)
    with pytest.raises(RewriteError):
        inject(parse("x3"), 2)


# -- reduce -----------------------------------------------------------------------


def test_expansion_indices_follow_digit_encoding():
    assert expansion_indices(1, True, 1) == (1,)
    assert expansion_indices(1, True, 2) == (1, 3)
    assert expansion_indices(2, False, 2) == (0, 1)
    assert expansion_indices(3, True, 3) == (4, 5, 6, 7)


@pytest.mark.parametrize(
    "text, n, expected",
    [
        ("x1", 1, "y1"),
        ("x1 | ~x1", 1, "1"),
        ("x1 & ~x1", 1, "0"),
        ("x2", 2, "y2 + y3"),
        ("x1 & x2 | 1", 2, "1"),
        ("~x1 & ~x2 & ~x3", 3, "y0"),
    ],
)
def test_reduce_examples(text, n, expected):
    assert str(nf(parse(text), n)) == expected


def test_reduce_example2_conjunction():
    phi = parse(" & ".join(f"({f})" for f in EXAMPLE2))
    got = nf(phi, 4)
    # the rewrite route and the minterm route agree
    assert to_minterms(got, 4) == compile_formula(phi, 4)
    assert str(got) == "y5 + y6 + y9 + y10 + y11 + y13"


def test_reduce_raw_terms_with_y_generators():
    n = 2
    t = RigTerm.of([Monomial.of([Y(1, n), Y(1, n)]), Monomial.of([Y(1, n), Y(2, n)]),
                    Monomial.of([Y(3, n)]), Monomial.of([Y(3, n)])])
    assert reduce(t, n) == ys(n, 1, 3)
    full = ys(n, 0, 1, 2, 3)
    assert reduce(full, n).is_one()
    assert reduce(RigTerm.of([Monomial(), Monomial(), Monomial.of([Y(0, n)])]), n).is_one()


def test_reduce_rejects_out_of_level_generators():
    with pytest.raises(RewriteError):
        reduce(inject(parse("x3"), 3), 2)
    with pytest.raises(RewriteError):
        reduce(ys(3, 1), 2)


@pytest.mark.parametrize(
    "term, n, expected",
    [
        (ys(4, 5, 6), 4, [5, 6]),
        (RigTerm((Monomial(),)), 3, list(range(8))),
        (RigTerm(), 2, []),
    ],
)
def test_to_minterms(term, n, expected):
    assert list(to_minterms(term, n)) == expected


def test_to_minterms_rejects_unreduced():
    with pytest.raises(RewriteError):
        to_minterms(inject(parse("x1"), 1), 1)
    with pytest.raises(RewriteError):
        to_minterms(RigTerm.of([Monomial.of([Y(1, 2), Y(2, 2)])]), 2)


def _is_normal(t: RigTerm, n: int) -> bool:
    if t.is_zero() or t.is_one():
        return True
    ks = []
    for m in t.summands:
        if len(m.factors) != 1 or m.factors[0].kind != "y":
            return False
        ks.append(m.factors[0].index)
    return len(set(ks)) == len(ks) < 2 ** n


@settings(max_examples=300)
@given(formulas(), st.integers(0, 2))
def test_rewrite_agrees_with_compile(phi, extra):
    n = max(1, max_atom(phi)) + extra
    flat = nf(phi, n)
    assert _is_normal(flat, n)
    assert to_minterms(flat, n) == compile_formula(phi, n)
    assert normalize(phi, n) == flat


@settings(max_examples=100)
@given(st.integers(1, 4), st.integers(0, 2 ** 32))
def test_normal_forms_are_fixed_points(n, seed):
    t = reduce(random_term(random.Random(seed), n), n)
    assert _is_normal(t, n)
    assert reduce(t, n) == t
    assert reduce(t, n, rng=random.Random(seed)) == t


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2 ** 32))
def test_every_step_strictly_decreases_the_term(n, seed):
    t = random_term(random.Random(seed), n, max_summands=3, max_factors=3)
    # raises if some rule application fails to decrease the term order
    got = reduce(t, n, rng=random.Random(seed + 1), check_order=True)
    assert got == reduce(t, n)


def test_step_budget_is_enforced():
    t = inject(parse("x1 & x2 & x3"), 3)
    with pytest.raises(RewriteError, match="no normal form"):
        reduce(t, 3, rng=random.Random(0), max_steps=3)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32))
def test_random_strategies_agree(n, seed):
    t = random_term(random.Random(seed), n)
    expected = reduce(t, n)
    for k in range(3):
        assert reduce(t, n, rng=random.Random(seed * 7 + k)) == expected


def test_trace_lines():
    lines = []
    reduce(inject(parse("x1 | ~x1"), 1), 1, trace=lines.append)
    assert lines == [
        "x1 => y1 [rule r4]",
        "x1c => y0 [rule r5]",
        "y0 + y1 => 1 [rule r6]",
    ]
    lines.clear()
    reduce(inject(parse("x1 & x1 & ~x2"), 2), 2, trace=lines.append)
    assert lines[0] == "x1*x1*x2c => x1*x2c*y1 + x1*x2c*y3 [rule r4]"
    assert "x2c*y1*y1 => x2c*y1 [rule r1]" in lines
    assert "x2c*y1*y3 => 0 [rule r2]" in lines
    assert all(line.endswith("]") and " => " in line for line in lines)


def test_stepwise_trace_names_every_rule():
    rules = set()
    rng = random.Random(5)
    for _ in range(200):
        t = random_term(rng, 2)
        lines = []
        reduce(t, 2, rng=rng, trace=lines.append)
        rules.update(line.rsplit("[rule ", 1)[1].rstrip("]") for line in lines)
    assert rules == {f"r{k}" for k in range(1, 9)}


def test_normalize_trace_and_large_theories():
    lines = []
    got = normalize(parse("x1 & ~x1"), 1, trace=lines.append)
    assert got.is_zero()
    assert lines == ["x1 => y1 [rule r4]", "x1c => y0 [rule r5]", "y1*y0 => 0 [rule r2]"]
    # far too many monomials to flatten, fine innermost-first
    wide = parse(" & ".join(f"(x{i} | ~x{i + 1})" for i in range(1, 11)))
    assert to_minterms(rewrite_normal_form(wide, 11, flat_budget=100), 11) == compile_formula(wide, 11)


def test_x_and_complement_generators_need_positive_index():
    with pytest.raises(ValueError):
        X(0)
    assert str(Xc(3)) == "x3c"
    assert str(Monomial()) == "1"
    assert str(RigTerm()) == "0"
    assert Atom(1) is not None
