"""
Tests for integer polynomials, bounded enumeration and relation splitting.
"""

import random

import pytest
import sympy

from app.core.config import get_settings
from app.core.errors import BoundAbortError, NotPrimeError, PreconditionError, UsageError
from app.models.schemas import BoundProfile
from app.modules.int_poly import (
    MINUS_INFINITY,
    IntPoly,
    coarse_count_bound,
    count_bounded,
    enumerate_bounded,
    grlex_key,
    parse_poly,
    split_relations,
)


def to_expr(f: IntPoly, symbols):
    expr = sympy.Integer(0)
    for exps, coeff in f.terms.items():
        term = sympy.Integer(coeff)
        for symbol, e in zip(symbols, exps):
            term *= symbol ** e
        expr += term
    return sympy.expand(expr)


def random_poly(rng: random.Random, nvars: int, terms: int = 4, degree: int = 3) -> IntPoly:
    coeffs = {}
    for _ in range(terms):
        exps = [0] * nvars
        for _ in range(rng.randint(0, degree)):
            exps[rng.randrange(nvars)] += 1
        coeffs[tuple(exps)] = rng.randint(-5, 5)
    return IntPoly(coeffs, nvars)


def test_parse_and_format():
    f = parse_poly("3*x1^2*x2 - 2*x1 + 1")
    assert f.nvars == 2
    assert str(f) == "3*x1^2*x2 - 2*x1 + 1"
    assert f.degree() == 3
    assert f.l1_norm() == 6
    assert f.leading_term() == ((2, 1), 3)


def test_zero_polynomial():
    zero = IntPoly.zero(2)
    assert zero.is_zero()
    assert zero.degree() is MINUS_INFINITY
    assert MINUS_INFINITY < 0
    assert str(zero) == "0"


def test_parse_rejects_fractions():
    with pytest.raises(UsageError):
        parse_poly("1/2*x1")


def test_arithmetic_matches_sympy():
    rng = random.Random(get_settings().DEFAULT_SEED)
    symbols = sympy.symbols("a b c")
    for _ in range(200):
        f, g = random_poly(rng, 3), random_poly(rng, 3)
        assert to_expr(f * g, symbols) == sympy.expand(to_expr(f, symbols) * to_expr(g, symbols))
        assert to_expr(f + g, symbols) == sympy.expand(to_expr(f, symbols) + to_expr(g, symbols))
        assert to_expr(f - g, symbols) == sympy.expand(to_expr(f, symbols) - to_expr(g, symbols))


def test_exact_division():
    rng = random.Random(get_settings().DEFAULT_SEED + 1)
    for _ in range(50):
        f, g = random_poly(rng, 2), random_poly(rng, 2)
        if g.is_zero():
            continue
        assert (f * g).exact_div(g) == f
    with pytest.raises(ArithmeticError):
        parse_poly("x1 + 1").exact_div(parse_poly("x1", nvars=1))
    with pytest.raises(ZeroDivisionError):
        parse_poly("x1").exact_div(IntPoly.zero(1))


def test_views():
    f = parse_poly("x1^2*x2 + 3*x1 + x2")
    assert f.truncate_in(0, 1) == parse_poly("3*x1 + x2")
    parts = f.as_univariate(0)
    assert parts[2] == parse_poly("x2", nvars=2)
    assert parts[0] == parse_poly("x2", nvars=2)
    assert f.degree_in(0) == 2
    assert f.specialize({1: 2}) == parse_poly("2*x1^2 + 3*x1 + 2", nvars=2)
    assert f.specialize({1: 5}, modulus=7) == parse_poly("5*x1^2 + 3*x1 + 5", nvars=2)
    assert f.eval_mod([2, 3], 5) == (12 + 6 + 3) % 5


def test_collect_groups_trailing_variables():
    f = parse_poly("x1*x3 + 2*x2*x3 + x1")
    groups = f.collect(2)
    assert groups[(1,)] == parse_poly("x1 + 2*x2")
    assert groups[(0,)] == parse_poly("x1", nvars=2)


def test_canonical_sign():
    f = parse_poly("-x1^2 + x2")
    assert f.canonical_sign() == parse_poly("x1^2 - x2")
    assert f.canonical_sign().leading_term()[1] > 0


@pytest.mark.parametrize(
    "nvars,k,t,expected",
    [(1, 1, 1, 2), (1, 2, 1, 6), (0, 3, 2, 3), (2, 2, 2, 42)],
)
def test_count_bounded(nvars, k, t, expected):
    assert count_bounded(nvars, BoundProfile(k=k, t=t)) == expected


def test_signed_count_and_coarse_bound():
    profile = BoundProfile(k=2, t=2)
    assert count_bounded(2, profile, signed=True) == 84
    assert count_bounded(2, profile, signed=True) <= coarse_count_bound(2, 2)


@pytest.mark.parametrize("nvars,k,t", [(1, 2, 2), (2, 2, 2), (2, 3, 2), (3, 2, 1), (2, 4, 2)])
def test_enumeration_is_complete_up_to_sign(nvars, k, t):
    profile = BoundProfile(k=k, t=t)
    seen = set()
    for f in enumerate_bounded(nvars, profile):
        assert not f.is_zero()
        assert f.is_bounded(profile)
        exps, coeff = f.leading_term()
        assert coeff > 0
        assert exps == max(f.terms, key=grlex_key)
        assert f not in seen and -f not in seen
        seen.add(f)
    assert len(seen) == count_bounded(nvars, profile)


def test_split_relations_golden():
    relations, others = split_relations([3, 7], 11, BoundProfile(k=2, t=2))
    assert relations == [parse_poly("x1*x2 + 1")]
    assert len(others) == count_bounded(2, BoundProfile(k=2, t=2)) - 1


def test_split_relations_vanish():
    relations, others = split_relations([1, 5], 13, BoundProfile(k=2, t=2))
    assert all(f.eval_mod([1, 5], 13) == 0 for f in relations)
    assert all(f.eval_mod([1, 5], 13) != 0 for f in others)
    assert parse_poly("x2^2 + 1", nvars=2) in relations


def test_split_relations_preconditions():
    profile = BoundProfile(k=2, t=2)
    with pytest.raises(NotPrimeError):
        split_relations([1], 15, profile)
    with pytest.raises(PreconditionError):
        split_relations([13], 13, profile)


def test_enumeration_cap(monkeypatch):
    monkeypatch.setattr(get_settings(), "MAX_ENUMERATION", 10)
    with pytest.raises(BoundAbortError):
        split_relations([1, 2], 13, BoundProfile(k=2, t=2))
