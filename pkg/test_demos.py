"""
Tests for incidence lattices, sparse squares and transfer reports.
"""

import random
from fractions import Fraction

import pytest
import sympy

from app.core.config import get_settings
from app.core.errors import BoundAbortError, PreconditionError, VerificationError
from app.modules.domains import IntegerRing, PrimeField
from app.modules.int_poly import IntPoly, parse_poly
from app.modules.demos import (
    PointLineConfig,
    _check_sizes,
    count_incidences,
    doubling_constant,
    inverse_sumset,
    lattice_radius,
    lattice_report,
    productset,
    sharpness_lattice,
    sparse_square_terms,
    sumset,
    transfer_incidences,
    transfer_report,
)

LARGE_PRIME = int(sympy.nextprime(2 ** 190))


@pytest.mark.parametrize("n,r,incidences", [(8, 1, 1), (64, 2, 16), (512, 4, 256)])
def test_lattice_incidences(n, r, incidences):
    report = lattice_report(n)
    assert report.r == r == lattice_radius(n)
    assert report.incidences == report.expected == incidences
    assert report.points == 2 * r ** 3
    assert report.lines == r ** 3


def test_lattice_needs_room():
    with pytest.raises(PreconditionError):
        sharpness_lattice(7)


def test_incidence_edge_cases():
    ZZ = IntegerRing()
    assert count_incidences(PointLineConfig(), ZZ) == 0
    single = PointLineConfig(points=[(1, 2)], lines=[(1, -2, 0)])
    assert count_incidences(single, ZZ) == 1


def test_normalize_drops_proportional_lines():
    fp = PrimeField(7)
    config = PointLineConfig(points=[(1, 1)], lines=[(2, 4, 1), (1, 2, 4)])
    assert len(config.normalized(fp).lines) == 1
    with pytest.raises(PreconditionError):
        PointLineConfig(lines=[(0, 0, 0)]).normalized(fp)


@pytest.mark.parametrize(
    "text,terms,square_terms",
    [("x1^2 + x1 + 1", 3, 5), ("x1^3 + x1 + 1", 3, 6), ("x1^4 - 1", 2, 3)],
)
def test_sparse_square_golden(text, terms, square_terms):
    count = sparse_square_terms(parse_poly(text))
    assert (count.terms, count.square_terms) == (terms, square_terms)


def test_sparse_square_matches_sympy():
    rng = random.Random(get_settings().DEFAULT_SEED)
    x = sympy.Symbol("x")
    for _ in range(100):
        f = IntPoly({(e,): rng.choice([-2, -1, 1, 2]) for e in rng.sample(range(30), rng.randint(1, 6))}, 1)
        expr = sum(c * x ** e[0] for e, c in f.terms.items())
        expected = len(sympy.Poly(sympy.expand(expr ** 2), x).terms())
        assert sparse_square_terms(f).square_terms == expected


def test_set_sizes_mod_p():
    fp = PrimeField(11)
    assert sumset([3, 7], fp) == 3
    assert productset([3, 7], fp) == 3
    assert inverse_sumset([3, 7], fp) == 3
    assert doubling_constant([3, 7], fp) == Fraction(3, 2)
    with pytest.raises(PreconditionError):
        doubling_constant([], fp)


def test_sumproduct_transfer_keeps_sizes():
    report = transfer_report([3, 7], LARGE_PRIME)
    assert report.sizes_fp == {"A": 2, "A+A": 3, "A*A": 3}
    assert report.sizes_tower == report.sizes_fp
    assert report.equal
    assert report.tower_degree == 1
    assert report.doubling == "3/2"


def test_inverse_transfer_on_closed_pair():
    inverse = pow(3, -1, LARGE_PRIME)
    report = transfer_report([3, inverse], LARGE_PRIME, mode="inverse")
    assert report.profile.k == 4 and report.profile.t == 3
    assert report.sizes_fp == {"A": 2, "A+A": 3, "A*A": 3, "1/A+1/A": 3}
    assert report.sizes_tower == report.sizes_fp
    assert report.equal
    assert report.tower_degree == 1
    assert report.points == ["3", "1/3"]


def test_inverse_transfer_limits_the_lift():
    with pytest.raises(BoundAbortError) as e:
        transfer_report([3, 7], 10007, mode="inverse")
    assert e.value.details["lifted"] == 4


def test_polynomial_image_transfer():
    f = parse_poly("x1^2")
    report = transfer_report([3, 7], LARGE_PRIME, mode="polynomial-image", f=f)
    assert report.mode == "polynomial-image"
    assert report.profile.k == 4 and report.profile.t == 2
    assert report.sizes_fp == {"A": 2, "A+A": 3, "A*A": 3, "f(A)+f(A)": 3}
    assert report.sizes_tower == report.sizes_fp
    assert report.relations[-1] == "f = x1^2"
    short = transfer_report([3, 7], LARGE_PRIME, mode="polynomial", f=f)
    assert short.mode == "polynomial-image"


def test_incidence_transfer():
    config = PointLineConfig(
        points=[(0, 0), (0, 1), (1, 0), (1, 1)],
        lines=[(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 1, 1)],
    )
    report = transfer_incidences(config, 11)
    assert report.values == [0, 1]
    assert report.sizes_fp == {"points": 4, "lines": 4, "incidences": 5}
    assert report.sizes_tower == report.sizes_fp
    assert report.equal
    assert report.tower_degree == 1


def test_transfer_sizes_must_match():
    with pytest.raises(VerificationError):
        _check_sizes("sumproduct", {"A": 2, "A+A": 3}, {"A": 2, "A+A": 2})


def test_transfer_rejects_bad_input():
    with pytest.raises(PreconditionError):
        transfer_report([0, 3], LARGE_PRIME, mode="inverse")
    with pytest.raises(PreconditionError):
        transfer_report([3, 7], LARGE_PRIME, mode="cubic")
    with pytest.raises(PreconditionError):
        transfer_report([3, 7], LARGE_PRIME, mode="polynomial-image")
