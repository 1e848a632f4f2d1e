"""
Tests for Sylvester resultants, subresultant gcds and multi-polynomial elimination.
"""

import random
from fractions import Fraction

import pytest
import sympy

from app.core.config import get_settings
from app.core.errors import PreconditionError
from app.modules.domains import ExtensionField, IntegerRing, PolynomialRing, PrimeField, RationalField
from app.modules.int_poly import IntPoly, parse_poly
from app.modules.resultants import (
    DomainPoly,
    elimination_pair,
    euclid_gcd,
    extended_gcd,
    gcd_many,
    gcd_subresultant,
    multi_resultant,
    pseudo_divmod,
    to_domain_poly,
    resultant,
    subresultants,
    sylvester,
)

X = sympy.Symbol("x")
ZZ = IntegerRing()
QQ = RationalField()


def random_coeffs(rng: random.Random, degree: int, bound: int = 9):
    coeffs = [rng.randint(-bound, bound) for _ in range(degree)]
    return coeffs + [rng.choice([-3, -2, -1, 1, 2, 3])]


def as_expr(coeffs):
    return sum(c * X ** i for i, c in enumerate(coeffs))


def extension_fields(q: int):
    return [ExtensionField(q, degree=d) for d in (1, 2, 3)]


def common_root(polys, q: int) -> bool:
    """Some z in F_q, F_q^2 or F_q^3 kills every polynomial (degrees <= 3)."""
    for field in extension_fields(q):
        lifted = [p.map(field.from_int, field) for p in polys]
        for z in field.elements():
            if all(field.is_zero(p.evaluate(z)) for p in lifted):
                return True
    return False


def test_resultant_matches_sympy():
    rng = random.Random(get_settings().DEFAULT_SEED)
    for _ in range(150):
        f = random_coeffs(rng, rng.randint(1, 5))
        g = random_coeffs(rng, rng.randint(1, 5))
        F, G = DomainPoly.from_ints(f, ZZ), DomainPoly.from_ints(g, ZZ)
        assert resultant(F, G) == sympy.resultant(as_expr(f), as_expr(g), X)
        size = len(f) - 1 + len(g) - 1
        matrix = sylvester(F, G)
        assert len(matrix) == size and all(len(row) == size for row in matrix)


def test_resultant_vanishes_iff_common_root_over_closure():
    rng = random.Random(get_settings().DEFAULT_SEED + 1)
    zero_seen = nonzero_seen = 0
    for _ in range(200):
        q = rng.choice([2, 3, 5, 7])
        field = PrimeField(q)
        f = [rng.randrange(q) for _ in range(rng.randint(1, 3))] + [1]
        g = [rng.randrange(q) for _ in range(rng.randint(1, 3))] + [1]
        if rng.random() < 0.4:
            g = f[:]
            g[0] = (g[0] + rng.randrange(q)) % q
        F, G = DomainPoly.from_ints(f, field), DomainPoly.from_ints(g, field)
        vanishes = field.is_zero(resultant(F, G))
        assert vanishes == common_root([F, G], q)
        zero_seen += vanishes
        nonzero_seen += not vanishes
    assert zero_seen and nonzero_seen


def test_gcd_subresultant_matches_euclid_and_sympy():
    rng = random.Random(get_settings().DEFAULT_SEED + 2)
    for _ in range(200):
        h = random_coeffs(rng, rng.randint(1, 3), bound=4)
        a = random_coeffs(rng, rng.randint(0, 3), bound=4)
        b = random_coeffs(rng, rng.randint(0, 3), bound=4)
        fe, ge = sympy.expand(as_expr(h) * as_expr(a)), sympy.expand(as_expr(h) * as_expr(b))
        f = [int(c) for c in reversed(sympy.Poly(fe, X).all_coeffs())]
        g = [int(c) for c in reversed(sympy.Poly(ge, X).all_coeffs())]
        F, G = DomainPoly.from_ints(f, QQ), DomainPoly.from_ints(g, QQ)
        d = gcd_subresultant(F, G)
        assert d == euclid_gcd(F, G)
        expected = sympy.Poly(sympy.gcd(fe, ge), X, domain=sympy.QQ).monic()
        assert [Fraction(int(c.p), int(c.q)) for c in reversed(expected.all_coeffs())] == list(d.coeffs)


def test_subresultant_sequence_golden():
    F = DomainPoly.from_ints([2, -3, 1], QQ)
    G = DomainPoly.from_ints([-3, 2, 1], QQ)
    seq = subresultants(F, G)
    assert seq.first_nonzero_principal() == 1
    assert seq.entries[1].monic() == DomainPoly.from_ints([-1, 1], QQ)
    assert QQ.is_zero(seq.principal(0))


def test_gcd_edge_cases():
    f = DomainPoly.from_ints([4, 0, 2], QQ)
    zero = DomainPoly.zero(QQ)
    assert gcd_subresultant(f, zero) == DomainPoly.from_ints([2, 0, 1], QQ)
    assert gcd_subresultant(zero, f) == DomainPoly.from_ints([2, 0, 1], QQ)
    with pytest.raises(PreconditionError):
        gcd_subresultant(zero, zero)
    with pytest.raises(PreconditionError):
        gcd_subresultant(DomainPoly.from_ints([1, 1], ZZ), DomainPoly.from_ints([1, 1], ZZ))
    family = [DomainPoly.from_ints(c, QQ) for c in ([-1, 0, 1], [1, -2, 1], [-1, 1])]
    assert gcd_many(family) == DomainPoly.from_ints([-1, 1], QQ)


def test_pseudo_division():
    rng = random.Random(get_settings().DEFAULT_SEED + 3)
    for _ in range(100):
        F = DomainPoly.from_ints(random_coeffs(rng, rng.randint(0, 5)), ZZ)
        G = DomainPoly.from_ints(random_coeffs(rng, rng.randint(0, 3)), ZZ)
        quotient, remainder = pseudo_divmod(F, G)
        if F.degree() >= G.degree():
            exponent = F.degree() - G.degree() + 1
            assert F.scale(G.lc() ** exponent) == quotient * G + remainder
            assert remainder.is_zero() or remainder.degree() < G.degree()
        else:
            assert quotient.is_zero() and remainder == F


def test_extended_gcd():
    F = DomainPoly.from_ints([-1, 0, 1], QQ)
    G = DomainPoly.from_ints([1, 2, 1], QQ)
    d, s, t = extended_gcd(F, G)
    assert d == DomainPoly.from_ints([1, 1], QQ)
    assert s * F + t * G == d


def test_multi_resultant_single_polynomial_is_zero():
    assert multi_resultant([parse_poly("x1^2 - 2")], 0).result.is_zero()


def _int_poly(poly: DomainPoly) -> IntPoly:
    return IntPoly({(power,): c for power, c in enumerate(poly.coeffs)}, 1)


def test_elimination_pair_names():
    polys = [parse_poly(text, nvars=2) for text in ("x1 - x2", "x1^2 - 1", "x1*x2", "x2^2 + x1")]
    pair = elimination_pair(polys, 0)
    assert pair.names == ["x1", "x2", "y3", "y4"]
    assert pair.y_start == 2
    assert pair.f2.degree() == 2


def _random_fibre_family(rng: random.Random):
    """Polynomials in x1 over Z[x2], monic in x1, sometimes sharing a factor."""
    m = rng.choice([2, 3])
    shared = rng.random() < 0.5
    root = IntPoly({(0, 0): rng.randint(-2, 2), (0, 1): rng.randint(-2, 2)}, 2)
    x1 = IntPoly.variable(0, 2)
    family = []
    for _ in range(m):
        degree = rng.randint(1, 2 if shared else 3)
        f = x1 ** degree
        for power in range(degree):
            f = f + x1 ** power * IntPoly({(0, 0): rng.randint(-2, 2), (0, 1): rng.randint(-2, 2)}, 2)
        family.append(f * (x1 - root) if shared else f)
    return family


def test_multi_resultant_specializes_to_common_roots():
    rng = random.Random(get_settings().DEFAULT_SEED + 4)
    for _ in range(200):
        family = _random_fibre_family(rng)
        q = rng.choice([3, 5, 7])
        c = rng.randrange(q)
        value = multi_resultant(family, 0).result
        vanishes = value.specialize({1: c}, modulus=q).is_zero()
        field = PrimeField(q)
        fibres = []
        for f in family:
            parts = f.specialize({1: c}, modulus=q).as_univariate(0)
            fibres.append(DomainPoly([field.from_int(parts[power].constant_term()) if power in parts else 0
                                      for power in range(max(parts) + 1)], field))
        assert vanishes == common_root(fibres, q)


def test_family_gcd_matches_aggregated_pair():
    rng = random.Random(get_settings().DEFAULT_SEED + 5)
    for _ in range(40):
        h = DomainPoly.from_ints(random_coeffs(rng, rng.randint(0, 2), bound=3), ZZ)
        cofactors = [random_coeffs(rng, degree, bound=3) for degree in (rng.randint(1, 2), rng.randint(2, 3), rng.randint(0, 1))]
        family = [h * DomainPoly.from_ints(c, ZZ) for c in cofactors]
        expected = gcd_many([DomainPoly.from_ints(list(f.coeffs), QQ) for f in family])

        pair = elimination_pair([_int_poly(f) for f in family], 0)
        seq = subresultants(pair.f1, pair.f2)
        delta = seq.first_nonzero_principal()
        assert delta == expected.degree()

        y0 = next(y for y in range(10) if seq.principal(delta).specialize({1: y}).constant_term())
        image = DomainPoly([Fraction(c.specialize({1: y0}).constant_term()) for c in seq.entries[delta].coeffs], QQ)
        assert image.monic() == expected


def test_specialization_commutes_with_subresultants():
    rng = random.Random(get_settings().DEFAULT_SEED + 6)
    ring = PolynomialRing(2)
    x1 = IntPoly.variable(0, 2)
    checked = 0
    for _ in range(100):
        polys = []
        for degree in (rng.randint(1, 3), rng.randint(1, 3)):
            f = IntPoly.zero(2)
            for power in range(degree + 1):
                f = f + x1 ** power * IntPoly({(0, 0): rng.randint(-3, 3), (0, 1): rng.randint(-3, 3)}, 2)
            polys.append(f)
        if any(f.degree_in(0) < 1 for f in polys):
            continue
        c = rng.randint(-4, 4)
        symbolic = [to_domain_poly(f, 0, ring) for f in polys]
        images = [DomainPoly.from_ints([a.specialize({1: c}).constant_term() for a in F.coeffs], ZZ) for F in symbolic]
        if any(image.degree() != F.degree() for image, F in zip(images, symbolic)):
            continue
        left = subresultants(*symbolic)
        right = subresultants(*images)
        assert [[s.specialize({1: c}).constant_term() for s in row] for row in left.coeffs] == right.coeffs
        checked += 1
    assert checked > 50


def test_gcd_subresultant_is_scaled_known_gcd():
    rng = random.Random(get_settings().DEFAULT_SEED + 7)
    checked = 0
    for _ in range(60):
        roots = rng.sample(range(-4, 5), rng.randint(1, 2))
        known = DomainPoly.one(QQ)
        for root in roots:
            known = known * DomainPoly.x_minus(QQ.from_int(root), QQ) ** rng.randint(1, 2)
        a = DomainPoly.from_ints(random_coeffs(rng, rng.randint(0, 3), bound=4), QQ)
        b = DomainPoly.from_ints(random_coeffs(rng, rng.randint(0, 3), bound=4), QQ)
        if euclid_gcd(a, b).degree() != 0:
            continue
        seq = subresultants(known * a, known * b)
        delta = known.degree()
        assert seq.first_nonzero_principal() == delta
        assert seq.entries[delta] == known.scale(seq.principal(delta))
        checked += 1
    assert checked > 20
