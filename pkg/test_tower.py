"""
Tests for anchored number-field towers, norms and root selection.
"""

from fractions import Fraction

import pytest

from app.core.errors import AnchorError, PreconditionError
from app.modules.resultants import DomainPoly
from app.modules.tower import (
    Tower,
    TowerField,
    factor_univariate,
    norm_polynomial,
    select_compatible_root,
)


def gaussian(p: int = 13, anchor: int = 5) -> Tower:
    """Q(b1) with b1^2 + 1 = 0."""
    return Tower.rational(p).adjoin("b1", (Fraction(1), Fraction(0)), anchor)


def poly(tower: Tower, coeffs) -> DomainPoly:
    """Polynomial over the tower from rational or element coefficients, low degree first."""
    field = TowerField(tower)
    return DomainPoly([c if not isinstance(c, (int, Fraction)) else tower.from_fraction(c) for c in coeffs], field)


def test_gaussian_arithmetic():
    tower = gaussian()
    b = tower.generator(0)
    assert b * b == -1
    assert b.anchor() == 5
    assert tower.degree() == 2
    u = b + 1
    assert u.inverse() * u == 1
    assert u.inverse().anchor() == pow(6, -1, 13)
    assert (u / b).anchor() == 6 * pow(5, -1, 13) % 13
    assert (b ** 4) == 1
    assert (b ** -1) == -b


def test_anchor_rejects_p_in_denominator():
    tower = Tower.rational(13)
    with pytest.raises(AnchorError):
        tower.from_fraction(Fraction(1, 13)).anchor()
    assert tower.from_fraction(Fraction(-1, 7)).anchor() == (-pow(7, -1, 13)) % 13


def test_adjoin_checks_anchor():
    with pytest.raises(AnchorError):
        Tower.rational(13).adjoin("b1", (Fraction(1), Fraction(0)), 4)
    with pytest.raises(PreconditionError):
        gaussian().adjoin("b1", (Fraction(-2),), 2)


def test_parse_and_text():
    tower = gaussian()
    elem = tower.parse_element("b1 + 2")
    assert elem.anchor() == 7
    assert elem.to_text() == "b1 + 2"
    assert tower.parse_element("b1^2") == -1


def test_document_round_trip():
    tower = gaussian()
    document = tower.to_document()
    assert document.levels[0].defining_polynomial == "b1^2 + 1"
    rebuilt = Tower.from_document(document)
    assert rebuilt == tower
    assert rebuilt.to_document() == document


def test_factor_over_rationals():
    tower = Tower.rational(13)
    factors = factor_univariate(poly(tower, [-1, 0, 1]))
    assert [tf.factor.degree() for tf in factors] == [1, 1]
    assert all(tf.multiplicity == 1 for tf in factors)
    squared = factor_univariate(poly(tower, [1, 2, 1]))
    assert len(squared) == 1 and squared[0].multiplicity == 2


def test_factor_over_gaussian_splits_x2_plus_1():
    tower = gaussian()
    factors = factor_univariate(poly(tower, [1, 0, 1]))
    assert [tf.factor.degree() for tf in factors] == [1, 1]
    roots = {(-tf.factor.coeff(0)).anchor() for tf in factors}
    assert roots == {5, 8}


def test_norm_polynomial():
    tower = gaussian()
    b = tower.generator(0)
    norm = norm_polynomial(poly(tower, [-b, 1]))
    assert [int(c) for c in norm.all_coeffs()] == [1, 0, 1]


def test_select_compatible_root_adjoins_then_reuses():
    base = Tower.rational(13)
    selection = select_compatible_root(poly(base, [1, 0, 1]), 5, "b1")
    assert selection.adjoined
    assert selection.tower.degree() == 2
    assert selection.root.anchor() == 5

    tower = selection.tower
    again = select_compatible_root(poly(tower, [1, 0, 1]), 8, "b2")
    assert not again.adjoined
    assert again.tower is tower
    assert again.root == -tower.generator(0)


def test_select_compatible_root_rational():
    base = Tower.rational(11)
    selection = select_compatible_root(poly(base, [Fraction(1, 7), 1]), 3, "b1")
    assert not selection.adjoined
    assert selection.root.to_fraction() == Fraction(-1, 7)


def test_select_compatible_root_no_match():
    base = Tower.rational(13)
    with pytest.raises(AnchorError):
        select_compatible_root(poly(base, [1, 0, 1]), 4, "b1")


def test_nested_tower():
    tower = gaussian(p=17, anchor=4)
    selection = select_compatible_root(poly(tower, [-2, 0, 1]), 6, "b2")
    assert selection.adjoined
    top = selection.tower
    assert top.degree() == 4
    b1, b2 = top.generator(0), top.generator(1)
    assert b2 * b2 == 2
    assert ((b1 + b2) ** 2).anchor() == 15
    assert (b1 + b2).inverse() * (b1 + b2) == 1
    assert top.embed(tower.generator(0)) == b1
