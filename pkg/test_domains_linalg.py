"""
Tests for coefficient domains and exact linear algebra.
"""

import random
from fractions import Fraction

import pytest
import sympy

from app.core.config import get_settings
from app.core.errors import BoundAbortError
from app.modules.domains import (
    ExtensionField,
    IntegerRing,
    PolynomialRing,
    PrimeField,
    RationalField,
    find_irreducible,
)
from app.modules.exact_linalg import (
    ExactMatrix,
    LocalizedRational,
    adjugate,
    bareiss_determinant,
    clear_denominators,
    det_exact,
    lift_linear,
    linear_forms,
    rank_pair,
    rectify_linear,
    verify_linear,
)
from app.modules.int_poly import parse_poly


def random_bounded_matrix(rng: random.Random, n: int, k: int):
    """Rows of L1 norm at most k."""
    rows = []
    for _ in range(n):
        row = [0] * n
        for _ in range(rng.randint(1, k)):
            row[rng.randrange(n)] += rng.choice([-1, 1])
        rows.append(row)
    return rows


def test_bareiss_matches_sympy_and_hadamard():
    rng = random.Random(get_settings().DEFAULT_SEED)
    for _ in range(500):
        n, k = rng.randint(1, 4), rng.randint(1, 4)
        rows = random_bounded_matrix(rng, n, k)
        det = bareiss_determinant(rows, IntegerRing())
        assert det == sympy.Matrix(rows).det()
        product = 1
        for norm in ExactMatrix(rows).row_norms():
            product *= norm
        assert abs(det) <= product <= k ** n


def test_rational_determinant_and_adjugate():
    matrix = ExactMatrix([[Fraction(1, 2), 1], [3, Fraction(2, 3)]])
    assert det_exact(matrix) == Fraction(1, 3) - 3
    integer = ExactMatrix([[2, 1], [7, 4]])
    adj = adjugate(integer)
    assert adj == ExactMatrix([[4, -1], [-7, 2]])


def test_symbolic_determinant():
    ring = PolynomialRing(2)
    x1, x2 = parse_poly("x1", nvars=2), parse_poly("x2", nvars=2)
    det = bareiss_determinant([[x1, ring.one()], [ring.one(), x2]], ring)
    assert det == parse_poly("x1*x2 - 1")


def test_rank_pair_differs_mod_p():
    matrix = ExactMatrix([[1, 2], [3, 1]])
    rank_q, rank_p, (rows, cols) = rank_pair(matrix, 5)
    assert rank_q == 2
    assert rank_p == 1
    assert len(rows) == len(cols) == 1


def test_prime_field():
    field = PrimeField(13)
    assert field.mul(5, 5) == 12
    assert field.mul(field.inv(6), 6) == 1
    with pytest.raises(ZeroDivisionError):
        field.inv(0)


@pytest.mark.parametrize("q,degree", [(2, 2), (3, 2), (5, 3), (7, 2)])
def test_extension_field_inverses(q, degree):
    modulus = find_irreducible(q, degree)
    assert all(sum(c * x ** i for i, c in enumerate(modulus)) % q for x in range(q))
    field = ExtensionField(q, modulus)
    assert field.order == q ** degree
    elements = list(field.elements())
    assert len(elements) == field.order
    for a in elements[1:]:
        assert field.mul(a, field.inv(a)) == field.one()


def test_rational_field():
    field = RationalField()
    assert field.inv(Fraction(-2, 3)) == Fraction(-3, 2)
    assert field.to_text(Fraction(5, 1)) == "5"


def test_localized_rational():
    b = LocalizedRational.from_fraction(Fraction(-1, 7), 11)
    assert b.reduce() == 3
    assert str(b) == "-1/7"


def test_clear_denominators():
    points = [LocalizedRational.from_fraction(Fraction(1, 2), 7), LocalizedRational.from_fraction(Fraction(1, 3), 7)]
    multiplier, integers = clear_denominators(points, 7)
    assert multiplier == 36
    assert multiplier % 7 == 1
    assert integers == [18, 12]


def test_linear_forms_are_homogeneous():
    forms = linear_forms(2, 2)
    assert len(forms) == 6
    assert all(f.constant_term() == 0 for f in forms)

    # 1/2 and 1/3 mod 7 are 4 and 5; clearing denominators gives 18 and 12
    _, integers = clear_denominators(
        [LocalizedRational.from_fraction(Fraction(1, 2), 7), LocalizedRational.from_fraction(Fraction(1, 3), 7)], 7
    )
    homogeneous = parse_poly("2*x1 - 3*x2")
    shifted = parse_poly("2*x1 - 1", nvars=2)
    assert homogeneous.eval_mod([4, 5], 7) == 0 and homogeneous.evaluate(integers, IntegerRing()) == 0
    assert shifted.eval_mod([4, 5], 7) == 0 and shifted.evaluate(integers, IntegerRing()) != 0


def test_lift_linear_aborts_on_bound():
    relation = parse_poly("x2 - 2*x1")
    with pytest.raises(BoundAbortError):
        lift_linear([1, 2], [relation], [], 5)


def test_lift_linear_keeps_relations():
    values = [3, 7, 10]
    relations = [parse_poly("x1 + x2 - x3")]
    non_relations = [parse_poly("x1 - x2", nvars=3), parse_poly("x1 + x3", nvars=3)]
    lifted = lift_linear(values, relations, non_relations, 1009)
    assert [b.reduce() for b in lifted] == values
    points = [b.to_fraction() for b in lifted]
    assert points[0] + points[1] == points[2]


def test_rectify_linear_random():
    rng = random.Random(get_settings().DEFAULT_SEED)
    for _ in range(100):
        p = int(sympy.nextprime(rng.randint(10 ** 5, 10 ** 6)))
        n = rng.randint(1, 4)
        values = rng.sample(range(p), n)
        if rng.random() < 0.5 and n >= 3:
            values[2] = (values[0] + values[1]) % p
            if len(set(values)) != n:
                continue
        result = rectify_linear(values, p, 2)
        assert result.guaranteed
        assert result.verified
        integers = [int(b) for b in result.integer_points]
        assert [b % p for b in integers] == values
        report = verify_linear(values, integers, p, 2)
        assert report.passed
