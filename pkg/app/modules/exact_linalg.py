"""
Exact linear algebra and the linear rectification.

Fraction-free determinants over any integral domain, simultaneous ranks
over Q and F_p, and the lift of linear relations from F_p into the
localization Z_(p) followed by clearing of denominators.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

from app.core.errors import BoundAbortError, PreconditionError, UsageError, VerificationError
from app.models.schemas import BoundProfile, LinearLiftResult, VerificationReport
from app.modules.domains import DomainAdapter, IntegerRing, RationalField
from app.modules.int_poly import (
    IntPoly,
    check_prime,
    check_reduced,
    check_enumeration_size,
    enumerate_bounded,
)

logger = logging.getLogger(__name__)


def bareiss_determinant(rows: Sequence[Sequence[Any]], domain: DomainAdapter) -> Any:
    """
    Determinant by fraction-free elimination.

    Every intermediate division is exact in the domain, so this works
    over Z, Z[x1..xN], fields, and towers alike.
    """
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise UsageError(f"determinant of a non-square {n}x{len(rows[0]) if rows else 0} matrix")
    if n == 0:
        return domain.one()
    m = [list(row) for row in rows]
    sign = 1
    previous = domain.one()
    for k in range(n - 1):
        if domain.is_zero(m[k][k]):
            for i in range(k + 1, n):
                if not domain.is_zero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return domain.zero()
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                numerator = domain.sub(domain.mul(m[i][j], pivot), domain.mul(m[i][k], m[k][j]))
                m[i][j] = domain.exact_div(numerator, previous)
        previous = pivot
    det = m[n - 1][n - 1]
    return det if sign > 0 else domain.neg(det)


class ExactMatrix:
    """Rectangular matrix of exact rationals (integers stay integers)."""

    def __init__(self, rows: Sequence[Sequence[Any]]):
        rows = [list(row) for row in rows]
        width = len(rows[0]) if rows else 0
        if any(len(row) != width for row in rows):
            raise UsageError("matrix rows have different lengths")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = width

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    def is_integral(self) -> bool:
        return all(Fraction(x).denominator == 1 for row in self.rows for x in row)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix([[self.rows[i][j] for j in cols] for i in rows])

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def row_norms(self) -> List[int]:
        return [sum(abs(x) for x in row) for row in self.rows]

    def __getitem__(self, index: Tuple[int, int]) -> Any:
        i, j = index
        return self.rows[i][j]

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, ExactMatrix) and self.rows == other.rows

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows})"


def det_exact(matrix: ExactMatrix) -> Any:
    """Exact determinant; an int for integer matrices, a Fraction otherwise."""
    if matrix.nrows != matrix.ncols:
        raise UsageError(f"determinant of a non-square {matrix.nrows}x{matrix.ncols} matrix")
    if matrix.is_integral():
        return bareiss_determinant([[int(x) for x in row] for row in matrix.rows], IntegerRing())
    return bareiss_determinant(
        [[Fraction(x) for x in row] for row in matrix.rows], RationalField()
    )


def adjugate(matrix: ExactMatrix) -> ExactMatrix:
    """Transpose of the cofactor matrix, so adj(M) M = det(M) I."""
    n = matrix.nrows
    if n != matrix.ncols:
        raise UsageError("adjugate of a non-square matrix")
    if n == 1:
        return ExactMatrix([[1]])
    cofactors = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = matrix.submatrix(
                [r for r in range(n) if r != i], [c for c in range(n) if c != j]
            )
            row.append((-1) ** (i + j) * det_exact(minor))
        cofactors.append(row)
    return ExactMatrix(cofactors).transpose()


def _rank_over_q(matrix: ExactMatrix) -> int:
    rows = [[Fraction(x) for x in row] for row in matrix.rows]
    rank = 0
    for col in range(matrix.ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(rank + 1, len(rows)):
            factor = rows[i][col] / rows[rank][col]
            if factor:
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _pivots_mod_p(matrix: ExactMatrix, p: int) -> Tuple[List[int], List[int]]:
    """Greedy elimination mod p; first non-zero entry per column is the pivot."""
    rows = [[int(x) % p for x in row] for row in matrix.rows]
    order = list(range(matrix.nrows))
    rank = 0
    pivot_rows: List[int] = []
    pivot_cols: List[int] = []
    for col in range(matrix.ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        order[rank], order[pivot] = order[pivot], order[rank]
        inverse = pow(rows[rank][col], -1, p)
        for i in range(rank + 1, len(rows)):
            factor = rows[i][col] * inverse % p
            if factor:
                rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[rank])]
        pivot_rows.append(order[rank])
        pivot_cols.append(col)
        rank += 1
    return sorted(pivot_rows), pivot_cols


def rank_pair(matrix: ExactMatrix, p: int) -> Tuple[int, int, Tuple[List[int], List[int]]]:
    """
    Ranks over Q and over F_p plus a witness.

    Returns:
        (rank over Q, rank over F_p, (rows, cols)) where the witness
        submatrix is non-singular mod p, hence also over Q.
    """
    check_prime(p)
    if not matrix.is_integral():
        raise UsageError("rank_pair needs an integer matrix")
    rows, cols = _pivots_mod_p(matrix, p)
    return _rank_over_q(matrix), len(rows), (rows, cols)


@dataclass(frozen=True)
class LocalizedRational:
    """Element of Z_(p): a reduced fraction whose denominator is a p-unit."""

    numerator: int
    denominator: int
    p: int

    @classmethod
    def from_fraction(cls, value: Any, p: int) -> "LocalizedRational":
        value = Fraction(value)
        if value.denominator % p == 0:
            raise PreconditionError(
                f"{value} is not in the localization at {p}", {"value": value, "p": p}
            )
        return cls(value.numerator, value.denominator, p)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def reduce(self) -> int:
        """Image under the canonical homomorphism Z_(p) -> F_p."""
        return self.numerator * pow(self.denominator, -1, self.p) % self.p

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


def _linear_coefficients(f: IntPoly) -> Tuple[List[int], int]:
    if f.degree() > 1:
        raise UsageError(f"{f} is not linear")
    coeffs = [0] * f.nvars
    for exps, coeff in f.terms.items():
        if any(exps):
            coeffs[exps.index(1)] = coeff
    return coeffs, f.constant_term()


def lift_linear(
    values: Sequence[int],
    relations: Sequence[IntPoly],
    non_relations: Sequence[IntPoly],
    p: int,
    force: bool = False,
) -> List[LocalizedRational]:
    """
    Lift a point of F_p^n into Z_(p)^n preserving linear (non-)relations.

    Args:
        values: a_1..a_n reduced mod p
        relations: linear polynomials vanishing at values mod p
        non_relations: linear polynomials not vanishing at values mod p
        p: prime modulus
        force: run even when k^(n+1) >= p

    Returns:
        b_1..b_n with b_i -> a_i, relations vanishing and non-relations
        non-zero over Q

    Raises:
        BoundAbortError: k^(n+1) >= p and not forced
        PreconditionError: a relation does not vanish at values mod p
        VerificationError: a forced run lost a (non-)relation
    """
    check_prime(p)
    check_reduced(values, p)
    n = len(values)
    everything = list(relations) + list(non_relations)
    k = max([f.l1_norm() for f in everything], default=1)
    if k ** (n + 1) >= p:
        if not force:
            raise BoundAbortError(
                f"linear lift needs k^(n+1) < p, got {k}^{n + 1} >= {p}",
                {"k": k, "n": n, "p": p},
            )
        logger.warning(f"Forcing linear lift with {k}^{n + 1} >= {p}")
    for f in relations:
        if f.eval_mod(values, p):
            raise PreconditionError(f"relation {f} does not vanish mod {p}", {"relation": f})
    for f in non_relations:
        if not f.eval_mod(values, p):
            raise PreconditionError(f"non-relation {f} vanishes mod {p}", {"non_relation": f})

    points: List[Fraction] = [Fraction(a) for a in values]
    if relations:
        system = [_linear_coefficients(f) for f in relations]
        matrix = ExactMatrix([coeffs for coeffs, _ in system])
        rhs = [-constant for _, constant in system]
        _, rank_p, (pivot_rows, pivot_cols) = rank_pair(matrix, p)
        free = [j for j in range(n) if j not in pivot_cols]
        if pivot_rows:
            block = matrix.submatrix(pivot_rows, pivot_cols)
            det = det_exact(block)
            adj = adjugate(block)
            reduced_rhs = [
                rhs[i] - sum(matrix[i, j] * values[j] for j in free) for i in pivot_rows
            ]
            for position, col in enumerate(pivot_cols):
                numerator = sum(adj[position, r] * reduced_rhs[r] for r in range(len(pivot_rows)))
                points[col] = Fraction(numerator, det)
        logger.info(f"Linear lift: {len(relations)} relations, rank mod {p} = {rank_p}")

    lifted = [LocalizedRational.from_fraction(b, p) for b in points]
    for b, a in zip(lifted, values):
        if b.reduce() != a:
            raise VerificationError(f"lifted value {b} does not reduce to {a}", {"p": p})
    for f in relations:
        if f.evaluate(points, RationalField()) != 0:
            raise VerificationError(f"relation {f} does not vanish on the lift", {"relation": f})
    for f in non_relations:
        if f.evaluate(points, RationalField()) == 0:
            raise VerificationError(f"non-relation {f} vanishes on the lift", {"non_relation": f})
    return lifted


def clear_denominators(points: Sequence[LocalizedRational], p: int) -> Tuple[int, List[int]]:
    """
    Smallest positive multiplier m = 1 mod p clearing every denominator.

    Returns:
        (m, [m * b_i]) with every scaled point an integer
    """
    lcm = 1
    for b in points:
        lcm = lcm * b.denominator // math.gcd(lcm, b.denominator)
    multiplier = lcm * pow(lcm, -1, p)
    if multiplier % p != 1 % p:
        raise VerificationError("denominator multiplier is not 1 mod p", {"m": multiplier})
    scaled = [b.numerator * (multiplier // b.denominator) for b in points]
    return multiplier, scaled


def linear_forms(nvars: int, norm: int) -> List[IntPoly]:
    """
    Homogeneous linear forms of L1 norm <= norm, up to sign.

    Forms with a constant term are left out: clearing denominators scales
    the lifted points by m = 1 mod p, which keeps c.x = 0 but not c.x + c0 = 0.
    """
    profile = BoundProfile(k=norm, t=1)
    check_enumeration_size(nvars, profile)
    return [f for f in enumerate_bounded(nvars, profile) if f.constant_term() == 0]


def verify_linear(values: Sequence[int], points: Sequence[Any], p: int, k: int) -> VerificationReport:
    """Exhaustive Freiman check: every 2k-bounded linear form vanishes on both sides or neither."""
    checked = vanishing = 0
    first: Optional[str] = None
    rationals = [Fraction(b) for b in points]
    for f in linear_forms(len(values), 2 * k):
        checked += 1
        left = f.eval_mod(values, p) == 0
        right = f.evaluate(rationals, RationalField()) == 0
        if left and right:
            vanishing += 1
        if left != right and first is None:
            first = f"{f}: {'vanishes' if left else 'non-zero'} mod {p}, {'vanishes' if right else 'non-zero'} on the lift"
    return VerificationReport(
        passed=first is None,
        profile=BoundProfile(k=2 * k, t=1),
        checked=checked,
        vanishing=vanishing,
        first_discrepancy=first,
    )


def linear_gate(n: int, k: int, p: int) -> bool:
    """|A| < log_{2k} p - 1."""
    return n < math.log(p) / math.log(2 * k) - 1


def rectify_linear(values: Sequence[int], p: int, k: int) -> LinearLiftResult:
    """
    Integer set Freiman-isomorphic of order k to values under reduction mod p.

    Always runs; guaranteed records whether the size gate held.
    """
    check_prime(p)
    check_reduced(values, p)
    if len(set(values)) != len(values):
        raise PreconditionError("set values must be distinct")
    n = len(values)
    guaranteed = linear_gate(n, k, p)
    if not guaranteed:
        logger.warning(f"|A| = {n} is beyond the linear gate for k={k}, p={p}; verifying instead")

    forms = linear_forms(n, 2 * k)
    relations = [f for f in forms if f.eval_mod(values, p) == 0]
    non_relations = [f for f in forms if f.eval_mod(values, p) != 0]
    lifted = lift_linear(values, relations, non_relations, p, force=not guaranteed)
    multiplier, integers = clear_denominators(lifted, p)
    report = verify_linear(values, integers, p, k)
    if not report.passed:
        raise VerificationError(
            "linear rectification lost a relation",
            {"discrepancy": report.first_discrepancy},
        )
    matrix_rows = [_linear_coefficients(f)[0] for f in relations]
    witness_rows: List[int] = []
    witness_cols: List[int] = []
    if matrix_rows:
        _, _, (witness_rows, witness_cols) = rank_pair(ExactMatrix(matrix_rows), p)
    return LinearLiftResult(
        points=[str(b) for b in lifted],
        integer_points=[str(b) for b in integers],
        multiplier=str(multiplier),
        guaranteed=guaranteed,
        verified=report.passed,
        relations=len(relations),
        witness_rows=witness_rows,
        witness_cols=witness_cols,
    )
