"""
Sylvester matrices, resultants and subresultant sequences.

Works over any DomainAdapter: integers, polynomial rings, prime and
extension fields, number-field towers. The multi-polynomial resultant
aggregates f_2..f_m with fresh variables y_3..y_m appended after x.
"""

import logging
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from app.core.errors import PreconditionError
from app.modules.domains import DomainAdapter, PolynomialRing
from app.modules.exact_linalg import bareiss_determinant
from app.modules.int_poly import MINUS_INFINITY, Degree, IntPoly, default_names

logger = logging.getLogger(__name__)


class DomainPoly:
    """Univariate polynomial with coefficients in a DomainAdapter, low degree first."""

    __slots__ = ("domain", "coeffs")

    def __init__(self, coeffs: Sequence[Any], domain: DomainAdapter):
        coeffs = list(coeffs)
        while coeffs and domain.is_zero(coeffs[-1]):
            coeffs.pop()
        self.domain = domain
        self.coeffs: Tuple[Any, ...] = tuple(coeffs)

    @classmethod
    def zero(cls, domain: DomainAdapter) -> "DomainPoly":
        return cls([], domain)

    @classmethod
    def one(cls, domain: DomainAdapter) -> "DomainPoly":
        return cls([domain.one()], domain)

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], domain: DomainAdapter) -> "DomainPoly":
        """Build from integer coefficients, low degree first."""
        return cls([domain.from_int(c) for c in coeffs], domain)

    @classmethod
    def x_minus(cls, root: Any, domain: DomainAdapter) -> "DomainPoly":
        return cls([domain.neg(root), domain.one()], domain)

    # ------------------------------------------------------------------

    def degree(self) -> Degree:
        return len(self.coeffs) - 1 if self.coeffs else MINUS_INFINITY

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, power: int) -> Any:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return self.domain.zero()

    def lc(self) -> Any:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _check(self, other: "DomainPoly") -> None:
        if other.domain is not self.domain and repr(other.domain) != repr(self.domain):
            raise ValueError(f"coefficient domains differ: {self.domain} vs {other.domain}")

    def __add__(self, other: "DomainPoly") -> "DomainPoly":
        self._check(other)
        D = self.domain
        size = max(len(self.coeffs), len(other.coeffs))
        return DomainPoly([D.add(self.coeff(i), other.coeff(i)) for i in range(size)], D)

    def __neg__(self) -> "DomainPoly":
        return DomainPoly([self.domain.neg(c) for c in self.coeffs], self.domain)

    def __sub__(self, other: "DomainPoly") -> "DomainPoly":
        self._check(other)
        D = self.domain
        size = max(len(self.coeffs), len(other.coeffs))
        return DomainPoly([D.sub(self.coeff(i), other.coeff(i)) for i in range(size)], D)

    def __mul__(self, other: "DomainPoly") -> "DomainPoly":
        self._check(other)
        D = self.domain
        if not self.coeffs or not other.coeffs:
            return DomainPoly.zero(D)
        product = [D.zero() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if D.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                product[i + j] = D.add(product[i + j], D.mul(a, b))
        return DomainPoly(product, D)

    def __pow__(self, exponent: int) -> "DomainPoly":
        result = DomainPoly.one(self.domain)
        for _ in range(exponent):
            result = result * self
        return result

    def scale(self, factor: Any) -> "DomainPoly":
        return DomainPoly([self.domain.mul(c, factor) for c in self.coeffs], self.domain)

    def shift_up(self, power: int) -> "DomainPoly":
        """Multiply by x^power."""
        if not self.coeffs:
            return self
        return DomainPoly([self.domain.zero()] * power + list(self.coeffs), self.domain)

    def monic(self) -> "DomainPoly":
        if not self.coeffs:
            return self
        return self.scale(self.domain.inv(self.lc()))

    def derivative(self) -> "DomainPoly":
        D = self.domain
        return DomainPoly(
            [D.mul(D.from_int(i), c) for i, c in enumerate(self.coeffs)][1:], D
        )

    def evaluate(self, x: Any) -> Any:
        D = self.domain
        value = D.zero()
        for c in reversed(self.coeffs):
            value = D.add(D.mul(value, x), c)
        return value

    def shift(self, c: Any) -> "DomainPoly":
        """f(x + c)."""
        D = self.domain
        linear = DomainPoly([c, D.one()], D)
        result = DomainPoly.zero(D)
        for coeff in reversed(self.coeffs):
            result = result * linear + DomainPoly([coeff], D)
        return result

    def map(self, fn: Callable[[Any], Any], domain: DomainAdapter) -> "DomainPoly":
        """Apply a coefficient homomorphism into another domain."""
        return DomainPoly([fn(c) for c in self.coeffs], domain)

    def divmod(self, other: "DomainPoly") -> Tuple["DomainPoly", "DomainPoly"]:
        """Division with remainder over a field."""
        self._check(other)
        D = self.domain
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inverse = D.inv(other.lc())
        remainder = list(self.coeffs)
        quotient = [D.zero()] * max(len(remainder) - len(other.coeffs) + 1, 0)
        dg = len(other.coeffs) - 1
        for power in range(len(remainder) - 1, dg - 1, -1):
            c = remainder[power]
            if D.is_zero(c):
                continue
            factor = D.mul(c, inverse)
            quotient[power - dg] = factor
            for j, b in enumerate(other.coeffs):
                remainder[power - dg + j] = D.sub(remainder[power - dg + j], D.mul(factor, b))
        return DomainPoly(quotient, D), DomainPoly(remainder[:dg], D)

    def __floordiv__(self, other: "DomainPoly") -> "DomainPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "DomainPoly") -> "DomainPoly":
        return self.divmod(other)[1]

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, DomainPoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(self.domain.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash(len(self.coeffs))

    def to_text(self, var: str = "x", coeff_text: Optional[Callable[[Any], str]] = None) -> str:
        if not self.coeffs:
            return "0"
        render = coeff_text or self.domain.to_text
        pieces: List[str] = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if self.domain.is_zero(c):
                continue
            text = render(c)
            mono = "" if power == 0 else (var if power == 1 else f"{var}^{power}")
            negative = text.startswith("-") and " " not in text
            if negative:
                text = text[1:]
            if " " in text:
                text = f"({text})"
            if not mono:
                body = text
            elif text == "1":
                body = mono
            else:
                body = f"{text}*{mono}"
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"DomainPoly({self.to_text()!r} over {self.domain})"


# ----------------------------------------------------------------------
# Sylvester matrix and resultant
# ----------------------------------------------------------------------

def sylvester(f: DomainPoly, g: DomainPoly) -> List[List[Any]]:
    """
    (p+q)-square Sylvester matrix: q shifted rows of f then p of g.

    Raises:
        PreconditionError: when either polynomial is zero
    """
    if f.is_zero() or g.is_zero():
        raise PreconditionError("Sylvester matrix of a zero polynomial")
    D = f.domain
    p, q = f.degree(), g.degree()
    if p == 0 and q == 0:
        return [[D.one()]]
    size = p + q
    high_f = list(reversed(f.coeffs))
    high_g = list(reversed(g.coeffs))
    rows = []
    for r in range(q):
        rows.append([D.zero()] * r + high_f + [D.zero()] * (size - r - len(high_f)))
    for r in range(p):
        rows.append([D.zero()] * r + high_g + [D.zero()] * (size - r - len(high_g)))
    return rows


def resultant(f: DomainPoly, g: DomainPoly) -> Any:
    """det(Sylvester(f, g)); zero when either input is zero."""
    if f.is_zero() or g.is_zero():
        return f.domain.zero()
    return bareiss_determinant(sylvester(f, g), f.domain)


# ----------------------------------------------------------------------
# Subresultants
# ----------------------------------------------------------------------

def _normalize_pair(f: DomainPoly, g: DomainPoly) -> Tuple[DomainPoly, DomainPoly]:
    if f.is_zero() and g.is_zero():
        raise PreconditionError("subresultants of two zero polynomials")
    if g.is_zero():
        return f, f
    if f.is_zero():
        return g, g
    return f, g


class _SubresultantTable:
    """Determinant oracle for s_ij with the Sylvester matrix built once."""

    def __init__(self, f: DomainPoly, g: DomainPoly):
        self.f, self.g = _normalize_pair(f, g)
        self.domain = self.f.domain
        self.p = self.f.degree()
        self.q = self.g.degree()
        self.top = min(self.p, self.q)
        self.matrix = sylvester(self.f, self.g)

    def coefficient(self, i: int, j: int) -> Any:
        p, q, D = self.p, self.q, self.domain
        if not 0 <= j <= i <= self.top:
            raise ValueError(f"s_{i}{j} is outside the subresultant table")
        if p == 0 and q == 0:
            return D.one()
        if i == p == q:
            return self.g.coeff(j)
        rows = list(range(q - i)) + list(range(q, q + p - i))
        cols = list(range(p + q - 2 * i - 1)) + [p + q - i - j - 1]
        return bareiss_determinant([[self.matrix[r][c] for c in cols] for r in rows], D)

    def polynomial(self, i: int) -> DomainPoly:
        return DomainPoly([self.coefficient(i, j) for j in range(i + 1)], self.domain)


class SubresultantSeq:
    """S_0..S_min(p,q) with the coefficient table s_ij."""

    def __init__(self, entries: List[DomainPoly], coeffs: List[List[Any]]):
        self.entries = entries
        self.coeffs = coeffs

    def principal(self, i: int) -> Any:
        return self.coeffs[i][i]

    def first_nonzero_principal(self) -> int:
        for i in range(len(self.entries)):
            if not self.entries[i].domain.is_zero(self.principal(i)):
                return i
        raise PreconditionError("subresultant sequence has no non-zero principal coefficient")

    def __len__(self) -> int:
        return len(self.entries)


def subresultant_coefficient(f: DomainPoly, g: DomainPoly, i: int, j: int) -> Any:
    """Single entry s_ij(f, g)."""
    return _SubresultantTable(f, g).coefficient(i, j)


def principal_coefficients(f: DomainPoly, g: DomainPoly) -> Callable[[int], Any]:
    """Lazy s_ii(f, g) sharing one Sylvester matrix."""
    table = _SubresultantTable(f, g)
    return lambda i: table.coefficient(i, i)


def subresultants(f: DomainPoly, g: DomainPoly) -> SubresultantSeq:
    """Full subresultant sequence; S_i(f, 0) is read as S_i(f, f)."""
    table = _SubresultantTable(f, g)
    coeffs = [[table.coefficient(i, j) for j in range(i + 1)] for i in range(table.top + 1)]
    entries = [DomainPoly(row, table.domain) for row in coeffs]
    return SubresultantSeq(entries, coeffs)


def gcd_subresultant(f: DomainPoly, g: DomainPoly) -> DomainPoly:
    """
    Monic gcd read off the first subresultant with non-zero principal coefficient.

    gcd(h, 0) = gcd(0, h) = h, normalized monic.
    """
    if not f.domain.is_field:
        raise PreconditionError(f"gcd needs a field, got {f.domain}")
    if f.is_zero() and g.is_zero():
        raise PreconditionError("gcd of two zero polynomials")
    if g.is_zero():
        return f.monic()
    if f.is_zero():
        return g.monic()
    table = _SubresultantTable(f, g)
    D = table.domain
    for i in range(table.top + 1):
        if not D.is_zero(table.coefficient(i, i)):
            return table.polynomial(i).monic()
    raise PreconditionError("no non-zero principal subresultant coefficient")


def gcd_many(polys: Sequence[DomainPoly]) -> DomainPoly:
    """Iterated pairwise gcd_subresultant."""
    if not polys:
        raise PreconditionError("gcd of an empty family")
    result = polys[0]
    for other in polys[1:]:
        if result.is_zero() and other.is_zero():
            continue
        result = gcd_subresultant(result, other)
    if result.is_zero():
        raise PreconditionError("gcd of zero polynomials")
    return result.monic()


# ----------------------------------------------------------------------
# Euclidean tools over fields, pseudo-division over rings
# ----------------------------------------------------------------------

def euclid_gcd(f: DomainPoly, g: DomainPoly) -> DomainPoly:
    if f.is_zero() and g.is_zero():
        raise PreconditionError("gcd of two zero polynomials")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def extended_gcd(f: DomainPoly, g: DomainPoly) -> Tuple[DomainPoly, DomainPoly, DomainPoly]:
    """
    Returns:
        (d, s, t) with s*f + t*g = d and d monic
    """
    D = f.domain
    if f.is_zero() and g.is_zero():
        raise PreconditionError("gcd of two zero polynomials")
    r0, r1 = f, g
    s0, s1 = DomainPoly.one(D), DomainPoly.zero(D)
    t0, t1 = DomainPoly.zero(D), DomainPoly.one(D)
    while not r1.is_zero():
        quotient, remainder = r0.divmod(r1)
        r0, r1 = r1, remainder
        s0, s1 = s1, s0 - quotient * s1
        t0, t1 = t1, t0 - quotient * t1
    inverse = D.inv(r0.lc())
    return r0.scale(inverse), s0.scale(inverse), t0.scale(inverse)


def pseudo_divmod(f: DomainPoly, g: DomainPoly) -> Tuple[DomainPoly, DomainPoly]:
    """
    Pseudo-division over an integral domain.

    Returns:
        (q, r) with lc(g)^(deg f - deg g + 1) * f = q*g + r and deg r < deg g;
        (0, f) when deg f < deg g
    """
    if g.is_zero():
        raise ZeroDivisionError("pseudo-division by zero")
    D = f.domain
    if f.is_zero() or f.degree() < g.degree():
        return DomainPoly.zero(D), f
    lead = g.lc()
    exponent = f.degree() - g.degree() + 1
    quotient = DomainPoly.zero(D)
    remainder = f
    while not remainder.is_zero() and remainder.degree() >= g.degree():
        term = DomainPoly([remainder.lc()], D).shift_up(remainder.degree() - g.degree())
        quotient = quotient.scale(lead) + term
        remainder = remainder.scale(lead) - term * g
        exponent -= 1
    factor = D.pow(lead, exponent)
    return quotient.scale(factor), remainder.scale(factor)


# ----------------------------------------------------------------------
# Multi-polynomial resultant
# ----------------------------------------------------------------------

def to_domain_poly(f: IntPoly, var: int, ring: Optional[PolynomialRing] = None) -> DomainPoly:
    """View f as a polynomial in x_var over Z[all variables]."""
    ring = ring or PolynomialRing(f.nvars)
    parts = f.as_univariate(var)
    top = max(parts) if parts else -1
    return DomainPoly([parts.get(power, ring.zero()) for power in range(top + 1)], ring)


class EliminationPair(NamedTuple):
    """F_1 = f_1 and F_2 = f_2 + y_3 f_3 + ... + y_m f_m over Z[x, y]."""
    f1: DomainPoly
    f2: DomainPoly
    ring: PolynomialRing
    y_start: int
    names: List[str]


def elimination_pair(
    polys: Sequence[IntPoly], var: int, names: Optional[Sequence[str]] = None
) -> EliminationPair:
    if not polys:
        raise PreconditionError("multi-resultant of an empty family")
    n = polys[0].nvars
    if any(f.nvars != n for f in polys):
        raise PreconditionError("polynomials live in different variable counts")
    m = len(polys)
    extra = max(m - 2, 0)
    total = n + extra
    ring = PolynomialRing(total)
    lifted = [f.extend(total) for f in polys]
    aggregate = IntPoly.zero(total)
    if m >= 2:
        aggregate = lifted[1]
        for j in range(2, m):
            aggregate = aggregate + IntPoly.variable(n + j - 2, total) * lifted[j]
    all_names = list(names or default_names(n)) + [f"y{j + 1}" for j in range(2, m)]
    return EliminationPair(
        f1=to_domain_poly(lifted[0], var, ring),
        f2=to_domain_poly(aggregate, var, ring),
        ring=ring,
        y_start=n,
        names=all_names,
    )


class MultiResultant(NamedTuple):
    result: IntPoly
    names: List[str]
    y_start: int

    def y_coefficients(self) -> Dict[Tuple[int, ...], IntPoly]:
        """Coefficient of every y-monomial, as polynomials in the x variables."""
        return self.result.collect(self.y_start)


def multi_resultant(
    polys: Sequence[IntPoly], var: int, names: Optional[Sequence[str]] = None
) -> MultiResultant:
    """
    res_var(F_1, F_2) for the aggregated pair; zero when there is one polynomial.
    """
    pair = elimination_pair(polys, var, names)
    value = resultant(pair.f1, pair.f2)
    logger.debug(f"Multi-resultant of {len(polys)} polynomials in x{var + 1}: {len(value)} terms")
    return MultiResultant(result=value, names=pair.names, y_start=pair.y_start)
