"""
Sparse multivariate polynomials over the integers.
Norms, boundedness, evaluation over any coefficient domain, and the
exhaustive enumeration of bounded relations on a point of F_p^n.
"""

import logging
import re
from fractions import Fraction
from functools import total_ordering
from math import comb
from typing import (
    TYPE_CHECKING,
    Any,
    Dict,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from sympy import isprime

from app.core.config import get_settings
from app.core.errors import BoundAbortError, NotPrimeError, PreconditionError, UsageError
from app.models.schemas import BoundProfile

if TYPE_CHECKING:
    from app.modules.domains import DomainAdapter

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Coefficient = Union[int, Fraction]


@total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial. Below every integer; absorbing under +."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other: Any) -> bool:
        return other is self

    def __lt__(self, other: Any) -> bool:
        return other is not self

    def __hash__(self) -> int:
        return hash("-inf")

    def __add__(self, other: Any) -> "_MinusInfinity":
        return self

    __radd__ = __add__

    def __repr__(self) -> str:
        return "-inf"


MINUS_INFINITY = _MinusInfinity()
Degree = Union[int, _MinusInfinity]


def grlex_key(exponents: Monomial) -> Tuple[int, Monomial]:
    """Sort key of the graded lexicographic order."""
    return (sum(exponents), exponents)


class IntPoly:
    """
    Immutable sparse polynomial in x1..xn with integer coefficients.

    Terms map exponent vectors to non-zero integers; equal polynomials
    have identical term maps.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, int]] = None, nvars: int = 0):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean: Dict[Monomial, int] = {}
        for exponents, coeff in (terms or {}).items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != nvars:
                raise ValueError(f"exponent vector {exponents} does not have {nvars} entries")
            if any(e < 0 for e in exponents):
                raise ValueError(f"negative exponent in {exponents}")
            if int(coeff) != coeff:
                raise ValueError(f"coefficient {coeff} is not an integer")
            value = clean.get(exponents, 0) + int(coeff)
            if value:
                clean[exponents] = value
            else:
                clean.pop(exponents, None)
        self.nvars = nvars
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, int], nvars: int) -> "IntPoly":
        poly = cls.__new__(cls)
        poly.nvars = nvars
        poly._terms = terms
        poly._hash = None
        return poly

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "IntPoly":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, value: int, nvars: int) -> "IntPoly":
        return cls._raw({(0,) * nvars: value} if value else {}, nvars)

    @classmethod
    def variable(cls, index: int, nvars: int) -> "IntPoly":
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exponents = [0] * nvars
        exponents[index] = 1
        return cls._raw({tuple(exponents): 1}, nvars)

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: int = 1) -> "IntPoly":
        return cls({tuple(exponents): coeff}, len(exponents))

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, int]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Monomial, int]]:
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda item: grlex_key(item[0]), reverse=True)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self._terms)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.nvars, 0)

    def degree(self) -> Degree:
        if not self._terms:
            return MINUS_INFINITY
        return max(sum(exps) for exps in self._terms)

    def degree_in(self, var: int) -> Degree:
        if not self._terms:
            return MINUS_INFINITY
        return max(exps[var] for exps in self._terms)

    def involves(self, var: int) -> bool:
        return any(exps[var] for exps in self._terms)

    def variables(self) -> List[int]:
        return [v for v in range(self.nvars) if self.involves(v)]

    def l1_norm(self) -> int:
        return sum(abs(c) for c in self._terms.values())

    def linf_norm(self) -> int:
        return max((abs(c) for c in self._terms.values()), default=0)

    def is_bounded(self, profile: BoundProfile) -> bool:
        return self.l1_norm() <= profile.k and self.degree() <= profile.t

    def leading_term(self) -> Tuple[Monomial, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self._terms, key=grlex_key)
        return exps, self._terms[exps]

    def canonical_sign(self) -> "IntPoly":
        """Return +f or -f, whichever has a positive leading coefficient."""
        if self._terms and self.leading_term()[1] < 0:
            return -self
        return self

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other: Any) -> "IntPoly":
        if isinstance(other, IntPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable counts differ: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, int):
            return IntPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other: Any) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        result = dict(self._terms)
        for exps, coeff in other._terms.items():
            value = result.get(exps, 0) + coeff
            if value:
                result[exps] = value
            else:
                result.pop(exps, None)
        return IntPoly._raw(result, self.nvars)

    __radd__ = __add__

    def __neg__(self) -> "IntPoly":
        return IntPoly._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other: Any) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Any) -> "IntPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "IntPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        result: Dict[Monomial, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                value = result.get(key, 0) + c1 * c2
                if value:
                    result[key] = value
                else:
                    result.pop(key, None)
        return IntPoly._raw(result, self.nvars)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "IntPoly":
        if exponent < 0:
            raise ValueError("negative exponent")
        result = IntPoly.constant(1, self.nvars)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, factor: int) -> "IntPoly":
        if not factor:
            return IntPoly.zero(self.nvars)
        return IntPoly._raw({e: c * factor for e, c in self._terms.items()}, self.nvars)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, int):
            other = IntPoly.constant(other, self.nvars)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def exact_div(self, other: "IntPoly") -> "IntPoly":
        """
        Exact division over Z by leading-term reduction.

        Raises:
            ZeroDivisionError: if other is zero
            ArithmeticError: if other does not divide self in Z[x]
        """
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return IntPoly.zero(self.nvars)
        lead_exps, lead_coeff = other.leading_term()
        remainder = dict(self._terms)
        quotient: Dict[Monomial, int] = {}
        while remainder:
            exps = max(remainder, key=grlex_key)
            coeff = remainder[exps]
            shift = tuple(a - b for a, b in zip(exps, lead_exps))
            if any(s < 0 for s in shift) or coeff % lead_coeff:
                raise ArithmeticError("polynomial division is not exact")
            q = coeff // lead_coeff
            quotient[shift] = q
            for e2, c2 in other._terms.items():
                key = tuple(a + b for a, b in zip(shift, e2))
                value = remainder.get(key, 0) - q * c2
                if value:
                    remainder[key] = value
                else:
                    remainder.pop(key, None)
        return IntPoly._raw(quotient, self.nvars)

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------

    def as_univariate(self, var: int) -> Dict[int, "IntPoly"]:
        """Map power -> coefficient polynomial (var exponent zeroed)."""
        parts: Dict[int, Dict[Monomial, int]] = {}
        for exps, coeff in self._terms.items():
            power = exps[var]
            rest = exps[:var] + (0,) + exps[var + 1:]
            parts.setdefault(power, {})[rest] = coeff
        return {power: IntPoly._raw(terms, self.nvars) for power, terms in sorted(parts.items())}

    def coefficient_poly(self, var: int, power: int) -> "IntPoly":
        if not 0 <= var < self.nvars:
            raise IndexError(f"variable index {var} out of range")
        terms = {
            exps[:var] + (0,) + exps[var + 1:]: coeff
            for exps, coeff in self._terms.items()
            if exps[var] == power
        }
        return IntPoly._raw(terms, self.nvars)

    def truncate_in(self, var: int, max_power: Degree) -> "IntPoly":
        """Drop every term whose power of var exceeds max_power."""
        terms = {e: c for e, c in self._terms.items() if e[var] <= max_power}
        return IntPoly._raw(terms, self.nvars)

    def collect(self, first_var: int) -> Dict[Monomial, "IntPoly"]:
        """
        Split by the exponents of the variables from first_var on.

        Returns:
            Map from trailing monomial to its coefficient, a polynomial
            in the first first_var variables.
        """
        groups: Dict[Monomial, Dict[Monomial, int]] = {}
        for exps, coeff in self._terms.items():
            groups.setdefault(exps[first_var:], {})[exps[:first_var]] = coeff
        ordered = sorted(groups, key=grlex_key, reverse=True)
        return {tail: IntPoly._raw(groups[tail], first_var) for tail in ordered}

    def extend(self, nvars: int) -> "IntPoly":
        """Append unused variables."""
        if nvars < self.nvars:
            raise ValueError("extend cannot drop variables")
        pad = (0,) * (nvars - self.nvars)
        return IntPoly._raw({e + pad: c for e, c in self._terms.items()}, nvars)

    def restrict(self, nvars: int) -> "IntPoly":
        """Drop trailing variables, which must not occur."""
        if any(any(e[nvars:]) for e in self._terms):
            raise ValueError(f"polynomial involves variables beyond x{nvars}")
        return IntPoly._raw({e[:nvars]: c for e, c in self._terms.items()}, nvars)

    # ------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------

    def evaluate(self, point: Sequence[Any], domain: "DomainAdapter") -> Any:
        """Evaluate at point, computing in domain."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} entries, expected {self.nvars}")
        powers: Dict[Tuple[int, int], Any] = {}

        def power(var: int, exponent: int) -> Any:
            key = (var, exponent)
            if key not in powers:
                powers[key] = domain.pow(point[var], exponent)
            return powers[key]

        total = domain.zero()
        for exps, coeff in self._terms.items():
            term = domain.from_int(coeff)
            for var, exponent in enumerate(exps):
                if exponent:
                    term = domain.mul(term, power(var, exponent))
            total = domain.add(total, term)
        return total

    def eval_mod(self, point: Sequence[int], p: int) -> int:
        """Evaluate at an integer point, reduced mod p."""
        total = 0
        for exps, coeff in self._terms.items():
            term = coeff
            for value, exponent in zip(point, exps):
                if exponent:
                    term = term * pow(value, exponent, p)
            total += term
        return total % p

    def specialize(self, assignment: Mapping[int, int], modulus: Optional[int] = None) -> "IntPoly":
        """
        Substitute integers for some variables.

        Args:
            assignment: variable index -> integer value
            modulus: reduce coefficients into 0..modulus-1 when given

        Returns:
            Polynomial in the same variables, assigned ones no longer occurring
        """
        result: Dict[Monomial, int] = {}
        for exps, coeff in self._terms.items():
            value = coeff
            rest = list(exps)
            for var, point in assignment.items():
                if exps[var]:
                    if modulus is None:
                        value *= point ** exps[var]
                    else:
                        value *= pow(point, exps[var], modulus)
                    rest[var] = 0
            key = tuple(rest)
            result[key] = result.get(key, 0) + value
        if modulus is not None:
            result = {e: c % modulus for e, c in result.items()}
        return IntPoly._raw({e: c for e, c in result.items() if c}, self.nvars)

    # ------------------------------------------------------------------
    # Text
    # ------------------------------------------------------------------

    def to_text(self, names: Optional[Sequence[str]] = None) -> str:
        return format_terms(self._terms, names or default_names(self.nvars))

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"IntPoly({self.to_text()!r}, nvars={self.nvars})"


# ----------------------------------------------------------------------
# Textual syntax
# ----------------------------------------------------------------------

_FACTOR = re.compile(r"^(?:(\d+)(?:/(\d+))?|([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?)$")
_DEFAULT_NAME = re.compile(r"^x(\d+)$")


def default_names(nvars: int) -> List[str]:
    return [f"x{i + 1}" for i in range(nvars)]


def _format_coefficient(value: Coefficient) -> str:
    if isinstance(value, Fraction) and value.denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    return str(int(value))


def format_terms(terms: Mapping[Monomial, Coefficient], names: Sequence[str]) -> str:
    """Render a term map in descending graded-lex order, e.g. "3*x1^2*x2 - 2*x1 + 1"."""
    if not terms:
        return "0"
    pieces: List[str] = []
    for exps in sorted(terms, key=grlex_key, reverse=True):
        coeff = terms[exps]
        factors = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(names, exps)
            if e
        ]
        magnitude = abs(coeff)
        if not factors:
            body = _format_coefficient(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coefficient(magnitude)] + factors)
        if not pieces:
            pieces.append(f"-{body}" if coeff < 0 else body)
        else:
            pieces.append(f"- {body}" if coeff < 0 else f"+ {body}")
    return " ".join(pieces)


def parse_terms(
    text: str,
    names: Optional[Sequence[str]] = None,
    nvars: Optional[int] = None,
) -> Tuple[Dict[Monomial, Fraction], int]:
    """
    Parse polynomial text with rational coefficients.

    Without names, variables are x1, x2, ... and the variable count is
    the largest index seen (or nvars when larger).

    Raises:
        UsageError: on malformed text or unknown variables
    """
    source = text.replace(" ", "").replace("\t", "")
    if not source:
        raise UsageError("empty polynomial text")
    lookup = {name: i for i, name in enumerate(names)} if names is not None else None

    parsed: List[Tuple[Dict[int, int], Fraction]] = []
    highest = -1
    for match in re.finditer(r"([+-]?)([^+-]*)", source):
        sign, body = match.group(1), match.group(2)
        if not sign and not body:
            continue
        if not body:
            raise UsageError(f"dangling sign in polynomial {text!r}")
        coeff = Fraction(-1 if sign == "-" else 1)
        powers: Dict[int, int] = {}
        for factor in body.split("*"):
            m = _FACTOR.match(factor)
            if not m:
                raise UsageError(f"cannot parse factor {factor!r} in {text!r}")
            if m.group(1) is not None:
                denominator = int(m.group(2)) if m.group(2) is not None else 1
                if denominator == 0:
                    raise UsageError(f"zero denominator in {text!r}")
                coeff *= Fraction(int(m.group(1)), denominator)
                continue
            name, exponent = m.group(3), int(m.group(4) or 1)
            if lookup is not None:
                if name not in lookup:
                    raise UsageError(f"unknown variable {name!r} in {text!r}")
                index = lookup[name]
            else:
                dm = _DEFAULT_NAME.match(name)
                if not dm or int(dm.group(1)) < 1:
                    raise UsageError(f"variables must be named x1, x2, ...; got {name!r}")
                index = int(dm.group(1)) - 1
            highest = max(highest, index)
            powers[index] = powers.get(index, 0) + exponent
        parsed.append((powers, coeff))

    if lookup is not None:
        count = len(names)
    else:
        count = max(highest + 1, nvars or 0)
        if nvars is not None and highest + 1 > nvars:
            raise UsageError(f"{text!r} uses more than {nvars} variables")

    terms: Dict[Monomial, Fraction] = {}
    for powers, coeff in parsed:
        exps = tuple(powers.get(i, 0) for i in range(count))
        value = terms.get(exps, Fraction(0)) + coeff
        if value:
            terms[exps] = value
        else:
            terms.pop(exps, None)
    return terms, count


def parse_poly(
    text: str,
    nvars: Optional[int] = None,
    names: Optional[Sequence[str]] = None,
) -> IntPoly:
    """Parse integer polynomial text such as "x2^2 + 1"."""
    terms, count = parse_terms(text, names=names, nvars=nvars)
    if any(c.denominator != 1 for c in terms.values()):
        raise UsageError(f"{text!r} has non-integer coefficients")
    return IntPoly({e: int(c) for e, c in terms.items()}, count)


def format_poly(f: IntPoly, names: Optional[Sequence[str]] = None) -> str:
    return f.to_text(names)


# ----------------------------------------------------------------------
# Enumeration of bounded polynomials
# ----------------------------------------------------------------------

def _exponents_of_degree(nvars: int, degree: int) -> Iterator[Monomial]:
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for first in range(degree, -1, -1):
        for rest in _exponents_of_degree(nvars - 1, degree - first):
            yield (first,) + rest


def monomials_upto(nvars: int, t: int) -> List[Monomial]:
    """All exponent vectors of total degree <= t, descending graded-lex."""
    monomials: List[Monomial] = []
    for degree in range(t, -1, -1):
        monomials.extend(sorted(_exponents_of_degree(nvars, degree), reverse=True))
    return monomials


def count_bounded(nvars: int, profile: BoundProfile, signed: bool = False) -> int:
    """
    Exact number of non-zero (k, t)-bounded polynomials.

    Args:
        nvars: variable count
        profile: the (k, t) profile
        signed: count f and -f separately

    Returns:
        The enumeration size (up to sign unless signed)
    """
    monomial_count = comb(nvars + profile.t, profile.t)
    total = sum(
        comb(monomial_count, j) * comb(profile.k, j) * 2 ** j
        for j in range(1, min(monomial_count, profile.k) + 1)
    )
    return total if signed else total // 2


def coarse_count_bound(nvars: int, k: int) -> int:
    """Upper bound (3kn)^k on the signed (k, k)-bounded count (n >= 1)."""
    return (3 * k * max(nvars, 1)) ** k


def enumerate_bounded(nvars: int, profile: BoundProfile) -> Iterator[IntPoly]:
    """
    Yield each non-zero (k, t)-bounded polynomial once, up to sign.

    The graded-lex leading coefficient of every yielded polynomial is
    positive. The order is deterministic.
    """
    monomials = monomials_upto(nvars, profile.t)
    chosen: List[Tuple[Monomial, int]] = []

    def extend(start: int, budget: int) -> Iterator[IntPoly]:
        for index in range(start, len(monomials)):
            for magnitude in range(1, budget + 1):
                for sign in ((1,) if not chosen else (1, -1)):
                    chosen.append((monomials[index], sign * magnitude))
                    yield IntPoly._raw(dict(chosen), nvars)
                    yield from extend(index + 1, budget - magnitude)
                    chosen.pop()

    yield from extend(0, profile.k)


def check_prime(p: int) -> None:
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise NotPrimeError(f"{p} is not prime", {"p": p})


def check_reduced(values: Sequence[int], p: int) -> None:
    for value in values:
        if not 0 <= value < p:
            raise PreconditionError(f"{value} is not reduced mod {p}", {"value": value, "p": p})


def check_enumeration_size(nvars: int, profile: BoundProfile) -> int:
    """Return the enumeration size, aborting when it exceeds the configured cap."""
    size = count_bounded(nvars, profile)
    cap = get_settings().MAX_ENUMERATION
    if size > cap:
        raise BoundAbortError(
            f"enumeration of {size} bounded polynomials exceeds the cap {cap}",
            {"nvars": nvars, "k": profile.k, "t": profile.t},
        )
    return size


def split_relations(
    values: Sequence[int], p: int, profile: BoundProfile
) -> Tuple[List[IntPoly], List[IntPoly]]:
    """
    Partition the bounded polynomials by vanishing at values over F_p.

    Args:
        values: a_1..a_n, the i-th entry being the value of x_i
        p: prime modulus
        profile: the (k, t) profile

    Returns:
        (L1, L2): relations vanishing at values, and the rest
    """
    check_prime(p)
    check_reduced(values, p)
    nvars = len(values)
    size = check_enumeration_size(nvars, profile)

    table = {
        exps: _monomial_value(values, exps, p)
        for exps in monomials_upto(nvars, profile.t)
    }
    relations: List[IntPoly] = []
    others: List[IntPoly] = []
    for f in enumerate_bounded(nvars, profile):
        if sum(c * table[e] for e, c in f._terms.items()) % p == 0:
            relations.append(f)
        else:
            others.append(f)
    logger.info(
        f"Split {size} ({profile.k},{profile.t})-bounded polynomials in {nvars} variables mod {p}: "
        f"{len(relations)} relations"
    )
    return relations, others


def _monomial_value(values: Sequence[int], exps: Monomial, p: int) -> int:
    result = 1
    for value, exponent in zip(values, exps):
        if exponent:
            result = result * pow(value, exponent, p) % p
    return result
