"""
Number-field towers anchored in F_p.

A tower Q(b_1)(b_2)... stores, per generator, a monic defining
polynomial over the lower levels and the residue the generator maps to
under the anchor homomorphism into F_p. Elements are dense nested
coefficient tuples: height 0 is a Fraction, height h a tuple of
height-(h-1) entries of length deg(b_h).
"""

import logging
from fractions import Fraction
from functools import reduce as fold
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import sympy

from app.core.config import get_settings
from app.core.errors import AnchorError, InternalError, PreconditionError, UsageError
from app.models.schemas import TowerDocument, TowerLevelDocument
from app.modules.domains import DomainAdapter
from app.modules.int_poly import Monomial, check_prime, format_terms, parse_terms
from app.modules.resultants import DomainPoly, euclid_gcd, extended_gcd

logger = logging.getLogger(__name__)

Payload = Any


class TowerLevel(NamedTuple):
    """Generator with defining polynomial x^d + c_{d-1} x^{d-1} + ... + c_0."""
    name: str
    modulus: Tuple[Payload, ...]
    anchor: int
    certificate: str

    @property
    def degree(self) -> int:
        return len(self.modulus)


class Tower:
    """Immutable tower of simple extensions of Q with an anchor prime."""

    def __init__(self, prime: int, levels: Sequence[TowerLevel] = ()):
        self.prime = prime
        self.levels: Tuple[TowerLevel, ...] = tuple(levels)
        self._prefixes: Dict[int, "Tower"] = {}
        self._zeros: Dict[int, Payload] = {}

    @classmethod
    def rational(cls, prime: int) -> "Tower":
        check_prime(prime)
        return cls(prime)

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def names(self) -> List[str]:
        return [level.name for level in self.levels]

    def degree(self) -> int:
        """[K : Q], the product of the defining degrees."""
        return fold(lambda acc, level: acc * level.degree, self.levels, 1)

    def truncate(self, height: int) -> "Tower":
        if height == self.height:
            return self
        if height not in self._prefixes:
            self._prefixes[height] = Tower(self.prime, self.levels[:height])
        return self._prefixes[height]

    def is_prefix_of(self, other: "Tower") -> bool:
        if self.prime != other.prime or self.height > other.height:
            return False
        return all(
            mine.name == theirs.name and mine.modulus == theirs.modulus and mine.anchor == theirs.anchor
            for mine, theirs in zip(self.levels, other.levels)
        )

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, Tower) and other.height == self.height and self.is_prefix_of(other)

    def __hash__(self) -> int:
        return hash((self.prime, tuple(self.names)))

    def __repr__(self) -> str:
        if not self.levels:
            return f"QQ mod {self.prime}"
        degrees = ",".join(f"{level.name}:{level.degree}" for level in self.levels)
        return f"QQ({degrees}) mod {self.prime}"

    # ------------------------------------------------------------------
    # Payload arithmetic
    # ------------------------------------------------------------------

    def _zero(self, h: int) -> Payload:
        if h == 0:
            return Fraction(0)
        if h not in self._zeros:
            self._zeros[h] = tuple(self._zero(h - 1) for _ in range(self.levels[h - 1].degree))
        return self._zeros[h]

    def _from_fraction(self, h: int, value: Fraction) -> Payload:
        if h == 0:
            return Fraction(value)
        d = self.levels[h - 1].degree
        return (self._from_fraction(h - 1, value),) + tuple(self._zero(h - 1) for _ in range(d - 1))

    def _is_zero(self, h: int, a: Payload) -> bool:
        if h == 0:
            return a == 0
        return all(self._is_zero(h - 1, c) for c in a)

    def _add(self, h: int, a: Payload, b: Payload) -> Payload:
        if h == 0:
            return a + b
        return tuple(self._add(h - 1, x, y) for x, y in zip(a, b))

    def _neg(self, h: int, a: Payload) -> Payload:
        if h == 0:
            return -a
        return tuple(self._neg(h - 1, x) for x in a)

    def _sub(self, h: int, a: Payload, b: Payload) -> Payload:
        if h == 0:
            return a - b
        return tuple(self._sub(h - 1, x, y) for x, y in zip(a, b))

    def _mul(self, h: int, a: Payload, b: Payload) -> Payload:
        if h == 0:
            return a * b
        level = self.levels[h - 1]
        d = level.degree
        product = [self._zero(h - 1)] * (2 * d - 1)
        for i, x in enumerate(a):
            if self._is_zero(h - 1, x):
                continue
            for j, y in enumerate(b):
                if not self._is_zero(h - 1, y):
                    product[i + j] = self._add(h - 1, product[i + j], self._mul(h - 1, x, y))
        for power in range(2 * d - 2, d - 1, -1):
            c = product[power]
            if self._is_zero(h - 1, c):
                continue
            for i, m in enumerate(level.modulus):
                product[power - d + i] = self._sub(h - 1, product[power - d + i], self._mul(h - 1, c, m))
        return tuple(product[:d])

    def _inv(self, h: int, a: Payload) -> Payload:
        if self._is_zero(h, a):
            raise ZeroDivisionError("inverse of zero in a number field")
        if h == 0:
            return 1 / a
        sub = self.truncate(h - 1)
        field = TowerField(sub)
        level = self.levels[h - 1]
        element = DomainPoly([TowerElem(sub, c) for c in a], field)
        modulus = DomainPoly([TowerElem(sub, c) for c in level.modulus] + [sub.one()], field)
        d, s, _ = extended_gcd(element, modulus)
        if d.degree() != 0:
            raise InternalError(
                f"defining polynomial of {level.name} is reducible",
                {"gcd": d.to_text(level.name)},
            )
        padded = [s.coeff(i).payload for i in range(level.degree)]
        return tuple(padded)

    def _anchor(self, h: int, a: Payload) -> int:
        p = self.prime
        if h == 0:
            if a.denominator % p == 0:
                raise AnchorError(
                    f"{a} has a denominator divisible by {p}", {"value": a, "p": p}
                )
            return a.numerator * pow(a.denominator, -1, p) % p
        alpha = self.levels[h - 1].anchor
        value = 0
        for c in reversed(a):
            value = (value * alpha + self._anchor(h - 1, c)) % p
        return value

    def _flatten(self, h: int, a: Payload) -> Dict[Monomial, Fraction]:
        if h == 0:
            return {(): a} if a != 0 else {}
        terms: Dict[Monomial, Fraction] = {}
        for power, c in enumerate(a):
            for exps, q in self._flatten(h - 1, c).items():
                terms[exps + (power,)] = q
        return terms

    # ------------------------------------------------------------------
    # Elements
    # ------------------------------------------------------------------

    def element(self, payload: Payload) -> "TowerElem":
        return TowerElem(self, payload)

    def zero(self) -> "TowerElem":
        return TowerElem(self, self._zero(self.height))

    def one(self) -> "TowerElem":
        return self.from_fraction(1)

    def from_int(self, value: int) -> "TowerElem":
        return self.from_fraction(value)

    def from_fraction(self, value: Any) -> "TowerElem":
        return TowerElem(self, self._from_fraction(self.height, Fraction(value)))

    def generator(self, index: int) -> "TowerElem":
        """Generator b_{index+1} viewed at the top of the tower."""
        if not 0 <= index < self.height:
            raise IndexError(f"tower has no generator {index}")
        level = self.levels[index]
        sub = self.truncate(index)
        if level.degree == 1:
            payload = (sub._neg(index, level.modulus[0]),)
        else:
            payload = (sub._zero(index), sub._from_fraction(index, Fraction(1))) + tuple(
                sub._zero(index) for _ in range(level.degree - 2)
            )
        return self.embed(TowerElem(self.truncate(index + 1), payload))

    def reduce(self, terms: Mapping[Sequence[int], Any]) -> "TowerElem":
        """Normal form of a polynomial in the generators with rational coefficients."""
        generators = [self.generator(j) for j in range(self.height)]
        total = self.zero()
        for exps, coeff in terms.items():
            exps = tuple(exps) + (0,) * (self.height - len(exps))
            if len(exps) > self.height:
                raise UsageError(f"monomial {exps} has more generators than the tower")
            term = self.from_fraction(coeff)
            for gen, exponent in zip(generators, exps):
                if exponent:
                    term = term * gen ** exponent
            total = total + term
        return total

    def parse_element(self, text: str) -> "TowerElem":
        terms, _ = parse_terms(text, names=self.names)
        return self.reduce(terms)

    def embed(self, elem: "TowerElem") -> "TowerElem":
        """View an element of a prefix tower inside this tower."""
        if elem.tower is self:
            return elem
        if not elem.tower.is_prefix_of(self):
            raise PreconditionError("element does not belong to a sub-tower of this tower")
        payload = elem.payload
        for h in range(elem.tower.height + 1, self.height + 1):
            payload = (payload,) + tuple(self._zero(h - 1) for _ in range(self.levels[h - 1].degree - 1))
        return TowerElem(self, payload)

    def adjoin(self, name: str, modulus: Sequence[Payload], anchor: int, certificate: str = "") -> "Tower":
        """
        Extend by a root of x^d + c_{d-1} x^{d-1} + ... + c_0 mapped to anchor.

        Raises:
            AnchorError: if the anchor image of the polynomial does not vanish at anchor
        """
        if not modulus:
            raise PreconditionError("defining polynomial must have degree >= 1")
        if name in self.names:
            raise PreconditionError(f"generator {name} already exists")
        p = self.prime
        anchor %= p
        image = [self._anchor(self.height, c) for c in modulus] + [1]
        value = 0
        for c in reversed(image):
            value = (value * anchor + c) % p
        if value:
            raise AnchorError(
                f"defining polynomial of {name} does not vanish at {anchor} mod {p}",
                {"name": name, "anchor": anchor, "p": p},
            )
        level = TowerLevel(name=name, modulus=tuple(modulus), anchor=anchor, certificate=certificate)
        extended = Tower(p, self.levels + (level,))
        logger.info(
            f"Adjoined {name} of degree {level.degree} with anchor {anchor} mod {p}; "
            f"tower degree {extended.degree()}"
        )
        return extended

    def defining_polynomial(self, index: int) -> Dict[Monomial, Fraction]:
        """Term map of the defining polynomial of level index in b_1..b_{index+1}."""
        level = self.levels[index]
        sub = self.truncate(index)
        terms: Dict[Monomial, Fraction] = {(0,) * index + (level.degree,): Fraction(1)}
        for power, c in enumerate(level.modulus):
            for exps, q in sub._flatten(index, c).items():
                terms[exps + (power,)] = q
        return terms

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_document(self) -> TowerDocument:
        levels = []
        for index, level in enumerate(self.levels):
            levels.append(
                TowerLevelDocument(
                    name=level.name,
                    degree=level.degree,
                    defining_polynomial=format_terms(self.defining_polynomial(index), self.names[: index + 1]),
                    anchor=level.anchor,
                    certificate=level.certificate,
                )
            )
        return TowerDocument(prime=self.prime, levels=levels, degree=self.degree())

    @classmethod
    def from_document(cls, document: TowerDocument) -> "Tower":
        tower = cls.rational(document.prime)
        for level in document.levels:
            names = tower.names + [level.name]
            terms, _ = parse_terms(level.defining_polynomial, names=names)
            by_power: Dict[int, Dict[Monomial, Fraction]] = {}
            for exps, q in terms.items():
                by_power.setdefault(exps[-1], {})[exps[:-1]] = q
            degree = max(by_power, default=0)
            if degree < 1 or by_power[degree] != {(0,) * tower.height: Fraction(1)}:
                raise UsageError(f"defining polynomial of {level.name} is not monic of degree >= 1")
            modulus = [tower.reduce(by_power.get(i, {})).payload for i in range(degree)]
            tower = tower.adjoin(level.name, modulus, level.anchor, level.certificate)
        return tower


class TowerElem:
    """Element of a tower in normal form."""

    __slots__ = ("tower", "payload")

    def __init__(self, tower: Tower, payload: Payload):
        self.tower = tower
        self.payload = payload

    def _coerce(self, other: Any) -> "TowerElem":
        if isinstance(other, TowerElem):
            if other.tower is self.tower:
                return other
            if other.tower.is_prefix_of(self.tower):
                return self.tower.embed(other)
            if self.tower.is_prefix_of(other.tower):
                raise PreconditionError("embed the smaller operand first")
            raise PreconditionError("elements live in unrelated towers")
        if isinstance(other, (int, Fraction)):
            return self.tower.from_fraction(other)
        return NotImplemented

    def __add__(self, other: Any) -> "TowerElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TowerElem(self.tower, self.tower._add(self.tower.height, self.payload, other.payload))

    __radd__ = __add__

    def __neg__(self) -> "TowerElem":
        return TowerElem(self.tower, self.tower._neg(self.tower.height, self.payload))

    def __sub__(self, other: Any) -> "TowerElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TowerElem(self.tower, self.tower._sub(self.tower.height, self.payload, other.payload))

    def __rsub__(self, other: Any) -> "TowerElem":
        return (-self) + other

    def __mul__(self, other: Any) -> "TowerElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TowerElem(self.tower, self.tower._mul(self.tower.height, self.payload, other.payload))

    __rmul__ = __mul__

    def inverse(self) -> "TowerElem":
        return TowerElem(self.tower, self.tower._inv(self.tower.height, self.payload))

    def __truediv__(self, other: Any) -> "TowerElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, exponent: int) -> "TowerElem":
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = self.tower.one()
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def is_zero(self) -> bool:
        return self.tower._is_zero(self.tower.height, self.payload)

    def anchor(self) -> int:
        """Image under the anchor homomorphism into F_p."""
        return self.tower._anchor(self.tower.height, self.payload)

    def terms(self) -> Dict[Monomial, Fraction]:
        return self.tower._flatten(self.tower.height, self.payload)

    def is_rational(self) -> bool:
        return all(not any(exps) for exps in self.terms())

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return next(iter(self.terms().values()), Fraction(0))

    def to_text(self) -> str:
        return format_terms(self.terms(), self.tower.names)

    def __eq__(self, other: Any) -> bool:
        try:
            other = self._coerce(other)
        except PreconditionError:
            return False
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms().items())))

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"TowerElem({self.to_text()!r})"


class TowerField(DomainAdapter):
    """DomainAdapter view of a tower."""

    is_field = True

    def __init__(self, tower: Tower):
        self.tower = tower
        self.name = repr(tower)

    def zero(self) -> TowerElem:
        return self.tower.zero()

    def one(self) -> TowerElem:
        return self.tower.one()

    def from_int(self, value: int) -> TowerElem:
        return self.tower.from_int(value)

    def add(self, a: TowerElem, b: TowerElem) -> TowerElem:
        return a + b

    def neg(self, a: TowerElem) -> TowerElem:
        return -a

    def mul(self, a: TowerElem, b: TowerElem) -> TowerElem:
        return a * b

    def sub(self, a: TowerElem, b: TowerElem) -> TowerElem:
        return a - b

    def is_zero(self, a: TowerElem) -> bool:
        return a.is_zero()

    def inv(self, a: TowerElem) -> TowerElem:
        return a.inverse()

    def to_text(self, a: TowerElem) -> str:
        return a.to_text()


def apply_anchor(elem: TowerElem) -> int:
    return elem.anchor()


def tower_degree(tower: Tower) -> int:
    return tower.degree()


def embed_poly(f: DomainPoly, tower: Tower) -> DomainPoly:
    """Move a polynomial over a sub-tower into tower."""
    if isinstance(f.domain, TowerField) and f.domain.tower is tower:
        return f
    return f.map(tower.embed, TowerField(tower))


# ----------------------------------------------------------------------
# Norms and factorization
# ----------------------------------------------------------------------

def _elem_to_expr(elem: TowerElem, symbols: Sequence[sympy.Symbol]) -> sympy.Expr:
    expr = sympy.Integer(0)
    for exps, q in elem.terms().items():
        term = sympy.Rational(q.numerator, q.denominator)
        for symbol, exponent in zip(symbols, exps):
            term *= symbol ** exponent
        expr += term
    return expr


def norm_polynomial(f: DomainPoly) -> sympy.Poly:
    """
    N(f) in Q[x]: iterated resultants against the defining polynomials,
    top level first.
    """
    if not isinstance(f.domain, TowerField):
        raise PreconditionError("norm_polynomial needs a polynomial over a tower")
    tower = f.domain.tower
    x = sympy.Dummy("x")
    generators = [sympy.Dummy(name) for name in tower.names]
    expr = sympy.expand(sum(_elem_to_expr(c, generators) * x ** i for i, c in enumerate(f.coeffs)))
    for index in range(tower.height - 1, -1, -1):
        defining = sympy.Integer(0)
        for exps, q in tower.defining_polynomial(index).items():
            term = sympy.Rational(q.numerator, q.denominator)
            for symbol, exponent in zip(generators, exps):
                term *= symbol ** exponent
            defining += term
        if expr.has(generators[index]):
            expr = sympy.expand(sympy.resultant(defining, expr, generators[index]))
        else:
            expr = sympy.expand(expr ** tower.levels[index].degree)
    return sympy.Poly(expr, x, domain=sympy.QQ)


def _poly_from_sympy(poly: sympy.Poly, field: TowerField) -> DomainPoly:
    coeffs = []
    for c in reversed(poly.all_coeffs()):
        c = sympy.Rational(c)
        coeffs.append(field.tower.from_fraction(Fraction(int(c.p), int(c.q))))
    return DomainPoly(coeffs, field)


def _poly_to_sympy(f: DomainPoly, x: sympy.Symbol) -> sympy.Poly:
    coeffs = []
    for c in reversed(f.coeffs):
        q = c.to_fraction()
        coeffs.append(sympy.Rational(q.numerator, q.denominator))
    return sympy.Poly(coeffs, x, domain=sympy.QQ)


def square_free_parts(f: DomainPoly) -> List[Tuple[DomainPoly, int]]:
    """Yun's decomposition of a monic f over a field of characteristic zero."""
    f = f.monic()
    if f.degree() < 1:
        return []
    derivative = f.derivative()
    a0 = euclid_gcd(f, derivative)
    b = f // a0
    c = derivative // a0
    multiplicity = 1
    parts: List[Tuple[DomainPoly, int]] = []
    while b.degree() > 0:
        d = c - b.derivative()
        a = euclid_gcd(b, d)
        if a.degree() > 0:
            parts.append((a, multiplicity))
        b = b // a
        c = d // a
        multiplicity += 1
    return parts


def _shift_scalar(attempt: int) -> int:
    """0, 1, -1, 2, -2, ..."""
    return (attempt + 1) // 2 * (1 if attempt % 2 else -1)


class TowerFactor(NamedTuple):
    factor: DomainPoly
    multiplicity: int
    certificate: str


def _split_squarefree(h: DomainPoly) -> List[Tuple[DomainPoly, str]]:
    field: TowerField = h.domain
    tower = field.tower
    if h.degree() == 1:
        return [(h.monic(), "linear")]
    if tower.height == 0:
        x = sympy.Dummy("x")
        _, factors = _poly_to_sympy(h, x).factor_list()
        return [
            (_poly_from_sympy(poly, field).monic(), f"irreducible over QQ (degree {poly.degree()})")
            for poly, _ in factors
        ]

    attempts = get_settings().FACTOR_SHIFT_ATTEMPTS
    for attempt in range(attempts):
        s = _shift_scalar(attempt)
        theta = tower.zero()
        for j in range(tower.height):
            theta = theta + tower.generator(j) * (s ** (j + 1))
        shifted = h.shift(-theta)
        norm = norm_polynomial(shifted)
        if sympy.gcd(norm, norm.diff()).degree() == 0:
            break
    else:
        raise InternalError(
            f"no square-free norm after {attempts} shifts",
            {"polynomial": h.to_text()},
        )

    _, factors = norm.factor_list()
    pieces: List[Tuple[DomainPoly, str]] = []
    for poly, _ in factors:
        g = euclid_gcd(shifted, _poly_from_sympy(poly, field))
        if g.degree() >= 1:
            certificate = (
                f"norm square-free at shift {s}; norm factor of degree {poly.degree()} irreducible over QQ"
            )
            pieces.append((g.shift(theta).monic(), certificate))
    if sum(piece.degree() for piece, _ in pieces) != h.degree():
        raise InternalError(
            "norm factorization does not account for every root",
            {"polynomial": h.to_text(), "pieces": [piece.to_text() for piece, _ in pieces]},
        )
    return pieces


def _lex_key(f: DomainPoly) -> Tuple[Any, ...]:
    return tuple(tuple(sorted(c.terms().items())) for c in reversed(f.coeffs))


def factor_univariate(f: DomainPoly) -> List[TowerFactor]:
    """
    Monic irreducible factors over the tower field with multiplicities.

    The product of factor^multiplicity times lc(f) is f.
    """
    if f.is_zero():
        raise PreconditionError("cannot factor the zero polynomial")
    if not isinstance(f.domain, TowerField):
        raise PreconditionError("factor_univariate needs a polynomial over a tower")
    result: List[TowerFactor] = []
    for part, multiplicity in square_free_parts(f):
        for factor, certificate in _split_squarefree(part):
            result.append(TowerFactor(factor, multiplicity, certificate))
    result.sort(key=lambda tf: (tf.factor.degree(), _lex_key(tf.factor), tf.multiplicity))
    return result


class RootSelection(NamedTuple):
    tower: Tower
    root: TowerElem
    factor: DomainPoly
    adjoined: bool


def select_compatible_root(G: DomainPoly, anchor: int, name: str) -> RootSelection:
    """
    Root of G whose anchor image is the given residue.

    Picks the least-degree irreducible factor of G vanishing at the anchor
    mod p (ties: least coefficient sequence). Degree-1 factors give a root
    in the current tower; others extend it by a new generator.

    Raises:
        AnchorError: no factor's image vanishes at anchor
    """
    if not isinstance(G.domain, TowerField):
        raise PreconditionError("select_compatible_root needs a polynomial over a tower")
    if G.is_zero() or G.degree() < 1:
        raise PreconditionError("select_compatible_root needs a polynomial of degree >= 1")
    tower = G.domain.tower
    p = tower.prime
    anchor %= p

    compatible: List[TowerFactor] = []
    skipped: List[str] = []
    factors = factor_univariate(G)
    for tf in factors:
        try:
            image = [c.anchor() for c in tf.factor.coeffs]
        except AnchorError as exc:
            skipped.append(f"{tf.factor.to_text()}: {exc.message}")
            continue
        value = 0
        for c in reversed(image):
            value = (value * anchor + c) % p
        if value == 0:
            compatible.append(tf)
    if not compatible:
        raise AnchorError(
            f"no irreducible factor of G vanishes at {anchor} mod {p}",
            {
                "G": G.to_text(),
                "factors": [tf.factor.to_text() for tf in factors],
                "skipped": skipped,
                "anchor": anchor,
            },
        )

    chosen = compatible[0]
    if chosen.factor.degree() == 1:
        root = -chosen.factor.coeff(0)
        if root.anchor() != anchor:
            raise InternalError(f"linear root {root} does not map to {anchor}")
        return RootSelection(tower, root, chosen.factor, False)

    modulus = [c.payload for c in chosen.factor.coeffs[:-1]]
    extended = tower.adjoin(name, modulus, anchor, chosen.certificate)
    root = extended.generator(extended.height - 1)
    return RootSelection(extended, root, chosen.factor, True)
