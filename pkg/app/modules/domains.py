"""
Coefficient domains.
One small adapter interface lets polynomials, determinants and gcds run
unchanged over Z, Q, F_p, Z[x1..xN], F_{q^d} and number-field towers.
"""

import itertools
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Iterator, Optional, Sequence, Tuple

from app.core.errors import PreconditionError
from app.modules.int_poly import IntPoly, check_prime


class DomainAdapter(ABC):
    """Exact arithmetic on the elements of one integral domain."""

    name: str = "domain"
    is_field: bool = False
    characteristic: int = 0

    @abstractmethod
    def zero(self) -> Any:
        ...

    @abstractmethod
    def one(self) -> Any:
        ...

    @abstractmethod
    def from_int(self, value: int) -> Any:
        ...

    @abstractmethod
    def add(self, a: Any, b: Any) -> Any:
        ...

    @abstractmethod
    def neg(self, a: Any) -> Any:
        ...

    @abstractmethod
    def mul(self, a: Any, b: Any) -> Any:
        ...

    @abstractmethod
    def is_zero(self, a: Any) -> bool:
        ...

    def sub(self, a: Any, b: Any) -> Any:
        return self.add(a, self.neg(b))

    def eq(self, a: Any, b: Any) -> bool:
        return self.is_zero(self.sub(a, b))

    def pow(self, a: Any, exponent: int) -> Any:
        result = self.one()
        base = a
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def inv(self, a: Any) -> Any:
        raise ArithmeticError(f"{self.name} is not a field")

    def exact_div(self, a: Any, b: Any) -> Any:
        """a / b, defined when b divides a."""
        if self.is_zero(b):
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return self.mul(a, self.inv(b))

    def to_text(self, a: Any) -> str:
        return str(a)

    def __repr__(self) -> str:
        return self.name


class IntegerRing(DomainAdapter):
    name = "ZZ"

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def from_int(self, value: int) -> int:
        return int(value)

    def add(self, a: int, b: int) -> int:
        return a + b

    def neg(self, a: int) -> int:
        return -a

    def mul(self, a: int, b: int) -> int:
        return a * b

    def sub(self, a: int, b: int) -> int:
        return a - b

    def is_zero(self, a: int) -> bool:
        return a == 0

    def exact_div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("integer division by zero")
        quotient, remainder = divmod(a, b)
        if remainder:
            raise ArithmeticError(f"{b} does not divide {a}")
        return quotient


class RationalField(DomainAdapter):
    name = "QQ"
    is_field = True

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def from_int(self, value: int) -> Fraction:
        return Fraction(value)

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def neg(self, a: Fraction) -> Fraction:
        return -a

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a * b

    def sub(self, a: Fraction, b: Fraction) -> Fraction:
        return a - b

    def is_zero(self, a: Fraction) -> bool:
        return a == 0

    def inv(self, a: Fraction) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def to_text(self, a: Fraction) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class PrimeField(DomainAdapter):
    """F_p with elements represented by 0..p-1."""

    is_field = True

    def __init__(self, p: int):
        check_prime(p)
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def zero(self) -> int:
        return 0

    def one(self) -> int:
        return 1

    def from_int(self, value: int) -> int:
        return value % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def pow(self, a: int, exponent: int) -> int:
        return pow(a, exponent, self.p)

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of zero in {self.name}")
        return pow(a, -1, self.p)


class PolynomialRing(DomainAdapter):
    """Z[x1..xN], elements are IntPoly in nvars variables."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.name = f"ZZ[{nvars} vars]"

    def zero(self) -> IntPoly:
        return IntPoly.zero(self.nvars)

    def one(self) -> IntPoly:
        return IntPoly.constant(1, self.nvars)

    def from_int(self, value: int) -> IntPoly:
        return IntPoly.constant(value, self.nvars)

    def add(self, a: IntPoly, b: IntPoly) -> IntPoly:
        return a + b

    def neg(self, a: IntPoly) -> IntPoly:
        return -a

    def mul(self, a: IntPoly, b: IntPoly) -> IntPoly:
        return a * b

    def sub(self, a: IntPoly, b: IntPoly) -> IntPoly:
        return a - b

    def is_zero(self, a: IntPoly) -> bool:
        return a.is_zero()

    def pow(self, a: IntPoly, exponent: int) -> IntPoly:
        return a ** exponent

    def exact_div(self, a: IntPoly, b: IntPoly) -> IntPoly:
        return a.exact_div(b)


class ExtensionField(DomainAdapter):
    """
    F_{q^d} as F_q[z] / (m(z)) for a monic irreducible m of degree d.

    Elements are coefficient tuples (c_0, ..., c_{d-1}).
    """

    is_field = True

    def __init__(self, q: int, modulus: Optional[Sequence[int]] = None, degree: int = 2):
        check_prime(q)
        self.q = q
        self.characteristic = q
        if modulus is None:
            modulus = find_irreducible(q, degree)
        modulus = [c % q for c in modulus]
        if len(modulus) < 2 or modulus[-1] != 1:
            raise PreconditionError("extension modulus must be monic of degree >= 1")
        self.modulus: Tuple[int, ...] = tuple(modulus)
        self.degree = len(modulus) - 1
        self.order = q ** self.degree
        self.name = f"GF({q}^{self.degree})"

    def zero(self) -> Tuple[int, ...]:
        return (0,) * self.degree

    def one(self) -> Tuple[int, ...]:
        return (1,) + (0,) * (self.degree - 1)

    def from_int(self, value: int) -> Tuple[int, ...]:
        return (value % self.q,) + (0,) * (self.degree - 1)

    def generator(self) -> Tuple[int, ...]:
        if self.degree == 1:
            return ((-self.modulus[0]) % self.q,)
        return (0, 1) + (0,) * (self.degree - 2)

    def add(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple((x + y) % self.q for x, y in zip(a, b))

    def neg(self, a: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(-x % self.q for x in a)

    def mul(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        d, q = self.degree, self.q
        product = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    product[i + j] += x * y
        for power in range(2 * d - 2, d - 1, -1):
            c = product[power] % q
            if c:
                for i in range(d):
                    product[power - d + i] -= c * self.modulus[i]
            product[power] = 0
        return tuple(c % q for c in product[:d])

    def is_zero(self, a: Tuple[int, ...]) -> bool:
        return not any(x % self.q for x in a)

    def inv(self, a: Tuple[int, ...]) -> Tuple[int, ...]:
        if self.is_zero(a):
            raise ZeroDivisionError(f"inverse of zero in {self.name}")
        return self.pow(a, self.order - 2)

    def elements(self) -> Iterator[Tuple[int, ...]]:
        """Every element, zero first."""
        for coeffs in itertools.product(range(self.q), repeat=self.degree):
            yield tuple(reversed(coeffs))


def find_irreducible(q: int, degree: int) -> Tuple[int, ...]:
    """
    Smallest monic irreducible of degree 1..3 over F_q (low-to-high coefficients).

    Below degree 4, irreducible is the same as having no root in F_q.
    """
    if not 1 <= degree <= 3:
        raise PreconditionError("only extension degrees 1..3 are supported")
    for tail in itertools.product(range(q), repeat=degree):
        coeffs = tuple(reversed(tail)) + (1,)
        if degree == 1 or all(_eval_mod(coeffs, x, q) for x in range(q)):
            return coeffs
    raise PreconditionError(f"no irreducible of degree {degree} over F_{q}")


def _eval_mod(coeffs: Sequence[int], x: int, q: int) -> int:
    value = 0
    for c in reversed(coeffs):
        value = (value * x + c) % q
    return value
