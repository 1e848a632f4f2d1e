"""
Applications of rectification: incidence counting, sum-product and
small-doubling transfers, sparse squares.

Each transfer rectifies the input with the profile its relations need,
then recomputes the same set sizes over the tower.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from app.core.config import TRANSFER_PROFILES, TRANSFER_RELATIONS, get_settings
from app.core.errors import BoundAbortError, PreconditionError, VerificationError
from app.models.schemas import BoundProfile, IncidenceResult, TermCount, TransferReport
from app.modules.domains import DomainAdapter, IntegerRing, PrimeField
from app.modules.int_poly import IntPoly, check_prime, check_reduced
from app.modules.rectifier import rectify, triple_log_margin
from app.modules.tower import TowerField

logger = logging.getLogger(__name__)


@dataclass
class PointLineConfig:
    """Points (x, y) and lines a*y + b*x + c = 0 given as (a, b, c)."""
    points: List[Tuple[Any, Any]] = field(default_factory=list)
    lines: List[Tuple[Any, Any, Any]] = field(default_factory=list)

    def normalized(self, domain: DomainAdapter) -> "PointLineConfig":
        """
        Scale each line so its first non-zero coefficient is 1 and drop
        proportional duplicates. Only meaningful over a field.
        """
        if not domain.is_field:
            raise PreconditionError(f"cannot normalize lines over {domain.name}")
        seen = []
        for line in self.lines:
            lead = next((c for c in line if not domain.is_zero(c)), None)
            if lead is None:
                raise PreconditionError("degenerate line with all coefficients zero")
            scale = domain.inv(lead)
            scaled = tuple(domain.mul(c, scale) for c in line)
            if scaled not in seen:
                seen.append(scaled)
        return PointLineConfig(points=list(self.points), lines=seen)

    def coordinates(self) -> List[Any]:
        """Distinct coordinates in first-seen order."""
        found: List[Any] = []
        for item in [*self.points, *self.lines]:
            for c in item:
                if c not in found:
                    found.append(c)
        return found

    def mapped(self, image: Callable[[Any], Any]) -> "PointLineConfig":
        return PointLineConfig(
            points=[tuple(image(c) for c in point) for point in self.points],
            lines=[tuple(image(c) for c in line) for line in self.lines],
        )


def count_incidences(config: PointLineConfig, domain: DomainAdapter) -> int:
    count = 0
    for x, y in config.points:
        for a, b, c in config.lines:
            value = domain.add(domain.add(domain.mul(a, y), domain.mul(b, x)), c)
            if domain.is_zero(value):
                count += 1
    return count


def lattice_radius(n: int) -> int:
    """floor(n^(1/3) / 2), computed exactly."""
    r = 0
    while (2 * (r + 1)) ** 3 <= n:
        r += 1
    return r


def sharpness_lattice(n: int) -> PointLineConfig:
    """
    Points [r] x [2r^2] and lines y = m*x + b with 1 <= m <= r, 1 <= b <= r^2.

    Every line meets exactly r points, giving r^4 incidences.
    """
    r = lattice_radius(n)
    if r < 1:
        raise PreconditionError("the lattice needs n >= 8", {"n": n})
    points = [(x, y) for x in range(1, r + 1) for y in range(1, 2 * r * r + 1)]
    lines = [(1, -m, -b) for m in range(1, r + 1) for b in range(1, r * r + 1)]
    return PointLineConfig(points=points, lines=lines)


def lattice_report(n: int) -> IncidenceResult:
    config = sharpness_lattice(n)
    r = lattice_radius(n)
    return IncidenceResult(
        n=n,
        r=r,
        points=len(config.points),
        lines=len(config.lines),
        incidences=count_incidences(config, IntegerRing()),
        expected=r ** 4,
    )


# ----------------------------------------------------------------------
# Set sizes
# ----------------------------------------------------------------------

def _distinct(elements: Iterable[Any]) -> int:
    return len(set(elements))


def sumset(values: Sequence[Any], domain: DomainAdapter) -> int:
    return _distinct(domain.add(a, b) for a in values for b in values)


def productset(values: Sequence[Any], domain: DomainAdapter) -> int:
    return _distinct(domain.mul(a, b) for a in values for b in values)


def inverse_sumset(values: Sequence[Any], domain: DomainAdapter) -> int:
    inverses = [domain.inv(a) for a in values]
    return sumset(inverses, domain)


def image_sumset(values: Sequence[Any], f: IntPoly, domain: DomainAdapter) -> int:
    images = [f.evaluate([a], domain) for a in values]
    return sumset(images, domain)


def doubling_constant(values: Sequence[Any], domain: DomainAdapter) -> Fraction:
    """|A + A| / |A|."""
    if not values:
        raise PreconditionError("doubling constant of an empty set")
    return Fraction(sumset(values, domain), _distinct(values))


# ----------------------------------------------------------------------
# Transfers
# ----------------------------------------------------------------------

def _fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _check_sizes(mode: str, sizes_fp: Dict[str, int], sizes_tower: Dict[str, int]) -> None:
    if sizes_fp != sizes_tower:
        logger.error(f"Transfer {mode} changed set sizes: {sizes_fp} vs {sizes_tower}")
        raise VerificationError(
            f"transfer {mode} changed set sizes",
            {"sizes_fp": sizes_fp, "sizes_tower": sizes_tower},
        )


def transfer_report(
    values: Sequence[int],
    p: int,
    mode: str = "sumproduct",
    f: Optional[IntPoly] = None,
    force: bool = False,
) -> TransferReport:
    """
    Compare set sizes in F_p with their images over the rectified tower.

    Args:
        values: the subset A of F_p
        p: prime modulus
        mode: sumproduct, inverse or polynomial-image ("polynomial" also accepted)
        f: univariate polynomial for the polynomial-image mode

    Raises:
        PreconditionError: invalid mode, 0 in A for inverses, missing f
        BoundAbortError: A u A^-1 has more points than MAX_INVERSE_LIFT
        VerificationError: a set size differs between F_p and the tower
    """
    check_prime(p)
    values = [int(a) for a in values]
    check_reduced(values, p)
    if len(set(values)) != len(values):
        raise PreconditionError("transfer sets must have distinct elements")
    if mode == "polynomial":
        mode = "polynomial-image"
    fp = PrimeField(p)
    n = len(values)

    if mode == "sumproduct":
        k, t = TRANSFER_PROFILES[mode]
        lifted = values
        gate = n < triple_log_margin(4, 4, p)
        relations = TRANSFER_RELATIONS[mode]
    elif mode == "inverse":
        if 0 in values:
            raise PreconditionError("inverse transfer needs 0 outside A")
        k, t = TRANSFER_PROFILES[mode]
        lifted = list(values)
        for a in values:
            inverse = pow(a, -1, p)
            if inverse not in lifted:
                lifted.append(inverse)
        limit = get_settings().MAX_INVERSE_LIFT
        if len(lifted) > limit:
            raise BoundAbortError(
                f"A u A^-1 has {len(lifted)} points, the ({k},{t}) elimination is run on at most {limit}",
                {"lifted": len(lifted), "limit": limit},
            )
        gate = 2 * n < triple_log_margin(4, 4, p)
        relations = TRANSFER_RELATIONS[mode]
    elif mode == "polynomial-image":
        if f is None or f.nvars != 1 or f.degree() < 1:
            raise PreconditionError("polynomial transfer needs a non-constant univariate f")
        k, t = 4 * f.l1_norm(), f.degree()
        lifted = values
        gate = n < triple_log_margin(4 * f.l1_norm(), 4 * f.l1_norm(), p)
        relations = [*TRANSFER_RELATIONS[mode], f"f = {f}"]
    else:
        raise PreconditionError(f"unknown transfer mode {mode!r}")

    result = rectify(lifted, p, k, t=t, force=force)
    tower_field = TowerField(result.tower)
    points = result.points[:n]

    sizes_fp = {"A": n, "A+A": sumset(values, fp), "A*A": productset(values, fp)}
    sizes_tower = {"A": _distinct(points), "A+A": sumset(points, tower_field), "A*A": productset(points, tower_field)}
    if mode == "inverse":
        sizes_fp["1/A+1/A"] = inverse_sumset(values, fp)
        sizes_tower["1/A+1/A"] = inverse_sumset(points, tower_field)
    if mode == "polynomial-image":
        sizes_fp["f(A)+f(A)"] = image_sumset(values, f, fp)
        sizes_tower["f(A)+f(A)"] = image_sumset(points, f, tower_field)

    _check_sizes(mode, sizes_fp, sizes_tower)
    return TransferReport(
        mode=mode,
        p=p,
        values=values,
        profile=BoundProfile(k=k, t=t),
        relations=relations,
        sizes_fp=sizes_fp,
        sizes_tower=sizes_tower,
        equal=True,
        doubling=_fraction_text(doubling_constant(values, fp)),
        gate_holds=gate,
        tower_degree=result.tower.degree(),
        points=[b.to_text() for b in points],
    )


def transfer_incidences(config: PointLineConfig, p: int, force: bool = False) -> TransferReport:
    """
    Rectify the coordinate set of an F_p configuration with the (3, 2)
    profile and count incidences on both sides.
    """
    fp = PrimeField(p)
    config = config.normalized(fp)
    coords = [c % p for c in config.coordinates()]
    k, t = TRANSFER_PROFILES["incidence"]
    result = rectify(coords, p, k, t=t, force=force)
    image = dict(zip(coords, result.points))
    tower_field = TowerField(result.tower)
    lifted = config.mapped(lambda c: image[c % p])

    sizes_fp = {"points": len(config.points), "lines": len(config.lines), "incidences": count_incidences(config, fp)}
    sizes_tower = {
        "points": len(lifted.points),
        "lines": len(lifted.lines),
        "incidences": count_incidences(lifted, tower_field),
    }
    _check_sizes("incidence", sizes_fp, sizes_tower)
    return TransferReport(
        mode="incidence",
        p=p,
        values=coords,
        profile=BoundProfile(k=k, t=t),
        relations=TRANSFER_RELATIONS["incidence"],
        sizes_fp=sizes_fp,
        sizes_tower=sizes_tower,
        equal=True,
        doubling=_fraction_text(doubling_constant(coords, fp)),
        gate_holds=len(coords) < triple_log_margin(3, 3, p),
        tower_degree=result.tower.degree(),
        points=[b.to_text() for b in result.points],
    )


def sparse_square_terms(f: IntPoly) -> TermCount:
    return TermCount(polynomial=str(f), terms=len(f), square_terms=len(f * f))
