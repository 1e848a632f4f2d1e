"""
Multiplicative rectification pipeline.

Enumerates bounded relations of a point of F_p^n, eliminates the
variables one at a time with resultants and subresultants while keeping
a ledger of norm and degree bounds, then walks back up the elimination
building a number-field tower whose generators map onto the point.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from app.core.config import get_settings
from app.core.errors import (
    BoundAbortError,
    InternalError,
    PreconditionError,
    VerificationError,
)
from app.models.schemas import (
    BoundProfile,
    GateResult,
    LedgerDocument,
    LevelSummary,
    RectifyResult,
    VerificationReport,
)
from app.modules.domains import DomainAdapter, RationalField
from app.modules.int_poly import (
    Degree,
    IntPoly,
    check_enumeration_size,
    check_prime,
    check_reduced,
    enumerate_bounded,
    monomials_upto,
    split_relations,
)
from app.modules.resultants import (
    DomainPoly,
    elimination_pair,
    gcd_many,
    principal_coefficients,
)
from app.modules.tower import (
    Tower,
    TowerElem,
    TowerField,
    embed_poly,
    select_compatible_root,
)

logger = logging.getLogger(__name__)

# Decimal rendering stays well under the interpreter's int-to-str digit limit
_DECIMAL_BITS = 12000


# ----------------------------------------------------------------------
# Bound ledger and gates
# ----------------------------------------------------------------------

class BoundLedger:
    """
    u_0 = k, v_0 = t; u_i = u_{i-1}^(2 v_{i-1}) * v_{i-1}^(v_{i-1}); v_i = 2 v_{i-1}^2.

    u_i is stored exactly while it fits LEDGER_EXACT_BITS; beyond that
    only certified bounds 2^low <= u_i < 2^high are kept.
    """

    def __init__(self, k: int, t: int, n: int, exact_bits: Optional[int] = None):
        if k < 1 or t < 1 or n < 0:
            raise PreconditionError("ledger needs k, t >= 1 and n >= 0")
        cap = exact_bits if exact_bits is not None else get_settings().LEDGER_EXACT_BITS
        self.k, self.t, self.n = k, t, n
        self.u: List[Optional[int]] = [k]
        self.v: List[int] = [t]
        self.low_bits: List[int] = [k.bit_length() - 1]
        self.high_bits: List[int] = [k.bit_length()]
        for _ in range(n):
            u, v = self.u[-1], self.v[-1]
            low = 2 * v * self.low_bits[-1] + v * (v.bit_length() - 1)
            high = 2 * v * self.high_bits[-1] + v * v.bit_length()
            if u is not None and high <= cap:
                u_next: Optional[int] = u ** (2 * v) * v ** v
                low, high = u_next.bit_length() - 1, u_next.bit_length()
            else:
                u_next = None
            self.u.append(u_next)
            self.low_bits.append(low)
            self.high_bits.append(high)
            self.v.append(2 * v * v)

    def closed_form_v(self, i: int) -> int:
        return 2 ** (2 ** i - 1) * self.t ** (2 ** i)

    def closed_form_ok(self) -> bool:
        return all(self.v[i] == self.closed_form_v(i) for i in range(self.n + 1))

    def final_bound_ok(self) -> bool:
        """Certify u_n <= (2kt)^((2t)^(2^(n+1))) through bit lengths."""
        exponent = (2 * self.t) ** (2 ** (self.n + 1))
        base_bits = (2 * self.k * self.t).bit_length() - 1
        return self.high_bits[self.n] <= exponent * base_bits

    def below(self, i: int, p: int) -> bool:
        """u_i < p, conservatively False when undecidable from the bounds."""
        if self.u[i] is not None:
            return self.u[i] < p
        return self.high_bits[i] <= p.bit_length() - 1

    def admits(self, f: IntPoly, i: int) -> bool:
        """f is (u_i, v_i)-bounded."""
        if f.degree() > self.v[i]:
            return False
        norm = f.l1_norm()
        if self.u[i] is not None:
            return norm <= self.u[i]
        return norm.bit_length() <= self.low_bits[i]

    def describe_u(self, i: int) -> str:
        u = self.u[i]
        if u is not None and u.bit_length() <= _DECIMAL_BITS:
            return str(u)
        return f"2^{self.low_bits[i]} <= u < 2^{self.high_bits[i]}"

    def describe_v(self, i: int) -> str:
        v = self.v[i]
        if v.bit_length() <= _DECIMAL_BITS:
            return str(v)
        return f"2^{v.bit_length() - 1} <= v < 2^{v.bit_length()}"

    def to_document(self) -> LedgerDocument:
        return LedgerDocument(
            k=self.k,
            t=self.t,
            u=[self.describe_u(i) for i in range(self.n + 1)],
            v=[self.describe_v(i) for i in range(self.n + 1)],
            closed_form_ok=self.closed_form_ok(),
            final_bound_ok=self.final_bound_ok(),
        )


def bound_sequence(k: int, t: int, n: int) -> BoundLedger:
    return BoundLedger(k, t, n)


def triple_log_margin(k: int, t: int, p: int) -> float:
    """log2 log_2t log_2kt p - 1, or -inf when an inner logarithm is not positive."""
    inner = math.log(p) / math.log(2 * k * t)
    if inner <= 1:
        return float("-inf")
    middle = math.log(inner) / math.log(2 * t)
    if middle <= 0:
        return float("-inf")
    return math.log2(middle) - 1


def guarantee_gate(n: int, k: int, t: int, p: int) -> GateResult:
    check_prime(p)
    ledger = BoundLedger(k, t, n)
    return GateResult(
        n=n,
        k=k,
        t=t,
        p=p,
        guaranteed=n < triple_log_margin(k, t, p),
        exact_ok=ledger.below(n, p),
    )


# ----------------------------------------------------------------------
# Forward elimination
# ----------------------------------------------------------------------

@dataclass
class LevelRecord:
    """One elimination step: L^i, its truncation A_i, pivot and delta."""
    index: int
    variable: int
    members: List[IntPoly]
    truncated: List[IntPoly]
    sigma_degrees: List[Degree]
    pivot: Optional[int] = None
    delta: Optional[int] = None
    y_variables: int = 0
    pushed: Dict[str, int] = field(default_factory=lambda: {"truncation": 0, "resultant": 0, "subresultant": 0})
    next_size: int = 0
    max_norm: int = 0
    max_degree: int = 0


@dataclass
class EliminationChain:
    values: List[int]
    p: int
    profile: BoundProfile
    order: List[int]
    ledger: BoundLedger
    levels: List[LevelRecord]
    final: List[IntPoly]
    survivors: List[IntPoly]

    @property
    def r(self) -> int:
        return len(self.levels)

    def summaries(self) -> List[LevelSummary]:
        summaries = []
        for record in self.levels:
            pivot = None
            if record.pivot is not None:
                pivot = str(record.truncated[record.pivot])
            summaries.append(
                LevelSummary(
                    level=record.index,
                    variable=f"x{record.variable + 1}",
                    members=len(record.members),
                    truncated_nonzero=sum(1 for f in record.truncated if not f.is_zero()),
                    pivot=pivot,
                    delta=record.delta,
                    y_variables=record.y_variables,
                    pushed_truncation=record.pushed["truncation"],
                    pushed_resultant=record.pushed["resultant"],
                    pushed_subresultant=record.pushed["subresultant"],
                    max_norm=record.max_norm,
                    max_degree=record.max_degree,
                    ledger_u=self.ledger.describe_u(record.index + 1),
                    ledger_v=self.ledger.describe_v(record.index + 1),
                    exact_ok=self.ledger.below(record.index + 1, self.p),
                )
            )
        return summaries


def _dedup(polys: Sequence[IntPoly]) -> List[IntPoly]:
    seen = set()
    unique = []
    for f in polys:
        f = f.canonical_sign()
        if f not in seen:
            seen.add(f)
            unique.append(f)
    return unique


def _check_order(order: Optional[Sequence[int]], n: int) -> List[int]:
    if order is None:
        return list(range(n))
    order = [int(v) for v in order]
    if sorted(order) != list(range(n)):
        raise PreconditionError(f"elimination order {order} is not a permutation of 0..{n - 1}")
    return order


def eliminate_forward(
    relations: Sequence[IntPoly],
    values: Sequence[int],
    p: int,
    profile: BoundProfile,
    order: Optional[Sequence[int]] = None,
    force: bool = False,
) -> EliminationChain:
    """
    Eliminate variables in the given order, pushing truncation coefficients,
    multi-resultant y-coefficients and low subresultant coefficients to the
    next level.

    Raises:
        PreconditionError: a relation is unbounded or does not vanish at values
        BoundAbortError: a non-zero constant survives while u_r >= p, not forced
        InternalError: a ledger or vanishing invariant fails
    """
    check_prime(p)
    check_reduced(values, p)
    values = list(values)
    n = len(values)
    order = _check_order(order, n)
    ledger = BoundLedger(profile.k, profile.t, n)

    current = _dedup(relations)
    for f in current:
        if f.nvars != n:
            raise PreconditionError(f"{f} is not a polynomial in {n} variables")
        if not f.is_bounded(profile):
            raise PreconditionError(f"{f} is not ({profile.k},{profile.t})-bounded")
        if f.eval_mod(values, p):
            raise PreconditionError(f"{f} does not vanish at the point mod {p}")

    levels: List[LevelRecord] = []
    warned = False
    i = 0
    while i < n and current and not all(f.is_zero() for f in current):
        var = order[i]
        sigma = {v: values[v] for v in order[i + 1:]}
        record = LevelRecord(index=i, variable=var, members=current, truncated=[], sigma_degrees=[])
        pushed: List[IntPoly] = []

        # (A) truncate at the degree of the image under sigma_i
        for f in current:
            degree = f.specialize(sigma, modulus=p).degree_in(var)
            if degree == 0:
                raise InternalError(f"{f} has a non-zero constant image", {"level": i})
            for power, coeff in f.as_univariate(var).items():
                if power > degree:
                    pushed.append(coeff)
                    record.pushed["truncation"] += 1
            record.truncated.append(f.truncate_in(var, degree))
            record.sigma_degrees.append(degree)

        active = [j for j, g in enumerate(record.truncated) if not g.is_zero()]
        if active:
            record.pivot = min(active, key=lambda j: (record.truncated[j].degree_in(var), j))
            family = [record.truncated[record.pivot]] + [
                record.truncated[j] for j in active if j != record.pivot
            ]
            pair = elimination_pair(family, var)
            record.y_variables = max(len(family) - 2, 0)
            principal = principal_coefficients(pair.f1, pair.f2)

            # (B) every y-monomial coefficient of the multi-resultant
            if not pair.f2.is_zero():
                for coeff in principal(0).collect(n).values():
                    pushed.append(coeff)
                    record.pushed["resultant"] += 1

            # (C) subresultant coefficients below delta
            top = pair.f1.degree() if pair.f2.is_zero() else min(pair.f1.degree(), pair.f2.degree())
            cache: Dict[int, IntPoly] = {}
            for j in range(top + 1):
                cache[j] = principal(j) if (j or not pair.f2.is_zero()) else IntPoly.zero(pair.ring.nvars)
                if not cache[j].specialize(sigma, modulus=p).is_zero():
                    record.delta = j
                    break
            if record.delta is None:
                raise InternalError(
                    "no principal subresultant coefficient survives sigma",
                    {"level": i, "pivot": family[0]},
                )
            for j in range(1, record.delta):
                for coeff in cache[j].collect(n).values():
                    pushed.append(coeff)
                    record.pushed["subresultant"] += 1

        following = _dedup(pushed)
        for g in following:
            if not ledger.admits(g, i + 1):
                raise InternalError(
                    f"{g} exceeds the ledger bound at level {i + 1}",
                    {"u": ledger.describe_u(i + 1), "v": ledger.describe_v(i + 1)},
                )
            if g.eval_mod(values, p):
                raise InternalError(f"{g} does not vanish at the point", {"level": i + 1})
        record.next_size = len(following)
        record.max_norm = max((g.l1_norm() for g in following), default=0)
        record.max_degree = max((g.degree() for g in following), default=0)
        levels.append(record)
        logger.info(
            f"Level {i}: eliminated x{var + 1} from {len(current)} polynomials, "
            f"pivot={record.pivot}, delta={record.delta}, pushed {len(following)}"
        )
        if not ledger.below(i + 1, p) and not warned:
            logger.warning(f"u_{i + 1} >= {p}: continuing past the exact bound, verification decides")
            warned = True
        current = following
        i += 1

    survivors = [f for f in current if not f.is_zero() and f.is_constant()]
    if survivors:
        details = {"level": i, "constants": [str(f) for f in survivors], "u": ledger.describe_u(i)}
        if ledger.below(i, p):
            raise InternalError("non-zero constant survived although u_r < p", details)
        if not force:
            raise BoundAbortError(
                f"elimination left non-zero constants with u_{i} >= {p}", details
            )
        logger.warning(f"Forced past non-zero constants {details['constants']}")

    return EliminationChain(
        values=values,
        p=p,
        profile=profile,
        order=order,
        ledger=ledger,
        levels=levels,
        final=current,
        survivors=survivors,
    )


# ----------------------------------------------------------------------
# Back substitution
# ----------------------------------------------------------------------

def _specialize_over(f: IntPoly, var: int, point: Sequence[TowerElem], domain: TowerField) -> DomainPoly:
    parts = f.as_univariate(var)
    if not parts:
        return DomainPoly.zero(domain)
    top = max(parts)
    return DomainPoly(
        [parts[power].evaluate(point, domain) if power in parts else domain.zero() for power in range(top + 1)],
        domain,
    )


def back_substitute(chain: EliminationChain, prefix: Optional[str] = None) -> Tuple[Tower, List[TowerElem]]:
    """
    Choose b_n, ..., b_1 level by level from the elimination chain.

    Returns:
        (tower, points) with every point anchored at its F_p value
    """
    prefix = prefix or get_settings().GENERATOR_PREFIX
    p = chain.p
    n = len(chain.values)
    tower = Tower.rational(p)
    chosen: Dict[int, TowerElem] = {
        var: tower.from_int(chain.values[var]) for var in chain.order[chain.r:]
    }

    exact = chain.ledger.below(chain.r, p)

    def violated(message: str, details: Dict[str, Any]) -> None:
        if exact:
            raise InternalError(message, details)
        raise BoundAbortError(f"{message} with u_{chain.r} >= {p}", details)

    for record in reversed(chain.levels):
        var = record.variable
        tower_field = TowerField(tower)
        point = [chosen.get(v, tower.zero()) for v in range(n)]
        specialized: List[DomainPoly] = []
        for member, truncated in zip(record.members, record.truncated):
            full = _specialize_over(member, var, point, tower_field)
            short = _specialize_over(truncated, var, point, tower_field)
            if full != short:
                if exact:
                    raise InternalError(
                        f"replayed truncation of {member} differs over the tower", {"level": record.index}
                    )
                logger.warning(f"Level {record.index}: truncation of {member} is not exact over the tower")
            specialized.append(short)

        nonzero = [s for s in specialized if not s.is_zero()]
        if not nonzero:
            chosen[var] = tower.from_int(chain.values[var])
            continue
        if any(s.degree() < 1 for s in nonzero):
            violated("a specialized member is a non-zero constant", {"level": record.index})
        G = gcd_many(nonzero)
        if G.degree() < 1:
            violated(
                "specialized members have a constant gcd",
                {"level": record.index, "members": [s.to_text() for s in nonzero]},
            )
        if record.delta is not None and G.degree() != record.delta:
            if exact:
                raise InternalError(
                    f"gcd degree {G.degree()} differs from delta {record.delta}",
                    {"level": record.index, "gcd": G.to_text()},
                )
            logger.warning(f"Level {record.index}: gcd degree {G.degree()} differs from delta {record.delta}")

        selection = select_compatible_root(G, chain.values[var], name=f"{prefix}{var + 1}")
        if selection.adjoined:
            tower = selection.tower
            chosen = {v: tower.embed(b) for v, b in chosen.items()}
        chosen[var] = selection.root
        for s in nonzero:
            if not embed_poly(s, tower).evaluate(selection.root).is_zero():
                raise InternalError(
                    f"member {s.to_text()} does not vanish at the chosen root", {"level": record.index}
                )

    points = [tower.embed(chosen[v]) for v in range(n)]
    for b, a in zip(points, chain.values):
        if b.anchor() != a:
            raise InternalError(f"point {b} maps to {b.anchor()} instead of {a}")
    return tower, points


# ----------------------------------------------------------------------
# Verification
# ----------------------------------------------------------------------

def _candidate_domain(points: Sequence[Any]) -> Tuple[DomainAdapter, List[Any]]:
    towers = [b.tower for b in points if isinstance(b, TowerElem)]
    if not towers:
        return RationalField(), [Fraction(b) for b in points]
    top = max(towers, key=lambda tw: tw.height)
    lifted = [top.embed(b) if isinstance(b, TowerElem) else top.from_fraction(b) for b in points]
    return TowerField(top), lifted


def verify_ring_isomorphism(
    values: Sequence[int],
    points: Sequence[Any],
    p: int,
    profile: BoundProfile,
) -> VerificationReport:
    """
    Brute-force check that every bounded polynomial vanishes at values
    mod p exactly when it vanishes at the candidate points.
    """
    check_prime(p)
    if len(values) != len(points):
        raise PreconditionError("the set and its candidate differ in size")
    n = len(values)
    check_enumeration_size(n, profile)
    domain, lifted = _candidate_domain(points)

    monomials = monomials_upto(n, profile.t)
    residues: Dict[Tuple[int, ...], int] = {}
    images: Dict[Tuple[int, ...], Any] = {}
    for exps in monomials:
        residue, image = 1, domain.one()
        for var, exponent in enumerate(exps):
            if exponent:
                residue = residue * pow(values[var], exponent, p) % p
                image = domain.mul(image, domain.pow(lifted[var], exponent))
        residues[exps] = residue
        images[exps] = image

    checked = vanishing = 0
    first: Optional[str] = None
    for f in enumerate_bounded(n, profile):
        checked += 1
        terms = f.terms
        left = sum(c * residues[e] for e, c in terms.items()) % p == 0
        total = domain.zero()
        for e, c in terms.items():
            total = domain.add(total, domain.mul(domain.from_int(c), images[e]))
        right = domain.is_zero(total)
        if left and right:
            vanishing += 1
        elif left != right and first is None:
            first = (
                f"{f} {'vanishes' if left else 'does not vanish'} mod {p} "
                f"but {'vanishes' if right else 'does not vanish'} on the candidate"
            )
    logger.info(f"Verified {checked} polynomials: {vanishing} shared relations, passed={first is None}")
    return VerificationReport(
        passed=first is None,
        profile=profile,
        checked=checked,
        vanishing=vanishing,
        first_discrepancy=first,
    )


# ----------------------------------------------------------------------
# Pipeline
# ----------------------------------------------------------------------

@dataclass
class RectifiedSet:
    values: List[int]
    p: int
    profile: BoundProfile
    tower: Tower
    points: List[TowerElem]
    gate: GateResult
    chain: EliminationChain
    verification: Optional[VerificationReport] = None
    relations: int = 0
    non_relations: int = 0

    @property
    def guaranteed(self) -> bool:
        return self.gate.guaranteed

    @property
    def verified(self) -> bool:
        return self.verification is not None and self.verification.passed

    def degree_bound(self) -> int:
        return (2 * self.profile.t) ** (2 ** len(self.values))

    def to_result(self) -> RectifyResult:
        return RectifyResult(
            points=[b.to_text() for b in self.points],
            anchors=[b.anchor() for b in self.points],
            tower=self.tower.to_document(),
            tower_degree=self.tower.degree(),
            degree_bound=str(self.degree_bound()),
            profile=self.profile,
            order=self.chain.order,
            guaranteed=self.guaranteed,
            exact_ok=self.gate.exact_ok,
            verified=self.verified,
            relations=self.relations,
            non_relations=self.non_relations,
            stop_level=self.chain.r,
            levels=self.chain.summaries(),
            ledger=self.chain.ledger.to_document(),
            verification=self.verification,
        )


def _validate_set(values: Sequence[int], p: int) -> List[int]:
    check_prime(p)
    values = [int(a) for a in values]
    check_reduced(values, p)
    if len(set(values)) != len(values):
        raise PreconditionError("set values must be distinct", {"values": values})
    return values


def _check_degree(tower: Tower, bound: int) -> None:
    if tower.degree() > bound:
        raise InternalError(f"tower degree {tower.degree()} exceeds {bound}")


def rectify(
    values: Sequence[int],
    p: int,
    k: int,
    t: Optional[int] = None,
    force: bool = False,
    order: Optional[Sequence[int]] = None,
    require_guarantee: bool = False,
    prefix: Optional[str] = None,
) -> RectifiedSet:
    """
    Rectify a subset of F_p into a number-field tower.

    Args:
        values: distinct residues a_1..a_n
        p: prime modulus
        k: norm cap
        t: degree cap, defaults to k
        force: continue past a surviving non-zero constant
        order: elimination order as a permutation of variable indices
        require_guarantee: abort unless the triple-logarithm gate holds

    Returns:
        RectifiedSet with verified = True

    Raises:
        BoundAbortError: gate demanded and failing, enumeration too large,
            or elimination left a non-zero constant without force
        VerificationError: the brute-force check found a discrepancy
    """
    values = _validate_set(values, p)
    profile = BoundProfile(k=k, t=t or k)
    n = len(values)
    gate = guarantee_gate(n, profile.k, profile.t, p)
    if require_guarantee and not gate.guaranteed:
        raise BoundAbortError(
            f"|A| = {n} is not below log2 log_{2 * profile.t} log_{2 * profile.k * profile.t} {p} - 1",
            {"n": n, "k": profile.k, "t": profile.t, "p": p},
        )
    if not gate.guaranteed:
        logger.warning(f"Size gate fails for n={n}, k={profile.k}, t={profile.t}, p={p}; relying on verification")

    relations, non_relations = split_relations(values, p, profile)
    chain = eliminate_forward(relations, values, p, profile, order=order, force=force)
    tower, points = back_substitute(chain, prefix)
    result = RectifiedSet(
        values=values,
        p=p,
        profile=profile,
        tower=tower,
        points=points,
        gate=gate,
        chain=chain,
        relations=len(relations),
        non_relations=len(non_relations),
    )
    _check_degree(tower, result.degree_bound())
    result.verification = verify_ring_isomorphism(values, points, p, profile)
    if not result.verified:
        raise VerificationError(
            "rectified set is not ring-isomorphic to the input",
            {"discrepancy": result.verification.first_discrepancy, "result": result.to_result().model_dump(mode="json")},
        )
    return result


def solve_system(
    polys: Sequence[IntPoly],
    values: Sequence[int],
    p: int,
    force: bool = False,
    order: Optional[Sequence[int]] = None,
    prefix: Optional[str] = None,
) -> RectifiedSet:
    """
    Algebraic solution of a polynomial system anchored at an F_p solution.

    No non-relations are imposed; the profile is read off the system.
    """
    check_prime(p)
    values = [int(a) for a in values]
    check_reduced(values, p)
    if not polys:
        raise PreconditionError("empty polynomial system")
    n = len(values)
    polys = [f.extend(n) if f.nvars < n else f for f in polys]
    profile = BoundProfile(
        k=max(f.l1_norm() for f in polys),
        t=max(max(f.degree() for f in polys), 1),
    )
    gate = guarantee_gate(n, profile.k, profile.t, p)
    chain = eliminate_forward(polys, values, p, profile, order=order, force=force)
    tower, points = back_substitute(chain, prefix)
    result = RectifiedSet(
        values=values, p=p, profile=profile, tower=tower, points=points, gate=gate, chain=chain,
        relations=len(polys),
    )
    _check_degree(tower, result.degree_bound())
    tower_field = TowerField(tower)
    solved = sum(1 for f in polys if f.evaluate(points, tower_field).is_zero())
    result.verification = VerificationReport(
        passed=solved == len(polys),
        profile=profile,
        checked=len(polys),
        vanishing=solved,
        first_discrepancy=None if solved == len(polys) else "a system polynomial does not vanish",
    )
    if not result.verified:
        raise VerificationError("system is not solved by the algebraic point", {"solved": solved})
    return result


class Rectifier:
    """
    Facade over the pipeline carrying the configured defaults.
    """

    def __init__(self):
        self.settings = get_settings()

    def rectify(self, values: Sequence[int], p: int, k: Optional[int] = None, **options: Any) -> RectifiedSet:
        options.setdefault("force", self.settings.FORCE)
        options.setdefault("prefix", self.settings.GENERATOR_PREFIX)
        if options.get("t") is None:
            options["t"] = self.settings.DEFAULT_T
        return rectify(values, p, k or self.settings.DEFAULT_K, **options)

    def solve(self, polys: Sequence[IntPoly], values: Sequence[int], p: int, **options: Any) -> RectifiedSet:
        options.setdefault("force", self.settings.FORCE)
        options.setdefault("prefix", self.settings.GENERATOR_PREFIX)
        return solve_system(polys, values, p, **options)

    def verify(
        self, values: Sequence[int], points: Sequence[Any], p: int, k: Optional[int] = None, t: Optional[int] = None
    ) -> VerificationReport:
        k = k or self.settings.DEFAULT_K
        return verify_ring_isomorphism(values, points, p, BoundProfile(k=k, t=t or k))


# Singleton instance
_rectifier = None


def get_rectifier() -> Rectifier:
    """Get or create rectifier instance."""
    global _rectifier
    if _rectifier is None:
        _rectifier = Rectifier()
    return _rectifier
