"""
Constructibility chains.

A chain 0 = a_0, a_1, ..., a_m records a_i = f_i(a_0, ..., a_{i-1}) for
(k, t)-bounded integer polynomials f_i. Short chains for a prime p give
residue sets that cannot be rectified.
"""

import logging
import math
from typing import Dict, List, NamedTuple, Optional, Sequence

from app.core.config import FERMAT_INDICES, MERSENNE_EXPONENTS
from app.core.errors import PreconditionError
from app.models.schemas import (
    AdversarialResult,
    BoundProfile,
    ChainDocument,
    ChainStep,
    CountBound,
    NonConstructibleCertificate,
)
from app.modules.domains import IntegerRing
from app.modules.int_poly import IntPoly, check_prime, parse_poly

logger = logging.getLogger(__name__)

_ZZ = IntegerRing()

# Below this target the block construction has no room for s >= 1
_UNARY_LIMIT = 16


def chain_names(count: int) -> List[str]:
    return [f"x{j}" for j in range(count)]


class ChainLink(NamedTuple):
    value: int
    polynomial: IntPoly


class Chain:
    """Values a_1..a_m with defining polynomials; a_0 = 0 is implicit."""

    def __init__(
        self,
        profile: BoundProfile,
        construction: str = "unary",
        s: Optional[int] = None,
        blocks: Optional[int] = None,
    ):
        self.profile = profile
        self.construction = construction
        self.s = s
        self.blocks = blocks
        self.links: List[ChainLink] = []

    @property
    def values(self) -> List[int]:
        return [0] + [link.value for link in self.links]

    @property
    def steps(self) -> int:
        return len(self.links)

    @property
    def target(self) -> int:
        return self.values[-1]

    def var(self, index: int) -> IntPoly:
        """x_index as a polynomial in the variables of the next step."""
        return IntPoly.variable(index, self.steps + 1)

    def push(self, polynomial: IntPoly) -> int:
        """Append a_m = f(a_0..a_{m-1}) and return its index m."""
        if polynomial.nvars != self.steps + 1:
            polynomial = polynomial.extend(self.steps + 1)
        value = polynomial.evaluate(self.values, _ZZ)
        self.links.append(ChainLink(value, polynomial))
        return self.steps

    def step_bound(self) -> Optional[int]:
        if self.s is None or self.blocks is None:
            return None
        return 2 ** self.s + 3 * self.blocks - 2

    def to_document(self) -> ChainDocument:
        return ChainDocument(
            target=str(self.target),
            k=self.profile.k,
            t=self.profile.t,
            construction=self.construction,
            steps=[
                ChainStep(value=str(link.value), polynomial=link.polynomial.to_text(chain_names(i + 1)))
                for i, link in enumerate(self.links)
            ],
            step_count=self.steps,
            step_bound=self.step_bound(),
            s=self.s,
            blocks=self.blocks,
            verified=verify_chain(self),
        )

    @classmethod
    def from_document(cls, document: ChainDocument) -> "Chain":
        """Rebuild a chain from its document; values are re-read, not recomputed."""
        chain = cls(
            BoundProfile(k=document.k, t=document.t),
            construction=document.construction,
            s=document.s,
            blocks=document.blocks,
        )
        for i, step in enumerate(document.steps):
            poly = parse_poly(step.polynomial, names=chain_names(i + 1))
            chain.links.append(ChainLink(int(step.value), poly))
        return chain


def verify_chain(chain: Chain) -> bool:
    """Recompute every step over Z and check every f_i is bounded."""
    values = [0]
    for i, link in enumerate(chain.links):
        f = link.polynomial
        if f.nvars != i + 1 or not f.is_bounded(chain.profile):
            return False
        if link.value < 0 or f.evaluate(values, _ZZ) != link.value:
            return False
        values.append(link.value)
    return True


def _unary_chain(r: int, profile: BoundProfile) -> Chain:
    chain = Chain(profile, construction="unary")
    for _ in range(r):
        chain.push(chain.var(chain.steps) + 1)
    return chain


def block_parameters(r: int, k: int) -> Dict[str, int]:
    """s, N and the block count for the digit-block construction."""
    log_r = math.log2(r)
    s = math.ceil(math.log2(log_r / (k * math.log2(log_r))))
    s = max(s, 1)
    n_bits = r.bit_length() - 1
    blocks = -(-(n_bits + 1) // (s * k))
    return {"s": s, "N": n_bits, "blocks": blocks}


def build_chain(r: int, k: int) -> Chain:
    """
    (k, k)-chain ending at r.

    A counter 0..2^s, one step per digit block of width sk, then a ladder
    of powers of 2^(sk) accumulating the blocks. Targets below 16 use
    the counter alone.
    """
    if r < 0:
        raise PreconditionError("chain target must be non-negative", {"target": r})
    if k < 2:
        raise PreconditionError("chains need k >= 2", {"k": k})
    profile = BoundProfile.square(k)
    if r < _UNARY_LIMIT:
        return _unary_chain(r, profile)

    params = block_parameters(r, k)
    s, blocks = params["s"], params["blocks"]
    chain = Chain(profile, construction="blocks", s=s, blocks=blocks)
    base = 2 ** s
    for _ in range(base):
        chain.push(chain.var(chain.steps) + 1)

    width = s * k
    block_index = []
    for i in range(blocks):
        block = (r >> (width * i)) & ((1 << width) - 1)
        f = IntPoly.zero(chain.steps + 1)
        for j in range(k):
            digit = (block >> (s * j)) & (base - 1)
            f = f + chain.var(base) ** j * chain.var(digit)
        block_index.append(chain.push(f))

    power = accumulated = None
    for i in range(1, blocks):
        if i == 1:
            power = chain.push(chain.var(base) ** k)
            accumulated = chain.push(chain.var(power) * chain.var(block_index[1]) + chain.var(block_index[0]))
        else:
            power = chain.push(chain.var(power) * chain.var(base + blocks + 1))
            accumulated = chain.push(chain.var(power) * chain.var(block_index[i]) + chain.var(accumulated))

    if chain.target != r:
        raise PreconditionError(f"block construction reached {chain.target} instead of {r}")
    logger.info(f"Built ({k},{k})-chain for a {r.bit_length()}-bit target: s={s}, blocks={blocks}, {chain.steps} steps")
    return chain


def is_mersenne(p: int) -> bool:
    return p >= 3 and (p + 1) & p == 0


def is_fermat(p: int) -> bool:
    """p = 2^(2^m) + 1 for some m >= 0."""
    power = p - 1
    if power < 2 or power & (power - 1):
        return False
    exponent = power.bit_length() - 1
    return exponent & (exponent - 1) == 0


def special_form(p: int) -> Optional[str]:
    if is_mersenne(p):
        return "mersenne"
    if is_fermat(p):
        return "fermat"
    return None


def build_special_chain(p: int, form: str) -> Chain:
    """
    (2, 2)-chain for 2^n - 1 or 2^(2^m) + 1 by repeated squaring.

    Raises:
        PreconditionError: p is not of the requested form
    """
    form = form.lower()
    checks = {"mersenne": is_mersenne, "fermat": is_fermat}
    if form not in checks or not checks[form](p):
        raise PreconditionError(f"{p} is not a {form} number", {"p": p, "form": form})
    chain = Chain(BoundProfile.square(2), construction=form)
    chain.push(chain.var(0) + 1)
    two = chain.push(chain.var(1) + 1)

    if form == "fermat":
        squarings = ((p - 1).bit_length() - 1).bit_length() - 1
        last = two
        for _ in range(squarings):
            last = chain.push(chain.var(last) ** 2)
        chain.push(chain.var(last) + 1)
        return chain

    exponent = p.bit_length()
    square, accumulated = two, None
    for j in range(exponent.bit_length()):
        if j:
            square = chain.push(chain.var(square) ** 2)
        if exponent >> j & 1:
            if accumulated is None:
                accumulated = square
            else:
                accumulated = chain.push(chain.var(accumulated) * chain.var(square))
    chain.push(chain.var(accumulated) - 1)
    return chain


def count_constructible_upper(n: int, k: int) -> CountBound:
    """
    Bounds on how many integers are (k, k)-constructible in n steps.

    The product of (3ki)^k over i <= n, then (3k)^(kn) n^(kn), then
    n^(2kn), the last valid once n >= 3k.
    """
    if n < 1 or k < 1:
        raise PreconditionError("counting needs n, k >= 1")
    product = math.prod((3 * k * i) ** k for i in range(1, n + 1))
    power = (3 * k) ** (k * n) * n ** (k * n)
    simplified = n ** (2 * k * n)
    applies = n >= 3 * k
    return CountBound(
        n=n,
        k=k,
        product_bound=str(product),
        power_bound=str(power),
        simplified_bound=str(simplified),
        simplified_applies=applies,
        product_le_power=product <= power,
        power_le_simplified=power <= simplified if applies else None,
    )


def certify_nonconstructible(p: int, k: int) -> NonConstructibleCertificate:
    """Count sequences of at most n bounded steps against p for n = floor(ln p / (2k ln ln p))."""
    if p < 16:
        raise PreconditionError("certificate needs p >= 16", {"p": p})
    steps = int(math.log(p) / (2 * k * math.log(math.log(p))))
    reachable, product = 1, 1
    for i in range(1, steps + 1):
        product *= (3 * k * i) ** k
        reachable += product
    return NonConstructibleCertificate(
        p=str(p),
        k=k,
        steps=steps,
        reachable_upper=str(reachable),
        certified=reachable < p,
    )


def shortest_chain(p: int, k: int) -> Chain:
    """Special chain when p has Mersenne or Fermat form and k >= 2, block chain otherwise."""
    form = special_form(p)
    if form is not None and k >= 2:
        return build_special_chain(p, form)
    return build_chain(p, k)


def witness_relations(residues: Sequence[int], chain: Chain, p: int) -> List[IntPoly]:
    """
    f_i(x_0..x_{i-1}) - x_i rewritten over the residue set, each vanishing mod p.
    """
    position = {a: j for j, a in enumerate(residues)}
    values = chain.values
    n = len(residues)
    witnesses: List[IntPoly] = []
    for i, link in enumerate(chain.links, start=1):
        relation = link.polynomial.extend(i + 1) - IntPoly.variable(i, i + 1)
        terms: Dict[tuple, int] = {}
        for exps, coeff in relation.terms.items():
            target = [0] * n
            for var, e in enumerate(exps):
                if e:
                    target[position[values[var] % p]] += e
            key = tuple(target)
            terms[key] = terms.get(key, 0) + coeff
        witness = IntPoly(terms, n)
        if witness.eval_mod(residues, p):
            raise PreconditionError(f"witness {witness} does not vanish mod {p}")
        if not witness.is_zero():
            witnesses.append(witness)
    return witnesses


def adversarial_set(p: int, k: int) -> AdversarialResult:
    """
    Residues mod p of a (k-1, k-1)-chain ending at p.

    The last value p collapses onto a_0 = 0, so fewer residues than
    chain values remain and no F_k-ring-isomorphism into
    characteristic zero exists.
    """
    check_prime(p)
    if k < 3:
        raise PreconditionError("adversarial sets need k >= 3", {"k": k})
    chain = shortest_chain(p, k - 1)
    residues: List[int] = []
    for value in chain.values:
        if value % p not in residues:
            residues.append(value % p)
    witnesses = witness_relations(residues, chain, p)
    logger.info(f"Adversarial set mod {p}: {len(residues)} residues from {len(chain.values)} chain values")
    return AdversarialResult(
        p=p,
        k=k,
        residues=residues,
        chain=chain.to_document(),
        witness_relations=[str(w) for w in witnesses],
    )


def mersenne_primes(limit_exponent: int = 607) -> List[int]:
    return [2 ** e - 1 for e in MERSENNE_EXPONENTS if e <= limit_exponent]


def fermat_primes(limit_index: int = 4) -> List[int]:
    return [2 ** (2 ** m) + 1 for m in FERMAT_INDICES if m <= limit_index]
