"""
Pydantic models for profiles, reports and output documents.
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class CommandName(str, Enum):
    """Subcommands of the command-line frontend."""
    RECTIFY = "rectify"
    VERIFY = "verify"
    LIFT_LINEAR = "lift-linear"
    RESULTANT = "resultant"
    SUBRES = "subres"
    CHAIN = "chain"
    ADVERSARIAL = "adversarial"
    DEMO = "demo"
    SOLVE = "solve"


class OutputFormat(str, Enum):
    """Document formats."""
    TEXT = "text"
    JSON = "json"


class RunStatus(str, Enum):
    """Outcome recorded in every output document."""
    VERIFIED = "verified"
    BOUND_ABORT = "bound-abort"
    VERIFICATION_FAILURE = "verification-failure"
    USAGE_ERROR = "usage-error"


class BoundProfile(BaseModel):
    """(k, t) profile: L1-norm cap k and total degree cap t."""
    k: int = Field(..., ge=1, description="L1 norm cap")
    t: int = Field(..., ge=1, description="Total degree cap")

    class Config:
        frozen = True

    @classmethod
    def square(cls, k: int) -> "BoundProfile":
        """The k-bounded profile (k, k)."""
        return cls(k=k, t=k)


class GateResult(BaseModel):
    """Size gates of the multiplicative rectification."""
    n: int
    k: int
    t: int
    p: int
    guaranteed: bool = Field(..., description="log2 log_2t log_2kt p - 1 > n")
    exact_ok: bool = Field(..., description="u_n < p")


class LedgerDocument(BaseModel):
    """Serialized bound ledger; large entries are summarized by bit length."""
    k: int
    t: int
    u: List[str] = Field(default_factory=list)
    v: List[str] = Field(default_factory=list)
    closed_form_ok: bool = True
    final_bound_ok: bool = True


class LevelSummary(BaseModel):
    """Per-level statistics of forward elimination."""
    level: int
    variable: str
    members: int
    truncated_nonzero: int
    pivot: Optional[str] = None
    delta: Optional[int] = None
    y_variables: int = 0
    pushed_truncation: int = 0
    pushed_resultant: int = 0
    pushed_subresultant: int = 0
    max_norm: int = 0
    max_degree: int = 0
    ledger_u: str = ""
    ledger_v: str = ""
    exact_ok: bool = True


class TowerLevelDocument(BaseModel):
    """One adjoined generator."""
    name: str
    degree: int
    defining_polynomial: str = Field(..., description="Monic in the new generator, over the lower ones")
    anchor: int = Field(..., description="Residue in F_p the generator maps to")
    certificate: str = ""


class TowerDocument(BaseModel):
    """Serialized tower of number fields with its anchor prime."""
    prime: int
    levels: List[TowerLevelDocument] = Field(default_factory=list)
    degree: int = 1


class VerificationReport(BaseModel):
    """Outcome of a brute-force F_k-ring-isomorphism check."""
    passed: bool
    profile: BoundProfile
    checked: int = Field(0, description="Number of bounded polynomials evaluated")
    vanishing: int = Field(0, description="Relations vanishing on both sides")
    first_discrepancy: Optional[str] = None


class RectifyResult(BaseModel):
    """Rectified set with tower, points, anchors and flags."""
    points: List[str]
    anchors: List[int]
    tower: TowerDocument
    tower_degree: int
    degree_bound: str
    profile: BoundProfile
    order: List[int]
    guaranteed: bool
    exact_ok: bool
    verified: bool
    relations: int = Field(0, description="|L1|")
    non_relations: int = Field(0, description="|L2|")
    stop_level: int = 0
    levels: List[LevelSummary] = Field(default_factory=list)
    ledger: LedgerDocument
    verification: Optional[VerificationReport] = None


class LinearLiftResult(BaseModel):
    """Result of the linear rectification."""
    points: List[str] = Field(..., description="Elements of Z_(p)")
    integer_points: Optional[List[str]] = None
    multiplier: Optional[str] = None
    guaranteed: bool = True
    verified: bool = False
    relations: int = 0
    witness_rows: List[int] = Field(default_factory=list)
    witness_cols: List[int] = Field(default_factory=list)


class ResultantResult(BaseModel):
    """Sylvester matrix and resultant of two polynomials."""
    f: str
    g: str
    variable: str
    sylvester: List[List[str]] = Field(default_factory=list)
    resultant: str


class SubresultantResult(BaseModel):
    """Subresultant sequence and the gcd read off it."""
    f: str
    g: str
    variable: str
    entries: List[str] = Field(default_factory=list)
    principal: List[str] = Field(default_factory=list)
    gcd_index: int
    gcd: str


class ChainStep(BaseModel):
    """One step a_i = f_i(a_0, ..., a_{i-1})."""
    value: str
    polynomial: str


class ChainDocument(BaseModel):
    """Constructibility chain with its own verification outcome."""
    target: str
    k: int
    t: int
    construction: str
    steps: List[ChainStep] = Field(default_factory=list)
    step_count: int = 0
    step_bound: Optional[int] = None
    s: Optional[int] = None
    blocks: Optional[int] = None
    verified: bool = False


class CountBound(BaseModel):
    """Upper bounds on the number of integers constructible in n steps."""
    n: int
    k: int
    product_bound: str
    power_bound: str
    simplified_bound: str
    simplified_applies: bool = Field(..., description="n >= 3k")
    product_le_power: bool
    power_le_simplified: Optional[bool] = None


class NonConstructibleCertificate(BaseModel):
    """Certificate that not every residue below p is reachable in n steps."""
    p: str
    k: int
    steps: int
    reachable_upper: str
    certified: bool


class AdversarialResult(BaseModel):
    """Residue set that admits no F_k-ring-isomorphism into characteristic zero."""
    p: int
    k: int
    residues: List[int]
    chain: ChainDocument
    witness_relations: List[str] = Field(default_factory=list)


class IncidenceResult(BaseModel):
    """Point-line configuration statistics."""
    n: int
    r: int
    points: int
    lines: int
    incidences: int
    expected: int


class TransferReport(BaseModel):
    """Set sizes in F_p against their images over the rectified tower."""
    mode: str
    p: int
    values: List[int]
    profile: BoundProfile
    relations: List[str] = Field(default_factory=list)
    sizes_fp: Dict[str, int] = Field(default_factory=dict)
    sizes_tower: Dict[str, int] = Field(default_factory=dict)
    equal: bool
    doubling: str
    gate_holds: bool
    tower_degree: int
    points: List[str] = Field(default_factory=list)


class TermCount(BaseModel):
    """Term counts of a sparse polynomial and its square."""
    polynomial: str
    terms: int
    square_terms: int


class RunDocument(BaseModel):
    """Top-level document emitted by every CLI run."""
    command: CommandName
    status: RunStatus
    exit_code: int
    version: str
    inputs: Dict[str, Any] = Field(default_factory=dict)
    flags: Dict[str, bool] = Field(default_factory=dict)
    result: Optional[Dict[str, Any]] = None
    error: Optional[Dict[str, Any]] = None
    elapsed_ms: Optional[float] = None
