"""Pydantic request/response models for the service; the CLI shares them.

Wire formats mirror the library JSON conventions: sequences are
{"kind": ..., "params": {...}}, measures carry atoms as exact rational angles
(optionally with an xi coefficient) or bare floats, and every response starts
with the schema tag and the resolved request configuration.
"""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field

SCHEMA = "wiener-lab/1"

SequenceKind = Literal[
    "poly",
    "primes",
    "poly-of-primes",
    "rotation-return",
    "poly-return",
    "insertion-perturbed",
    "lacunary",
]

RealSequenceKind = Literal["real-poly", "real-poly-of-primes"]


class SequenceSpec(BaseModel):
    kind: SequenceKind
    params: dict[str, Any] = Field(default_factory=dict)


class RealSequenceSpec(BaseModel):
    kind: RealSequenceKind
    params: dict[str, Any] = Field(default_factory=dict)


class AtomSpec(BaseModel):
    b: Optional[int] = None
    q: Optional[int] = None
    theta: Optional[float] = None
    xi_coeff: Optional[str] = None
    w_re: float
    w_im: float = 0.0


class ArcSpec(BaseModel):
    a: float
    b: float
    w: float


class MeasureSpec(BaseModel):
    atoms: list[AtomSpec] = Field(default_factory=list)
    arcs: list[ArcSpec] = Field(default_factory=list)
    probability: bool = True
    xi_value: Optional[float] = None


class ReportHeader(BaseModel):
    schema_id: str = Field(default=SCHEMA, alias="schema")
    config: dict[str, Any] = Field(default_factory=dict)

    model_config = {"populate_by_name": True}


# -- seq ------------------------------------------------------------------------


class SeqRequest(BaseModel):
    sequence: SequenceSpec
    count: int = 10
    modulus: Optional[int] = None
    gap_horizon: Optional[int] = None
    density_bound: Optional[int] = None


class SeqResponse(ReportHeader):
    terms: list[int]
    residues: Optional[list[int]] = None
    max_safe_index: int
    min_gap: Optional[int] = None
    min_gap_repeats: Optional[int] = None
    upper_density: Optional[float] = None


# -- spectrum --------------------------------------------------------------------


class SpectrumEntryModel(BaseModel):
    b: int
    q: int
    re: float
    im: float
    abs: float
    provenance: str


class SpectrumRequest(BaseModel):
    sequence: SequenceSpec
    q_max: int = 8
    threshold: Optional[float] = None
    empirical_N: int = 20000
    detect_group: bool = True


class SpectrumResponse(ReportHeader):
    entries: list[SpectrumEntryModel]
    unimodular_order: Optional[int] = None
    group_note: Optional[str] = None


# -- wiener ----------------------------------------------------------------------


class WienerRequest(BaseModel):
    measure: MeasureSpec
    sequence: SequenceSpec
    N: int = 10000


class WienerResponse(ReportHeader):
    empirical: float
    N: int
    theoretical: Optional[float] = None
    formula_used: str = "none"
    discrepancy: Optional[float] = None


# -- extremal --------------------------------------------------------------------


class ExtremalRequest(BaseModel):
    coeffs: list[int]
    of_primes: bool = False
    q_max: Optional[int] = None
    horizon: Optional[int] = None


class VerdictModel(BaseModel):
    verdict: str
    method: str
    bad_q: Optional[int] = None
    bad_q_residues: list[int] = Field(default_factory=list)
    witnesses: dict[str, int] = Field(default_factory=dict)
    detail: dict[str, Any] = Field(default_factory=dict)


class ExtremalResponse(ReportHeader):
    verdict: VerdictModel
    wiener_extremal: VerdictModel
    bounded_gaps_probe: Optional[VerdictModel] = None
    positive_density_probe: Optional[VerdictModel] = None


# -- orbit -----------------------------------------------------------------------


class OperatorEntry(BaseModel):
    r: float = 1.0
    b: Optional[int] = None
    q: Optional[int] = None
    theta: Optional[float] = None


class OperatorSpec(BaseModel):
    entries: list[OperatorEntry]


class SemigroupEntry(BaseModel):
    rho: float = 0.0
    a: float = 0.0


class SemigroupSpec(BaseModel):
    entries: list[SemigroupEntry]


ComplexPair = tuple[float, float]


class OrbitRequest(BaseModel):
    mode: Literal["average", "eigenvector", "classical", "gelfand", "semigroup"] = "average"
    operator: Optional[OperatorSpec] = None
    semigroup: Optional[SemigroupSpec] = None
    x: Optional[list[ComplexPair]] = None
    y: Optional[list[ComplexPair]] = None
    sequence: Optional[SequenceSpec] = None
    real_sequence: Optional[RealSequenceSpec] = None
    N: int = 1000
    tol: Optional[float] = None


class OrbitResponse(ReportHeader):
    mode: str
    empirical: Optional[float] = None
    theoretical: Optional[float] = None
    diagonal_reference: Optional[float] = None
    verdict: Optional[str] = None
    eigen_support: list[dict[str, Any]] = Field(default_factory=list)
    detail: dict[str, Any] = Field(default_factory=dict)


# -- repro -----------------------------------------------------------------------


class ReproRequest(BaseModel):
    items: Optional[list[int]] = None


class ReproItemModel(BaseModel):
    item: int
    name: str
    passed: bool
    seconds: float
    budget_seconds: Optional[float] = None
    detail: str


class ReproResponse(ReportHeader):
    results: list[ReproItemModel]
    all_passed: bool


class HealthResponse(BaseModel):
    status: str
    version: str
    schema_id: str = Field(default=SCHEMA, alias="schema")

    model_config = {"populate_by_name": True}
