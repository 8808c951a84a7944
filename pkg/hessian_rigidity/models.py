"""
Pydantic models for validated reports, configuration and spectra.
"""

from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class SymmSpectrum(BaseModel):
    """
    Elementary symmetric functions of one matrix: s[k] = S_k(A).
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Matrix dimension")
    s: List[float] = Field(..., description="S_0..S_n, with S_0 = 1")
    eigenvalues: List[float] = Field(default_factory=list, description="Spectrum the values came from")

    @model_validator(mode="after")
    def check_shape(self) -> "SymmSpectrum":
        """Ensure s has n + 1 entries and starts at exactly 1."""
        if len(self.s) != self.n + 1:
            raise ValueError(f"s must have {self.n + 1} entries, got {len(self.s)}")
        if self.s[0] != 1.0:
            raise ValueError("S_0 must equal 1")
        return self


class MaclaurinReport(BaseModel):
    """
    Outcome of the Maclaurin chain check (p_k)^m <= (p_m)^k.
    """
    holds: bool
    worst_pair: Tuple[int, int] = Field(..., description="Pair (m, k) with the smallest slack")
    worst_slack: float = Field(..., description="(p_m)^k / (p_k)^m - 1 at the worst pair")
    pairs_checked: int = Field(..., ge=0)
    clamped: int = Field(0, ge=0, description="Eigenvalues in [-tol, 0) clamped to zero")
    all_equal: bool = Field(False, description="Every pair holds with equality")


class MajorizationReport(BaseModel):
    """
    Outcome of the bound S_k(A) <= eps^k * C(n, k).
    """
    holds: bool
    eps: float = Field(..., ge=0.0)
    per_k_slack: List[float] = Field(..., description="Relative slack for k = 1..n")
    violations: List[int] = Field(default_factory=list, description="Indices k that break the bound")
    clamped: int = Field(0, ge=0)


class QViolation(BaseModel):
    """
    One failed coefficient check of condition (Q).
    """
    index: int = Field(..., ge=1)
    point: List[float]
    kind: Literal["below_mu1", "above_mu2", "sign_flip", "non_finite"]
    value: Optional[float] = None


class ConditionQReport(BaseModel):
    """
    Result of validating condition (Q) on a sample set.
    """
    ok: bool
    violations: List[QViolation] = Field(default_factory=list)
    samples_checked: int = Field(..., ge=1)
    indices_checked: List[int] = Field(default_factory=list)


class AllSameSign(BaseModel):
    """
    Every active coefficient carries the same sign.
    """
    model_config = ConfigDict(frozen=True)

    sign: Literal[-1, 1]
    indices: List[int]


class SignSplit(BaseModel):
    """
    Partition of J into two opposite-sign sides with leaders i1 < j1.

    ``plus_side`` is the sign class that contains min(J), whatever its
    actual sign; ``leader_sign`` records that sign.
    """
    model_config = ConfigDict(frozen=True)

    plus_side: List[int] = Field(..., min_length=1)
    minus_side: List[int] = Field(..., min_length=1)
    ratio_bound: float = Field(..., description="max mu2 over minus_side / mu1 of the plus leader")
    leader_sign: Literal[-1, 1] = 1

    @field_validator("plus_side", "minus_side")
    @classmethod
    def sides_must_ascend(cls, v: List[int]) -> List[int]:
        """Ensure each side is strictly ascending."""
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("Split sides must be strictly ascending")
        return v

    @model_validator(mode="after")
    def leaders_ordered(self) -> "SignSplit":
        """Ensure the sides are disjoint and i1 < j1."""
        if set(self.plus_side) & set(self.minus_side):
            raise ValueError("Split sides must be disjoint")
        if not self.plus_side[0] < self.minus_side[0]:
            raise ValueError("The plus leader must precede the minus leader (i1 < j1)")
        if not self.ratio_bound > 0:
            raise ValueError("ratio_bound must be positive")
        return self

    @property
    def i1(self) -> int:
        return self.plus_side[0]


class LowerBoundSample(BaseModel):
    """
    Lemma dichotomy outcome for one sample.
    """
    index: int = Field(..., ge=0)
    branch: Literal["bounded", "degenerate", "violation"]
    s_i1: float
    det: float
    det_vanishes: Optional[bool] = Field(None, description="Set on the degenerate branch")


class LowerBoundReport(BaseModel):
    """
    Verification of S_i1(A) >= sigma0 or S_i(A) = 0 over samples.
    """
    ok: bool
    sigma0: float
    i1: int
    samples: List[LowerBoundSample]
    bounded: int = 0
    degenerate: int = 0
    violations: List[int] = Field(default_factory=list, description="Indices of violating samples")


class OracleSearch(BaseModel):
    """
    Grid and refinement settings of the brute-force S_k minimizer.
    """
    model_config = ConfigDict(extra="forbid")

    box: Optional[float] = Field(None, gt=0.0, description="Lambda_max; derived from sigma0 when omitted")
    grid_points: int = Field(64, ge=2, description="Grid points per free axis")
    line_points: int = Field(1024, ge=2, description="Points on the equal-spectrum line (n >= 4)")
    restarts: int = Field(16, ge=0, description="Random refinement starts (n >= 4)")
    refine_from: int = Field(4, ge=1, description="Best grid points refined by pattern search")
    seed: int = Field(0, ge=0, lt=2 ** 64)
    feas_tol: float = Field(1e-9, gt=0.0, description="Relative tolerance on the operator equation")
    positive_floor: float = Field(1e-9, ge=0.0, description="S_k must exceed this to count as positive")
    step_tol: float = Field(1e-10, gt=0.0, description="Pattern-search step at which refinement stops")
    max_evaluations: int = Field(200000, ge=1)


class OracleResult(BaseModel):
    """
    Smallest feasible positive S_k found by the brute-force search.
    """
    k: int = Field(..., ge=1)
    value: float
    spectrum: List[float]
    box: float = Field(..., gt=0.0)
    evaluations: int = Field(..., ge=0)


class GrowthBoundsReport(BaseModel):
    """
    Check of q*|x|^2/2 <= f(x) <= |x|^2/(2q) at sample points.
    """
    holds: bool
    checked: int = 0
    skipped: int = 0
    violations: List[List[float]] = Field(default_factory=list)
    min_ratio: Optional[float] = Field(None, description="min f(x)/|x|^2 over checked samples")
    max_ratio: Optional[float] = Field(None, description="max f(x)/|x|^2 over checked samples")


class GrowthOrderReport(BaseModel):
    """
    Sampled ratios max|f(R u)|/R^2 and the resulting verdict.
    """
    radii: List[float]
    ratios: List[float]
    verdict: Literal["subquadratic", "quadratic", "superquadratic"]


class ProbeReport(BaseModel):
    """
    Result of the touching-paraboloid construction at one eps.
    """
    eps: float = Field(..., gt=0.0)
    x0: List[float]
    g_min: float
    shift: float = Field(..., description="Constant subtracted so that f >= 0 on the box")
    inconclusive: bool = Field(..., description="Minimizer sits on the search-box boundary")
    touching_ok: bool = Field(..., description="Hess f(x0) <= eps*I in Loewner order")
    hessian_max_eigenvalue: float
    majorization: Optional[MajorizationReport] = None
    lemma_index: Optional[int] = None
    sigma0: Optional[float] = None
    contradiction_eps: Optional[float] = Field(
        None, description="eps below which the touching point contradicts S_k >= sigma0"
    )
    contradicts_lower_bound: Optional[bool] = None


class AffineReport(BaseModel):
    """
    Check that Hess f vanishes on the samples.
    """
    affine: bool
    max_hessian_norm: float
    checked: int


# ---------------------------------------------------------------------------
# Scenario configuration
# ---------------------------------------------------------------------------

ScenarioKind = Literal["symm", "sigma0", "verify-example", "residual-scan", "rigidity-probe", "growth"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OperatorSpec(_Strict):
    """
    Which operator (or solution family) a scenario works with.
    """
    builtin: Literal["eq3", "eq4", "theoremA", "separable", "custom"] = "eq3"
    n: int = Field(2, ge=1, le=16)
    q: float = Field(0.5, gt=0.0, lt=1.0, description="Bound parameter of the separable family")
    profile: Literal["cosine", "step", "quadrature-cosine"] = "cosine"
    coefficients: Dict[int, float] = Field(
        default_factory=dict, description="Constant coefficients for builtin 'custom', keyed by index"
    )

    @field_validator("coefficients")
    @classmethod
    def coefficients_nonzero(cls, v: Dict[int, float]) -> Dict[int, float]:
        """Zero entries are simply omitted; reject explicit zeros."""
        for index, value in v.items():
            if value == 0.0:
                raise ValueError(f"Coefficient {index} is zero; omit it instead")
        return v


class SamplingSpec(_Strict):
    """
    Grid or seeded random sampling of a box.
    """
    mode: Literal["grid", "random"] = "grid"
    low: float = -5.0
    high: float = 5.0
    points_per_axis: int = Field(11, ge=1, le=1001)
    count: int = Field(100, ge=1)
    seed: int = Field(0, ge=0, lt=2 ** 64)

    @model_validator(mode="after")
    def box_not_empty(self) -> "SamplingSpec":
        """Ensure low < high."""
        if not self.low < self.high:
            raise ValueError("Sampling box must satisfy low < high")
        return self


class Tolerances(_Strict):
    """
    Numerical tolerances used by scenario checks.
    """
    check: float = Field(1e-10, ge=0.0, description="Residual and identity tolerance")
    inequality: float = Field(1e-12, ge=0.0, description="Multiplicative slack of inequality checks")
    psd: float = Field(1e-12, ge=0.0)
    fd_step: float = Field(1e-4, gt=0.0)
    fd: float = Field(1e-5, gt=0.0, description="Finite-difference Hessian accuracy")
    sigma0: float = Field(1e-12, gt=0.0, description="Bisection tolerance on |F(sigma) - 1|")
    oracle: float = Field(1e-4, gt=0.0, description="Relative agreement of oracle and sigma0")


class ProbeSpec(_Strict):
    """
    Parameters of the rigidity probe.
    """
    field: Literal["sqrt", "affine", "separable", "quadratic"] = "sqrt"
    eps: List[float] = Field(default_factory=lambda: [0.5, 0.1, 0.02], min_length=1)
    box: float = Field(50.0, gt=0.0)
    grid_points: int = Field(41, ge=3)
    step_tol: float = Field(1e-8, gt=0.0, description="Pattern-search step at which refinement stops")
    loewner_tol: float = Field(1e-6, ge=0.0, description="Tolerance of Hess f(x0) <= eps*I")
    affine_slope: List[float] = Field(default_factory=list)

    @field_validator("eps")
    @classmethod
    def eps_positive(cls, v: List[float]) -> List[float]:
        """Every eps must be positive."""
        if any(e <= 0 for e in v):
            raise ValueError("eps values must be positive")
        return v


class GrowthSpec(_Strict):
    """
    Radii and direction count for the growth-order estimator.
    """
    field: Literal["separable", "affine", "half-norm-squared", "sqrt"] = "separable"
    radii: List[float] = Field(default_factory=lambda: [10.0, 100.0, 1000.0], min_length=2)
    directions: int = Field(16, ge=2)

    @field_validator("radii")
    @classmethod
    def radii_ascending(cls, v: List[float]) -> List[float]:
        """Radii must be positive, finite and strictly increasing."""
        if any(not (r > 0 and r < float("inf")) for r in v):
            raise ValueError("radii must be positive and finite")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("radii must be strictly increasing")
        return v


class OutputSpec(_Strict):
    """
    Where and how reports are written.
    """
    report: Optional[str] = Field(None, description="Report path; stdout when omitted")
    csv: Optional[str] = Field(None, description="Optional per-point CSV dump")
    format: Literal["json", "csv"] = "json"


class Scenario(_Strict):
    """
    A fully specified verification run.
    """
    kind: ScenarioKind
    operator: OperatorSpec = Field(default_factory=OperatorSpec)
    sampling: SamplingSpec = Field(default_factory=SamplingSpec)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    probe: ProbeSpec = Field(default_factory=ProbeSpec)
    growth: GrowthSpec = Field(default_factory=GrowthSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)
    matrix: Optional[List[List[float]]] = Field(None, description="Input matrix for kind 'symm'")
    eps: Optional[float] = Field(None, gt=0.0, description="Majorization eps for kind 'symm'")


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


class CheckRecord(BaseModel):
    """
    One named check inside a scenario report.
    """
    name: str
    status: Literal["pass", "fail", "skipped"]
    measured: Dict[str, Any] = Field(default_factory=dict)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    message: Optional[str] = None


class ReportSummary(BaseModel):
    total: int = Field(..., ge=0)
    failed: int = Field(..., ge=0)


class Report(BaseModel):
    """
    Machine-readable result of one scenario run.
    """
    version: str
    scenario: Dict[str, Any]
    checks: List[CheckRecord]
    summary: ReportSummary

    @model_validator(mode="after")
    def summary_matches(self) -> "Report":
        """Ensure the summary counts agree with the records."""
        failed = sum(1 for c in self.checks if c.status == "fail")
        if self.summary.failed != failed or self.summary.total != len(self.checks):
            raise ValueError("Report summary does not match its check records")
        return self

    @property
    def exit_code(self) -> int:
        return 0 if self.summary.failed == 0 else 1
