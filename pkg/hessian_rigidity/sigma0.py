"""
The universal lower bound sigma0: unique positive root of

    ratio * sum_k alpha_k * sigma^(nu_k - 1) = 1,

with nu_k = j_k / i1 and alpha_k = C(n, j_k) * C(n, i1)^(-nu_k), together
with a brute-force minimizer of S_k over feasible spectra and the
verification of S_i1(A) >= sigma0 on solution samples.
"""

import itertools
import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    InfeasibleSearchError,
    PreconditionError,
)
from .linalg import DEFAULT_PSD_TOL, ArrayLike, SymmetricMatrix, eigenvalues_symmetric, is_psd
from .models import (
    AllSameSign,
    LowerBoundReport,
    LowerBoundSample,
    OracleResult,
    OracleSearch,
    SignSplit,
)
from .operators import AnyOperator, ShiftedOperator, classify_lemma_case, residual_matrix
from .symmfn import binomial, elementary_symmetric_all

logger = logging.getLogger(__name__)

DEFAULT_ROOT_TOL = 1e-12
BRACKET_FACTOR = 2.0
MAX_BISECTIONS = 200
MAX_BRACKET_STEPS = 2100


class Sigma0Problem(BaseModel):
    """
    Data of the root equation for sigma0.

    ``js`` is stored ascending regardless of construction order, so the
    root depends only on (n, i1, js, ratio).
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2)
    i1: int = Field(..., ge=1)
    js: List[int] = Field(..., min_length=1)
    ratio: float = Field(..., ge=1.0)

    @field_validator("js")
    @classmethod
    def sort_js(cls, v: List[int]) -> List[int]:
        """Store the minus indices ascending and without repeats."""
        if len(set(v)) != len(v):
            raise ValueError("Minus indices must be distinct")
        return sorted(v)

    @model_validator(mode="after")
    def indices_in_range(self) -> "Sigma0Problem":
        """Ensure i1 < j_1 and every index lies in [1, n]."""
        if not self.i1 < self.js[0]:
            raise ValueError("The plus leader must precede every minus index")
        if self.js[-1] > self.n:
            raise ValueError(f"Minus indices must not exceed n = {self.n}")
        if not math.isfinite(self.ratio):
            raise ValueError("ratio must be finite")
        return self

    @property
    def nu(self) -> List[float]:
        return [j / self.i1 for j in self.js]

    @property
    def alpha(self) -> List[float]:
        log_leader = math.log(binomial(self.n, self.i1))
        return [
            math.exp(math.log(binomial(self.n, j)) - nu * log_leader)
            for j, nu in zip(self.js, self.nu)
        ]

    def root_function(self) -> Callable[[float], float]:
        """F(sigma) = ratio * sum_k alpha_k sigma^(nu_k - 1), with F(0) = 0."""
        exponents = [nu - 1.0 for nu in self.nu]
        weights = [self.ratio * a for a in self.alpha]

        def F(sigma: float) -> float:
            if sigma <= 0.0:
                return 0.0
            log_sigma = math.log(sigma)
            return math.fsum(w * math.exp(e * log_sigma) for w, e in zip(weights, exponents))

        return F


def build_problem(n: int, split: SignSplit) -> Sigma0Problem:
    """
    Root-equation data for a sign split.

    A ratio bound below 1 is lifted to 1: with shared condition (Q)
    constants mu1 <= mu2 the quotient is never smaller.

    Raises:
        PreconditionError: If the split has no minus side
    """
    if not split.minus_side:
        raise PreconditionError("Sign split has an empty minus side", field="minus_side")
    ratio = split.ratio_bound
    if ratio < 1.0:
        logger.info("Lifting ratio bound %.6g to 1", ratio)
        ratio = 1.0
    return Sigma0Problem(n=n, i1=split.i1, js=list(split.minus_side), ratio=ratio)


def solve_sigma0(
    p: Sigma0Problem,
    tol: float = DEFAULT_ROOT_TOL,
    max_iterations: int = MAX_BISECTIONS,
) -> float:
    """
    Unique positive root of F(sigma) = 1.

    Brackets by doubling from sigma = 1 (halving when F(1) > 1), then
    bisects until |F(sigma) - 1| <= tol.

    Raises:
        PreconditionError: If tol is not positive
        ConvergenceError: If bracketing overflows or bisection stalls
    """
    if not tol > 0:
        raise PreconditionError("Root tolerance must be positive", field="tol", value=str(tol))
    F = p.root_function()

    def residual(sigma: float) -> float:
        try:
            return F(sigma) - 1.0
        except OverflowError as e:
            raise ConvergenceError(f"F overflowed at sigma = {sigma:g}", method="sigma0 bracketing") from e

    lo, hi = 1.0, 1.0
    start = residual(1.0)
    if abs(start) <= tol:
        return 1.0
    steps = 0
    if start < 0:
        while residual(hi) < 0:
            lo = hi
            hi *= BRACKET_FACTOR
            steps += 1
            if not math.isfinite(hi) or steps > MAX_BRACKET_STEPS:
                raise ConvergenceError("Bracket expansion overflowed", method="sigma0 bracketing", cap=MAX_BRACKET_STEPS)
    else:
        while residual(lo) > 0:
            hi = lo
            lo /= BRACKET_FACTOR
            steps += 1
            if lo == 0.0 or steps > MAX_BRACKET_STEPS:
                raise ConvergenceError("Bracket contraction underflowed", method="sigma0 bracketing", cap=MAX_BRACKET_STEPS)
    logger.debug("sigma0 bracket [%g, %g] after %d steps", lo, hi, steps)

    for _ in range(max_iterations):
        mid = 0.5 * (lo + hi)
        value = residual(mid)
        if abs(value) <= tol:
            return mid
        if mid in (lo, hi):
            break
        if value < 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError("sigma0 bisection did not reach the tolerance", method="bisection", cap=max_iterations)


def contradiction_eps(n: int, k: int, sigma0: float) -> float:
    """
    Largest eps with eps^k * C(n, k) >= sigma0.

    Any touching point with 0 <= Hess f <= eps*I for a smaller eps has
    S_k(Hess f) < sigma0.
    """
    if not 1 <= k <= n:
        raise PreconditionError(f"k must lie in [1, {n}]", field="k", value=str(k))
    if not sigma0 > 0:
        raise PreconditionError("sigma0 must be positive", field="sigma0", value=str(sigma0))
    return (sigma0 / binomial(n, k)) ** (1.0 / k)


def sigma0_for_operator(op: AnyOperator, tol: float = DEFAULT_ROOT_TOL) -> Optional[Tuple[Sigma0Problem, float]]:
    """Problem and root for an operator, or None in the same-sign case."""
    case = classify_lemma_case(op)
    if isinstance(case, AllSameSign):
        return None
    problem = build_problem(op.n, case)
    return problem, solve_sigma0(problem, tol)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------


class _ProjectedSpectrum:
    """
    Objective on the free eigenvalues lambda_1..lambda_{n-1}.

    Each S_i is affine in a single eigenvalue, so the operator residual
    is P + lambda_n * Q; lambda_n is solved for exactly.
    """

    def __init__(self, coeffs: np.ndarray, rhs: float, k: int, box: float, search: OracleSearch):
        self.coeffs = coeffs
        self.rhs = rhs
        self.n = coeffs.size
        self.k = k
        self.box = box
        self.search = search
        self.evaluations = 0

    def complete(self, free: np.ndarray) -> Optional[np.ndarray]:
        s_free = np.append(elementary_symmetric_all(free), 0.0)
        P = float(np.dot(self.coeffs, s_free[1:])) - self.rhs
        Q = float(np.dot(self.coeffs, s_free[:-1]))
        if Q == 0.0:
            if abs(P) > self.search.feas_tol:
                return None
            last = 0.0
        else:
            last = -P / Q
        if not 0.0 <= last <= self.box:
            return None
        return np.append(free, last)

    def __call__(self, free: np.ndarray) -> Tuple[float, Optional[np.ndarray]]:
        self.evaluations += 1
        spectrum = self.complete(free)
        if spectrum is None:
            return math.inf, None
        s = elementary_symmetric_all(spectrum)
        scale = max(1.0, float(np.dot(np.abs(self.coeffs), np.abs(s[1:]))) + abs(self.rhs))
        if abs(float(np.dot(self.coeffs, s[1:])) - self.rhs) > self.search.feas_tol * scale:
            return math.inf, None
        value = float(s[self.k])
        if value <= self.search.positive_floor:
            return math.inf, None
        return value, spectrum


def _default_box(op: AnyOperator) -> float:
    solved = sigma0_for_operator(op)
    if solved is None:
        return 10.0 * op.n
    problem, sigma0 = solved
    return 10.0 * op.n * sigma0 ** (1.0 / problem.i1)


def _pattern_search(
    objective: _ProjectedSpectrum,
    start: np.ndarray,
    delta: float,
) -> Tuple[float, Optional[np.ndarray]]:
    x = start.copy()
    best, spectrum = objective(x)
    box = objective.box
    while delta >= objective.search.step_tol and objective.evaluations < objective.search.max_evaluations:
        improved = False
        for i in range(x.size):
            for direction in (-1.0, 1.0):
                trial = x.copy()
                trial[i] = min(max(trial[i] + direction * delta, 0.0), box)
                value, trial_spectrum = objective(trial)
                if value < best:
                    x, best, spectrum = trial, value, trial_spectrum
                    improved = True
        if not improved:
            delta /= 2.0
    return best, spectrum


def _sort_key(candidate: Tuple[float, np.ndarray]) -> Tuple[float, Tuple[float, ...]]:
    value, spectrum = candidate
    return value, tuple(np.sort(spectrum).tolist())


def min_Sk_oracle(
    n: int,
    op: AnyOperator,
    k: int,
    search: Optional[OracleSearch] = None,
) -> OracleResult:
    """
    Smallest positive S_k(lambda) over spectra in [0, Lambda_max]^n that
    satisfy the operator equation.

    Up to n = 3 the free eigenvalues are scanned on a full grid; above
    that the equal-spectrum line is scanned and seeded random starts are
    added. The best starts are refined by compass pattern search.

    Args:
        n: Dimension
        op: Constant-coefficient operator
        k: Index in J
        search: Grid and refinement settings

    Returns:
        OracleResult with the minimizing spectrum

    Raises:
        PreconditionError: If op has x-dependent coefficients or k is not in J
        InfeasibleSearchError: If the equation forces S_k = 0 in the box
    """
    search = search or OracleSearch()
    if op.n != n:
        raise DimensionMismatchError("Operator dimension differs from n", expected=n, actual=op.n)
    if k not in op.active_indices:
        raise PreconditionError(f"k must be an active index {op.active_indices}", field="k", value=str(k))
    base = op.operator if isinstance(op, ShiftedOperator) else op
    rhs = op.rhs if isinstance(op, ShiftedOperator) else 0.0
    coeffs = base.constant_coefficients()
    box = search.box if search.box is not None else _default_box(op)
    objective = _ProjectedSpectrum(coeffs, rhs, k, box, search)
    free_dim = n - 1

    scanned: List[Tuple[float, np.ndarray, np.ndarray]] = []
    if free_dim == 0:
        starts = [np.zeros(0)]
        spacing = box
    elif n <= 3:
        axis = np.linspace(0.0, box, search.grid_points)
        starts = [np.array(point) for point in itertools.product(axis, repeat=free_dim)]
        spacing = box / (search.grid_points - 1)
    else:
        line = np.linspace(0.0, box, search.line_points)
        starts = [np.full(free_dim, t) for t in line]
        spacing = box / (search.line_points - 1)
    for free in starts:
        value, spectrum = objective(free)
        if spectrum is not None:
            scanned.append((value, free, spectrum))

    scanned.sort(key=lambda item: (item[0], tuple(np.sort(item[2]).tolist())))
    refine_starts = [free for _, free, _ in scanned[: search.refine_from]]
    if n > 3 and search.restarts:
        rng = np.random.default_rng(search.seed)
        refine_starts.extend(rng.uniform(0.0, box, size=(search.restarts, free_dim)))

    candidates: List[Tuple[float, np.ndarray]] = [(value, spectrum) for value, _, spectrum in scanned[:1]]
    if free_dim > 0:
        for start in refine_starts:
            value, spectrum = _pattern_search(objective, np.asarray(start, dtype=float), spacing)
            if spectrum is not None:
                candidates.append((value, spectrum))

    if not candidates:
        raise InfeasibleSearchError("No feasible spectrum with positive S_k", k=k, box=box)
    value, spectrum = min(candidates, key=_sort_key)
    logger.debug("Oracle S_%d minimum %.12g after %d evaluations", k, value, objective.evaluations)
    return OracleResult(
        k=k,
        value=value,
        spectrum=np.sort(spectrum).tolist(),
        box=box,
        evaluations=objective.evaluations,
    )


# ---------------------------------------------------------------------------
# Lower-bound verification
# ---------------------------------------------------------------------------


def verify_lower_bound(
    p: Sigma0Problem,
    sigma0: float,
    samples: Sequence[Tuple[ArrayLike, SymmetricMatrix]],
    tol: float = 1e-9,
    operator: Optional[AnyOperator] = None,
    feas_tol: float = 1e-8,
    psd_tol: float = DEFAULT_PSD_TOL,
) -> LowerBoundReport:
    """
    Check the lemma dichotomy on solution samples.

    Each sample must either satisfy S_i1(A) >= sigma0 * (1 - tol)
    ("bounded") or have S_i(A) <= tol for every i in {i1} u js
    ("degenerate"). Anything else is a violation.

    Args:
        p: Root-equation data
        sigma0: Root of the equation for p
        samples: (x, A) pairs with A a PSD solution at x
        tol: Tolerance of both branches
        operator: When given, every sample must satisfy
            |residual| <= feas_tol * max(1, |rhs|)
        feas_tol: Feasibility tolerance
        psd_tol: PSD tolerance

    Raises:
        PreconditionError: If a sample is not PSD or not a solution
    """
    records: List[LowerBoundSample] = []
    violations: List[int] = []
    checked_indices = [p.i1] + list(p.js)
    for index, (x, A) in enumerate(samples):
        if A.n != p.n:
            raise DimensionMismatchError("Sample matrix dimension differs from the problem", expected=p.n, actual=A.n)
        if not is_psd(A, psd_tol):
            raise PreconditionError(f"Sample {index} is not positive semi-definite", field="samples")
        if operator is not None:
            rhs = operator.rhs if isinstance(operator, ShiftedOperator) else 0.0
            res = residual_matrix(operator, x, A)
            if abs(res) > feas_tol * max(1.0, abs(rhs)):
                raise PreconditionError(
                    f"Sample {index} does not solve the operator equation", field="residual", value=f"{res:.3e}"
                )
        eigs = np.maximum(eigenvalues_symmetric(A), 0.0)
        s = elementary_symmetric_all(eigs)
        s_i1 = float(s[p.i1])
        det = float(s[p.n])
        if s_i1 >= sigma0 * (1.0 - tol):
            records.append(LowerBoundSample(index=index, branch="bounded", s_i1=s_i1, det=det))
        elif all(s[i] <= tol for i in checked_indices):
            records.append(
                LowerBoundSample(index=index, branch="degenerate", s_i1=s_i1, det=det, det_vanishes=abs(det) <= tol)
            )
        else:
            records.append(LowerBoundSample(index=index, branch="violation", s_i1=s_i1, det=det))
            violations.append(index)
    bounded = sum(1 for r in records if r.branch == "bounded")
    degenerate = sum(1 for r in records if r.branch == "degenerate")
    if violations:
        logger.warning("Lower bound sigma0=%.6g violated at %d sample(s)", sigma0, len(violations))
    return LowerBoundReport(
        ok=not violations,
        sigma0=sigma0,
        i1=p.i1,
        samples=records,
        bounded=bounded,
        degenerate=degenerate,
        violations=violations,
    )
