"""
Scenario execution: dispatches a validated Scenario to the library
operations, replays the touching-paraboloid construction and assembles a
deterministic Report.
"""

import asyncio
import logging
from contextlib import contextmanager
from typing import Any, Callable, Dict, Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np

from ._version import __version__
from .examples import (
    SeparableExample,
    affine_field,
    cosine_profile,
    estimate_growth_order,
    example_operator,
    growth_bounds_check,
    half_norm_squared_field,
    make_cosine_example,
    make_quadratic_solution,
    make_quadrature_example,
    normalize_to_MA,
    separable_identity_residual,
    sqrt_field,
    step_profile,
    uniform_ratio,
)
from .exceptions import ConfigurationError, HessianRigidityError, PreconditionError
from .linalg import (
    DEFAULT_FD_STEP,
    ScalarField,
    SymmetricMatrix,
    eigenvalues_symmetric,
    hessian_fd,
    is_psd,
    loewner_leq,
)
from .models import (
    AffineReport,
    AllSameSign,
    CheckRecord,
    OracleSearch,
    ProbeReport,
    ProbeSpec,
    Report,
    ReportSummary,
    Scenario,
    SignSplit,
)
from .operators import (
    AnyOperator,
    ShiftedOperator,
    classify_lemma_case,
    constant_operator,
    make_builtin,
    residual_matrix,
    residual_scale,
    validate_condition_Q,
)
from .sampling import cube, grid_sample, sample_points
from .sigma0 import (
    Sigma0Problem,
    build_problem,
    contradiction_eps,
    min_Sk_oracle,
    sigma0_for_operator,
    solve_sigma0,
    verify_lower_bound,
)
from .symmfn import DEFAULT_INEQUALITY_TOL, check_maclaurin_chain, majorization_bound, symm_of_matrix
from .utils import write_csv_rows, write_report

logger = logging.getLogger(__name__)

REPORT_VERSION = f"hessian-rigidity {__version__}"
MAX_GRID_POINTS = 1_000_000
MAX_PROBE_EVALUATIONS = 100_000
EXPECTED_GROWTH = {
    "separable": "quadratic",
    "half-norm-squared": "quadratic",
    "affine": "subquadratic",
    "sqrt": "subquadratic",
}

Point = np.ndarray
Status = Literal["pass", "fail", "skipped"]


# ---------------------------------------------------------------------------
# Touching-paraboloid probe
# ---------------------------------------------------------------------------


def _compass_search(
    objective: Callable[[Point], float],
    start: Point,
    delta: float,
    bound: float,
    step_tol: float,
    max_evaluations: int = MAX_PROBE_EVALUATIONS,
) -> Tuple[Point, float]:
    """Coordinate pattern search inside [-bound, bound]^n."""
    x = start.copy()
    best = objective(x)
    evaluations = 1
    while delta >= step_tol and evaluations < max_evaluations:
        improved = False
        for i in range(x.size):
            for direction in (-1.0, 1.0):
                trial = x.copy()
                trial[i] = min(max(trial[i] + direction * delta, -bound), bound)
                value = objective(trial)
                evaluations += 1
                if value < best:
                    x, best = trial, value
                    improved = True
        if not improved:
            delta /= 2.0
    return x, best


def rigidity_probe(
    f: ScalarField,
    eps: float,
    search: Optional[ProbeSpec] = None,
    tol: Optional[float] = None,
    operator: Optional[AnyOperator] = None,
    fd_step: float = DEFAULT_FD_STEP,
    inequality_tol: float = DEFAULT_INEQUALITY_TOL,
) -> ProbeReport:
    """
    Minimize g(x) = (eps/2)|x|^2 - f(x) over [-box, box]^n and test the
    touching point.

    f is shifted by its smallest grid value so it is non-negative on the
    box; the shift does not move the minimizer. The search is a coarse
    grid followed by compass refinement. At the minimizer x0 the probe
    checks Hess f(x0) <= eps*I and, when the Hessian lies in [0, eps*I],
    the majorization bound S_k <= eps^k C(n, k). With an operator that has
    a sign split it also reports whether eps is small enough for the
    touching point to contradict S_i1 >= sigma0.

    Args:
        f: Convex field
        eps: Paraboloid opening
        search: Box, grid density and step tolerance
        tol: Loewner tolerance; defaults to ``search.loewner_tol``
        operator: Optional operator providing the lemma index and sigma0
        fd_step: Step for fields without a Hessian oracle
        inequality_tol: Slack of the majorization bound

    Returns:
        ProbeReport; a minimizer on the box boundary is inconclusive

    Raises:
        PreconditionError: If eps is not positive
    """
    if not eps > 0:
        raise PreconditionError("Probe eps must be positive", field="eps", value=str(eps))
    search = search or ProbeSpec()
    tol = search.loewner_tol if tol is None else tol
    n = f.n
    box = search.box

    grid = grid_sample(cube(-box, box, n), [search.grid_points] * n)
    values = np.array([f(p) for p in grid])
    shift = float(np.min(values))

    def g(x: Point) -> float:
        return 0.5 * eps * float(x @ x) - (f(x) - shift)

    g_grid = np.array([0.5 * eps * float(p @ p) for p in grid]) - (values - shift)
    start = grid[int(np.argmin(g_grid))]
    spacing = 2.0 * box / (search.grid_points - 1)
    x0, g_min = _compass_search(g, start, spacing, box, search.step_tol)

    inconclusive = bool(np.any(np.abs(x0) >= box - search.step_tol))
    if inconclusive:
        logger.warning("Probe minimizer for eps=%g sits on the box boundary; result is inconclusive", eps)

    hessian = f.hessian_at(x0, fd_step)
    eigs = eigenvalues_symmetric(hessian)
    bound = SymmetricMatrix.identity(n).scaled(eps)
    touching_ok = loewner_leq(hessian, bound, tol)
    majorization = None
    if touching_ok and is_psd(hessian, tol):
        majorization = majorization_bound(hessian, eps, inequality_tol, psd_tol=tol)

    lemma_index: Optional[int] = None
    sigma0: Optional[float] = None
    threshold: Optional[float] = None
    contradicts: Optional[bool] = None
    if operator is not None:
        solved = sigma0_for_operator(operator)
        if solved is not None:
            problem, sigma0 = solved
            lemma_index = problem.i1
            threshold = contradiction_eps(n, lemma_index, sigma0)
            contradicts = bool(touching_ok and not inconclusive and eps < threshold)

    return ProbeReport(
        eps=eps,
        x0=x0.tolist(),
        g_min=g_min,
        shift=shift,
        inconclusive=inconclusive,
        touching_ok=touching_ok,
        hessian_max_eigenvalue=float(eigs[-1]),
        majorization=majorization,
        lemma_index=lemma_index,
        sigma0=sigma0,
        contradiction_eps=threshold,
        contradicts_lower_bound=contradicts,
    )


def affine_conclusion(
    f: ScalarField,
    samples: Sequence[Point],
    tol: float = 1e-8,
    fd_step: float = DEFAULT_FD_STEP,
) -> AffineReport:
    """
    Check that Hess f vanishes at every sample, i.e. f is affine there.

    Raises:
        PreconditionError: If samples is empty
    """
    if len(samples) == 0:
        raise PreconditionError("Affine check needs at least one sample", field="samples")
    largest = max(f.hessian_at(x, fd_step).frobenius_norm() for x in samples)
    return AffineReport(affine=largest <= tol, max_hessian_norm=largest, checked=len(samples))


# ---------------------------------------------------------------------------
# Scenario runner
# ---------------------------------------------------------------------------


@contextmanager
def _configuring(key: str) -> Iterator[None]:
    """Turn library errors raised while building inputs into config errors."""
    try:
        yield
    except ConfigurationError:
        raise
    except HessianRigidityError as e:
        raise ConfigurationError(f"Scenario rejected: {e}", config_key=key) from e


def _status(ok: bool) -> Status:
    return "pass" if ok else "fail"


class RigidityHarness:
    """
    Runs one scenario and assembles its report.

    Library errors raised while the scenario inputs are built become
    ConfigurationError; errors raised inside a check are recorded as a
    failed check with the error text as diagnostics.
    """

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.tolerances = scenario.tolerances
        self.checks: List[CheckRecord] = []
        self.rows: List[List[float]] = []
        self.row_header: List[str] = []
        self._handlers: Dict[str, Callable[[], None]] = {
            "symm": self._run_symm,
            "sigma0": self._run_sigma0,
            "verify-example": self._run_verify_example,
            "residual-scan": self._run_residual_scan,
            "rigidity-probe": self._run_probe,
            "growth": self._run_growth,
        }

    # -- bookkeeping --------------------------------------------------------

    def _record(
        self,
        name: str,
        status: Status,
        measured: Optional[Dict[str, Any]] = None,
        tolerances: Optional[Dict[str, float]] = None,
        message: Optional[str] = None,
    ) -> None:
        self.checks.append(
            CheckRecord(name=name, status=status, measured=measured or {}, tolerances=tolerances or {}, message=message)
        )

    def _guarded(self, name: str, check: Callable[[], None]) -> None:
        try:
            check()
        except HessianRigidityError as e:
            logger.warning("Check %s raised %s", name, e)
            self._record(name, "fail", message=str(e))

    def run(self) -> Report:
        """
        Execute the scenario.

        Raises:
            ConfigurationError: If the scenario inputs are rejected
        """
        kind = self.scenario.kind
        logger.info("Running scenario %s", kind)
        self._handlers[kind]()
        failed = sum(1 for c in self.checks if c.status == "fail")
        logger.info("Scenario %s finished: %d checks, %d failed", kind, len(self.checks), failed)
        return Report(
            version=REPORT_VERSION,
            scenario=self.scenario.model_dump(mode="json"),
            checks=self.checks,
            summary=ReportSummary(total=len(self.checks), failed=failed),
        )

    # -- inputs -------------------------------------------------------------

    def _example(self) -> SeparableExample:
        spec = self.scenario.operator
        with _configuring("operator"):
            if spec.profile == "cosine":
                return make_cosine_example(spec.n, spec.q)
            if spec.profile == "step":
                return make_quadrature_example(spec.n, spec.q, step_profile(spec.q), name=f"step(q={spec.q:g})")
            return make_quadrature_example(
                spec.n, spec.q, cosine_profile(spec.q), name=f"quadrature-cosine(q={spec.q:g})"
            )

    def _operator(self) -> AnyOperator:
        spec = self.scenario.operator
        with _configuring("operator"):
            if spec.builtin == "separable":
                return example_operator(self._example())
            if spec.builtin == "custom":
                if not spec.coefficients:
                    raise ConfigurationError("Builtin 'custom' needs coefficients", config_key="operator.coefficients")
                return constant_operator(spec.n, spec.coefficients, name="custom")
            return make_builtin(spec.builtin, spec.n)

    def _samples(self, n: int) -> List[Point]:
        spec = self.scenario.sampling
        if spec.mode == "grid" and spec.points_per_axis ** n > MAX_GRID_POINTS:
            raise ConfigurationError(
                f"Grid of {spec.points_per_axis}^{n} points exceeds {MAX_GRID_POINTS}", config_key="sampling.points_per_axis"
            )
        with _configuring("sampling"):
            return sample_points(spec, n)

    def _oracle_search(self) -> OracleSearch:
        return OracleSearch(seed=self.scenario.sampling.seed)

    # -- symm ---------------------------------------------------------------

    def _run_symm(self) -> None:
        s = self.scenario
        tol = self.tolerances
        with _configuring("matrix"):
            if s.matrix is None:
                raise ConfigurationError("Scenario kind 'symm' needs a matrix", config_key="matrix")
            A = SymmetricMatrix.from_dense(s.matrix, tol=tol.check)
        n = A.n

        spec = symm_of_matrix(A)
        self._record("spectrum", "pass", {"eigenvalues": spec.eigenvalues, "S": spec.s})

        def trace_identity() -> None:
            gap = abs(spec.s[1] - A.trace())
            limit = tol.check * max(1.0, abs(A.trace()))
            self._record("trace_identity", _status(gap <= limit), {"gap": gap}, {"check": tol.check})

        def characteristic_polynomial() -> None:
            coeffs = np.poly(A.to_dense())
            scale = max(1.0, A.frobenius_norm())
            gaps = [abs(spec.s[k] - (-1.0) ** k * float(coeffs[k])) / scale ** k for k in range(n + 1)]
            self._record(
                "characteristic_polynomial",
                _status(max(gaps) <= tol.check),
                {"max_scaled_gap": max(gaps)},
                {"check": tol.check},
            )

        def maclaurin() -> None:
            if not is_psd(A, tol.psd):
                self._record("maclaurin_chain", "skipped", message="matrix is not positive semi-definite")
                return
            report = check_maclaurin_chain(A, tol.inequality, tol.psd)
            self._record(
                "maclaurin_chain",
                _status(report.holds),
                report.model_dump(mode="json"),
                {"inequality": tol.inequality, "psd": tol.psd},
            )

        def majorization() -> None:
            if s.eps is None:
                self._record("majorization", "skipped", message="no eps given")
                return
            if not (is_psd(A, tol.psd) and loewner_leq(A, SymmetricMatrix.identity(n).scaled(s.eps), tol.psd)):
                self._record("majorization", "skipped", message=f"matrix lies outside [0, {s.eps:g}*I]")
                return
            report = majorization_bound(A, s.eps, tol.inequality, tol.psd)
            self._record(
                "majorization",
                _status(report.holds),
                report.model_dump(mode="json"),
                {"inequality": tol.inequality, "psd": tol.psd},
            )

        self._guarded("trace_identity", trace_identity)
        self._guarded("characteristic_polynomial", characteristic_polynomial)
        self._guarded("maclaurin_chain", maclaurin)
        self._guarded("majorization", majorization)

    # -- sigma0 -------------------------------------------------------------

    def _run_sigma0(self) -> None:
        op = self._operator()
        tol = self.tolerances
        n = op.n
        with _configuring("operator"):
            case = classify_lemma_case(op)
        if isinstance(case, AllSameSign):
            self._record("lemma_case", "pass", {"case": "all_same_sign", "sign": case.sign, "indices": case.indices})
            self._record("sigma0_root", "skipped", message="all active coefficients share one sign")
            return
        self._record("lemma_case", "pass", {"case": "sign_split", **case.model_dump(mode="json")})

        problem = build_problem(n, case)
        solved: Dict[str, float] = {}

        def root() -> None:
            sigma0 = solve_sigma0(problem, tol.sigma0)
            solved["sigma0"] = sigma0
            residual = abs(problem.root_function()(sigma0) - 1.0)
            self._record(
                "sigma0_root",
                _status(residual <= tol.sigma0),
                {"sigma0": sigma0, "residual": residual, "i1": problem.i1, "js": problem.js, "ratio": problem.ratio},
                {"sigma0": tol.sigma0},
            )
            threshold = contradiction_eps(n, problem.i1, sigma0)
            self._record("contradiction_eps", "pass", {"k": problem.i1, "eps": threshold})

        self._guarded("sigma0_root", root)
        if "sigma0" not in solved:
            return
        sigma0 = solved["sigma0"]

        try:
            (op.operator if isinstance(op, ShiftedOperator) else op).constant_coefficients()
        except PreconditionError:
            self._record("oracle_tightness", "skipped", message="coefficients depend on x")
            return

        def oracle() -> None:
            result = min_Sk_oracle(n, op, problem.i1, self._oracle_search())
            gap = (result.value - sigma0) / sigma0
            self._record(
                "oracle_tightness",
                _status(gap >= -tol.oracle),
                {
                    "oracle_value": result.value,
                    "relative_gap": gap,
                    "tight": abs(gap) <= tol.oracle,
                    "spectrum": result.spectrum,
                    "box": result.box,
                    "evaluations": result.evaluations,
                },
                {"oracle": tol.oracle},
            )
            origin = np.zeros(n)
            samples = [(origin, SymmetricMatrix.diag(result.spectrum)), (origin, SymmetricMatrix.zeros(n))]
            report = verify_lower_bound(problem, sigma0, samples, tol=tol.oracle, operator=op)
            self._record(
                "lower_bound_dichotomy",
                _status(report.ok),
                {"bounded": report.bounded, "degenerate": report.degenerate, "violations": report.violations},
                {"oracle": tol.oracle},
            )

        self._guarded("oracle_tightness", oracle)

    # -- per-point residual scans ---------------------------------------------

    def _scan(self, op: AnyOperator, f: ScalarField, samples: Sequence[Point], with_fd: bool) -> None:
        tol = self.tolerances
        n = op.n
        self.row_header = [f"x{i + 1}" for i in range(n)] + ["residual"] + [f"S{k}" for k in range(1, n + 1)]
        self.row_header.append("min_eigenvalue")
        worst = worst_fd = 0.0
        worst_abs = 0.0
        for x in samples:
            H = f.hessian_at(x)
            spec = symm_of_matrix(H)
            residual = residual_matrix(op, x, H)
            scale = residual_scale(op, x, spec.s)
            worst_abs = max(worst_abs, abs(residual))
            worst = max(worst, abs(residual) / scale)
            self.rows.append(list(x) + [residual] + spec.s[1:] + [spec.eigenvalues[0]])
            if with_fd:
                fd_residual = residual_matrix(op, x, hessian_fd(f, x, tol.fd_step))
                worst_fd = max(worst_fd, abs(fd_residual) / scale)
        self._record(
            "residual_exact",
            _status(worst <= tol.check),
            {"max_relative": worst, "max_abs": worst_abs, "points": len(samples)},
            {"check": tol.check},
        )
        if with_fd:
            self._record(
                "residual_fd",
                _status(worst_fd <= tol.fd * n),
                {"max_relative": worst_fd},
                {"fd": tol.fd * n, "fd_step": tol.fd_step},
            )
        else:
            self._record("residual_fd", "skipped", message="field values are not closed-form")

    # -- verify-example -------------------------------------------------------

    def _run_verify_example(self) -> None:
        ex = self._example()
        with _configuring("operator"):
            op = example_operator(ex)
        samples = self._samples(ex.n)
        tol = self.tolerances
        n = ex.n

        self._record(
            "profile",
            _status(ex.conforming),
            {"name": ex.name, "q": ex.q, "closed_form": ex.closed_form},
        )
        self._guarded("residual_exact", lambda: self._scan(op, ex.field, samples, with_fd=False))

        def identity() -> None:
            q = ex.q if ex.conforming else None
            worst = 0.0
            for x in samples:
                alphas = ex.alpha_values(x)
                scale = max(1.0, abs(float(np.prod(alphas))))
                worst = max(worst, abs(separable_identity_residual(alphas, q)) / scale)
            self._record(
                "separable_identity",
                _status(worst <= tol.check),
                {"max_relative": worst, "points": len(samples)},
                {"check": tol.check},
            )

        def condition_q() -> None:
            report = validate_condition_Q(op, samples, tol.inequality)
            measured: Dict[str, Any] = {"violations": len(report.violations), "samples": report.samples_checked}
            if report.violations:
                measured["first"] = report.violations[0].model_dump(mode="json")
            self._record("condition_Q", _status(report.ok), measured, {"inequality": tol.inequality})

        def lemma_case() -> None:
            case = classify_lemma_case(op)
            ok = isinstance(case, SignSplit) and case.plus_side == [1] and case.minus_side == [n]
            self._record("lemma_case", _status(ok), case.model_dump(mode="json"))
            if not isinstance(case, SignSplit):
                return
            problem = build_problem(n, case)
            sigma0 = solve_sigma0(problem, tol.sigma0)
            pairs = [(x, ex.field.hessian_at(x)) for x in samples]
            report = verify_lower_bound(problem, sigma0, pairs, tol=tol.check, operator=op)
            self._record(
                "lower_bound_dichotomy",
                _status(report.ok),
                {"sigma0": sigma0, "bounded": report.bounded, "degenerate": report.degenerate, "violations": report.violations},
                {"check": tol.check},
            )
            # same dichotomy with one ratio over the whole range of omega
            uniform = Sigma0Problem(
                n=n, i1=problem.i1, js=problem.js, ratio=max(problem.ratio, uniform_ratio(n, ex.q))
            )
            uniform_sigma0 = solve_sigma0(uniform, tol.sigma0)
            report = verify_lower_bound(uniform, uniform_sigma0, pairs, tol=tol.check, operator=op)
            self._record(
                "lower_bound_dichotomy_uniform",
                _status(report.ok),
                {
                    "ratio": uniform.ratio,
                    "sigma0": uniform_sigma0,
                    "bounded": report.bounded,
                    "degenerate": report.degenerate,
                    "violations": report.violations,
                },
                {"check": tol.check},
            )

        def growth() -> None:
            report = growth_bounds_check(ex, samples, rel_tol=tol.inequality)
            self._record("growth_bounds", _status(report.holds), report.model_dump(mode="json"), {"inequality": tol.inequality})

        def convexity() -> None:
            smallest = min(float(eigenvalues_symmetric(ex.field.hessian_at(x))[0]) for x in samples)
            self._record(
                "convexity",
                _status(smallest >= ex.q - tol.inequality),
                {"min_eigenvalue": smallest, "q": ex.q},
                {"inequality": tol.inequality},
            )

        def fd_hessian() -> None:
            if not ex.closed_form:
                self._record("fd_hessian", "skipped", message="field values come from quadrature")
                return
            deviation = max(
                float(np.max(np.abs(hessian_fd(ex.field, x, tol.fd_step).to_dense() - ex.field.hessian_at(x).to_dense())))
                for x in samples
            )
            self._record("fd_hessian", _status(deviation <= tol.fd), {"max_abs_deviation": deviation}, {"fd": tol.fd})

        self._guarded("separable_identity", identity)
        self._guarded("condition_Q", condition_q)
        self._guarded("lemma_case", lemma_case)
        self._guarded("growth_bounds", growth)
        self._guarded("convexity", convexity)
        self._guarded("fd_hessian", fd_hessian)

    # -- residual-scan --------------------------------------------------------

    def _solution(self) -> Tuple[AnyOperator, ScalarField, bool]:
        """Operator, an exact solution of it and whether f is closed-form."""
        spec = self.scenario.operator
        n = spec.n
        if spec.builtin == "separable":
            ex = self._example()
            with _configuring("operator"):
                return example_operator(ex), ex.field, ex.closed_form
        op = self._operator()
        with _configuring("operator"):
            if isinstance(op, ShiftedOperator):
                rng = np.random.default_rng(self.scenario.sampling.seed)
                m = rng.standard_normal((n, n))
                dense = m @ m.T + n * np.eye(n)
                solution = normalize_to_MA(n, 0.5 * (dense + dense.T))
                return op, solution.field, True
            case = classify_lemma_case(op)
            if isinstance(case, AllSameSign):
                return op, affine_field(n), True
            result = min_Sk_oracle(n, op, case.i1, self._oracle_search())
            solution = make_quadratic_solution(n, SymmetricMatrix.diag([v / 2.0 for v in result.spectrum]))
            return op, solution.field, True

    def _run_residual_scan(self) -> None:
        op, f, closed_form = self._solution()
        samples = self._samples(op.n)
        self._guarded("residual_exact", lambda: self._scan(op, f, samples, with_fd=closed_form))

    # -- rigidity-probe -------------------------------------------------------

    def _probe_field(self) -> Tuple[ScalarField, Optional[AnyOperator]]:
        s = self.scenario
        n = s.operator.n
        kind = s.probe.field
        if kind == "separable":
            ex = self._example()
            with _configuring("operator"):
                return ex.field, example_operator(ex)
        operator = None if s.operator.builtin == "separable" else self._operator()
        with _configuring("probe"):
            if kind == "sqrt":
                return sqrt_field(n), operator
            if kind == "affine":
                return affine_field(n, s.probe.affine_slope or None), operator
            return half_norm_squared_field(n), operator

    def _run_probe(self) -> None:
        s = self.scenario
        tol = self.tolerances
        f, operator = self._probe_field()
        samples = self._samples(f.n)

        def convexity() -> None:
            hessians = [f.hessian_at(x, tol.fd_step) for x in samples]
            ok = all(is_psd(H, tol.psd) for H in hessians)
            smallest = min(float(eigenvalues_symmetric(H)[0]) for H in hessians)
            self._record("convexity", _status(ok), {"min_eigenvalue": smallest}, {"psd": tol.psd})

        self._guarded("convexity", convexity)

        for eps in s.probe.eps:
            name = f"probe[eps={eps:g}]"

            def probe(eps: float = eps, name: str = name) -> None:
                report = rigidity_probe(f, eps, s.probe, operator=operator, fd_step=tol.fd_step, inequality_tol=tol.inequality)
                measured = report.model_dump(mode="json")
                limits = {"loewner": s.probe.loewner_tol, "inequality": tol.inequality}
                if report.inconclusive:
                    self._record(name, "skipped", measured, limits, message="minimizer on the search-box boundary")
                    return
                ok = report.touching_ok and (report.majorization is None or report.majorization.holds)
                self._record(name, _status(ok), measured, limits)

            self._guarded(name, probe)

        def affine() -> None:
            expected = {"affine": True, "separable": False}.get(s.probe.field)
            if expected is None:
                self._record("affine_conclusion", "skipped", message=f"field '{s.probe.field}' is not a solution family")
                return
            report = affine_conclusion(f, samples, tol.check, tol.fd_step)
            measured = report.model_dump(mode="json")
            measured["expected_affine"] = expected
            self._record("affine_conclusion", _status(report.affine == expected), measured, {"check": tol.check})

        self._guarded("affine_conclusion", affine)

    # -- growth ---------------------------------------------------------------

    def _run_growth(self) -> None:
        s = self.scenario
        n = s.operator.n
        kind = s.growth.field
        if s.growth.directions < 2 * n:
            raise ConfigurationError(f"growth.directions must be at least {2 * n}", config_key="growth.directions")
        ex: Optional[SeparableExample] = None
        if kind == "separable":
            ex = self._example()
            f = ex.field
        elif kind == "affine":
            f = affine_field(n, s.probe.affine_slope or None)
        elif kind == "sqrt":
            f = sqrt_field(n)
        else:
            f = half_norm_squared_field(n)

        def order() -> None:
            report = estimate_growth_order(f, s.growth.radii, s.growth.directions, seed=s.sampling.seed)
            measured = report.model_dump(mode="json")
            measured["expected"] = EXPECTED_GROWTH[kind]
            self._record("growth_order", _status(report.verdict == EXPECTED_GROWTH[kind]), measured)
            if ex is not None:
                low, high = ex.q / 2.0, 1.0 / (2.0 * ex.q)
                inside = all(low * (1 - 1e-12) <= r <= high * (1 + 1e-12) for r in report.ratios)
                self._record("growth_sandwich", _status(inside), {"ratios": report.ratios, "low": low, "high": high})

        self._guarded("growth_order", order)
        if ex is None:
            return
        example = ex
        samples = self._samples(n)

        def bounds() -> None:
            report = growth_bounds_check(example, samples, self.tolerances.inequality)
            self._record("growth_bounds", _status(report.holds), report.model_dump(mode="json"))

        self._guarded("growth_bounds", bounds)

    # -- outputs --------------------------------------------------------------

    def write_outputs(self, report: Report) -> None:
        output = self.scenario.output
        if output.report:
            write_report(report, output.report, output.format)
        if output.csv and self.rows:
            write_csv_rows(output.csv, self.row_header, self.rows)


def run_scenario(scenario: Scenario, write_outputs: bool = True) -> Report:
    """
    Run one scenario and optionally write its report and CSV dump.

    Raises:
        ConfigurationError: If the scenario is rejected before any check ran
    """
    harness = RigidityHarness(scenario)
    report = harness.run()
    if write_outputs:
        harness.write_outputs(report)
    return report


async def run_scenario_async(scenario: Scenario, write_outputs: bool = True) -> Report:
    """Run a scenario in the default executor."""
    loop = asyncio.get_running_loop()
    return await loop.run_in_executor(None, run_scenario, scenario, write_outputs)
