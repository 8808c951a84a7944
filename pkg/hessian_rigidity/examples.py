"""
Explicit solution families: quadratic polynomials solving det Hess f = 1,
and the separable quadratic-growth family

    f(x) = sum_i int_0^{x_i} (x_i - t) alpha(t) dt,  q <= alpha <= 1/q,

which solves S_n(Hess f) - omega(x) S_1(Hess f) = 0 with
omega(x) = prod alpha(x_i) / sum alpha(x_i).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from .exceptions import ConvergenceError, NonFiniteValueError, PreconditionError
from .linalg import ArrayLike, ScalarField, SymmetricMatrix, as_point, eigenvalues_symmetric
from .models import GrowthBoundsReport, GrowthOrderReport
from .operators import Coefficient, HessianOperator, builtin_theoremA, residual_field
from .symmfn import elementary_symmetric_all, symm_of_matrix

logger = logging.getLogger(__name__)

Profile = Callable[[float], float]

QUADRATURE_ABS_TOL = 1e-10
PROFILE_INTERVAL = (-50.0, 50.0)
PROFILE_SAMPLES = 4001
SUBQUADRATIC_DECAY = 2.0
SUBQUADRATIC_CEILING = 1e-2
QUADRATIC_BAND = 0.2


@dataclass(frozen=True)
class SeparableExample:
    """
    A member of the separable family with exact derivative oracles.

    ``conforming`` is False for constant profiles, which the family
    excludes but tests use as a degenerate reference.
    """

    n: int
    q: float
    profile: Profile
    field: ScalarField
    name: str
    conforming: bool = True
    closed_form: bool = False

    def alpha_values(self, x: ArrayLike) -> np.ndarray:
        point = as_point(x, self.n)
        return np.array([self.profile(float(t)) for t in point])


@dataclass(frozen=True)
class QuadraticSolution:
    """
    f(x) = a + <b, x> + <x, A x>, with Hess f = 2A everywhere.
    """

    n: int
    a: float
    b: np.ndarray
    A: SymmetricMatrix

    @property
    def field(self) -> ScalarField:
        dense = self.A.to_dense()
        hessian = self.A.scaled(2.0)
        return ScalarField(
            n=self.n,
            value=lambda x: float(self.a + self.b @ x + x @ dense @ x),
            gradient=lambda x: self.b + 2.0 * dense @ x,
            hessian=lambda x: hessian,
            name="quadratic",
        )

    def is_convex(self, tol: float = 1e-12) -> bool:
        return float(eigenvalues_symmetric(self.A)[0]) >= -tol * max(1.0, self.A.frobenius_norm())


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------


def _check_q(q: float, allow_one: bool = False) -> None:
    if not (0.0 < q < 1.0 or (allow_one and q == 1.0)):
        raise PreconditionError("q must lie in (0, 1)", field="q", value=str(q))


def cosine_profile(q: float) -> Profile:
    """alpha(t) = c + d cos t with range exactly [q, 1/q]."""
    _check_q(q)
    c = (q + 1.0 / q) / 2.0
    d = (1.0 / q - q) / 2.0
    return lambda t: c + d * math.cos(t)


def step_profile(q: float) -> Profile:
    """alpha = q for t < 0 and 1/q for t >= 0 (right limit at the jump)."""
    _check_q(q)
    return lambda t: q if t < 0.0 else 1.0 / q


def constant_profile(value: float = 1.0) -> Profile:
    return lambda t: value


def check_profile(
    profile: Profile,
    q: float,
    tol: float = 1e-12,
    interval: Tuple[float, float] = PROFILE_INTERVAL,
    samples: int = PROFILE_SAMPLES,
) -> bool:
    """
    Validate q <= alpha <= 1/q on a dense 1-D sample.

    Returns:
        True when the profile is non-constant on the sample

    Raises:
        PreconditionError: If a sample leaves [q(1 - tol), (1/q)(1 + tol)]
    """
    ts = np.linspace(interval[0], interval[1], samples)
    values = np.array([profile(float(t)) for t in ts])
    if not np.all(np.isfinite(values)):
        raise NonFiniteValueError("Profile is not finite on its working interval", where="alpha")
    low, high = q * (1.0 - tol), (1.0 / q) * (1.0 + tol)
    outside = (values < low) | (values > high)
    if np.any(outside):
        t_bad = float(ts[np.argmax(outside)])
        raise PreconditionError(
            f"Profile leaves [{q:g}, {1.0 / q:g}]", field="alpha", value=f"alpha({t_bad:g}) = {profile(t_bad):.6g}"
        )
    return float(np.max(values) - np.min(values)) > 1e-9


# ---------------------------------------------------------------------------
# Separable family
# ---------------------------------------------------------------------------


def _diagonal_hessian(profile: Profile) -> Callable[[np.ndarray], SymmetricMatrix]:
    return lambda x: SymmetricMatrix.diag([profile(float(t)) for t in x])


def make_cosine_example(n: int, q: float) -> SeparableExample:
    """
    Separable example with alpha(t) = c + d cos t in closed form:
    f = sum c x_i^2 / 2 + d (1 - cos x_i), grad_i = c x_i + d sin x_i,
    Hess = diag(c + d cos x_i).
    """
    if n < 1:
        raise PreconditionError("Dimension must be positive", field="n", value=str(n))
    _check_q(q)
    c = (q + 1.0 / q) / 2.0
    d = (1.0 / q - q) / 2.0
    profile = cosine_profile(q)

    def value(x: np.ndarray) -> float:
        return math.fsum(c * t * t / 2.0 + d * (1.0 - math.cos(t)) for t in x)

    def gradient(x: np.ndarray) -> np.ndarray:
        return c * x + d * np.sin(x)

    field = ScalarField(n=n, value=value, gradient=gradient, hessian=_diagonal_hessian(profile), name=f"cosine(q={q:g})")
    return SeparableExample(n=n, q=q, profile=profile, field=field, name=field.name, closed_form=True)


def _quad(integrand: Callable[[float], float], upper: float) -> float:
    if upper == 0.0:
        return 0.0
    value, error = integrate.quad(integrand, 0.0, upper, epsabs=QUADRATURE_ABS_TOL, epsrel=1e-13, limit=200)
    if error > max(QUADRATURE_ABS_TOL, 1e-12 * abs(value)):
        raise ConvergenceError(f"Quadrature error estimate {error:.2e} exceeds tolerance", method="scipy.integrate.quad")
    return float(value)


def make_quadrature_example(
    n: int,
    q: float,
    profile: Profile,
    name: str = "quadrature",
    allow_constant: bool = False,
    tol: float = 1e-12,
) -> SeparableExample:
    """
    Separable example for an arbitrary profile.

    f and its gradient come from adaptive quadrature per coordinate
    (absolute tolerance 1e-10); the Hessian is diag(alpha(x_i)) exactly.

    Args:
        n: Dimension
        q: Bound parameter; q = 1 is accepted only with allow_constant
        profile: alpha(t)
        name: Label used in reports
        allow_constant: Admit constant profiles, flagged non-conforming
        tol: Relative tolerance of the range check

    Raises:
        PreconditionError: If the profile leaves [q, 1/q] or is constant
            without allow_constant
    """
    if n < 1:
        raise PreconditionError("Dimension must be positive", field="n", value=str(n))
    _check_q(q, allow_one=allow_constant)
    varies = check_profile(profile, q, tol)
    if not varies:
        if not allow_constant:
            raise PreconditionError("Profile must not be identically constant", field="alpha")
        logger.warning("Profile %s is constant; example is non-conforming", name)

    def value(x: np.ndarray) -> float:
        return math.fsum(_quad(lambda t, xi=float(xi): (xi - t) * profile(t), float(xi)) for xi in x)

    def gradient(x: np.ndarray) -> np.ndarray:
        return np.array([_quad(profile, float(xi)) for xi in x])

    field = ScalarField(n=n, value=value, gradient=gradient, hessian=_diagonal_hessian(profile), name=name)
    return SeparableExample(n=n, q=q, profile=profile, field=field, name=name, conforming=varies)


def omega_of_alphas(alphas: ArrayLike) -> float:
    """prod alpha_i / sum alpha_i."""
    values = np.asarray(alphas, dtype=float).reshape(-1)
    return math.prod(values) / math.fsum(values)


def omega(ex: SeparableExample, x: ArrayLike) -> float:
    """omega(x) = prod alpha(x_i) / sum alpha(x_i)."""
    return omega_of_alphas(ex.alpha_values(x))


def omega_bounds(n: int, q: float) -> Tuple[float, float]:
    """(q^(n+1) / n, q^(-n-1) / n)."""
    return q ** (n + 1) / n, q ** (-n - 1) / n


def uniform_ratio(n: int, q: float) -> float:
    """mu2 / mu1 over the whole range of omega, q^(-2n-2)."""
    mu1, mu2 = omega_bounds(n, q)
    return mu2 / mu1


def example_operator(ex: SeparableExample) -> HessianOperator:
    """
    S_n(Hess f) - omega(x) S_1(Hess f): a_n = 1 and a_1 = -omega(x).

    Raises:
        PreconditionError: If n < 2 (a_1 and a_n would coincide)
    """
    n = ex.n
    if n < 2:
        raise PreconditionError("The separable operator needs n >= 2", field="n", value=str(n))
    mu1, mu2 = omega_bounds(n, ex.q)
    slots: List[Optional[Coefficient]] = [None] * n
    slots[0] = Coefficient(
        field=ScalarField(n=n, value=lambda x: -omega(ex, x), name="-omega"),
        sign=-1,
        mu1=mu1,
        mu2=mu2,
    )
    slots[n - 1] = Coefficient.constant(n, 1.0)
    return HessianOperator(n=n, coeffs=tuple(slots), name=f"separable[{ex.name}]")


def separable_identity_residual(alphas: ArrayLike, q: Optional[float] = None) -> float:
    """
    S_n(diag alpha) - omega * S_1(diag alpha), matrix-free.

    S_n and S_1 come from the elementary symmetric recurrence, omega from
    its product-over-sum definition. With ``q`` every alpha must lie in
    [q, 1/q].

    Raises:
        PreconditionError: If fewer than two alphas are given or one lies
            outside [q, 1/q]
    """
    values = np.asarray(alphas, dtype=float).reshape(-1)
    n = values.size
    if n < 2:
        raise PreconditionError("The separable identity needs n >= 2", field="alphas", value=str(n))
    if q is not None:
        _check_q(q)
        slack = 1e-12
        if np.any(values < q * (1.0 - slack)) or np.any(values > (1.0 + slack) / q):
            raise PreconditionError("alpha values must lie in [q, 1/q]", field="alphas", value=str(q))
    s = elementary_symmetric_all(values)
    return float(s[n]) - omega_of_alphas(values) * float(s[1])


# ---------------------------------------------------------------------------
# Growth
# ---------------------------------------------------------------------------


def growth_bounds_check(
    ex: SeparableExample,
    samples: Sequence[ArrayLike],
    rel_tol: float = 1e-12,
    q: Optional[float] = None,
) -> GrowthBoundsReport:
    """
    Check q |x|^2 / 2 <= f(x) <= |x|^2 / (2q) at every sample.

    The origin is skipped. ``q`` overrides the example's bound parameter,
    e.g. q = 1 for the constant reference profile.
    """
    q = ex.q if q is None else q
    violations: List[List[float]] = []
    checked = skipped = 0
    ratios: List[float] = []
    for raw in samples:
        x = as_point(raw, ex.n)
        r2 = float(x @ x)
        if r2 == 0.0:
            skipped += 1
            continue
        value = ex.field(x)
        slack = rel_tol * max(1.0, r2)
        checked += 1
        ratios.append(value / r2)
        if value < q * r2 / 2.0 - slack or value > r2 / (2.0 * q) + slack:
            violations.append(x.tolist())
    return GrowthBoundsReport(
        holds=not violations,
        checked=checked,
        skipped=skipped,
        violations=violations,
        min_ratio=min(ratios) if ratios else None,
        max_ratio=max(ratios) if ratios else None,
    )


def _directions(n: int, count: int, seed: int) -> np.ndarray:
    axes = np.vstack([np.eye(n), -np.eye(n)])
    extra = count - axes.shape[0]
    if extra <= 0:
        return axes
    rng = np.random.default_rng(seed)
    random = rng.standard_normal((extra, n))
    random /= np.linalg.norm(random, axis=1, keepdims=True)
    return np.vstack([axes, random])


def estimate_growth_order(
    f: ScalarField,
    radii: Sequence[float],
    directions: int,
    seed: int = 0,
) -> GrowthOrderReport:
    """
    Classify the growth of f from ratio(R) = max_u |f(R u)| / R^2.

    Directions are the 2n coordinate directions plus seeded random unit
    vectors. The verdict is "subquadratic" when the ratios fall by a
    factor of at least 2 and end below 1e-2, "quadratic" when they stay
    within 20% of a positive final value, "superquadratic" otherwise.

    Raises:
        PreconditionError: If radii are not ascending or too few directions
        NonFiniteValueError: If f is not finite at a sample
    """
    radii = [float(r) for r in radii]
    if len(radii) < 2 or any(b <= a for a, b in zip(radii, radii[1:])) or radii[0] <= 0:
        raise PreconditionError("Radii must be positive, ascending and at least two", field="radii")
    if directions < 2 * f.n:
        raise PreconditionError(f"Need at least {2 * f.n} directions", field="directions", value=str(directions))
    units = _directions(f.n, directions, seed)
    ratios: List[float] = []
    for R in radii:
        worst = 0.0
        for u in units:
            value = f(R * u)
            if not math.isfinite(value):
                raise NonFiniteValueError("Field is not finite", where=f"{f.name} at radius {R:g}", value=value)
            worst = max(worst, abs(value))
        ratios.append(worst / (R * R))

    first, last = ratios[0], ratios[-1]
    if last <= SUBQUADRATIC_CEILING and (last == 0.0 or first >= SUBQUADRATIC_DECAY * last):
        verdict = "subquadratic"
    elif last > 0.0 and all(abs(r - last) <= QUADRATIC_BAND * last for r in ratios):
        verdict = "quadratic"
    else:
        verdict = "superquadratic"
    return GrowthOrderReport(radii=radii, ratios=ratios, verdict=verdict)


# ---------------------------------------------------------------------------
# Quadratic solutions of det Hess f = 1
# ---------------------------------------------------------------------------


def _as_matrix(n: int, A: "SymmetricMatrix | ArrayLike") -> SymmetricMatrix:
    matrix = A if isinstance(A, SymmetricMatrix) else SymmetricMatrix.from_dense(A, tol=1e-12)
    if matrix.n != n:
        raise PreconditionError(f"Matrix must be {n} x {n}", field="A", value=str(matrix.n))
    return matrix


def make_quadratic_solution(
    n: int,
    A: "SymmetricMatrix | ArrayLike",
    b: Optional[ArrayLike] = None,
    a: float = 0.0,
) -> QuadraticSolution:
    """f(x) = a + <b, x> + <x, A x>."""
    matrix = _as_matrix(n, A)
    vector = np.zeros(n) if b is None else as_point(b, n)
    return QuadraticSolution(n=n, a=float(a), b=vector, A=matrix)


def normalize_to_MA(
    n: int,
    A: "SymmetricMatrix | ArrayLike",
    b: Optional[ArrayLike] = None,
    a: float = 0.0,
    tol: float = 1e-10,
) -> QuadraticSolution:
    """
    Rescale A by s = det(2A)^(-1/n) so that det Hess f = det(2 s A) = 1.

    Raises:
        PreconditionError: If A is not positive definite
        ConvergenceError: If the rescaled determinant misses 1 by more than tol
    """
    matrix = _as_matrix(n, A)
    if float(eigenvalues_symmetric(matrix)[0]) <= 0.0:
        raise PreconditionError("normalize_to_MA needs a positive definite matrix", field="A")
    det = symm_of_matrix(matrix.scaled(2.0)).s[n]
    scale = det ** (-1.0 / n)
    solution = make_quadratic_solution(n, matrix.scaled(scale), b, a)
    residual = theorem_a_residual(solution, np.zeros(n))
    if abs(residual) > tol:
        raise ConvergenceError(f"Normalized determinant misses 1 by {residual:.3e}", method="normalize_to_MA")
    return solution


def theorem_a_residual(sol: QuadraticSolution, x: ArrayLike) -> float:
    """det Hess f(x) - 1."""
    return residual_field(builtin_theoremA(sol.n), sol.field, x)


# ---------------------------------------------------------------------------
# Reference fields for the probe and the growth estimator
# ---------------------------------------------------------------------------


def sqrt_field(n: int) -> ScalarField:
    """f(x) = sqrt(1 + |x|^2): convex with linear growth."""

    def value(x: np.ndarray) -> float:
        return math.sqrt(1.0 + float(x @ x))

    def hessian(x: np.ndarray) -> SymmetricMatrix:
        w = 1.0 + float(x @ x)
        return SymmetricMatrix.from_dense((np.eye(n) * w - np.outer(x, x)) / w ** 1.5)

    return ScalarField(n=n, value=value, gradient=lambda x: x / value(x), hessian=hessian, name="sqrt(1+|x|^2)")


def affine_field(n: int, slope: Optional[ArrayLike] = None, offset: float = 0.0) -> ScalarField:
    """f(x) = offset + <b, x>; b defaults to (1/2, ..., 1/2)."""
    b = np.full(n, 0.5) if slope is None or len(slope) == 0 else as_point(slope, n)
    zero = SymmetricMatrix.zeros(n)
    return ScalarField(
        n=n,
        value=lambda x: offset + float(b @ x),
        gradient=lambda x: b.copy(),
        hessian=lambda x: zero,
        name="affine",
    )


def half_norm_squared_field(n: int) -> ScalarField:
    """f(x) = |x|^2 / 2, with Hess f = I."""
    identity = SymmetricMatrix.identity(n)
    return ScalarField(
        n=n,
        value=lambda x: 0.5 * float(x @ x),
        gradient=lambda x: x.copy(),
        hessian=lambda x: identity,
        name="|x|^2/2",
    )
