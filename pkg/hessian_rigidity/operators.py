"""
Hessian operators L[f] = sum_i a_i(x) S_i(Hess f) with condition (Q)
metadata: residual evaluation, condition (Q) validation, the sign split
behind the lower-bound lemma, and the builtin operators.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    ConfigurationError,
    DimensionMismatchError,
    NonFiniteValueError,
    PreconditionError,
)
from .linalg import DEFAULT_FD_STEP, ArrayLike, ScalarField, SymmetricMatrix, as_point
from .models import AllSameSign, ConditionQReport, QViolation, SignSplit
from .symmfn import elementary_symmetric_all, symm_of_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Coefficient:
    """
    An active coefficient a_i(x) with its condition (Q) bounds.

    ``field`` returns the signed value; ``sign`` is the declared sign,
    cross-checked against samples by :func:`validate_condition_Q`.
    ``constant_value`` is set for constant coefficients only.
    """

    field: ScalarField
    sign: int
    mu1: float
    mu2: float
    constant_value: Optional[float] = None

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1):
            raise PreconditionError("Coefficient sign must be +1 or -1", field="sign", value=str(self.sign))
        for name, bound in (("mu1", self.mu1), ("mu2", self.mu2)):
            if not (math.isfinite(bound) and bound > 0):
                raise PreconditionError("Condition (Q) bounds must be finite and positive", field=name, value=str(bound))
        if self.mu1 > self.mu2:
            raise PreconditionError("Condition (Q) needs mu1 <= mu2", field="mu1", value=f"{self.mu1} > {self.mu2}")

    @classmethod
    def constant(cls, n: int, value: float) -> "Coefficient":
        """A constant coefficient with mu1 = mu2 = |value|."""
        if value == 0 or not math.isfinite(value):
            raise PreconditionError("Constant coefficient must be finite and nonzero", field="value", value=str(value))
        v = float(value)
        return cls(
            field=ScalarField(n=n, value=lambda x: v, name=f"const({v:g})"),
            sign=1 if v > 0 else -1,
            mu1=abs(v),
            mu2=abs(v),
            constant_value=v,
        )

    def __call__(self, x: np.ndarray) -> float:
        return float(self.field.value(x))


@dataclass(frozen=True)
class HessianOperator:
    """
    L[f] = sum_{i in J} a_i(x) S_i(Hess f).

    ``coeffs[i - 1]`` is the coefficient of S_i, or None when a_i is
    identically zero. Indices are 1-based throughout the public API.
    """

    n: int
    coeffs: Tuple[Optional[Coefficient], ...]
    name: str = "L"

    def __post_init__(self) -> None:
        if self.n < 1:
            raise PreconditionError("Operator dimension must be positive", field="n", value=str(self.n))
        if len(self.coeffs) != self.n:
            raise DimensionMismatchError("Operator needs one coefficient slot per index", expected=self.n, actual=len(self.coeffs))
        for c in self.coeffs:
            if c is not None and c.field.n != self.n:
                raise DimensionMismatchError("Coefficient field dimension differs from the operator", expected=self.n, actual=c.field.n)

    @property
    def active_indices(self) -> List[int]:
        """The index set J of non-identically-zero coefficients."""
        return [i + 1 for i, c in enumerate(self.coeffs) if c is not None]

    def coefficient(self, i: int) -> Optional[Coefficient]:
        if not 1 <= i <= self.n:
            raise PreconditionError(f"Index must lie in [1, {self.n}]", field="i", value=str(i))
        return self.coeffs[i - 1]

    def coefficient_values(self, x: ArrayLike) -> np.ndarray:
        """Signed a_1(x)..a_n(x), zero where the coefficient is inactive."""
        point = as_point(x, self.n)
        values = np.zeros(self.n)
        for i, c in enumerate(self.coeffs):
            if c is None:
                continue
            value = c(point)
            if not math.isfinite(value):
                raise NonFiniteValueError("Coefficient value is not finite", where=f"a_{i + 1} at {point.tolist()}", value=value)
            values[i] = value
        return values

    def constant_coefficients(self) -> np.ndarray:
        """Signed constant coefficients; fails for x-dependent operators."""
        values = np.zeros(self.n)
        for i, c in enumerate(self.coeffs):
            if c is None:
                continue
            if c.constant_value is None:
                raise PreconditionError(f"Coefficient a_{i + 1} of {self.name} is not constant", field="coeffs")
            values[i] = c.constant_value
        return values

    def scaled(self, factor: float) -> "HessianOperator":
        """Multiply every coefficient field by a positive factor."""
        if not factor > 0:
            raise PreconditionError("Scale factor must be positive", field="factor", value=str(factor))
        scaled: List[Optional[Coefficient]] = []
        for c in self.coeffs:
            if c is None:
                scaled.append(None)
                continue
            inner = c.field
            scaled.append(
                Coefficient(
                    field=ScalarField(n=self.n, value=lambda x, g=inner.value: factor * g(x), name=f"{factor:g}*{inner.name}"),
                    sign=c.sign,
                    mu1=factor * c.mu1,
                    mu2=factor * c.mu2,
                    constant_value=None if c.constant_value is None else factor * c.constant_value,
                )
            )
        return HessianOperator(n=self.n, coeffs=tuple(scaled), name=f"{factor:g}*{self.name}")


@dataclass(frozen=True)
class ShiftedOperator:
    """
    An operator with a constant right-hand side: L[f] = rhs.

    The residual is L[f] - rhs; the homogeneous operator keeps the shape
    sum_i a_i S_i.
    """

    operator: HessianOperator
    rhs: float
    name: str = ""

    @property
    def n(self) -> int:
        return self.operator.n

    @property
    def active_indices(self) -> List[int]:
        return self.operator.active_indices


AnyOperator = Union[HessianOperator, ShiftedOperator]


def _split(op: AnyOperator) -> Tuple[HessianOperator, float]:
    if isinstance(op, ShiftedOperator):
        return op.operator, op.rhs
    return op, 0.0


def residual_from_values(op: AnyOperator, x: ArrayLike, s: Sequence[float]) -> float:
    """Residual given S_0..S_n directly."""
    base, rhs = _split(op)
    if len(s) != base.n + 1:
        raise DimensionMismatchError("Symmetric-function vector has the wrong length", expected=base.n + 1, actual=len(s))
    a = base.coefficient_values(x)
    return float(np.dot(a, np.asarray(s[1:], dtype=float))) - rhs


def residual_scale(op: AnyOperator, x: ArrayLike, s: Sequence[float]) -> float:
    """max(1, |rhs| + sum |a_i(x) S_i|): the size a residual is judged against."""
    base, rhs = _split(op)
    a = base.coefficient_values(x)
    terms = np.abs(a * np.asarray(s[1:], dtype=float))
    return max(1.0, abs(rhs) + float(np.sum(terms)))


def residual_matrix(op: AnyOperator, x: ArrayLike, A: SymmetricMatrix) -> float:
    """
    sum_{i in J} a_i(x) S_i(A), minus the right-hand side for shifted
    operators.

    Raises:
        DimensionMismatchError: If A does not match the operator dimension
        NonFiniteValueError: If a coefficient is not finite at x
    """
    if A.n != op.n:
        raise DimensionMismatchError("Matrix dimension differs from the operator", expected=op.n, actual=A.n)
    return residual_from_values(op, x, symm_of_matrix(A).s)


def residual_field(op: AnyOperator, f: ScalarField, x: ArrayLike, fd_step: float = DEFAULT_FD_STEP) -> float:
    """Residual at Hess f(x), exact when f has a Hessian oracle."""
    if f.n != op.n:
        raise DimensionMismatchError("Field dimension differs from the operator", expected=op.n, actual=f.n)
    return residual_matrix(op, x, f.hessian_at(x, fd_step))


def residual_spectrum(op: AnyOperator, eigs: ArrayLike) -> float:
    """Residual of a constant-coefficient operator on a spectrum."""
    base, rhs = _split(op)
    s = elementary_symmetric_all(eigs)
    if s.size != base.n + 1:
        raise DimensionMismatchError("Spectrum has the wrong length", expected=base.n, actual=int(s.size - 1))
    return float(np.dot(base.constant_coefficients(), s[1:])) - rhs


def validate_condition_Q(
    op: AnyOperator,
    samples: Sequence[ArrayLike],
    tol: float = 0.0,
) -> ConditionQReport:
    """
    Check mu1 <= |a_i(x)| <= mu2 and the declared sign at every sample.

    Args:
        op: Operator to validate
        samples: Points to evaluate the coefficients at
        tol: Relative tolerance on both bounds

    Returns:
        ConditionQReport; violations are data, never exceptions

    Raises:
        PreconditionError: If samples is empty
    """
    base, _ = _split(op)
    if len(samples) == 0:
        raise PreconditionError("Condition (Q) validation needs at least one sample", field="samples")
    violations: List[QViolation] = []
    for raw in samples:
        x = as_point(raw, base.n)
        for i in base.active_indices:
            c = base.coeffs[i - 1]
            assert c is not None
            value = c(x)
            if not math.isfinite(value):
                violations.append(QViolation(index=i, point=x.tolist(), kind="non_finite"))
                continue
            magnitude = abs(value)
            if magnitude < c.mu1 * (1.0 - tol):
                violations.append(QViolation(index=i, point=x.tolist(), kind="below_mu1", value=value))
            if magnitude > c.mu2 * (1.0 + tol):
                violations.append(QViolation(index=i, point=x.tolist(), kind="above_mu2", value=value))
            if np.sign(value) != c.sign:
                violations.append(QViolation(index=i, point=x.tolist(), kind="sign_flip", value=value))
    if violations:
        logger.info("Condition (Q) failed for %s: %d violation(s)", base.name, len(violations))
    return ConditionQReport(
        ok=not violations,
        violations=violations,
        samples_checked=len(samples),
        indices_checked=base.active_indices,
    )


def classify_lemma_case(op: AnyOperator) -> Union[AllSameSign, SignSplit]:
    """
    Decide which branch of the lower-bound lemma applies.

    Returns AllSameSign when every active coefficient has the same
    declared sign. Otherwise returns the SignSplit whose plus side is the
    sign class of min(J), so that i1 < j1.

    Raises:
        PreconditionError: If J is empty
    """
    base, _ = _split(op)
    J = base.active_indices
    if not J:
        raise PreconditionError(f"Operator {base.name} has no active coefficient", field="J")
    signs = {i: base.coeffs[i - 1].sign for i in J}  # type: ignore[union-attr]
    leader_sign = signs[J[0]]
    if all(s == leader_sign for s in signs.values()):
        return AllSameSign(sign=leader_sign, indices=J)

    plus = [i for i in J if signs[i] == leader_sign]
    minus = [i for i in J if signs[i] != leader_sign]
    mu1_leader = base.coeffs[plus[0] - 1].mu1  # type: ignore[union-attr]
    mu2_minus = max(base.coeffs[j - 1].mu2 for j in minus)  # type: ignore[union-attr]
    return SignSplit(
        plus_side=plus,
        minus_side=minus,
        ratio_bound=mu2_minus / mu1_leader,
        leader_sign=leader_sign,
    )


def constant_operator(n: int, coefficients: Mapping[int, float], name: str = "L") -> HessianOperator:
    """Operator with constant coefficients, keyed by 1-based index."""
    if n < 1:
        raise PreconditionError("Operator dimension must be positive", field="n", value=str(n))
    slots: List[Optional[Coefficient]] = [None] * n
    for index, value in coefficients.items():
        i = int(index)
        if not 1 <= i <= n:
            raise PreconditionError(f"Coefficient index must lie in [1, {n}]", field="index", value=str(index))
        slots[i - 1] = Coefficient.constant(n, value)
    return HessianOperator(n=n, coeffs=tuple(slots), name=name)


def builtin_eq3(n: int) -> HessianOperator:
    """S_n(Hess f) - S_1(Hess f), i.e. det Hess f - Laplacian f."""
    if n < 2:
        raise PreconditionError("det Hess f - Laplacian f needs n >= 2", field="n", value=str(n))
    return constant_operator(n, {n: 1.0, 1: -1.0}, name=f"eq3(n={n})")


def builtin_eq4(n: int) -> HessianOperator:
    """sum_{k=0}^{[(n-1)/2]} (-1)^k S_{2k+1}(Hess f)."""
    if n < 1:
        raise PreconditionError("Alternating odd operator needs n >= 1", field="n", value=str(n))
    coefficients = {2 * k + 1: (-1.0) ** k for k in range((n - 1) // 2 + 1)}
    return constant_operator(n, coefficients, name=f"eq4(n={n})")


def builtin_theoremA(n: int) -> ShiftedOperator:
    """Monge-Ampere: S_n(Hess f) = det Hess f = 1."""
    if n < 2:
        raise PreconditionError("Monge-Ampere builtin needs n >= 2", field="n", value=str(n))
    return ShiftedOperator(
        operator=constant_operator(n, {n: 1.0}, name=f"det(n={n})"),
        rhs=1.0,
        name=f"theoremA(n={n})",
    )


def get_builtin_operators() -> Dict[str, Dict[str, Union[str, Callable[[int], AnyOperator], int]]]:
    """
    Get all builtin operator configurations.

    Returns:
        Dictionary mapping builtin names to their factory, minimum
        dimension and a short description
    """
    return {
        "eq3": {
            "factory": builtin_eq3,
            "min_n": 2,
            "description": "det Hess f - Laplacian f = 0",
        },
        "eq4": {
            "factory": builtin_eq4,
            "min_n": 1,
            "description": "sum_k (-1)^k S_{2k+1}(Hess f) = 0",
        },
        "theoremA": {
            "factory": builtin_theoremA,
            "min_n": 2,
            "description": "det Hess f = 1",
        },
    }


def make_builtin(name: str, n: int) -> AnyOperator:
    """
    Build a builtin operator by name.

    Raises:
        ConfigurationError: If the name is unknown
        PreconditionError: If n is too small for the builtin
    """
    builtins = get_builtin_operators()
    if name not in builtins:
        raise ConfigurationError(
            f"Unknown builtin operator '{name}'. Available: {', '.join(builtins.keys())}",
            config_key="operator.builtin",
        )
    factory = builtins[name]["factory"]
    return factory(n)  # type: ignore[operator]
