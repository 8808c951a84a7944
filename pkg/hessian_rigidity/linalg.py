"""
Symmetric-matrix primitives: eigenvalues, positive semi-definiteness,
Loewner-order checks and finite-difference Hessians of scalar fields.

All matrices here are small and dense (n is expected to stay below 16).
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    ConvergenceError,
    DimensionMismatchError,
    NonFiniteValueError,
    PreconditionError,
)

logger = logging.getLogger(__name__)

DEFAULT_EIG_TOL = 1e-14
DEFAULT_PSD_TOL = 1e-12
DEFAULT_FD_STEP = 1e-4
MAX_JACOBI_SWEEPS = 100

ArrayLike = Union[Sequence[float], np.ndarray]


class SymmetricMatrix:
    """
    Dense real symmetric n x n matrix stored as its lower triangle.

    The packed layout is row-major over the lower triangle, so entry
    (i, j) with i >= j lives at ``i * (i + 1) // 2 + j``. Instances are
    immutable; arithmetic returns new matrices.
    """

    __slots__ = ("_n", "_packed")

    def __init__(self, n: int, packed: ArrayLike):
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise PreconditionError("Matrix dimension must be a positive integer", field="n", value=str(n))
        values = np.array(packed, dtype=float).reshape(-1)
        expected = n * (n + 1) // 2
        if values.size != expected:
            raise DimensionMismatchError(
                "Packed lower triangle has the wrong length", expected=expected, actual=int(values.size)
            )
        if not np.all(np.isfinite(values)):
            raise NonFiniteValueError("Matrix entries must be finite", where="SymmetricMatrix")
        values.setflags(write=False)
        self._n = int(n)
        self._packed = values

    @classmethod
    def from_dense(cls, dense: ArrayLike, tol: float = 0.0) -> "SymmetricMatrix":
        """
        Build from a full square array.

        Raises:
            DimensionMismatchError: If the array is not square
            PreconditionError: If the array is not symmetric within
                ``tol * max(1, ||A||_F)``
        """
        a = np.asarray(dense, dtype=float)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatchError(f"Expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NonFiniteValueError("Matrix entries must be finite", where="from_dense")
        scale = max(1.0, _frobenius(a))
        asymmetry = float(np.max(np.abs(a - a.T))) if a.size else 0.0
        if asymmetry > tol * scale:
            raise PreconditionError(
                "Matrix is not symmetric", field="asymmetry", value=f"{asymmetry:.3e}"
            )
        n = a.shape[0]
        rows, cols = np.tril_indices(n)
        return cls(n, a[rows, cols])

    @classmethod
    def identity(cls, n: int) -> "SymmetricMatrix":
        return cls.diag(np.ones(n))

    @classmethod
    def zeros(cls, n: int) -> "SymmetricMatrix":
        return cls(n, np.zeros(n * (n + 1) // 2))

    @classmethod
    def diag(cls, values: ArrayLike) -> "SymmetricMatrix":
        d = np.asarray(values, dtype=float).reshape(-1)
        return cls.from_dense(np.diag(d))

    @property
    def n(self) -> int:
        return self._n

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    def to_dense(self) -> np.ndarray:
        """Materialize the full matrix; the result is exactly symmetric."""
        out = np.zeros((self._n, self._n))
        rows, cols = np.tril_indices(self._n)
        out[rows, cols] = self._packed
        out[cols, rows] = self._packed
        return out

    def __getitem__(self, index: Tuple[int, int]) -> float:
        i, j = index
        if i < j:
            i, j = j, i
        return float(self._packed[i * (i + 1) // 2 + j])

    def trace(self) -> float:
        return float(np.trace(self.to_dense()))

    def frobenius_norm(self) -> float:
        return _frobenius(self.to_dense())

    def scaled(self, c: float) -> "SymmetricMatrix":
        return SymmetricMatrix(self._n, c * self._packed)

    def _check_same(self, other: "SymmetricMatrix") -> None:
        if other.n != self._n:
            raise DimensionMismatchError("Matrix dimensions differ", expected=self._n, actual=other.n)

    def __add__(self, other: "SymmetricMatrix") -> "SymmetricMatrix":
        self._check_same(other)
        return SymmetricMatrix(self._n, self._packed + other.packed)

    def __sub__(self, other: "SymmetricMatrix") -> "SymmetricMatrix":
        self._check_same(other)
        return SymmetricMatrix(self._n, self._packed - other.packed)

    def __neg__(self) -> "SymmetricMatrix":
        return self.scaled(-1.0)

    def __mul__(self, c: float) -> "SymmetricMatrix":
        return self.scaled(float(c))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymmetricMatrix):
            return NotImplemented
        return self._n == other.n and bool(np.array_equal(self._packed, other.packed))

    def __hash__(self) -> int:
        return hash((self._n, self._packed.tobytes()))

    def __repr__(self) -> str:
        return f"SymmetricMatrix(n={self._n}, dense={self.to_dense().tolist()})"


@dataclass(frozen=True)
class ScalarField:
    """
    Real function of n variables with optional exact derivative oracles.

    ``value`` receives a float array of shape (n,). When ``hessian`` is
    present it must agree with finite differences of ``value``.
    """

    n: int
    value: Callable[[np.ndarray], float]
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None
    hessian: Optional[Callable[[np.ndarray], SymmetricMatrix]] = None
    name: str = "field"

    def __call__(self, x: ArrayLike) -> float:
        return float(self.value(as_point(x, self.n)))

    def hessian_at(self, x: ArrayLike, fd_step: float = DEFAULT_FD_STEP) -> SymmetricMatrix:
        """Exact Hessian when the oracle exists, central differences otherwise."""
        point = as_point(x, self.n)
        if self.hessian is not None:
            return self.hessian(point)
        return hessian_fd(self, point, fd_step)


def as_point(x: ArrayLike, n: int) -> np.ndarray:
    """Convert to a float vector of length n."""
    point = np.asarray(x, dtype=float).reshape(-1)
    if point.size != n:
        raise DimensionMismatchError("Point has the wrong dimension", expected=n, actual=int(point.size))
    return point


def _frobenius(a: np.ndarray) -> float:
    """Frobenius norm that stays finite for entries beyond sqrt(max float)."""
    peak = float(np.max(np.abs(a))) if a.size else 0.0
    if peak == 0.0:
        return 0.0
    return peak * float(np.linalg.norm(a / peak))


def _jacobi_sweeps(
    a: np.ndarray, tol: float, max_sweeps: int
) -> Tuple[np.ndarray, np.ndarray, int]:
    n = a.shape[0]
    v = np.eye(n)
    threshold = tol * float(np.linalg.norm(a))
    eps = np.finfo(float).eps

    for sweep in range(max_sweeps + 1):
        off = math.sqrt(2.0 * float(np.sum(np.tril(a, -1) ** 2)))
        if off <= threshold:
            return a, v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # negligible against both diagonal entries: drop it
                if sweep > 3 and abs(apq) <= eps * min(abs(a[p, p]), abs(a[q, q])):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q

    raise ConvergenceError("Symmetric eigensolver failed", method="cyclic Jacobi", cap=max_sweeps)


def eigh_symmetric(
    A: SymmetricMatrix,
    tol: float = DEFAULT_EIG_TOL,
    max_sweeps: int = MAX_JACOBI_SWEEPS,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition by cyclic Jacobi rotations.

    Args:
        A: Symmetric matrix
        tol: Stop once the off-diagonal Frobenius norm is below
            ``tol * ||A||_F``
        max_sweeps: Sweep cap

    Returns:
        Ascending eigenvalues and the orthogonal matrix whose columns are
        the matching eigenvectors, so that ``A = Q diag(eigs) Q^T``

    Raises:
        PreconditionError: If tol is not positive
        ConvergenceError: If the sweep cap is reached
    """
    if not tol > 0:
        raise PreconditionError("Eigensolver tolerance must be positive", field="tol", value=str(tol))
    a = A.to_dense()
    # rotate A / max|a_ij| so squared entries cannot overflow
    peak = float(np.max(np.abs(a))) if a.size else 0.0
    if peak > 0.0:
        a = a / peak
    diag, vectors, sweeps = _jacobi_sweeps(a, tol, max_sweeps)
    logger.debug("Jacobi converged in %d sweeps (n=%d)", sweeps, A.n)
    eigs = np.diag(diag).copy()
    if peak > 0.0:
        eigs = eigs * peak
    order = np.argsort(eigs, kind="stable")
    return eigs[order], vectors[:, order]


def eigenvalues_symmetric(A: SymmetricMatrix, tol: float = DEFAULT_EIG_TOL) -> np.ndarray:
    """Ascending eigenvalues of A."""
    eigs, _ = eigh_symmetric(A, tol)
    return eigs


def psd_scale(A: SymmetricMatrix) -> float:
    """The scale max(1, ||A||_F) that PSD tolerances are relative to."""
    return max(1.0, A.frobenius_norm())


def min_eigenvalue(A: SymmetricMatrix) -> float:
    return float(eigenvalues_symmetric(A)[0])


def is_psd(A: SymmetricMatrix, tol: float = DEFAULT_PSD_TOL) -> bool:
    """True iff the smallest eigenvalue is at least ``-tol * max(1, ||A||_F)``."""
    if tol < 0:
        raise PreconditionError("PSD tolerance must be non-negative", field="tol", value=str(tol))
    return min_eigenvalue(A) >= -tol * psd_scale(A)


def loewner_leq(A: SymmetricMatrix, B: SymmetricMatrix, tol: float = DEFAULT_PSD_TOL) -> bool:
    """True iff A <= B in Loewner order, i.e. B - A is positive semi-definite."""
    if A.n != B.n:
        raise DimensionMismatchError("Loewner comparison needs equal dimensions", expected=A.n, actual=B.n)
    return is_psd(B - A, tol)


def _evaluate(f: ScalarField, point: np.ndarray) -> float:
    value = float(f.value(point))
    if not math.isfinite(value):
        raise NonFiniteValueError(
            "Field value is not finite on the difference stencil",
            where=f"{f.name} at {point.tolist()}",
            value=value,
        )
    return value


def hessian_fd(f: ScalarField, x: ArrayLike, h: float = DEFAULT_FD_STEP) -> SymmetricMatrix:
    """
    Central second-difference Hessian of a scalar field.

    The diagonal uses the 3-point stencil and the off-diagonal entries the
    4-point cross stencil. Offsets are re-measured after rounding
    ``x +/- h`` so the stencil is exact on quadratics.

    Args:
        f: Scalar field
        x: Evaluation point
        h: Step size

    Returns:
        Symmetric Hessian estimate

    Raises:
        PreconditionError: If h is not positive
        NonFiniteValueError: If the field is not finite at a stencil point
    """
    if not h > 0:
        raise PreconditionError("Finite-difference step must be positive", field="h", value=str(h))
    point = as_point(x, f.n)
    n = f.n
    up = point + h
    down = point - h
    h_up = up - point
    h_down = point - down

    def shifted(moves: Iterable[Tuple[int, bool]]) -> np.ndarray:
        p = point.copy()
        for i, forward in moves:
            p[i] = up[i] if forward else down[i]
        return p

    f0 = _evaluate(f, point)
    packed = np.zeros(n * (n + 1) // 2)
    for i in range(n):
        f_plus = _evaluate(f, shifted([(i, True)]))
        f_minus = _evaluate(f, shifted([(i, False)]))
        hp, hm = h_up[i], h_down[i]
        packed[i * (i + 1) // 2 + i] = 2.0 * (hm * f_plus - (hp + hm) * f0 + hp * f_minus) / (
            hp * hm * (hp + hm)
        )
        for j in range(i):
            f_pp = _evaluate(f, shifted([(i, True), (j, True)]))
            f_pm = _evaluate(f, shifted([(i, True), (j, False)]))
            f_mp = _evaluate(f, shifted([(i, False), (j, True)]))
            f_mm = _evaluate(f, shifted([(i, False), (j, False)]))
            width = (h_up[i] + h_down[i]) * (h_up[j] + h_down[j])
            packed[i * (i + 1) // 2 + j] = (f_pp - f_pm - f_mp + f_mm) / width

    return SymmetricMatrix(n, packed)
