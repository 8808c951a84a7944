"""
Elementary symmetric functions S_k of matrices, Maclaurin means, the
Maclaurin inequality chain and the eps*I majorization bound.
"""

import logging
import math
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.special import comb

from .exceptions import PreconditionError
from .linalg import (
    DEFAULT_PSD_TOL,
    SymmetricMatrix,
    eigenvalues_symmetric,
    is_psd,
    loewner_leq,
    psd_scale,
)
from .models import MaclaurinReport, MajorizationReport, SymmSpectrum

logger = logging.getLogger(__name__)

DEFAULT_INEQUALITY_TOL = 1e-12


def binomial(n: int, k: int) -> float:
    """C(n, k) as a float."""
    return float(comb(n, k, exact=True))


def elementary_symmetric_all(eigs: Union[Sequence[float], np.ndarray]) -> np.ndarray:
    """
    All elementary symmetric functions S_0..S_n of the given values.

    Coefficients of prod(t + lambda_i) are built one factor at a time,
    which keeps every intermediate a sum of same-sign terms for
    non-negative spectra.
    """
    values = np.asarray(eigs, dtype=float).reshape(-1)
    coeffs = np.zeros(values.size + 1)
    coeffs[0] = 1.0
    for lam in values:
        coeffs[1:] = coeffs[1:] + lam * coeffs[:-1]
    return coeffs


def elementary_symmetric(eigs: Union[Sequence[float], np.ndarray], k: int) -> float:
    """
    S_k of the given values: sum over k-subsets of products.

    Raises:
        PreconditionError: If k is outside [0, n]
    """
    values = np.asarray(eigs, dtype=float).reshape(-1)
    if not 0 <= k <= values.size:
        raise PreconditionError(f"k must lie in [0, {values.size}]", field="k", value=str(k))
    return float(elementary_symmetric_all(values)[k])


def spectrum_from_eigenvalues(eigs: Union[Sequence[float], np.ndarray]) -> SymmSpectrum:
    values = np.asarray(eigs, dtype=float).reshape(-1)
    return SymmSpectrum(
        n=int(values.size),
        s=elementary_symmetric_all(values).tolist(),
        eigenvalues=values.tolist(),
    )


def symm_of_matrix(A: SymmetricMatrix) -> SymmSpectrum:
    """S_0(A), ..., S_n(A) from the eigenvalues of A."""
    return spectrum_from_eigenvalues(eigenvalues_symmetric(A))


def maclaurin_mean(spec: SymmSpectrum, k: int) -> float:
    """The normalized mean p_k = S_k / C(n, k)."""
    if not 1 <= k <= spec.n:
        raise PreconditionError(f"k must lie in [1, {spec.n}]", field="k", value=str(k))
    return spec.s[k] / binomial(spec.n, k)


def _clamped_eigenvalues(A: SymmetricMatrix, psd_tol: float) -> Tuple[np.ndarray, int]:
    eigs = eigenvalues_symmetric(A)
    negative = eigs < 0.0
    clamped = int(np.count_nonzero(negative))
    if clamped:
        logger.warning(
            "Clamping %d eigenvalue(s) in [-%.1e, 0) to zero", clamped, psd_tol * psd_scale(A)
        )
    return np.where(negative, 0.0, eigs), clamped


def check_maclaurin_chain(
    A: SymmetricMatrix,
    tol: float = DEFAULT_INEQUALITY_TOL,
    psd_tol: float = DEFAULT_PSD_TOL,
) -> MaclaurinReport:
    """
    Verify (p_k)^m <= (p_m)^k * (1 + tol) for every 1 <= m <= k <= n.

    Comparisons run in log space so high powers neither overflow nor
    underflow. The slack of a pair is (p_m)^k / (p_k)^m - 1.

    Args:
        A: Positive semi-definite matrix
        tol: Multiplicative slack
        psd_tol: Tolerance of the PSD precondition

    Returns:
        MaclaurinReport naming the tightest pair

    Raises:
        PreconditionError: If A is not PSD within psd_tol
    """
    if not is_psd(A, psd_tol):
        raise PreconditionError(
            "Maclaurin inequalities need a positive semi-definite matrix",
            field="min_eigenvalue",
            value=f"{eigenvalues_symmetric(A)[0]:.3e}",
        )
    eigs, clamped = _clamped_eigenvalues(A, psd_tol)
    spec = spectrum_from_eigenvalues(eigs)
    n = spec.n
    means = [maclaurin_mean(spec, k) for k in range(1, n + 1)]
    allowance = math.log1p(tol)

    holds = True
    worst_pair = (1, 1)
    worst_slack = math.inf
    largest_gap = 0.0
    pairs = 0
    for m in range(1, n + 1):
        p_m = means[m - 1]
        for k in range(m, n + 1):
            p_k = means[k - 1]
            pairs += 1
            if p_k <= 0.0:
                slack = 0.0 if p_m <= 0.0 else math.inf
                ok = True
            elif p_m <= 0.0:
                slack = -1.0
                ok = False
            else:
                log_gap = k * math.log(p_m) - m * math.log(p_k)
                slack = math.expm1(log_gap)
                ok = log_gap >= -allowance
            holds = holds and ok
            largest_gap = max(largest_gap, abs(slack))
            if slack < worst_slack:
                worst_slack = slack
                worst_pair = (m, k)

    return MaclaurinReport(
        holds=holds,
        worst_pair=worst_pair,
        worst_slack=worst_slack,
        pairs_checked=pairs,
        clamped=clamped,
        all_equal=largest_gap <= tol,
    )


def majorization_bound(
    A: SymmetricMatrix,
    eps: float,
    tol: float = DEFAULT_INEQUALITY_TOL,
    psd_tol: float = DEFAULT_PSD_TOL,
) -> MajorizationReport:
    """
    Check S_k(A) <= S_k(eps*I) = eps^k * C(n, k) for every k.

    Args:
        A: Matrix with 0 <= A <= eps*I
        eps: Upper Loewner bound
        tol: Multiplicative slack on the bound
        psd_tol: Tolerance of the [0, eps*I] precondition

    Returns:
        MajorizationReport with the relative slack per k (index 0 is k = 1)

    Raises:
        PreconditionError: If eps < 0 or A lies outside [0, eps*I]
    """
    if eps < 0 or not math.isfinite(eps):
        raise PreconditionError("eps must be a finite non-negative number", field="eps", value=str(eps))
    n = A.n
    if not is_psd(A, psd_tol):
        raise PreconditionError("Majorization needs A >= 0", field="A")
    if not loewner_leq(A, SymmetricMatrix.identity(n).scaled(eps), psd_tol):
        raise PreconditionError("Majorization needs A <= eps*I", field="eps", value=str(eps))

    eigs, clamped = _clamped_eigenvalues(A, psd_tol)
    spec = spectrum_from_eigenvalues(eigs)
    slacks: List[float] = []
    violations: List[int] = []
    for k in range(1, n + 1):
        bound = eps ** k * binomial(n, k)
        value = spec.s[k]
        if bound > 0.0:
            slacks.append((bound - value) / bound)
        else:
            slacks.append(-value)
        if value > bound * (1.0 + tol):
            violations.append(k)
    return MajorizationReport(
        holds=not violations,
        eps=eps,
        per_k_slack=slacks,
        violations=violations,
        clamped=clamped,
    )
