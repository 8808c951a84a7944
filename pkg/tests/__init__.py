"""
Test suite for the hessian-rigidity library.
"""

import itertools
import logging
import math
import os
import sys
from typing import Optional

import numpy as np

# Add the parent directory to sys.path to import the library
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

# Configure logging for tests
logging.basicConfig(
    level=logging.WARNING,  # Reduce noise during testing
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

# Test configuration
TEST_SEED = 20240611
CORPUS_SIZE = 1000
LARGE_CORPUS_SIZE = 10_000

# Values derived from the sigma0 root equation with ratio 1
EQ3_SIGMA0 = {
    2: 4.0,
    3: math.sqrt(27.0),
    4: 256.0 ** (1.0 / 3.0),
}


def brute_force_Sk(eigs, k: int) -> float:
    """S_k by enumerating every k-subset of the eigenvalues."""
    values = list(eigs)
    return math.fsum(math.prod(c) for c in itertools.combinations(values, k))


def random_symmetric(rng: np.random.Generator, n: int, low: float = -2.0, high: float = 2.0) -> np.ndarray:
    """Dense symmetric matrix with entries drawn uniformly from [low, high]."""
    m = rng.uniform(low, high, size=(n, n))
    return np.tril(m) + np.tril(m, -1).T


def random_psd(rng: np.random.Generator, n: int, rank: Optional[int] = None) -> np.ndarray:
    """Dense PSD matrix B B^T with B of shape (n, rank)."""
    rank = n if rank is None else rank
    b = rng.uniform(-1.0, 1.0, size=(n, rank))
    m = b @ b.T
    return 0.5 * (m + m.T)


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def with_spectrum(rng: np.random.Generator, eigs) -> np.ndarray:
    """Symmetric matrix Q diag(eigs) Q^T for a random orthogonal Q."""
    q = random_orthogonal(rng, len(eigs))
    m = q @ np.diag(eigs) @ q.T
    return 0.5 * (m + m.T)
