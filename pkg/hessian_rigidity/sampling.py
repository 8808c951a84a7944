"""
Deterministic point sets: row-major grids and seeded PCG64 samples.
"""

import itertools
from typing import List, Sequence, Tuple

import numpy as np

from .exceptions import PreconditionError
from .models import SamplingSpec

Box = Sequence[Tuple[float, float]]


def _check_box(box: Box) -> None:
    if len(box) == 0:
        raise PreconditionError("Sampling box has no axes", field="box")
    for axis, (low, high) in enumerate(box):
        if not low < high:
            raise PreconditionError(
                "Sampling box is empty", field=f"box[{axis}]", value=f"[{low:g}, {high:g}]"
            )


def cube(low: float, high: float, n: int) -> List[Tuple[float, float]]:
    """The box [low, high]^n."""
    return [(float(low), float(high))] * n


def grid_sample(box: Box, counts: Sequence[int]) -> List[np.ndarray]:
    """
    Tensor grid with the last axis varying fastest.

    An axis with a single point contributes its lower end.

    Raises:
        PreconditionError: If the box is empty or a count is below 1
    """
    _check_box(box)
    if len(counts) != len(box):
        raise PreconditionError("Need one count per box axis", field="counts", value=str(list(counts)))
    if any(c < 1 for c in counts):
        raise PreconditionError("Grid counts must be at least 1", field="counts", value=str(list(counts)))
    axes = [np.linspace(low, high, count) for (low, high), count in zip(box, counts)]
    return [np.array(point) for point in itertools.product(*axes)]


def random_sample(box: Box, count: int, seed: int) -> List[np.ndarray]:
    """
    ``count`` uniform points from ``numpy.random.default_rng(seed)``.

    Raises:
        PreconditionError: If the box is empty or count is below 1
    """
    _check_box(box)
    if count < 1:
        raise PreconditionError("Sample count must be at least 1", field="count", value=str(count))
    lows = np.array([low for low, _ in box])
    highs = np.array([high for _, high in box])
    rng = np.random.default_rng(seed)
    points = rng.uniform(lows, highs, size=(count, len(box)))
    return [row.copy() for row in points]


def sample_points(spec: SamplingSpec, n: int) -> List[np.ndarray]:
    """Points described by a scenario's sampling section."""
    box = cube(spec.low, spec.high, n)
    if spec.mode == "grid":
        return grid_sample(box, [spec.points_per_axis] * n)
    return random_sample(box, spec.count, spec.seed)
