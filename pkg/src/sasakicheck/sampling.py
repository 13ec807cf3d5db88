"""Seeded sampling of chart points and directions.

A single suite seed is fanned out through ``numpy.random.SeedSequence``
children in a fixed order, so a fixed configuration reproduces every
sample bit for bit.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .fields import Point, constant_vector_field

DEFAULT_SEED = 7
DEFAULT_BOX = (-1.0, 1.0)

_STREAMS = (
    "ambient_points",
    "ambient_directions",
    "chart_points",
    "chart_directions",
    "models",
    "misc",
)


def spawn_rngs(seed: int) -> dict:
    children = np.random.SeedSequence(seed).spawn(len(_STREAMS))
    return {name: np.random.default_rng(c) for name, c in zip(_STREAMS, children)}


def sample_points(dim: int, count: int, box: Sequence[float], rng) -> list:
    lo, hi = float(box[0]), float(box[1])
    arr = rng.uniform(lo, hi, size=(count, dim))
    return [Point(row) for row in arr]


def sample_vectors(dim: int, count: int, rng) -> np.ndarray:
    out = []
    while len(out) < count:
        v = rng.uniform(-1.0, 1.0, size=dim)
        # keep directions away from zero so normalization stays stable
        if np.linalg.norm(v) >= 1e-3:
            out.append(v)
    return np.array(out)


def sample_direction_fields(dim: int, count: int, rng) -> list:
    return [constant_vector_field(dim, v) for v in sample_vectors(dim, count, rng)]


def g_normalized(vec: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Scale a direction to unit length in the metric g."""
    n = float(vec @ g @ vec)
    if n <= 0:
        raise ValueError("direction has nonpositive metric norm")
    return vec / np.sqrt(n)
