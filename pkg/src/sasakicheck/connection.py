"""Metrics, Christoffel symbols and covariant derivatives.

The connection is always the Levi-Civita connection of the supplied
metric; Christoffel symbols come from dual-number jets of the metric
components, with a finite-difference path kept as an independent
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularMetricError, UnsupportedValenceError
from .fields import (
    DEFAULT_FD_STEP,
    Point,
    TensorField,
    evaluate,
    fd_derivative,
    jet,
)

DET_FLOOR = 1e-12

SUPPORTED_VALENCES = ((1, 0), (0, 1), (1, 1), (0, 2))


@dataclass(frozen=True)
class MetricField:
    """Riemannian metric as a (0,2) tensor field."""

    tensor: TensorField

    @property
    def dim(self) -> int:
        return self.tensor.dim

    def components(self, p: Point) -> np.ndarray:
        return evaluate(self.tensor, p)

    def inverse(self, p: Point) -> np.ndarray:
        g = self.components(p)
        if abs(np.linalg.det(g)) < DET_FLOOR:
            raise SingularMetricError(f"metric determinant below {DET_FLOOR} at {p.coords}")
        return np.linalg.inv(g)


@dataclass(frozen=True)
class ChristoffelSymbols:
    """Gamma[k, i, j] = Gamma^k_ij at a single point."""

    point: Point
    gamma: np.ndarray


def metric_symmetry_residual(metric: MetricField, points) -> float:
    return max(
        float(np.max(np.abs(g - g.T)))
        for g in (metric.components(p) for p in points)
    )


def metric_positivity_ok(metric: MetricField, points) -> bool:
    """Positive definiteness via leading principal minors at each point."""
    for p in points:
        g = metric.components(p)
        for k in range(1, metric.dim + 1):
            if np.linalg.det(g[:k, :k]) <= 0:
                return False
    return True


def christoffel(
    metric: MetricField,
    p: Point,
    method: str = "ad",
    step: float = DEFAULT_FD_STEP,
) -> ChristoffelSymbols:
    """Levi-Civita Christoffel symbols from metric jets.

    ``method="fd"`` swaps the dual-number partials for central finite
    differences, which is the cross-validation path.
    """
    if method == "ad":
        jt = jet(metric.tensor, p)
    elif method == "fd":
        jt = fd_derivative(metric.tensor, p, step=step)
    else:
        raise ValueError(f"unknown differentiation method {method!r}")
    g = jt.value
    if abs(np.linalg.det(g)) < DET_FLOOR:
        raise SingularMetricError(f"metric determinant below {DET_FLOOR} at {p.coords}")
    ginv = np.linalg.inv(g)
    dg = jt.partials  # dg[i, j, l] = d_i g_jl
    term = dg + np.einsum("jil->ijl", dg) - np.einsum("lij->ijl", dg)
    gamma = 0.5 * np.einsum("kl,ijl->kij", ginv, term)
    return ChristoffelSymbols(point=p, gamma=gamma)


def covariant_derivative_components(
    value: np.ndarray, partials: np.ndarray, gamma: np.ndarray, valence: tuple
) -> np.ndarray:
    """Full covariant derivative array; axis 0 is the derivative index."""
    if valence == (1, 0):
        return partials + np.einsum("aij,j->ia", gamma, value)
    if valence == (0, 1):
        return partials - np.einsum("mia,m->ia", gamma, value)
    if valence == (1, 1):
        return (
            partials
            + np.einsum("aim,mb->iab", gamma, value)
            - np.einsum("mib,am->iab", gamma, value)
        )
    if valence == (0, 2):
        return (
            partials
            - np.einsum("mia,mb->iab", gamma, value)
            - np.einsum("mib,am->iab", gamma, value)
        )
    raise UnsupportedValenceError(f"unsupported tensor valence {valence}")


def covariant_derivative_vector(
    metric: MetricField, X: TensorField, Y: TensorField, p: Point
) -> np.ndarray:
    """(nabla_X Y)^k = X^i (d_i Y^k + Gamma^k_ij Y^j) at a point."""
    gamma = christoffel(metric, p).gamma
    jy = jet(Y, p)
    full = covariant_derivative_components(jy.value, jy.partials, gamma, (1, 0))
    x = evaluate(X, p)
    return np.einsum("i,ia->a", x, full)


def covariant_derivative_tensor(
    metric: MetricField, T: TensorField, X: TensorField, p: Point
) -> np.ndarray:
    """(nabla_X T) for T of valence (0,1), (1,1) or (0,2)."""
    if T.valence not in ((0, 1), (1, 1), (0, 2)):
        raise UnsupportedValenceError(
            f"covariant_derivative_tensor supports (0,1), (1,1), (0,2); got {T.valence}"
        )
    gamma = christoffel(metric, p).gamma
    jt = jet(T, p)
    full = covariant_derivative_components(jt.value, jt.partials, gamma, T.valence)
    x = evaluate(X, p)
    return np.einsum("i,i...->...", x, full)


def euclidean_metric(dim: int) -> MetricField:
    eye = np.eye(dim).tolist()
    return MetricField(TensorField((0, 2), dim, lambda c: eye))
