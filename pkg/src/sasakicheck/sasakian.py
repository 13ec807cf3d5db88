"""Ambient almost contact metric structures and their axiom battery.

The builtin structure lives on R^(2n+1) with coordinates
(x^1..x^n, y^1..y^n, z):

    eta = (dz - sum_i y^i dx^i) / 2        xi = 2 d/dz
    g   = eta (x) eta + (sum_i (dx^i)^2 + (dy^i)^2) / 4

and phi acting on the frame X_i = 2 d/dy^i, X_{n+i} = 2(d/dx^i + y^i d/dz)
by phi X_i = X_{n+i}, phi X_{n+i} = -X_i, phi xi = 0.  The overall sign
of phi is picked at construction so that the covariant-derivative
axioms (1.6) and (1.7) of the identity catalog hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from .connection import MetricField, christoffel, covariant_derivative_components
from .errors import DimensionMismatchError
from .fields import Point, TensorField, evaluate, jet
from .sampling import sample_direction_fields, spawn_rngs, DEFAULT_SEED

RANK_SV_THRESHOLD = 1e-8


@dataclass(frozen=True)
class AlmostContactMetricStructure:
    dim: int
    phi: TensorField
    xi: TensorField
    eta: TensorField
    g: MetricField
    name: str = ""

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2


@dataclass(frozen=True)
class AxiomReport:
    """Per-axiom max residuals over the sampled points and directions."""

    residuals: Dict[str, float]
    sample_count: int
    direction_count: int

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def _eta_components(coords, n):
    comps = [-0.5 * coords[n + i] for i in range(n)]
    comps += [0.0] * n
    comps.append(0.5)
    return comps


def _phi_components(coords, n, sign):
    d = 2 * n + 1
    m = [[0.0] * d for _ in range(d)]
    for j in range(n):
        m[n + j][j] = -sign
        m[j][n + j] = sign
        m[2 * n][n + j] = sign * coords[n + j]
    return m


def _metric_components(coords, n):
    d = 2 * n + 1
    eta = _eta_components(coords, n)
    g = [[eta[a] * eta[b] for b in range(d)] for a in range(d)]
    for a in range(2 * n):
        g[a][a] = g[a][a] + 0.25
    return g


def _build(n: int, sign: float) -> AlmostContactMetricStructure:
    d = 2 * n + 1
    xi = [0.0] * d
    xi[2 * n] = 2.0
    return AlmostContactMetricStructure(
        dim=d,
        phi=TensorField((1, 1), d, lambda c, n=n, s=sign: _phi_components(c, n, s)),
        xi=TensorField((1, 0), d, lambda c, x=tuple(xi): list(x)),
        eta=TensorField((0, 1), d, lambda c, n=n: _eta_components(c, n)),
        g=MetricField(TensorField((0, 2), d, lambda c, n=n: _metric_components(c, n))),
        name=f"standard_sasakian(n={n})",
    )


def _xi_transport_residual(S: AlmostContactMetricStructure, p: Point) -> float:
    """max |nabla_X xi + phi X| over the coordinate directions at p."""
    gamma = christoffel(S.g, p).gamma
    jx = jet(S.xi, p)
    full = covariant_derivative_components(jx.value, jx.partials, gamma, (1, 0))
    phi = evaluate(S.phi, p)
    return float(np.max(np.abs(full + phi.T)))


def standard_sasakian(n: int) -> AlmostContactMetricStructure:
    """The classical Sasakian structure on R^(2n+1)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    probe = Point([0.3 - 0.1 * k for k in range(2 * n + 1)])
    candidates = [_build(n, +1.0), _build(n, -1.0)]
    residuals = [_xi_transport_residual(S, probe) for S in candidates]
    return candidates[int(np.argmin(residuals))]


def fundamental_two_form(S: AlmostContactMetricStructure) -> TensorField:
    """'F(X, Y) = g(phi X, Y) as a (0,2) field on the ambient chart."""

    def func(coords):
        phi = S.phi.func(coords)
        g = S.g.tensor.func(coords)
        d = S.dim
        return [
            [sum(phi[c][a] * g[c][b] for c in range(d)) for b in range(d)]
            for a in range(d)
        ]

    return TensorField((0, 2), S.dim, func)


def two_form_residuals(S: AlmostContactMetricStructure, points: Sequence[Point]) -> Dict[str, float]:
    """Residuals of the antisymmetry and phi-compatibility identities of 'F."""
    F_field = fundamental_two_form(S)
    r18 = r19 = r110 = 0.0
    for p in points:
        F = evaluate(F_field, p)
        phi = evaluate(S.phi, p)
        r18 = max(r18, float(np.max(np.abs(F + F.T))))
        FP = F @ phi
        r19 = max(r19, float(np.max(np.abs(FP - FP.T))))
        r110 = max(r110, float(np.max(np.abs(phi.T @ F @ phi - F))))
    return {"1.8": r18, "1.9": r19, "1.10": r110}


def check_sasakian_axioms(
    S: AlmostContactMetricStructure,
    points: Sequence[Point],
    directions: Optional[Sequence[TensorField]] = None,
) -> AxiomReport:
    """Max residual of each structure axiom over the samples.

    Algebraic axioms are checked on full component arrays (equivalent to
    all directions); the covariant-derivative axioms are contracted
    against the supplied direction fields.
    """
    if not points:
        raise ValueError("no sample points supplied")
    for p in points:
        if p.dim != S.dim:
            raise DimensionMismatchError(
                f"sample point of dimension {p.dim} for a structure on dimension {S.dim}"
            )
    if directions is None:
        rngs = spawn_rngs(DEFAULT_SEED)
        directions = sample_direction_fields(S.dim, 5, rngs["ambient_directions"])

    n = S.n
    res = {k: 0.0 for k in
           ("1.1", "1.2", "1.3a", "1.3b", "1.3c", "1.4", "1.5", "1.6", "1.7")}
    for p in points:
        phi = evaluate(S.phi, p)
        xi = evaluate(S.xi, p)
        eta = evaluate(S.eta, p)
        g = S.g.components(p)

        res["1.1"] = max(res["1.1"], abs(float(eta @ xi) - 1.0))
        res["1.2"] = max(
            res["1.2"],
            float(np.max(np.abs(phi @ phi + np.eye(S.dim) - np.outer(xi, eta)))),
        )
        res["1.3a"] = max(res["1.3a"], float(np.max(np.abs(eta @ phi))))
        res["1.3b"] = max(res["1.3b"], float(np.max(np.abs(phi @ xi))))
        sv = np.linalg.svd(phi, compute_uv=False)
        rank_resid = float(sv[2 * n])
        if sv[2 * n - 1] <= RANK_SV_THRESHOLD:
            rank_resid = 1.0
        res["1.3c"] = max(res["1.3c"], rank_resid)
        res["1.4"] = max(
            res["1.4"],
            float(np.max(np.abs(phi.T @ g @ phi - g + np.outer(eta, eta)))),
        )
        res["1.5"] = max(res["1.5"], float(np.max(np.abs(g @ xi - eta))))

        gamma = christoffel(S.g, p).gamma
        jphi = jet(S.phi, p)
        dphi = covariant_derivative_components(jphi.value, jphi.partials, gamma, (1, 1))
        jxi = jet(S.xi, p)
        dxi = covariant_derivative_components(jxi.value, jxi.partials, gamma, (1, 0))
        xvals = [evaluate(D, p) for D in directions]
        for X in xvals:
            res["1.7"] = max(
                res["1.7"],
                float(np.max(np.abs(np.einsum("i,ia->a", X, dxi) + phi @ X))),
            )
            for Y in xvals:
                lhs = np.einsum("i,iab,b->a", X, dphi, Y)
                rhs = float(X @ g @ Y) * xi - float(eta @ Y) * X
                res["1.6"] = max(res["1.6"], float(np.max(np.abs(lhs - rhs))))

    res.update(two_form_residuals(S, points))
    return AxiomReport(residuals=res, sample_count=len(points), direction_count=len(directions))
