"""Points, fields on coordinate charts, and their jets.

Fields are closures over chart coordinates, not symbolic trees: a
component function receives a list of coordinate values (floats or
:class:`~sasakicheck.dual.Dual` numbers) and returns nested lists (or a
scalar) of components.  Differentiation happens by feeding seeded duals
through the same closure; central finite differences provide an
independent second route for cross checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import math

import numpy as np

from .dual import Dual, grad_part, real_part, seed, value_part
from .errors import DimensionMismatchError, EvaluationError, NonFiniteValueError

DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True)
class Point:
    """A point of an open chart of R^d."""

    coords: tuple

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(float(c) for c in coords))
        for c in self.coords:
            if not math.isfinite(c):
                raise NonFiniteValueError(f"non-finite coordinate in {self.coords}")

    @property
    def dim(self) -> int:
        return len(self.coords)

    def shifted(self, k: int, delta: float) -> "Point":
        c = list(self.coords)
        c[k] += delta
        return Point(c)


@dataclass(frozen=True)
class ScalarField:
    """Real-valued field on a chart; ``func(coords) -> number``."""

    dim: int
    func: Callable

    valence = ()

    @property
    def shape(self) -> tuple:
        return ()


@dataclass(frozen=True)
class TensorField:
    """Tensor field of valence (r, s); ``func(coords)`` returns an array
    of shape (dim,) * (r + s) as nested lists."""

    valence: tuple
    dim: int
    func: Callable

    @property
    def shape(self) -> tuple:
        return (self.dim,) * (self.valence[0] + self.valence[1])


@dataclass(frozen=True)
class Jet:
    """Field components at a point together with coordinate derivatives.

    ``partials[k, ...]`` is the partial derivative along coordinate k of
    the component array; ``second_partials[k, l, ...]`` (optional) the
    corresponding second derivative.
    """

    value: np.ndarray
    partials: np.ndarray
    second_partials: Optional[np.ndarray] = None


def _check_point(fld, p: Point) -> None:
    if p.dim != fld.dim:
        raise DimensionMismatchError(
            f"point of dimension {p.dim} fed to a field on a {fld.dim}-dimensional chart"
        )


def _component(nested, idx):
    out = nested
    for i in idx:
        out = out[i]
    return out


def evaluate(fld, p: Point) -> np.ndarray:
    """Evaluate a field at a point, returning float components.

    Raises :class:`NonFiniteValueError` naming the first offending
    component if the output is not finite everywhere.
    """
    _check_point(fld, p)
    raw = fld.func(list(p.coords))
    shape = fld.shape
    out = np.empty(shape, dtype=float)
    for idx in np.ndindex(shape):
        out[idx] = float(_component(raw, idx))
    bad = np.argwhere(~np.isfinite(out))
    if bad.size:
        idx = tuple(int(i) for i in bad[0])
        raise NonFiniteValueError(
            f"non-finite component at index {idx} of field evaluated at {p.coords}"
        )
    return out if shape else out[()]


def jet(fld, p: Point, order: int = 1) -> Jet:
    """First (and optionally second) partials by dual-number propagation."""
    _check_point(fld, p)
    if order not in (1, 2):
        raise ValueError("jet order must be 1 or 2")
    d = p.dim
    coords = seed(list(p.coords))
    if order == 2:
        coords = seed(coords)
    raw = fld.func(coords)
    shape = fld.shape
    value = np.empty(shape, dtype=float)
    partials = np.zeros((d,) + shape, dtype=float)
    second = np.zeros((d, d) + shape, dtype=float) if order == 2 else None
    for idx in np.ndindex(shape):
        comp = _component(raw, idx)
        if order == 1:
            value[idx] = real_part(comp) if isinstance(comp, Dual) else float(comp)
            for k, g in enumerate(grad_part(comp, d)):
                partials[(k,) + idx] = float(g)
        else:
            inner_val = value_part(comp)
            value[idx] = real_part(inner_val) if isinstance(inner_val, Dual) else float(inner_val)
            for k, g in enumerate(grad_part(comp, d)):
                partials[(k,) + idx] = real_part(g) if isinstance(g, Dual) else float(g)
                for l, gg in enumerate(grad_part(g, d)):
                    second[(k, l) + idx] = float(gg)
    if not np.isfinite(value).all() or not np.isfinite(partials).all():
        raise NonFiniteValueError(f"non-finite jet of field at {p.coords}")
    return Jet(value=value, partials=partials, second_partials=second)


def fd_derivative(fld, p: Point, step: float = DEFAULT_FD_STEP) -> Jet:
    """Central-difference first partials; the independent oracle for ``jet``."""
    if step <= 0:
        raise ValueError("finite-difference step must be positive")
    _check_point(fld, p)
    value = evaluate(fld, p)
    shape = fld.shape
    partials = np.zeros((p.dim,) + shape, dtype=float)
    for k in range(p.dim):
        try:
            plus = evaluate(fld, p.shifted(k, step))
            minus = evaluate(fld, p.shifted(k, -step))
        except (ArithmeticError, ValueError) as exc:
            raise EvaluationError(
                f"finite-difference stencil failed near {p.coords} along coordinate {k}: {exc}"
            ) from exc
        partials[k] = (plus - minus) / (2.0 * step)
    return Jet(value=value, partials=partials)


def generic_jacobian(map_func: Callable, coords: Sequence):
    """Values and Jacobian of a coordinate map, dual-compatible.

    ``map_func`` takes a list of m coordinate values and returns a list
    of outputs.  Returns ``(values, jac)`` with ``jac[i][a]`` the partial
    of output i along input a; both remain duals when ``coords`` are.
    """
    m = len(coords)
    outs = map_func(seed(list(coords)))
    values = [value_part(o) for o in outs]
    jac = [list(grad_part(o, m)) for o in outs]
    return values, jac


def constant_field(valence: tuple, dim: int, components) -> TensorField:
    comps = np.asarray(components, dtype=float)
    nested = comps.tolist()
    return TensorField(valence, dim, lambda c: nested)


def constant_vector_field(dim: int, vec) -> TensorField:
    return constant_field((1, 0), dim, vec)


def identity_field(dim: int) -> TensorField:
    return constant_field((1, 1), dim, np.eye(dim))
