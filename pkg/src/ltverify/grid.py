"""Uniform tensor grids on cubes, sampled fields and their energies.

Discretization
--------------
A grid splits each side of the cube into ``n`` cells of width ``h``.
Neumann grids keep all ``n+1`` nodes per axis; Dirichlet grids keep the
``n-1`` interior nodes (boundary values are zero).

The kinetic form is built from differences across cell edges,

    T(u) = sum_axes sum_edges w_perp |u_{i+1} - u_i|^2 / h,

where ``w_perp`` is the trapezoid weight in the transverse directions.
Each edge difference is the central difference at the edge midpoint, so
the scheme is second order, exact on piecewise-linear functions, and
coincides with the quadratic form of the reflected-ghost-node Laplacian.
Node-centred two-cell differences are avoided because they annihilate
checkerboard modes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DomainError

DIRICHLET = "dirichlet"
NEUMANN = "neumann"


def _norm_bc(bc: str) -> str:
    bc = str(bc).lower()
    if bc not in (DIRICHLET, NEUMANN):
        raise DomainError(f"boundary condition must be 'dirichlet' or 'neumann', got {bc!r}")
    return bc


@dataclass(frozen=True)
class BoxGrid:
    """The cube ``origin + [0, side]^d`` with ``n`` cells per side."""

    d: int
    n: int
    side: float = 1.0
    bc: str = NEUMANN
    origin: tuple = field(default=None)

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise DomainError(f"grid dimension must be 1, 2 or 3, got {self.d}")
        if self.n < 2:
            raise DomainError(f"need at least 2 cells per side, got {self.n}")
        if not self.side > 0:
            raise DomainError(f"side must be positive, got {self.side}")
        object.__setattr__(self, "bc", _norm_bc(self.bc))
        origin = self.origin
        if origin is None:
            origin = (0.0,) * self.d
        elif np.isscalar(origin):
            origin = (float(origin),) * self.d
        origin = tuple(float(o) for o in origin)
        if len(origin) != self.d:
            raise DomainError("origin must have one entry per dimension")
        object.__setattr__(self, "origin", origin)

    @classmethod
    def centered(cls, d: int, n: int, side: float, bc: str = DIRICHLET) -> "BoxGrid":
        return cls(d, n, side, bc, origin=(-side / 2,) * d)

    @property
    def h(self) -> float:
        return self.side / self.n

    @property
    def volume(self) -> float:
        return self.side ** self.d

    @property
    def points_per_axis(self) -> int:
        return self.n + 1 if self.bc == NEUMANN else self.n - 1

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.d

    @property
    def node_count(self) -> int:
        return self.points_per_axis ** self.d

    def axis(self, k: int = 0) -> np.ndarray:
        """Node coordinates along axis ``k``."""
        idx = np.arange(self.n + 1) if self.bc == NEUMANN else np.arange(1, self.n)
        return self.origin[k] + idx * self.h

    def mesh(self) -> list:
        return np.meshgrid(*[self.axis(k) for k in range(self.d)], indexing="ij")

    def weights1d(self) -> np.ndarray:
        return trapezoid_weights(self.points_per_axis, self.h, self.bc)

    def weights(self) -> np.ndarray:
        return tensor_weights([self.weights1d()] * self.d)

    def boundary_mask(self) -> np.ndarray:
        """True on nodes lying on the boundary of the cube (empty for Dirichlet)."""
        mask = np.zeros(self.shape, dtype=bool)
        if self.bc == NEUMANN:
            for k in range(self.d):
                sl = [slice(None)] * self.d
                sl[k] = 0
                mask[tuple(sl)] = True
                sl[k] = -1
                mask[tuple(sl)] = True
        return mask

    def sample(self, func: Callable, dtype=None) -> "SampledField":
        vals = np.asarray(func(*self.mesh()))
        if dtype is not None:
            vals = vals.astype(dtype)
        return SampledField(self, np.broadcast_to(vals, self.shape))

    def stiffness_matrix(self) -> sp.csr_matrix:
        """Sparse matrix of the kinetic form: T(u) = u^* A u."""
        return tensor_stiffness([self.points_per_axis] * self.d, self.h, self.bc)

    def mass_diagonal(self) -> np.ndarray:
        return self.weights().ravel()


# ---------------------------------------------------------------------------
# dimension-generic helpers, also used for many-body tensor grids

def trapezoid_weights(m: int, h: float, bc: str) -> np.ndarray:
    w = np.full(m, h)
    if bc == NEUMANN:
        w[0] = w[-1] = h / 2
    return w


def tensor_weights(w1: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones(())
    for w in w1:
        out = np.multiply.outer(out, w)
    return out


def dirichlet_form(values: np.ndarray, h: float, bc: str, w1d: np.ndarray) -> float:
    """Edge-difference kinetic form on a tensor grid of any dimension."""
    ndim = values.ndim
    total = 0.0
    for ax in range(ndim):
        if bc == DIRICHLET:
            pad = [(0, 0)] * ndim
            pad[ax] = (1, 1)
            diff = np.diff(np.pad(values, pad), axis=ax)
        else:
            diff = np.diff(values, axis=ax)
        wt = tensor_weights([w1d if k != ax else np.ones(diff.shape[ax]) for k in range(ndim)])
        total += float(np.sum(wt * np.abs(diff) ** 2)) / h
    return total


def _stiffness_1d(m: int, h: float, bc: str) -> sp.csr_matrix:
    main = np.full(m, 2.0)
    if bc == NEUMANN:
        main[0] = main[-1] = 1.0
    off = -np.ones(m - 1)
    return sp.diags([off, main, off], [-1, 0, 1], format="csr") / h


def tensor_stiffness(sizes: Sequence[int], h: float, bc: str) -> sp.csr_matrix:
    ops = [_stiffness_1d(m, h, bc) for m in sizes]
    ws = [sp.diags(trapezoid_weights(m, h, bc)) for m in sizes]
    total = None
    for ax in range(len(sizes)):
        term = None
        for k in range(len(sizes)):
            factor = ops[k] if k == ax else ws[k]
            term = factor if term is None else sp.kron(term, factor, format="csr")
        total = term if total is None else total + term
    return total.tocsr()


# ---------------------------------------------------------------------------
# fields

def _frozen(values) -> np.ndarray:
    arr = np.array(values, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SampledField:
    """Nodal values of a (possibly complex) function on a grid."""

    grid: BoxGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.dtype.kind not in "fc":
            vals = vals.astype(float)
        if vals.size != self.grid.node_count:
            raise DomainError(
                f"field has {vals.size} values but the grid has {self.grid.node_count} nodes")
        object.__setattr__(self, "values", _frozen(vals.reshape(self.grid.shape)))

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def with_values(self, values) -> "SampledField":
        return SampledField(self.grid, values)

    def abs(self) -> "SampledField":
        return SampledField(self.grid, np.abs(self.values))

    def scaled(self, c) -> "SampledField":
        return SampledField(self.grid, c * self.values)

    def normalized(self) -> "SampledField":
        return self.scaled(1.0 / l2_norm(self))


@dataclass(frozen=True, eq=False)
class DensityField:
    """Non-negative nodal values, e.g. a one-body density."""

    grid: BoxGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.size != self.grid.node_count:
            raise DomainError(
                f"density has {vals.size} values but the grid has {self.grid.node_count} nodes")
        if np.any(vals < 0) or not np.all(np.isfinite(vals)):
            raise DomainError("density values must be finite and non-negative")
        object.__setattr__(self, "values", _frozen(vals.reshape(self.grid.shape)))

    def mass(self) -> float:
        return integrate(self.grid, self.values)


def integrate(grid: BoxGrid, values: np.ndarray) -> float:
    return float(np.sum(grid.weights() * values))


def inner_product(u: SampledField, v: SampledField) -> complex:
    if u.grid != v.grid:
        raise DomainError("fields live on different grids")
    return complex(np.sum(u.grid.weights() * np.conj(u.values) * v.values))


def l2_norm(u: SampledField) -> float:
    return lp_norm(u, 2)


def kinetic_energy(u: SampledField) -> float:
    """Discrete ``int |grad u|^2`` (see module docstring)."""
    g = u.grid
    return dirichlet_form(u.values, g.h, g.bc, g.weights1d())


def lp_norm(u, p: float) -> float:
    if p == np.inf:
        return float(np.max(np.abs(u.values)))
    if p < 1:
        raise DomainError(f"lp_norm needs p >= 1, got {p}")
    return integrate(u.grid, np.abs(u.values) ** p) ** (1.0 / p)


def distribution_function(u, t: float) -> float:
    """Measure of {|u| > t} under the quadrature weights."""
    return float(np.sum(u.grid.weights()[np.abs(u.values) > t]))


def layer_cake_norm(u, p: float) -> float:
    """``int_0^inf lambda_u(t) d(t^p)`` integrated exactly for the step function lambda_u."""
    if p < 1:
        raise DomainError(f"layer_cake_norm needs p >= 1, got {p}")
    a = np.abs(u.values).ravel()
    w = u.grid.weights().ravel()
    order = np.argsort(a, kind="stable")
    a, w = a[order], w[order]
    tail = np.cumsum(w[::-1])[::-1]  # lambda(t) for t in [a_{k-1}, a_k)
    tp = a ** p
    steps = np.diff(np.concatenate(([0.0], tp)))
    return float(np.sum(steps * tail))


def density_from_orbitals(orbitals: Sequence[SampledField]) -> DensityField:
    if not orbitals:
        raise DomainError("need at least one orbital")
    grid = orbitals[0].grid
    for u in orbitals:
        if u.grid != grid:
            raise DomainError("orbitals must share one grid")
    rho = np.zeros(grid.shape)
    for u in orbitals:
        rho += np.abs(u.values) ** 2
    return DensityField(grid, rho)


# ---------------------------------------------------------------------------
# import / export

def save_field(path, u: SampledField) -> tuple:
    """Write ``<path>.bin`` (little-endian float64, re/im interleaved if complex)
    and ``<path>.json``; returns the two paths."""
    path = Path(path)
    g = u.grid
    vals = np.ascontiguousarray(u.values.ravel())
    if u.is_complex:
        raw = np.empty(2 * vals.size, dtype="<f8")
        raw[0::2], raw[1::2] = vals.real, vals.imag
    else:
        raw = vals.astype("<f8")
    binp, meta = path.with_suffix(".bin"), path.with_suffix(".json")
    raw.tofile(binp)
    meta.write_text(json.dumps({"d": g.d, "n": g.n, "side": g.side, "bc": g.bc,
                                "complex": bool(u.is_complex), "origin": list(g.origin)}))
    return binp, meta


def load_field(path) -> SampledField:
    path = Path(path)
    meta = json.loads(path.with_suffix(".json").read_text())
    grid = BoxGrid(meta["d"], meta["n"], meta["side"], meta["bc"], origin=meta.get("origin"))
    raw = np.fromfile(path.with_suffix(".bin"), dtype="<f8")
    vals = raw[0::2] + 1j * raw[1::2] if meta["complex"] else raw
    return SampledField(grid, vals)
