"""Discretized Schroedinger operators -Delta + V and their spectra.

Convention: the kinetic term is -Delta (hbar^2/2m = 1). On a grid with
stiffness matrix A and diagonal trapezoid mass matrix M the discrete
operator is the symmetric matrix  S = M^(-1/2) A M^(-1/2) + diag(V),
whose eigenvectors y map to grid functions u = M^(-1/2) y that are
orthonormal in the trapezoid inner product.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError, SolverError
from .grid import NEUMANN, DIRICHLET, BoxGrid, SampledField
from .reports import make_report

DENSE_LIMIT = 3000


@dataclass(frozen=True, eq=False)
class SchrodingerOperator:
    grid: BoxGrid
    potential: np.ndarray = None
    potential_fn: Optional[Callable] = None

    def __post_init__(self):
        V = self.potential
        if V is None:
            V = np.zeros(self.grid.shape)
        V = np.array(np.broadcast_to(np.asarray(V, dtype=float), self.grid.shape))
        if not np.all(np.isfinite(V)):
            raise DomainError("potential must be finite on every node")
        V.setflags(write=False)
        object.__setattr__(self, "potential", V)

    @classmethod
    def from_function(cls, grid: BoxGrid, V: Callable) -> "SchrodingerOperator":
        vals = np.broadcast_to(np.asarray(V(*grid.mesh()), dtype=float), grid.shape)
        return cls(grid, vals, V)

    def matrix(self) -> sp.csr_matrix:
        s = 1.0 / np.sqrt(self.grid.mass_diagonal())
        A = self.grid.stiffness_matrix()
        return (sp.diags(s) @ A @ sp.diags(s) + sp.diags(self.potential.ravel())).tocsr()

    def quadratic_form(self, u: SampledField) -> float:
        from .grid import integrate, kinetic_energy
        return kinetic_energy(u) + integrate(self.grid, self.potential * np.abs(u.values) ** 2)


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: Optional[list] = None
    solver_tol: float = 0.0
    grid: Optional[BoxGrid] = None
    labels: Optional[np.ndarray] = None

    def to_json(self) -> str:
        g = None
        if self.grid is not None:
            g = {"d": self.grid.d, "n": self.grid.n, "side": self.grid.side,
                 "bc": self.grid.bc, "origin": list(self.grid.origin)}
        return json.dumps({"eigenvalues": [float(x) for x in self.eigenvalues],
                           "solver_tol": self.solver_tol, "grid": g})


def _fix_sign(y: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(y), axis=0)
    signs = np.sign(y[idx, np.arange(y.shape[1])])
    signs[signs == 0] = 1
    return y * signs


def lowest_eigenvalues(op: SchrodingerOperator, k: int, return_vectors: bool = False,
                       solver_tol: float = 1e-8) -> Spectrum:
    """The ``k`` smallest eigenvalues of the discrete operator."""
    size = op.grid.node_count
    if not 1 <= k <= size:
        raise DomainError(f"k must be in [1, {size}], got {k}")
    S = op.matrix()
    if size <= DENSE_LIMIT:
        vals, vecs = sla.eigh(S.toarray(), subset_by_index=[0, k - 1])
    else:
        if k >= size - 1:
            raise DomainError("iterative path cannot return the full spectrum")
        sigma = float(op.potential.min()) - 1.0
        try:
            vals, vecs = spla.eigsh(S, k=k, sigma=sigma, which="LM",
                                    v0=np.ones(size), tol=solver_tol * 1e-2)
        except spla.ArpackNoConvergence as exc:
            raise SolverError(f"eigsh did not converge: {exc}") from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        resid = np.linalg.norm(S @ vecs - vecs * vals, axis=0)
        bad = resid > solver_tol * np.maximum(1.0, np.abs(vals))
        if np.any(bad):
            worst = float(resid.max())
            raise SolverError(f"eigenpair residual {worst:.3e} above tolerance", worst)
    vectors = None
    if return_vectors:
        vecs = _fix_sign(vecs)
        s = 1.0 / np.sqrt(op.grid.mass_diagonal())
        vectors = [SampledField(op.grid, s * vecs[:, j]) for j in range(k)]
    return Spectrum(np.asarray(vals), vectors, solver_tol, op.grid)


def negative_eigenvalue_sum(op: SchrodingerOperator, solver_tol: float = 1e-8) -> float:
    """Sum of all negative eigenvalues of the discrete operator (0 if none)."""
    size = op.grid.node_count
    if float(op.potential.min()) >= 0:
        return 0.0
    if size <= DENSE_LIMIT:
        vals = sla.eigvalsh(op.matrix().toarray())
        return float(np.sum(vals[vals < 0]))
    k = 8
    while True:
        k = min(k, size - 2)
        vals = lowest_eigenvalues(op, k, solver_tol=solver_tol).eigenvalues
        if vals[-1] >= 0 or k == size - 2:
            return float(np.sum(vals[vals < 0]))
        k *= 2


def enlarged(op: SchrodingerOperator, factor: int = 2) -> SchrodingerOperator:
    """Same spacing and centre, side multiplied by ``factor``; needs potential_fn."""
    if op.potential_fn is None:
        raise DomainError("box enlargement needs an operator built with from_function")
    g = op.grid
    side = g.side * factor
    centre = [o + g.side / 2 for o in g.origin]
    big = BoxGrid(g.d, g.n * factor, side, g.bc, origin=[c - side / 2 for c in centre])
    return SchrodingerOperator.from_function(big, op.potential_fn)


def negative_sum_converged(op: SchrodingerOperator, rel: float = 0.01) -> tuple:
    """(converged, sum on the box, sum on the doubled box) under the box-doubling rule."""
    s1 = negative_eigenvalue_sum(op)
    s2 = negative_eigenvalue_sum(enlarged(op))
    ok = abs(s2 - s1) <= rel * max(abs(s2), 1e-300) or (s1 == 0 and s2 == 0)
    return bool(ok), s1, s2


# ---------------------------------------------------------------------------
# exact cube spectra

def _lattice(d: int, kmin: int, kmax: int) -> np.ndarray:
    ax = np.arange(kmin, kmax + 1)
    return np.stack(np.meshgrid(*([ax] * d), indexing="ij"), axis=-1).reshape(-1, d)


def cube_spectrum_exact(d: int, volume: float, count: int, bc: str = NEUMANN) -> Spectrum:
    """First ``count`` Laplacian eigenvalues pi^2 |k|^2 / |Q|^(2/d) of a cube, with multiplicity."""
    if count < 1:
        raise DomainError("count must be at least 1")
    kmin = 0 if bc == NEUMANN else 1
    # enough lattice points inside the radius-R ball of the allowed orthant
    R = max(2.0, (count * 2 ** d * math.gamma(d / 2 + 1) / math.pi ** (d / 2)) ** (1 / d) + d + 1)
    while True:
        ks = _lattice(d, kmin, int(math.ceil(R)))
        k2 = np.sum(ks ** 2, axis=1)
        inside = k2 <= R * R
        if inside.sum() >= count:
            ks, k2 = ks[inside], k2[inside]
            break
        R *= 1.5
    order = np.lexsort(tuple(ks[:, j] for j in range(d - 1, -1, -1)) + (k2,))[:count]
    vals = math.pi ** 2 * k2[order] / volume ** (2 / d)
    return Spectrum(vals.astype(float), None, 0.0, None, ks[order])


def counting_function(E: float, volume: float, d: int, bc: str = NEUMANN) -> int:
    """Number of cube eigenvalues strictly below E."""
    R2 = E * volume ** (2 / d) / math.pi ** 2
    kmin = 0 if bc == NEUMANN else 1
    kmax = int(math.floor(math.sqrt(R2))) + 1
    ax = np.arange(kmin, kmax + 1) ** 2
    # count lattice points dimension by dimension to keep memory at O(kmax^(d-1))
    sq = ax.astype(float)
    acc = sq
    for _ in range(d - 1):
        acc = np.add.outer(acc, sq).ravel()
        acc = acc[acc < R2]
    return int(np.count_nonzero(acc < R2))


def counting_bound_report(E: float, volume: float, d: int, tol: float = 0.0):
    """N(E) <= 1 + 2^d |Q| pi^(-d) E^(d/2) for the Neumann cube."""
    if not E > 0:
        raise DomainError("E must be positive")
    lhs = counting_function(E, volume, d, NEUMANN)
    rhs = 1 + 2 ** d * volume * math.pi ** (-d) * E ** (d / 2)
    return make_report("counting_bound", lhs, rhs, 2 ** d / math.pi ** d, tol, "<=",
                       E=E, volume=volume, d=d)


# ---------------------------------------------------------------------------
# radial hydrogen

def _radial_matrix(Z: float, rmax: float, n: int):
    h = rmax / n
    r = (np.arange(1, n + 1) - 0.5) * h
    diag = 2.0 / h ** 2 - Z / r
    # antisymmetric ghost values at r = -h/2 and r = rmax + h/2
    diag[0] += 1.0 / h ** 2
    diag[-1] += 1.0 / h ** 2
    off = np.full(n - 1, -1.0 / h ** 2)
    return diag, off


def radial_hydrogen_levels(Z: float, rmax: float, n: int, k: int) -> np.ndarray:
    """Lowest ``k`` eigenvalues of -u'' - (Z/r) u on (0, rmax) with u = 0 at both ends,
    on the offset grid r_i = (i - 1/2) h."""
    if not Z >= 0:
        raise DomainError("Z must be non-negative")
    diag, off = _radial_matrix(Z, rmax, n)
    return sla.eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1),
                                eigvals_only=True)


def radial_hydrogen_ground(Z: float, rmax: float, n: int) -> float:
    return float(radial_hydrogen_levels(Z, rmax, n, 1)[0])
