"""Lieb-Thirring inequalities, local energy bounds and constant synthesis."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import constants as C
from .covering import Cube, GridDensityOracle, covering_constant
from .errors import DomainError, PreconditionError
from .grid import (DIRICHLET, BoxGrid, DensityField, SampledField, density_from_orbitals,
                   inner_product, integrate, kinetic_energy)
from .inequalities import GLOBAL_TOL, SYMMETRY_TOL
from .reports import InequalityReport, make_report
from .spectral import SchrodingerOperator, negative_eigenvalue_sum


@dataclass(frozen=True, eq=False)
class OrbitalSet:
    orbitals: tuple
    gram_tol: float = 1e-8

    def __post_init__(self):
        orbs = tuple(self.orbitals)
        if not orbs:
            raise DomainError("an orbital set needs at least one orbital")
        grid = orbs[0].grid
        if any(u.grid != grid for u in orbs):
            raise DomainError("orbitals must share one grid")
        for j, k in itertools.combinations_with_replacement(range(len(orbs)), 2):
            target = 1.0 if j == k else 0.0
            err = abs(inner_product(orbs[j], orbs[k]) - target)
            if err > self.gram_tol:
                raise PreconditionError(
                    f"orbitals {j} and {k} violate orthonormality by {err:.3e}")
        object.__setattr__(self, "orbitals", orbs)

    @property
    def grid(self) -> BoxGrid:
        return self.orbitals[0].grid

    def __len__(self):
        return len(self.orbitals)

    def density(self) -> DensityField:
        return density_from_orbitals(list(self.orbitals))


@dataclass(frozen=True)
class LocalEnergyBound:
    cube: Optional[Cube]
    mass: float
    bound: float
    kind: str


def kinetic_form_check(orbs: OrbitalSet, constant: float = None, tol: float = GLOBAL_TOL,
                       on_box: bool = False) -> InequalityReport:
    """sum_j int|grad u_j|^2 >= K int rho^(1+2/d); K defaults to the proven G_d'.

    The inequality is stated on R^d, so orbitals must vanish on the box
    boundary unless ``on_box`` is set (then the report is only a ratio).
    """
    g = orbs.grid
    if not on_box and g.bc != DIRICHLET:
        mask = g.boundary_mask()
        big = max(np.max(np.abs(u.values)) for u in orbs.orbitals)
        for j, u in enumerate(orbs.orbitals):
            if np.any(mask & (np.abs(u.values) > SYMMETRY_TOL * big)):
                raise PreconditionError(
                    f"orbital {j} does not vanish on the boundary; pass on_box=True")
    K = C.constant("gns_lower", g.d) if constant is None else float(constant)
    lhs = math.fsum(kinetic_energy(u) for u in orbs.orbitals)
    rho = orbs.density().values
    rhs = K * integrate(g, rho ** (1 + 2 / g.d))
    name = "kinetic_form_box" if on_box else "kinetic_form"
    return make_report(name, lhs, rhs, K, tol, N=len(orbs))


def eigenvalue_sum_check(op: SchrodingerOperator, L: float = None,
                         tol: float = 1e-9) -> InequalityReport:
    """|sum of negative eigenvalues| <= L int |V_-|^(1+d/2)."""
    g = op.grid
    if g.bc != DIRICHLET:
        raise PreconditionError("eigenvalue_sum_check approximates R^d and needs a Dirichlet grid")
    if L is None:
        L = C.lt_dual(C.constant("gns_lower", g.d), g.d)
    lhs = -negative_eigenvalue_sum(op)
    Vm = np.clip(-op.potential, 0.0, None)
    rhs = L * integrate(g, Vm ** (1 + g.d / 2))
    return make_report("eigenvalue_sum", lhs, rhs, L, tol, "<=")


# ---------------------------------------------------------------------------
# local bounds on a cube

def _cube_integrals(rho: DensityField, cube: Optional[Cube], p: float):
    g = rho.grid
    if cube is None:
        return integrate(g, rho.values), integrate(g, rho.values ** p), g.volume, None
    mass = GridDensityOracle(rho)(cube)
    powered = GridDensityOracle(DensityField(g, rho.values ** p))(cube)
    return mass, powered, cube.volume, cube


def local_uncertainty_bound(rho: DensityField, eps: float,
                            cube: Cube = None) -> LocalEnergyBound:
    """Lower bound for the kinetic energy in a cube Q (the grid box by default)."""
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    d = rho.grid.d
    mass, powered, vol, cube = _cube_integrals(rho, cube, 1 + 2 / d)
    if not mass > 0:
        raise DomainError("local uncertainty needs positive mass in the cube")
    Cd = C.constant("local_uncertainty", d)
    e = 1 + 4 / d
    bound = (Cd * eps ** e * powered / mass ** (2 / d)
             - Cd * (1 + (eps / (1 - eps)) ** e) * mass / vol ** (2 / d))
    return LocalEnergyBound(cube, mass, float(bound), "uncertainty")


def local_exclusion_bound(mass: float, volume: float, d: int, q: int = 1,
                          cube: Cube = None) -> LocalEnergyBound:
    """pi^2 (mass - q)_+ / |Q|^(2/d)."""
    if not volume > 0:
        raise DomainError("volume must be positive")
    return LocalEnergyBound(cube, mass, math.pi ** 2 * max(mass - q, 0.0) / volume ** (2 / d),
                            "exclusion")


def boson_exclusion_bounds(n: int, volume: float, d: int, beta: float = None,
                           R: float = None) -> LocalEnergyBound:
    """Local exclusion for n bosons: inverse-square (``beta``) or hard-core (``R``, d=3)."""
    if (beta is None) == (R is None):
        raise DomainError("give exactly one of beta (inverse-square) or R (hard-core)")
    if beta is not None:
        if not beta > 0:
            raise DomainError("beta must be positive")
        val = beta * n * max(n - 1, 0) / (2 * d * volume ** (2 / d))
        return LocalEnergyBound(None, float(n), val, "boson_stupid")
    if d != 3:
        raise DomainError("the hard-core bound is available for d=3 only")
    side = volume ** (1 / 3)
    if not 0 < R < side:
        raise DomainError("hard-core radius must satisfy 0 < R < |Q|^(1/3)")
    if n < 2:
        return LocalEnergyBound(None, float(n), 0.0, "boson_hardcore")
    e2 = (2 / math.sqrt(3)) * (R / volume) * (2 - R / side) ** -2
    return LocalEnergyBound(None, float(n), n / 2 * e2, "boson_hardcore")


def density_functional_lower_bound(rho: DensityField, V, K: float) -> float:
    """int (K rho^(1+2/d) + V rho)."""
    if not K > 0:
        raise DomainError("K must be positive")
    g = rho.grid
    if callable(V):
        V = V(*g.mesh())
    V = np.broadcast_to(np.asarray(V, dtype=float), g.shape)
    return integrate(g, K * rho.values ** (1 + 2 / g.d) + V * rho.values)


# ---------------------------------------------------------------------------
# constant synthesis from local uncertainty + local exclusion + covering

@dataclass(frozen=True)
class SynthesizedConstant:
    K: float
    lam: float
    eps_outer: float
    eps_inner: float
    C1: float
    C2: float
    b: float
    strength: float
    heuristic: bool = False
    d: int = 0
    q: float = 1.0

    def L(self) -> float:
        return C.lt_dual(self.K, self.d)


def _inner_grid(points: int) -> np.ndarray:
    return np.arange(1, points + 1) / (points + 1)


def synthesize_lt_constant(d: int, q: float = 1, exclusion: str = "fermion",
                           beta: float = None, points: int = 200) -> SynthesizedConstant:
    """Explicit kinetic LT constant from the local method.

    With C1, C2 from local uncertainty at inner parameter eps', the covering
    corollary at alpha = 2/d and Lambda = (8/3) 4^d q (so that b = 1/2), and
    exclusion strength P (pi^2 for fermions, beta/(2d) for inverse-square
    bosons with q = 1), every eps <= min(P/(4 C2), 1/2) makes the mass term
    (1-eps) P b - eps C2 non-negative, giving K = eps C1 Lambda^(-2/d).
    """
    if exclusion == "fermion":
        P = math.pi ** 2
    elif exclusion == "boson_stupid":
        if beta is None or not beta > 0:
            raise DomainError("boson_stupid synthesis needs beta > 0")
        P = beta / (2 * d)
        q = 1
    else:
        raise DomainError(f"unknown exclusion {exclusion!r}")
    Cd = C.constant("local_uncertainty", d)
    lam = 8 / 3 * 4 ** d * q
    b = C.weak_b(d, 2 / d, q, lam)
    e = 1 + 4 / d
    best = None
    for ei in _inner_grid(points):
        C1 = Cd * ei ** e
        C2 = Cd * (1 + (ei / (1 - ei)) ** e)
        eps = min(P / (4 * C2), 0.5)
        K = eps * C1 * lam ** (-2 / d)
        if best is None or K > best.K:
            best = SynthesizedConstant(K, lam, eps, ei, C1, C2, b, P, False, d, q)
    return best


def synthesize_blt_improved(d: int, beta: float, points: int = 200,
                            lam_points: int = 200) -> SynthesizedConstant:
    """Inverse-square boson constant via the quadratic local exclusion bound.

    The covering lemma with (alpha, beta, gamma) = (2/d, 2, 1) turns the
    exclusion term into (1-eps)(beta/2d)(Lambda/C - 1) per unit mass; eps is
    taken as large as that term allows and Lambda is scanned on a log grid.
    The scan ranges are a heuristic choice.
    """
    if not beta > 0:
        raise DomainError("beta must be positive")
    Cd = C.constant("local_uncertainty", d)
    Ccov = covering_constant(d, 2 / d, 2)
    e = 1 + 4 / d
    best = None
    for lam in Ccov * np.logspace(0.01, 8, lam_points):
        P = beta / (2 * d) * (lam / Ccov - 1)
        for ei in _inner_grid(points):
            C1 = Cd * ei ** e
            C2 = Cd * (1 + (ei / (1 - ei)) ** e)
            eps = min(P / (P + C2), 1.0)
            K = eps * C1 * lam ** (-2 / d)
            if best is None or K > best.K:
                best = SynthesizedConstant(K, float(lam), eps, ei, C1, C2, float("nan"),
                                           P, True, d, 1)
    return best


# ---------------------------------------------------------------------------
# brute-force exclusion oracle

def antisymmetric_ground_energy(grid: BoxGrid, N: int) -> float:
    """Lowest eigenvalue of the N-particle noninteracting discrete operator
    restricted to antisymmetric functions, by explicit projection."""
    if grid.d != 1:
        raise DomainError("brute-force oracle is implemented for d=1")
    S1 = SchrodingerOperator(grid).matrix()
    m = S1.shape[0]
    eye = sp.identity(m, format="csr")
    H = None
    for j in range(N):
        term = None
        for k in range(N):
            f = S1 if k == j else eye
            term = f if term is None else sp.kron(term, f, format="csr")
        H = term if H is None else H + term
    combos = list(itertools.combinations(range(m), N))
    rows, cols, vals = [], [], []
    norm = 1 / math.sqrt(math.factorial(N))
    for c, combo in enumerate(combos):
        for perm in itertools.permutations(range(N)):
            sign = 1
            for a, b in itertools.combinations(range(N), 2):
                if perm[a] > perm[b]:
                    sign = -sign
            idx = 0
            for p in perm:
                idx = idx * m + combo[p]
            rows.append(idx)
            cols.append(c)
            vals.append(sign * norm)
    B = sp.csr_matrix((vals, (rows, cols)), shape=(m ** N, len(combos)))
    Ha = (B.T @ H @ B).tocsc()
    if Ha.shape[0] <= 3000:
        return float(sla.eigvalsh(Ha.toarray(), subset_by_index=[0, 0])[0])
    val = spla.eigsh(Ha, k=1, sigma=-1.0, which="LM", v0=np.ones(Ha.shape[0]),
                     return_eigenvectors=False)
    return float(val[0])
