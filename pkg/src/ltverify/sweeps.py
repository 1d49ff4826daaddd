"""Randomized sweeps shared by the CLI, the scripts and the acceptance suite.

Each sweep is described by a small dataclass config and returns a list of
reports, one per trial, in trial order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import constants as C
from .covering import (Cube, aggregate_terms, aggregate_bound_weak, aggregate_weak_scale,
                       partition, random_mixture)
from .errors import DomainError
from .grid import DIRICHLET, NEUMANN, BoxGrid
from .inequalities import (GLOBAL_TOL, check_gns, check_hardy, check_heisenberg,
                           check_manybody_hardy, check_poincare, check_sobolev)
from .lieb_thirring import OrbitalSet, eigenvalue_sum_check, kinetic_form_check
from .matter import baxter_check, random_config
from .rng import trial_generators
from .sampling import (random_fermionic_field, random_field, random_hardy_field,
                       random_neumann_field, random_onedim_field, random_orbitals)
from .spectral import SchrodingerOperator

CHECKS = ("heisenberg", "hardy", "sobolev", "gns", "poincare", "kinetic_form", "manybody")
DEFAULT_N = {1: 128, 2: 40, 3: 20}
HARDY_SIDE = {"standard": 2.0, "log2d": 3.0, "antipodal": 2.0}


def default_variant(check: str, d: int) -> Optional[str]:
    if check == "hardy":
        return "log2d" if d == 2 else "standard"
    if check == "manybody":
        return "onedim" if d == 1 else "fermionic"
    return None


@dataclass
class SweepConfig:
    check: str
    d: int = 1
    n: Optional[int] = None
    variant: Optional[str] = None
    N: int = 2
    trials: int = 10
    seed: int = 0
    tol: float = GLOBAL_TOL
    side: float = 1.0
    K: Optional[float] = None  # kinetic_form constant; None means G_d'
    bc: str = DIRICHLET  # used by the single-field checks and kinetic_form

    def __post_init__(self):
        if self.check not in CHECKS:
            raise DomainError(f"unknown check {self.check!r}; choose from {CHECKS}")
        if self.variant is None:
            self.variant = default_variant(self.check, self.d)
        if self.n is None:
            self.n = DEFAULT_N.get(self.d, 12)
            if self.check == "manybody":
                self.n = min(self.n, 24 if self.N * self.d <= 3 else 10)
        if self.trials < 0:
            raise DomainError("trials must be non-negative")

    def grid(self) -> BoxGrid:
        if self.check == "hardy":
            return BoxGrid.centered(self.d, self.n, HARDY_SIDE[self.variant])
        if self.check == "poincare":
            return BoxGrid(self.d, self.n, self.side, NEUMANN)
        if self.check == "manybody":
            return BoxGrid(self.d, self.n, self.side, DIRICHLET)
        return BoxGrid.centered(self.d, self.n, self.side, self.bc)


def run_trial(cfg: SweepConfig, grid: BoxGrid, rng):
    c = cfg.check
    if c == "heisenberg":
        return check_heisenberg(random_field(grid, rng, bool(rng.integers(0, 2))), cfg.tol)
    if c == "hardy":
        return check_hardy(random_hardy_field(grid, rng, cfg.variant), cfg.variant, cfg.tol)
    if c == "sobolev":
        return check_sobolev(random_field(grid, rng, bool(rng.integers(0, 2))), cfg.tol)
    if c == "gns":
        return check_gns(random_field(grid, rng, bool(rng.integers(0, 2))), tol=cfg.tol)
    if c == "poincare":
        return check_poincare(random_neumann_field(grid, rng))
    if c == "kinetic_form":
        count = int(rng.integers(1, 7))
        orbs = random_orbitals(grid, count, rng, bool(rng.integers(0, 2)))
        return kinetic_form_check(OrbitalSet(orbs), cfg.K, cfg.tol)
    if cfg.variant == "onedim":
        psi = random_onedim_field(grid, cfg.N, rng)
    else:
        psi = random_fermionic_field(grid, cfg.N, rng)
    return check_manybody_hardy(psi, cfg.variant, cfg.tol)


def run_sweep(cfg: SweepConfig) -> list:
    grid = cfg.grid()
    out = []
    for i, rng in enumerate(trial_generators(cfg.seed, cfg.trials)):
        rep = run_trial(cfg, grid, rng)
        rep.details["trial"] = i
        out.append(rep)
    return out


# ---------------------------------------------------------------------------
# covering lemma

@dataclass
class CoverConfig:
    d: Optional[int] = None
    lam: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    gamma: Optional[float] = None
    q: Optional[float] = None
    trials: int = 10
    seed: int = 0
    tol: float = 1e-12


@dataclass
class PartitionSummary:
    """Per-trial outcome of the covering checks."""

    d: int
    lam: float
    alpha: float
    beta: float
    gamma: float
    q: float
    leaf_count: int
    root_mass: float
    max_leaf_mass: float
    volume_error: float
    aggregate: float
    aggregate_scale: float
    aggregate_weak: float
    weak_scale: float
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["type"] = "partition"
        return out


def cover_trial(cfg: CoverConfig, rng) -> PartitionSummary:
    d = cfg.d or int(rng.integers(1, 4))
    oracle = random_mixture(d, rng)
    root = Cube((0.0,) * d, 1.0)
    root_mass = oracle(root)
    # the aggregate guarantee assumes the root carries at least Lambda
    lam = cfg.lam or root_mass * 10 ** -rng.uniform(0, 2.5)
    alpha = cfg.alpha or rng.uniform(0.05, 3)
    beta = cfg.beta or rng.uniform(0.05, 3)
    gamma = cfg.gamma if cfg.gamma is not None else rng.uniform(0, beta)
    q = cfg.q if cfg.q is not None else rng.uniform(0, lam)
    p = partition(oracle, root, lam)
    terms, scale = aggregate_terms(p, alpha, beta, gamma)
    agg = math.fsum(terms)
    weak = aggregate_bound_weak(p, alpha, q)
    wscale = aggregate_weak_scale(p, alpha, q)
    max_leaf = max(leaf.mass for leaf in p.leaves)
    verr = abs(p.total_volume() - root.volume)
    # with root mass below Lambda the aggregate bounds are not claimed
    applies = root_mass >= lam
    ok = (max_leaf <= lam * (1 + cfg.tol) and verr <= cfg.tol
          and (not applies or (agg >= -cfg.tol * scale and weak >= -cfg.tol * wscale)))
    return PartitionSummary(d, float(lam), float(alpha), float(beta), float(gamma), float(q),
                            p.leaf_count, root_mass, max_leaf, verr, agg, scale, weak, wscale,
                            bool(ok), {"C": C.covering_constant(d, alpha, beta),
                                       "b": C.weak_b(d, alpha, q, lam),
                                       "guarantee_applies": bool(applies)})


def run_cover(cfg: CoverConfig) -> list:
    out = []
    for i, rng in enumerate(trial_generators(cfg.seed, cfg.trials)):
        s = cover_trial(cfg, rng)
        s.details["trial"] = i
        out.append(s)
    return out


# ---------------------------------------------------------------------------
# eigenvalue-sum LT on multi-well potentials and Baxter configurations

def random_wells(grid: BoxGrid, rng) -> np.ndarray:
    """Sum of 1..5 negative Gaussian wells with random depths and widths."""
    x = grid.mesh()
    V = np.zeros(grid.shape)
    for _ in range(int(rng.integers(1, 6))):
        c = [o + grid.side * rng.uniform(0.25, 0.75) for o in grid.origin]
        w = grid.side * rng.uniform(0.01, 0.06)
        depth = rng.uniform(50, 5000)
        V -= depth * np.exp(-sum((xk - ck) ** 2 for xk, ck in zip(x, c)) / (2 * w * w))
    return V


def run_eigenvalue_sums(trials: int, seed: int, L: float = None, n: int = 800,
                        side: float = 1.0) -> list:
    grid = BoxGrid(1, n, side, DIRICHLET)
    out = []
    for i, rng in enumerate(trial_generators(seed, trials)):
        rep = eigenvalue_sum_check(SchrodingerOperator(grid, random_wells(grid, rng)), L)
        rep.details["trial"] = i
        out.append(rep)
    return out


def run_baxter(trials: int, seed: int, N: int = None, M: int = None, Z: float = None,
               tol: float = 1e-9) -> list:
    out = []
    for i, rng in enumerate(trial_generators(seed, trials)):
        n_e = N if N is not None else int(rng.integers(0, 9))
        m_n = M if M is not None else int(rng.integers(1, 9))
        z = Z if Z is not None else float(rng.choice([1, 2, 17]))
        rep = baxter_check(random_config(rng, n_e, m_n, z), tol)
        rep.details["trial"] = i
        out.append(rep)
    return out


def gns_identity_sweep(trials: int, seed: int, tol: float = 1e-8) -> list:
    from .inequalities import gns_integral_identity
    out = []
    for rng in trial_generators(seed, trials):
        A = 10 ** rng.uniform(-1, 1)
        B = 10 ** rng.uniform(-1, 1)
        out.append(gns_integral_identity(A, B, int(rng.integers(1, 4)), tol))
    return out
