"""Dyadic mass partitions of a cube and the aggregate bounds they satisfy.

Starting from a root cube, any cube carrying mass > Lambda is split into
its 2^d dyadic children until every leaf carries at most Lambda.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import ndtr

from .constants import covering_constant, weak_b
from .errors import DomainError, PartitionError, RefinementError
from .grid import BoxGrid, DensityField

MAX_DEPTH = 40
ADDITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class Cube:
    corner: tuple
    side: float

    @property
    def d(self) -> int:
        return len(self.corner)

    @property
    def volume(self) -> float:
        return self.side ** self.d

    def children(self) -> list:
        """The 2^d dyadic children, ordered lexicographically by corner."""
        s = self.side / 2
        out = []
        for offs in itertools.product((0, 1), repeat=self.d):
            out.append(Cube(tuple(c + o * s for c, o in zip(self.corner, offs)), s))
        return out


@dataclass(frozen=True)
class Leaf:
    cube: Cube
    mass: float
    depth: int


@dataclass(frozen=True)
class MassPartition:
    d: int
    root: Cube
    lam: float
    leaves: tuple
    root_mass: float

    @property
    def leaf_count(self) -> int:
        return len(self.leaves)

    def total_volume(self) -> float:
        return math.fsum(leaf.cube.volume for leaf in self.leaves)

    def to_dict(self) -> dict:
        return {"d": self.d,
                "root": {"corner": list(self.root.corner), "side": self.root.side},
                "lambda": self.lam,
                "leaves": [{"corner": list(l.cube.corner), "side": l.cube.side,
                            "mass": l.mass, "depth": l.depth} for l in self.leaves]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "MassPartition":
        root = Cube(tuple(data["root"]["corner"]), data["root"]["side"])
        leaves = tuple(Leaf(Cube(tuple(l["corner"]), l["side"]), l["mass"], l["depth"])
                       for l in data["leaves"])
        return cls(data["d"], root, data["lambda"], leaves,
                   math.fsum(l.mass for l in leaves))


def _masses(oracle, cubes: Sequence[Cube]) -> list:
    batch = getattr(oracle, "batch", None)
    if batch is not None:
        corners = np.array([c.corner for c in cubes], dtype=float)
        vals = batch(corners, cubes[0].side)
    else:
        vals = [oracle(c) for c in cubes]
    return [float(v) for v in vals]


def partition(mass_oracle: Callable, root: Cube, lam: float,
              max_depth: int = MAX_DEPTH) -> MassPartition:
    """Split cubes with mass > lam into 2^d children until every leaf has mass <= lam.

    Every split is checked for additivity: the children's masses must add
    up to the parent's within ADDITIVITY_TOL (relative, with an absolute
    floor proportional to the root mass).
    """
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    root_mass = _masses(mass_oracle, [root])[0]
    if not math.isfinite(root_mass):
        raise DomainError("root mass is not finite")
    if root_mass < 0:
        raise DomainError(f"negative mass {root_mass} on the root cube")
    floor = 1e-12 * root_mass
    leaves = []
    stack = [(root, root_mass, 0)]
    while stack:
        cube, mass, depth = stack.pop()
        if mass <= lam:
            leaves.append(Leaf(cube, mass, depth))
            continue
        if depth >= max_depth:
            raise RefinementError(
                f"depth cap {max_depth} reached at corner {cube.corner}: mass {mass} > {lam}")
        kids = cube.children()
        masses = _masses(mass_oracle, kids)
        for k, m in zip(kids, masses):
            if m < 0:
                raise DomainError(f"negative mass {m} on cube at {k.corner}")
        total = math.fsum(masses)
        if abs(total - mass) > ADDITIVITY_TOL * max(mass, total) + floor:
            raise PartitionError(
                f"oracle not additive at corner {cube.corner}: parent {mass}, children {total}")
        # reversed push keeps the depth-first output in lexicographic order
        for k, m in reversed(list(zip(kids, masses))):
            stack.append((k, m, depth + 1))
    return MassPartition(root.d, root, float(lam), tuple(leaves), root_mass)


def aggregate_terms(p: MassPartition, alpha: float, beta: float, gamma: float):
    C = covering_constant(p.d, alpha, beta)
    coef = p.lam ** (beta - gamma) / C
    terms, scale = [], []
    for leaf in p.leaves:
        w = leaf.cube.volume ** (-alpha)
        a = leaf.mass ** beta
        b = coef * leaf.mass ** gamma
        terms.append(w * (a - b))
        scale.append(w * (a + b))
    return terms, math.fsum(scale)


def aggregate_bound(p: MassPartition, alpha: float, beta: float, gamma: float) -> float:
    """sum_Q |Q|^-alpha [m^beta - (Lambda^(beta-gamma)/C) m^gamma]; >= 0 when root mass >= Lambda."""
    if gamma < 0:
        raise DomainError("gamma must be non-negative")
    terms, _ = aggregate_terms(p, alpha, beta, gamma)
    return math.fsum(terms)


def aggregate_bound_weak(p: MassPartition, alpha: float, q: float) -> float:
    """sum_Q |Q|^-alpha ([m - q]_+ - b m) with b = weak_b(d, alpha, q, Lambda)."""
    b = weak_b(p.d, alpha, q, p.lam)
    return math.fsum(leaf.cube.volume ** (-alpha) * (max(leaf.mass - q, 0.0) - b * leaf.mass)
                     for leaf in p.leaves)


def aggregate_weak_scale(p: MassPartition, alpha: float, q: float) -> float:
    b = weak_b(p.d, alpha, q, p.lam)
    return math.fsum(leaf.cube.volume ** (-alpha) * (max(leaf.mass - q, 0.0) + abs(b) * leaf.mass)
                     for leaf in p.leaves)


# ---------------------------------------------------------------------------
# mass oracles

class UniformOracle:
    """Constant density on a box, zero outside."""

    def __init__(self, density: float, lower: Sequence[float], upper: Sequence[float]):
        self.density = float(density)
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)

    def batch(self, corners, side):
        lo = np.maximum(corners, self.lower)
        hi = np.minimum(corners + side, self.upper)
        return self.density * np.prod(np.clip(hi - lo, 0.0, None), axis=1)

    def __call__(self, cube: Cube) -> float:
        return float(self.batch(np.array([cube.corner], dtype=float), cube.side)[0])


class GaussianMixtureOracle:
    """Masses of sum_i w_i N(c_i, s_i^2 I), computed from normal CDF differences."""

    def __init__(self, centers, widths, weights):
        self.centers = np.atleast_2d(np.asarray(centers, dtype=float))
        self.widths = np.asarray(widths, dtype=float)
        self.weights = np.asarray(weights, dtype=float)

    def batch(self, corners, side):
        lo = (corners[:, None, :] - self.centers[None]) / self.widths[None, :, None]
        hi = lo + side / self.widths[None, :, None]
        # use the upper tail where it is more accurate
        flip = lo > 0
        p = np.where(flip, ndtr(-lo) - ndtr(-hi), ndtr(hi) - ndtr(lo))
        return np.clip(np.prod(p, axis=2), 0.0, None) @ self.weights

    def __call__(self, cube: Cube) -> float:
        return float(self.batch(np.array([cube.corner], dtype=float), cube.side)[0])


class SumOracle:
    def __init__(self, *parts):
        self.parts = parts

    def batch(self, corners, side):
        return sum(p.batch(corners, side) for p in self.parts)

    def __call__(self, cube: Cube) -> float:
        return float(self.batch(np.array([cube.corner], dtype=float), cube.side)[0])


def _hat_integrals(nodes: np.ndarray, h: float, a: float, b: float, lo_end: float,
                   hi_end: float) -> np.ndarray:
    """int_a^b phi_i(x) dx for the piecewise-linear hat functions at ``nodes``.

    Hats are truncated at the grid ends [lo_end, hi_end].
    """
    a, b = max(a, lo_end), min(b, hi_end)
    if b <= a:
        return np.zeros(len(nodes))

    def prim(x):
        # antiderivative of the full hat centred at 0 with half-width h
        t = np.clip(x / h, -1.0, 1.0)
        return h * np.where(t < 0, t + t * t / 2, t - t * t / 2)

    return prim(b - nodes) - prim(a - nodes)


class GridDensityOracle:
    """Exact integral of the multilinear interpolant of a Neumann-grid density.

    On the full grid box this is the trapezoid mass; on any sub-cube it is
    additive and non-negative.
    """

    def __init__(self, rho: DensityField):
        g = rho.grid
        if g.bc != "neumann":
            raise DomainError("grid oracle needs a Neumann grid (boundary nodes included)")
        self.rho = rho
        self.axes = [g.axis(k) for k in range(g.d)]

    def __call__(self, cube: Cube) -> float:
        g = self.rho.grid
        vals = self.rho.values
        for k in range(g.d):
            w = _hat_integrals(self.axes[k], g.h, cube.corner[k], cube.corner[k] + cube.side,
                               self.axes[k][0], self.axes[k][-1])
            vals = np.tensordot(w, vals, axes=([0], [0]))
        return float(max(vals, 0.0))


def random_mixture(d: int, rng, side: float = 1.0):
    """Random Gaussian spikes plus a uniform background on [0, side]^d."""
    k = int(rng.integers(1, 5))
    centers = rng.uniform(0.1, 0.9, size=(k, d)) * side
    widths = side * 10 ** rng.uniform(-2.5, -0.7, size=k)
    weights = rng.uniform(0.2, 1.0, size=k)
    parts = [GaussianMixtureOracle(centers, widths, weights)]
    if rng.integers(0, 2):
        parts.append(UniformOracle(rng.uniform(0.05, 0.5) / side ** d, [0.0] * d, [side] * d))
    return SumOracle(*parts)
