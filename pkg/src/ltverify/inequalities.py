"""Checkers for one-body and few-body functional inequalities.

Every checker normalizes its input in L^2 first, so reports are invariant
under u -> c u. Inequalities on R^d are applied to the zero extension of
the field, so their inputs must vanish on the boundary of the box
(automatic on Dirichlet grids).

Proven constants are used by default. ``GLOBAL_TOL`` is the relative slack
granted for discretization error in checks whose discrete form is not
itself a theorem.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as sint

from . import constants as C
from .errors import DomainError, PreconditionError
from .grid import (DIRICHLET, NEUMANN, BoxGrid, SampledField, dirichlet_form, integrate,
                   kinetic_energy, l2_norm, lp_norm, tensor_weights)
from .reports import InequalityReport, make_report

GLOBAL_TOL = 1e-3
EXCLUSION_CELLS = 2
SYMMETRY_TOL = 1e-12


def _normalized(u: SampledField) -> SampledField:
    nrm = l2_norm(u)
    if not nrm > 0:
        raise DomainError("field is identically zero")
    return u.scaled(1.0 / nrm)


def _require_vanishing_boundary(u: SampledField, what: str):
    g = u.grid
    if g.bc == DIRICHLET:
        return
    mask = g.boundary_mask()
    big = np.max(np.abs(u.values))
    bad = np.abs(u.values) > SYMMETRY_TOL * big
    bad &= mask
    if np.any(bad):
        node = tuple(int(i) for i in np.argwhere(bad)[0])
        raise PreconditionError(f"{what}: field must vanish on the box boundary (node {node})")


def _require_zero_on(u: SampledField, zone: np.ndarray, what: str):
    big = np.max(np.abs(u.values))
    bad = zone & (np.abs(u.values) > SYMMETRY_TOL * big)
    if np.any(bad):
        node = tuple(int(i) for i in np.argwhere(bad)[0])
        raise PreconditionError(f"{what}: field must vanish in the exclusion zone (node {node})")


def _centre(g: BoxGrid) -> np.ndarray:
    return np.array([o + g.side / 2 for o in g.origin])


def _radius(g: BoxGrid, centre=None) -> np.ndarray:
    c = _centre(g) if centre is None else centre
    mesh = g.mesh()
    return np.sqrt(sum((m - ck) ** 2 for m, ck in zip(mesh, c)))


# ---------------------------------------------------------------------------
# uncertainty principles

def check_heisenberg(u: SampledField, tol: float = GLOBAL_TOL) -> InequalityReport:
    """<p^2><x^2> >= d^2/4 with x measured from the box centre."""
    _require_vanishing_boundary(u, "heisenberg")
    u = _normalized(u)
    g = u.grid
    T = kinetic_energy(u)
    x2 = integrate(g, _radius(g) ** 2 * np.abs(u.values) ** 2)
    return make_report("heisenberg", T * x2, g.d ** 2 / 4, g.d ** 2 / 4, tol,
                       kinetic=T, second_moment=x2)


def check_hardy(u: SampledField, variant: str = "standard", tol: float = GLOBAL_TOL,
                ) -> InequalityReport:
    """Hardy inequalities: standard (d=1,3), logarithmic (d=2) and antipodal."""
    g = u.grid
    _require_vanishing_boundary(u, "hardy")
    r = _radius(g, np.zeros(g.d))
    zone_width = EXCLUSION_CELLS * g.h
    if variant == "standard":
        if g.d not in (1, 3):
            raise DomainError(f"standard Hardy is checked for d in (1, 3), got d={g.d}")
        _require_zero_on(u, r < zone_width, "hardy(standard)")
        c = (g.d - 2) ** 2 / 4
        keep = r >= zone_width
        weight = np.zeros_like(r)
        weight[keep] = 1.0 / r[keep] ** 2
    elif variant == "log2d":
        if g.d != 2:
            raise DomainError("log2d Hardy needs d=2")
        _require_zero_on(u, (r < zone_width) | (np.abs(r - 1) < zone_width), "hardy(log2d)")
        c = 0.25
        keep = (r >= zone_width) & (np.abs(r - 1) >= zone_width)
        weight = np.zeros_like(r)
        weight[keep] = 1.0 / (r[keep] ** 2 * np.log(r[keep]) ** 2)
    elif variant == "antipodal":
        if not np.allclose(_centre(g), 0.0, atol=1e-12 * g.side):
            raise PreconditionError("antipodal Hardy needs a box centred at the origin")
        flipped = u.values[(slice(None, None, -1),) * g.d]
        big = np.max(np.abs(u.values))
        bad = np.abs(flipped + u.values) > SYMMETRY_TOL * max(big, 1e-300)
        if np.any(bad):
            node = tuple(int(i) for i in np.argwhere(bad)[0])
            raise PreconditionError(f"hardy(antipodal): u(-x) != -u(x) at node {node}")
        c = g.d ** 2 / 4
        keep = r > 0.5 * g.h
        weight = np.zeros_like(r)
        weight[keep] = 1.0 / r[keep] ** 2
    else:
        raise DomainError(f"unknown Hardy variant {variant!r}")
    u = _normalized(u)
    lhs = kinetic_energy(u)
    rhs = c * integrate(g, weight * np.abs(u.values) ** 2)
    return make_report(f"hardy_{variant}", lhs, rhs, c, tol)


def gsr_potential(f: SampledField, alpha: float) -> np.ndarray:
    """alpha(1-alpha)|grad f|^2/f^2 + alpha(-Lap f)/f by central differences.

    Values on the outermost layer of nodes are left at zero.
    """
    g = f.grid
    F = np.real(f.values)
    grad2 = np.zeros_like(F)
    lap = np.zeros_like(F)
    inner = (slice(1, -1),) * g.d
    for ax in range(g.d):
        def sl(a, b):
            s = [slice(1, -1)] * g.d
            s[ax] = slice(a, b)
            return tuple(s)
        fp, fm, fc = F[sl(2, None)], F[sl(None, -2)], F[inner]
        grad2[inner] += ((fp - fm) / (2 * g.h)) ** 2
        lap[inner] += (fp - 2 * fc + fm) / g.h ** 2
    W = np.zeros_like(F)
    with np.errstate(divide="ignore", invalid="ignore"):
        W[inner] = (alpha * (1 - alpha) * grad2[inner] / F[inner] ** 2
                    - alpha * lap[inner] / F[inner])
    return W


def _boundary_layer(g: BoxGrid, cells: int) -> np.ndarray:
    mask = np.zeros(g.shape, dtype=bool)
    k = cells + 1 if g.bc == NEUMANN else cells
    for ax in range(g.d):
        s = [slice(None)] * g.d
        s[ax] = slice(0, k)
        mask[tuple(s)] = True
        s[ax] = slice(-k, None)
        mask[tuple(s)] = True
    return mask


def _weighted_form(vals: np.ndarray, edge_weight_source: np.ndarray, g: BoxGrid) -> float:
    """Edge form sum w_e |vals_{i+1} - vals_i|^2 / h with w_e = sqrt(s_i s_{i+1}) * w_perp."""
    w1 = g.weights1d()
    total = 0.0
    for ax in range(g.d):
        diff = np.diff(vals, axis=ax)
        s0 = np.take(edge_weight_source, range(0, g.points_per_axis - 1), axis=ax)
        s1 = np.take(edge_weight_source, range(1, g.points_per_axis), axis=ax)
        wt = tensor_weights([w1 if k != ax else np.ones(diff.shape[ax]) for k in range(g.d)])
        total += float(np.sum(wt * np.sqrt(s0 * s1) * np.abs(diff) ** 2)) / g.h
    return total


def gsr_identity_check(f: SampledField, u: SampledField, alpha: float,
                       C_h: float = 1.0) -> InequalityReport:
    """Ground state representation: int|grad u|^2 = int W|u|^2 + int |grad(f^-a u)|^2 f^(2a)."""
    g = u.grid
    if f.grid != g:
        raise DomainError("f and u must share a grid")
    _require_zero_on(u, _boundary_layer(g, EXCLUSION_CELLS), "gsr")
    u = _normalized(u)
    F = np.real(f.values)
    supp = np.abs(u.values) > 0
    # f must be positive on the support and on its nearest neighbours
    near = supp.copy()
    for ax in range(g.d):
        near |= np.roll(supp, 1, axis=ax) | np.roll(supp, -1, axis=ax)
    if np.any(F[near] <= 0):
        node = tuple(int(i) for i in np.argwhere(near & (F <= 0))[0])
        raise DomainError(f"gsr: f must be positive on the support of u (node {node})")
    Fpos = np.where(near, F, 1.0)
    W = gsr_potential(SampledField(g, Fpos), alpha)
    lhs = kinetic_energy(u)
    v = np.where(supp, u.values / Fpos ** alpha, 0.0)
    second = _weighted_form(v, Fpos ** (2 * alpha), g)
    first = integrate(g, W * np.abs(u.values) ** 2)
    return make_report("gsr_identity", lhs, first + second, alpha, C_h * g.h, "==",
                       potential_term=first, remainder_term=second)


# ---------------------------------------------------------------------------
# Sobolev, GNS, Poincare

def check_sobolev(u: SampledField, tol: float = GLOBAL_TOL) -> InequalityReport:
    g = u.grid
    _require_vanishing_boundary(u, "sobolev")
    u = _normalized(u)
    T = kinetic_energy(u)
    if g.d == 3:
        S3 = C.constant("sobolev", 3)
        return make_report("sobolev_3d", T, S3 * lp_norm(u, 6) ** 2, S3, tol)
    if g.d == 1:
        return make_report("sobolev_1d", T, lp_norm(u, np.inf) ** 4, 1.0, tol)
    raise DomainError(f"Sobolev is checked for d in (1, 3), got d={g.d}")


def check_gns(u: SampledField, constant: float = None, tol: float = GLOBAL_TOL,
              ) -> InequalityReport:
    """T ||u||^(4/d) >= G int |u|^(2+4/d), with the proven G_d' by default."""
    g = u.grid
    _require_vanishing_boundary(u, "gns")
    u = _normalized(u)
    rigorous = constant is None
    G = C.constant("gns_lower", g.d) if constant is None else constant
    T = kinetic_energy(u)
    p = 2 + 4 / g.d
    rhs = G * integrate(g, np.abs(u.values) ** p)
    return make_report("gns", T, rhs, G, tol, rigorous=rigorous)


def check_poincare(u: SampledField, tol: float = None) -> InequalityReport:
    """int|u'|^2 >= (pi/side)^2 int|u - mean u|^2 on a Neumann interval.

    The discrete Neumann gap is (4/h^2) sin^2(pi h / (2 side)), which lies
    below (pi/side)^2 by a relative amount of at most (pi h/side)^2/12;
    that is the default tolerance.
    """
    g = u.grid
    if g.d != 1 or g.bc != NEUMANN:
        raise PreconditionError("Poincare check needs a 1D Neumann grid")
    if tol is None:
        tol = (math.pi * g.h / g.side) ** 2 / 12 * (1 + 1e-6) + 1e-13
    vals = u.values
    nrm = l2_norm(u)
    if nrm > 0:
        vals = vals / nrm
    mean = integrate(g, vals) / g.side
    c = (math.pi / g.side) ** 2
    lhs = dirichlet_form(vals, g.h, g.bc, g.weights1d())
    rhs = c * integrate(g, np.abs(vals - mean) ** 2)
    return make_report("poincare", lhs, rhs, c, tol)


def gns_integral_identity(A: float, B: float, d: int, tol: float = 1e-8) -> InequalityReport:
    """int_0^inf [A - B t^(d/4)]_+^2 dt = d^2 A^(2+4/d) B^(-4/d) / ((d+2)(d+4))."""
    if not B > 0 or A < 0:
        raise DomainError("need A >= 0 and B > 0")
    closed = d ** 2 * A ** (2 + 4 / d) * B ** (-4 / d) / ((d + 2) * (d + 4))
    if A == 0:
        numeric = 0.0
    else:
        upper = (A / B) ** (4 / d)
        numeric, _ = sint.quad(lambda t: (A - B * t ** (d / 4)) ** 2, 0.0, upper,
                               epsabs=0.0, epsrel=1e-13, limit=200)
    return make_report("gns_integral_identity", numeric, closed, d, tol, "==",
                       scale=abs(closed))


# ---------------------------------------------------------------------------
# many-body fields

@dataclass(frozen=True, eq=False)
class ManyBodyField:
    """psi(x_1, ..., x_N) on the N-fold tensor power of a one-body grid."""

    grid: BoxGrid
    N: int
    values: np.ndarray
    symmetry: str = "none"

    def __post_init__(self):
        if self.N not in (2, 3):
            raise DomainError("many-body fields support N in (2, 3)")
        if self.N * self.grid.d > 6:
            raise DomainError("total dimension N*d is capped at 6")
        if self.grid.n > 24:
            raise DomainError("per-axis resolution is capped at n = 24")
        shape = self.grid.shape * self.N
        vals = np.array(self.values, copy=True).reshape(shape)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.symmetry not in ("none", "symmetric", "antisymmetric"):
            raise DomainError(f"unknown symmetry {self.symmetry!r}")
        if self.symmetry != "none":
            sign = 1 if self.symmetry == "symmetric" else -1
            for j, k in itertools.combinations(range(self.N), 2):
                if not self._swap_matches(j, k, sign):
                    raise PreconditionError(
                        f"values are not {self.symmetry} under exchange of particles {j} and {k}")

    @property
    def d(self) -> int:
        return self.grid.d

    def swapped(self, j: int, k: int) -> np.ndarray:
        d = self.d
        perm = list(range(self.N * d))
        for a in range(d):
            perm[j * d + a], perm[k * d + a] = perm[k * d + a], perm[j * d + a]
        return np.transpose(self.values, perm)

    def _swap_matches(self, j, k, sign) -> bool:
        big = max(np.max(np.abs(self.values)), 1e-300)
        return bool(np.all(np.abs(self.swapped(j, k) - sign * self.values) <= SYMMETRY_TOL * big))

    def weights(self) -> np.ndarray:
        return tensor_weights([self.grid.weights1d()] * (self.N * self.d))

    def norm(self) -> float:
        return math.sqrt(float(np.sum(self.weights() * np.abs(self.values) ** 2)))

    def kinetic_energy(self) -> float:
        g = self.grid
        return dirichlet_form(self.values, g.h, g.bc, g.weights1d())

    def pair_distance(self, j: int, k: int) -> np.ndarray:
        g, d, nd = self.grid, self.d, self.N * self.d
        total = 0.0
        for a in range(d):
            xa = g.axis(a)
            sj = [1] * nd
            sk = [1] * nd
            sj[j * d + a] = -1
            sk[k * d + a] = -1
            total = total + (xa.reshape(sj) - xa.reshape(sk)) ** 2
        return np.broadcast_to(np.sqrt(total), self.values.shape)


def check_manybody_hardy(psi: ManyBodyField, variant: str = "onedim",
                         tol: float = GLOBAL_TOL) -> InequalityReport:
    g = psi.grid
    if g.bc != DIRICHLET:
        big = np.max(np.abs(psi.values))
        edge = np.zeros(psi.values.shape, dtype=bool)
        for ax in range(psi.values.ndim):
            s = [slice(None)] * psi.values.ndim
            s[ax] = 0
            edge[tuple(s)] = True
            s[ax] = -1
            edge[tuple(s)] = True
        if np.any(edge & (np.abs(psi.values) > SYMMETRY_TOL * big)):
            raise PreconditionError("many-body Hardy: psi must vanish on the box boundary")
    pairs = list(itertools.combinations(range(psi.N), 2))
    if variant == "onedim":
        if psi.d != 1:
            raise PreconditionError("onedim many-body Hardy needs d=1")
        c = 0.5
        zone = EXCLUSION_CELLS * g.h
        big = np.max(np.abs(psi.values))
        for j, k in pairs:
            r = psi.pair_distance(j, k)
            if np.any((r < zone) & (np.abs(psi.values) > SYMMETRY_TOL * big)):
                raise PreconditionError(
                    f"onedim many-body Hardy: psi must vanish near the diagonal x_{j} = x_{k}")
    elif variant == "fermionic":
        if psi.symmetry != "antisymmetric":
            raise PreconditionError("fermionic many-body Hardy needs an antisymmetric field")
        c = psi.d ** 2 / psi.N
    else:
        raise DomainError(f"unknown many-body Hardy variant {variant!r}")
    nrm = psi.norm()
    if not nrm > 0:
        raise DomainError("field is identically zero")
    vals2 = np.abs(psi.values / nrm) ** 2
    w = psi.weights()
    lhs = psi.kinetic_energy() / nrm ** 2
    rhs = 0.0
    for j, k in pairs:
        r = psi.pair_distance(j, k)
        inv = np.zeros_like(r)
        keep = r > 0.5 * g.h
        inv[keep] = 1.0 / r[keep] ** 2
        rhs += float(np.sum(w * inv * vals2))
    return make_report(f"manybody_hardy_{variant}", lhs, c * rhs, c, tol)
