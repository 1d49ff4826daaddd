"""Coulomb systems: potentials, Baxter's bound, hydrogenic and stability bounds,
and the free Fermi gas.

Kinetic convention: the hydrogenic and Fermi-gas routines use -Delta
(hbar^2/2m = 1). The many-body Hamiltonian uses (1/2m)(-Delta); a bound
for -Delta + V converts to (1/2m)(-Delta) + V by replacing V with 2mV and
dividing the energy by 2m.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as sint
from scipy.special import erf

from . import constants as C
from .errors import DomainError
from .reports import EnergyBoundReport, make_report
from .spectral import cube_spectrum_exact


@dataclass(frozen=True, eq=False)
class MatterConfig:
    N: int
    M: int
    Z: float
    q: int = 1
    m: float = 1.0
    x: np.ndarray = None
    R: np.ndarray = None

    def __post_init__(self):
        x = np.zeros((0, 3)) if self.x is None else np.asarray(self.x, dtype=float).reshape(-1, 3)
        R = np.zeros((0, 3)) if self.R is None else np.asarray(self.R, dtype=float).reshape(-1, 3)
        if len(x) != self.N or len(R) != self.M:
            raise DomainError(f"expected {self.N} electrons and {self.M} nuclei, "
                              f"got {len(x)} and {len(R)} positions")
        if not self.Z > 0 or not self.m > 0 or self.q < 1:
            raise DomainError("need Z > 0, m > 0 and q >= 1")
        x.setflags(write=False)
        R.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "R", R)

    def to_json(self) -> str:
        return json.dumps({"N": self.N, "M": self.M, "Z": self.Z, "q": self.q, "m": self.m,
                           "x": self.x.tolist(), "R": self.R.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "MatterConfig":
        data = json.loads(text)
        return cls(data["N"], data["M"], data["Z"], data.get("q", 1), data.get("m", 1.0),
                   data.get("x"), data.get("R"))


def _pair_dist(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum((A[:, None, :] - B[None, :, :]) ** 2, axis=-1))


def _reject_coincident(D: np.ndarray, what_a: str, what_b: str, same: bool):
    bad = D == 0
    if same:
        bad = np.triu(bad, 1)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise DomainError(f"coincident points: {what_a} {i} and {what_b} {j}")


def coulomb_energy(cfg: MatterConfig) -> float:
    """sum_{i<j} 1/|x_i-x_j| - Z sum_{j,k} 1/|x_j-R_k| + Z^2 sum_{k<l} 1/|R_k-R_l|."""
    Dee = _pair_dist(cfg.x, cfg.x)
    Den = _pair_dist(cfg.x, cfg.R)
    Dnn = _pair_dist(cfg.R, cfg.R)
    _reject_coincident(Dee, "electron", "electron", True)
    _reject_coincident(Den, "electron", "nucleus", False)
    _reject_coincident(Dnn, "nucleus", "nucleus", True)
    iu_e = np.triu_indices(cfg.N, 1)
    iu_n = np.triu_indices(cfg.M, 1)
    ee = np.sum(1.0 / Dee[iu_e])
    en = np.sum(1.0 / Den) if Den.size else 0.0
    nn = np.sum(1.0 / Dnn[iu_n])
    return float(ee - cfg.Z * en + cfg.Z ** 2 * nn)


def baxter_rhs(cfg: MatterConfig) -> float:
    if cfg.N > 0 and cfg.M < 1:
        raise DomainError("Baxter's electron term needs at least one nucleus")
    out = 0.0
    if cfg.N:
        out -= (2 * cfg.Z + 1) * np.sum(1.0 / _pair_dist(cfg.x, cfg.R).min(axis=1))
    if cfg.M > 1:
        Dnn = _pair_dist(cfg.R, cfg.R)
        np.fill_diagonal(Dnn, np.inf)
        out += cfg.Z ** 2 / 4 * np.sum(1.0 / Dnn.min(axis=1))
    return float(out)


def baxter_check(cfg: MatterConfig, tol: float = 1e-9):
    """W_C >= -(2Z+1) sum_j 1/dist(x_j, R) + (Z^2/4) sum_k 1/dist(R_k, R minus R_k)."""
    return make_report("baxter", coulomb_energy(cfg), baxter_rhs(cfg), cfg.Z, tol,
                       N=cfg.N, M=cfg.M, Z=cfg.Z)


def random_config(rng, N: int, M: int, Z: float, box: float = 1.0) -> MatterConfig:
    return MatterConfig(N, M, Z, x=rng.uniform(0, box, (N, 3)), R=rng.uniform(0, box, (M, 3)))


# ---------------------------------------------------------------------------
# hydrogen

def hydrogen_bounds(Z: float) -> dict:
    """Exact ground energy of -Delta - Z/|x| and two lower bounds for it.

    The GNS value uses the numerical optimal constant G_3 (not rigorous);
    ``gns_fallback`` uses G_3 >= S_3 and is rigorous.
    """
    if not Z > 0:
        raise DomainError("Z must be positive")
    G3 = C.constant("gns_optimal_known", 3)
    S3 = C.constant("sobolev", 3)
    return {"exact": -Z ** 2 / 4, "hardy": -float(Z) ** 2,
            "gns": gns_hydrogen_minimum(Z, G3), "gns_fallback": gns_hydrogen_minimum(Z, S3),
            "gns_rigorous": C.is_rigorous("gns_optimal_known", 3)}


def gns_hydrogen_minimum(Z: float, G: float) -> float:
    """min of int (G rho^(5/3) - Z rho/|x|) over densities of unit mass."""
    return -9 * (math.pi / 2) ** (4 / 3) * Z ** 2 / (5 * G)


def gns_hydrogen_minimizer(Z: float, G: float):
    """(radial profile, cutoff radius R) of the minimizing density.

    The Euler-Lagrange equation gives rho = (3Z/(5G) (1/r - 1/R))_+^(3/2);
    unit mass fixes R = (5/3)(2/pi)^(4/3) G/Z.
    """
    Rc = (5 / 3) * (2 / math.pi) ** (4 / 3) * G / Z

    def rho(r):
        r = np.asarray(r, dtype=float)
        return (0.6 * Z / G * np.clip(1 / r - 1 / Rc, 0.0, None)) ** 1.5
    return rho, Rc


# ---------------------------------------------------------------------------
# stability of matter

def stability_coefficient(L3: float) -> float:
    """(3/2) (5 pi^2 L3)^(2/3)."""
    return 1.5 * (5 * math.pi ** 2 * L3) ** (2 / 3)


def _stability(label, N, M, Z, m, qL3, inputs):
    if min(N, M) < 1 or not (Z > 0 and m > 0 and qL3 > 0):
        raise DomainError("stability bounds need N, M >= 1 and positive Z, m, L3")
    coef = stability_coefficient(qL3)
    pref = m * (2 * Z + 1) ** 2
    sharp = -coef * pref * M ** (2 / 3) * N ** (1 / 3)
    linear = -coef * pref * (N + M)
    return EnergyBoundReport(label, linear, linear / (N + M), inputs,
                             {"coefficient": coef, "sharp_value": sharp,
                              "form": "linear; sharp_value is the M^(2/3) N^(1/3) form"})


def stability_bound(N: int, M: int, Z: float, q: int, m: float, L3: float) -> EnergyBoundReport:
    """Second-kind lower bound -(3/2)(5 pi^2 q L3)^(2/3) m (2Z+1)^2 (N+M)."""
    rep = _stability("stability", N, M, Z, m, q * L3,
                     {"N": N, "M": M, "Z": Z, "q": q, "m": m, "L3": L3})
    # coefficient reported per q^(2/3), i.e. the value for q = 1
    details = dict(rep.details, coefficient=stability_coefficient(L3),
                   q_factor=q ** (2 / 3))
    return EnergyBoundReport(rep.label, rep.value, rep.per_particle, rep.inputs, details)


def inverse_square_stability_bound(N: int, M: int, Z: float, m: float, beta: float,
                                   L3beta: float) -> EnergyBoundReport:
    if not beta > 0:
        raise DomainError("beta must be positive")
    return _stability("stability_inverse_square", N, M, Z, m, L3beta,
                      {"N": N, "M": M, "Z": Z, "m": m, "beta": beta, "L3beta": L3beta})


def gaussian_trial_energy(cfg: MatterConfig, widths) -> float:
    """<psi, H psi> for psi a product of Gaussians centred at cfg.x.

    |phi_j|^2 is the normal density N(x_j, s_j^2 I); H = sum_j (1/2m)(-Delta_j) + W_C.
    """
    s = np.broadcast_to(np.asarray(widths, dtype=float), (cfg.N,))
    kin = np.sum(3.0 / (8 * cfg.m * s ** 2))

    def smeared(D, var):
        out = np.empty_like(D)
        small = D < 1e-12
        out[~small] = erf(D[~small] / np.sqrt(2 * var[~small])) / D[~small]
        out[small] = np.sqrt(2 / (np.pi * var[small]))
        return out

    energy = kin
    if cfg.M:
        Den = _pair_dist(cfg.x, cfg.R)
        energy -= cfg.Z * np.sum(smeared(Den, np.repeat(s[:, None] ** 2, cfg.M, axis=1)))
    if cfg.N > 1:
        iu = np.triu_indices(cfg.N, 1)
        Dee = _pair_dist(cfg.x, cfg.x)[iu]
        energy += np.sum(smeared(Dee, (s[:, None] ** 2 + s[None, :] ** 2)[iu]))
    if cfg.M > 1:
        iu = np.triu_indices(cfg.M, 1)
        Dnn = _pair_dist(cfg.R, cfg.R)[iu]
        if np.any(Dnn == 0):
            raise DomainError("coincident nuclei")
        energy += cfg.Z ** 2 * np.sum(1.0 / Dnn)
    return float(energy)


def first_kind_bound(cfg: MatterConfig) -> float:
    return -0.5 * cfg.m * cfg.Z ** 2 * cfg.N * cfg.M ** 2


# ---------------------------------------------------------------------------
# free Fermi gas and harmonic traps

FERMI_MODES = ("exact_fill", "weyl", "local_lower")


def local_lower_value(N: int, volume: float, d: int, q: int) -> tuple:
    """max over integer M of pi^2/|Q|^(2/d) (N M^2 - q M^(d+2)); returns (value, M)."""
    centre = int(round((2 * N / ((d + 2) * q)) ** (1 / d)))
    best = None
    for Ms in range(max(1, centre - 2), centre + 3):
        val = math.pi ** 2 / volume ** (2 / d) * (N * Ms ** 2 - q * Ms ** (d + 2))
        if best is None or val > best[0]:
            best = (val, Ms)
    return best


def fermi_gas_energy(N: int, volume: float, d: int, q: int = 1,
                     mode: str = "exact_fill") -> EnergyBoundReport:
    """Ground energy of N free fermions (q spin states) in a Neumann cube, exact or bounded."""
    if N < 1:
        raise DomainError("N must be at least 1")
    inputs = {"N": N, "volume": volume, "d": d, "q": q, "mode": mode}
    details = {}
    if mode == "exact_fill":
        levels = cube_spectrum_exact(d, volume, -(-N // q)).eigenvalues
        value = float(math.fsum(np.repeat(levels, q)[:N]))
    elif mode == "weyl":
        value = q ** (-2 / d) * C.constant("semiclassical", d) * N ** (1 + 2 / d) / volume ** (2 / d)
    elif mode == "local_lower":
        value, Ms = local_lower_value(N, volume, d, q)
        details["M_side"] = Ms
    else:
        raise DomainError(f"mode must be one of {FERMI_MODES}, got {mode!r}")
    return EnergyBoundReport(f"fermi_{mode}", value, value / N, inputs, details)


def harmonic_fermion_energy(N: int, d: int, omega: float) -> float:
    """Ground energy of N spinless fermions in -Delta + omega^2 |x|^2 / 4 (levels omega(k + d/2))."""
    if not omega > 0:
        raise DomainError("omega must be positive")
    if d == 1:
        return omega * N ** 2 / 2
    if d == 2:
        n = int(round((math.sqrt(8 * N + 1) - 1) / 2))
        if n * (n + 1) // 2 != N:
            lo = int((math.sqrt(8 * N + 1) - 1) / 2)
            raise DomainError(f"N={N} does not fill a shell; nearest magic numbers are "
                              f"{lo * (lo + 1) // 2} and {(lo + 1) * (lo + 2) // 2}")
        return omega * N * math.sqrt(8 * N + 1) / 3
    raise DomainError("harmonic_fermion_energy supports d in (1, 2)")


def extensivity_max_particles(c: float, K3: float, eps: float, N: int) -> float:
    """(4c/K3)^(3/5) eps^(2/5) N: the most particles a region of volume eps N can hold."""
    if min(c, K3, eps) <= 0 or N <= 0:
        raise DomainError("all inputs must be positive")
    return (4 * c / K3) ** 0.6 * eps ** 0.4 * N
