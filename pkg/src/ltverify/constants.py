"""Closed-form constants and the anyonic statistics functions.

Every constant is evaluated from its defining formula in double precision.
Values that are only known numerically (the optimal 3D GNS constant) are
flagged through :func:`is_rigorous`.
"""
from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction

import numpy as np

from .errors import DomainError


class ConstantKind(str, Enum):
    SPHERE_MEASURE = "sphere_measure"
    SOBOLEV = "sobolev"
    GNS_LOWER = "gns_lower"
    GNS_OPTIMAL_KNOWN = "gns_optimal_known"
    SEMICLASSICAL = "semiclassical"
    LOCAL_UNCERTAINTY = "local_uncertainty"
    BALL_EXCLUSION_XI = "ball_exclusion_xi"
    # best proven kinetic LT constant (pi/sqrt3)^(-2/d) K_d^cl
    LT_PROVEN = "lt_proven"


# Smallest positive root of J_1'(x) = 0 (disk, Neumann) and of
# (sin x / x)'' = 0, i.e. tan x = 2x / (2 - x^2) (ball, Neumann).
XI_DISK = 1.841184
XI_BALL = 2.081576

# Optimal 1D GNS constant (exact) and the numerically computed 3D value.
_GNS_OPTIMAL = {1: math.pi ** 2 / 4, 3: 9.578}
_GNS_RIGOROUS = {1: True, 3: False}


def sphere_measure(d: int) -> float:
    """Surface measure of the unit sphere in R^d."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


def _check_dim(d):
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def constant(kind, d: int) -> float:
    """Evaluate the constant ``kind`` in dimension ``d``."""
    kind = ConstantKind(kind)
    d = _check_dim(d)
    if kind is ConstantKind.SPHERE_MEASURE:
        return sphere_measure(d)
    if kind is ConstantKind.SOBOLEV:
        if d == 1:
            return 1.0
        if d >= 3:
            return d * (d - 2) * sphere_measure(d + 1) ** (2 / d) / 4
        raise DomainError(f"unsupported pair (sobolev, d={d}): need d = 1 or d >= 3")
    if kind is ConstantKind.GNS_LOWER:
        return ((2 * math.pi) ** 2 * d ** (2 + 2 / d) * sphere_measure(d) ** (-2 / d)
                / ((d + 2) * (d + 4)))
    if kind is ConstantKind.GNS_OPTIMAL_KNOWN:
        if d not in _GNS_OPTIMAL:
            raise DomainError(f"unsupported pair (gns_optimal_known, d={d}): known for d in (1, 3)")
        return _GNS_OPTIMAL[d]
    if kind is ConstantKind.SEMICLASSICAL:
        return (4 * math.pi * d / (d + 2) * (2 / (d + 2)) ** (2 / d)
                * math.gamma(2 + d / 2) ** (2 / d))
    if kind is ConstantKind.LOCAL_UNCERTAINTY:
        return d ** 2 * math.pi ** 2 / (16 * (d + 2) * (d + 4))
    if kind is ConstantKind.BALL_EXCLUSION_XI:
        if d == 2:
            return XI_DISK
        if d == 3:
            return XI_BALL
        raise DomainError(f"unsupported pair (ball_exclusion_xi, d={d}): need d in (2, 3)")
    if kind is ConstantKind.LT_PROVEN:
        return (math.pi / math.sqrt(3)) ** (-2 / d) * constant(ConstantKind.SEMICLASSICAL, d)
    raise DomainError(f"unknown constant kind {kind!r}")


def is_rigorous(kind, d: int) -> bool:
    """False for values that are numerical or conjectural rather than proven."""
    kind = ConstantKind(kind)
    if kind is ConstantKind.GNS_OPTIMAL_KNOWN:
        return _GNS_RIGOROUS.get(int(d), False)
    return True


def lt_dual(value: float, d: int, direction: str = "K_to_L") -> float:
    """Convert between the kinetic constant K and the eigenvalue-sum constant L.

    L = (2/(d+2)) (d/(d+2))^(d/2) K^(-d/2).
    """
    d = _check_dim(d)
    if not value > 0:
        raise DomainError(f"lt_dual needs a positive constant, got {value!r}")
    pref = (2 / (d + 2)) * (d / (d + 2)) ** (d / 2)
    if direction == "K_to_L":
        return pref * value ** (-d / 2)
    if direction == "L_to_K":
        return (value / pref) ** (-2 / d)
    raise DomainError(f"direction must be 'K_to_L' or 'L_to_K', got {direction!r}")


# ---------------------------------------------------------------------------
# anyonic statistics

def alpha_statistics(alpha: float, N: int) -> float:
    """min over p in 0..N-2 and integer q of |(2p+1) alpha - 2q|.

    For each p the objective is convex in q, so restricting q to
    |q| <= ceil(|(2p+1) alpha| / 2) + 1 loses nothing.
    """
    if N < 2:
        raise DomainError(f"alpha_statistics needs N >= 2, got {N}")
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise DomainError("alpha must be finite")
    odd = 2.0 * np.arange(N - 1) + 1.0
    x = odd * alpha
    qmax = int(math.ceil(abs(x[-1]) / 2)) + 1
    best = np.inf
    # process q in blocks to bound memory for large N * |alpha|
    for start in range(-qmax, qmax + 1, 4096):
        q = np.arange(start, min(start + 4096, qmax + 1), dtype=float)
        window = np.abs(x[:, None] - 2.0 * q[None, :])
        best = min(best, float(window.min()))
    return best


def alpha_star(alpha) -> float:
    """Large-N limit of alpha_statistics for rational alpha = mu/nu."""
    if isinstance(alpha, tuple):
        alpha = Fraction(*alpha)
    frac = Fraction(alpha)
    mu, nu = frac.numerator, frac.denominator
    return 1.0 / nu if mu % 2 else 0.0


# ---------------------------------------------------------------------------
# covering lemma constants

def covering_constant(d: int, alpha: float, beta: float) -> float:
    """C_{d,alpha,beta} = 2^(d(alpha+beta+1)) / (2^(d alpha) - 1)."""
    if not alpha > 0 or not beta > 0:
        raise DomainError(f"covering constant needs alpha, beta > 0, got {alpha}, {beta}")
    return 2.0 ** (d * (alpha + beta + 1)) / (2.0 ** (d * alpha) - 1)


def weak_b(d: int, alpha: float, q: float, lam: float) -> float:
    """b = 1 - (q/Lambda) 2^(d(alpha+2)) / (2^(d alpha) - 1); may be <= 0."""
    if not alpha > 0:
        raise DomainError(f"weak_b needs alpha > 0, got {alpha}")
    if not lam > 0:
        raise DomainError(f"weak_b needs lambda > 0, got {lam}")
    if q < 0:
        raise DomainError(f"weak_b needs q >= 0, got {q}")
    return 1.0 - (q / lam) * 2.0 ** (d * (alpha + 2)) / (2.0 ** (d * alpha) - 1)
