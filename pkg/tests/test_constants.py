import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, strategies as st

from ltverify import constants as C
from ltverify.errors import DomainError


def test_sphere_measure():
    assert C.constant("sphere_measure", 3) == pytest.approx(4 * math.pi, rel=1e-15)
    assert C.constant("sphere_measure", 2) == pytest.approx(2 * math.pi, rel=1e-15)
    assert C.constant("sphere_measure", 1) == pytest.approx(2.0)


def test_quoted_values():
    assert C.constant("sobolev", 3) == pytest.approx(3 * (math.pi / 2) ** (4 / 3), rel=1e-14)
    assert round(C.constant("sobolev", 3), 3) == 5.478
    assert C.constant("sobolev", 1) == 1.0
    assert round(C.constant("gns_lower", 3), 3) == 3.907
    assert C.constant("gns_optimal_known", 1) == pytest.approx(math.pi ** 2 / 4)
    assert C.constant("semiclassical", 1) == pytest.approx(math.pi ** 2 / 3, rel=1e-14)
    assert C.constant("semiclassical", 2) == pytest.approx(2 * math.pi, rel=1e-14)
    assert C.constant("local_uncertainty", 2) == pytest.approx(math.pi ** 2 / 96, rel=1e-14)
    assert round(C.constant("ball_exclusion_xi", 2), 3) == 1.841


def test_semiclassical_3d_high_precision():
    mp.mp.dps = 30
    ref = mp.mpf(3) / 5 * (6 * mp.pi ** 2) ** (mp.mpf(2) / 3)
    assert C.constant("semiclassical", 3) == pytest.approx(float(ref), rel=1e-14)
    assert round(C.constant("semiclassical", 3), 3) == 9.116


def test_semiclassical_matches_phase_space_volume():
    # K^cl = (d/(d+2)) 4 pi^2 / omega_d^(2/d), omega_d = unit-ball volume
    for d in (1, 2, 3, 4):
        omega = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
        ref = d / (d + 2) * 4 * math.pi ** 2 * omega ** (-2 / d)
        assert C.constant("semiclassical", d) == pytest.approx(ref, rel=1e-13)


def test_xi_roots():
    # disk: J_1'(xi) = 0; ball: tan x = 2x/(2-x^2)
    assert abs(float(mp.besselj(1, C.XI_DISK, derivative=1))) < 1e-6
    x = C.XI_BALL
    assert abs(math.tan(x) - 2 * x / (2 - x * x)) < 1e-5


@pytest.mark.parametrize("kind,d", [("sobolev", 2), ("ball_exclusion_xi", 1),
                                    ("ball_exclusion_xi", 4), ("gns_optimal_known", 2)])
def test_unsupported_pairs(kind, d):
    with pytest.raises(DomainError, match=kind):
        C.constant(kind, d)


def test_gns_rigour_flag():
    assert not C.is_rigorous("gns_optimal_known", 3)
    assert C.is_rigorous("gns_optimal_known", 1)
    assert C.is_rigorous("gns_lower", 3)


def test_lt_dual_semiclassical_oracle():
    # L^cl = Gamma(2) / ((4 pi)^(d/2) Gamma(2 + d/2)), independent of K^cl
    for d in (1, 2, 3):
        Lcl = 1 / ((4 * math.pi) ** (d / 2) * math.gamma(2 + d / 2))
        assert C.lt_dual(C.constant("semiclassical", d), d) == pytest.approx(Lcl, rel=1e-13)
    assert round(C.lt_dual(C.constant("semiclassical", 3), 3), 6) == 0.006755


def test_lt_dual_proven_chain():
    L3 = C.lt_dual(C.constant("lt_proven", 3), 3)
    assert L3 == pytest.approx(1 / (15 * math.sqrt(3) * math.pi), rel=1e-13)


def test_lt_dual_errors():
    with pytest.raises(DomainError):
        C.lt_dual(0.0, 3)
    with pytest.raises(DomainError):
        C.lt_dual(1.0, 3, "sideways")


@given(st.floats(1e-6, 1e6), st.integers(1, 3))
def test_lt_dual_round_trip(K, d):
    back = C.lt_dual(C.lt_dual(K, d), d, "L_to_K")
    assert back == pytest.approx(K, rel=1e-12)


def test_alpha_statistics_examples():
    assert C.alpha_statistics(1, 10) == 1
    assert C.alpha_statistics(0, 5) == 0
    assert C.alpha_statistics(0.4, 2) == pytest.approx(0.4)
    with pytest.raises(DomainError):
        C.alpha_statistics(0.5, 1)


def test_alpha_star():
    assert C.alpha_star(Fraction(1, 3)) == pytest.approx(1 / 3)
    assert C.alpha_star(Fraction(2, 3)) == 0
    assert C.alpha_star((2, 6)) == pytest.approx(1 / 3)  # reduced internally
    assert abs(C.alpha_statistics(1 / 3, 1000) - 1 / 3) < 1e-12


def _alpha_brute(alpha, N):
    # independent oracle: wide integer window, plain Python
    best = math.inf
    for p in range(N - 1):
        x = (2 * p + 1) * alpha
        for q in range(int(math.floor(x / 2)) - 3, int(math.ceil(x / 2)) + 4):
            best = min(best, abs(x - 2 * q))
    return best


@given(st.floats(-50, 50, allow_nan=False), st.integers(2, 40))
def test_alpha_statistics_matches_brute_force(alpha, N):
    assert C.alpha_statistics(alpha, N) == pytest.approx(_alpha_brute(alpha, N), abs=1e-12)


@given(st.floats(-20, 20, allow_nan=False), st.integers(2, 60))
def test_alpha_statistics_periodic_and_even(alpha, N):
    v = C.alpha_statistics(alpha, N)
    assert 0 <= v <= 1
    assert C.alpha_statistics(alpha + 2, N) == pytest.approx(v, abs=1e-9)
    assert C.alpha_statistics(-alpha, N) == pytest.approx(v, abs=1e-12)


@given(st.floats(0, 2), st.integers(2, 50))
def test_alpha_statistics_non_increasing_in_N(alpha, N):
    assert C.alpha_statistics(alpha, N + 1) <= C.alpha_statistics(alpha, N) + 1e-15


def test_covering_constants():
    assert C.covering_constant(2, 1, 1) == pytest.approx(64 / 3)
    assert C.weak_b(2, 1, 1, 8 / 3 * 16) == pytest.approx(0.5)
    assert C.weak_b(3, 0.7, 0, 5.0) == 1.0
    with pytest.raises(DomainError):
        C.covering_constant(2, 0, 1)
    with pytest.raises(DomainError):
        C.weak_b(2, 0, 1, 1)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_weak_b_half_at_synthesis_lambda(d):
    # Lambda = (8/3) 4^d q gives b = 1/2 exactly at alpha = 2/d
    for q in (1, 2, 4):
        assert C.weak_b(d, 2 / d, q, 8 / 3 * 4 ** d * q) == pytest.approx(0.5, abs=1e-14)
