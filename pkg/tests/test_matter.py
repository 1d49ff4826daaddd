import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as si
from scipy.optimize import minimize_scalar

from ltverify import constants as C
from ltverify.errors import DomainError
from ltverify.lieb_thirring import local_exclusion_bound
from ltverify.matter import (MatterConfig, baxter_check, coulomb_energy, extensivity_max_particles,
                             fermi_gas_energy, first_kind_bound, gaussian_trial_energy,
                             gns_hydrogen_minimizer, gns_hydrogen_minimum,
                             harmonic_fermion_energy, hydrogen_bounds,
                             inverse_square_stability_bound, random_config, stability_bound)
from ltverify.rng import trial_generators
from ltverify.spectral import radial_hydrogen_ground
from ltverify.sweeps import run_baxter

PI2 = math.pi ** 2
L3 = C.lt_dual(C.constant("lt_proven", 3), 3)


def test_coulomb_examples():
    assert coulomb_energy(MatterConfig(1, 1, 1, x=[[1, 0, 0]], R=[[0, 0, 0]])) == -1
    assert coulomb_energy(MatterConfig(2, 0, 1, x=[[0, 0, 0], [2, 0, 0]])) == 0.5
    # unit square, electrons and nuclei on alternating corners
    cfg = MatterConfig(2, 2, 1, x=[[0, 0, 0], [1, 1, 0]], R=[[1, 0, 0], [0, 1, 0]])
    assert coulomb_energy(cfg) == pytest.approx(2 / math.sqrt(2) - 4)


def test_coulomb_rejects_coincident_points():
    with pytest.raises(DomainError, match="electron 0 and nucleus 0"):
        coulomb_energy(MatterConfig(1, 1, 1, x=[[0, 0, 0]], R=[[0, 0, 0]]))
    with pytest.raises(DomainError):
        MatterConfig(2, 1, 1, x=[[0, 0, 0]], R=[[1, 0, 0]])
    with pytest.raises(DomainError):
        MatterConfig(0, 1, -1, R=[[1, 0, 0]])


def test_config_json_round_trip():
    cfg = random_config(np.random.default_rng(0), 3, 2, 2.0)
    back = MatterConfig.from_json(cfg.to_json())
    np.testing.assert_array_equal(back.x, cfg.x)
    assert coulomb_energy(back) == coulomb_energy(cfg)


def test_baxter_examples():
    rep = baxter_check(MatterConfig(1, 1, 1, x=[[1, 0, 0]], R=[[0, 0, 0]]))
    assert rep.lhs == -1 and rep.rhs == -3 and rep.passed
    rep = baxter_check(MatterConfig(0, 3, 2, R=np.eye(3)))
    assert rep.passed and rep.rhs > 0


def _baxter_rhs_loop(cfg):
    # plain-loop oracle for the right-hand side
    rhs = 0.0
    for xj in cfg.x:
        rhs -= (2 * cfg.Z + 1) / min(np.linalg.norm(xj - Rk) for Rk in cfg.R)
    for k, Rk in enumerate(cfg.R):
        others = [np.linalg.norm(Rk - Rl) for l, Rl in enumerate(cfg.R) if l != k]
        if others:
            rhs += cfg.Z ** 2 / 4 / min(others)
    return rhs


@given(st.integers(0, 2 ** 32 - 1))
def test_baxter_rhs_oracle(seed):
    rng = np.random.default_rng(seed)
    cfg = random_config(rng, int(rng.integers(0, 6)), int(rng.integers(1, 6)), 2.0)
    assert baxter_check(cfg).rhs == pytest.approx(_baxter_rhs_loop(cfg), rel=1e-12)


def test_baxter_sweep():
    assert all(r.passed for r in run_baxter(2000, 17))


def test_hydrogen_bounds():
    hb = hydrogen_bounds(1.0)
    assert hb["exact"] == -0.25 and hb["hardy"] == -1.0
    assert hb["gns_fallback"] == pytest.approx(-0.6)
    assert hb["gns"] == pytest.approx(-0.3431554, rel=1e-6)
    assert not hb["gns_rigorous"]
    assert hb["hardy"] <= hb["gns_fallback"] <= hb["gns"] <= hb["exact"]
    assert radial_hydrogen_ground(1.0, 40, 4000) == pytest.approx(hb["exact"], rel=0.01)
    with pytest.raises(DomainError):
        hydrogen_bounds(0.0)


def test_gns_hydrogen_minimum_independent():
    # minimize G int rho^(5/3) - Z int rho/|x| over the profile family from the
    # Euler-Lagrange equation, rescaled to unit mass, by 1D quadrature
    Z, G = 1.3, 9.578

    def energy(R):
        shape = lambda r: np.clip(1 / r - 1 / R, 0, None) ** 1.5
        mass = si.quad(lambda r: 4 * math.pi * r * r * shape(r), 0, R)[0]
        p53 = si.quad(lambda r: 4 * math.pi * r * r * shape(r) ** (5 / 3), 0, R)[0]
        coul = si.quad(lambda r: 4 * math.pi * r * shape(r), 0, R)[0]
        return G * p53 / mass ** (5 / 3) - Z * coul / mass

    best = minimize_scalar(energy, bounds=(0.5, 50), method="bounded",
                           options={"xatol": 1e-10})
    assert gns_hydrogen_minimum(Z, G) == pytest.approx(best.fun, rel=1e-8)


def test_gns_hydrogen_minimizer():
    Z, G = 1.0, 9.578
    rho, R = gns_hydrogen_minimizer(Z, G)
    mass = si.quad(lambda r: 4 * math.pi * r * r * rho(r), 0, R)[0]
    energy = si.quad(lambda r: 4 * math.pi * r * r * (G * rho(r) ** (5 / 3) - Z * rho(r) / r),
                     0, R, limit=200)[0]
    assert mass == pytest.approx(1.0, rel=1e-8)
    assert energy == pytest.approx(gns_hydrogen_minimum(Z, G), rel=1e-7)


def test_stability_coefficient():
    rep = stability_bound(10, 10, 1.0, 1, 1.0, L3)
    assert rep.details["coefficient"] == pytest.approx(1.073, rel=5e-3)
    assert rep.value == pytest.approx(-rep.details["coefficient"] * 9 * 20)
    assert rep.per_particle * 20 == pytest.approx(rep.value, rel=1e-12)
    two = stability_bound(10, 10, 1.0, 2, 1.0, L3)
    assert two.value / rep.value == pytest.approx(2 ** (2 / 3), rel=1e-12)
    # sharp form never below the linear form
    assert rep.details["sharp_value"] >= rep.value
    with pytest.raises(DomainError):
        stability_bound(0, 1, 1.0, 1, 1.0, L3)


@given(st.integers(1, 1000), st.integers(1, 1000))
def test_stability_linear_in_particles(N, M):
    a = stability_bound(N, M, 1.0, 1, 1.0, L3)
    assert a.value / (N + M) == pytest.approx(stability_bound(1, 1, 1.0, 1, 1.0, L3).value / 2)


def test_inverse_square_matches_fermionic():
    a = stability_bound(5, 3, 2.0, 2, 1.5, L3)
    b = inverse_square_stability_bound(5, 3, 2.0, 1.5, 1.0, 2 * L3)
    assert a.value == pytest.approx(b.value, rel=1e-14)
    with pytest.raises(DomainError):
        inverse_square_stability_bound(5, 3, 2.0, 1.5, 0.0, L3)


def test_gaussian_trial_energy_against_quadrature():
    # one electron, one nucleus: <-Delta/2m> + <-Z/|x-R|> for phi^2 = N(x0, s^2)
    s, Z, m, D = 0.7, 2.0, 1.3, 0.9
    cfg = MatterConfig(1, 1, Z, m=m, x=[[D, 0, 0]], R=[[0, 0, 0]])
    # radial average of 1/|x| over a Gaussian centred at distance D
    dens = lambda r: (r / (D * s * math.sqrt(2 * math.pi))) * (
        math.exp(-(r - D) ** 2 / (2 * s * s)) - math.exp(-(r + D) ** 2 / (2 * s * s)))
    avg_inv = si.quad(lambda r: dens(r) / r, 0, np.inf)[0]
    ref = 3 / (8 * m * s * s) - Z * avg_inv
    assert gaussian_trial_energy(cfg, s) == pytest.approx(ref, rel=1e-9)


def test_first_kind_bound_on_trial_states():
    for rng in trial_generators(21, 300):
        N, M = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        cfg = MatterConfig(N, M, float(rng.choice([1, 2])), m=rng.uniform(0.5, 2),
                           x=rng.uniform(0, 2, (N, 3)), R=rng.uniform(0, 2, (M, 3)))
        widths = rng.uniform(0.05, 2, N)
        assert gaussian_trial_energy(cfg, widths) >= first_kind_bound(cfg)


def test_fermi_gas_examples():
    exact = fermi_gas_energy(100, 1.0, 1, 1).value
    weyl = fermi_gas_energy(100, 1.0, 1, 1, "weyl").value
    assert exact / weyl == pytest.approx(99 * 199 / (2 * 100 ** 2), abs=1e-12)
    assert fermi_gas_energy(3, 1.0, 1).value == pytest.approx(5 * PI2)
    assert fermi_gas_energy(4, 1.0, 1, 2).value == pytest.approx(2 * PI2)
    with pytest.raises(DomainError):
        fermi_gas_energy(3, 1.0, 1, mode="guess")


def test_fermi_ratio_monotone_1d():
    r = [fermi_gas_energy(N, 1.0, 1).value / fermi_gas_energy(N, 1.0, 1, 1, "weyl").value
         for N in range(10, 200)]
    assert all(a < b for a, b in zip(r, r[1:])) and r[-1] < 1


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_local_lower_below_exact(d, q):
    for N in (1, 2, 3, 7, 20, 64, 150):
        exact = fermi_gas_energy(N, 1.7, d, q).value
        low = fermi_gas_energy(N, 1.7, d, q, "local_lower").value
        assert low <= exact + 1e-12
        if exact > 0:
            assert 0 <= low / exact <= 1


def test_local_lower_equals_partition_sum():
    # uniform density of N on the unit cube split into M^d subcubes
    for d, N, q in ((1, 40, 1), (2, 300, 2), (3, 900, 1)):
        rep = fermi_gas_energy(N, 1.0, d, q, "local_lower")
        Ms = rep.details["M_side"]
        total = Ms ** d * local_exclusion_bound(N / Ms ** d, Ms ** -d, d, q).bound
        assert total == pytest.approx(rep.value, rel=1e-12)


def test_harmonic_fermions():
    assert harmonic_fermion_energy(3, 2, 1.0) == pytest.approx(5.0)
    assert harmonic_fermion_energy(1, 2, 2.0) == pytest.approx(2.0)
    assert harmonic_fermion_energy(4, 1, 1.0) == pytest.approx(8.0)
    with pytest.raises(DomainError, match="3 and 6"):
        harmonic_fermion_energy(4, 2, 1.0)


def test_harmonic_fermions_level_fill():
    # 2D oscillator levels omega (k+1), degeneracy k+1
    levels = sorted(k + 1 for k in range(12) for _ in range(k + 1))
    for n in range(1, 10):
        N = n * (n + 1) // 2
        assert harmonic_fermion_energy(N, 2, 1.0) == pytest.approx(sum(levels[:N]))


def test_extensivity():
    assert extensivity_max_particles(2.5, 10.0, 1.0, 7) == pytest.approx(7)
    assert extensivity_max_particles(1.0, 1.0, 1e-300, 5) < 1e-100
    with pytest.raises(DomainError):
        extensivity_max_particles(1.0, 1.0, 0.0, 5)


def test_extensivity_holder_oracle():
    # rho^(5/3) integral <= 4cN/K3 forces int_A rho <= (int rho^(5/3))^(3/5) |A|^(2/5)
    rng = np.random.default_rng(3)
    for _ in range(100):
        N, K3 = int(rng.integers(1, 50)), rng.uniform(1, 10)
        n_cells = 1000
        rho = rng.gamma(0.5, size=n_cells)
        rho *= N / rho.sum()  # cells of unit volume
        c = K3 * np.sum(rho ** (5 / 3)) / (4 * N)  # saturates the energy budget
        eps = rng.uniform(0.01, 1)
        k = max(1, int(eps * N))
        worst = np.sort(rho)[::-1][:k].sum()
        assert worst <= extensivity_max_particles(c, K3, k / N, N) * (1 + 1e-12)
