"""Random test fields for the randomized inequality sweeps.

All generators take a numpy ``Generator`` and return fields satisfying the
preconditions of the corresponding checker.
"""
from __future__ import annotations

import math

import numpy as np

from .grid import DIRICHLET, BoxGrid, SampledField, density_from_orbitals, inner_product
from .inequalities import EXCLUSION_CELLS, ManyBodyField


def _smoothstep(t):
    t = np.clip(t, 0.0, 1.0)
    return t * t * (3 - 2 * t)


def envelope(grid: BoxGrid) -> np.ndarray:
    """Product of sines vanishing on the box boundary."""
    out = np.ones(grid.shape)
    for k, x in enumerate(grid.mesh()):
        out = out * np.sin(math.pi * (x - grid.origin[k]) / grid.side)
    return np.abs(out)


def bump_sum(grid: BoxGrid, rng, bumps: int = None, complex_valued: bool = False) -> np.ndarray:
    """Random linear combination of Gaussians with random centres and widths."""
    bumps = bumps or int(rng.integers(1, 5))
    mesh = grid.mesh()
    out = np.zeros(grid.shape, dtype=complex if complex_valued else float)
    for _ in range(bumps):
        c = [o + grid.side * rng.uniform(0.2, 0.8) for o in grid.origin]
        w = grid.side * rng.uniform(0.06, 0.3)
        r2 = sum((x - ck) ** 2 for x, ck in zip(mesh, c))
        amp = rng.normal()
        if complex_valued:
            amp = amp + 1j * rng.normal()
            k = rng.normal(size=grid.d) * 3 / grid.side
            amp = amp * np.exp(1j * sum(kk * x for kk, x in zip(k, mesh)))
        out = out + amp * np.exp(-r2 / (2 * w * w))
    return out


def random_field(grid: BoxGrid, rng, complex_valued: bool = False) -> SampledField:
    """Smooth random field vanishing on the boundary."""
    vals = bump_sum(grid, rng, complex_valued=complex_valued) * envelope(grid)
    if not np.any(vals):
        vals = envelope(grid)
    return SampledField(grid, vals)


def random_neumann_field(grid: BoxGrid, rng) -> SampledField:
    """Smooth random field with no boundary condition (low cosine modes plus bumps)."""
    vals = bump_sum(grid, rng)
    for k, x in enumerate(grid.mesh()):
        for m in range(1, 4):
            vals = vals + rng.normal() / m * np.cos(m * math.pi * (x - grid.origin[k]) / grid.side)
    return SampledField(grid, vals + rng.normal())


def random_hardy_field(grid: BoxGrid, rng, variant: str) -> SampledField:
    """Random field obeying the support/symmetry precondition of ``check_hardy``."""
    r = np.sqrt(sum(x ** 2 for x in grid.mesh()))
    base = bump_sum(grid, rng, complex_valued=bool(rng.integers(0, 2))) * envelope(grid)
    zone = EXCLUSION_CELLS * grid.h
    ramp = 2 * grid.h + grid.side * rng.uniform(0.02, 0.15)
    cut = _smoothstep((r - zone) / ramp)
    if variant == "log2d":
        cut = cut * _smoothstep((np.abs(r - 1) - zone) / ramp)
    vals = base * cut
    if variant == "antipodal":
        flip = (slice(None, None, -1),) * grid.d
        vals = base - base[flip]
        vals = 0.5 * (vals - vals[flip])
    if not np.any(vals):
        vals = cut * envelope(grid)
    return SampledField(grid, vals)


def random_mode_field(grid: BoxGrid, rng, kmax: int, complex_valued: bool = False,
                      ) -> SampledField:
    """Random combination of the sine modes with wave numbers up to ``kmax`` per axis,
    coefficients decaying like 1/|k|, times a random bump."""
    mesh = grid.mesh()
    out = np.zeros(grid.shape, dtype=complex if complex_valued else float)
    for ks in np.ndindex(*([kmax] * grid.d)):
        k = np.array(ks) + 1
        coef = rng.normal() / np.linalg.norm(k)
        if complex_valued:
            coef = coef + 1j * rng.normal() / np.linalg.norm(k)
        mode = np.ones(grid.shape)
        for a, x in enumerate(mesh):
            mode = mode * np.sin(k[a] * math.pi * (x - grid.origin[a]) / grid.side)
        out = out + coef * mode
    if rng.integers(0, 2):
        out = out * (1 + np.abs(bump_sum(grid, rng)))
    return SampledField(grid, out)


def random_orbitals(grid: BoxGrid, N: int, rng, complex_valued: bool = False) -> list:
    """N random fields vanishing on the boundary, orthonormalized (Loewdin)."""
    kmax = int(math.ceil((N + 4) ** (1 / grid.d))) + int(rng.integers(0, 3))
    fields = [random_mode_field(grid, rng, kmax, complex_valued) for _ in range(N)]
    return orthonormalize(fields)


def orthonormalize(fields: list) -> list:
    """Symmetric (Loewdin) orthonormalization in the grid inner product."""
    N = len(fields)
    G = np.array([[inner_product(a, b) for b in fields] for a in fields])
    evals, evecs = np.linalg.eigh(G)
    if evals.min() <= 1e-12 * evals.max():
        raise ValueError("fields are linearly dependent")
    S = evecs @ np.diag(evals ** -0.5) @ evecs.conj().T
    stack = np.stack([f.values for f in fields], axis=0)
    cplx = np.iscomplexobj(stack) or np.iscomplexobj(S)
    out = np.tensordot(S.T, stack, axes=1)
    if not cplx:
        out = out.real
    return [SampledField(fields[0].grid, out[j]) for j in range(N)]


def random_density(grid: BoxGrid, rng):
    return density_from_orbitals(random_orbitals(grid, int(rng.integers(1, 4)), rng))


# ---------------------------------------------------------------------------
# many-body

def _outer(vectors):
    out = vectors[0]
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return out


def slater(grid: BoxGrid, one_body: list) -> ManyBodyField:
    """Antisymmetrized product of N one-body arrays on ``grid``."""
    import itertools
    N = len(one_body)
    total = 0.0
    for perm in itertools.permutations(range(N)):
        sign = np.linalg.det(np.eye(N)[list(perm)])
        total = total + sign * _outer([one_body[p] for p in perm])
    return ManyBodyField(grid, N, total, "antisymmetric")


def random_fermionic_field(grid: BoxGrid, N: int, rng) -> ManyBodyField:
    ones = [random_field(grid, rng).values for _ in range(N)]
    return slater(grid, ones)


def random_onedim_field(grid: BoxGrid, N: int, rng) -> ManyBodyField:
    """phi(x_1)...phi(x_N) times a smooth cutoff vanishing near every diagonal."""
    if grid.d != 1:
        raise ValueError("onedim fields need d=1")
    phis = [random_field(grid, rng).values for _ in range(N)]
    vals = _outer(phis)
    x = grid.axis(0)
    zone = EXCLUSION_CELLS * grid.h
    ramp = 2 * grid.h + grid.side * rng.uniform(0.02, 0.2)
    shape = grid.shape * N
    for j in range(N):
        for k in range(j + 1, N):
            sj = [1] * N
            sk = [1] * N
            sj[j] = sk[k] = -1
            r = np.abs(x.reshape(sj) - x.reshape(sk))
            vals = vals * np.broadcast_to(_smoothstep((r - zone) / ramp), shape)
    sym = "none"
    if N == 2 and rng.integers(0, 2):
        vals = vals - vals.T
        sym = "antisymmetric"
    return ManyBodyField(grid, N, vals, sym)
