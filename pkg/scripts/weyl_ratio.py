#!/usr/bin/env python3
"""Ratio of the exact filled-box energy to its semiclassical value as N grows."""
import argparse

from ltverify.matter import fermi_gas_energy


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--nmax", type=int, default=10 ** 4)
    a = p.parse_args()
    N = 1
    print(f"{'N':>8} {'exact':>14} {'weyl':>14} {'ratio':>9} {'local/exact':>12}")
    while N <= a.nmax:
        exact = fermi_gas_energy(N, 1.0, a.d, a.q).value
        weyl = fermi_gas_energy(N, 1.0, a.d, a.q, "weyl").value
        low = fermi_gas_energy(N, 1.0, a.d, a.q, "local_lower").value
        frac = low / exact if exact else float("nan")
        print(f"{N:8d} {exact:14.6g} {weyl:14.6g} {exact / weyl:9.5f} {frac:12.4f}")
        N *= 2 if N < 16 else 4


if __name__ == "__main__":
    main()
