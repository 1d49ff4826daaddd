#!/usr/bin/env python3
"""Approach to the sharp 1D Hardy constant along x^(1/2 + eps) profiles.

The ratio falls only logarithmically with eps and grid size, so this shows
the trend rather than the limit.
"""
import argparse
import math

import numpy as np

from ltverify.grid import BoxGrid, SampledField
from ltverify.inequalities import check_hardy


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, nargs="*", default=[1000, 4000, 16000])
    p.add_argument("--eps", type=float, nargs="*", default=[0.4, 0.2, 0.1, 0.05])
    a = p.parse_args()
    print(f"{'n':>6} {'eps':>6} {'int|u`|^2 / int|u|^2/x^2':>26}")
    for n in a.n:
        g = BoxGrid.centered(1, n, 2.0)
        x = g.axis(0)
        ax = np.abs(x)
        for eps in a.eps:
            delta = 2 * g.h
            ramp = np.clip((ax - delta) / delta, 0, 1)
            u = SampledField(g, ramp * ax ** (0.5 + eps) * np.cos(math.pi * ax / 2))
            rep = check_hardy(u)
            print(f"{n:6d} {eps:6.2f} {rep.ratio * rep.constant_used:26.5f}")
    print("sharp constant 0.25")


if __name__ == "__main__":
    main()
