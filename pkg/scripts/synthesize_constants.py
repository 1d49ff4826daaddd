#!/usr/bin/env python3
"""Table of LT constants from the local-uncertainty/exclusion synthesis
next to the semiclassical and proven values."""
import argparse

from ltverify import constants as C
from ltverify.lieb_thirring import synthesize_blt_improved, synthesize_lt_constant


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--beta", type=float, nargs="*", default=[0.1, 1.0, 10.0],
                   help="boson exclusion strengths for the bosonic table")
    a = p.parse_args()
    print(f"{'d':>2} {'q':>2} {'K_syn':>10} {'K_proven':>10} {'K_cl':>10} {'K_syn/K_cl':>10} "
          f"{'Lambda':>9} {'eps':>7}")
    for d in (1, 2, 3):
        for q in (1, 2, 4):
            s = synthesize_lt_constant(d, q)
            Kcl = C.constant("semiclassical", d) * q ** (-2 / d)
            print(f"{d:2d} {q:2d} {s.K:10.3e} {C.constant('lt_proven', d) * q ** (-2 / d):10.5f} "
                  f"{Kcl:10.5f} {s.K / Kcl:10.3e} {s.lam:9.4f} {s.eps_outer:7.4f}")
    print()
    print(f"{'d':>2} {'beta':>6} {'K_boson':>10} {'K_improved':>11}")
    for d in (1, 2, 3):
        for beta in a.beta:
            s = synthesize_lt_constant(d, exclusion="boson_stupid", beta=beta)
            imp = synthesize_blt_improved(d, beta, points=60, lam_points=60)
            print(f"{d:2d} {beta:6.2f} {s.K:10.3e} {imp.K:11.3e}")


if __name__ == "__main__":
    main()
