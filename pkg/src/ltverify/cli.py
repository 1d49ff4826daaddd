"""Command-line front end.

    ltverify constants --kind semiclassical --d 2
    ltverify check --hardy --d 3 --trials 100 --seed 7
    ltverify matter --stability --N 10 --M 10 --Z 1 --q 2

Every command writes one JSON report ({manifest, reports, summary}) to
--out (stdout by default). Exit status: 0 when every check passed, 2 on a
violation, 1 on a usage or domain error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from importlib import metadata

from . import constants as C
from .errors import DomainError, PreconditionError, RefinementError, PartitionError
from .lieb_thirring import (OrbitalSet, kinetic_form_check, synthesize_blt_improved,
                           synthesize_lt_constant)
from .inequalities import GLOBAL_TOL
from .matter import fermi_gas_energy, hydrogen_bounds, stability_bound
from .reports import make_report
from .rng import trial_generators
from .sampling import random_orbitals
from .spectral import radial_hydrogen_ground
from .sweeps import (CHECKS, CoverConfig, SweepConfig, run_baxter, run_cover, run_sweep)
from .grid import BoxGrid, DIRICHLET

COMMANDS = ("constants", "check", "cover", "lt", "fermi", "matter", "all")
# chain for the stability coefficient: L3 from the proven kinetic constant
L3_DEFAULT = C.lt_dual(C.constant("lt_proven", 3), 3)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def report_schema() -> dict:
    """The published JSON schema every report validates against."""
    from importlib import resources
    return json.loads(resources.files(__package__).joinpath("report_schema.json").read_text())


def version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0.1.0"


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ltverify", description="Numerical checks of uncertainty and "
                "exclusion inequalities, Lieb-Thirring constants and stability bounds.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--side", type=float, default=1.0)
    p.add_argument("--bc", choices=("dirichlet", "neumann"), default=None,
                   help="grid for single-field checks and lt (Hardy, Poincare and "
                   "many-body pick their own)")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--Z", type=float, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--out", default=None, help="JSON report path (stdout if omitted)")
    p.add_argument("--csv", default=None, help="flat table of the reports")
    p.add_argument("--kind", default=None, help="constant kind (constants command)")
    p.add_argument("--variant", default=None, help="Hardy or many-body variant")
    for name in CHECKS:
        p.add_argument(f"--{name.replace('_', '-')}", dest=f"sel_{name}", action="store_true")
    for name in ("stability", "baxter", "hydrogen"):
        p.add_argument(f"--{name}", dest=f"sel_{name}", action="store_true")
    return p


# ---------------------------------------------------------------------------
# commands; each returns a list of report dicts

def _constant_entry(kind, d, value, **details) -> dict:
    return {"type": "constant", "kind": kind, "d": d, "value": value, "details": details}


def cmd_constants(a) -> list:
    kinds = [a.kind] if a.kind else [k.value for k in C.ConstantKind]
    dims = [a.d] if a.d else [1, 2, 3]
    out = []
    for kind in kinds:
        try:
            C.ConstantKind(kind)
        except ValueError:
            raise DomainError(f"unknown constant kind {kind!r}") from None
        for d in dims:
            try:
                value = C.constant(kind, d)
            except DomainError:
                if a.kind and a.d:
                    raise
                continue
            out.append(_constant_entry(kind, d, value, rigorous=C.is_rigorous(kind, d)))
    return out


def _selected_checks(a) -> list:
    picked = [c for c in CHECKS if getattr(a, f"sel_{c}")]
    if picked:
        return picked
    d = a.d or 1
    keep = []
    for c in CHECKS:
        if c == "sobolev" and d not in (1, 3):
            continue
        if c == "poincare" and d != 1:
            continue
        if c == "manybody" and d > 2:
            continue
        keep.append(c)
    return keep


def cmd_check(a) -> list:
    d = a.d or 1
    trials = 10 if a.trials is None else a.trials
    out = []
    for c in _selected_checks(a):
        variant = a.variant if c in ("hardy", "manybody") else None
        cfg = SweepConfig(c, d, a.n, variant, a.N or 2, trials, a.seed,
                          tol=_tol(a), side=a.side, bc=a.bc or DIRICHLET)
        out.extend(r.to_dict() for r in run_sweep(cfg))
    return out


def _tol(a):
    return GLOBAL_TOL if a.tol is None else a.tol


def cmd_cover(a) -> list:
    cfg = CoverConfig(a.d, a.lam, a.alpha, a.beta, None, a.q,
                      10 if a.trials is None else a.trials, a.seed,
                      1e-12 if a.tol is None else a.tol)
    return [s.to_dict() for s in run_cover(cfg)]


def cmd_lt(a) -> list:
    d = a.d or 1
    q = a.q or 1
    if a.beta is not None:
        syn = synthesize_lt_constant(d, exclusion="boson_stupid", beta=a.beta)
        improved = synthesize_blt_improved(d, a.beta, points=60, lam_points=60)
        out = [_constant_entry("synthesized_blt", d, syn.K, beta=a.beta, L=syn.L(),
                               lam=syn.lam, eps=syn.eps_outer, eps_inner=syn.eps_inner),
               _constant_entry("synthesized_blt_improved", d, improved.K, beta=a.beta,
                               heuristic=True, lam=improved.lam)]
        return out
    syn = synthesize_lt_constant(d, q)
    out = [_constant_entry("synthesized_lt", d, syn.K, q=q, L=syn.L(), lam=syn.lam,
                           eps=syn.eps_outer, eps_inner=syn.eps_inner, b=syn.b,
                           proven=C.constant("lt_proven", d))]
    n = a.n or {1: 128, 2: 40, 3: 16}.get(d, 12)
    grid = BoxGrid.centered(d, n, a.side, a.bc or DIRICHLET)
    trials = 10 if a.trials is None else a.trials
    tol = _tol(a)
    for i, rng in enumerate(trial_generators(a.seed, trials)):
        orbs = OrbitalSet(random_orbitals(grid, int(rng.integers(1, 7)), rng))
        rep = kinetic_form_check(orbs, syn.K, tol)
        rep.details.update(trial=i, q=q)
        out.append(rep.to_dict())
    return out


def cmd_fermi(a) -> list:
    d = a.d or 1
    N = a.N or 100
    q = a.q or 1
    vol = a.side ** d
    exact = fermi_gas_energy(N, vol, d, q, "exact_fill")
    weyl = fermi_gas_energy(N, vol, d, q, "weyl")
    local = fermi_gas_energy(N, vol, d, q, "local_lower")
    out = [r.to_dict() for r in (exact, weyl, local)]
    out[0]["details"]["weyl_ratio"] = exact.value / weyl.value
    out.append(make_report("fermi_local_lower", exact.value, local.value, math.pi ** 2,
                           1e-12, N=N, d=d, q=q).to_dict())
    return out


def cmd_matter(a) -> list:
    sel = [s for s in ("stability", "baxter", "hydrogen") if getattr(a, f"sel_{s}")]
    sel = sel or ["stability", "baxter", "hydrogen"]
    Z = 1.0 if a.Z is None else a.Z
    out = []
    if "stability" in sel:
        rep = stability_bound(a.N or 10, a.M or 10, Z, a.q or 1, a.m, L3_DEFAULT)
        out.append(rep.to_dict())
    if "baxter" in sel:
        trials = 100 if a.trials is None else a.trials
        out.extend(r.to_dict() for r in run_baxter(trials, a.seed, a.N, a.M, a.Z,
                                                   1e-9 if a.tol is None else a.tol))
    if "hydrogen" in sel:
        hb = hydrogen_bounds(Z)
        rmax = 40.0 / Z
        numeric = radial_hydrogen_ground(Z, rmax, a.n or 4000)
        out.append(make_report("hydrogen_numeric", numeric, hb["exact"], Z, 1e-2, "==",
                               scale=abs(hb["exact"]), rmax=rmax).to_dict())
        out.append(make_report("hydrogen_hardy", hb["exact"], hb["hardy"], Z, 1e-12).to_dict())
        out.append(make_report("hydrogen_gns_fallback", hb["exact"], hb["gns_fallback"],
                               C.constant("sobolev", 3), 1e-12).to_dict())
        out.append(make_report("hydrogen_gns", hb["exact"], hb["gns"],
                               C.constant("gns_optimal_known", 3), 1e-12,
                               rigorous=hb["gns_rigorous"]).to_dict())
    return out


def cmd_all(a) -> list:
    out = []
    for name in ("constants", "check", "cover", "lt", "fermi", "matter"):
        out.extend(HANDLERS[name](a))
    return out


HANDLERS = {"constants": cmd_constants, "check": cmd_check, "cover": cmd_cover,
            "lt": cmd_lt, "fermi": cmd_fermi, "matter": cmd_matter, "all": cmd_all}


# ---------------------------------------------------------------------------
# report assembly

def _clean(x):
    """Make a value strict-JSON safe: non-finite floats become strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def assemble(command: str, params: dict, seed: int, reports: list) -> dict:
    checked = [r for r in reports if "passed" in r]
    passed = sum(1 for r in checked if r["passed"])
    return _clean({"manifest": {"command": command, "parameters": params, "seed": seed,
                                "version": version()},
                   "reports": reports,
                   "summary": {"total": len(checked), "passed": passed,
                               "failed": len(checked) - passed}})


CSV_FIELDS = ("type", "name", "lhs", "rhs", "ratio", "passed", "value", "kind", "d")


def write_csv(path, reports: list):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore")
        w.writeheader()
        for r in reports:
            row = dict(r)
            row.setdefault("name", r.get("label", r.get("kind", "")))
            w.writerow(row)


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.seed < 0 or a.seed >= 2 ** 64:
        parser.error("--seed must be a 64-bit unsigned integer")
    if a.trials is not None and a.trials < 0:
        parser.error("--trials must be non-negative")
    if a.tol is not None and not a.tol >= 0:
        parser.error("--tol must be non-negative")
    params = {k: v for k, v in sorted(vars(a).items())
              if k not in ("command", "seed", "out", "csv") and v not in (None, False)}
    try:
        reports = HANDLERS[a.command](a)
    except (DomainError, PreconditionError, RefinementError, PartitionError) as exc:
        print(f"ltverify: error: {exc}", file=sys.stderr)
        return 1
    doc = assemble(a.command, params, a.seed, reports)
    text = json.dumps(doc, indent=1, allow_nan=False)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if a.csv:
        write_csv(a.csv, doc["reports"])
    s = doc["summary"]
    print(f"ltverify {a.command}: {s['passed']}/{s['total']} passed", file=sys.stderr)
    return 2 if s["failed"] else 0


if __name__ == "__main__":
    sys.exit(main())
