"""Report records shared by all checkers."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

RELATIONS = (">=", "<=", "==")


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of one numerical inequality check.

    ``relation`` states which way the inequality points. For ">=" the check
    passes iff lhs >= rhs - tolerance * scale with scale = max(|lhs|, |rhs|, 1);
    "<=" is the mirror image and "==" requires |lhs - rhs| <= tolerance * scale.
    """

    name: str
    lhs: float
    rhs: float
    constant_used: float
    ratio: float
    passed: bool
    tolerance: float
    relation: str = ">="
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["type"] = "inequality"
        return out


@dataclass(frozen=True)
class EnergyBoundReport:
    label: str
    value: float
    per_particle: float
    inputs: dict
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["type"] = "energy_bound"
        return out


def _ratio(lhs, rhs):
    if rhs == 0:
        return math.inf if lhs > 0 else (1.0 if lhs == 0 else -math.inf)
    return lhs / rhs


def decide(lhs: float, rhs: float, tol: float, relation: str = ">=", scale=None) -> bool:
    if scale is None:
        scale = max(abs(lhs), abs(rhs), 1.0)
    if relation == ">=":
        return lhs >= rhs - tol * scale
    if relation == "<=":
        return lhs <= rhs + tol * scale
    if relation == "==":
        return abs(lhs - rhs) <= tol * scale
    raise ValueError(f"unknown relation {relation!r}")


def make_report(name, lhs, rhs, constant, tol, relation=">=", scale=None, **details):
    lhs, rhs = float(lhs), float(rhs)
    return InequalityReport(
        name=name, lhs=lhs, rhs=rhs, constant_used=float(constant),
        ratio=_ratio(lhs, rhs), passed=bool(decide(lhs, rhs, tol, relation, scale)),
        tolerance=float(tol), relation=relation, details=details)
