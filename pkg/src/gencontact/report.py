"""Residual bookkeeping shared by all checkers."""
from __future__ import annotations

from dataclasses import dataclass, field

from .symkernel import RationalExpr

GENERIC_POINT_NOTE = (
    "All identities are decided in the field of rational functions of the chart "
    "coordinates; verdicts hold on the dense open set where every denominator is nonzero."
)

CONVENTIONS_NOTE = (
    "DL ~ TM + R*1 with (X, f)(lambda) = X(lambda) + f*lambda; Atiyah forms are w0 + e^w1 "
    "with e(X, f) = f; flat(w)(D) = i_D w; <sharp(J)(psi), chi> = J(psi, chi); "
    "integrable contact triple is (0, Omega^-1, -Omega)."
)


def components(obj, prefix: str = "") -> list[tuple[str, RationalExpr]]:
    """Nonzero labelled components of any engine object."""
    if isinstance(obj, RationalExpr):
        return [] if obj.is_zero() else [(prefix or "value", obj)]
    if hasattr(obj, "components"):
        items = obj.components()
    elif hasattr(obj, "items"):
        items = obj.items()
    else:
        raise TypeError(f"no components for {type(obj).__name__}")
    sep = " " if prefix else ""
    return [(f"{prefix}{sep}{label}", val) for label, val in items if not val.is_zero()]


@dataclass
class CheckResult:
    """Outcome of one check: named residuals, each a map from entry label to a nonzero value."""

    name: str
    residuals: dict[str, dict[str, RationalExpr]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def declare(self, residual: str) -> None:
        self.residuals.setdefault(residual, {})

    def add(self, residual: str, obj, where: str = "") -> None:
        bucket = self.residuals.setdefault(residual, {})
        for label, val in components(obj, where):
            bucket[label] = val

    @property
    def passed(self) -> bool:
        return all(not entries for entries in self.residuals.values())

    def residual_passed(self, residual: str) -> bool:
        return not self.residuals.get(residual)

    def failing(self) -> list[str]:
        return [name for name, entries in self.residuals.items() if entries]

    def __bool__(self):
        return self.passed

    def summary(self) -> str:
        if self.passed:
            return f"{self.name}: pass"
        return f"{self.name}: fail ({', '.join(self.failing())})"
