"""Closed-form operation-count models and digital-vs-analog speedup tables.

All formulas count real arithmetic operations. Evaluation is exact rational
arithmetic; CSV rendering rounds to 6 significant digits. The three headline
models:

* estimator:  digital 8(XY^2 + X^2Y + min(X^3, Y^3)/3), analog setup 6XY
* inversion:  digital 8N^3/3, analog setup 4N^2
* filter step: digital 24X^3 + 16X^2Y + 8XY^2 + 8Y^3/3, analog 26X^2 + 12XY

`reconcile` ties a measured CostMeter total back to a formula within a
relative slack plus a fixed additive slack of 16(X+Y) booked operations.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .numerics import CostMeter


@dataclass(frozen=True)
class CostFormula:
    """Named closed-form operation count over one or two size arguments."""

    name: str
    arity: tuple[str, ...]
    evaluator: Callable[..., Fraction]

    def __call__(self, *sizes: int) -> Fraction:
        if len(sizes) != len(self.arity):
            raise ValueError(f"{self.name} takes {len(self.arity)} size argument(s)")
        if any(s < 1 for s in sizes):
            raise ValueError(f"{self.name}: sizes must be >= 1")
        return self.evaluator(*sizes)


def _lmmse_digital(x: int, y: int) -> Fraction:
    return 8 * (Fraction(x) * y * y + Fraction(x) * x * y + Fraction(min(x, y) ** 3, 3))


def _lmmse_analog(x: int, y: int) -> Fraction:
    return Fraction(6 * x * y)


def _inversion_digital(n: int) -> Fraction:
    return Fraction(8 * n**3, 3)


def _inversion_analog(n: int) -> Fraction:
    return Fraction(4 * n * n)


def _kalman_digital(x: int, y: int) -> Fraction:
    return Fraction(24 * x**3 + 16 * x * x * y + 8 * x * y * y) + Fraction(8 * y**3, 3)


def _kalman_analog(x: int, y: int) -> Fraction:
    return Fraction(26 * x * x + 12 * x * y)


FORMULAS: dict[str, tuple[CostFormula, CostFormula]] = {
    "lmmse": (
        CostFormula("lmmse_digital", ("X", "Y"), _lmmse_digital),
        CostFormula("lmmse_analog", ("X", "Y"), _lmmse_analog),
    ),
    "invert": (
        CostFormula("invert_digital", ("N",), _inversion_digital),
        CostFormula("invert_analog", ("N",), _inversion_analog),
    ),
    "kalman": (
        CostFormula("kalman_digital", ("X", "Y"), _kalman_digital),
        CostFormula("kalman_analog", ("X", "Y"), _kalman_analog),
    ),
}


def lmmse_costs(x: int, y: int) -> tuple[Fraction, Fraction]:
    """(digital, analog) real-operation counts for one estimator evaluation."""
    digital, analog = FORMULAS["lmmse"]
    return digital(x, y), analog(x, y)


def inversion_costs(n: int) -> tuple[Fraction, Fraction]:
    """(digital, analog) real-operation counts for one N x N inversion."""
    digital, analog = FORMULAS["invert"]
    return digital(n), analog(n)


def kalman_costs(x: int, y: int) -> tuple[Fraction, Fraction]:
    """(digital, analog) real-operation counts for one filter step."""
    digital, analog = FORMULAS["kalman"]
    return digital(x, y), analog(x, y)


@dataclass(frozen=True)
class SpeedupRow:
    size: int
    digital: Fraction
    analog: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.digital / self.analog


def speedup_table(op: str, sizes: list[int]) -> list[SpeedupRow]:
    """One row per size; square problems (X = Y = size) for two-argument ops."""
    if op not in FORMULAS:
        raise ValueError(f"unknown operation '{op}' (choose from {sorted(FORMULAS)})")
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("sizes must be positive")
    digital, analog = FORMULAS[op]
    rows = []
    for s in sizes:
        args = (s,) * len(digital.arity)
        rows.append(SpeedupRow(s, digital(*args), analog(*args)))
    return rows


CSV_HEADER = ["size", "digital_ops", "milac_ops", "ratio"]


def _sig6(v: Fraction) -> str:
    return f"{float(v):.6g}"


def table_to_csv(rows: list[SpeedupRow]) -> str:
    """Render a speedup table as CSV, newline-terminated, 6 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([row.size, _sig6(row.digital), _sig6(row.analog), _sig6(row.ratio)])
    return buf.getvalue()


def write_table(path: str, rows: list[SpeedupRow]) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(table_to_csv(rows))


def render_figure(path: str, op: str, rows: list[SpeedupRow]) -> None:
    """Render the digital-vs-analog complexity comparison to an image file."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    sizes = [row.size for row in rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    ax.loglog(sizes, [float(r.digital) for r in rows], "o-", label="digital")
    ax.loglog(sizes, [float(r.analog) for r in rows], "s--", label="analog network")
    ax.set_xlabel("problem size")
    ax.set_ylabel("real operations")
    ax.set_title(f"{op}: computational complexity")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


@dataclass(frozen=True)
class ReconcileReport:
    passed: bool
    measured: int
    formula: Fraction
    gap: Fraction
    allowed: Fraction


def reconcile(
    measured: CostMeter | int,
    formula_value: Fraction | int,
    slack_fraction: float,
    size_sum: int,
) -> ReconcileReport:
    """Check a measured total against a formula value.

    Passes when |measured - formula| <= slack_fraction * formula + 16 * size_sum,
    where size_sum is X + Y (or 2N for square problems). slack_fraction must
    lie in (0, 0.25].
    """
    if not 0 < slack_fraction <= 0.25:
        raise ValueError("slack_fraction must be in (0, 0.25]")
    total = measured.total() if isinstance(measured, CostMeter) else int(measured)
    formula = Fraction(formula_value)
    gap = abs(Fraction(total) - formula)
    allowed = Fraction(slack_fraction).limit_denominator(10**9) * formula + 16 * size_sum
    return ReconcileReport(gap <= allowed, total, formula, gap, allowed)
