"""Sweep-curve containers shared by the Monte Carlo engine and evaluators."""

from __future__ import annotations

from dataclasses import dataclass

from . import io as iqio

CURVE_FIELDS = ("ratio_db", "trials", "failures", "rate", "ci_low", "ci_high")


@dataclass(frozen=True)
class SweepRow:
    ratio_db: float
    trials: int
    failures: int
    rate: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class SweepCurve:
    """Rows of (ratio_db, trials, failures, rate, CI bounds), sorted by ratio."""

    rows: tuple

    def __post_init__(self):
        rows = tuple(sorted(self.rows, key=lambda r: r.ratio_db))
        if not rows:
            raise ValueError("a sweep curve needs at least one row")
        for row in rows:
            if not 0.0 <= row.rate <= 1.0:
                raise ValueError(f"rate {row.rate} outside [0, 1]")
        object.__setattr__(self, "rows", rows)

    def ratios(self) -> list[float]:
        return [row.ratio_db for row in self.rows]

    def rates(self) -> list[float]:
        return [row.rate for row in self.rows]

    def write_csv(self, path) -> None:
        iqio.write_csv(
            path,
            CURVE_FIELDS,
            ((r.ratio_db, r.trials, r.failures, r.rate, r.ci_low, r.ci_high) for r in self.rows),
        )


def find_crossing(xs, ys, level: float):
    """First x at which the piecewise-linear curve (xs, ys) reaches `level`.

    Returns xs[0] when the curve starts at or above the level, None when it
    never reaches it.
    """
    if len(xs) != len(ys) or not xs:
        raise ValueError("xs and ys must be equal-length nonempty sequences")
    if ys[0] >= level:
        return float(xs[0])
    for (x0, y0), (x1, y1) in zip(zip(xs, ys), zip(xs[1:], ys[1:])):
        if y0 < level <= y1:
            return float(x0 + (level - y0) / (y1 - y0) * (x1 - x0))
    return None
