"""CountReport records and their JSON / CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

FIELDS = ("q", "p", "n", "poly", "method", "count", "main_term", "deviation", "bound", "holds", "elapsed_ms")


def fmt_real(x: float | None) -> float | None:
    """Round to 12 significant digits for stable output."""
    if x is None:
        return None
    if x == 0 or not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


@dataclass
class CountReport:
    q: int
    p: int
    n: int
    poly: str
    method: str
    count: int
    main_term: float
    bound: float | None = None
    holds: bool | None = None
    elapsed: float = 0.0

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be nonnegative")
        if self.bound is not None and self.holds is None:
            self.holds = self.deviation <= self.bound

    @property
    def deviation(self) -> float:
        return abs(self.count - self.main_term)

    def as_dict(self, *, with_elapsed: bool = True) -> dict:
        out = {
            "q": self.q,
            "p": self.p,
            "n": self.n,
            "poly": self.poly,
            "method": self.method,
            "count": int(self.count),
            "main_term": fmt_real(self.main_term),
            "deviation": fmt_real(self.deviation),
            "bound": fmt_real(self.bound),
            "holds": self.holds,
        }
        if with_elapsed:
            out["elapsed_ms"] = round(self.elapsed * 1000.0, 3)
        return out


def emit_report(report: CountReport | list[CountReport], fmt: str = "json", *, with_elapsed: bool = True) -> str:
    reports = report if isinstance(report, list) else [report]
    if fmt == "json":
        rows = [r.as_dict(with_elapsed=with_elapsed) for r in reports]
        return json.dumps(rows[0] if not isinstance(report, list) else rows)
    if fmt == "csv":
        buf = io.StringIO()
        names = FIELDS if with_elapsed else FIELDS[:-1]
        w = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
        w.writeheader()
        for r in reports:
            w.writerow(r.as_dict(with_elapsed=with_elapsed))
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")
