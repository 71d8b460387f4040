"""T(sigma) tables and their CSV form."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidArgumentError

COLUMNS = ("sigma", "T", "Tprime", "b_final", "n_final", "newton_residual", "provenance")
PROVENANCES = ("computed", "asymptotic", "spline")


def fmt(x) -> str:
    """17 significant digits, scientific; empty for missing values."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{float(x):.16e}"


@dataclass(frozen=True)
class TSample:
    sigma: float
    T: float
    Tprime: float | None = None
    provenance: str = "computed"
    b_final: float | None = None
    n_final: int | None = None
    newton_residual: float | None = None
    error: str | None = None

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise InvalidArgumentError(f"unknown provenance {self.provenance!r}")

    @property
    def ok(self):
        return self.error is None and math.isfinite(self.T)


@dataclass
class TTable:
    samples: list = field(default_factory=list)

    def __post_init__(self):
        s = self.sigmas
        if s.size and np.any(np.diff(s) <= 0):
            raise InvalidArgumentError("table radii must be strictly increasing")

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, i):
        return self.samples[i]

    @property
    def sigmas(self):
        return np.array([s.sigma for s in self.samples], dtype=float)

    @property
    def T(self):
        return np.array([s.T for s in self.samples], dtype=float)

    @property
    def Tprime(self):
        return np.array([math.nan if s.Tprime is None else s.Tprime for s in self.samples])

    @property
    def grid_meta(self):
        s = self.sigmas
        return (float(s[0]), float(s[-1]), len(s)) if s.size else (math.nan, math.nan, 0)

    @property
    def failures(self):
        return [s for s in self.samples if not s.ok]

    def with_tprime(self, values) -> "TTable":
        return TTable([replace(s, Tprime=float(v)) for s, v in zip(self.samples, values)])

    def select(self, mask) -> "TTable":
        return TTable([s for s, m in zip(self.samples, mask) if m])

    # -- csv ------------------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for s in self.samples:
            w.writerow([fmt(s.sigma), fmt(s.T), fmt(s.Tprime), fmt(s.b_final),
                        "" if s.n_final is None else str(s.n_final),
                        fmt(s.newton_residual), s.provenance])
        return buf.getvalue()

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())

    @classmethod
    def from_csv(cls, text: str) -> "TTable":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or not {"sigma", "T"} <= set(reader.fieldnames):
            raise InvalidArgumentError("table needs at least sigma and T columns")

        def num(v, conv=float):
            return None if v in (None, "") else conv(v)

        rows = []
        for i, rec in enumerate(reader, start=2):
            try:
                T = num(rec["T"])
                rows.append(TSample(
                    float(rec["sigma"]), math.nan if T is None else T,
                    Tprime=num(rec.get("Tprime")),
                    provenance=rec.get("provenance") or "computed",
                    b_final=num(rec.get("b_final")),
                    n_final=num(rec.get("n_final"), int),
                    newton_residual=num(rec.get("newton_residual")),
                    error=None if T is not None else "missing T"))
            except (TypeError, ValueError) as exc:
                raise InvalidArgumentError(f"line {i}: {exc}") from exc
        return cls(rows)

    @classmethod
    def read_csv(cls, path) -> "TTable":
        with open(path, newline="") as fh:
            return cls.from_csv(fh.read())
