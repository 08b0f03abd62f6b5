"""Experiment orchestration: the residual study and exact-vs-asymptotic sweeps.

Rows are plain dicts; :func:`write_csv` emits them with a fixed header per
experiment, floats at 15 significant digits and rationals as ``num/den``.
"""

from __future__ import annotations

import csv
import io
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction

from . import regimes
from ._modular import THREADS_ENV
from .errors import AztecError, ParameterError
from .exact_count import count
from .regions import RegionSpec, as_weight

# largest order for which the residual study runs exact counts by default
FEASIBLE_N = 64
FIGURE3_PANELS = ("left", "middle", "right")
FIGURE3_HEADER = ("N", "m", "k", "epsilon", "exact_logF", "predicted_logF", "residual",
                  "N_residual")
SWEEP_HEADER = ("N", "m", "k", "epsilon", "kappa", "regime", "exact_logF", "predicted_logF",
                "residual", "ambiguous", "error")


def nearest_int(x) -> int:
    """Nearest integer with ties to even, evaluated exactly for rational input."""
    return round(Fraction(x))


def format_value(v) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return format(v, ".15g")
    if v is None:
        return ""
    return str(v)


def write_csv(rows, header, stream=None) -> str:
    """CSV text of ``rows`` restricted to ``header``; also written to ``stream`` if given."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(row.get(h)) for h in header])
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def read_csv(text: str) -> list[dict]:
    """Parse CSV produced by :func:`write_csv` back to strings keyed by header."""
    return list(csv.DictReader(io.StringIO(text)))


@dataclass
class ExperimentConfig:
    """Parameter grid of an experiment.

    ``m`` is ``{mu N}``; ``k`` is either fixed or ``{kappa N}``.  ``{x}`` is
    the nearest integer, ties to even.  ``m_values``/``k_values`` of ``None``
    with ``mu``/``k``/``kappa`` also ``None`` mean every admissible value.
    """

    command: str = "figure3"
    N_values: tuple = (12, 40)
    a: str = "0.7845"
    epsilons: tuple = (1,)
    mu: float | None = 0.7
    k: int | None = 3
    kappa: float | None = None
    m_values: tuple | None = None
    k_values: tuple | None = None
    which: str = "left"
    output: str | None = None
    seed: int = 0
    method: str = "auto"
    max_N: int = FEASIBLE_N
    tolerances: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown config keys {sorted(unknown)}", "known keys")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    def Ns(self) -> list[int]:
        vals = list(self.N_values)
        if len(vals) == 2 and self.command == "figure3":
            lo, hi = vals
            return list(range(int(lo), int(hi) + 1))
        return [int(n) for n in vals]

    def weight(self) -> Fraction:
        return as_weight(Fraction(self.a) if isinstance(self.a, str) else self.a)

    def m_for(self, N: int) -> list[int]:
        if self.m_values is not None:
            return [int(m) for m in self.m_values]
        if self.mu is not None:
            return [nearest_int(Fraction(str(self.mu)) * N)]
        return list(range(1, N))

    def k_for(self, N: int, m: int) -> list[int]:
        if self.k_values is not None:
            return [int(k) for k in self.k_values]
        if self.k is not None:
            return [int(self.k)]
        if self.kappa is not None:
            return [nearest_int(Fraction(str(self.kappa)) * N)]
        return list(range(1, m + 2))

    def validate(self) -> None:
        if not self.Ns():
            raise ParameterError("empty N grid", "nonempty grid")
        if not self.epsilons:
            raise ParameterError("empty epsilon list", "nonempty grid")
        self.weight()
        for N in self.Ns():
            ms = self.m_for(N)
            if not ms:
                raise ParameterError(f"empty m grid at N={N}", "nonempty grid")
            for m in ms:
                ks = self.k_for(N, m)
                if not ks:
                    raise ParameterError(f"empty k grid at N={N}, m={m}", "nonempty grid")
                for k in ks:
                    for eps in self.epsilons:
                        RegionSpec.lshape(N, m, k, eps)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    # results come back in grid order regardless of completion order
    items = list(items)
    workers = min(_threads(), max(1, len(items)))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def figure3_parameters(which: str):
    """``(epsilon, k rule)`` of a residual-study panel."""
    if which == "left":
        return 1, {"k": 3}
    if which == "middle":
        return 0, {"k": 3}
    if which == "right":
        return 1, {"kappa": 0.25}
    raise ParameterError(f"panel {which!r} not in {FIGURE3_PANELS}", "left|middle|right")


def figure3_config(which: str, N_min: int = 12, N_max: int = 40, **overrides) -> ExperimentConfig:
    eps, rule = figure3_parameters(which)
    data = dict(command="figure3", N_values=(N_min, N_max), epsilons=(eps,), mu=0.7,
                k=rule.get("k"), kappa=rule.get("kappa"), which=which)
    data.update(overrides)
    return ExperimentConfig.from_dict(data)


def run_figure3(config: ExperimentConfig) -> list[dict]:
    """Exact ``log F_N^{m,k+1}`` against Theorem 1 (left, middle) or Theorem 2 (right).

    ``k`` in the rows is the theorem's ``k``: the counted region is
    ``A_N^{m,k+1}``.  Orders above ``config.max_N`` are dropped with a warning.
    """
    eps = config.epsilons[0]
    Ns = config.Ns()
    kept = [N for N in Ns if N <= config.max_N]
    if len(kept) < len(Ns):
        warnings.warn(f"N > {config.max_N} dropped from the residual study (exact counting "
                      "infeasible)", RuntimeWarning, stacklevel=2)
    a_exact = config.weight()
    a = float(a_exact)

    def one(N):
        m = config.m_for(N)[0]
        k = config.k_for(N, m)[0]
        exact = float(count(RegionSpec.lshape(N, m, k + 1, eps), a_exact, config.method).log_value)
        if config.which == "right":
            pred = regimes.theorem2_logF(N, m, k, eps, a).logF_pred
        else:
            pred = regimes.theorem1_logF(N, m, k, eps, a).logF_pred
        res = exact - pred
        return {"N": N, "m": m, "k": k, "epsilon": eps, "exact_logF": exact,
                "predicted_logF": pred, "residual": res, "N_residual": N * res}

    return _ordered_map(one, kept)


def settles(values) -> bool:
    """Range of the last quarter below the range of the first quarter."""
    values = list(values)
    q = max(2, len(values) // 4)
    first, last = values[:q], values[-q:]
    return max(last) - min(last) < max(first) - min(first)


def run_sweep(config: ExperimentConfig) -> list[dict]:
    """Exact ``log F_N^{m,k}`` against :func:`regimes.regime_dispatch` on a grid.

    Failures at a point are recorded in its ``error`` column.
    """
    config.validate()
    a_exact = config.weight()
    a = float(a_exact)
    points = [(N, m, k, eps) for N in config.Ns() for m in config.m_for(N)
              for k in config.k_for(N, m) for eps in config.epsilons]
    if not points:
        raise ParameterError("empty sweep grid", "nonempty grid")

    def one(point):
        N, m, k, eps = point
        row = {"N": N, "m": m, "k": k, "epsilon": eps, "kappa": k / N}
        try:
            row["exact_logF"] = float(
                count(RegionSpec.lshape(N, m, k, eps), a_exact, config.method).log_value)
        except AztecError as exc:
            row["error"] = f"exact: {exc}"
            return row
        try:
            est = regimes.regime_dispatch(N, m, k, eps, a)
        except AztecError as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            return row
        row.update(regime=est.regime, predicted_logF=est.logF_pred,
                   residual=row["exact_logF"] - est.logF_pred, ambiguous=est.ambiguous)
        if not math.isfinite(row["exact_logF"]):
            row["residual"] = None
        return row

    return _ordered_map(one, points)
