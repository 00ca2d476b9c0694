"""Desk-scale experiments: coefficient growth, method comparison, error curves."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import DEFAULT_POLICY, Scalar, ceil_digits_to_bits, ceil_log2, parse_rational
from .coefficients import coeffs_closed_form, coeffs_l1_norm
from .errors import InvalidConfig, SuperoscError
from .grids import Family, FrequencyGrid, grid_uniform_linear, make_grid
from .signals import Kind, SignalSpec, classic_fn, classic_yn, error_vs_limit, eval, local_frequency, taylor_check

OUTPUTS = ("coeff_growth", "taylor_residuals", "error_curve", "local_freq", "method_compare")
DIGITS = 30


def default_x_samples(count=101, lo=-1, hi=1):
    return tuple(Fraction(lo) + Fraction(hi - lo) * k / (count - 1) for k in range(count))


@dataclass(frozen=True)
class SweepConfig:
    n_values: tuple
    a: Fraction
    family: Family = Family.UNIFORM
    params: dict = field(default_factory=dict, hash=False)
    x_samples: tuple = field(default_factory=default_x_samples)
    bits: int = 128
    outputs: tuple = OUTPUTS
    m: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "a", parse_rational(self.a))
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "x_samples", tuple(parse_rational(x) for x in self.x_samples))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        ns = self.n_values
        if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
            raise InvalidConfig(f"n_values must be non-empty and strictly increasing, got {list(ns)}")
        if ns[0] < 1:
            raise InvalidConfig("n_values must be >= 1")
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown:
            raise InvalidConfig(f"unknown outputs: {sorted(unknown)}")
        if self.family is Family.CUSTOM:
            raise InvalidConfig("sweeps need a grid family, not custom nodes")
        if self.bits < 8:
            raise InvalidConfig("bits must be >= 8")

    def grid(self, n: int) -> FrequencyGrid:
        return make_grid(self.family, n, self.params.get("p"))


def load_sweep_config(doc) -> SweepConfig:
    """Build a config from a dict or a JSON file path."""
    if not isinstance(doc, dict):
        with open(doc) as fh:
            doc = json.load(fh)
    try:
        return SweepConfig(**doc)
    except (TypeError, ValueError, KeyError) as exc:
        raise InvalidConfig(f"bad sweep config: {exc}") from exc


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    method: Kind
    l1_norm: Scalar | None = None
    max_taylor_residual: Scalar | None = None
    err_at_x: Scalar | None = None
    max_local_freq: Scalar | None = None
    coeff_diff: Scalar | None = None
    limit_exponent: Scalar | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        out = {"n": self.n, "method": self.method.value}
        for name in ("l1_norm", "max_taylor_residual", "err_at_x", "max_local_freq", "coeff_diff", "limit_exponent"):
            v = getattr(self, name)
            if v is None:
                out[name] = None
            elif v.is_exact:
                out[name] = str(v)
            else:
                out[name] = v.to_decimal_string(DIGITS)
        out["error"] = self.error
        return out


def _signal(cfg: SweepConfig, n: int, kind: Kind) -> SignalSpec:
    if kind is Kind.NEW:
        return SignalSpec(coeffs_closed_form(cfg.grid(n), cfg.a), Kind.NEW)
    if kind is Kind.CLASSIC_FN:
        return classic_fn(n, cfg.a)
    return classic_yn(n, cfg.a, cfg.m)


def _row(cfg: SweepConfig, n: int, kind: Kind) -> ComparisonRow:
    try:
        sig = _signal(cfg, n, kind)
        out = {"limit_exponent": sig.limit_exponent}
        if "coeff_growth" in cfg.outputs:
            out["l1_norm"] = coeffs_l1_norm(sig.coeffs)
        if "taylor_residuals" in cfg.outputs:
            out["max_taylor_residual"] = taylor_check(sig).max_abs
        if "error_curve" in cfg.outputs and cfg.x_samples:
            # exact results at x = 0 are rounded so every sample compares in one mode
            out["err_at_x"] = max(error_vs_limit(sig, x, bits=cfg.bits).round(cfg.bits) for x in cfg.x_samples)
        if "local_freq" in cfg.outputs and cfg.x_samples:
            out["max_local_freq"] = max(local_frequency(sig, x, bits=cfg.bits).round(cfg.bits) for x in cfg.x_samples)
        if "method_compare" in cfg.outputs and kind is not Kind.NEW:
            # classic weights against Taylor-matched weights on the same uniform frequencies
            ref = coeffs_closed_form(grid_uniform_linear(n), cfg.a)
            out["coeff_diff"] = sum((abs(c - x) for c, x in zip(sig.coeffs.values, ref.values)), Scalar(0))
        return ComparisonRow(n, kind, **out)
    except SuperoscError as exc:
        return ComparisonRow(n, kind, error=exc.code)


def _row_task(args):
    return _row(*args)


def _tasks(cfg: SweepConfig):
    kinds = [Kind.NEW]
    if "method_compare" in cfg.outputs:
        kinds.append(Kind.CLASSIC_FN)
        if cfg.m is not None:
            kinds.append(Kind.CLASSIC_YN)
    return [(cfg, n, kind) for n in cfg.n_values for kind in kinds]


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> list:
    """One row per (n, method), in config order.

    Failures are recorded per row (``error`` holds the error code) instead
    of aborting.  ``workers > 1`` fans rows out to processes; the output is
    identical to the serial run.
    """
    tasks = _tasks(cfg)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_row_task, tasks))
    return [_row(*t) for t in tasks]


@dataclass(frozen=True)
class SweepPoint:
    n: int
    x: Fraction
    value: object
    abs_err: Scalar
    local_freq: Scalar | None


def sweep_points(cfg: SweepConfig, kind: Kind = Kind.NEW) -> list:
    """Pointwise samples of one signal family over (n, x)."""
    points = []
    for n in cfg.n_values:
        sig = _signal(cfg, n, kind)
        for x in cfg.x_samples:
            value = eval(sig, x, cfg.bits)
            err = error_vs_limit(sig, x, bits=cfg.bits)
            try:
                lf = local_frequency(sig, x, cfg.bits)
            except SuperoscError:
                lf = None
            points.append(SweepPoint(n, x, value, err, lf))
    return points


def _dec(v) -> str:
    return "" if v is None else v.to_decimal_string(DIGITS)


POINT_HEADER = ("n", "x", "re", "im", "abs_err", "local_freq")


def point_dict(p: SweepPoint) -> dict:
    return {
        "n": p.n,
        "x": Scalar(p.x).to_decimal_string(DIGITS),
        "re": _dec(p.value.re),
        "im": _dec(p.value.im),
        "abs_err": _dec(p.abs_err),
        "local_freq": _dec(p.local_freq),
    }


def points_to_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=POINT_HEADER, lineterminator="\n")
    writer.writeheader()
    for p in points:
        writer.writerow(point_dict(p))
    return buf.getvalue()


ROW_HEADER = ("n", "method", "l1_norm", "max_taylor_residual", "err_at_x", "max_local_freq", "coeff_diff",
              "limit_exponent", "error")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=ROW_HEADER, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: ("" if v is None else v) for k, v in r.to_dict().items()})
    return buf.getvalue()


def coeff_growth(family, n_values, a, p=None) -> list:
    """[(n, sum_j |X_j|)] with exact l1 norms."""
    return [(n, coeffs_l1_norm(coeffs_closed_form(make_grid(family, n, p), a))) for n in n_values]


def required_bits_estimate(grid: FrequencyGrid, a, target_digits: int, guard_bits: int | None = None) -> int:
    """ceil(log2 sum|X_j|) + ceil(digits * log2 10) + guard bits."""
    guard = DEFAULT_POLICY.guard_bits if guard_bits is None else guard_bits
    l1 = coeffs_l1_norm(coeffs_closed_form(grid, a))
    return ceil_log2(l1) + ceil_digits_to_bits(target_digits) + guard
