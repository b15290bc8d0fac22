"""Experiment drivers: parameter sweeps, analytic-vs-simulation
validation reports, and diversity-order slope fitting."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from fdrs import analytic, montecarlo
from fdrs.channel import (
    ConfigError,
    NetworkConfig,
    Protocol,
    config_violations,
    db_to_linear,
)

__all__ = ["SweepSpec", "SweepRow", "SweepResult", "DiversityFit",
           "ValidationRow", "run_sweep", "diversity_fit", "diversity_sweep",
           "validate_report"]

AXES = ("power_db", "rate_bpcu", "relay_count", "ith_db")

# analytic outage below this is dominated by float64 cancellation noise
# in the alternating binomial sums and is excluded from slope fits
ANALYTIC_P_FLOOR = 1e-15


@dataclass(frozen=True)
class SweepSpec:
    """One sweep axis plus the protocols and evaluation method to run."""

    axis: str
    start: float
    stop: float
    steps: int
    protocols: tuple[Protocol, ...]
    method: str = "analytic"
    rate: float = 2.0
    trials: int = 10 ** 5
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.steps < 2:
            raise ValueError("steps must be >= 2")
        if not self.start < self.stop:
            raise ValueError("start must be < stop")
        if self.method not in ("analytic", "mc", "both"):
            raise ValueError("method must be analytic, mc, or both")
        if not self.protocols:
            raise ValueError("at least one protocol required")

    def axis_values(self):
        if self.axis == "relay_count":
            lo, hi = int(round(self.start)), int(round(self.stop))
            return [float(v) for v in range(lo, hi + 1)]
        return list(np.linspace(self.start, self.stop, self.steps))


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    protocol: Protocol
    method: str
    outage: float
    throughput: float
    stderr: float | None = None
    trials: int | None = None
    seed: int | None = None


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    errors: dict[str, list[str]]


def _apply_axis(cfg: NetworkConfig, axis: str, value: float) -> NetworkConfig:
    if axis == "power_db":
        p = db_to_linear(value)
        return dataclasses.replace(cfg, p_s=p, p_r=p)
    if axis == "relay_count":
        return dataclasses.replace(cfg, k=int(round(value)))
    if axis == "ith_db":
        return dataclasses.replace(cfg, i_th=db_to_linear(value))
    return cfg  # rate_bpcu leaves the scenario untouched


def run_sweep(spec: SweepSpec, cfg: NetworkConfig) -> SweepResult:
    """Evaluate outage and throughput along one axis.

    Protocols that fail validation are reported in `errors` and
    skipped; the remaining protocols still produce rows.  Cognitive
    scenarios (sp/rp/ith present) are evaluated through the feasibility
    mixture.  Throughput always uses the common-source-rate threshold;
    the outage column for half-duplex baselines uses the doubled rate
    so outage comparisons are at equal delivered rate.
    """
    if spec.axis == "ith_db" and not cfg.is_cognitive:
        raise ConfigError(["ith_db sweep requires a cognitive scenario"])
    cognitive = cfg.is_cognitive
    errors: dict[str, list[str]] = {}
    active: dict[Protocol, list[str]] = {}
    for proto in spec.protocols:
        methods = ("analytic", "mc") if spec.method == "both" else (spec.method,)
        ok = []
        for m in methods:
            if m == "analytic" and spec.method == "both" and proto.simulation_only:
                continue  # "both" degrades to mc-only for the baselines
            v = config_violations(cfg, proto, m)
            if v:
                errors.setdefault(proto.value, []).extend(f"[{m}] {e}" for e in v)
            else:
                ok.append(m)
        if ok:
            active[proto] = ok

    rows = []
    for value in spec.axis_values():
        point_cfg = _apply_axis(cfg, spec.axis, value)
        rate = value if spec.axis == "rate_bpcu" else spec.rate
        for proto in spec.protocols:
            for method in active.get(proto, ()):
                if method == "analytic":
                    p_out = analytic.outage(point_cfg, proto, rate, cognitive)
                    p_thr = analytic.outage(point_cfg, proto, rate, cognitive,
                                            hd_equal_delivered_rate=False)
                    rows.append(SweepRow(value, proto, "analytic", p_out,
                                         analytic.throughput_from_outage(proto, rate, p_thr)))
                else:
                    est = montecarlo.estimate_outage(
                        point_cfg, proto, rate, spec.trials, spec.seed,
                        cognitive, spec.workers)
                    if proto.half_duplex:
                        thr_est = montecarlo.estimate_outage(
                            point_cfg, proto, rate, spec.trials, spec.seed,
                            cognitive, spec.workers, hd_equal_delivered_rate=False)
                        thr_p = thr_est.p_hat
                    else:
                        thr_p = est.p_hat
                    rows.append(SweepRow(value, proto, "mc", est.p_hat,
                                         analytic.throughput_from_outage(proto, rate, thr_p),
                                         stderr=est.stderr, trials=est.trials,
                                         seed=est.seed))
    return SweepResult(rows=tuple(rows), errors=errors)


# ---------------------------------------------------------------------------
# diversity-order estimation

@dataclass(frozen=True)
class DiversityFit:
    """Log-log slope of outage versus power over the fitted tail window."""

    slope: float
    stderr: float
    points_used: int
    floor_detected: bool

    def __post_init__(self):
        if self.points_used < 2:
            raise ValueError("points_used must be >= 2")


def _ols_slope(t: np.ndarray, y: np.ndarray):
    """Least-squares slope, its standard error, and R^2 of y against t."""
    n = len(t)
    tbar, ybar = t.mean(), y.mean()
    stt = float(((t - tbar) ** 2).sum())
    slope = float(((t - tbar) * (y - ybar)).sum()) / stt
    resid = y - ybar - slope * (t - tbar)
    ss_res = float((resid ** 2).sum())
    ss_tot = float(((y - ybar) ** 2).sum())
    r2 = 1.0 if ss_tot <= 1e-30 else 1.0 - ss_res / ss_tot
    stderr = math.sqrt(ss_res / (n - 2) / stt) if n > 2 else 0.0
    return slope, stderr, r2


def diversity_fit(points) -> DiversityFit:
    """Fit -log10(P_out) against log10(P) over the trailing window.

    `points` is a sequence of (P_linear, P_out) with P strictly
    increasing and positive outage.  The fitted window is the largest
    trailing one of >= 4 points with R^2 >= 0.999, which keeps the fit
    off the curved shoulder without letting it run into an error floor;
    if no window qualifies the last 4 points are used.  A tail slope
    (last 4 points) below 0.1 flags a floor.
    """
    pts = [(float(p), float(q)) for p, q in points]
    if len(pts) < 4:
        raise ValueError("diversity fit needs at least 4 points")
    p = np.array([v for v, _ in pts])
    q = np.array([v for _, v in pts])
    if np.any(q <= 0):
        raise ValueError("outage values must be positive (zero outage is degenerate)")
    if np.any(np.diff(p) <= 0):
        raise ValueError("power values must be strictly increasing")
    t = np.log10(p)
    y = -np.log10(q)
    tail_slope, _, _ = _ols_slope(t[-4:], y[-4:])
    floor = tail_slope < 0.1
    for length in range(len(t), 3, -1):
        slope, stderr, r2 = _ols_slope(t[-length:], y[-length:])
        if r2 >= 0.999:
            return DiversityFit(slope, stderr, length, floor)
    slope, stderr, _ = _ols_slope(t[-4:], y[-4:])
    return DiversityFit(slope, stderr, 4, floor)


def diversity_sweep(cfg: NetworkConfig, protocol: Protocol, rate: float,
                    pmin_db: float, pmax_db: float, points: int,
                    method: str = "analytic", trials: int = 10 ** 6,
                    seed: int = 0, workers: int = 1) -> DiversityFit:
    """Power sweep P_S = P_R = P followed by a slope fit.

    Points below the estimator's resolution are dropped before the
    fit: simulated outage needs at least 100 hits, analytic outage must
    clear the float64 cancellation floor of the closed forms.
    """
    grid_db = np.linspace(pmin_db, pmax_db, points)
    kept = []
    for pdb in grid_db:
        p = db_to_linear(float(pdb))
        point_cfg = dataclasses.replace(cfg, p_s=p, p_r=p)
        if method == "mc":
            est = montecarlo.estimate_outage(point_cfg, protocol, rate, trials,
                                             seed, cfg.is_cognitive, workers)
            if est.p_hat * trials >= 100:
                kept.append((p, est.p_hat))
        else:
            p_out = analytic.outage(point_cfg, protocol, rate, cfg.is_cognitive)
            if p_out > ANALYTIC_P_FLOOR:
                kept.append((p, p_out))
    if len(kept) < 4:
        raise ValueError("fewer than 4 usable points above the resolution floor")
    return diversity_fit(kept)


# ---------------------------------------------------------------------------
# analytic-vs-simulation validation

@dataclass(frozen=True)
class ValidationRow:
    protocol: Protocol
    p_analytic: float
    p_hat: float
    stderr: float
    z_score: float
    passed: bool


def validate_report(cfg: NetworkConfig, protocols, rate: float, trials: int,
                    seed: int, workers: int = 1) -> list[ValidationRow]:
    """z-test of the simulator against every requested closed form.

    A protocol passes when |z| <= 3 or the absolute gap is below 1e-3
    (the z-test is meaningless at probabilities near 0 or 1 where the
    binomial standard error collapses).
    """
    cognitive = cfg.is_cognitive
    rows = []
    for proto in protocols:
        p_an = analytic.outage(cfg, proto, rate, cognitive)
        est = montecarlo.estimate_outage(cfg, proto, rate, trials, seed,
                                         cognitive, workers)
        delta = est.p_hat - p_an
        z = delta / est.stderr if est.stderr > 0 else (0.0 if delta == 0 else math.inf)
        rows.append(ValidationRow(proto, p_an, est.p_hat, est.stderr, z,
                                  passed=abs(z) <= 3.0 or abs(delta) <= 1e-3))
    return rows
