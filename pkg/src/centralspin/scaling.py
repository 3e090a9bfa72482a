"""Least-squares fits for the growth and saturation of the correlation
entropy: logarithmic-in-time growth on a fixed window, and ln(N) scaling of
the growth factor and the saturation value across bath sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensemble import EnsembleConfig, EnsembleSummary, entropy_vs_size
from .entropy import EntropyTrace, equilibration_time, saturation_value

__all__ = [
    "FitResult",
    "fit_log_time",
    "fit_ln_n",
    "SizeScalingPoint",
    "ScalingReport",
    "analyze_scaling",
]

DEFAULT_FIT_WINDOW = (50e-6, 300e-6)
DEFAULT_SATURATION_T_MIN = 5000e-6


@dataclass(frozen=True)
class FitResult:
    """Ordinary least squares y = intercept + slope * x."""

    intercept: float
    slope: float
    rms_residual: float
    n_samples: int
    window: tuple[float, float] | None = None
    r_squared: float | None = None

    def predict(self, x):
        return self.intercept + self.slope * np.asarray(x, dtype=float)


def _ols(x: np.ndarray, y: np.ndarray, window=None) -> FitResult:
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (intercept + slope * x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0.0 else 1.0
    return FitResult(
        intercept=float(intercept),
        slope=float(slope),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        n_samples=x.size,
        window=window,
        r_squared=r2,
    )


def fit_log_time(
    trace: EntropyTrace, window: tuple[float, float], which: str = "s2"
) -> FitResult:
    """OLS of the entropy against log2(t / 1us) on the closed window [t_lo, t_hi]."""
    t_lo, t_hi = window
    mask = (trace.times >= t_lo) & (trace.times <= t_hi)
    if np.any(trace.times[mask] <= 0.0):
        raise ValueError("fit window must contain only positive times")
    if np.count_nonzero(mask) < 3:
        raise ValueError("need at least 3 samples in the fit window")
    x = np.log2(trace.times[mask] / 1e-6)
    return _ols(x, trace.series(which)[mask], window=(float(t_lo), float(t_hi)))


def fit_ln_n(points: dict[int, float]) -> FitResult:
    """OLS of a scalar quantity against ln(N) over bath sizes."""
    if len(points) < 3:
        raise ValueError("need at least 3 distinct sizes")
    sizes = np.array(sorted(points), dtype=float)
    values = np.array([points[int(n)] for n in sizes])
    return _ols(np.log(sizes), values)


@dataclass(frozen=True)
class SizeScalingPoint:
    n_spins: int
    n_realizations: int
    beta: float  # log-time growth factor
    s2_saturation: float
    s2_saturation_std: float
    t_eq: float  # seconds


@dataclass(frozen=True)
class ScalingReport:
    points: list[SizeScalingPoint]
    beta_fit: FitResult  # beta vs ln N
    saturation_fit: FitResult  # saturation S2 vs ln N

    def t_eq_stats(self, min_size: int = 0) -> tuple[float, float]:
        """(mean, std) of equilibration times over sizes >= min_size."""
        teqs = np.array([p.t_eq for p in self.points if p.n_spins >= min_size])
        return float(teqs.mean()), float(teqs.std())

    def text(self) -> str:
        lines = ["size sweep (per bath size N):"]
        for p in self.points:
            lines.append(
                f"  N={p.n_spins:3d}  realizations={p.n_realizations:4d}  "
                f"beta={p.beta:.4f}  S2_sat={p.s2_saturation:.4f} "
                f"(+-{p.s2_saturation_std:.4f})  T_eq={p.t_eq * 1e6:.1f} us"
            )
        bf, sf = self.beta_fit, self.saturation_fit
        lines.append(
            f"beta vs ln(N):   {bf.intercept:.4f} + {bf.slope:.4f} ln N   "
            f"(R^2={bf.r_squared:.4f})"
        )
        lines.append(
            f"S2_sat vs ln(N): {sf.intercept:.4f} + {sf.slope:.4f} ln N   "
            f"(R^2={sf.r_squared:.4f})"
        )
        mean, std = self.t_eq_stats()
        lines.append(f"T_eq over all sizes: ({mean * 1e6:.1f} +- {std * 1e6:.1f}) us")
        return "\n".join(lines)


def analyze_scaling(
    sizes,
    cfg: EnsembleConfig,
    realizations_per_size: dict[int, int] | None = None,
    fit_window: tuple[float, float] = DEFAULT_FIT_WINDOW,
    saturation_t_min: float = DEFAULT_SATURATION_T_MIN,
    n_jobs: int = 1,
    summaries: dict[int, EnsembleSummary] | None = None,
) -> ScalingReport:
    """Full size sweep plus the two ln(N) fits.

    Pass precomputed `summaries` to rerun only the analysis stage.
    """
    if summaries is None:
        summaries = entropy_vs_size(
            sizes, cfg, realizations_per_size=realizations_per_size, n_jobs=n_jobs
        )
    points = []
    for size in sorted(summaries):
        summary = summaries[size]
        trace = summary.entropy_trace()
        sat = saturation_value(trace, saturation_t_min, which="s2")
        teq = equilibration_time(trace, sat.mean, which="s2")
        beta = fit_log_time(trace, fit_window, which="s2").slope
        points.append(
            SizeScalingPoint(
                n_spins=size,
                n_realizations=summary.n_realizations,
                beta=beta,
                s2_saturation=sat.mean,
                s2_saturation_std=sat.std,
                t_eq=teq,
            )
        )
    beta_fit = fit_ln_n({p.n_spins: p.beta for p in points})
    sat_fit = fit_ln_n({p.n_spins: p.s2_saturation for p in points})
    return ScalingReport(points=points, beta_fit=beta_fit, saturation_fit=sat_fit)
