"""Entropy observables: entanglement entropy of the central spin and the
Shannon/collision (order-1/order-2) Renyi entropies of the coherence-order
intensity distribution, plus saturation and equilibration diagnostics on
entropy time series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dynamics import IntensitySpectrum

__all__ = [
    "EntropyTrace",
    "SaturationStats",
    "NotEquilibratedError",
    "entanglement_entropy",
    "renyi_s1",
    "renyi_s2",
    "saturation_value",
    "equilibration_time",
]

_NORM_TOL = 1e-9


class NotEquilibratedError(RuntimeError):
    """The trace never crosses its saturation value within the time grid."""


def _xlog2x(p: np.ndarray) -> np.ndarray:
    # 0 * log2(0) := 0
    out = np.zeros_like(p)
    mask = p > 0.0
    out[mask] = p[mask] * np.log2(p[mask])
    return out


def entanglement_entropy(fid_value):
    """Central-spin entanglement entropy as a function of the FID.

    The reduced central-spin state has eigenvalues f_pm = (1 +- FID)/2, so
    S = -f+ log2 f+ - f- log2 f-, in bits; vectorized over fid_value.
    """
    f = np.asarray(fid_value, dtype=float)
    if np.any(np.abs(f) > 1.0 + 1e-12):
        raise ValueError("|FID| must be <= 1")
    f = np.clip(f, -1.0, 1.0)
    probs = np.stack([(1.0 + f) / 2.0, (1.0 - f) / 2.0])
    out = -np.sum(_xlog2x(probs), axis=0)
    return out if out.ndim else float(out)


def _checked(spec: IntensitySpectrum) -> np.ndarray:
    v = spec.intensities
    if abs(v.sum() - 1.0) > _NORM_TOL:
        raise ValueError("intensity spectrum is not normalized")
    return v


def renyi_s1(spec: IntensitySpectrum) -> float:
    """First-order (Shannon) correlation entropy -sum_n I_n log2 I_n, in bits."""
    return float(-np.sum(_xlog2x(_checked(spec))))


def renyi_s2(spec: IntensitySpectrum) -> float:
    """Second-order (collision) correlation entropy -log2 sum_n I_n^2, in bits."""
    return float(-np.log2(np.sum(_checked(spec) ** 2)))


@dataclass(frozen=True)
class EntropyTrace:
    """Time series of S_ent, S1, S2 (single realization or ensemble mean)."""

    times: np.ndarray  # seconds, strictly increasing
    s_ent: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    s_ent_std: np.ndarray | None = None
    s1_std: np.ndarray | None = None
    s2_std: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or np.any(np.diff(t) <= 0.0):
            raise ValueError("times must be 1-d and strictly increasing")
        for name in ("s_ent", "s1", "s2"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != t.shape:
                raise ValueError(f"{name} must match the time grid")
            object.__setattr__(self, name, v)
        if np.any(self.s_ent < -1e-9) or np.any(self.s_ent > 1.0 + 1e-9):
            raise ValueError("s_ent must lie in [0, 1]")
        if np.any(self.s2 > self.s1 + 1e-9):
            raise ValueError("s2 must not exceed s1")
        object.__setattr__(self, "times", t)

    def series(self, which: str) -> np.ndarray:
        if which not in ("s_ent", "s1", "s2"):
            raise ValueError("which must be one of 's_ent', 's1', 's2'")
        return getattr(self, which)


class SaturationStats(NamedTuple):
    mean: float
    std: float
    n_samples: int


def saturation_value(
    trace: EntropyTrace, t_min: float, which: str = "s2"
) -> SaturationStats:
    """Long-time saturation value: mean and spread over samples with t > t_min."""
    mask = trace.times > t_min
    if np.count_nonzero(mask) < 10:
        raise ValueError("need at least 10 samples beyond t_min")
    window = trace.series(which)[mask]
    return SaturationStats(float(window.mean()), float(window.std()), int(window.size))


def equilibration_time(
    trace: EntropyTrace, saturation: float, which: str = "s2"
) -> float:
    """First grid time at which the trace reaches the saturation value."""
    hits = np.nonzero(trace.series(which) >= saturation)[0]
    if hits.size == 0:
        raise NotEquilibratedError(
            f"{which} never reaches {saturation:g}: not equilibrated within grid"
        )
    return float(trace.times[hits[0]])
