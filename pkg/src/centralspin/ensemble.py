"""Deterministic Monte Carlo over molecular orientations.

Each realization draws an independent field orientation from a substream
keyed by (master_seed, index), evaluates the analytic engine on a shared
time grid, and the results are reduced in realization-index order with
compensated (Kahan) summation.  The output is therefore bitwise identical
for a given configuration regardless of how many worker processes are used,
and the first k realizations of a longer run coincide with a shorter run.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial

import numpy as np

from .dynamics import binomial_spreading, flip_weights, poisson_binomial
from .entropy import EntropyTrace, entanglement_entropy
from .geometry import CouplingSet, GeometryConfig, build_bath, realization_rng, sample_orientation

__all__ = [
    "EnsembleConfig",
    "RealizationResult",
    "EnsembleSummary",
    "realization_couplings",
    "run_realization",
    "evaluate_couplings",
    "run_ensemble",
    "entropy_vs_size",
]


@dataclass(frozen=True)
class EnsembleConfig:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    n_realizations: int = 300
    master_seed: int = 0
    t_max: float = 8000e-6  # seconds
    n_steps: int = 801

    def __post_init__(self):
        if self.n_realizations < 1:
            raise ValueError("n_realizations must be >= 1")
        if self.n_steps < 2:
            raise ValueError("n_steps must be >= 2")
        if not self.t_max > 0.0:
            raise ValueError("t_max must be > 0")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps)


@dataclass(frozen=True)
class RealizationResult:
    """Per-orientation observables on the shared time grid."""

    fid: np.ndarray  # (T,)
    s_ent: np.ndarray  # (T,)
    s1: np.ndarray  # (T,)
    s2: np.ndarray  # (T,)
    intensities: np.ndarray  # (T, 2N+1)


@dataclass(frozen=True)
class EnsembleSummary:
    """Per-time means and spreads over the orientation ensemble."""

    times: np.ndarray
    n_spins: int
    n_realizations: int
    fid_mean: np.ndarray
    fid_std: np.ndarray
    s_ent_mean: np.ndarray
    s_ent_std: np.ndarray
    s1_mean: np.ndarray
    s1_std: np.ndarray
    s2_mean: np.ndarray
    s2_std: np.ndarray
    intensity_mean: np.ndarray  # (T, 2N+1)
    intensity_std: np.ndarray  # (T, 2N+1)

    def entropy_trace(self) -> EntropyTrace:
        """Ensemble-mean entropies as an EntropyTrace (with spreads)."""
        return EntropyTrace(
            self.times,
            np.clip(self.s_ent_mean, 0.0, 1.0),
            self.s1_mean,
            self.s2_mean,
            s_ent_std=self.s_ent_std,
            s1_std=self.s1_std,
            s2_std=self.s2_std,
        )


def realization_couplings(
    geometry: GeometryConfig, master_seed: int, index: int
) -> CouplingSet:
    """Couplings of realization `index`: one orientation from its substream."""
    orient = sample_orientation(realization_rng(master_seed, index))
    return build_bath(geometry, orient)


def run_realization(
    geometry: GeometryConfig, master_seed: int, index: int, times: np.ndarray
) -> RealizationResult:
    """Evaluate one orientation on the time grid with the analytic engine."""
    return evaluate_couplings(realization_couplings(geometry, master_seed, index), times)


def evaluate_couplings(c: CouplingSet, times: np.ndarray) -> RealizationResult:
    """All per-realization observables for a fixed coupling set."""
    phase = 2.0 * np.outer(times, c.omegas)
    fid = np.prod(np.cos(phase), axis=1)
    p = poisson_binomial(np.sin(phase) ** 2)
    intensities = p @ binomial_spreading(c.n_spins)

    s_ent = entanglement_entropy(np.clip(fid, -1.0, 1.0))
    pos = intensities > 0.0
    plogp = np.zeros_like(intensities)
    plogp[pos] = intensities[pos] * np.log2(intensities[pos])
    s1 = -plogp.sum(axis=1)
    s2 = -np.log2(np.sum(intensities**2, axis=1))
    return RealizationResult(fid, s_ent, s1, s2, intensities)


class _KahanSum:
    """Compensated elementwise array accumulator (fixed addition order)."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self._carry = np.zeros(shape)

    def add(self, x: np.ndarray):
        y = x - self._carry
        t = self.total + y
        self._carry = (t - self.total) - y
        self.total = t


class _MomentAccumulator:
    def __init__(self, shape):
        self._sum = _KahanSum(shape)
        self._sumsq = _KahanSum(shape)
        self.count = 0

    def add(self, x: np.ndarray):
        self._sum.add(x)
        self._sumsq.add(x * x)
        self.count += 1

    def mean(self) -> np.ndarray:
        return self._sum.total / self.count

    def std(self) -> np.ndarray:
        m = self.mean()
        return np.sqrt(np.maximum(self._sumsq.total / self.count - m * m, 0.0))


def run_ensemble(cfg: EnsembleConfig, n_jobs: int = 1) -> EnsembleSummary:
    """Powder average over cfg.n_realizations random orientations.

    Realizations may be evaluated in parallel worker processes; the reduction
    always happens in realization-index order in the calling process, so the
    result does not depend on n_jobs.
    """
    times = cfg.times
    n = cfg.geometry.n_spins
    scalars = _MomentAccumulator((4, times.size))  # fid, s_ent, s1, s2
    spectra = _MomentAccumulator((times.size, 2 * n + 1))

    work = partial(run_realization, cfg.geometry, cfg.master_seed, times=times)
    indices = range(cfg.n_realizations)
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = pool.map(work, indices, chunksize=max(1, cfg.n_realizations // (4 * n_jobs)))
            for res in results:
                scalars.add(np.stack([res.fid, res.s_ent, res.s1, res.s2]))
                spectra.add(res.intensities)
    else:
        for i in indices:
            res = work(i)
            scalars.add(np.stack([res.fid, res.s_ent, res.s1, res.s2]))
            spectra.add(res.intensities)

    mean = scalars.mean()
    std = scalars.std()
    return EnsembleSummary(
        times=times,
        n_spins=n,
        n_realizations=cfg.n_realizations,
        fid_mean=mean[0],
        fid_std=std[0],
        s_ent_mean=mean[1],
        s_ent_std=std[1],
        s1_mean=mean[2],
        s1_std=std[2],
        s2_mean=mean[3],
        s2_std=std[3],
        intensity_mean=spectra.mean(),
        intensity_std=spectra.std(),
    )


def entropy_vs_size(
    sizes,
    cfg: EnsembleConfig,
    realizations_per_size: dict[int, int] | None = None,
    n_jobs: int = 1,
) -> dict[int, EnsembleSummary]:
    """Ensemble sweep over bath sizes (each a multiple of spins_per_ring).

    realizations_per_size may shrink the realization count for the largest
    sizes; the count actually used is recorded in each summary.
    """
    per_ring = cfg.geometry.spins_per_ring
    summaries: dict[int, EnsembleSummary] = {}
    for size in sizes:
        if size % per_ring != 0 or size < per_ring:
            raise ValueError(
                f"size {size} is not a positive multiple of spins_per_ring={per_ring}"
            )
        n_real = cfg.n_realizations
        if realizations_per_size and size in realizations_per_size:
            n_real = realizations_per_size[size]
        sized = replace(
            cfg,
            geometry=replace(cfg.geometry, n_rings=size // per_ring),
            n_realizations=n_real,
        )
        summaries[size] = run_ensemble(sized, n_jobs=n_jobs)
    return summaries
