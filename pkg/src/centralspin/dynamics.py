"""Analytic engine for the commuting ZZ central-spin model.

Because every term of the Hamiltonian commutes, all observables factorize
over bath spins:

* FID(t) = prod_j cos(2 omega_j t)
* each spin j joins a correlated cluster with weight q_j = sin^2(2 omega_j t),
  so the cluster-size distribution p_m is the Poisson-binomial mass of m
  successes over the N weights q_j (O(N^2) convolution dynamic program)
* a size-m cluster spreads binomially over coherence orders
  n in {-m, -m+2, ..., +m}, giving I_n = sum_m p_m C(m,(m+n)/2)/2^m
* the phase-encoded echo signal is the Fourier series
  SIG_phi = sum_n e^{i n phi} I_n = I_0 + 2 sum_{n>0} I_n cos(n phi).

Everything here costs O(N^2) per time point; brute-force ground truth lives
in the oracle module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .geometry import CouplingSet

__all__ = [
    "ClusterWeightDistribution",
    "IntensitySpectrum",
    "fid",
    "flip_weights",
    "poisson_binomial",
    "cluster_weights",
    "binomial_spreading",
    "hamming_intensities",
    "intensity_trace",
    "encoded_signal",
]


@dataclass(frozen=True)
class ClusterWeightDistribution:
    """p_m: total squared amplitude of clusters of exactly m bath spins."""

    weights: np.ndarray  # index m = 0..N
    time: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1:
            raise ValueError("weights must be 1-d")
        if np.any(w < -1e-12):
            raise ValueError("cluster weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("cluster weights must sum to 1 within 1e-12")
        object.__setattr__(self, "weights", w)

    @property
    def n_spins(self) -> int:
        return self.weights.size - 1


@dataclass(frozen=True)
class IntensitySpectrum:
    """I_n: squared amplitude of coherence order (Hamming weight) n = -N..N."""

    intensities: np.ndarray  # index N + n
    time: float

    def __post_init__(self):
        v = np.asarray(self.intensities, dtype=float)
        if v.ndim != 1 or v.size % 2 != 1:
            raise ValueError("intensities must be 1-d with odd length")
        if np.any(v < -1e-12):
            raise ValueError("intensities must be nonnegative")
        if abs(v.sum() - 1.0) > 1e-9:
            raise ValueError("intensities must sum to 1 within 1e-9")
        if np.max(np.abs(v - v[::-1])) > 1e-9:
            raise ValueError("intensities must be symmetric in n")
        object.__setattr__(self, "intensities", v)

    @property
    def n_spins(self) -> int:
        return (self.intensities.size - 1) // 2

    @property
    def orders(self) -> np.ndarray:
        n = self.n_spins
        return np.arange(-n, n + 1)

    def intensity(self, n: int) -> float:
        return float(self.intensities[self.n_spins + n])


def fid(c: CouplingSet, t):
    """Free induction decay prod_j cos(2 omega_j t); t scalar or array (s)."""
    t = np.asarray(t, dtype=float)
    out = np.prod(np.cos(2.0 * t[..., None] * c.omegas), axis=-1)
    return out if out.ndim else float(out)


def flip_weights(c: CouplingSet, t) -> np.ndarray:
    """Per-spin cluster-joining weights q_j(t) = sin^2(2 omega_j t)."""
    t = np.asarray(t, dtype=float)
    return np.sin(2.0 * t[..., None] * c.omegas) ** 2


def poisson_binomial(q: np.ndarray) -> np.ndarray:
    """Mass function of the number of successes over independent trials.

    q has the trials on the last axis (values in [0, 1]); the result has one
    more entry on that axis.  Direct convolution dynamic program: exact,
    stable, O(n^2).
    """
    q = np.asarray(q, dtype=float)
    n = q.shape[-1]
    p = np.zeros(q.shape[:-1] + (n + 1,))
    p[..., 0] = 1.0
    for j in range(n):
        qj = q[..., j, None]
        p[..., 1:] = p[..., 1:] * (1.0 - qj) + p[..., :-1] * qj
        p[..., :1] = p[..., :1] * (1.0 - qj)
    return p


def cluster_weights(c: CouplingSet, t: float) -> ClusterWeightDistribution:
    """Distribution of cluster sizes m at time t."""
    return ClusterWeightDistribution(poisson_binomial(flip_weights(c, t)), float(t))


@lru_cache(maxsize=None)
def binomial_spreading(n_spins: int) -> np.ndarray:
    """Matrix B[m, N+n] spreading a size-m cluster over orders n.

    B[m, N+n] = C(m, (m+n)/2) / 2^m for |n| <= m, n = m (mod 2), else 0.
    Exactly symmetric in n since C(m, k) = C(m, m-k).
    """
    b = np.zeros((n_spins + 1, 2 * n_spins + 1))
    for m in range(n_spins + 1):
        for k in range(m + 1):
            b[m, n_spins + 2 * k - m] = math.comb(m, k) / 2.0**m
    b.setflags(write=False)
    return b


def hamming_intensities(c: CouplingSet, t: float) -> IntensitySpectrum:
    """Coherence-order intensity spectrum I_n(t) for n = -N..N."""
    p = poisson_binomial(flip_weights(c, float(t)))
    return IntensitySpectrum(p @ binomial_spreading(c.n_spins), float(t))


def intensity_trace(c: CouplingSet, times: np.ndarray) -> np.ndarray:
    """Batched intensities over a time grid, shape (len(times), 2N+1)."""
    times = np.asarray(times, dtype=float)
    return poisson_binomial(flip_weights(c, times)) @ binomial_spreading(c.n_spins)


def encoded_signal(c: CouplingSet, t: float, phi) -> np.ndarray | float:
    """Echo signal after a collective bath rotation by phi.

    SIG_phi(2t) = sum_n e^{i n phi} I_n(t) = I_0 + 2 sum_{n>0} I_n cos(n phi);
    phi may be a scalar or an array of angles (rad).
    """
    spec = hamming_intensities(c, t)
    n_pos = np.arange(1, c.n_spins + 1)
    i_pos = spec.intensities[c.n_spins + 1 :]
    phi = np.asarray(phi, dtype=float)
    sig = spec.intensity(0) + 2.0 * np.cos(phi[..., None] * n_pos) @ i_pos
    return sig if sig.ndim else float(sig)
