"""Analytic engine: FID, cluster weights, intensity spectra."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from centralspin import CouplingSet, cluster_weights, encoded_signal, fid, hamming_intensities
from centralspin.dynamics import (
    binomial_spreading,
    flip_weights,
    intensity_trace,
    poisson_binomial,
)

from conftest import random_couplings

# one fixed instance with every digit pinned down (values frozen from a
# brute-force density-matrix run; see test_oracle for the live cross-check)
FROZEN_HZ = [100.0, -250.0, 400.0, 620.0, -880.0]
FROZEN_T = 150e-6
FROZEN_FID = -0.021936508851300184
FROZEN_P = [
    0.00048121042058317157,
    0.06509643663830125,
    0.4181833118291138,
    0.42033612406501464,
    0.09305332641052222,
    0.00284959063646481,
]
FROZEN_I = [
    8.904970738952531e-05,
    0.005815832900657639,
    0.05298726404507446,
    0.127809159559909,
    0.19106476191742636,
    0.24446786373908588,
]


def frozen_couplings() -> CouplingSet:
    return CouplingSet(2 * np.pi * np.array(FROZEN_HZ))


def test_fid_at_zero_is_one():
    c = frozen_couplings()
    assert fid(c, 0.0) == 1.0


def test_fid_single_spin_closed_form():
    w = 2 * np.pi * 137.0
    c = CouplingSet(np.array([w]))
    t = np.linspace(0.0, 1e-3, 50)
    np.testing.assert_allclose(fid(c, t), np.cos(2 * w * t), atol=1e-15)


def test_fid_frozen_value():
    assert fid(frozen_couplings(), FROZEN_T) == pytest.approx(FROZEN_FID, abs=1e-15)


def test_fid_scalar_and_array_agree():
    c = frozen_couplings()
    t = np.array([0.0, 5e-5, FROZEN_T])
    vec = fid(c, t)
    assert isinstance(fid(c, FROZEN_T), float)
    np.testing.assert_array_equal(vec, [fid(c, x) for x in t])


def test_flip_weights_range_and_value():
    c = frozen_couplings()
    q = flip_weights(c, FROZEN_T)
    assert q.shape == (5,)
    assert np.all((q >= 0.0) & (q <= 1.0))
    np.testing.assert_allclose(q, np.sin(2 * c.omegas * FROZEN_T) ** 2, atol=1e-15)


def test_poisson_binomial_against_enumeration(rng):
    # exact subset enumeration for n = 10 trials
    q = rng.uniform(0.0, 1.0, size=10)
    expected = np.zeros(11)
    for bits in itertools.product([0, 1], repeat=10):
        prob = np.prod(np.where(bits, q, 1.0 - q))
        expected[sum(bits)] += prob
    np.testing.assert_allclose(poisson_binomial(q), expected, atol=1e-12)


def test_poisson_binomial_batched_matches_loop(rng):
    q = rng.uniform(0.0, 1.0, size=(7, 4))
    batched = poisson_binomial(q)
    for i in range(7):
        np.testing.assert_array_equal(batched[i], poisson_binomial(q[i]))


def test_cluster_weights_frozen():
    d = cluster_weights(frozen_couplings(), FROZEN_T)
    assert d.n_spins == 5
    np.testing.assert_allclose(d.weights, FROZEN_P, atol=1e-15)


def test_p0_equals_fid_squared():
    c = frozen_couplings()
    for t in (3e-5, FROZEN_T, 7.7e-4):
        d = cluster_weights(c, t)
        assert d.weights[0] == pytest.approx(fid(c, t) ** 2, abs=1e-14)


def test_binomial_spreading_rows():
    b = binomial_spreading(3)
    assert b.shape == (4, 7)
    # size-0 cluster is pure order 0; size-2 spreads as (1/4, 1/2, 1/4)
    np.testing.assert_array_equal(b[0], [0, 0, 0, 1, 0, 0, 0])
    np.testing.assert_array_equal(b[2], [0, 0.25, 0, 0.5, 0, 0.25, 0])
    np.testing.assert_allclose(b.sum(axis=1), 1.0, atol=0)
    np.testing.assert_array_equal(b, b[:, ::-1])


def test_hamming_intensities_frozen():
    spec = hamming_intensities(frozen_couplings(), FROZEN_T)
    assert spec.n_spins == 5
    expected = np.array(FROZEN_I[:-1] + FROZEN_I[::-1])
    np.testing.assert_allclose(spec.intensities, expected, atol=1e-15)
    assert spec.intensity(0) == pytest.approx(FROZEN_I[-1], abs=1e-15)
    assert spec.intensity(3) == spec.intensity(-3)


def test_intensity_trace_matches_pointwise():
    c = frozen_couplings()
    times = np.array([1e-5, FROZEN_T, 9e-4])
    trace = intensity_trace(c, times)
    assert trace.shape == (3, 11)
    for i, t in enumerate(times):
        np.testing.assert_array_equal(trace[i], hamming_intensities(c, t).intensities)


def test_encoded_signal_limits():
    c = frozen_couplings()
    t = FROZEN_T
    assert encoded_signal(c, t, 0.0) == pytest.approx(1.0, abs=1e-12)
    sig_pi = np.prod(np.cos(4.0 * c.omegas * t))
    assert encoded_signal(c, t, math.pi) == pytest.approx(sig_pi, abs=1e-12)


def test_encoded_signal_product_form(rng):
    # SIG_phi = prod_j (1 - q_j (1 - cos phi)), the factorized echo amplitude
    c = random_couplings(rng, 6)
    t = 2.3e-4
    q = flip_weights(c, t)
    phis = np.linspace(0.0, 2 * math.pi, 17)
    expected = np.prod(1.0 - q[None, :] * (1.0 - np.cos(phis)[:, None]), axis=1)
    np.testing.assert_allclose(encoded_signal(c, t, phis), expected, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=12),
    st.floats(min_value=0.0, max_value=2e-3, allow_nan=False),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_spectrum_invariants(n, t, seed):
    c = random_couplings(np.random.default_rng(seed), n)
    spec = hamming_intensities(c, t)
    v = spec.intensities
    assert abs(v.sum() - 1.0) < 1e-9
    assert np.all(v >= -1e-12)
    np.testing.assert_allclose(v, v[::-1], atol=1e-12)
    d = cluster_weights(c, t)
    assert abs(d.weights.sum() - 1.0) < 1e-12
    assert d.weights[0] == pytest.approx(fid(c, t) ** 2, abs=1e-12)


def test_validation_rejects_bad_distributions():
    from centralspin.dynamics import ClusterWeightDistribution, IntensitySpectrum

    with pytest.raises(ValueError):
        ClusterWeightDistribution(np.array([0.6, 0.6]), 0.0)
    with pytest.raises(ValueError):
        ClusterWeightDistribution(np.array([1.5, -0.5]), 0.0)
    with pytest.raises(ValueError):
        IntensitySpectrum(np.array([0.5, 0.5]), 0.0)  # even length
    with pytest.raises(ValueError):
        IntensitySpectrum(np.array([0.7, 0.2, 0.1]), 0.0)  # asymmetric
