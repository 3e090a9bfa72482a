"""Central-spin correlation growth simulator.

Analytic O(N^2) engine for FID, cluster-size weights, coherence-order
intensities and correlation entropies of a central spin ZZ-coupled to a ring
bath, cross-validated against a brute-force density-matrix oracle, with a
deterministic powder-average ensemble runner and scaling analysis.
"""

from .config import ConfigError, RunConfig, load_config, parse_config
from .dynamics import (
    ClusterWeightDistribution,
    IntensitySpectrum,
    cluster_weights,
    encoded_signal,
    fid,
    hamming_intensities,
)
from .ensemble import (
    EnsembleConfig,
    EnsembleSummary,
    entropy_vs_size,
    run_ensemble,
)
from .entropy import (
    EntropyTrace,
    NotEquilibratedError,
    entanglement_entropy,
    equilibration_time,
    renyi_s1,
    renyi_s2,
    saturation_value,
)
from .geometry import (
    DEFAULT_COUPLING_SCALE,
    CouplingSet,
    GeometryConfig,
    Orientation,
    build_bath,
    load_couplings,
    realization_rng,
    sample_orientation,
)
from .oracle import (
    DenseState,
    evolve,
    fid_configuration_sum,
    initial_state,
    pi_pulse_equivalence_check,
    rotate_bath,
    run_protocol,
)
from .scaling import FitResult, ScalingReport, analyze_scaling, fit_ln_n, fit_log_time

__version__ = "0.1.0"

__all__ = [
    "ClusterWeightDistribution",
    "ConfigError",
    "CouplingSet",
    "DEFAULT_COUPLING_SCALE",
    "DenseState",
    "EnsembleConfig",
    "EnsembleSummary",
    "EntropyTrace",
    "FitResult",
    "GeometryConfig",
    "IntensitySpectrum",
    "NotEquilibratedError",
    "Orientation",
    "RunConfig",
    "ScalingReport",
    "analyze_scaling",
    "build_bath",
    "cluster_weights",
    "encoded_signal",
    "entanglement_entropy",
    "entropy_vs_size",
    "equilibration_time",
    "evolve",
    "fid",
    "fid_configuration_sum",
    "fit_ln_n",
    "fit_log_time",
    "hamming_intensities",
    "initial_state",
    "load_config",
    "load_couplings",
    "parse_config",
    "pi_pulse_equivalence_check",
    "realization_rng",
    "renyi_s1",
    "renyi_s2",
    "rotate_bath",
    "run_ensemble",
    "run_protocol",
    "sample_orientation",
    "saturation_value",
]
