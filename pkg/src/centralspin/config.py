"""Run configuration: sectioned key/value config files with CLI overrides.

Format is INI-style, e.g.::

    [geometry]
    spins_per_ring = 5
    n_rings = 3
    base_radius_nm = 1.0
    radius_growth_factor = 1.32
    coupling_scale_rad_s = 3095.8
    couplings_file = my_couplings.txt   ; optional, omega/2pi in Hz per line

    [ensemble]
    n_realizations = 300
    master_seed = 0
    t_max_us = 8000
    n_steps = 801

    [protocol]
    n_phases = 32

    [output]
    directory = out

Every key is optional (defaults reproduce the N = 15, 300-realization setup);
unknown sections or keys are rejected.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace

from .ensemble import EnsembleConfig
from .geometry import GeometryConfig

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config", "apply_overrides"]


class ConfigError(ValueError):
    """Invalid or unknown configuration entry."""


@dataclass(frozen=True)
class RunConfig:
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    n_phases: int | None = None  # None: next power of two >= 2N+2
    out_dir: str = "out"
    couplings_file: str | None = None

    @property
    def geometry(self) -> GeometryConfig:
        return self.ensemble.geometry


_SCHEMA = {
    "geometry": {
        "spins_per_ring": int,
        "n_rings": int,
        "base_radius_nm": float,
        "radius_growth_factor": float,
        "coupling_scale_rad_s": float,
        "couplings_file": str,
    },
    "ensemble": {
        "n_realizations": int,
        "master_seed": int,
        "t_max_us": float,
        "n_steps": int,
    },
    "protocol": {"n_phases": int},
    "output": {"directory": str},
}


def _converted(section: str, key: str, raw: str):
    kind = _SCHEMA[section][key]
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(
            f"[{section}] {key}: expected {kind.__name__}, got {raw!r}"
        ) from None


def parse_config(text: str) -> RunConfig:
    """Parse config text; unknown keys are errors, defaults fill the gaps."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None

    values: dict[str, dict[str, object]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")
            values[section][key] = _converted(section, key, raw)

    geo = values.get("geometry", {})
    ens = values.get("ensemble", {})
    kwargs = {}
    if "spins_per_ring" in geo:
        kwargs["spins_per_ring"] = geo["spins_per_ring"]
    if "n_rings" in geo:
        kwargs["n_rings"] = geo["n_rings"]
    if "base_radius_nm" in geo:
        kwargs["base_radius"] = geo["base_radius_nm"]
    if "radius_growth_factor" in geo:
        kwargs["radius_growth_factor"] = geo["radius_growth_factor"]
    if "coupling_scale_rad_s" in geo:
        kwargs["coupling_scale"] = geo["coupling_scale_rad_s"]
    try:
        geometry = GeometryConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"[geometry] {exc}") from None

    ens_kwargs = {"geometry": geometry}
    if "n_realizations" in ens:
        ens_kwargs["n_realizations"] = ens["n_realizations"]
    if "master_seed" in ens:
        ens_kwargs["master_seed"] = ens["master_seed"]
    if "t_max_us" in ens:
        ens_kwargs["t_max"] = ens["t_max_us"] * 1e-6
    if "n_steps" in ens:
        ens_kwargs["n_steps"] = ens["n_steps"]
    try:
        ensemble = EnsembleConfig(**ens_kwargs)
    except ValueError as exc:
        raise ConfigError(f"[ensemble] {exc}") from None

    n_phases = values.get("protocol", {}).get("n_phases")
    if n_phases is not None and n_phases < 2:
        raise ConfigError("[protocol] n_phases must be >= 2")

    return RunConfig(
        ensemble=ensemble,
        n_phases=n_phases,
        out_dir=values.get("output", {}).get("directory", "out"),
        couplings_file=geo.get("couplings_file"),
    )


def load_config(path) -> RunConfig:
    try:
        with open(path) as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None


def apply_overrides(
    cfg: RunConfig,
    seed: int | None = None,
    n_spins: int | None = None,
    realizations: int | None = None,
    t_max_us: float | None = None,
    steps: int | None = None,
    out_dir: str | None = None,
) -> RunConfig:
    """Apply CLI flag overrides on top of a parsed config."""
    ensemble = cfg.ensemble
    geometry = ensemble.geometry
    if n_spins is not None:
        if n_spins % geometry.spins_per_ring != 0 or n_spins < geometry.spins_per_ring:
            raise ConfigError(
                f"--nspins must be a positive multiple of spins_per_ring="
                f"{geometry.spins_per_ring}"
            )
        geometry = replace(geometry, n_rings=n_spins // geometry.spins_per_ring)
    updates: dict[str, object] = {"geometry": geometry}
    if seed is not None:
        updates["master_seed"] = seed
    if realizations is not None:
        updates["n_realizations"] = realizations
    if t_max_us is not None:
        updates["t_max"] = t_max_us * 1e-6
    if steps is not None:
        updates["n_steps"] = steps
    try:
        ensemble = replace(ensemble, **updates)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return replace(
        cfg, ensemble=ensemble, out_dir=out_dir if out_dir is not None else cfg.out_dir
    )
