"""CSV serialization of ensemble results.

Two artifacts per run:

* ``traces.csv``: per-time ensemble means/spreads of FID and the entropies.
* ``intensities.csv``: per-(time, order) mean/spread of the intensities.

Times are serialized in microseconds; values use 17 significant digits so a
round trip reproduces the binary doubles exactly.
"""

from __future__ import annotations

import csv
import os

import numpy as np

from .ensemble import EnsembleSummary

__all__ = [
    "TRACES_HEADER",
    "INTENSITIES_HEADER",
    "emit_traces",
    "read_traces",
    "read_intensities",
]

TRACES_HEADER = [
    "time_us",
    "fid_mean",
    "fid_std",
    "s_ent_mean",
    "s_ent_std",
    "s1_mean",
    "s1_std",
    "s2_mean",
    "s2_std",
]

INTENSITIES_HEADER = ["time_us", "n", "intensity_mean", "intensity_std"]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit_traces(summary: EnsembleSummary, out_dir) -> dict[str, str]:
    """Write traces.csv and intensities.csv into out_dir; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "traces": os.path.join(out_dir, "traces.csv"),
        "intensities": os.path.join(out_dir, "intensities.csv"),
    }
    times_us = summary.times * 1e6

    try:
        with open(paths["traces"], "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACES_HEADER)
            columns = (
                summary.fid_mean,
                summary.fid_std,
                summary.s_ent_mean,
                summary.s_ent_std,
                summary.s1_mean,
                summary.s1_std,
                summary.s2_mean,
                summary.s2_std,
            )
            for i, t in enumerate(times_us):
                writer.writerow([_fmt(t)] + [_fmt(col[i]) for col in columns])

        orders = np.arange(-summary.n_spins, summary.n_spins + 1)
        with open(paths["intensities"], "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(INTENSITIES_HEADER)
            for i, t in enumerate(times_us):
                for j, n in enumerate(orders):
                    writer.writerow(
                        [
                            _fmt(t),
                            str(int(n)),
                            _fmt(summary.intensity_mean[i, j]),
                            _fmt(summary.intensity_std[i, j]),
                        ]
                    )
    except OSError as exc:
        raise OSError(f"failed writing ensemble CSVs to {out_dir}: {exc}") from exc
    return paths


def _read_csv(path, expected_header):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != expected_header:
            raise ValueError(f"{path}: unexpected header {header}")
        rows = [[float(cell) for cell in row] for row in reader]
    return np.asarray(rows)


def read_traces(path) -> dict[str, np.ndarray]:
    """Parse a traces.csv back into column arrays keyed by header name."""
    data = _read_csv(path, TRACES_HEADER)
    return {name: data[:, i] for i, name in enumerate(TRACES_HEADER)}


def read_intensities(path) -> dict[str, np.ndarray]:
    """Parse an intensities.csv back into column arrays keyed by header name."""
    data = _read_csv(path, INTENSITIES_HEADER)
    return {name: data[:, i] for i, name in enumerate(INTENSITIES_HEADER)}
