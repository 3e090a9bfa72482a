"""Command-line interface.

Subcommands::

    fid          FID and entanglement-entropy traces (ensemble or fixed couplings)
    intensities  coherence-order intensity spectra over time
    entropy      correlation entropy traces S1/S2
    ensemble     full pipeline -> traces.csv + intensities.csv
    scaling      bath-size sweep + ln(N) fits -> report
    verify       brute-force oracle vs analytic engine; nonzero exit on failure
    plot-data    per-figure data files (FID/entropy, intensities, scaling)

Exit codes: 0 success, 2 validation error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import dynamics, oracle
from .config import ConfigError, RunConfig, apply_overrides, load_config
from .ensemble import evaluate_couplings, run_ensemble, run_realization
from .geometry import build_bath, load_couplings, realization_rng, sample_orientation
from .io import emit_traces, _fmt
from .scaling import analyze_scaling

__all__ = ["main"]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VERIFY = 3


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="FILE", help="config file (INI-style)")
    p.add_argument("--seed", type=int, help="master seed override")
    p.add_argument(
        "--nspins", type=int, help="bath size (must be a multiple of the ring size)"
    )
    p.add_argument("--realizations", type=int, help="number of orientations")
    p.add_argument("--tmax-us", type=float, help="time grid end, microseconds")
    p.add_argument("--steps", type=int, help="number of time-grid points")
    p.add_argument("--out", metavar="DIR", help="output directory")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="centralspin",
        description="Central-spin correlation growth simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in [
        ("fid", "FID and entanglement entropy traces"),
        ("intensities", "coherence-order intensity spectra over time"),
        ("entropy", "correlation entropy traces S1/S2"),
    ]:
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        p.add_argument(
            "--couplings",
            metavar="FILE",
            help="fixed coupling list (omega/2pi in Hz, one per line) "
            "instead of an orientation ensemble",
        )

    _add_common(sub.add_parser("ensemble", help="full pipeline -> CSV artifacts"))

    p = sub.add_parser("scaling", help="bath-size sweep and ln(N) fits")
    _add_common(p)
    p.add_argument(
        "--sizes",
        default="5,10,15,20,25,30",
        help="comma-separated bath sizes (default 5,10,15,20,25,30)",
    )
    p.add_argument(
        "--large-size-realizations",
        type=int,
        default=100,
        help="realization count for sizes above 20 (default 100)",
    )

    p = sub.add_parser("verify", help="oracle-vs-analytic verification suite")
    _add_common(p)
    p.add_argument("--couplings", metavar="FILE", help="fixed coupling list to verify")
    p.add_argument(
        "--instances", type=int, default=5, help="random orientations to test (default 5)"
    )
    p.add_argument(
        "--times", type=int, default=4, help="random times per instance (default 4)"
    )

    p = sub.add_parser("plot-data", help="emit per-figure data files")
    _add_common(p)
    p.add_argument(
        "--figure",
        choices=["fid-entropy", "intensities", "scaling"],
        default="fid-entropy",
        help="which figure layout to emit",
    )
    p.add_argument("--sizes", default="5,10,15,20,25,30", help="sizes for --figure scaling")
    return parser


def _load_run_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    return apply_overrides(
        cfg,
        seed=args.seed,
        n_spins=args.nspins,
        realizations=args.realizations,
        t_max_us=args.tmax_us,
        steps=args.steps,
        out_dir=args.out,
    )


def _write_csv(path, header, rows):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _trace_results(cfg: RunConfig, couplings_file, n_jobs):
    """Either a fixed-couplings single trace or the full ensemble summary."""
    if couplings_file:
        c = load_couplings(couplings_file)
        times = cfg.ensemble.times
        res = evaluate_couplings(c, times)
        zero = np.zeros_like(times)
        return times, {
            "fid_mean": res.fid,
            "fid_std": zero,
            "s_ent_mean": res.s_ent,
            "s_ent_std": zero,
            "s1_mean": res.s1,
            "s1_std": zero,
            "s2_mean": res.s2,
            "s2_std": zero,
            "intensity_mean": res.intensities,
            "intensity_std": np.zeros_like(res.intensities),
        }
    summary = run_ensemble(cfg.ensemble, n_jobs=n_jobs)
    return summary.times, {
        "fid_mean": summary.fid_mean,
        "fid_std": summary.fid_std,
        "s_ent_mean": summary.s_ent_mean,
        "s_ent_std": summary.s_ent_std,
        "s1_mean": summary.s1_mean,
        "s1_std": summary.s1_std,
        "s2_mean": summary.s2_mean,
        "s2_std": summary.s2_std,
        "intensity_mean": summary.intensity_mean,
        "intensity_std": summary.intensity_std,
    }


def _cmd_fid(args) -> int:
    cfg = _load_run_config(args)
    times, cols = _trace_results(cfg, args.couplings, args.jobs)
    rows = [
        [_fmt(t * 1e6)]
        + [_fmt(cols[k][i]) for k in ("fid_mean", "fid_std", "s_ent_mean", "s_ent_std")]
        for i, t in enumerate(times)
    ]
    path = _write_csv(
        os.path.join(cfg.out_dir, "fid.csv"),
        ["time_us", "fid_mean", "fid_std", "s_ent_mean", "s_ent_std"],
        rows,
    )
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_intensities(args) -> int:
    cfg = _load_run_config(args)
    times, cols = _trace_results(cfg, args.couplings, args.jobs)
    n = (cols["intensity_mean"].shape[1] - 1) // 2
    rows = []
    for i, t in enumerate(times):
        for j, order in enumerate(range(-n, n + 1)):
            rows.append(
                [
                    _fmt(t * 1e6),
                    str(order),
                    _fmt(cols["intensity_mean"][i, j]),
                    _fmt(cols["intensity_std"][i, j]),
                ]
            )
    path = _write_csv(
        os.path.join(cfg.out_dir, "intensities.csv"),
        ["time_us", "n", "intensity_mean", "intensity_std"],
        rows,
    )
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_entropy(args) -> int:
    cfg = _load_run_config(args)
    times, cols = _trace_results(cfg, args.couplings, args.jobs)
    rows = [
        [_fmt(t * 1e6)]
        + [_fmt(cols[k][i]) for k in ("s1_mean", "s1_std", "s2_mean", "s2_std")]
        for i, t in enumerate(times)
    ]
    path = _write_csv(
        os.path.join(cfg.out_dir, "entropy.csv"),
        ["time_us", "s1_mean", "s1_std", "s2_mean", "s2_std"],
        rows,
    )
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_ensemble(args) -> int:
    cfg = _load_run_config(args)
    summary = run_ensemble(cfg.ensemble, n_jobs=args.jobs)
    paths = emit_traces(summary, cfg.out_dir)
    for path in paths.values():
        print(f"wrote {path}")
    return EXIT_OK


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = sorted({int(s) for s in text.split(",") if s.strip()})
    except ValueError:
        raise ConfigError(f"--sizes: expected comma-separated integers, got {text!r}")
    if not sizes:
        raise ConfigError("--sizes: no sizes given")
    return sizes


def _cmd_scaling(args) -> int:
    cfg = _load_run_config(args)
    sizes = _parse_sizes(args.sizes)
    per_size = {
        n: args.large_size_realizations for n in sizes if n > 20
    }
    report = analyze_scaling(
        sizes, cfg.ensemble, realizations_per_size=per_size, n_jobs=args.jobs
    )
    rows = []
    for p in report.points:
        rows.append(["beta", str(p.n_spins), _fmt(p.beta)])
        rows.append(["s2_saturation", str(p.n_spins), _fmt(p.s2_saturation)])
        rows.append(["t_eq_us", str(p.n_spins), _fmt(p.t_eq * 1e6)])
    for name, fit in [("beta", report.beta_fit), ("s2_saturation", report.saturation_fit)]:
        rows.append([f"{name}_fit_intercept", "", _fmt(fit.intercept)])
        rows.append([f"{name}_fit_slope", "", _fmt(fit.slope)])
        rows.append([f"{name}_fit_r_squared", "", _fmt(fit.r_squared)])
    csv_path = _write_csv(
        os.path.join(cfg.out_dir, "scaling.csv"), ["quantity", "n_spins", "value"], rows
    )
    text = report.text()
    report_path = os.path.join(cfg.out_dir, "scaling_report.txt")
    with open(report_path, "w") as fh:
        fh.write(text + "\n")
    print(text)
    print(f"wrote {csv_path}")
    print(f"wrote {report_path}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    cfg = _load_run_config(args)
    geometry = cfg.geometry
    if geometry.n_spins > oracle.DENSE_SPIN_CAP:
        raise ConfigError(
            f"verify needs n_spins <= {oracle.DENSE_SPIN_CAP} for the dense oracle"
        )
    rng = np.random.default_rng(cfg.ensemble.master_seed)
    if args.couplings:
        coupling_sets = [load_couplings(args.couplings)]
    else:
        coupling_sets = [
            build_bath(geometry, sample_orientation(realization_rng(cfg.ensemble.master_seed, i)))
            for i in range(args.instances)
        ]

    failures = 0

    def check(label: str, deviation: float, tol: float):
        nonlocal failures
        ok = deviation < tol
        if not ok:
            failures += 1
        print(f"  {'PASS' if ok else 'FAIL'}  {label}: max deviation {deviation:.3e} (tol {tol:g})")

    for idx, c in enumerate(coupling_sets):
        times = rng.uniform(1e-5, 2e-3, size=args.times)
        print(f"instance {idx} (N={c.n_spins}):")
        dev_fid = max(
            abs(dynamics.fid(c, t) - oracle.fid_configuration_sum(c, t)) for t in times
        )
        check("FID vs configuration sum", dev_fid, 1e-12)

        dev_int = 0.0
        dev_echo = 0.0
        for t in times:
            analytic = dynamics.hamming_intensities(c, t)
            protocol = oracle.run_protocol(c, t)
            dev_int = max(
                dev_int, float(np.max(np.abs(analytic.intensities - protocol.intensities)))
            )
            dev_echo = max(
                dev_echo,
                abs(dynamics.encoded_signal(c, t, 0.0) - 1.0),
                abs(
                    dynamics.encoded_signal(c, t, np.pi)
                    - np.prod(np.cos(4.0 * c.omegas * t))
                ),
            )
        check("intensities vs literal protocol", dev_int, 1e-9)
        check("echo identities SIG_0 / SIG_pi", dev_echo, 1e-10)

        equivalent = all(oracle.pi_pulse_equivalence_check(c, t) for t in times)
        check("pi-pulse reversal equivalence", 0.0 if equivalent else 1.0, 0.5)

    if failures:
        print(f"verification FAILED ({failures} checks)")
        return EXIT_VERIFY
    print("verification passed")
    return EXIT_OK


def _cmd_plot_data(args) -> int:
    cfg = _load_run_config(args)
    out = cfg.out_dir
    if args.figure == "scaling":
        sizes = _parse_sizes(args.sizes)
        per_size = {n: 100 for n in sizes if n > 20}
        from .ensemble import entropy_vs_size

        summaries = entropy_vs_size(
            sizes, cfg.ensemble, realizations_per_size=per_size, n_jobs=args.jobs
        )
        report = analyze_scaling(sizes, cfg.ensemble, summaries=summaries)
        times = cfg.ensemble.times
        header = ["time_us"] + [f"s2_mean_N{n}" for n in sizes]
        rows = [
            [_fmt(t * 1e6)] + [_fmt(summaries[n].s2_mean[i]) for n in sizes]
            for i, t in enumerate(times)
        ]
        print(f"wrote {_write_csv(os.path.join(out, 'scaling_s2_traces.csv'), header, rows)}")
        rows = [
            [str(p.n_spins), _fmt(p.beta), _fmt(report.beta_fit.predict(np.log(p.n_spins))),
             _fmt(p.s2_saturation), _fmt(report.saturation_fit.predict(np.log(p.n_spins)))]
            for p in report.points
        ]
        print(
            f"wrote "
            f"{_write_csv(os.path.join(out, 'scaling_fits.csv'), ['n_spins', 'beta', 'beta_fit', 's2_saturation', 's2_saturation_fit'], rows)}"
        )
        return EXIT_OK

    summary = run_ensemble(cfg.ensemble, n_jobs=args.jobs)
    times = summary.times
    n_examples = min(5, cfg.ensemble.n_realizations)
    examples = [
        run_realization(cfg.geometry, cfg.ensemble.master_seed, i, times)
        for i in range(n_examples)
    ]
    if args.figure == "fid-entropy":
        for name, mean, std, attr in [
            ("fid_entropy_fid.csv", summary.fid_mean, summary.fid_std, "fid"),
            ("fid_entropy_s_ent.csv", summary.s_ent_mean, summary.s_ent_std, "s_ent"),
        ]:
            header = ["time_us", "mean", "std"] + [f"realization_{i}" for i in range(n_examples)]
            rows = [
                [_fmt(t * 1e6), _fmt(mean[i]), _fmt(std[i])]
                + [_fmt(getattr(ex, attr)[i]) for ex in examples]
                for i, t in enumerate(times)
            ]
            print(f"wrote {_write_csv(os.path.join(out, name), header, rows)}")
        return EXIT_OK

    # figure "intensities": low orders over time plus the two entropies
    max_order = min(6, summary.n_spins)
    header = ["time_us"] + [f"intensity_n{n}" for n in range(max_order + 1)]
    mid = summary.n_spins
    rows = [
        [_fmt(t * 1e6)] + [_fmt(summary.intensity_mean[i, mid + n]) for n in range(max_order + 1)]
        for i, t in enumerate(times)
    ]
    print(f"wrote {_write_csv(os.path.join(out, 'intensities_orders.csv'), header, rows)}")
    header = ["time_us", "s1_mean", "s1_std", "s2_mean", "s2_std"]
    rows = [
        [_fmt(t * 1e6), _fmt(summary.s1_mean[i]), _fmt(summary.s1_std[i]),
         _fmt(summary.s2_mean[i]), _fmt(summary.s2_std[i])]
        for i, t in enumerate(times)
    ]
    print(f"wrote {_write_csv(os.path.join(out, 'intensities_entropies.csv'), header, rows)}")
    return EXIT_OK


_COMMANDS = {
    "fid": _cmd_fid,
    "intensities": _cmd_intensities,
    "entropy": _cmd_entropy,
    "ensemble": _cmd_ensemble,
    "scaling": _cmd_scaling,
    "verify": _cmd_verify,
    "plot-data": _cmd_plot_data,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
