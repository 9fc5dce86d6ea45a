"""Command-line entry point: ``sharenf <subcommand> [--config FILE] ...``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .baselines import music2d_estimate, omp2d_estimate
from .compression import compress, dft_combiner_bank
from .config import ConfigError, RunConfig, parse_config
from .eval import io
from .eval.beampattern import beampattern, count_peaks_above
from .eval.flops import FlopParams, flop_model
from .eval.montecarlo import draw_sources, monte_carlo
from .share import share_estimate, stage1_spectrum
from .signal import Scenario, synthesize

SUBCOMMANDS = ("beampattern", "spectrum", "estimate", "monte-carlo", "flops")


def _header(cfg: RunConfig, extra=()) -> list[str]:
    lines = [io.build_comment(), f"seed: {cfg.seed}", *extra, "config:"]
    lines += ["  " + line for line in cfg.to_text().splitlines()]
    return lines


def _bank(cfg: RunConfig, K: int):
    seed = cfg.seed if cfg.combiner_policy == "random" else None
    return dft_combiner_bank(cfg.M0, K, cfg.P, cfg.combiner_policy, seed)


def _single_trial(cfg: RunConfig):
    """Sources and data of trial 0 (seed ``cfg.seed``)."""
    rng = np.random.default_rng(cfg.seed)
    L = cfg.L_values[0]
    sources = cfg.sources or draw_sources(rng, L, (cfg.source_theta_min, cfg.source_theta_max),
                                          (cfg.source_r_min, cfg.source_r_max))
    sc = Scenario(sources, cfg.N, cfg.snr_values[0], cfg.seed)
    Y, _ = synthesize(cfg.array(), sc, rng)
    return sources, Y


def cmd_beampattern(cfg: RunConfig, out_dir: Path) -> int:
    arr = cfg.array()
    target = cfg.sources[0] if cfg.sources else _single_trial(cfg)[0][0]
    angles = np.linspace(cfg.theta_min, cfg.theta_max, cfg.beampattern_points)
    spec = beampattern(arr, target, angles, target.r)
    n = count_peaks_above(spec, -3.0)
    io.write_csv(out_dir / "spectrum.csv", io.SPECTRUM_HEADER, zip(spec.angles, spec.values),
                 _header(cfg, [f"beampattern target: theta={target.theta!r} r={target.r!r}",
                               f"peaks above -3 dB: {n}"]))
    print(f"beampattern: {n} peak(s) above -3 dB")
    return 0


def cmd_spectrum(cfg: RunConfig, out_dir: Path) -> int:
    arr = cfg.array()
    bank = _bank(cfg, cfg.K[0])
    _, Y = _single_trial(cfg)
    spec = stage1_spectrum(bank, arr, compress(bank, Y), cfg.share_params().coarse_grid)
    io.write_csv(out_dir / "spectrum.csv", io.SPECTRUM_HEADER, zip(spec.angles, spec.values),
                 _header(cfg, [f"combiner: {bank.summary()}"]))
    return 0


def cmd_estimate(cfg: RunConfig, out_dir: Path) -> int:
    arr = cfg.array()
    bank = _bank(cfg, cfg.K[0])
    sources, Y = _single_trial(cfg)
    Yt = compress(bank, Y)
    L = len(sources)
    rows = []
    comments = _header(cfg, [f"combiner: {bank.summary()}"])
    for s in sources:
        print(f"truth      theta={s.theta:9.4f} deg  r={s.r:8.4f} m")
    for name in cfg.algorithms:
        if name == "share":
            est = share_estimate(bank, arr, Yt, cfg.share_params(L))
        elif name == "omp2d":
            est = omp2d_estimate(bank, arr, Yt, cfg.global_grid(), L)
        else:
            est, mspec = music2d_estimate(arr, Y, cfg.global_grid(), L, return_spectrum=True)
            T, R = np.meshgrid(mspec.angles, mspec.ranges, indexing="ij")
            io.write_csv(out_dir / "music_spectrum.csv", io.MUSIC_HEADER,
                         zip(T.ravel(), R.ravel(), mspec.values.ravel()), comments)
        for i, (t, r) in enumerate(est.entries):
            print(f"{name:<10} theta={t:9.4f} deg  r={r:8.4f} m")
            rows.append((name, i, t, r))
    io.write_csv(out_dir / "estimates.csv", io.ESTIMATES_HEADER, rows, comments)
    return 0


def cmd_monte_carlo(cfg: RunConfig, out_dir: Path) -> int:
    rows = []
    for run in cfg.runs():
        res = monte_carlo(run)
        rows.extend(res.rows)
        for rec in res.records:
            print(f"{run.scenario:<22} {rec.algorithm:<8} theta={rec.rmse_theta:.4f} deg "
                  f"range={rec.rmse_range:.4f} m pos={rec.rmse_pos:.4f} m "
                  f"failures={rec.failures}/{rec.trials}")
    rows.sort(key=lambda r: (r.snr_db, r.K, r.L, r.trial))
    table = [(r.trial, r.algorithm, r.snr_db, r.L, r.K, r.theta_rmse_deg, r.range_rmse_m,
              r.pos_rmse_m, r.failed) for r in rows]
    io.write_csv(out_dir / "metrics.csv", io.METRICS_HEADER, table,
                 _header(cfg, [io.AGGREGATION_NOTE]))
    return 0


def cmd_flops(cfg: RunConfig, out_dir: Path) -> int:
    params = FlopParams(M=cfg.P * cfg.M0, P=cfg.P, M0=cfg.M0, K=cfg.K[0], N=cfg.N,
                        L=cfg.L_values[0], G_theta=cfg.G_theta, G_r=cfg.G_r,
                        G_theta_c=cfg.coarse_G_theta, G_delta=cfg.G_delta)
    est = flop_model(params)
    io.write_csv(out_dir / "flops.csv", io.FLOPS_HEADER, [(e.algorithm, e.flops) for e in est],
                 _header(cfg))
    for e in est:
        print(f"{e.algorithm:<8} {e.flops:.3e}")
    return 0


COMMANDS = {
    "beampattern": cmd_beampattern,
    "spectrum": cmd_spectrum,
    "estimate": cmd_estimate,
    "monte-carlo": cmd_monte_carlo,
    "flops": cmd_flops,
}


def dispatch(subcommand: str, cfg: RunConfig, out_dir: str | Path = ".") -> int:
    if subcommand not in COMMANDS:
        raise ValueError(f"unknown subcommand {subcommand!r}")
    return COMMANDS[subcommand](cfg, Path(out_dir))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value config file")
    common.add_argument("--out-dir", type=Path, default=Path("."))
    common.add_argument("--trials", type=int)
    common.add_argument("--snr-db", type=float, action="append",
                        help="SNR in dB; repeat for a sweep")
    common.add_argument("--noiseless", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="sharenf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.snr_db:
        overrides["snr_db"] = tuple(args.snr_db)
    if args.noiseless:
        overrides["noiseless"] = True
    try:
        cfg = parse_config(args.config, overrides=overrides)
        return dispatch(args.command, cfg, args.out_dir)
    except (ConfigError, ValueError, RuntimeError) as exc:
        print(f"sharenf: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
