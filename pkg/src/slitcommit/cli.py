"""Command-line entry point.

Subcommands: simulate, verify, attack-sweep, pattern, nogo-demo.
Exit codes: 0 success/accept, 2 usage or malformed input, 3 verification
rejected.  All outputs are deterministic functions of the config and seed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .config import RunConfig, Thresholds
from .decay import species_by_name
from .errors import ConfigInvalid, MalformedUnveil, SlitCommitError
from .nogo import mount_attack, random_concealing_pair, random_perturbed_pair
from .optics import SlitGeometry, doubleslit_pdf, envelope_pdf
from .protocol import attack_sweep, run_commit, unveil, verify
from .records import BobView, SlitSetting, UnveilMessage, read_jsonl, write_jsonl
from .seeding import derive_rng
from .strategies import STRATEGY_NAMES, strategy_by_name
from .errors import ImpossibleAttack

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_REJECT = 3


def _add_geometry_flags(parser, default: SlitGeometry):
    parser.add_argument("--slit-width", type=float, default=default.slit_width)
    parser.add_argument("--slit-separation", type=float,
                        default=default.slit_separation)
    parser.add_argument("--wavelength", type=float, default=default.wavelength)
    parser.add_argument("--screen-distance", type=float,
                        default=default.screen_distance)
    parser.add_argument("--halfwidth", type=float,
                        default=default.screen_halfwidth)
    parser.add_argument("--grid", type=int, default=default.grid_points)


def _geometry_from_args(args) -> SlitGeometry:
    return SlitGeometry(slit_width=args.slit_width,
                        slit_separation=args.slit_separation,
                        wavelength=args.wavelength,
                        screen_distance=args.screen_distance,
                        screen_halfwidth=args.halfwidth,
                        grid_points=args.grid)


def _add_run_flags(parser):
    base = RunConfig()
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON config file; flags override its fields")
    parser.add_argument("--n", type=int, default=None,
                        help=f"detections to collect (default {base.n_detected})")
    parser.add_argument("--bit", type=int, choices=(0, 1), default=0)
    parser.add_argument("--strategy", choices=STRATEGY_NAMES, default="honest")
    parser.add_argument("--particle", default=None,
                        help="neutron, muon, or a custom name with --half-life")
    parser.add_argument("--half-life", type=float, default=None)
    parser.add_argument("--k", type=float, default=None,
                        help="deadline multiplier (half-lives after last detection)")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--epsilon", type=float, default=None)
    parser.add_argument("--inter-arrival", type=float, default=None,
                        help="mean seconds between emissions (default: one half-life)")
    _add_geometry_flags(parser, base.geometry)


def _config_from_args(args) -> RunConfig:
    if args.config is not None:
        config = RunConfig.from_dict(json.loads(args.config.read_text()))
    else:
        config = RunConfig()
    updates = {}
    if args.n is not None:
        updates["n_detected"] = args.n
    if args.particle is not None:
        updates["species"] = species_by_name(args.particle, args.half_life)
    if args.k is not None:
        from .decay import DeadlinePolicy
        updates["deadline"] = DeadlinePolicy(args.k)
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.inter_arrival is not None:
        updates["inter_arrival_mean"] = args.inter_arrival
    geom = _geometry_from_args(args)
    if geom != config.geometry:
        updates["geometry"] = geom
    thresholds = config.thresholds
    if args.alpha is not None or args.epsilon is not None:
        thresholds = Thresholds(
            alpha=args.alpha if args.alpha is not None else thresholds.alpha,
            epsilon=args.epsilon if args.epsilon is not None else thresholds.epsilon,
            min_events=thresholds.min_events,
            anti_fringe_min=thresholds.anti_fringe_min,
            gof_level_fraction=thresholds.gof_level_fraction,
            n_bins=thresholds.n_bins)
        updates["thresholds"] = thresholds
    return config.with_updates(**updates) if updates else config


def _cmd_simulate(args) -> int:
    config = _config_from_args(args)
    strategy = strategy_by_name(args.strategy, args.bit)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rng = derive_rng(config.seed, 0)
    transcript = run_commit(config, strategy, rng)
    msg = unveil(strategy, transcript, rng)

    for name, (header, rows) in (
        ("public.jsonl", transcript.public_rows()),
        ("bob_private.jsonl", transcript.bob_rows()),
        ("alice_private.jsonl", transcript.alice_rows()),
        ("unveil.jsonl", msg.rows()),
    ):
        write_jsonl(out_dir / name, header, rows)

    print(f"strategy={strategy.name} detected={transcript.n_detected} "
          f"emitted={transcript.n_emitted} "
          f"commit_end={transcript.commit_end_time:.6g}s out={out_dir}")
    return EXIT_OK


def _bob_view_from_file(path: Path) -> tuple[BobView, SlitGeometry, Thresholds]:
    header, rows = read_jsonl(path)
    try:
        config = RunConfig.from_dict(header["config"])
        settings = {int(r["index"]): SlitSetting(r["setting"])
                    for r in rows if r.get("detected")}
        view = BobView(n_detected=int(header["n_detected"]),
                       settings=settings,
                       commit_end_time=float(header["commit_end_time"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedUnveil(f"{path}: not a receiver transcript: {exc}") from exc
    return view, config.geometry, config.thresholds


def _cmd_verify(args) -> int:
    view, geometry, thresholds = _bob_view_from_file(Path(args.bob))
    if args.alpha is not None or args.epsilon is not None:
        thresholds = Thresholds(
            alpha=args.alpha if args.alpha is not None else thresholds.alpha,
            epsilon=args.epsilon if args.epsilon is not None else thresholds.epsilon,
            min_events=thresholds.min_events,
            anti_fringe_min=thresholds.anti_fringe_min,
            gof_level_fraction=thresholds.gof_level_fraction,
            n_bins=thresholds.n_bins)
    header, rows = read_jsonl(Path(args.unveil))
    msg = UnveilMessage.from_rows(header, rows)
    report = verify(view, msg, thresholds, geometry)

    if args.out is not None:
        rep_header, rep_rows = report.rows()
        write_jsonl(Path(args.out), rep_header, rep_rows)
    for t in report.tests:
        status = "skip" if t.skipped else ("pass" if t.passed else "FAIL")
        print(f"{t.name}: {status} (value={t.p_value:.4g}, "
              f"threshold={t.threshold:.4g})")
    print("accepted" if report.accepted else "rejected")
    return EXIT_OK if report.accepted else EXIT_REJECT


def _cmd_attack_sweep(args) -> int:
    config = _config_from_args(args)
    grid = [int(x) for x in args.n_grid.split(",") if x.strip()]
    if not grid:
        raise ConfigInvalid("empty N grid")
    strategy = strategy_by_name(args.strategy, args.bit)
    rows = []
    for n in grid:
        point = attack_sweep(config.with_updates(n_detected=n), strategy,
                             args.reps)
        rows.append(point)
        print(f"N={point.n_detected} strategy={point.strategy} "
              f"acceptance={point.estimate:.4g} "
              f"[{point.ci_low:.4g}, {point.ci_high:.4g}] "
              f"({point.acceptances}/{point.repetitions})")
    out = Path(args.out)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["N", "strategy", "acceptances", "reps",
                         "estimate", "ci_low", "ci_high"])
        for p in rows:
            writer.writerow([p.n_detected, p.strategy, p.acceptances,
                             p.repetitions, repr(p.estimate),
                             repr(p.ci_low), repr(p.ci_high)])
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_pattern(args) -> int:
    geometry = _geometry_from_args(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, pdf in (("pattern_envelope.csv", envelope_pdf(geometry)),
                      ("pattern_doubleslit.csv", doubleslit_pdf(geometry))):
        path = out_dir / name
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "density"])
            for x, d in zip(pdf.grid, pdf.density):
                writer.writerow([repr(float(x)), repr(float(d))])
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_nogo_demo(args) -> int:
    rng = derive_rng(args.seed, 0)
    dims = tuple(int(x) for x in args.dims.split("x"))
    if len(dims) != 2:
        raise ConfigInvalid("dims must look like 2x2 or 4x4")
    rows = []
    feasible = 0
    blocked = 0
    for i in range(args.pairs):
        if i % 2 == 0:
            tc = random_concealing_pair(dims, rng, degenerate=(i % 10 == 0))
        else:
            tc = random_perturbed_pair(dims, rng)
        try:
            plan = mount_attack(tc)
            feasible += 1
            rows.append({"record": "pair", "index": i, "gap": plan.gap,
                         "status": "unitary_found", "residual": plan.residual})
        except ImpossibleAttack as exc:
            blocked += 1
            rows.append({"record": "pair", "index": i, "gap": exc.gap,
                         "status": "impossible", "residual": None})
    header = {"record": "header", "pairs": args.pairs, "dims": list(dims),
              "seed": args.seed, "feasible": feasible, "blocked": blocked}
    if args.out is not None:
        write_jsonl(Path(args.out), header, rows)
    for row in rows[: args.print_limit]:
        res = "-" if row["residual"] is None else f"{row['residual']:.3e}"
        print(f"pair {row['index']:4d}  gap={row['gap']:.3e}  "
              f"{row['status']:14s}  residual={res}")
    print(f"feasible={feasible} blocked={blocked} "
          f"(matching marginals admit a local-unitary bit flip; "
          f"split marginals block it)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slitcommit",
        description="Double-slit bit-commitment simulator and analysis tool")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a commit phase and unveil")
    _add_run_flags(p_sim)
    p_sim.add_argument("--out-dir", default="run_out")
    p_sim.set_defaults(func=_cmd_simulate)

    p_ver = sub.add_parser("verify", help="check an unveil against a transcript")
    p_ver.add_argument("--bob", required=True,
                       help="receiver-private transcript (bob_private.jsonl)")
    p_ver.add_argument("--unveil", required=True)
    p_ver.add_argument("--alpha", type=float, default=None)
    p_ver.add_argument("--epsilon", type=float, default=None)
    p_ver.add_argument("--out", default=None, help="report file (JSON lines)")
    p_ver.set_defaults(func=_cmd_verify)

    p_swp = sub.add_parser("attack-sweep",
                           help="acceptance probability versus N")
    _add_run_flags(p_swp)
    p_swp.add_argument("--n-grid", default="50,100,200,400,800")
    p_swp.add_argument("--reps", type=int, default=200)
    p_swp.add_argument("--out", default="sweep.csv")
    p_swp.set_defaults(func=_cmd_attack_sweep)

    p_pat = sub.add_parser("pattern", help="emit the two screen distributions")
    _add_geometry_flags(p_pat, SlitGeometry.reference())
    p_pat.add_argument("--out-dir", default="pattern_out")
    p_pat.set_defaults(func=_cmd_pattern)

    p_ng = sub.add_parser("nogo-demo",
                          help="purification-attack demo on random toy pairs")
    p_ng.add_argument("--pairs", type=int, default=20)
    p_ng.add_argument("--dims", default="3x3")
    p_ng.add_argument("--seed", type=int, default=7)
    p_ng.add_argument("--out", default=None)
    p_ng.add_argument("--print-limit", type=int, default=10)
    p_ng.set_defaults(func=_cmd_nogo_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors already; normalize other codes
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except MalformedUnveil as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigInvalid, SlitCommitError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
