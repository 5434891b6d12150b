"""Command-line entry point.

Subcommands: ``verify`` (property battery, exit 0/1/2), ``norm`` (Luxemburg
or weak norm of a corpus field), ``op`` (apply a maximal kernel and write
the output field), ``charac`` (characterization report files), ``bench``
(fast-vs-reference kernel timings with checksum cross-checks), and
``calibrate`` (group constants).

Exit codes: 0 success, 1 a check or checksum failed, 2 configuration error.
Configuration errors are detected before any output file is written.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .checks import report_dict, run_all_checks
from .config import ConfigError, Prepared, load_config, parse_young, prepare
from .corpus import make_field
from .fields import whole_box
from .io import read_field_csv, write_csv, write_field_csv, write_json
from .lipschitz import characterization_report
from .maximal import OPERATOR_TAGS, apply_operator, bind_family
from .norms import luxemburg_norm, weak_norm

__all__ = ["main"]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="path to the TOML run config")
    p.add_argument("--out", default=None, help="output directory override")
    p.add_argument("--seed", type=int, default=None, help="seed override")
    p.add_argument("--threads", type=int, default=None, help="worker threads")
    p.add_argument(
        "--grid-scale",
        choices=("small", "default", "large"),
        default="default",
        help="halve or double the configured resolution",
    )


def _prepare(args) -> Prepared:
    config = load_config(args.config)
    if args.seed is not None:
        config.output["seed"] = args.seed
    if args.out is not None:
        config.output["dir"] = args.out
    if args.threads is not None:
        config.output["threads"] = args.threads
    if args.grid_scale != "default":
        pts = []
        for n in config.grid["points"]:
            n = int(n)
            pts.append((n - 1) // 2 + 1 if args.grid_scale == "small" else 2 * (n - 1) + 1)
        config.grid = dict(config.grid, points=pts)
    return prepare(config)


def _outdir(prep: Prepared) -> Path:
    out = prep.config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    return out


def _field_by_spec(prep: Prepared, text: str):
    """A field from 'corpus tag' or an existing CSV path."""
    if Path(text).is_file():
        return read_field_csv(text, prep.grid)
    return make_field(text, prep.grid, seed=prep.config.seed)


def cmd_verify(args) -> int:
    prep = _prepare(args)
    results = run_all_checks(prep, threads=prep.config.threads)
    report = report_dict(results)
    report["group_constants"] = {
        "kind": prep.group.kind,
        "Q": prep.group.Q,
        "c1": prep.group.c1,
        "c0": prep.group.c0,
        "calibration_resolution": prep.group.calibration_resolution,
        "c0_samples": prep.group.c0_samples,
    }
    out = _outdir(prep)
    write_json(report, out / "verify.json")
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.note}")
    if report["all_passed"]:
        print(f"verify: all {len(results)} checks passed")
        return 0
    failed = [r.name for r in results if not r.passed]
    print(f"verify: FAILED checks: {', '.join(failed)}", file=sys.stderr)
    return 1


def cmd_norm(args) -> int:
    prep = _prepare(args)
    f = _field_by_spec(prep, args.field)
    phi = parse_young(args.young)
    region = whole_box(prep.grid)
    res = (weak_norm if args.weak else luxemburg_norm)(f, phi, region)
    payload = {
        "value": res.value,
        "iterations": res.iterations,
        "converged": res.converged,
    }
    out = _outdir(prep)
    write_json(payload, out / "norm.json")
    print(payload)
    return 0


def cmd_op(args) -> int:
    prep = _prepare(args)
    f = _field_by_spec(prep, args.field)
    b = _field_by_spec(prep, args.b) if args.b else None
    out_field = apply_operator(
        args.op,
        f,
        prep.family,
        alpha=args.alpha,
        b=b,
        oracle=args.oracle,
        threads=prep.config.threads,
    )
    out = _outdir(prep)
    path = out / f"op-{args.op}.csv"
    write_field_csv(out_field, path)
    print(f"wrote {path} (checksum {np.sum(out_field.values)!r})")
    return 0


def cmd_charac(args) -> int:
    prep = _prepare(args)
    cfg = prep.config.charac
    beta = float(cfg.get("beta", 0.5))
    phi = parse_young(cfg.get("phi", "power:1.5"))
    b_tag = args.b or cfg.get("b", "gauge-power:0.5")
    b = _field_by_spec(prep, b_tag)
    corpus_tags = cfg.get("corpus")
    corpus = (
        [(t, make_field(t, prep.grid, seed=prep.config.seed)) for t in corpus_tags]
        if corpus_tags
        else prep.corpus
    )
    report = characterization_report(
        b,
        beta,
        phi,
        prep.family,
        corpus=corpus,
        n_probe_centers=int(cfg.get("n_probe_centers", 10)),
        seed=prep.config.seed,
        threads=prep.config.threads,
    )
    out = _outdir(prep)
    write_csv(
        ["ball_id", "center", "radius", "F1", "F2", "F3", "F4", "lip_ball"],
        [
            [r["ball_id"], r["center"], r["radius"], r["F1"], r["F2"], r["F3"],
             r["F4"], r["lip_ball"]]
            for r in report.per_ball
        ],
        out / "charac-balls.csv",
    )
    write_csv(
        ["radius", "sup_F2"],
        [[r, v] for r, v in sorted(report.per_radius_sup_F2.items())],
        out / "charac-scale.csv",
    )
    summary = {
        "beta": report.beta,
        "phi": report.phi_label,
        "psi": report.psi_label,
        "sup_F1": report.sup_F1,
        "sup_F2": report.sup_F2,
        "sup_F3": report.sup_F3,
        "sup_F4": report.sup_F4,
        "sup_lip_ball": report.sup_lip_ball,
        "sup_ratio": report.sup_ratio,
        "ratios": [
            {
                "operator": r.operator,
                "field": r.field_tag,
                "target_norm": r.target_norm,
                "source_norm": r.source_norm,
                "ratio": r.ratio,
                "note": r.note,
            }
            for r in report.ratio_rows
        ],
        "verdict_notes": report.verdict_notes,
    }
    write_json(summary, out / "charac-summary.json")
    for note in report.verdict_notes:
        print(f"note: {note}")
    print(f"wrote {out / 'charac-summary.json'}")
    return 0


@dataclass
class BenchResult:
    kernel: str
    grid_nodes: int
    family_size: int
    wall_time: float
    node_throughput: float
    checksum: float


def cmd_bench(args) -> int:
    prep = _prepare(args)
    grid = prep.grid
    fam = prep.family
    bound = bind_family(fam, grid)
    seed = prep.config.seed
    f = make_field("random-smooth", grid, seed=seed)
    b = make_field("random-smooth", grid, seed=seed + 1)
    oracle_max = int(prep.config.bench.get("oracle_max_nodes", 2000))
    tags = prep.config.bench.get("operators", list(OPERATOR_TAGS))
    rows: list[BenchResult] = []
    mismatch = False
    for tag in tags:
        t0 = time.perf_counter()
        fast = apply_operator(tag, f, bound, alpha=0.0, b=b,
                              threads=prep.config.threads)
        dt = time.perf_counter() - t0
        rows.append(BenchResult(
            f"{tag}/fast", grid.n_nodes, len(fam.balls), dt,
            grid.n_nodes / dt, float(np.sum(fast.values))))
        if grid.n_nodes <= oracle_max:
            t0 = time.perf_counter()
            ref = apply_operator(tag, f, fam, alpha=0.0, b=b, oracle=True)
            dt = time.perf_counter() - t0
            rows.append(BenchResult(
                f"{tag}/oracle", grid.n_nodes, len(fam.balls), dt,
                grid.n_nodes / dt, float(np.sum(ref.values))))
            if not np.array_equal(fast.values, ref.values):
                mismatch = True
                print(f"bench: checksum mismatch for {tag}", file=sys.stderr)
        else:
            print(f"bench: oracle skipped for {tag} "
                  f"({grid.n_nodes} nodes > guard {oracle_max})")
    out = _outdir(prep)
    write_csv(
        ["kernel", "grid_nodes", "family_size", "wall_time",
         "node_throughput", "checksum"],
        [[r.kernel, r.grid_nodes, r.family_size, r.wall_time,
          r.node_throughput, r.checksum] for r in rows],
        out / "bench.csv",
    )
    for r in rows:
        print(f"{r.kernel}: {r.wall_time:.4f}s, {r.node_throughput:,.0f} nodes/s, "
              f"checksum {r.checksum!r}")
    return 1 if mismatch else 0


def cmd_calibrate(args) -> int:
    prep = _prepare(args)
    spec = prep.group
    payload = {
        "kind": spec.kind,
        "coord_dim": spec.coord_dim,
        "Q": spec.Q,
        "c1": spec.c1,
        "c0": spec.c0,
        "calibration_resolution": spec.calibration_resolution,
        "c0_samples": spec.c0_samples,
    }
    out = _outdir(prep)
    write_json(payload, out / "calibration.json")
    print(payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orlimax",
        description="maximal operators, commutators, and Orlicz norms on "
        "discretized homogeneous groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the property battery")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("norm", help="Orlicz norm of a field")
    _add_common(p)
    p.add_argument("--field", required=True, help="corpus tag or field CSV path")
    p.add_argument("--young", default="power:2", help="young function, e.g. power:2")
    p.add_argument("--weak", action="store_true", help="weak norm instead of strong")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("op", help="apply a maximal kernel")
    _add_common(p)
    p.add_argument("--op", required=True, choices=OPERATOR_TAGS)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--field", required=True, help="corpus tag or field CSV path")
    p.add_argument("--b", default=None, help="symbol field for commutators")
    p.add_argument("--oracle", action="store_true", help="reference kernel")
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("charac", help="characterization report")
    _add_common(p)
    p.add_argument("--b", default=None, help="symbol field tag override")
    p.set_defaults(func=cmd_charac)

    p = sub.add_parser("bench", help="kernel benchmark with checksum checks")
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("calibrate", help="calibrate group constants")
    _add_common(p)
    p.set_defaults(func=cmd_calibrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
