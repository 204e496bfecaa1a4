"""Batch front door: load scenario/judgment files, dispatch, emit artifacts.

Exit codes: 0 success, 2 validation or audit refusal (the violated invariant
is printed by name), 1 internal error. Artifacts are byte-stable across
identical invocations; the run manifest additionally records wall time.
"""

from __future__ import annotations

import argparse
import sys
import time
import traceback
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from . import io as eio
from .adoption import adoption_mismatch_curve, intensity_problem_from_scenario
from .economy import audit_assumptions
from .mismatch import mismatch_curve, noncog_gap_curve
from .oracle import VERIFIED, check_proposition
from .planner import solve_informed, solve_informed_noncog, solve_naive
from .skillindex import (JudgmentSet, bootstrap_ci, elo_run,
                         pca_first_component, symmetrize_judgments)
from .tiers import tiered_mismatch_curve


class CLIError(ValueError):
    """Invalid command-line input (malformed grid, bad flag combination)."""


@dataclass
class RunManifest:
    command: str
    inputs: List[str]
    config: dict
    outputs: List[str] = field(default_factory=list)
    version: str = __version__
    seed: Optional[int] = None
    wall_time_s: float = 0.0

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "config": self.config,
            "outputs": self.outputs,
            "version": self.version,
            "seed": self.seed,
            "wall_time_s": self.wall_time_s,
        }


def parse_grid(spec: str) -> np.ndarray:
    """Parse an inclusive a:s:b grid; (b - a)/s must be integral within 1e-9."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise CLIError(f"grid must be a:s:b, got {spec!r}")
    try:
        a, s, b = (float(p) for p in parts)
    except ValueError:
        raise CLIError(f"grid bounds must be numeric, got {spec!r}") from None
    if s == 0:
        raise CLIError(f"grid step must be non-zero in {spec!r}")
    ratio = (b - a) / s
    if ratio < 0:
        raise CLIError(f"grid bounds reversed relative to step in {spec!r}")
    n = round(ratio)
    if abs(ratio - n) > 1e-9:
        raise CLIError(f"(b - a)/s is not integral within 1e-9 in {spec!r}")
    grid = a + s * np.arange(n + 1)
    grid[-1] = b  # pin the inclusive endpoint against float drift
    return grid


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _finish(manifest: RunManifest, out: Path, started: float) -> None:
    manifest.wall_time_s = time.perf_counter() - started
    for artifact in manifest.outputs:
        p = Path(artifact)
        if not p.exists() or p.stat().st_size == 0:
            raise RuntimeError(f"output {artifact} missing or empty")
    eio.write_json(manifest.to_dict(), out / "manifest.json")


def _cmd_audit(args) -> int:
    out = _outdir(args)
    started = time.perf_counter()
    scenario = eio.load_scenario(args.scenario)
    report = audit_assumptions(scenario, parse_grid(args.t_grid),
                               parse_grid(args.k_grid))
    path = out / "audit.json"
    eio.write_audit_json(report, path)
    manifest = RunManifest(command="audit", inputs=[args.scenario],
                           config={"t_grid": args.t_grid, "k_grid": args.k_grid},
                           outputs=[str(path)])
    _finish(manifest, out, started)
    failures = report.failures()
    if failures:
        worst = report.entry(failures[0])
        print(f"audit failed: {failures[0]} (margin={worst.margin:.6g} "
              f"at worst point {worst.worst_point})", file=sys.stderr)
        return 2
    print(f"audit passed: report at {path}")
    return 0


def _cmd_solve(args) -> int:
    out = _outdir(args)
    started = time.perf_counter()
    scenario = eio.load_scenario(args.scenario)
    solver = {"naive": solve_naive, "informed": solve_informed,
              "noncog": solve_informed_noncog}[args.planner]
    solution = solver(scenario, args.k)
    path = out / "solution.json"
    eio.write_json(eio.solution_to_dict(solution, args.planner, args.k), path)
    manifest = RunManifest(command="solve", inputs=[args.scenario],
                           config={"k": args.k, "planner": args.planner},
                           outputs=[str(path)])
    _finish(manifest, out, started)
    print(f"{args.planner} planner at K={args.k:g}: tA={solution.tA:.12g} "
          f"({solution.case})")
    return 0


def _cmd_sweep(args) -> int:
    out = _outdir(args)
    started = time.perf_counter()
    scenario = eio.load_scenario(args.scenario)
    k_grid = parse_grid(args.k_grid)
    outputs = []
    curve = mismatch_curve(scenario, k_grid)
    path = out / "mismatch.csv"
    eio.write_mismatch_csv(curve, path)
    outputs.append(str(path))
    if args.noncog:
        gap = noncog_gap_curve(scenario, k_grid)
        gap_path = out / "gap.csv"
        eio.write_gap_csv(gap, gap_path)
        outputs.append(str(gap_path))
    manifest = RunManifest(command="sweep", inputs=[args.scenario],
                           config={"k_grid": args.k_grid, "noncog": args.noncog},
                           outputs=outputs)
    _finish(manifest, out, started)
    print(f"sweep complete: {len(k_grid)} grid points -> {', '.join(outputs)}")
    return 0


def _cmd_adoption(args) -> int:
    out = _outdir(args)
    started = time.perf_counter()
    scenario = eio.load_scenario(args.scenario)
    problem = intensity_problem_from_scenario(scenario, args.ta, args.k)
    curve = adoption_mismatch_curve(problem, parse_grid(args.c_grid))
    path = out / "adoption.csv"
    eio.write_adoption_csv(curve, path)
    manifest = RunManifest(command="adoption", inputs=[args.scenario],
                           config={"ta": args.ta, "k": args.k,
                                   "c_grid": args.c_grid},
                           outputs=[str(path)])
    _finish(manifest, out, started)
    print(f"adoption sweep complete (widening predicted: "
          f"{curve.wideningPredicted}) -> {path}")
    return 0


def _cmd_tiers(args) -> int:
    out = _outdir(args)
    started = time.perf_counter()
    scenario = eio.load_scenario(args.scenario)
    curve = tiered_mismatch_curve(scenario, parse_grid(args.k_grid))
    path = out / "tiers.csv"
    eio.write_tiers_csv(curve, path)
    manifest = RunManifest(command="tiers", inputs=[args.scenario],
                           config={"k_grid": args.k_grid}, outputs=[str(path)])
    _finish(manifest, out, started)
    jumps = int(curve.jumpFlag.sum())
    print(f"tier sweep complete: {jumps} choice jump(s) -> {path}")
    return 0


def _cmd_check(args) -> int:
    out = _outdir(args)
    started = time.perf_counter()
    scenario = eio.load_scenario(args.scenario)
    kwargs = {}
    if args.k_grid:
        kwargs["k_grid"] = parse_grid(args.k_grid)
    if args.c_grid:
        kwargs["c_grid"] = parse_grid(args.c_grid)
    if args.ta is not None:
        kwargs["ta"] = args.ta
    if args.k is not None:
        kwargs["k"] = args.k
    report = check_proposition(scenario, args.prop, **kwargs)
    path = out / f"check_{args.prop}.json"
    eio.write_json(report.to_dict(), path)
    manifest = RunManifest(command="check", inputs=[args.scenario],
                           config={"prop": args.prop, **{k: str(v) for k, v in kwargs.items()}},
                           outputs=[str(path)])
    _finish(manifest, out, started)
    detail = "" if report.evidence is None else f": {report.evidence.description}"
    if report.status == VERIFIED:
        print(f"{args.prop} verified{detail}")
        return 0
    print(f"{args.prop} {report.status}{detail}", file=sys.stderr)
    return 2


def _cmd_index(args) -> int:
    out = _outdir(args)
    started = time.perf_counter()
    manifest = RunManifest(command=f"index {args.index_cmd}", inputs=[args.infile],
                           config={}, seed=None)
    if args.index_cmd == "elo":
        judgment_set = eio.read_judgments_csv(args.infile)
        symmetrized = symmetrize_judgments(judgment_set)
        by_model: dict = {}
        for judgment in judgment_set.judgments:
            by_model.setdefault(judgment.model_id, []).append(judgment)
        models = list(by_model)
        for model in models:
            subset = JudgmentSet.from_records(by_model[model], judgment_set.roster)
            table = elo_run(symmetrize_judgments(subset).outcomes, judgment_set.roster)
            name = "ratings.csv" if len(models) == 1 else f"ratings_{model}.csv"
            path = out / name
            eio.write_ratings_csv(table, path)
            manifest.outputs.append(str(path))
        manifest.config = {"models": models,
                           "single_order_pairs": symmetrized.single_order_pairs}
        print(f"elo replay complete for {len(models)} model(s); "
              f"{symmetrized.single_order_pairs} single-order pair(s)")
    elif args.index_cmd == "pca":
        skills, model_ids, matrix = eio.read_matrix_csv(args.infile)
        pc1 = pca_first_component(matrix)
        path = out / "index.csv"
        eio.write_index_csv(skills, pc1, path)
        manifest.outputs.append(str(path))
        manifest.config = {"models": model_ids}
        print(f"pca index written for {len(skills)} skills -> {path}")
    else:  # tau
        x, y = eio.read_xy_csv(args.infile)
        result = bootstrap_ci(x, y, B=args.bootstrap, method=args.method,
                              seed=args.seed)
        path = out / "stats.json"
        eio.write_json({"tau": result.tau, "ci_lo": result.lo, "ci_hi": result.hi,
                        "method": result.method, "B": result.B,
                        "seed": result.seed}, path)
        manifest.outputs.append(str(path))
        manifest.seed = args.seed
        manifest.config = {"B": args.bootstrap, "method": args.method}
        print(f"tau={result.tau:.12g} CI=[{result.lo:.12g}, {result.hi:.12g}] "
              f"-> {path}")
    _finish(manifest, out, started)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eduplan",
        description="Planner allocation models, verification oracles and the "
                    "pairwise skill-ranking pipeline.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="audit scenario assumptions on a grid")
    p.add_argument("--scenario", required=True)
    p.add_argument("--t-grid", required=True)
    p.add_argument("--k-grid", required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("solve", help="solve one planner problem at a capital level")
    p.add_argument("--scenario", required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--planner", choices=["naive", "informed", "noncog"],
                   default="naive")
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("sweep", help="mismatch (and gap) curves over a K grid")
    p.add_argument("--scenario", required=True)
    p.add_argument("--k-grid", required=True)
    p.add_argument("--noncog", action="store_true")
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("adoption", help="intensity gaps over a falling cost grid")
    p.add_argument("--scenario", required=True)
    p.add_argument("--ta", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--c-grid", required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_adoption)

    p = sub.add_parser("tiers", help="tiered-wage barbell sweep over a K grid")
    p.add_argument("--scenario", required=True)
    p.add_argument("--k-grid", required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_tiers)

    p = sub.add_parser("check", help="replay a structural proposition")
    p.add_argument("--scenario", required=True)
    p.add_argument("--prop", choices=["P1", "P2", "P3", "P4"], required=True)
    p.add_argument("--k-grid")
    p.add_argument("--c-grid")
    p.add_argument("--ta", type=float)
    p.add_argument("--k", type=float)
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("index", help="skill-ranking pipeline stages")
    isub = p.add_subparsers(dest="index_cmd", required=True)
    for name, helptext in (("elo", "replay pairwise judgments into ratings"),
                           ("pca", "aggregate per-model scores into one index"),
                           ("tau", "rank correlation with bootstrap CI")):
        ip = isub.add_parser(name, help=helptext)
        ip.add_argument("--in", dest="infile", required=True)
        ip.add_argument("--out", default=".")
        if name == "tau":
            ip.add_argument("--bootstrap", type=int, default=5000)
            ip.add_argument("--method", choices=["percentile", "bca"],
                            default="bca")
            ip.add_argument("--seed", type=int, default=0)
        ip.set_defaults(func=_cmd_index)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
