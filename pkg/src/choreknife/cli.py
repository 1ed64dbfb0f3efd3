"""Command-line interface: reproducible file-based runs of every pipeline.

Exit codes: 0 success, 1 guarantee violation (ratio above the threshold or
a safety-measure failure), 2 usage error, 3 resource limit (enumeration cap
exceeded). Commands writing into an --out-dir also write a single
manifest.json capturing the command, parameters, seed, input hash, tool
version, and output file list, so any output can be replayed byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .errors import ChoreDivisionError, SafetyViolation, SizeLimitExceeded
from .gen import GenSpec, generate
from .knife import solve
from .model import Assignment, Instance, RatioReport, load_instance
from .oracle import DEFAULT_CAP, WmmsProfile, ratio_report, wmms_profile
from .bounds import (
    SearchConfig,
    best_bound,
    format_derivation,
    heatmap_grid,
    simplex_max,
)

EXIT_OK = 0
EXIT_GUARANTEE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _die(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(out_dir: Path, command: str, parameters: dict,
                    seed, input_paths: list[Path], outputs: list[Path]) -> None:
    manifest = {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "input_hash": {p.name: _sha256(p) for p in input_paths},
        "tool_version": __version__,
        "outputs": [p.name for p in outputs],
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


def _dump_json(path: Path, document) -> None:
    path.write_text(json.dumps(document, indent=2) + "\n")


def _assignment_doc(instance: Instance, assignment: Assignment) -> dict:
    return {
        "bundles": [sorted(bundle) for bundle in assignment.bundles],
        "agent_labels": list(instance.agent_labels),
        "chore_labels": list(instance.chore_labels),
        "by_agent": {
            instance.agent_labels[i]: [instance.chore_labels[b]
                                       for b in sorted(bundle)]
            for i, bundle in enumerate(assignment.bundles)
        },
    }


def _report_doc(instance: Instance, report: RatioReport) -> dict:
    return {
        "per_agent": [
            {
                "agent": instance.agent_labels[i],
                "cost": str(entry.cost),
                "wmms": str(entry.wmms),
                "ratio": None if entry.ratio is None else str(entry.ratio),
                "infinite": entry.ratio is None,
            }
            for i, entry in enumerate(report.per_agent)
        ],
        "max_ratio": None if report.max_ratio is None else str(report.max_ratio),
        "max_ratio_float": (None if report.max_ratio is None
                            else float(report.max_ratio)),
    }


def _profile_doc(instance: Instance, profile: WmmsProfile) -> dict:
    return {
        "values": [str(v) for v in profile.values],
        "agent_labels": list(instance.agent_labels),
        "witnesses": [
            [sorted(bundle) for bundle in witness.bundles]
            for witness in profile.witnesses
        ],
    }


def _load_profile(path: Path, instance: Instance) -> WmmsProfile:
    doc = json.loads(path.read_text())
    values = tuple(Fraction(v) for v in doc["values"])
    if len(values) != instance.n:
        _die(EXIT_USAGE, f"profile has {len(values)} values for {instance.n} agents")
    witnesses_doc = doc.get("witnesses")
    if witnesses_doc:
        witnesses = tuple(
            Assignment.from_lists(bundles, instance.m) for bundles in witnesses_doc
        )
    else:
        everything = [list(range(instance.m))] + [[] for _ in range(instance.n - 1)]
        witnesses = tuple(
            Assignment.from_lists(everything, instance.m)
            for _ in range(instance.n)
        )
    return WmmsProfile(values=values, witnesses=witnesses)


@click.group(help=__doc__)
@click.version_option(version=__version__)
def main() -> None:
    pass


@main.command("gen", help="Generate a random instance file.")
@click.option("--n", type=int, required=True, help="Number of agents (>= 1).")
@click.option("--m", type=int, required=True, help="Number of chores (>= 0).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--weights", "weight_mode", default="dirichlet_unit",
              type=click.Choice(["uniform", "dirichlet_unit", "power_of_two"]),
              show_default=True)
@click.option("--costs", "cost_mode", default="iid_uniform_integer",
              type=click.Choice(["iid_uniform_integer", "identical_agents",
                                 "correlated"]), show_default=True)
@click.option("--cost-max", type=int, default=20, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), required=True)
def cmd_gen(n, m, seed, weight_mode, cost_mode, cost_max, out) -> None:
    if n < 1 or m < 0:
        _die(EXIT_USAGE, "need --n >= 1 and --m >= 0")
    spec = GenSpec(n=n, m=m, weight_mode=weight_mode, cost_mode=cost_mode,
                   cost_max=cost_max, seed=seed)
    instance = generate(spec)
    _dump_json(out, instance.to_document())
    click.echo(f"wrote {out}")


@main.command("wmms", help="Compute the exact WMMS profile of an instance.")
@click.argument("instance_file", type=click.Path(exists=True, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path), required=True)
@click.option("--cap", type=int, default=DEFAULT_CAP, show_default=True,
              help="Enumeration cap on n^m.")
@click.option("--forbid-empty-bundles", is_flag=True,
              help="Sensitivity check: exclude partitions with empty bundles.")
def cmd_wmms(instance_file, out, cap, forbid_empty_bundles) -> None:
    instance = load_instance(instance_file)
    try:
        profile = wmms_profile(instance, cap=cap,
                               allow_empty=not forbid_empty_bundles)
    except SizeLimitExceeded as exc:
        _die(EXIT_RESOURCE, str(exc))
    except ValueError as exc:
        _die(EXIT_USAGE, str(exc))
    _dump_json(out, _profile_doc(instance, profile))
    click.echo(f"wrote {out}")


@main.command("solve", help="Run the full 20-WMMS pipeline on an instance.")
@click.argument("instance_file", type=click.Path(exists=True, path_type=Path))
@click.option("--out-dir", type=click.Path(path_type=Path), required=True)
@click.option("--wmms-file", type=click.Path(exists=True, path_type=Path),
              help="Trusted WMMS values for instances beyond the oracle cap; "
                   "guarantees become relative to these values.")
@click.option("--trace", "trace_name", default="trace.jsonl", show_default=True)
@click.option("--cap", type=int, default=DEFAULT_CAP, show_default=True)
@click.option("--alpha", type=str, default="20", show_default=True,
              help="Ratio threshold for the exit code.")
def cmd_solve(instance_file, out_dir, wmms_file, trace_name, cap, alpha) -> None:
    instance = load_instance(instance_file)
    profile = _load_profile(wmms_file, instance) if wmms_file else None
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        result = solve(instance, profile=profile, oracle_cap=cap)
    except SizeLimitExceeded as exc:
        _die(EXIT_RESOURCE, f"{exc}; supply --wmms-file for large instances")
    except SafetyViolation as exc:
        if exc.trace is not None:
            (out_dir / trace_name).write_text(exc.trace.to_jsonl())
        _die(EXIT_GUARANTEE, f"safety violation: {exc}")
    outputs = []
    for name, doc in [
        ("assignment.json", _assignment_doc(instance, result.assignment)),
        ("report.json", _report_doc(instance, result.report)),
    ]:
        _dump_json(out_dir / name, doc)
        outputs.append(out_dir / name)
    trace_path = out_dir / trace_name
    trace_path.write_text(result.trace.to_jsonl())
    outputs.append(trace_path)
    _write_manifest(out_dir, "solve",
                    {"alpha": alpha, "cap": cap,
                     "wmms_file": str(wmms_file) if wmms_file else None},
                    None, [Path(instance_file)], outputs)
    ok = result.report.within(alpha)
    click.echo(f"max ratio: {result.report.max_ratio} (alpha = {alpha})")
    sys.exit(EXIT_OK if ok else EXIT_GUARANTEE)


@main.command("verify", help="Check an assignment file against a WMMS profile.")
@click.argument("instance_file", type=click.Path(exists=True, path_type=Path))
@click.argument("assignment_file", type=click.Path(exists=True, path_type=Path))
@click.argument("profile_file", type=click.Path(exists=True, path_type=Path))
@click.option("--alpha", type=str, default="20", show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None)
def cmd_verify(instance_file, assignment_file, profile_file, alpha, out) -> None:
    instance = load_instance(instance_file)
    doc = json.loads(Path(assignment_file).read_text())
    try:
        assignment = Assignment.from_lists(doc["bundles"], instance.m)
        if assignment.n != instance.n:
            raise ChoreDivisionError("bundle count disagrees with agent count")
    except ChoreDivisionError as exc:
        _die(EXIT_USAGE, f"bad assignment file: {exc}")
    profile = _load_profile(Path(profile_file), instance)
    report = ratio_report(instance, assignment, profile)
    doc = _report_doc(instance, report)
    if out:
        _dump_json(out, doc)
    else:
        click.echo(json.dumps(doc, indent=2))
    sys.exit(EXIT_OK if report.within(alpha) else EXIT_GUARANTEE)


@main.command("bound", help="Chore-oblivious upper bound for a weight vector.")
@click.argument("weights", nargs=-1, required=True)
@click.option("--family", default="auto", show_default=True,
              type=click.Choice(["auto", "exhaustive", "heuristic",
                                 "paper3", "paper4"]))
@click.option("--depth", type=int, default=3, show_default=True)
def cmd_bound(weights, family, depth) -> None:
    try:
        result = best_bound(list(weights), SearchConfig(family, depth))
    except (ValueError, ZeroDivisionError) as exc:
        _die(EXIT_USAGE, str(exc))
    click.echo(f"bound: {result.value:.6f}")
    click.echo(format_derivation(result.derivation))


@main.command("sample", help="Seeded simplex sampling experiment for one n.")
@click.option("--n", type=int, required=True)
@click.option("--samples", type=int, default=10**6, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--family", default="auto", show_default=True,
              type=click.Choice(["auto", "exhaustive", "heuristic",
                                 "paper3", "paper4"]))
@click.option("--no-refine", is_flag=True,
              help="Skip hill-climb refinement of the top samples.")
@click.option("--out-dir", type=click.Path(path_type=Path), required=True)
def cmd_sample(n, samples, seed, family, no_refine, out_dir) -> None:
    if n < 2:
        _die(EXIT_USAGE, "need --n >= 2")
    out_dir.mkdir(parents=True, exist_ok=True)
    result = simplex_max(n, "sample", count=samples, seed=seed, family=family,
                         refine_top=0 if no_refine else 100)
    csv_path = out_dir / f"sample_n{n}.csv"
    argmax = " ".join(f"{x:.9g}" for x in result.weights)
    csv_path.write_text(
        "n,method,samples,seed,max_bound,argmax_weights\n"
        f"{n},sample,{samples},{seed},{result.value:.9g},{argmax}\n"
    )
    _write_manifest(out_dir, "sample",
                    {"n": n, "samples": samples, "family": family,
                     "refine": not no_refine},
                    seed, [], [csv_path])
    click.echo(f"n={n} max bound {result.value:.6f} -> {csv_path}")


@main.command("heatmap", help="Three-agent two-bound grid as CSV.")
@click.option("--step", type=float, default=0.01, show_default=True)
@click.option("--out-dir", type=click.Path(path_type=Path), required=True)
def cmd_heatmap(step, out_dir) -> None:
    if not 0.0 < step < 1.0:
        _die(EXIT_USAGE, "need 0 < step < 1")
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = heatmap_grid(step)
    csv_path = out_dir / "heatmap.csv"
    lines = ["w1,w2,w3,value,dominating_rule"]
    for row in rows:
        lines.append(f"{row.w1:.6g},{row.w2:.6g},{row.w3:.6g},"
                     f"{row.value:.6g},{row.dominating_rule}")
    csv_path.write_text("\n".join(lines) + "\n")
    _write_manifest(out_dir, "heatmap", {"step": step}, None, [], [csv_path])
    click.echo(f"{len(rows)} rows -> {csv_path}")


if __name__ == "__main__":
    main()
