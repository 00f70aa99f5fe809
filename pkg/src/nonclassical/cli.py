"""Command-line front end: measure reports, figure data, QPD grids and verification.

Exit codes: 0 success, 1 verification failure, 2 invalid input, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from nonclassical import boundary
from nonclassical.beamsplitter import bs_output_many
from nonclassical.entanglement import (
    NumericFailure,
    negativity_moments,
    negativity_spectral,
    np_closed_form,
)
from nonclassical.measures import PANEL_AXES, PANELS, measure_report, measures_many
from nonclassical.montecarlo import LAWS, SamplerConfig, region_cloud, sample_arrays
from nonclassical.qpd import GridSpec, depth_analytic, depth_numeric, qpd_grid
from nonclassical.state import InvalidStateError, QubitState

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3
OUT_ENV = "NONCLASSICAL_OUT"
CSV_COLUMNS = ("abscissa", "ordinate", "p", "x_abs")
QPD_COLUMNS = ("re_alpha", "im_alpha", "value")
SUITES = ("tables", "inequalities", "oracles", "all")
MANIFEST_VERSION = 1

MANIFEST_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "panel", "axes", "seed", "n_mc", "law", "precision", "files", "tolerances"],
    "properties": {
        "version": {"const": MANIFEST_VERSION},
        "panel": {"enum": list(PANELS)},
        "axes": {
            "type": "object",
            "required": ["abscissa", "ordinate"],
            "properties": {"abscissa": {"type": "string"}, "ordinate": {"type": "string"}},
        },
        "seed": {"type": "integer", "minimum": 0},
        "n_mc": {"type": "integer", "minimum": 1},
        "law": {"enum": list(LAWS)},
        "precision": {"type": "integer", "minimum": 1, "maximum": 17},
        "columns": {"type": "array", "items": {"type": "string"}},
        "files": {
            "type": "object",
            "required": ["cloud", "boundaries"],
            "properties": {
                "cloud": {"type": "string"},
                "boundaries": {"type": "object", "additionalProperties": {"type": "string"}},
            },
        },
        "tolerances": {"type": "object", "additionalProperties": {"type": "number"}},
        "tau0": {"type": "number", "minimum": 0, "maximum": 1},
        "tau0_bracket": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    },
}


class CliIOError(OSError):
    pass


@dataclass
class RunConfig:
    command: str
    out: Path | None = None
    seed: int = 0
    precision: int = 6
    fmt: str = "text"
    extra: dict = field(default_factory=dict)


# -- output helpers -------------------------------------------------------------


def _atomic_write(path: Path, text: str):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o644)
        os.replace(tmp, path)
    except OSError as exc:
        raise CliIOError(f"cannot write {path}: {exc}") from exc


def _fmt(v: float, precision: int) -> str:
    if not math.isfinite(v):
        raise ValueError(f"non-finite value {v!r} in output")
    s = f"{v:.{precision}g}"
    return "0" if s == "-0" else s


def rows_to_csv(header, rows: np.ndarray, precision: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(float(v), precision) for v in r])
    return buf.getvalue()


def _out_dir(arg: str | None) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get(OUT_ENV, "."))


# -- commands -----------------------------------------------------------------


def cmd_measure(cfg: RunConfig, stdout) -> int:
    a = cfg.extra
    state = QubitState(a["p"], a["x"]).with_phase(a["phase"])
    rep = measure_report(state, numeric_depth=a["numeric_depth"])
    if cfg.fmt == "json":
        d = rep.as_dict()
        stdout.write(json.dumps(d, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    stdout.write(f"state  p={state.p:.12g}  |x|={state.abs_x:.12g}  arg x={math.atan2(state.x.imag, state.x.real):.12g}\n")
    stdout.write(f"tau  = {rep.tau:.12g}\n")
    stdout.write(f"D    = {rep.distance:.12g}\n")
    stdout.write(f"CP   = {rep.concurrence_potential:.12g}\n")
    stdout.write(f"NP   = {rep.negativity_potential:.12g}\n")
    stdout.write("residuals:\n")
    for k, v in sorted(rep.cross_check_residuals.items()):
        stdout.write(f"  {k:28s} {v:.3e}\n")
    return EXIT_OK


def cmd_figures(cfg: RunConfig, stdout) -> int:
    a = cfg.extra
    panel = a["panel"]
    out = cfg.out
    sc = SamplerConfig(a["n_mc"], cfg.seed, a["law"])
    files = {"cloud": f"{panel}_cloud.csv", "boundaries": {}}
    _atomic_write(out / files["cloud"], rows_to_csv(CSV_COLUMNS, region_cloud(sc, panel), cfg.precision))
    for fam in boundary.FAMILIES:
        curve = boundary.boundary_curve(panel, fam, a["n_boundary"])
        name = f"{panel}_{fam}.csv"
        _atomic_write(out / name, rows_to_csv(CSV_COLUMNS, curve.samples, cfg.precision))
        files["boundaries"][fam] = name
    ab, od = PANEL_AXES[panel]
    manifest = {
        "version": MANIFEST_VERSION,
        "panel": panel,
        "axes": {"abscissa": ab, "ordinate": od},
        "seed": cfg.seed,
        "n_mc": sc.n_states,
        "law": sc.measure,
        "precision": cfg.precision,
        "columns": list(CSV_COLUMNS),
        "files": files,
        "tolerances": {
            "chain_slack": boundary.CHAIN_SLACK,
            "mixed_x_threshold": boundary.MIXED_X_THRESHOLD,
            "tau0_bisection": 1e-4,
        },
    }
    if panel == "NP_vs_tau":
        est = boundary.find_tau0()
        manifest["tau0"] = est.tau0
        manifest["tau0_bracket"] = list(est.bracket)
    _atomic_write(out / f"{panel}_manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    stdout.write(f"wrote {panel} data to {out}\n")
    return EXIT_OK


def cmd_qpd(cfg: RunConfig, stdout) -> int:
    a = cfg.extra
    state = QubitState(a["p"], a["x"]).with_phase(a["phase"])
    grid = GridSpec(a["half_width"], a["points"])
    w = qpd_grid(state, a["s"], grid)
    mesh = grid.mesh()
    rows = np.column_stack([mesh.real.ravel(), mesh.imag.ravel(), w.ravel()])
    text = rows_to_csv(QPD_COLUMNS, rows, cfg.precision)
    if a["file"]:
        _atomic_write(Path(a["file"]), text)
        stdout.write(f"wrote {a['file']}\n")
    else:
        stdout.write(text)
    return EXIT_OK


# -- verification suites --------------------------------------------------------


def suite_tables() -> list[str]:
    fails = []
    try:
        boundary.table_two()
    except boundary.VerificationError as exc:
        fails.append(f"reference-state measures: {exc}")
    rep = boundary.table_three(strict=False)
    fails += [f"pairwise orderings, {f}" for f in rep.failures]
    got = boundary.table_one()
    for case, cases in got.items():
        if any(c != case for c in cases):
            fails.append(f"chain cases: examples for case {case} classified as {cases}")
    return fails


def suite_inequalities(seed: int = 0, n_states: int = 100_000) -> list[str]:
    fails = []
    p, x = sample_arrays(SamplerConfig(n_states, seed))
    bad = boundary.chain_violations(p, x)
    if bad.size:
        i = int(bad[0])
        fails.append(f"chain tau >= D = CP >= NP broken by {bad.size} states, first p={p[i]!r} x={x[i]!r}")
    for panel in PANELS:
        rep = boundary.check_containment(panel, p, x)
        if not rep.ok:
            i = rep.worst_index
            fails.append(f"{panel}: {rep.n_violations} states outside by up to {rep.worst_excess:.3e} (p={p[i]!r}, x={x[i]!r})")
    for pp in np.linspace(0.05, 0.95, 7):
        r = boundary.verify_dephasing_chain(pp, np.linspace(0.0, math.sqrt(pp * (1 - pp)), 11), strict=False)
        if not r.ok:
            fails.append(f"dephasing monotonicity fails at p={pp}")
    m = boundary.verify_mixed_maximality(strict=False)
    if not m.ok:
        fails.append(f"mixed-state maximality: {m}")
    return fails


def suite_oracles(seed: int = 0, n_depth: int = 100, n_np: int = 10_000) -> list[str]:
    fails = []
    p, x = sample_arrays(SamplerConfig(n_depth, seed))
    worst = 0.0
    for pi, xi in zip(p, x):
        s = QubitState(float(pi), complex(xi))
        worst = max(worst, abs(depth_numeric(s).tau - depth_analytic(s).tau))
    if worst > 1e-4:
        fails.append(f"depth numeric vs analytic differs by {worst:.3e} > 1e-4")

    p, x = sample_arrays(SamplerConfig(n_np, seed + 1))
    outs = bs_output_many(p, x)
    closed = np_closed_form(p, np.abs(x) ** 2)
    worst_c = worst_m = 0.0
    for k in range(n_np):
        spec = negativity_spectral(outs[k]).value
        try:
            mom = negativity_moments(outs[k]).value
        except NumericFailure as exc:
            fails.append(f"moment route failed at p={p[k]!r}: {exc}")
            continue
        worst_c = max(worst_c, abs(closed[k] - spec))
        worst_m = max(worst_m, abs(mom - spec))
    if worst_c > 1e-8:
        fails.append(f"closed-form NP differs from spectral by {worst_c:.3e}")
    if worst_m > 1e-8:
        fails.append(f"moment NP differs from spectral by {worst_m:.3e}")

    # all measures ignore the phase of x
    base = measures_many(p[:200], np.abs(x[:200]))
    turned = measures_many(p[:200], x[:200])
    for key in base:
        d = float(np.max(np.abs(base[key] - turned[key])))
        if d > 1e-12:
            fails.append(f"{key} depends on the phase of x (difference {d:.3e})")
    return fails


def cmd_verify(cfg: RunConfig, stdout) -> int:
    suite = cfg.extra["suite"]
    names = ("tables", "inequalities", "oracles") if suite == "all" else (suite,)
    runners = {
        "tables": suite_tables,
        "inequalities": lambda: suite_inequalities(cfg.seed),
        "oracles": lambda: suite_oracles(cfg.seed),
    }
    failures = []
    for name in names:
        t0 = time.perf_counter()
        fails = runners[name]()
        dt = time.perf_counter() - t0
        stdout.write(f"{name:13s} {'PASS' if not fails else 'FAIL'}  ({dt:.1f} s)\n")
        for f in fails:
            stdout.write(f"  - {f}\n")
        failures += fails
    return EXIT_FAIL if failures else EXIT_OK


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nonclassical", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def state_args(sp):
        sp.add_argument("--p", type=float, required=True, help="excited-state population")
        sp.add_argument("--x", type=float, default=0.0, help="coherence modulus, >= 0")
        sp.add_argument("--phase", type=float, default=0.0, help="phase of the coherence in radians")

    m = sub.add_parser("measure", help="print tau, D, CP, NP and cross-check residuals")
    state_args(m)
    m.add_argument("--format", choices=("text", "json"), default="text")
    m.add_argument("--numeric-depth", action="store_true", help="also run the phase-space depth search")

    f = sub.add_parser("figures", help="write cloud and boundary CSVs plus a manifest")
    f.add_argument("--panel", choices=PANELS, required=True)
    f.add_argument("--out", help=f"output directory (default ${OUT_ENV} or .)")
    f.add_argument("--n-mc", type=int, default=100_000)
    f.add_argument("--n-boundary", type=int, default=512)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--law", choices=LAWS, default="uniform_pxr")
    f.add_argument("--precision", type=int, default=6)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--seed", type=int, default=0)

    q = sub.add_parser("qpd", help="s-ordered quasiprobability on a square grid, as CSV")
    state_args(q)
    q.add_argument("--s", type=float, default=0.0, help="ordering parameter, -1 <= s < 1")
    q.add_argument("--half-width", type=float, default=4.0)
    q.add_argument("--points", type=int, default=81)
    q.add_argument("--file", help="write to this path instead of stdout")
    q.add_argument("--precision", type=int, default=6)
    return ap


def _config(ns: argparse.Namespace) -> RunConfig:
    precision = getattr(ns, "precision", 6)
    if not 1 <= precision <= 17:
        raise ValueError(f"--precision must be in [1, 17], got {precision}")
    if getattr(ns, "x", 0.0) < 0.0:
        raise ValueError("--x is a modulus; use --phase for its argument")
    extra = {k: v for k, v in vars(ns).items() if k not in ("command", "out", "seed", "precision", "format")}
    out = _out_dir(ns.out) if ns.command == "figures" else None
    seed = getattr(ns, "seed", 0)
    if seed < 0:
        raise ValueError("--seed must be nonnegative")
    return RunConfig(ns.command, out, seed, precision, getattr(ns, "format", "text"), extra)


COMMANDS = {"measure": cmd_measure, "figures": cmd_figures, "verify": cmd_verify, "qpd": cmd_qpd}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        cfg = _config(ns)
        return COMMANDS[cfg.command](cfg, stdout)
    except CliIOError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except (InvalidStateError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except boundary.VerificationError as exc:
        stderr.write(f"verification failed: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
