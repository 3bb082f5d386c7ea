"""Command-line front end: ``python3 -m tangle_roof <command> ...``."""

import argparse
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import tables
from .errors import QubitCountError, RegionError, StateFileError, UnknownCaseError
from .geometry import BlochVector, contains, zero_tetrahedron, zero_witness
from .invariants import InvariantKind, all_four_qubit, concurrence_pure, eof_from_concurrence, measure, three_tangle
from .qstate import CATALOG, catalog_lookup, format_state, read_state, write_state
from .roof import (
    DEFAULT_P_POINTS,
    DEFAULT_PHI_POINTS,
    build_decomposition,
    envelopes,
    get_case,
    p_grid,
    phi_grid,
    reference_formula,
    verify_decomposition,
    write_curve_csv,
    write_envelope_csv,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_QUBITS = 3
EXIT_CASE = 4
EXIT_FAIL = 5

SWEEP_TOL = 5e-3
ZERO_TOL = 1e-9
VERIFY_TOL = 1e-9
RESIDUAL_TOL = 1e-10
TABLE_ONE_TOL = 1e-9
TABLE_FOUR_TOL = 1e-6

PLOT_TEMPLATE = """\
# Generic plotting script for an envelope CSV (columns p,min,hull,reference).
# Needs matplotlib, which the package itself does not depend on.
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
with open(path) as fh:
    rows = [list(map(float, r)) for r in list(csv.reader(fh))[1:]]
p, mn, hull, ref = zip(*rows)
plt.plot(p, mn, lw=0.8, label="min over phase")
plt.plot(p, hull, lw=1.5, label="convex hull")
plt.plot(p, ref, "k--", lw=1.0, label="closed form")
plt.xlabel("p")
plt.ylabel({label!r})
plt.legend()
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"""


@dataclass
class RunConfig:
    command: str
    inputs: tuple = ()
    case: str = None
    p_points: int = DEFAULT_P_POINTS
    phi_points: int = DEFAULT_PHI_POINTS
    out: str = None
    tol: float = None
    log_base: float = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.p_points < 2 or self.phi_points < 2:
            raise ValueError("grid sizes must be at least 2")
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tolerance must be positive")


def fmt(x):
    return f"{x:.12g}"


def _load_state(source, allow_unnormalized=False):
    path = Path(source)
    if path.is_file():
        return read_state(path, allow_unnormalized=allow_unnormalized)
    return catalog_lookup(source).state


def cmd_invariants(cfg, out):
    s = _load_state(cfg.inputs[0], cfg.extra.get("allow_unnormalized", False))
    n = s.num_qubits
    out.write(f"qubits = {n}\n")
    if n == 4:
        for name, v in all_four_qubit(s).items():
            out.write(f"{name} = {fmt(v)}\n")
    elif n == 3:
        out.write(f"tau3 = {fmt(three_tangle(s))}\n")
        out.write(f"tau3sq = {fmt(three_tangle(s, squared=True))}\n")
    elif n == 2:
        c = concurrence_pure(s)
        out.write(f"C = {fmt(c)}\n")
        out.write(f"EOF = {fmt(float(eof_from_concurrence(c, base=cfg.log_base)))}\n")
    else:
        raise QubitCountError(f"no measure defined for {n} qubits; expected 2, 3 or 4")
    return EXIT_OK


def _sweep_paths(cfg, case_id):
    base = Path(cfg.out) if cfg.out else Path(f"{case_id}.envelope.csv")
    stem = base.name[:-len(".envelope.csv")] if base.name.endswith(".envelope.csv") else base.stem
    curve = cfg.extra.get("curve_out") or base.with_name(f"{stem}.curve.csv")
    return base, Path(curve)


def cmd_sweep(cfg, out):
    case = get_case(cfg.case)
    ref = reference_formula(case)
    start = time.perf_counter()
    envs, grids = envelopes(case.family, [case.kind], p_grid(cfg.p_points), phi_grid(cfg.phi_points))
    env, grid = envs[case.kind], grids[case.kind]
    elapsed = time.perf_counter() - start

    env_path, curve_path = _sweep_paths(cfg, case.id)
    write_envelope_csv(env, ref, env_path)
    out.write(f"envelope -> {env_path}\n")
    if not cfg.extra.get("no_curve", False):
        write_curve_csv(grid, curve_path)
        out.write(f"curve -> {curve_path}\n")
    plot = cfg.extra.get("plot_script")
    if plot:
        Path(plot).write_text(PLOT_TEMPLATE.format(csv=str(env_path), label=case.id), encoding="utf-8")
        out.write(f"plot script -> {plot}\n")

    dev = float(np.max(np.abs(env.hull_curve - ref(env.p_values))))
    if case.scheme == "zero":
        tol = cfg.tol or ZERO_TOL
        dev = max(dev, float(np.max(env.hull_curve)))
    else:
        tol = cfg.tol or SWEEP_TOL
    ok = dev <= tol
    out.write(f"case {case.id}: grid {cfg.p_points}x{cfg.phi_points}, max deviation {dev:.3e} "
              f"(tol {tol:.1e}) {'PASS' if ok else 'FAIL'}\n")
    if cfg.extra.get("timing"):
        out.write(f"elapsed {elapsed:.2f} s\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(cfg, out):
    case = get_case(cfg.case)
    p = float(cfg.inputs[0])
    d = build_decomposition(case, p, cfg.extra.get("form"))
    res, avg = verify_decomposition(d, case.kind)
    ref = reference_formula(case)(p)
    tol = cfg.tol or VERIFY_TOL
    out.write(f"case {case.id} at p = {fmt(p)}: {len(d.terms)} terms\n")
    for w, s in d.terms:
        out.write(f"  weight {fmt(w)}  measure {fmt(float(np.round(measure(case.kind, s), 15)))}\n")
    out.write(f"residual = {res:.3e}\n")
    out.write(f"average = {fmt(avg)}\n")
    out.write(f"reference = {fmt(ref)}\n")
    ok = res < RESIDUAL_TOL and abs(avg - ref) <= tol
    out.write(("PASS" if ok else "FAIL") + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_tables(cfg, out):
    ok = True
    tol1 = cfg.tol or TABLE_ONE_TOL
    out.write("Table I: F1, F2, F3\n")
    for key, got, _, dev in tables.table_one():
        ok &= dev <= tol1
        out.write(f"  {key:5s} ({', '.join(fmt(round(g, 12)) for g in got)})  max deviation {dev:.1e}\n")

    out.write("Table III: decomposition averages vs closed forms\n")
    for cid, dev, res in tables.table_three():
        ok &= dev <= VERIFY_TOL and res < RESIDUAL_TOL
        out.write(f"  {cid:8s} max deviation {dev:.1e}  max residual {res:.1e}\n")

    tol4 = cfg.tol or TABLE_FOUR_TOL
    out.write("Table IV: two-qubit concurrences, 21 p-samples\n")
    for j, pair, dev in tables.table_four():
        ok &= dev <= tol4
        out.write(f"  rho{j} {pair}  max deviation {dev:.1e}\n")
    out.write(("PASS" if ok else "FAIL") + "\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bloch(cfg, out):
    r = BlochVector(np.array([float(x) for x in cfg.inputs]))
    t = zero_tetrahedron()
    if not contains(t, r):
        out.write(f"r = ({', '.join(fmt(x) for x in r.r)}): outside the zero tetrahedron\n")
        return EXIT_OK
    lam = np.clip(t.barycentric(r), 0.0, None)
    lam /= lam.sum()
    d = zero_witness(r, t)
    res, avg = verify_decomposition(d, InvariantKind.F1)
    out.write(f"r = ({', '.join(fmt(x) for x in r.r)}): inside the zero tetrahedron\n")
    names = ("W4", "Z2(p0,0)", "Z2(p0,2pi/3)", "Z2(p0,4pi/3)")
    for name, w in zip(names, lam):
        out.write(f"  {name:13s} weight {fmt(float(np.round(w, 15)))}\n")
    out.write(f"residual = {res:.3e}\n")
    out.write(f"F1 average = {avg:.3e}\n")
    return EXIT_OK


def cmd_catalog(cfg, out):
    if cfg.inputs:
        entry = catalog_lookup(cfg.inputs[0])
        if cfg.out:
            write_state(entry.state, cfg.out)
            out.write(f"{entry.key} -> {cfg.out}\n")
        else:
            out.write(format_state(entry.state))
        return EXIT_OK
    for key, entry in CATALOG.items():
        out.write(f"{key:14s} {entry.state.num_qubits}  {entry.description}\n")
    return EXIT_OK


COMMANDS = {
    "invariants": cmd_invariants,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
    "tables": cmd_tables,
    "bloch": cmd_bloch,
    "catalog": cmd_catalog,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="tangle-roof", description="Entanglement measures and convex roofs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="evaluate the measures of a pure state")
    p.add_argument("state", help="state file or catalog key")
    p.add_argument("--allow-unnormalized", action="store_true")
    p.add_argument("--log-base", type=float, default=None, help="logarithm base for EOF (default e)")

    p = sub.add_parser("sweep", help="characteristic curves and their convex envelope for a case")
    p.add_argument("case")
    p.add_argument("--p-points", type=int, default=DEFAULT_P_POINTS)
    p.add_argument("--phi-points", type=int, default=DEFAULT_PHI_POINTS)
    p.add_argument("--out", help="envelope CSV path (default <case>.envelope.csv)")
    p.add_argument("--curve-out", help="curve CSV path (default next to the envelope CSV)")
    p.add_argument("--no-curve", action="store_true", help="skip the full curve CSV")
    p.add_argument("--plot-script", help="also write a generic plotting script here")
    p.add_argument("--tol", type=float)
    p.add_argument("--timing", action="store_true", help="report wall time (output is then not reproducible)")

    p = sub.add_parser("verify", help="check an optimal decomposition")
    p.add_argument("case")
    p.add_argument("p", type=float)
    p.add_argument("--form", help="construction name; default picks by region")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("tables", help="recompute the tabulated values")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("bloch", help="locate a Bloch vector of the Phi2/W4 span")
    p.add_argument("x", type=float)
    p.add_argument("y", type=float)
    p.add_argument("z", type=float)

    p = sub.add_parser("catalog", help="list the named states or print one as a state file")
    p.add_argument("key", nargs="?")
    p.add_argument("--out")
    return ap


def config_from_args(ns):
    inputs = ()
    if ns.command == "invariants":
        inputs = (ns.state,)
    elif ns.command == "verify":
        inputs = (ns.p,)
    elif ns.command == "bloch":
        inputs = (ns.x, ns.y, ns.z)
    elif ns.command == "catalog" and ns.key:
        inputs = (ns.key,)
    extra = {k: getattr(ns, k) for k in ("allow_unnormalized", "curve_out", "no_curve", "plot_script", "form", "timing")
             if hasattr(ns, k)}
    return RunConfig(
        command=ns.command,
        inputs=inputs,
        case=getattr(ns, "case", None),
        p_points=getattr(ns, "p_points", DEFAULT_P_POINTS),
        phi_points=getattr(ns, "phi_points", DEFAULT_PHI_POINTS),
        out=getattr(ns, "out", None),
        tol=getattr(ns, "tol", None),
        log_base=getattr(ns, "log_base", None),
        extra=extra,
    )


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    try:
        return COMMANDS[cfg.command](cfg, out)
    except Exception as exc:
        code = exit_code(cfg.command, exc)
        if code is None:
            raise
        sys.stderr.write(f"error: {exc}\n")
        return code


def exit_code(command, exc):
    if isinstance(exc, QubitCountError):
        return EXIT_QUBITS
    if isinstance(exc, (UnknownCaseError, RegionError)):
        # unknown states and Bloch vectors off the ball are bad input, not unsupported cases
        return EXIT_INPUT if command in ("invariants", "bloch", "catalog") else EXIT_CASE
    if isinstance(exc, (StateFileError, ValueError, OSError)):
        return EXIT_INPUT
    return None


if __name__ == "__main__":
    sys.exit(main())
