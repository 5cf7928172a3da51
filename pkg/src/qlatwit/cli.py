"""Command-line front end: named experiments with JSON/CSV artifacts.

Commands are deterministic given their configuration and seed; JSON output is
key-sorted so identical invocations produce byte-identical documents.  Data
level results ("violated" flags) never affect the exit status: 0 means the
run completed, nonzero means it could not run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np
import scipy

from . import __version__, bosonic, channels, criteria, optimize, spinchain
from .qcore import PureState, expectation, ground_state


def _versions() -> dict:
    return {
        "qlatwit": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": ".".join(str(v) for v in sys.version_info[:3]),
    }


def _fmtsig(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_output(doc: dict, rows, fields, fmt: str, out_path: str | None) -> None:
    if fmt == "json":
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmtsig(row[k]) for k in fields})
        text = buf.getvalue()
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _saturating_product(n: int):
    # alternating +x / +z eigenstates, the pattern that meets the witness bound
    return spinchain.product_state([("x", +1) if k % 2 == 1 else ("z", +1) for k in range(1, n + 1)])


def _qubit_reports(state) -> list[dict]:
    return [
        criteria.witness_criterion(state).to_json_dict(),
        criteria.squared_criterion(state).to_json_dict(),
        criteria.variance_x_criterion(state).to_json_dict(),
    ]


def cmd_cluster_witness(args) -> tuple[dict, list, list]:
    n = args.n
    if n is None or n % 2 != 0 or not 2 <= n <= 12:
        raise ValueError("cluster-witness needs --n even, between 2 and 12")
    chain = spinchain.ChainSpec(n)
    states = {
        "cluster": spinchain.cluster_state(spinchain.ClusterSpec(chain, (1,) * n)),
        "saturating_product": _saturating_product(n),
        "totally_mixed": criteria.totally_mixed_state(n),
    }
    results = {label: _qubit_reports(state) for label, state in states.items()}
    rows = [
        {"state": label, "criterion": rep["name"], "value": rep["value"],
         "bound": rep["bound"], "violated": rep["violated"], "margin": rep["margin"]}
        for label, reps in results.items()
        for rep in reps
    ]
    fields = ["state", "criterion", "value", "bound", "violated", "margin"]
    return {"reports": results}, rows, fields


def cmd_decoherence_scan(args) -> tuple[dict, list, list]:
    n = args.n
    if n is None or n % 2 != 0 or not 2 <= n <= 10:
        raise ValueError("decoherence-scan needs --n even, between 2 and 10")
    p_min, p_max, steps = args.p_min, args.p_max, args.steps
    if not 0.5 <= p_min <= p_max <= 1.0:
        raise ValueError("need 0.5 <= p-min <= p-max <= 1.0")
    if steps < 1:
        raise ValueError("need at least one grid point")
    grid = np.linspace(p_min, p_max, steps) if steps > 1 else np.array([p_min])
    rows = []
    for p in grid:
        rep = channels.decoherence_experiment(n, float(p))
        rows.append(
            {"p": float(p), "value": rep.value, "bound": rep.bound, "violated": rep.violated}
        )
    ps = np.array([r["p"] for r in rows])
    vals = np.array([r["value"] for r in rows]) / n
    if len(rows) > 1:
        slope, intercept = np.polyfit(ps, vals, 1)
        summary = {
            "slope_value_over_n": float(slope),
            "intercept_value_over_n": float(intercept),
            "crossing_p_fit": float((0.5 - intercept) / slope),
        }
    else:
        summary = {}
    summary["crossing_p_bisection"] = float(channels.witness_threshold(n))
    doc = {"rows": rows, "summary": summary}
    if args.format == "csv":
        for key, val in summary.items():
            print(f"{key} = {_fmtsig(val)}", file=sys.stderr)
    return doc, rows, ["p", "value", "bound", "violated"]


def cmd_singlet_suite(args) -> tuple[dict, list, list]:
    n_pairs = args.n
    if n_pairs is None or n_pairs < 1:
        raise ValueError("singlet-suite needs --n (number of singlet pairs) >= 1")
    state = bosonic.singlet_chain(n_pairs)  # lattice size checked against the cap
    lattice = bosonic.FockLatticeSpec(2 * n_pairs, bosonic.SiteFockSpace(1))
    report = criteria.collective_uncertainty_criterion(state)
    j_total_sq = expectation(bosonic.total_spin_squared(lattice), state)
    means = {ax: expectation(bosonic.collective_J_fock(lattice, ax), state) for ax in "xyz"}
    doc = {
        "report": report.to_json_dict(),
        "total_spin_squared": j_total_sq,
        "mean_spin": means,
    }
    rows = [{"quantity": "variance_sum", "value": report.value},
            {"quantity": "bound", "value": report.bound},
            {"quantity": "total_spin_squared", "value": j_total_sq}]
    return doc, rows, ["quantity", "value"]


def cmd_heisenberg(args) -> tuple[dict, list, list]:
    n = args.n
    if n is None or n < 2:
        raise ValueError("heisenberg needs --n >= 2 lattice sites")
    lattice = bosonic.FockLatticeSpec(n, bosonic.SiteFockSpace(1))
    gs = ground_state(bosonic.heisenberg_hamiltonian(lattice))
    report = criteria.collective_uncertainty_criterion(gs.state)
    j_total_sq = expectation(bosonic.total_spin_squared(lattice), gs.state)
    doc = {
        "energy": gs.energy,
        "degenerate": gs.degenerate,
        "gap": gs.gap,
        "report": report.to_json_dict(),
        "total_spin_squared": j_total_sq,
    }
    if n == 2:
        singlet = bosonic.singlet_chain(1)
        fidelity = float(abs(np.vdot(singlet.amplitudes, gs.state.amplitudes)) ** 2)
        doc["singlet_fidelity"] = fidelity
    rows = [{"quantity": "energy", "value": gs.energy},
            {"quantity": "variance_sum", "value": report.value},
            {"quantity": "bound", "value": report.bound},
            {"quantity": "total_spin_squared", "value": j_total_sq}]
    return doc, rows, ["quantity", "value"]


def cmd_moments_compare(args) -> tuple[dict, list, list]:
    n = args.n
    max_order = args.max_order
    if n is None or not 2 <= n <= 9:
        raise ValueError("moments-compare needs --n between 2 and 9")
    if max_order < 1:
        raise ValueError("--max-order must be at least 1")
    chain = spinchain.ChainSpec(n)
    cluster = spinchain.cluster_state(spinchain.ClusterSpec(chain, (1,) * n))
    mixed = criteria.totally_mixed_state(n)
    axes = [criteria.AXIS_X, criteria.AXIS_Y, criteria.AXIS_Z]
    comparison = criteria.moment_indistinguishability(cluster, mixed, axes, max_order)
    doc = {
        "cluster_vs_mixed": {
            "axes": ["x", "y", "z"],
            "orders": list(comparison.orders),
            "differences": comparison.differences.tolist(),
            "indistinguishable": comparison.indistinguishable,
        }
    }
    rows = [
        {"axis": "xyz"[i], "order": m, "difference": float(comparison.differences[i, j])}
        for i in range(3)
        for j, m in enumerate(comparison.orders)
    ]
    if n >= 4:
        rho_s = criteria.moment_matching_separable_state(n)
        table_cluster = criteria.anticommutator_moments(cluster)
        table_rho_s = criteria.anticommutator_moments(rho_s)
        first_cluster = [expectation(op, cluster) for op in
                         criteria.collective_j_operators(cluster.space).values()]
        first_rho_s = [expectation(op, rho_s) for op in
                       criteria.collective_j_operators(rho_s.space).values()]
        doc["moment_matching_state"] = {
            "first_moments_cluster": first_cluster,
            "first_moments_separable": first_rho_s,
            "anticommutator_cluster": table_cluster.tolist(),
            "anticommutator_separable": table_rho_s.tolist(),
            "max_table_difference": float(np.abs(table_cluster - table_rho_s).max()),
        }
    return doc, rows, ["axis", "order", "difference"]


def cmd_pulse(args) -> tuple[dict, list, list]:
    n = args.n if args.n is not None else 6
    if not 2 <= n <= 10:
        raise ValueError("pulse needs --n between 2 and 10")
    if args.params is None and not args.optimize:
        raise ValueError("pulse needs --params A,B,C and/or --optimize")
    chain = spinchain.ChainSpec(n)
    doc: dict = {"n_sites": n}
    rows = []
    params = None
    if args.params is not None:
        pieces = args.params.split(",")
        if len(pieces) != 3:
            raise ValueError("--params expects three comma-separated angles")
        params = optimize.PulseParams(*(float(x) for x in pieces))
        u = optimize.pulse_unitary(chain, params)
        start = spinchain.basis_state(chain, [0] * n)
        state = PureState(chain.space(), u.matrix @ start.amplitudes)
        ratio = optimize.violation_ratio(state)
        report = criteria.collective_uncertainty_criterion(state)
        doc["params"] = list(params.as_array())
        doc["ratio"] = ratio
        doc["report"] = report.to_json_dict()
        rows.append({"stage": "given", "theta_xx": params.theta_xx,
                     "theta_yy": params.theta_yy, "theta_z": params.theta_z, "ratio": ratio})
    if args.optimize:
        initial = params if params is not None else optimize.PulseParams(0.0, 0.0, 0.0)
        result = optimize.optimize_pulse(chain, initial, budget=args.budget, seed=args.seed)
        doc["optimized"] = {
            "params": list(result.params.as_array()),
            "ratio": result.ratio,
            "evaluations": result.evaluations,
        }
        rows.append({"stage": "optimized", "theta_xx": result.params.theta_xx,
                     "theta_yy": result.params.theta_yy, "theta_z": result.params.theta_z,
                     "ratio": result.ratio})
        if args.trace:
            with open(args.trace, "w") as fh:
                for iteration, point, ratio in result.trace:
                    fh.write(json.dumps(
                        {"iteration": iteration, "params": list(point), "ratio": ratio},
                        sort_keys=True) + "\n")
    fields = ["stage", "theta_xx", "theta_yy", "theta_z", "ratio"]
    return doc, rows, fields


_COMMANDS = {
    "cluster-witness": cmd_cluster_witness,
    "decoherence-scan": cmd_decoherence_scan,
    "singlet-suite": cmd_singlet_suite,
    "heisenberg": cmd_heisenberg,
    "moments-compare": cmd_moments_compare,
    "pulse": cmd_pulse,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlatwit",
        description="Collective-measurement entanglement criteria on small lattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, default=None,
                       help="sites (pairs for singlet-suite)")
        p.add_argument("--p-min", dest="p_min", type=float, default=0.5)
        p.add_argument("--p-max", dest="p_max", type=float, default=1.0)
        p.add_argument("--steps", type=int, default=11)
        p.add_argument("--max-order", dest="max_order", type=int, default=4)
        p.add_argument("--params", type=str, default=None,
                       help="pulse angles as three comma-separated floats")
        p.add_argument("--optimize", action="store_true")
        p.add_argument("--budget", type=int, default=200)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--trace", type=str, default=None,
                       help="path for the optimizer trace (JSON lines)")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", type=str, default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        results, rows, fields = handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    config = {
        "n": args.n,
        "p_min": args.p_min,
        "p_max": args.p_max,
        "steps": args.steps,
        "max_order": args.max_order,
        "params": args.params,
        "optimize": args.optimize,
        "budget": args.budget,
        "seed": args.seed,
    }
    doc = {
        "command": args.command,
        "config": config,
        "results": results,
        "versions": _versions(),
    }
    _write_output(doc, rows, fields, args.format, args.out)
    return 0


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
