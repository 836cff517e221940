# Batch experiment front end. Subcommands: trajectory, equivalence,
# trotter-scan, decompose, grover, cost.
#
# Exit codes (stable for CI): 0 success, 2 validation failure, 3 claim
# assertion failure, 4 I/O failure.
#
# Output is deterministic given (arguments, seed): CSV uses '.' decimals
# and 17 significant digits; no timestamps. Config files are flat
# "key = value" lines (keys are the option names with '-' -> '_'); command
# line beats config beats defaults, and unknown keys are rejected.

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import amplify, decompose, search, statevector, trotter
from .pauli import bloch_point
from .linalg import spectral_norm

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CLAIM = 3
EXIT_IO = 4

RESIDUAL_LIMIT = 1e-9
ENDPOINT_TOL = 1e-9
SLOPE_WINDOW = (0.9, 1.1)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError as exc:
        raise CliError(f"bad integer list {text!r}: {exc}", EXIT_VALIDATION) from exc


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in str(text).split(",") if part.strip()]
    except ValueError as exc:
        raise CliError(f"bad float list {text!r}: {exc}", EXIT_VALIDATION) from exc


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}", EXIT_IO) from exc


def _table_text(fmt: str, columns: list[str], rows: list[list[float]], extra: dict | None = None) -> str:
    if fmt == "json":
        doc = {"columns": columns, "rows": [[float(x) for x in row] for row in rows]}
        if extra:
            doc.update(extra)
        return json.dumps(doc, indent=1) + "\n"
    lines = [",".join(columns)]
    lines += [",".join(_fmt(x) for x in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if extra:
        text += "# " + json.dumps(extra, sort_keys=True) + "\n"
    return text


def _default_threads() -> int:
    raw = os.environ.get("HAMSEARCH_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# Subcommands


def cmd_trajectory(args) -> int:
    if args.n < 2:
        raise CliError("N must be >= 2", EXIT_VALIDATION)
    if args.samples < 2:
        raise CliError("need at least 2 samples", EXIT_VALIDATION)
    inst = search.SearchInstance(args.n)
    q_total = search.step_params(inst).q_total
    total = inst.total_time
    rows = []
    for t in np.linspace(0.0, total, args.samples):
        psi_c = search.evolve_continuous(inst, t) @ inst.source_state
        psi_g = search.grover_power(inst, q_total * t / total) @ inst.source_state
        rows.append([t, *bloch_point(psi_c), *bloch_point(psi_g)])
    start = bloch_point(inst.source_state)
    end = bloch_point(inst.target_state)
    for row, ref in ((rows[0], start), (rows[-1], end)):
        for offset in (1, 4):
            if np.max(np.abs(np.asarray(row[offset : offset + 3]) - ref)) > ENDPOINT_TOL:
                raise CliError("trajectory endpoints deviate from the search states", EXIT_CLAIM)
    text = _table_text(args.format, ["t", "x_C", "y_C", "z_C", "x_G", "y_G", "z_G"], rows)
    _write_text(args.out, text)
    return EXIT_OK


def cmd_equivalence(args) -> int:
    n_values = _parse_int_list(args.n_list)
    if not n_values or any(n < 2 for n in n_values):
        raise CliError("N list must contain integers >= 2", EXIT_VALIDATION)
    if args.samples < 2:
        raise CliError("need at least 2 samples", EXIT_VALIDATION)

    def sweep(n: int) -> list[list[float]]:
        inst = search.SearchInstance(n)
        block = []
        for t in np.linspace(0.0, inst.total_time, args.samples):
            params = search.equivalence_params(inst, t)
            block.append([n, t, params.q_t, params.beta, search.equivalence_residual(inst, t)])
        return block

    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            blocks = list(pool.map(sweep, n_values))
    else:
        blocks = [sweep(n) for n in n_values]
    rows = [row for block in blocks for row in block]
    worst = max(row[4] for row in rows)
    text = _table_text(
        args.format,
        ["N", "t", "Q_t", "beta", "residual"],
        rows,
        extra={"max_residual": worst, "limit": RESIDUAL_LIMIT},
    )
    _write_text(args.out, text)
    if worst > RESIDUAL_LIMIT:
        print(f"equivalence residual {worst:.3e} above {RESIDUAL_LIMIT:.1e}", file=sys.stderr)
        return EXIT_CLAIM
    return EXIT_OK


def _scan_problem(args):
    if args.problem == "search-split":
        inst = search.SearchInstance(args.n)
        s = inst.source_state
        t = inst.target_state
        terms = trotter.HermitianTermSet(
            dimension=2,
            terms=(np.outer(s, s.conj()), np.outer(t, t.conj())),
            labels=("source-projector", "target-projector"),
        )
        total_time = args.t if args.t is not None else inst.total_time
    elif args.problem == "chain":
        h, graph = decompose.laplacian_chain(args.length, periodic=args.periodic)
        terms = decompose.decompose(h, graph)
        total_time = args.t if args.t is not None else 2.0
    else:
        raise CliError(f"unknown problem {args.problem!r}", EXIT_VALIDATION)
    return terms, total_time


def cmd_trotter_scan(args) -> int:
    dt_grid = _parse_float_list(args.dt_grid)
    if len(dt_grid) < 4:
        raise CliError("dt grid needs at least 4 points", EXIT_VALIDATION)
    if any(dt <= 0 for dt in dt_grid):
        raise CliError("dt values must be positive", EXIT_VALIDATION)
    terms, total_time = _scan_problem(args)
    norm_e2 = trotter.commutator_error(terms).norm_e2
    exact = trotter.exact_term_exponential(terms.total(), total_time)
    rows = []
    for dt in dt_grid:
        steps = max(1, round(total_time / dt))
        if steps > args.step_cap:
            raise CliError(f"dt={dt:g} needs {steps} steps, above cap {args.step_cap}", EXIT_VALIDATION)
        plan = trotter.TrotterPlan(total_time, steps)
        approx = trotter.trotter_evolve(terms, plan)
        error = spectral_norm(approx - exact)
        bound = 2.0 * total_time * norm_e2 * plan.dt
        rows.append([plan.dt, steps, error, bound])
    logs = np.log([row[0] for row in rows])
    errs = np.log([row[2] for row in rows])
    slope = float(np.polyfit(logs, errs, 1)[0])
    extra = {
        "slope": slope,
        "slope_window": list(SLOPE_WINDOW),
        "norm_e2": norm_e2,
        "total_time": total_time,
    }
    text = _table_text(args.format, ["dt", "n", "error", "bound"], rows, extra=extra)
    _write_text(args.out, text)
    if any(row[2] > row[3] for row in rows):
        print("measured error above the slack-2 commutator bound", file=sys.stderr)
        return EXIT_CLAIM
    if not (SLOPE_WINDOW[0] <= slope <= SLOPE_WINDOW[1]):
        print(f"fitted slope {slope:.3f} outside {SLOPE_WINDOW}", file=sys.stderr)
        return EXIT_CLAIM
    return EXIT_OK


def _decompose_input(args):
    if args.graph is not None:
        try:
            graph = decompose.load_graph(args.graph)
        except (OSError, ValueError) as exc:
            code = EXIT_IO if isinstance(exc, OSError) else EXIT_VALIDATION
            raise CliError(f"cannot load graph {args.graph}: {exc}", code) from exc
        n = graph.vertex_count
        h = np.zeros((n, n), dtype=complex)
        for u, v, w in graph.edges:
            h[u, v] = -w
            h[v, u] = -w
            h[u, u] += abs(w)
            h[v, v] += abs(w)
        return h, graph, None
    if args.lattice == "chain":
        h, graph = decompose.laplacian_chain(args.length, periodic=False)
        return h, graph, None
    if args.lattice == "ring":
        h, graph = decompose.laplacian_chain(args.length, periodic=True)
        spectrum = np.sort(4.0 * np.sin(np.pi * np.arange(args.length) / args.length) ** 2)
        return h, graph, spectrum
    if args.lattice == "honeycomb":
        h, graph = decompose.honeycomb_lattice(args.cells_x, args.cells_y, periodic=args.periodic)
        return h, graph, None
    raise CliError(f"unknown lattice {args.lattice!r}", EXIT_VALIDATION)


def cmd_decompose(args) -> int:
    try:
        h, graph, expected_spectrum = _decompose_input(args)
        coloring = decompose.color_edges(graph)
        term_set = decompose.decompose(h, graph, coloring)
    except CliError:
        raise
    except AssertionError as exc:
        raise CliError(f"edge coloring failed: {exc}", EXIT_CLAIM) from exc
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc

    if args.out != "-":
        try:
            trotter.save_term_set(args.out, term_set)
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO) from exc

    reconstruction = float(np.max(np.abs(term_set.total() - h)))
    squaring = {}
    for label, term in zip(term_set.labels, term_set.terms):
        if label.startswith("color"):
            squaring[label] = float(np.max(np.abs(term @ term - 2.0 * term)))
    report = {
        "vertices": graph.vertex_count,
        "edges": len(graph.edges),
        "max_degree": graph.max_degree,
        "color_count": coloring.color_count,
        "bipartite": decompose.bipartition(graph) is not None,
        "terms": list(term_set.labels),
        "reconstruction_residual": reconstruction,
        "projector_squaring_residuals": squaring,
    }
    ok = reconstruction <= 1e-12
    if expected_spectrum is not None:
        observed = np.sort(np.linalg.eigvalsh(term_set.total()))
        spectrum_err = float(np.max(np.abs(observed - expected_spectrum)))
        report["spectrum_residual"] = spectrum_err
        ok = ok and spectrum_err <= 1e-10
    report["pass"] = bool(ok)
    text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    if args.report is not None:
        _write_text(args.report, text)
    elif args.out == "-":
        _write_text("-", text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_CLAIM


def cmd_grover(args) -> int:
    if args.n < 2:
        raise CliError("N must be >= 2", EXIT_VALIDATION)
    inst = search.SearchInstance(args.n)
    expected = statevector.expected_peak_step(args.n)
    max_steps = args.max_steps if args.max_steps is not None else max(1, 2 * expected)
    if max_steps < 1:
        raise CliError("max-steps must be >= 1", EXIT_VALIDATION)
    if not (0 <= args.target < args.n):
        raise CliError("target index outside the database", EXIT_VALIDATION)
    curve = statevector.success_curve(args.n, max_steps, target=args.target)
    rows = [[k, p] for k, p in enumerate(curve)]
    peak = statevector.peak_step(curve)
    extra = {
        "peak_step": peak,
        "expected_peak_step": expected,
        "peak_probability": float(curve[peak]),
        "bound": 1.0 - 1.0 / args.n,
    }
    text = _table_text(args.format, ["step", "probability"], rows, extra=extra)
    _write_text(args.out, text)

    if args.runs is not None:
        if args.runs < 1 or args.runs % 2 == 0:
            raise CliError("runs must be an odd integer >= 1", EXIT_VALIDATION)
        per_run = 1.0 / args.n
        if args.measured_error:
            per_run = max(0.0, 1.0 - float(curve[peak]))
        amp_rows = []
        for r in range(1, args.runs + 1, 2):
            plan = amplify.AmplificationPlan(
                per_run_error=per_run, runs=r, trials=args.trials, seed=args.seed
            )
            est = amplify.simulate_majority(plan)
            amp_rows.append(
                [
                    r,
                    amplify.majority_bound(r, n=args.n),
                    amplify.majority_error_exact(per_run, r),
                    est.rate,
                    est.ci_halfwidth,
                ]
            )
        amp_text = _table_text(args.format, ["R", "bound", "exact", "empirical", "ci95"], amp_rows)
        amp_out = args.amplification_out
        if amp_out is None:
            amp_out = "-" if args.out == "-" else args.out + ".amplification.csv"
        _write_text(amp_out, amp_text)

    if curve[peak] < 1.0 - 1.0 / args.n:
        print(f"peak probability {curve[peak]:.12f} below 1 - 1/N", file=sys.stderr)
        return EXIT_CLAIM
    return EXIT_OK


def cmd_cost(args) -> int:
    if args.n < 3:
        raise CliError("N must be >= 3", EXIT_VALIDATION)
    if not (0.0 < args.eps < 1.0):
        raise CliError("eps must lie in (0, 1)", EXIT_VALIDATION)
    inst = search.SearchInstance(args.n)
    total_time = args.t if args.t is not None else inst.total_time
    if total_time <= 0:
        raise CliError("t must be positive", EXIT_VALIDATION)
    s = inst.source_state
    tgt = inst.target_state
    split = trotter.HermitianTermSet(
        dimension=2,
        terms=(np.outer(s, s.conj()), np.outer(tgt, tgt.conj())),
        labels=("source-projector", "target-projector"),
    )
    norm_e2 = trotter.commutator_error(split).norm_e2
    cm = amplify.CostModel(
        total_time=total_time,
        error_budget=args.eps,
        database_size=args.n,
        term_count=2,
        norm_e2=norm_e2,
        step_cost=args.step_cost,
        grover_step_cost=args.grover_step_cost,
    )
    tc = amplify.trotter_complexity(cm)
    gc = amplify.grover_complexity(cm)
    steps = max(1, int(np.ceil(tc.steps)))
    bits = amplify.register_width(steps, cm.term_count, args.eps)
    report = {
        "inputs": {
            "N": args.n,
            "t": total_time,
            "eps": args.eps,
            "term_count": cm.term_count,
            "norm_e2": norm_e2,
            "step_cost": cm.step_cost,
            "grover_step_cost": cm.grover_step_cost,
        },
        "n": steps,
        "dt": total_time / steps,
        "b": bits,
        "C": amplify.per_step_cost(args.n, bits),
        "cost": {
            "trotter": tc.cost,
            "grover": gc.cost,
            "ratio_grover_over_trotter": gc.cost / tc.cost if tc.cost > 0 else float("inf"),
        },
        "grover": {"q_steps": gc.q_steps, "runs": gc.runs, "runs_formula": gc.runs_formula},
        "queries": {"trotter": tc.queries, "grover": gc.queries},
        "convention": {
            "queries_per_trotter_step": cm.queries_per_trotter_step,
            "queries_per_grover_step": cm.queries_per_grover_step,
        },
    }
    _write_text(args.out, json.dumps(report, indent=1, sort_keys=True) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser and config plumbing


def _add_common(sp) -> None:
    sp.add_argument("--out", default="-", help="output path ('-' for stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=_default_threads())
    sp.add_argument("--config", default=None, help="flat key=value config file")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hamsearch",
        description="Search-evolution experiments: trajectories, equivalence "
        "residuals, product-formula error scans, decompositions, full-space "
        "success curves, and cost comparisons.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    commands = {}

    sp = subparsers.add_parser("trajectory", help="Bloch trajectories of both routes")
    sp.add_argument("--n", type=int, default=16, help="database size")
    sp.add_argument("--samples", type=int, default=65)
    _add_common(sp)
    commands["trajectory"] = (sp, cmd_trajectory)

    sp = subparsers.add_parser("equivalence", help="residuals of the route-equivalence identity")
    sp.add_argument("--n-list", default="4,16,64,256,1024")
    sp.add_argument("--samples", type=int, default=20)
    _add_common(sp)
    commands["equivalence"] = (sp, cmd_equivalence)

    sp = subparsers.add_parser("trotter-scan", help="error vs step size for a term split")
    sp.add_argument("--problem", choices=("search-split", "chain"), default="search-split")
    sp.add_argument("--n", type=int, default=16, help="database size (search-split)")
    sp.add_argument("--length", type=int, default=8, help="chain sites")
    sp.add_argument("--periodic", action="store_true")
    sp.add_argument("--t", type=float, default=None, help="total time (default: problem specific)")
    sp.add_argument("--dt-grid", default="0.2,0.1,0.05,0.025")
    sp.add_argument("--step-cap", type=int, default=10_000_000)
    _add_common(sp)
    commands["trotter-scan"] = (sp, cmd_trotter_scan)

    sp = subparsers.add_parser("decompose", help="edge-color a lattice and emit its term set")
    sp.add_argument("--lattice", choices=("chain", "ring", "honeycomb"), default="ring")
    sp.add_argument("--length", type=int, default=8)
    sp.add_argument("--cells-x", type=int, default=3)
    sp.add_argument("--cells-y", type=int, default=4)
    sp.add_argument("--periodic", action="store_true")
    sp.add_argument("--graph", default=None, help="external graph JSON instead of a lattice")
    sp.add_argument("--report", default=None, help="where to write the validation report")
    _add_common(sp)
    commands["decompose"] = (sp, cmd_decompose)

    sp = subparsers.add_parser("grover", help="full-space success curve and amplification")
    sp.add_argument("--n", type=int, default=1024)
    sp.add_argument("--max-steps", type=int, default=None)
    sp.add_argument("--target", type=int, default=0)
    sp.add_argument("--runs", type=int, default=None, help="amplification run count (odd)")
    sp.add_argument("--trials", type=int, default=1_000_000)
    sp.add_argument(
        "--measured-error",
        action="store_true",
        help="amplify the measured per-run error instead of the worst case 1/N",
    )
    sp.add_argument("--amplification-out", default=None)
    _add_common(sp)
    commands["grover"] = (sp, cmd_grover)

    sp = subparsers.add_parser("cost", help="small-step vs reflection-route complexity")
    sp.add_argument("--n", type=int, default=1024)
    sp.add_argument("--t", type=float, default=None, help="evolution time (default (pi/2) sqrt(N))")
    sp.add_argument("--eps", type=float, default=1e-6)
    sp.add_argument("--step-cost", type=float, default=1.0)
    sp.add_argument("--grover-step-cost", type=float, default=1.0)
    _add_common(sp)
    commands["cost"] = (sp, cmd_cost)

    return parser, commands


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_IO) from exc
    config = {}
    for lineno, line in enumerate(lines, 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise CliError(f"{path}:{lineno}: expected 'key = value'", EXIT_VALIDATION)
        key, _, value = stripped.partition("=")
        config[key.strip().replace("-", "_")] = value.strip()
    return config


def _apply_config(subparser, config: dict) -> None:
    known = {}
    for action in subparser._actions:
        if action.dest not in ("help", "config"):
            known[action.dest] = action
    overrides = {}
    for key, raw in config.items():
        if key not in known:
            raise CliError(f"unknown config key {key!r}", EXIT_VALIDATION)
        action = known[key]
        if isinstance(action, argparse._StoreTrueAction):
            overrides[key] = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            try:
                overrides[key] = action.type(raw)
            except ValueError as exc:
                raise CliError(f"config key {key!r}: {exc}", EXIT_VALIDATION) from exc
        else:
            overrides[key] = raw
    subparser.set_defaults(**overrides)


def main(argv=None) -> int:
    parser, commands = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "config", None):
            subparser, _ = commands[args.command]
            _apply_config(subparser, _load_config(args.config))
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK
    except CliError as exc:
        print(f"hamsearch: {exc}", file=sys.stderr)
        return exc.code

    _, handler = commands[args.command]
    try:
        return handler(args)
    except CliError as exc:
        print(f"hamsearch: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"hamsearch: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"hamsearch: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
