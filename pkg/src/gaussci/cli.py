"""Command-line interface.

Subcommands bind the library modules to text input: graphs come from
files in the ``n <count>`` / ``a -> b`` format, conditional independence
statements use the ``A _||_ B | C`` syntax.  ``--json`` switches every
command to machine-readable output with deterministic key order.  Exit
codes: 0 for decided queries, 1 for argument or input errors, 2 when a
size guard refuses the computation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dag import Dag, d_separated, format_dag, parse_dag
from .errors import GuardError
from .gaussoid import close, glob_statements, verify_conjecture_n4
from .implication import (
    AugmentedModel,
    CiStatement,
    Verdict,
    decompose,
    exact_components,
    format_statement,
    implies_exact,
    iterative_decompose,
    parse_statement,
)
from .numeric import ApproxQuery, approx_implies, search_counterexample
from .sweeps import (
    approx_sweep,
    criteria_sweep,
    mi_gap_sweep,
    numeric_soundness_sweep,
    trek_oracle_sweep,
)
from .trek import ci_minor, phi_sigma, principal_minor_images, saturate, sigma_entry


class CliError(Exception):
    """Argument-level failure; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _load_graph(path: str) -> Dag:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read graph file {path}: {e}") from None
    return parse_dag(text)


def _edges_json(g: Dag) -> list[list[int]]:
    return [[a, b] for a, b in g.sorted_edges()]


def _edges_text(g: Dag) -> str:
    if not g.edges:
        return "(no edges)"
    return ", ".join(f"{a}->{b}" for a, b in g.sorted_edges())


def _statement_arg(text: str) -> CiStatement:
    return parse_statement(text)


def _elementary_pair(premise: CiStatement, conclusion: CiStatement):
    """Split two premise/conclusion statements into an ApproxQuery skeleton."""
    if not premise.is_elementary or not conclusion.is_elementary:
        raise CliError("premise and conclusion must be elementary statements")
    if premise.C != conclusion.C:
        raise CliError("premise and conclusion must share the conditioning set")
    p = premise.A | premise.B
    c = conclusion.A | conclusion.B
    shared = p & c
    if len(shared) != 1:
        raise CliError("premise and conclusion must share exactly one node")
    i = next(iter(shared))
    j = next(iter(p - shared))
    l = next(iter(c - shared))
    return i, j, l, premise.C


# -- subcommand handlers -------------------------------------------------------


def _cmd_dsep(args) -> tuple[list[str], dict]:
    g = _load_graph(args.graph)
    s = _statement_arg(args.statement)
    s.validate_nodes(g)
    sep = d_separated(g, s.A, s.B, s.C)
    text = "d-separated" if sep else "NOT d-separated"
    return [text], {"statement": format_statement(s), "separated": sep}


def _cmd_phi(args) -> tuple[list[str], dict]:
    g = _load_graph(args.graph)
    g._check_node(args.i)
    g._check_node(args.j)
    poly = sigma_entry(phi_sigma(g), args.i, args.j)
    return [str(poly)], {"i": args.i, "j": args.j, "polynomial": str(poly)}


def _cmd_minor(args) -> tuple[list[str], dict]:
    g = _load_graph(args.graph)
    s = _statement_arg(args.statement)
    s.validate_nodes(g)
    if not s.is_elementary:
        raise CliError("minor requires an elementary statement")
    i, j, K = s.elementary()
    minor = ci_minor(g, i, j, K)
    lines = [str(minor)]
    payload = {"statement": format_statement(s), "polynomial": str(minor)}
    if args.saturate:
        sat = saturate(minor, g)
        lines.append(f"saturated: {sat}")
        payload["saturated"] = str(sat)
    return lines, payload


def _cmd_implies(args) -> tuple[list[str], dict]:
    g = _load_graph(args.graph)
    extra = _statement_arg(args.extra)
    query = _statement_arg(args.statement)
    model = AugmentedModel(g, extra)
    verdict = implies_exact(model, query)

    witness_polys: list[str] = []
    components: list[list[list[int]]] = []
    a, b, C = query.elementary()
    if not d_separated(g, {a}, {b}, C):
        sigma = phi_sigma(g)
        images = principal_minor_images(g, sigma)
        i, j, K = extra.elementary()
        sat_extra = saturate(ci_minor(g, i, j, K, sigma), g, images)
        sat_query = saturate(ci_minor(g, a, b, C, sigma), g, images)
        witness_polys = [str(sat_extra), str(sat_query)]
        comps = exact_components(model, sigma, images)
        if comps is not None:
            components = [_edges_json(c) for c in comps]

    lines = [
        "implied"
        if verdict is Verdict.IMPLIED
        else "not implied on the positive-definite part"
    ]
    for label, poly in zip(("extra", "query"), witness_polys):
        lines.append(f"saturated {label} minor: {poly}")
    payload = {
        "verdict": verdict.value,
        "witness_polynomials": witness_polys,
        "component_graphs": components,
    }
    return lines, payload


def _cmd_decompose(args) -> tuple[list[str], dict]:
    g = _load_graph(args.graph)
    s = _statement_arg(args.statement)
    model = AugmentedModel(g, s)
    result = decompose(model)
    lines: list[str] = []
    payload = {
        "is_union": result.is_union,
        "graphical_edges": [[a, b] for a, b in result.graphical_edges],
        "components": [_edges_json(c) for c in result.graphs],
        "residual": None if result.residual is None else str(result.residual),
    }
    if result.is_union:
        lines.append(f"union of {len(result.graphs)} graphical models:")
        for (a, b), comp in zip(result.graphical_edges, result.graphs):
            lines.append(f"  delete {a}->{b}: {_edges_text(comp)}")
    else:
        lines.append("not graphical")
        if result.graphical_edges:
            edges = ", ".join(f"{a}->{b}" for a, b in result.graphical_edges)
            lines.append(f"graphical edges: {edges}")
        lines.append(f"residual: {result.residual}")
    if args.emit_graphs is not None:
        outdir = Path(args.emit_graphs)
        outdir.mkdir(parents=True, exist_ok=True)
        files = []
        for k, comp in enumerate(result.graphs, 1):
            path = outdir / f"component_{k}.dag"
            path.write_text(format_dag(comp))
            files.append(str(path))
        lines.extend(f"wrote {p}" for p in files)
        payload["files"] = files
    return lines, payload


def _cmd_iterate(args) -> tuple[list[str], dict]:
    g = _load_graph(args.graph)
    statements = [_statement_arg(t) for t in args.statements]
    result = iterative_decompose(g, statements)
    lines: list[str] = []
    if result.is_union:
        lines.append(f"union of {len(result.graphs)} graphical models:")
        lines.extend(f"  {_edges_text(c)}" for c in result.graphs)
    else:
        stuck = format_statement(statements[result.stuck_at])
        lines.append(f"stuck at statement {result.stuck_at + 1}: {stuck}")
        lines.append(f"candidates when stuck ({len(result.partial)}):")
        lines.extend(f"  {_edges_text(c)}" for c in result.partial)
    payload = {
        "graphs": [_edges_json(c) for c in result.graphs],
        "stuck_at": result.stuck_at,
        "partial": [_edges_json(c) for c in result.partial],
    }
    return lines, payload


def _cmd_gaussoid_close(args) -> tuple[list[str], dict]:
    g = _load_graph(args.graph)
    statements = [_statement_arg(t) for t in args.statements]
    for s in statements:
        s.validate_nodes(g)
        if not s.is_elementary:
            raise CliError(f"statement {format_statement(s)} is not elementary")
    base = set() if args.no_glob else set(glob_statements(g))
    result = close(base | set(statements), g.n)
    common = sorted(result.common, key=format_statement)
    lines = [f"branches: {len(result.branches)}", f"common ({len(common)}):"]
    lines.extend(f"  {format_statement(s)}" for s in common)
    payload = {
        "branches": [
            sorted(format_statement(s) for s in branch)
            for branch in result.branches
        ],
        "common": [format_statement(s) for s in common],
    }
    return lines, payload


def _cmd_approx_implies(args) -> tuple[list[str], dict]:
    g = _load_graph(args.graph)
    i, j, l, K = _elementary_pair(
        _statement_arg(args.premise), _statement_arg(args.conclusion)
    )
    q = ApproxQuery(i, j, l, K, args.delta)
    implied = approx_implies(g, q)
    text = (
        "implied at every tolerance"
        if implied
        else "not implied; witnesses exist at some tolerance"
    )
    return [text], {
        "i": i,
        "j": j,
        "l": l,
        "K": sorted(K),
        "delta": args.delta,
        "implied": implied,
    }


def _cmd_witness(args) -> tuple[list[str], dict]:
    g = _load_graph(args.graph)
    i, j, l, K = _elementary_pair(
        _statement_arg(args.premise), _statement_arg(args.conclusion)
    )
    q = ApproxQuery(i, j, l, K, args.delta)
    w = search_counterexample(g, q, budget=args.budget, seed=args.seed)
    if w is None:
        lines = ["no witness found within budget (inconclusive)"]
        return lines, {"found": False}
    lam = w.sem.lam_dict()
    payload = {
        "found": True,
        "lambda": {f"{a}->{b}": lam[(a, b)] for a, b in w.sem.dag.sorted_edges()},
        "omega": {str(v): w.omega_scaled[v - 1] for v in w.sem.dag.nodes},
        "rho_ij": w.rho_ij,
        "rho_il": w.rho_il,
    }
    lines = ["witness found:"]
    lines.extend(f"  lambda {e} = {v:.6g}" for e, v in payload["lambda"].items())
    lines.extend(f"  omega {node} = {v:.6g}" for node, v in payload["omega"].items())
    lines.append(f"  rho_ij = {w.rho_ij:.6g}")
    lines.append(f"  rho_il = {w.rho_il:.6g}")
    return lines, payload


def _cmd_verify_n4(args) -> tuple[list[str], dict]:
    records: list[dict] = []

    def record(edges, extra, implied, common, violation):
        records.append(
            {
                "dag": [[a, b] for a, b in edges],
                "extra": format_statement(extra),
                "implied_algebraic": [format_statement(s) for s in implied],
                "implied_gaussoid": [format_statement(s) for s in common],
                "violation": violation,
            }
        )

    report = verify_conjecture_n4(
        progress=args.progress, record=record if args.json else None
    )
    summary = {
        "n_dags": report.n_dags,
        "n_cases": report.n_cases,
        "violations": len(report.violations),
        "exceptional_matches": len(report.exceptional_matches),
        "subset_matches": len(report.subset_matches),
        "seconds": report.seconds,
    }
    payload = {"cases": records, "summary": summary}
    return [report.summary()], payload


_SWEEPS = {
    "criteria": lambda args: criteria_sweep(max_n=args.max_n or 4),
    "trek-oracle": lambda args: trek_oracle_sweep(
        max_n=args.max_n or 5, seed=args.seed
    ),
    "numeric": lambda args: numeric_soundness_sweep(seed=args.seed),
    "approximate": lambda args: approx_sweep(
        max_n=args.max_n or 4, budget=args.budget, seed=args.seed
    ),
    "mi-gap": lambda args: mi_gap_sweep(seed=args.seed),
}


def _cmd_sweep(args) -> tuple[list[str], dict]:
    report = _SWEEPS[args.name](args)
    payload = {
        "name": report.name,
        "n_dags": report.n_dags,
        "n_cases": report.n_cases,
        "mismatches": list(report.mismatches),
        "seconds": report.seconds,
        "ok": report.ok,
    }
    return [report.summary()], payload


# -- parser ---------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="gaussci", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text, graph_required=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--graph", required=graph_required, help="graph file")
        p.add_argument("--json", action="store_true", help="machine output")
        p.set_defaults(handler=handler)
        return p

    p = add("dsep", _cmd_dsep, "decide d-separation for a CI statement")
    p.add_argument("statement")

    p = add("phi", _cmd_phi, "covariance entry as a polynomial in the parameters")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)

    p = add("minor", _cmd_minor, "almost-principal minor of a CI statement")
    p.add_argument("statement")
    p.add_argument("--saturate", action="store_true")

    p = add("implies", _cmd_implies, "exact implication on the augmented model")
    p.add_argument("--extra", required=True, help="the added CI statement")
    p.add_argument("statement", help="the query statement")

    p = add("decompose", _cmd_decompose, "split into edge-deleted DAG models")
    p.add_argument("statement")
    p.add_argument("--emit-graphs", metavar="DIR", default=None)

    p = add("iterate", _cmd_iterate, "fold several statements into a union")
    p.add_argument("statements", nargs="+")

    p = add("gaussoid-close", _cmd_gaussoid_close, "gaussoid closure of statements")
    p.add_argument("statements", nargs="*")
    p.add_argument("--no-glob", action="store_true",
                   help="close only the given statements, not the graph's")

    p = add("approx-implies", _cmd_approx_implies,
            "approximate implication between two statements")
    p.add_argument("premise")
    p.add_argument("conclusion")
    p.add_argument("--delta", type=float, default=0.05)

    p = add("witness", _cmd_witness, "search a counterexample SEM")
    p.add_argument("premise")
    p.add_argument("conclusion")
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)

    p = add("verify-n4", _cmd_verify_n4, "four-node closure completeness check",
            graph_required=False)
    p.add_argument("--progress", action="store_true")

    p = add("sweep", _cmd_sweep, "cross-validation sweeps", graph_required=False)
    p.add_argument("name", choices=sorted(_SWEEPS))
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=10_000)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        lines, payload = args.handler(args)
    except GuardError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (CliError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if args.json:
        if args.command == "verify-n4":
            for case in payload["cases"]:
                print(json.dumps(case))
            print(json.dumps({"summary": payload["summary"]}))
        else:
            print(json.dumps(payload))
    else:
        for line in lines:
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
