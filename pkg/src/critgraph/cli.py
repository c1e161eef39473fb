"""Command-line front end: one entry point over every analysis module.

Commands: check-params, classify, dense, sample, discharge, pipeline,
verify, enumerate.  Exit status separates outcome from content: 0 means the
analysis completed (a failing bound still exits 0 -- the failure is data),
2 means an input or configuration error, 3 means a search budget ran out.

Reports are JSON-lines first (header object, then one object per record),
CSV for flat tables, pretty text last.  Every report embeds the parameter
set actually used, the schema version, and the artifact version, and the
same configuration and seed always produce byte-identical output.  Files
are written atomically (temp file + rename).  The precision flag selects
float or exact-rational charge arithmetic; the sampler is inherently
randomized and therefore refuses rational mode.  CRITGRAPH_THREADS caps the
worker threads the sampler fans its trial spans across; the span counters
make the merged counts independent of the fan-out.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .classify import charge_exact, classify_graph
from .critical import (
    BudgetExceededError,
    enumerate_k_critical,
    verify_ky_bound,
    verify_thm_1_2,
    verify_thm_1_4,
)
from .dense import has_no_dense_subgraph
from .discharge import (
    apply_rules,
    build_decomposition,
    main_inequality_sides,
    reduction_pipeline,
    verify_positive_final_charge,
)
from .graphs import clique_number, parse_dimacs, to_dimacs
from .lists import (
    CorrespondenceAssignment,
    ListAssignment,
    assignment_from_json,
    identity_correspondence,
)
from .params import ParamSet, check_inequalities, default_paper_params
from .sampler import empirical_marginals, retention_rate

SCHEMA_VERSION = 1


class InputError(Exception):
    """Missing file, malformed content, or inconsistent configuration."""


@dataclass
class RunConfig:
    """Everything an invocation depends on; fully determines the report."""

    graph: Optional[str] = None
    lists: Optional[str] = None
    matchings: Optional[str] = None
    params: Optional[str] = None
    seed: int = 0
    trials: int = 10_000
    mode: Optional[str] = None
    out: Optional[str] = None
    format: str = "json"
    precision: str = "float"
    threads: int = 1
    extra: dict = field(default_factory=dict)


# ===========================================================================
# input loading
# ===========================================================================

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from e


def _load_graph(cfg: RunConfig) -> Graph:
    if cfg.graph is None:
        raise InputError("this command needs --graph")
    try:
        return parse_dimacs(_read(cfg.graph))
    except ValueError as e:
        raise InputError(f"{cfg.graph}: {e}") from e


def _load_json(path: str) -> str:
    text = _read(path)
    try:
        json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(
            f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e
    return text


def _load_lists(cfg: RunConfig, g: Graph) -> ListAssignment:
    if cfg.lists is None:
        raise InputError("this command needs --lists")
    try:
        loaded = assignment_from_json(g, _load_json(cfg.lists))
    except ValueError as e:
        raise InputError(f"{cfg.lists}: {e}") from e
    return loaded.base if isinstance(loaded, CorrespondenceAssignment) else loaded


def _load_correspondence(cfg: RunConfig, g: Graph) -> CorrespondenceAssignment:
    path = cfg.matchings or cfg.lists
    if path is None:
        raise InputError("this command needs --matchings or --lists")
    try:
        loaded = assignment_from_json(g, _load_json(path))
    except ValueError as e:
        raise InputError(f"{path}: {e}") from e
    if isinstance(loaded, CorrespondenceAssignment):
        return loaded
    return identity_correspondence(g, loaded)


def _load_params(cfg: RunConfig) -> ParamSet:
    if cfg.params is None:
        return default_paper_params()
    try:
        return ParamSet.from_json(_load_json(cfg.params))
    except (ValueError, KeyError, TypeError) as e:
        raise InputError(f"{cfg.params}: {e}") from e


# ===========================================================================
# rendering
# ===========================================================================

def _show(value, precision: str):
    """Fractions render as exact 'p/q' strings in rational mode, floats else."""
    if isinstance(value, Fraction):
        return str(value) if precision == "rational" else float(value)
    return value


def _envelope(command: str, cfg: RunConfig, p: Optional[ParamSet]) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "artifact": "critgraph",
        "version": __version__,
        "command": command,
        "precision": cfg.precision,
        "seed": cfg.seed,
        "params": None if p is None else json.loads(p.to_json()),
    }


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=str)


def _cell(value) -> object:
    if isinstance(value, (dict, list, tuple)):
        return _dumps(value)
    return "" if value is None else value


def _render(header: dict, records: list[dict], fmt: str) -> str:
    if fmt == "json":
        return "\n".join([_dumps(header)] + [_dumps(r) for r in records]) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        for key in sorted(header):
            buf.write(f"# {key}={_dumps(header[key])}\n")
        if records:
            fields = sorted({k for r in records for k in r})
            writer = csv.DictWriter(buf, fieldnames=fields, restval="",
                                    lineterminator="\n")
            writer.writeheader()
            for r in records:
                writer.writerow({k: _cell(v) for k, v in r.items()})
        return buf.getvalue()
    lines = [f"{key}: {_dumps(header[key])}" for key in sorted(header)]
    for r in records:
        lines.append("  " + "  ".join(f"{k}={_dumps(r[k])}" for k in sorted(r)))
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".critgraph-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ===========================================================================
# commands
# ===========================================================================

def _cmd_check_params(cfg: RunConfig):
    p = _load_params(cfg)
    report = check_inequalities(p)
    blob = json.loads(report.to_json())
    header = _envelope("check-params", cfg, p)
    header.update({
        "all_pass": report.all_pass,
        "failing": report.failing(),
        "constants": blob["constants"],
        "precision_bits": blob["precision_bits"],
    })
    return 0, header, blob["checks"]


def _cmd_classify(cfg: RunConfig):
    g = _load_graph(cfg)
    L = _load_lists(cfg, g)
    p = _load_params(cfg)
    records = []
    for report in classify_graph(g, L, p):
        row = json.loads(report.to_json())
        if cfg.precision == "rational":
            row["charge"] = str(charge_exact(g, L, p, report.vertex))
        records.append(row)
    header = _envelope("classify", cfg, p)
    header["n"] = g.n
    header["m"] = g.num_edges()
    return 0, header, records


def _cmd_dense(cfg: RunConfig):
    g = _load_graph(cfg)
    L = _load_lists(cfg, g)
    p = _load_params(cfg)
    mode = cfg.mode or "heuristic"
    if mode not in ("heuristic", "exhaustive"):
        raise InputError(f"--mode must be heuristic or exhaustive, not {mode!r}")
    scan = has_no_dense_subgraph(g, L, p, mode=mode)
    header = _envelope("dense", cfg, p)
    header["mode"] = mode
    header["no_dense"] = scan.no_dense
    header["witness"] = (None if scan.witness is None
                         else json.loads(scan.witness.to_json()))
    return 0, header, [dict(entry) for entry in scan.log]


def _cmd_sample(cfg: RunConfig):
    if cfg.precision == "rational":
        raise InputError("the sampler is randomized; it has no rational mode")
    g = _load_graph(cfg)
    LM = _load_correspondence(cfg, g)
    p = _load_params(cfg)
    eps_proc = p.equalizing_epsilon
    retention = retention_rate(eps_proc)

    spans: list[tuple[int, int]] = []
    base, rem = divmod(cfg.trials, max(cfg.threads, 1))
    offset = 0
    for i in range(max(cfg.threads, 1)):
        width = base + (1 if i < rem else 0)
        if width:
            spans.append((offset, width))
            offset += width

    def span_counts(span):
        start, width = span
        return empirical_marginals(g, LM, eps_proc, cfg.seed, width,
                                   trial_offset=start)

    if len(spans) <= 1:
        results = [span_counts(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(span_counts, spans))

    colour_counts = {v: {} for v in g.vertices}
    uncoloured = {v: 0 for v in g.vertices}
    for counts, uncol in results:
        for v in g.vertices:
            uncoloured[v] += uncol[v]
            for c, k in counts[v].items():
                colour_counts[v][c] = colour_counts[v].get(c, 0) + k

    records = []
    for v in g.vertices:
        records.append({
            "vertex": v,
            "trials": cfg.trials,
            "uncoloured": uncoloured[v],
            "uncoloured_rate": (uncoloured[v] / cfg.trials) if cfg.trials else None,
            "expected_uncoloured_rate": 1 - retention,
            "colour_counts": {str(c): n for c, n in sorted(colour_counts[v].items())},
        })
    # the worker fan-out is deliberately absent from the report: the span
    # counters make the counts independent of it, so identical cfg + seed
    # stays byte-identical no matter how CRITGRAPH_THREADS is set
    header = _envelope("sample", cfg, p)
    header["trials"] = cfg.trials
    header["retention"] = retention
    return 0, header, records


def _cmd_discharge(cfg: RunConfig):
    g = _load_graph(cfg)
    L = _load_lists(cfg, g)
    p = _load_params(cfg)
    exact = cfg.precision == "rational"
    dec = build_decomposition(g, L, p)
    ledger = apply_rules(g, L, p, dec, exact=exact)
    positivity = verify_positive_final_charge(g, L, p, ledger, dec)
    lhs, rhs = main_inequality_sides(g, L, p)

    header = _envelope("discharge", cfg, p)
    header.update({
        "layers": [sorted(layer) for layer in dec.layers],
        "s_infinity": sorted(dec.s_infinity),
        "very_lordly_residue": sorted(dec.very_lordly_residue),
        "discharged": sorted(dec.discharged),
        "total_initial": _show(ledger.total_initial(), cfg.precision),
        "total_final": _show(ledger.total_final(), cfg.precision),
        "conservation_defect": _show(ledger.conservation_defect(), cfg.precision),
        "main_inequality": {"lhs": _show(lhs, cfg.precision),
                            "rhs": _show(rhs, cfg.precision),
                            "holds": lhs > rhs},
        "positivity": {"status": positivity.status,
                       "failing_hypotheses": positivity.failing_hypotheses()},
    })
    records = [{
        "vertex": v,
        "in_discharged": v in dec.discharged,
        "ch": _show(ledger.ch[v], cfg.precision),
        "ch1": _show(ledger.ch1[v], cfg.precision),
        "ch2": _show(ledger.ch2[v], cfg.precision),
        "ch_star": _show(ledger.ch_star[v], cfg.precision),
    } for v in g.vertices]

    trace_path = cfg.extra.get("trace")
    if trace_path:
        _atomic_write(trace_path, ledger.to_json() + "\n")
    return 0, header, records


def _cmd_pipeline(cfg: RunConfig):
    g = _load_graph(cfg)
    L = _load_lists(cfg, g)
    p = _load_params(cfg)
    mode = cfg.mode or "gated"
    if mode not in ("gated", "ungated"):
        raise InputError(f"--mode must be gated or ungated, not {mode!r}")
    outcome = reduction_pipeline(g, L, p, node_budget=cfg.extra.get("budget"),
                                 enforce_gate=(mode == "gated"))
    header = _envelope("pipeline", cfg, p)
    blob = json.loads(outcome.to_json())
    header.update({k: blob[k] for k in ("status", "mode", "coloring", "witness")})
    records = [dict(step) for step in outcome.iterations]
    return (3 if outcome.status == "budget_exhausted" else 0), header, records


def _cmd_verify(cfg: RunConfig):
    g = _load_graph(cfg)
    bound = cfg.extra.get("bound")
    try:
        eps = Fraction(cfg.extra.get("eps") or "2.6e-10")
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"--eps: {e}") from e
    header = _envelope("verify", cfg, None)
    header["bound"] = bound
    try:
        if bound == "ky":
            k = cfg.extra.get("k")
            if k is None:
                raise InputError("--bound ky needs --k")
            margin = verify_ky_bound(g, k)
            header.update({"k": k, "margin": _show(margin, cfg.precision),
                           "holds": margin >= 0})
        elif bound == "thm12":
            k = cfg.extra.get("k")
            if k is None:
                raise InputError("--bound thm12 needs --k")
            omega_cap = cfg.extra.get("omega_cap") or clique_number(g)
            check = verify_thm_1_2(g, k, omega_cap, eps)
            header.update({"k": k, "omega_cap": omega_cap,
                           "eps": _show(eps, cfg.precision),
                           "holds": check.holds,
                           "hypothesis_ok": check.hypothesis_ok,
                           "lhs": _show(check.lhs, cfg.precision),
                           "rhs": _show(check.rhs, cfg.precision)})
        else:
            check = verify_thm_1_4(g, eps)
            header.update({"eps": _show(eps, cfg.precision),
                           "holds": check.holds,
                           "hypothesis_ok": check.hypothesis_ok,
                           "chi": int(check.lhs),
                           "ceiling": int(check.rhs)})
    except ValueError as e:
        raise InputError(str(e)) from e
    return 0, header, []


def _cmd_enumerate(cfg: RunConfig):
    out_dir = cfg.out
    if out_dir is None:
        raise InputError("enumerate needs --out DIR for the graph files")
    k = cfg.extra.get("k")
    n_max = cfg.extra.get("nmax")
    if k is None or n_max is None:
        raise InputError("enumerate needs --k and --nmax")
    os.makedirs(out_dir, exist_ok=True)

    records = []
    exhausted = False
    try:
        stream = enumerate_k_critical(k, n_max, node_budget=cfg.extra.get("budget"))
        for index, (g, cert) in enumerate(stream):
            stem = f"critical_k{k}_n{g.n}_{index:03d}"
            graph_path = os.path.join(out_dir, stem + ".dimacs")
            cert_path = os.path.join(out_dir, stem + ".cert.json")
            _atomic_write(graph_path, to_dimacs(g))
            _atomic_write(cert_path, cert.to_json() + "\n")
            records.append({"index": index, "n": g.n, "m": g.num_edges(),
                            "graph_file": graph_path,
                            "certificate_file": cert_path})
    except ValueError as e:
        raise InputError(str(e)) from e
    except BudgetExceededError:
        exhausted = True
    header = _envelope("enumerate", cfg, None)
    header.update({"k": k, "n_max": n_max, "found": len(records),
                   "budget_exhausted": exhausted})
    return (3 if exhausted else 0), header, records


_COMMANDS = {
    "check-params": _cmd_check_params,
    "classify": _cmd_classify,
    "dense": _cmd_dense,
    "sample": _cmd_sample,
    "discharge": _cmd_discharge,
    "pipeline": _cmd_pipeline,
    "verify": _cmd_verify,
    "enumerate": _cmd_enumerate,
}


def run(command: str, cfg: RunConfig) -> tuple[int, str]:
    """Dispatch one command; returns (exit status, rendered report)."""
    if command not in _COMMANDS:
        raise InputError(f"unknown command {command!r}")
    if cfg.format not in ("json", "csv", "text"):
        raise InputError(f"--format must be json, csv or text, not {cfg.format!r}")
    if cfg.precision not in ("float", "rational"):
        raise InputError(
            f"--precision must be float or rational, not {cfg.precision!r}")
    try:
        code, header, records = _COMMANDS[command](cfg)
    except ValueError as e:
        # module-level precondition violations are configuration problems
        raise InputError(str(e)) from e
    return code, _render(header, records, cfg.format)


# ===========================================================================
# argument parsing
# ===========================================================================

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="critgraph",
        description="exact analysis of list-critical graph density arguments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, graph=False, lists=False):
        if graph:
            sp.add_argument("--graph", required=True,
                            help="graph in DIMACS edge format")
        if lists:
            sp.add_argument("--lists", help="list assignment JSON")
            sp.add_argument("--matchings",
                            help="correspondence assignment JSON (lists + matchings)")
        sp.add_argument("--params", help="parameter set JSON (default: ledger defaults)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
        sp.add_argument("--precision", choices=("float", "rational"), default="float")
        sp.add_argument("--out", help="write the report here instead of stdout")

    common(sub.add_parser("check-params", help="evaluate the 13 feasibility constraints"))
    common(sub.add_parser("classify", help="per-vertex charge and savings classes"),
           graph=True, lists=True)

    sp = sub.add_parser("dense", help="scan neighbourhoods for list-dense subgraphs")
    common(sp, graph=True, lists=True)
    sp.add_argument("--mode", choices=("heuristic", "exhaustive"), default="heuristic")

    sp = sub.add_parser("sample", help="equalized naive colouring marginals")
    common(sp, graph=True, lists=True)
    sp.add_argument("--trials", type=int, default=10_000)

    sp = sub.add_parser("discharge", help="decompose, apply rules, check conservation")
    common(sp, graph=True, lists=True)
    sp.add_argument("--trace", help="write the full transfer trace JSON here")

    sp = sub.add_parser("pipeline", help="peel-and-recurse reduction")
    common(sp, graph=True, lists=True)
    sp.add_argument("--mode", choices=("gated", "ungated"), default="gated")
    sp.add_argument("--budget", type=int, default=200_000,
                    help="solver node budget per call")

    sp = sub.add_parser("verify", help="evaluate a density bound on one graph")
    common(sp, graph=True)
    sp.add_argument("--bound", choices=("ky", "thm12", "thm14"), required=True)
    sp.add_argument("--k", type=int, help="criticality order (ky, thm12)")
    sp.add_argument("--eps", help="epsilon as a fraction or decimal string")
    sp.add_argument("--omega-cap", type=int, dest="omega_cap")

    sp = sub.add_parser("enumerate", help="all k-critical graphs up to n_max")
    common(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--nmax", type=int, required=True)
    sp.add_argument("--budget", type=int, help="search node budget")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    threads_raw = os.environ.get("CRITGRAPH_THREADS", "1")
    try:
        threads = max(1, int(threads_raw))
    except ValueError:
        raise InputError(f"CRITGRAPH_THREADS={threads_raw!r} is not an integer")
    known = ("graph", "lists", "matchings", "params", "seed", "trials",
             "mode", "out", "format", "precision")
    base = {name: getattr(args, name) for name in known if hasattr(args, name)}
    extra = {name: value for name, value in vars(args).items()
             if name not in known and name != "command"}
    return RunConfig(threads=threads, extra=extra, **base)


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        code, text = run(args.command, cfg)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BudgetExceededError as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return 3
    if cfg.out and args.command != "enumerate":
        _atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
