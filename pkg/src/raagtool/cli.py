"""``raagtool``: batch analyses of a graph file.

Exit status: 0 on success, 1 when a property or hypothesis needed by the
command fails, 2 when the input cannot be read or parsed.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .autos import EnumerationBoundExceeded
from .graphs import (
    Graph,
    GraphError,
    PropertyViolation,
    _is_tree,
    check_properties,
    check_tree_criterion,
    compute_domination,
    decompose,
    find_indicability_witness,
)
from .matrices import decide_property_T, falsify_character, h_generators, structure_report
from .randomgraphs import ExperimentConfig, nl_frequency
from .relations import (
    GeneratorSystem,
    RelationInconsistency,
    build_surjection,
    check_crossed_lantern,
    check_inner_kernel,
    check_m_transvection,
    check_tau_identity,
    iter_day_instances,
    R0_TYPES,
    build_pi,
)

FORMAT_VERSION = 1
COMMANDS = ("analyze", "decompose", "surjection", "decide-t", "verify-identities", "random-nl")


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Failure(Exception):
    """A property or hypothesis the command needs does not hold (exit 1)."""

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# input

def _build(vertices: list, edges: list[tuple]) -> Graph:
    """``edges`` carries ``(u, v, line)`` triples; errors keep the line."""
    seen = {}
    for v, line in vertices:
        if v in seen:
            raise ParseError(f"duplicate vertex {v!r}", line)
        seen[v] = line
    clean = []
    for u, v, line in edges:
        if u == v:
            raise ParseError(f"self-loop at {u!r}", line)
        for x in (u, v):
            if x not in seen:
                raise ParseError(f"unknown endpoint {x!r}", line)
        clean.append((u, v))
    try:
        return Graph([v for v, _ in vertices], clean)
    except GraphError as exc:  # pragma: no cover - every case is caught above
        raise ParseError(str(exc)) from exc


def _parse_json(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from exc
    if not isinstance(data, dict) or "vertices" not in data:
        raise ParseError("JSON input needs a 'vertices' list")
    verts = data["vertices"]
    edges = data.get("edges", [])
    if not isinstance(verts, list) or not isinstance(edges, list):
        raise ParseError("'vertices' and 'edges' must be lists")
    vlist = []
    for v in verts:
        if not isinstance(v, (str, int)):
            raise ParseError(f"vertex {v!r} must be a string or integer")
        vlist.append((str(v), None))
    elist = []
    for e in edges:
        if not isinstance(e, list) or len(e) != 2:
            raise ParseError(f"edge {e!r} must be a pair")
        elist.append((str(e[0]), str(e[1]), None))
    return _build(vlist, elist)


def _parse_lines(text: str) -> Graph:
    vertices: list = []
    edges: list = []
    section = None
    saw_vertices = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, rest = line.partition(":")
        key = head.strip().lower()
        if sep and key in ("vertices", "edges"):
            section = key
            if key == "vertices":
                if saw_vertices:
                    raise ParseError("second 'vertices:' line", lineno)
                saw_vertices = True
            line = rest.strip()
            if not line:
                continue
        elif section is None:
            raise ParseError(f"malformed line {raw.strip()!r}", lineno)
        if section == "vertices":
            vertices.extend((tok, lineno) for tok in line.replace(",", " ").split())
        else:
            for chunk in line.split(","):
                chunk = chunk.strip()
                if not chunk:
                    continue
                ends = chunk.split()
                if len(ends) != 2:
                    raise ParseError(f"malformed edge {chunk!r}", lineno)
                edges.append((ends[0], ends[1], lineno))
    if not saw_vertices:
        raise ParseError("missing 'vertices:' line")
    return _build(vertices, edges)


def parse_graph(text: str) -> Graph:
    """Read the line format or the JSON format; vertex order is file order."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_lines(text)


# ---------------------------------------------------------------------------
# report pieces

def _names(vs) -> list:
    return [str(v) for v in vs]


def _sorted_set(g: Graph, vs) -> list:
    return [str(v) for v in sorted(vs, key=g.idx)]


def _graph_echo(g: Graph) -> dict:
    return {"vertices": _names(g.vertices), "edges": [[str(u), str(v)] for u, v in g.edges()]}


def _properties(g: Graph) -> dict:
    rep = check_properties(g)
    out = {"b1": rep.b1, "b2": rep.b2, "b": rep.b, "nl": rep.nl}
    if rep.nl_witness is not None:
        out["nl_witness"] = _names(rep.nl_witness)
    if rep.b2_failure_witness is not None:
        out["b2_failure_witness"] = _names(rep.b2_failure_witness)
    return out


def _domination(g: Graph) -> dict:
    dom = compute_domination(g)
    return {
        "classes": [_sorted_set(g, c) for c in dom.classes],
        "arrows": sorted([j, i] for j, i in dom.arrows if j != i),
    }


def _t_decision(g: Graph) -> dict:
    d = decide_property_T(g)
    out = {"has_T": d.has_T, "diagnostic": d.diagnostic}
    if d.b2_witness_pair is not None:
        out["b2_witness_pair"] = _names(d.b2_witness_pair)
        out["witness_class_sizes"] = list(d.witness_class_sizes)
    if d.character is not None:
        out["character"] = d.character.named_values()
    return out


def _witness(g: Graph) -> dict | None:
    wit = find_indicability_witness(g)
    if wit is None:
        return None
    w, Y, Z = wit
    return {"w": str(w), "Y": _sorted_set(g, Y), "Z": _sorted_set(g, Z)}


# ---------------------------------------------------------------------------
# commands

def cmd_analyze(g: Graph, args) -> dict:
    out = {
        "properties": _properties(g),
        "domination": _domination(g),
        "property_T": _t_decision(g),
    }
    wit = _witness(g)
    if wit is not None:
        out["indicability_witness"] = wit
    if out["properties"]["b"]:
        d = decompose(g)
        out["decomposition"] = {"free_ranks": list(d.free_ranks), "abelian_rank": d.abelian_rank}
    if _is_tree(g):
        hit = check_tree_criterion(g)
        fixed = check_tree_criterion(g, leaf_aware=True)
        out["tree_criterion"] = {
            "distance_rule": None if hit is None else str(hit),
            "leaf_aware_rule": None if fixed is None else str(fixed),
        }
    return out


def cmd_decompose(g: Graph, args) -> dict:
    try:
        d = decompose(g)
    except PropertyViolation as exc:
        raise Failure(str(exc), {"properties": _properties(g), "error": str(exc)}) from exc
    return {"decomposition": {"free_ranks": list(d.free_ranks), "abelian_rank": d.abelian_rank}}


def cmd_surjection(g: Graph, args) -> dict:
    wit = find_indicability_witness(g)
    if wit is None:
        msg = "no minimal vertex w with Γ − st(w) disconnected"
        raise Failure(msg, {"error": msg})
    w, Y, Z = wit
    out = {"indicability_witness": _witness(g)}
    try:
        if g.n <= args.max_enum:
            pi = build_surjection(g, w, Y, Z, max_vertices=args.max_enum, keep_entries=False)
            counts = {k: v for k, v in pi.certificate_counts.items() if k in R0_TYPES}
            out["verification"] = "exhaustive"
        else:
            gs = GeneratorSystem.sampled_system(g, args.samples_moves, args.seed)
            pi = build_pi(g, w, Y, gs) - build_pi(g, w, Z, gs)
            pi.names.update({k: gs.name(k) for k in pi.values})
            counts = {}
            for inst in iter_day_instances(gs, R0_TYPES, True, stats=counts):
                total = pi.evaluate(inst.lhs) - pi.evaluate(inst.rhs)
                if total:
                    raise RelationInconsistency(f"nonzero sum on a sampled {inst.relation_type} instance")
            counts = {k: v for k, v in counts.items() if k in R0_TYPES}
            out["verification"] = "sampled"
    except RelationInconsistency as exc:
        raise Failure(str(exc), {**out, "error": str(exc)}) from exc
    out["values"] = dict(sorted(pi.named_values().items()))
    out["certificate"] = {
        "instances": dict(sorted(counts.items())),
        "total_instances": sum(counts.values()),
        "all_sums_zero": True,
    }
    out["inner_kernel"] = check_inner_kernel(g, pi)
    return out


def cmd_decide_t(g: Graph, args) -> dict:
    out = {"property_T": _t_decision(g), "structure": _structure(g)}
    d = decide_property_T(g)
    if d.character is not None:
        ce = falsify_character(g, d.character, budget=args.budget, seed=args.seed)
        out["falsification"] = (
            {"found": False, "budget": args.budget}
            if ce is None
            else {"found": True, "word": ce.text(h_generators(g)), "sum": ce.total}
        )
    return out


def _structure(g: Graph) -> dict:
    h = h_generators(g)
    rep = structure_report(h)
    name = h.name
    out = {
        "class_sizes": rep["class_sizes"],
        "generators": [name(s, t) for s, t in h.gens],
        "N1": [name(s, t) for s, t in rep["N1"]],
        "N2": [name(s, t) for s, t in rep["N2"]],
        "case_i": rep["case_i"],
        "case_ii": rep["case_ii"],
    }
    if rep["C"] is not None:
        out["C"] = name(*rep["C"])
    for key in ("m_case_i", "m_case_ii"):
        if key in rep:
            out[key] = rep[key]
    return out


def cmd_verify_identities(g: Graph, args) -> dict:
    V = g.vertices
    M = args.max_power
    tallies = {}

    def tally(name, result):
        t = tallies.setdefault(name, {"checked": 0, "failed": 0, "conventions": None})
        t["checked"] += 1
        if not result.holds:
            t["failed"] += 1
        conv = {f"{c} / {s}" for c, s in result.passing}
        t["conventions"] = conv if t["conventions"] is None else t["conventions"] & conv

    for v in V:
        for w in V:
            try:
                for m in range(0, M + 1):
                    tally("crossed_lantern", check_crossed_lantern(g, v, w, m))
            except PropertyViolation:
                pass
    for u in V:
        for v in V:
            for w in V:
                if v in (u, w):
                    continue
                try:
                    tally("tau_identity", check_tau_identity(g, u, v, w))
                except PropertyViolation:
                    pass
    for v in V:
        for u in V:
            for w in V:
                if len({u, v, w}) < 3:
                    continue
                try:
                    for m in range(1, M + 1):
                        tally("m_transvection", check_m_transvection(g, v, u, w, m))
                except PropertyViolation:
                    pass
    out = {}
    for name in ("crossed_lantern", "tau_identity", "m_transvection"):
        t = tallies.get(name, {"checked": 0, "failed": 0, "conventions": set()})
        out[name] = {
            "checked": t["checked"],
            "failed": t["failed"],
            "conventions_passing_all": sorted(t["conventions"] or []),
        }
    report = {"identities": out, "max_power": M}
    if any(v["failed"] for v in out.values()):
        raise Failure("an identity failed", report)
    return report


def cmd_random_nl(args) -> dict:
    cfg = ExperimentConfig(n=args.n, c=args.c, samples=args.samples, seed=args.seed)
    res = nl_frequency(cfg)
    out = res.as_dict()
    out["nl_above_bound"] = res.empirical_nl_frequency > res.nl_lower_bound
    return {"experiment": out}


# ---------------------------------------------------------------------------
# output

def _human(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat_list(v):
                lines.append(f"{pad}-")
                lines.extend(_human(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict) and not v:
        return "{}"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    return str(v)


def _emit(report: dict, as_json: bool, stream) -> None:
    if as_json:
        stream.write(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        stream.write("\n".join(_human(report)) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="raagtool", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="graph file ('-' for stdin); not used by random-nl")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-enum", type=int, default=7, help="vertex bound for exhaustive enumeration")
    p.add_argument("--max-power", type=int, default=3, help="largest exponent m in identity checks")
    p.add_argument("--budget", type=int, default=12, help="word length bound for falsification")
    p.add_argument("--samples-moves", type=int, default=200, help="moves drawn in sampled mode")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--version", action="version", version=f"raagtool {__version__}")
    return p


def run(command: str, g: Graph | None, args) -> dict:
    handlers = {
        "analyze": cmd_analyze,
        "decompose": cmd_decompose,
        "surjection": cmd_surjection,
        "decide-t": cmd_decide_t,
        "verify-identities": cmd_verify_identities,
    }
    if command == "random-nl":
        return cmd_random_nl(args)
    return handlers[command](g, args)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    base = {"format": FORMAT_VERSION, "tool": "raagtool", "version": __version__, "command": args.command}
    g = None
    if args.command != "random-nl":
        if args.file is None:
            print("raagtool: a graph file is required", file=sys.stderr)
            return 2
        try:
            if args.file == "-":
                text = sys.stdin.read()
            else:
                with open(args.file, encoding="utf-8") as fh:
                    text = fh.read()
            g = parse_graph(text)
        except (OSError, ParseError) as exc:
            print(f"raagtool: {exc}", file=sys.stderr)
            return 2
        base["input"] = _graph_echo(g)
    try:
        body = run(args.command, g, args)
        status = 0
    except Failure as exc:
        body = exc.report
        status = 1
        print(f"raagtool: {exc}", file=sys.stderr)
    except (PropertyViolation, EnumerationBoundExceeded) as exc:
        body = {"error": str(exc)}
        status = 1
        print(f"raagtool: {exc}", file=sys.stderr)
    _emit({**base, **body}, args.json, sys.stdout)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
