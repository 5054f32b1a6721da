"""Command-line interface.

Wherever a FILE is expected an inline generator may be given instead, e.g.
``gen:pascal:8``, ``gen:uhf:2`` (the stationary 2^oo diagram),
``gen:uhf:2,3,2,3`` (a finite prefix), ``gen:uhf:2,3:stationary``,
``gen:odometer:3``, ``gen:stationary:1,1/1,0`` or ``gen:dynkin:A:5:8``.
``-`` reads standard input.

Exit codes: 0 proved / yes, 1 refuted / no, 2 undecided within the bound,
64 usage error, 65 unparsable or invalid input, 70 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .diagram import (
    NotSimple,
    Simple,
    dims,
    generate,
    odometer,
    simplicity,
    stationary,
    telescope,
    uhf,
)
from .diagram_io import DiagramDocument, export_dot, parse_bd, serialize_bd
from .dimension_group import (
    Distinguished,
    compare_invariants,
    format_poly,
    k0_presentation,
    stationary_invariants,
)
from .equivalence import (
    Found,
    find_intertwining,
    supernatural_differ,
    supernatural_invariant,
)
from .errors import (
    BadDepth,
    BadParam,
    BadRank,
    BoundTooSmall,
    BratteliError,
    MissingRoot,
    UnsortedKeepList,
)
from .towers import dynkin, graph_norm, tower_diagram
from .vershik import (
    max_path,
    min_path,
    orbit,
    parse_path,
    stationary_measure,
)

EXIT_YES, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 64, 65, 70

_USAGE_ERRORS = (BadParam, BadRank, BadDepth, BoundTooSmall, UnsortedKeepList, MissingRoot)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- inputs ---------------------------------------------------------------


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise BadParam(f"expected comma-separated integers, got {text!r}") from None


def _matrix(text: str) -> list[list[int]]:
    return [_ints(row) for row in text.replace(";", "/").split("/")]


def generator_spec(spec: str):
    """Build a diagram from ``KIND:ARG:...`` (the part after ``gen:``)."""
    kind, *args = spec.split(":")
    kind = kind.lower()
    try:
        if kind in ("pascal", "gicar"):
            (depth,) = args
            return generate(kind, int(depth))
        if kind == "uhf":
            factors = _ints(args[0])
            flag = args[1] if len(args) > 1 else None
            if flag not in (None, "stationary", "prefix") or len(args) > 2:
                raise BadParam(f"bad uhf option {flag!r}")
            stat = flag == "stationary" or (flag is None and len(factors) == 1)
            return uhf(factors, stationary=stat)
        if kind == "odometer":
            (base,) = args
            return odometer(int(base))
        if kind == "stationary":
            tail, *prefix = args
            return stationary(_matrix(tail), [_matrix(p) for p in prefix] or None)
        if kind in ("dynkin", "tower", "dynkin_tower"):
            type_, rank, depth = args
            return generate("dynkin_tower", type_, int(rank), int(depth))
    except (ValueError, IndexError) as err:
        if isinstance(err, BratteliError):
            raise
        raise BadParam(f"bad generator spec {spec!r}") from None
    raise BadParam(f"unknown generator kind {kind!r}")


def load(source: str) -> DiagramDocument:
    if source.startswith("gen:"):
        return DiagramDocument(generator_spec(source[4:]), comments=(source,))
    if source == "-":
        return parse_bd(sys.stdin.read())
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"cannot read {source}: {err.strerror}") from None
    return parse_bd(text)


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(text)


def _write_or_print(args, text: str, payload: dict) -> None:
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        if args.json:
            print(json.dumps({**payload, "output": out}, ensure_ascii=False))
    elif args.json:
        print(json.dumps({**payload, "document": text}, ensure_ascii=False))
    else:
        sys.stdout.write(text)


def _matrix_text(m) -> str:
    return "[" + ", ".join("[" + ", ".join(map(str, row)) + "]" for row in m) + "]"


# --- subcommands ----------------------------------------------------------


def cmd_dims(args) -> int:
    d = load(args.file).diagram
    v = dims(d, args.level).values
    _emit(args, " ".join(map(str, v)), {"level": args.level, "dims": list(v)})
    return EXIT_YES


def cmd_telescope(args) -> int:
    doc = load(args.file)
    t = telescope(doc.diagram, _ints(args.keep))
    text = serialize_bd(t)
    _write_or_print(args, text, {"kept_levels": _ints(args.keep), "level_sizes": list(t.level_sizes)})
    return EXIT_YES


def cmd_simple(args) -> int:
    d = load(args.file).diagram
    verdict = simplicity(d, args.bound)
    if isinstance(verdict, Simple):
        _emit(args, "Simple", {"verdict": "Simple"})
        return EXIT_YES
    if isinstance(verdict, NotSimple):
        vs = sorted(verdict.vertices)
        _emit(
            args,
            f"NotSimple level {verdict.level} vertices {' '.join(map(str, vs))}",
            {"verdict": "NotSimple", "level": verdict.level, "vertices": vs},
        )
        return EXIT_NO
    _emit(args, f"UnknownAtBound {verdict.depth}", {"verdict": "UnknownAtBound", "depth": verdict.depth})
    return EXIT_UNKNOWN


def cmd_equiv(args) -> int:
    d1 = load(args.file1).diagram
    d2 = load(args.file2).diagram
    if d1.stationary_tail and d2.stationary_tail:
        if all(k == 1 for k in d1.level_sizes + d2.level_sizes):
            s1, s2 = supernatural_invariant(d1), supernatural_invariant(d2)
            if supernatural_differ(s1, s2):
                reason = f"supernatural invariants differ: {s1} vs {s2}"
                _emit(args, f"Distinguished: {reason}", {"verdict": "Distinguished", "reason": reason})
                return EXIT_NO
        r1 = stationary_invariants(k0_presentation(d1))
        r2 = stationary_invariants(k0_presentation(d2))
        cmp = compare_invariants(r1, r2)
        if isinstance(cmp, Distinguished):
            reason = f"{cmp.reason}: {cmp.detail}"
            _emit(args, f"Distinguished: {reason}", {"verdict": "Distinguished", "reason": reason})
            return EXIT_NO
    result = find_intertwining(d1, d2, args.bound, max_nodes=args.max_nodes)
    if isinstance(result, Found):
        w = result.witness
        lines = ["Found"]
        maps = []
        for idx, m in enumerate(w.maps):
            i = idx // 2
            if idx % 2 == 0:
                label = f"P{i} d1[{w.a_levels[i]}] -> d2[{w.b_levels[i]}]"
            else:
                label = f"Q{i} d2[{w.b_levels[i]}] -> d1[{w.a_levels[i + 1]}]"
            lines.append(f"{label}: {_matrix_text(m)}")
            maps.append([list(r) for r in m])
        if w.period_start is not None:
            k = len(w.maps) - 1
            lines.append(f"periodic: {w.map_name(k)} repeats {w.map_name(w.period_start)}")
        _emit(
            args,
            "\n".join(lines),
            {
                "verdict": "Found",
                "a_levels": list(w.a_levels),
                "b_levels": list(w.b_levels),
                "maps": maps,
                "period_start": w.period_start,
            },
        )
        return EXIT_YES
    _emit(
        args,
        f"NotFoundWithinBound {args.bound}",
        {"verdict": "NotFoundWithinBound", "bound": args.bound, "nodes": result.nodes},
    )
    return EXIT_UNKNOWN


def cmd_k0(args) -> int:
    d = load(args.file).diagram
    p = k0_presentation(d)
    r = stationary_invariants(p, args.tolerance)
    lines = [
        f"rank {p.rank}",
        f"matrix {_matrix_text(p.matrix)}",
        f"unit {' '.join(map(str, p.unit.values))}",
        f"char_poly {format_poly(r.char_poly)}",
        f"determinant {r.determinant}",
        f"eventual_rank {r.eventual_rank}",
        f"perron {r.perron:.12f}",
        f"primitive {'true' if r.primitive else 'false'}",
    ]
    _emit(
        args,
        "\n".join(lines),
        {
            "rank": p.rank,
            "matrix": [list(row) for row in p.matrix],
            "unit": list(p.unit.values),
            "char_poly": list(r.char_poly),
            "determinant": r.determinant,
            "eventual_rank": r.eventual_rank,
            "perron": r.perron,
            "perron_bracket": [str(r.perron_low), str(r.perron_high)],
            "primitive": r.primitive,
            "tolerance": r.tolerance,
        },
    )
    return EXIT_YES


def cmd_vershik(args) -> int:
    doc = load(args.file)
    od = doc.ordered()
    if args.start == "min":
        start = min_path(od, args.depth)
    elif args.start == "max":
        start = max_path(od, args.depth)
    else:
        start = parse_path(args.start)
        if start.depth != args.depth:
            raise UsageError(f"--start path has depth {start.depth}, --depth is {args.depth}")
    paths = orbit(od, start, args.steps)
    rows = []
    lines = []
    for k, p in enumerate(paths):
        row = {"step": k, "path": str(p)}
        line = f"{k} {p}"
        if args.measure:
            mu = stationary_measure(od, p)
            row["measure"] = mu.value
            if mu.exact is not None:
                row["measure_exact"] = str(mu.exact)
            line += f" mu={mu}"
        rows.append(row)
        lines.append(line)
    _emit(args, "\n".join(lines), {"depth": args.depth, "orbit": rows})
    return EXIT_YES


def cmd_tower(args) -> int:
    g = dynkin(args.type, args.rank, args.start)
    d = tower_diagram(g, args.depth)
    _write_or_print(args, serialize_bd(d), {"graph": g.name, "level_sizes": list(d.level_sizes)})
    return EXIT_YES


def cmd_norm(args) -> int:
    g = dynkin(args.type, args.rank)
    norm = graph_norm(g, args.tolerance)
    index = norm * norm
    _emit(args, f"norm {norm:.9f} index {index:.9f}", {"graph": g.name, "norm": norm, "index": index})
    return EXIT_YES


def cmd_gen(args) -> int:
    spec = ":".join([args.kind, *args.params])
    d = generator_spec(spec)
    _write_or_print(args, serialize_bd(DiagramDocument(d)), {"generator": spec})
    return EXIT_YES


def cmd_dot(args) -> int:
    d = load(args.file).diagram
    text = export_dot(d, args.depth, expand=args.expand)
    _write_or_print(args, text, {"format": "dot"})
    return EXIT_YES


def cmd_fmt(args) -> int:
    doc = load(args.file)
    _write_or_print(args, serialize_bd(doc), {"format": "bd"})
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    p = _Parser(prog="bratteli", description="Bratteli diagram toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("dims", parents=[common], help="exact dimension vector at a level")
    s.add_argument("file")
    s.add_argument("--level", type=int, required=True)
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("telescope", parents=[common], help="keep only some levels")
    s.add_argument("file")
    s.add_argument("--keep", required=True, help="comma-separated levels, starting with 0")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_telescope)

    s = sub.add_parser("simple", parents=[common], help="simplicity verdict (exit 0/1/2)")
    s.add_argument("file")
    s.add_argument("--bound", type=int, required=True)
    s.set_defaults(func=cmd_simple)

    s = sub.add_parser("equiv", parents=[common], help="bounded equivalence search (exit 0/1/2)")
    s.add_argument("file1")
    s.add_argument("file2")
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--max-nodes", type=int, default=200_000)
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("k0", parents=[common], help="K0 presentation and invariants")
    s.add_argument("file")
    s.add_argument("--tolerance", type=float, default=1e-12)
    s.set_defaults(func=cmd_k0)

    s = sub.add_parser("vershik", parents=[common], help="orbit of the adic successor")
    s.add_argument("file")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--start", default="min", help="min, max, or an edge list like 0.2,0.1@0")
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--measure", action="store_true")
    s.set_defaults(func=cmd_vershik)

    s = sub.add_parser("tower", parents=[common], help="subfactor tower diagram of a Dynkin graph")
    s.add_argument("--type", required=True, choices=["A", "D", "E", "a", "d", "e"])
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--start", type=int, default=0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_tower)

    s = sub.add_parser("norm", parents=[common], help="graph norm and Jones index")
    s.add_argument("--type", required=True, choices=["A", "D", "E", "a", "d", "e"])
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--tolerance", type=float, default=1e-12)
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("gen", parents=[common], help="write a generated diagram")
    s.add_argument("kind")
    s.add_argument("params", nargs="*")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("dot", parents=[common], help="Graphviz export")
    s.add_argument("file")
    s.add_argument("--depth", type=int)
    s.add_argument("--expand", action="store_true", help="one DOT edge per parallel edge")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_dot)

    s = sub.add_parser("fmt", parents=[common], help="canonical re-serialisation")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_fmt)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print(err, file=sys.stderr)
        return EXIT_USAGE
    except _USAGE_ERRORS as err:
        print(f"bratteli: {err}", file=sys.stderr)
        return EXIT_USAGE
    except BratteliError as err:
        print(f"bratteli: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_DATA
    except Exception as err:  # pragma: no cover - defensive
        print(f"bratteli: internal error: {err!r}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
