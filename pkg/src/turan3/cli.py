"""Command-line interface.

Subcommands: enumerate, construct, density, emit-sdp, round, verify,
partition.  Output is tab-separated and machine-first; pass --human for
labeled lines.  Every numeric value is an exact rational p/q or a 50-digit
decimal.  Exit codes: 0 success, 1 domain error (bad input data, rejected
certificate), 2 usage error.

Each subcommand accepts --config FILE with plain key=value lines (comments
with '#'); explicit flags override file values.  The TURAN3_CACHE_DIR
environment variable, when set, persists pair-density tables across runs.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, localcontext
from fractions import Fraction

from . import certificate as certificate_mod
from . import constructions, families, graphs, partition, sdp
from .density import edge_density, p
from .enumeration import FlagType, enumerate_free
from .graphs import Hypergraph3


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _decimal50(q: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 50
        return str(Decimal(q.numerator) / Decimal(q.denominator))


def _emit_rows(rows: list[tuple[str, str]], human: bool, out=None) -> None:
    out = out or sys.stdout
    for key, value in rows:
        if human:
            print(f"{key}: {value}", file=out)
        else:
            print(f"{key}\t{value}", file=out)


def _load_graph_arg(spec: str) -> Hypergraph3:
    if spec in graphs.NAMED_GRAPHS:
        return graphs.named_graph(spec)
    return graphs.load_graph(spec)


def _read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _merge_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill values from --config for options the command line left at default."""
    if not getattr(args, "config", None):
        return
    file_values = _read_config(args.config)
    defaults = {a.dest: a.default for a in parser._actions}
    for key, text in file_values.items():
        if key not in defaults:
            raise ValueError(f"unknown config key {key!r}")
        if getattr(args, key) != defaults[key]:
            continue  # explicit flag wins
        current = defaults[key]
        if isinstance(current, bool):
            setattr(args, key, text.lower() in {"1", "true", "yes", "on"})
        elif isinstance(current, int) and not isinstance(current, bool):
            setattr(args, key, int(text))
        else:
            setattr(args, key, text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_enumerate(args, parser) -> int:
    _merge_config(args, parser)
    family = families.parse_family(args.forbid)
    members = [fm.graph for fm in family]
    flags = [fm.induced for fm in family]
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        found = enumerate_free(args.m, members, flags, allow_large=args.allow_large)
        for idx, g in enumerate(found):
            print(f"graph {idx}", file=out)
            out.write(graphs.graph_to_text(g))
        print(f"count {len(found)}", file=out)
    finally:
        if args.out:
            out.close()
    return 0


def _construction_spec(args) -> constructions.ConstructionSpec:
    kind = args.kind
    if kind == "brec":
        if args.n is None:
            raise ValueError("brec needs --n")
        if args.splits:
            splits = tuple(int(x) for x in args.splits.split(","))
        else:
            splits = constructions.b_rec(args.n)[1]
        return constructions.BRec(args.n, splits)
    if not args.parts:
        raise ValueError(f"{kind} needs --parts with comma-separated sizes")
    parts = [int(x) for x in args.parts.split(",")]
    if kind == "partite3":
        if len(parts) != 3:
            raise ValueError("partite3 needs exactly 3 part sizes")
        return constructions.Partite3(*parts)
    if kind == "k4blowup":
        if len(parts) != 4:
            raise ValueError("k4blowup needs exactly 4 class sizes")
        return constructions.K4Blowup(*parts)
    if len(parts) != 2:
        raise ValueError("semibipartite needs exactly 2 part sizes")
    return constructions.SemiBipartite(*parts)


def _scan_member(payload):
    h, member_graph, induced = payload
    found, witness = graphs.exhaustive_containment_scan(h, member_graph, induced)
    return found, witness


def cmd_construct(args, parser) -> int:
    _merge_config(args, parser)
    spec = _construction_spec(args)
    rows: list[tuple[str, str]] = []
    if args.report:
        rep = constructions.density_report(spec)
        rows += [
            ("kind", rep.kind),
            ("n", str(rep.n)),
            ("edges", str(rep.edges)),
            ("density", _frac(rep.density)),
            ("density_decimal", _decimal50(rep.density)),
            (
                "limit_density",
                rep.limit if isinstance(rep.limit, str) else _frac(rep.limit),
            ),
        ]
        if isinstance(spec, constructions.BRec):
            rows.append(("splits", ",".join(str(s) for s in spec.splits)))
    h = None
    if args.emit or args.check_free:
        h = constructions.build(spec)
    if args.emit:
        graphs.save_graph(h, args.emit)
        rows.append(("emitted", args.emit))
    if args.check_free:
        family = families.parse_family(args.check_free)
        payloads = [(h, fm.graph, fm.induced) for fm in family]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_scan_member, payloads))
        else:
            results = [_scan_member(pl) for pl in payloads]
        all_free = True
        for fm, (found, witness) in zip(family, results):
            label = fm.label()
            if found:
                all_free = False
                rows.append((f"contains {label}", ",".join(map(str, witness))))
            else:
                rows.append((f"free of {label}", "yes"))
        rows.append(("family_free", "yes" if all_free else "no"))
    _emit_rows(rows, args.human)
    return 0


def cmd_density(args, parser) -> int:
    _merge_config(args, parser)
    h = _load_graph_arg(args.graph)
    rows = []
    if args.edge_density:
        rows.append(("edge_density", _frac(edge_density(h))))
    if args.sub:
        f = _load_graph_arg(args.sub)
        rows.append((f"p {args.sub}", _frac(p(f, h))))
    if not rows:
        raise ValueError("nothing to do: pass --edge-density and/or --sub")
    _emit_rows(rows, args.human)
    return 0


def _parse_type_selection(selection: str, m: int, family) -> list | None:
    if selection == "none":
        return []
    if selection == "default":
        return sdp.default_types(m, family)
    sizes = [int(x) for x in selection.split(",")]
    members = [fm.graph for fm in family]
    flags = [fm.induced for fm in family]
    out = []
    for s in sizes:
        if (m + s) % 2:
            raise ValueError(f"type size {s} has the wrong parity for m={m}")
        for sigma in enumerate_free(s, members, flags):
            out.append((FlagType(sigma), (m + s) // 2))
    return out


def cmd_emit_sdp(args, parser) -> int:
    _merge_config(args, parser)
    family = families.parse_family(args.forbid)
    types = _parse_type_selection(args.types, args.m, family)
    model = sdp.assemble(args.m, family, types=types)
    sdp.emit(model, args.out)
    rows = [
        ("written", args.out),
        ("constraints", str(model.n_constraints)),
        ("psd_blocks", str(len(model.type_dims))),
        ("block_dims", ",".join(map(str, model.type_dims)) or "-"),
    ]
    if not model.type_dims:
        rows.append(("lp_bound", _frac(model.lp_value())))
    _emit_rows(rows, args.human)
    return 0


def cmd_round(args, parser) -> int:
    _merge_config(args, parser)
    model = sdp.parse_sdp(args.model)
    floats = sdp.read_solution(args.solution)
    cert = sdp.round_solution(model, floats, args.den_bound)
    certificate_mod.save_certificate(cert, args.out)
    _emit_rows(
        [("written", args.out), ("bound", _frac(cert.bound))], args.human
    )
    return 0


def cmd_verify(args, parser) -> int:
    _merge_config(args, parser)
    cert = certificate_mod.load_certificate(args.cert)
    result = certificate_mod.verify(cert)
    if result.ok:
        print(f"VERIFIED bound={_frac(result.bound)}")
        for note in result.notes:
            print(f"note\t{note}")
        return 0
    print(f"REJECTED {result.reason}")
    return 1


def _one_restart(payload):
    h, seed = payload
    res = partition.maxcut_local_search(h, restarts=1, seed=seed)
    return res.cross_present, seed, res


def cmd_partition(args, parser) -> int:
    _merge_config(args, parser)
    h = _load_graph_arg(args.graph)
    rows: list[tuple[str, str]] = []
    if args.v1 is not None:
        v1 = {int(x) for x in args.v1.split(",")} if args.v1 else set()
        v2 = set(range(h.n)) - v1
    else:
        payloads = [(h, args.seed + i) for i in range(args.restarts)]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_one_restart, payloads))
        else:
            results = [_one_restart(pl) for pl in payloads]
        best = max(results, key=lambda r: (r[0], -r[1]))
        v1, v2 = set(best[2].v1), set(best[2].v2)
    stats = partition.bad_missing(h, v1, v2)
    mu_lower = Fraction(6 * stats.cross_present, h.n**3)
    lhs, rhs, holds = partition.lemma22_gap(h, v1, v2, Fraction(args.xi))
    rows += [
        ("v1", ",".join(map(str, sorted(v1)))),
        ("v2", ",".join(map(str, sorted(v2)))),
        ("cross_present", str(stats.cross_present)),
        ("bad", str(len(stats.bad))),
        ("missing", str(len(stats.missing))),
        ("inner2", str(stats.inner2)),
        ("mu_lower", _frac(mu_lower)),
        ("locally_maximal", "yes" if partition.is_locally_maximal(h, v1, v2) else "no"),
        ("bad_minus_scaled_missing", _frac(partition.prop33_expr(h, v1, v2))),
        ("xi", args.xi),
        ("edge_bound_lhs", str(lhs)),
        ("edge_bound_rhs", _frac(rhs)),
        ("edge_bound_holds", "yes" if holds else "no"),
    ]
    _emit_rows(rows, args.human)
    return 0


# ---------------------------------------------------------------------------
# Parser


def _add_common(sub):
    sub.add_argument("--config", help="key=value config file; flags override it")
    sub.add_argument("--human", action="store_true", help="labeled output instead of TSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="turan3",
        description="Exact toolkit for density bounds on 3-uniform hypergraphs",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("enumerate", help="list family-free graphs up to isomorphism")
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--forbid", default="", help="comma-separated members; 'induced:' prefix per member")
    sub.add_argument("--out", help="output path (default stdout)")
    sub.add_argument("--allow-large", action="store_true", help="lift the m<=7 guard")
    _add_common(sub)
    sub.set_defaults(func=cmd_enumerate, parser_ref=sub)

    sub = subs.add_parser("construct", help="build and report extremal constructions")
    sub.add_argument("--kind", required=True, choices=["brec", "partite3", "k4blowup", "semibipartite"])
    sub.add_argument("--n", type=int, help="vertex count (brec)")
    sub.add_argument("--splits", default="", help="comma-separated level splits (brec; default optimal)")
    sub.add_argument("--parts", default="", help="comma-separated part sizes (other kinds)")
    sub.add_argument("--emit", help="write the graph to this path")
    sub.add_argument("--report", action="store_true", help="print the density report")
    sub.add_argument("--check-free", default="", help="family to scan for exhaustively")
    sub.add_argument("--jobs", type=int, default=1, help="parallel workers for the scan")
    _add_common(sub)
    sub.set_defaults(func=cmd_construct, parser_ref=sub)

    sub = subs.add_parser("density", help="induced pattern density and edge density")
    sub.add_argument("--graph", required=True, help="graph file or built-in name")
    sub.add_argument("--sub", default="", help="pattern graph file or built-in name")
    sub.add_argument("--edge-density", action="store_true")
    _add_common(sub)
    sub.set_defaults(func=cmd_density, parser_ref=sub)

    sub = subs.add_parser("emit-sdp", help="assemble and write the bound program")
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--forbid", default="")
    sub.add_argument("--types", default="none", help="'none', 'default', or sizes like '1,3'")
    sub.add_argument("--out", required=True)
    _add_common(sub)
    sub.set_defaults(func=cmd_emit_sdp, parser_ref=sub)

    sub = subs.add_parser("round", help="round a float solution to a rational certificate")
    sub.add_argument("--model", required=True)
    sub.add_argument("--solution", required=True)
    sub.add_argument("--den-bound", type=int, default=2**32)
    sub.add_argument("--out", required=True)
    _add_common(sub)
    sub.set_defaults(func=cmd_round, parser_ref=sub)

    sub = subs.add_parser("verify", help="verify a certificate in exact arithmetic")
    sub.add_argument("--cert", required=True)
    _add_common(sub)
    sub.set_defaults(func=cmd_verify, parser_ref=sub)

    sub = subs.add_parser("partition", help="bipartition diagnostics")
    sub.add_argument("--graph", required=True)
    sub.add_argument("--analyze", action="store_true", help="accepted for compatibility; implied")
    sub.add_argument("--v1", help="comma-separated vertices of V1 (skip the search)")
    sub.add_argument("--restarts", type=int, default=32)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--xi", default="0", help="slack coefficient as p/q")
    sub.add_argument("--jobs", type=int, default=1)
    _add_common(sub)
    sub.set_defaults(func=cmd_partition, parser_ref=sub)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, args.parser_ref)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
