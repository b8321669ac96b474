"""Command-line front end: build instances from edge-list files and run the
solvers, emitting plain text or JSON."""

from __future__ import annotations

import argparse
import json
import sys

from .altcolor import ex_alt_fixed, ex_alt_min
from .cuts import cut_decomp, cut_r, turan_ex
from .forestprop import check_lemma3, check_lemma4, verify_forest_property_exhaustive
from .graphs import (
    FamilyDescriptor,
    Graph,
    GraphError,
    parse_decomposition,
    parse_graph,
    trivial_decomposition,
)
from .harness import campaign, families_crosscheck, verify_theorem
from .kneser import DEFAULT_BUILD_CAP, build_kneser, chromatic_number, clique_number
from .sigma import build_sigma, export_sigma


def _load_graph(path: str) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def _load_decomposition(g: Graph, path: str | None):
    if path is None:
        return trivial_decomposition(g)
    with open(path) as fh:
        return parse_decomposition(fh.read(), g)


def _family(spec: str | None, g: Graph) -> FamilyDescriptor:
    if spec is None:
        return FamilyDescriptor.trees(g.n)
    kind, _, param = spec.partition(":")
    try:
        value = int(param)
    except ValueError:
        raise GraphError(f"bad family spec {spec!r}; use kind:param, e.g. trees:4")
    if kind == "trees":
        return FamilyDescriptor.trees(value)
    if kind == "matching":
        return FamilyDescriptor.matching(value)
    if kind == "path":
        return FamilyDescriptor.path(value)
    raise GraphError(f"unknown family kind {kind!r}")


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="knesercut",
        description="Exact toolkit for general Kneser graphs of tree families.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True):
        p.add_argument("graph", help="edge-list file ('n m' header)")
        p.add_argument("-d", "--decomposition", help="decomposition file")
        if family:
            p.add_argument("-f", "--family", help="family spec, e.g. trees:4")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget-ms", type=float, default=60_000.0)
        p.add_argument("--cap", type=int, default=DEFAULT_BUILD_CAP)
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("kneser-chi", help="chromatic number of the Kneser instance")
    common(p)
    p.add_argument("--clique", action="store_true", help="also report the clique number")

    p = sub.add_parser("cut", help="balanced or decomposition-relative cut number")
    common(p, family=False)
    p.add_argument("-r", type=int, default=1, help="side floor / cut index")
    p.add_argument(
        "--mode",
        choices=["balanced", "decomp"],
        default="balanced",
        help="cut_r over bipartitions or |E| - ex via the decomposition",
    )

    p = sub.add_parser("ex", help="generalized Turan number")
    common(p)

    p = sub.add_parser("ex-alt", help="alternating Turan number")
    common(p)
    p.add_argument(
        "--mode",
        choices=["identity", "exhaustive", "block-structured", "sampled"],
        default="identity",
    )

    p = sub.add_parser("sigma", help="build the staged edge ordering")
    common(p, family=False)
    p.add_argument("-r", type=int, default=0)
    p.add_argument("--policy", choices=["strict", "best-effort"], default="best-effort")

    p = sub.add_parser("forest-check", help="forest-property checkers")
    common(p, family=False)
    p.add_argument(
        "--mode",
        choices=["lemma3", "lemma4", "exhaustive"],
        default="lemma4",
    )

    p = sub.add_parser("verify-theorem", help="compare chi with the cut number")
    common(p, family=False)
    p.add_argument("-r", type=int, default=0)

    p = sub.add_parser("families", help="known-family cross-checks")
    p.add_argument("names", nargs="+", help="e.g. 'kneser(5,2)' 'circular(6,2)'")
    p.add_argument("--budget-ms", type=float, default=120_000.0)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("campaign", help="run a verification campaign from a config")
    p.add_argument("config")
    p.add_argument("-o", "--out", help="JSON-lines report path (resumable)")
    p.add_argument("--json", action="store_true")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "families":
        report = families_crosscheck(args.names, budget_ms=args.budget_ms)
        if args.json:
            print(json.dumps(report, sort_keys=True))
        else:
            for row in report:
                print(row)
        return 0
    if cmd == "campaign":
        records = campaign(args.config, args.out)
        if args.json or not args.out:
            for rec in records:
                print(json.dumps(rec, sort_keys=True))
        else:
            print(f"{len(records)} new records appended to {args.out}")
        return 0

    g = _load_graph(args.graph)
    d = _load_decomposition(g, args.decomposition)

    if cmd == "kneser-chi":
        f = _family(args.family, g)
        kg = build_kneser(g, d, f, cap=args.cap)
        chi = chromatic_number(kg, budget_ms=args.budget_ms)
        payload = {
            "vertices": kg.num_vertices,
            "chi_lower": chi.lower,
            "chi_upper": chi.upper,
            "exact": chi.exact,
        }
        text = (
            f"chi = {chi.value}"
            if chi.exact
            else f"chi in [{chi.lower}, {chi.upper}]"
        )
        if args.clique:
            om = clique_number(kg, budget_ms=args.budget_ms)
            payload.update(
                {"omega_lower": om.lower, "omega_upper": om.upper, "omega_exact": om.exact}
            )
            text += f"; omega = {om.value}" if om.exact else f"; omega in [{om.lower}, {om.upper}]"
        _emit(args, payload, text)
        return 0

    if cmd == "cut":
        if args.mode == "balanced":
            res = cut_r(g, args.r)
            _emit(
                args,
                {"value": res.value, "side": list(res.side)},
                f"cut_{args.r} = {res.value} with side {list(res.side)}",
            )
        else:
            res = cut_decomp(g, d, args.r, budget_ms=args.budget_ms)
            _emit(
                args,
                {"value": res.value, "exact": res.exact},
                f"cut_{args.r}(G, decomposition) = {res.value}"
                + ("" if res.exact else " (not certified exact)"),
            )
        return 0

    if cmd == "ex":
        f = _family(args.family, g)
        res = turan_ex(g, d, f, budget_ms=args.budget_ms)
        _emit(
            args,
            {"value": res.value, "exact": res.exact, "witness": res.witness.indices()},
            f"ex = {res.value}" + ("" if res.exact else " (greedy fallback)"),
        )
        return 0

    if cmd == "ex-alt":
        f = _family(args.family, g)
        if args.mode == "identity":
            from .altcolor import EdgeOrdering

            res = ex_alt_fixed(g, d, f, EdgeOrdering.identity(g.m), budget_ms=args.budget_ms)
            payload = {"value": res.value, "exact": res.exact}
            text = f"ex_alt(identity sigma) = {res.value}"
        else:
            res = ex_alt_min(
                g, d, f, mode=args.mode, seed=args.seed, budget_ms=args.budget_ms
            )
            payload = {"value": res.value, "mode": res.mode, "exact": res.exact}
            text = f"ex_alt[{res.mode}] = {res.value}" + (
                "" if res.exact else " (upper bound)"
            )
        _emit(args, payload, text)
        return 0

    if cmd == "sigma":
        report = build_sigma(g, d, r=args.r, seed=args.seed, policy=args.policy)
        if args.json:
            print(json.dumps(report.to_dict(), sort_keys=True))
        else:
            for s in report.stages:
                flag = "ok" if s.succeeded else "FAILED"
                print(f"{s.name}: {flag} (target {s.target}, achieved {s.achieved}) {s.note}")
            for note in report.notes:
                print(f"note: {note}")
            if report.ordering is not None:
                print(export_sigma(report.ordering), end="")
        return 0 if report.ordering is not None else 1

    if cmd == "forest-check":
        if args.mode == "lemma3":
            v = check_lemma3(g, d)
            _emit(args, {"holds": v.holds, "detail": v.detail}, f"lemma3: {v.holds} ({v.detail})")
        elif args.mode == "lemma4":
            v = check_lemma4(g, d)
            _emit(args, {"holds": v.holds, "detail": v.detail}, f"lemma4: {v.holds} ({v.detail})")
        else:
            ok = verify_forest_property_exhaustive(g, d)
            _emit(args, {"holds": ok}, f"exhaustive: {ok}")
        return 0

    if cmd == "verify-theorem":
        rec = verify_theorem(
            g, d, r=args.r, budget_ms=args.budget_ms, cap=args.cap, seed=args.seed
        )
        chi_text = (
            str(rec.chi.value) if rec.chi.exact else f"[{rec.chi.lower}, {rec.chi.upper}]"
        )
        _emit(
            args,
            rec.to_dict(),
            f"chi = {chi_text}, cut = {rec.cut}, equal = {rec.equal}",
        )
        return 0

    raise GraphError(f"unknown command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
