"""Instance generation, theorem verification records, known-family
cross-checks, and the campaign runner behind the CLI."""

from __future__ import annotations

import json
import math
import random
import re
import sys
import time
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .cuts import cut_decomp
from .graphs import (
    Decomposition,
    EdgeSet,
    FamilyDescriptor,
    Graph,
    GraphError,
    components,
    cycle_graph,
    matching_graph,
    trivial_decomposition,
    validate_decomposition,
)
from .kneser import (
    BoundedValue,
    CapExceeded,
    DEFAULT_BUILD_CAP,
    DEFAULT_EXACT_CAP,
    build_kneser,
    chromatic_number,
    greedy_edge_disjoint_trees,
    greedy_upper_coloring,
)


def random_dense_graph(n: int, delta_floor: float, seed: int = 0) -> Graph:
    """Seeded connected graph with minimum degree >= ceil(delta_floor * n),
    built by pruning K_n in random order while respecting the floor."""
    if not 0 < delta_floor < 1:
        raise GraphError("delta floor must lie strictly between 0 and 1")
    floor = math.ceil(delta_floor * n)
    if floor > n - 1:
        raise GraphError(f"floor {floor} exceeds the complete-graph degree {n - 1}")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(edges)
    kept = set(edges)
    degree = {v: n - 1 for v in range(n)}
    for u, v in edges:
        if degree[u] <= floor or degree[v] <= floor:
            continue
        trial = kept - {(u, v)}
        g_try = Graph(n, sorted(trial))
        if len(components(g_try, g_try.full_edge_set())) > 1:
            continue
        kept = trial
        degree[u] -= 1
        degree[v] -= 1
    return Graph(n, sorted(kept))


def random_decomposition(g: Graph, k: int, seed: int = 0) -> Decomposition:
    """k-1 small random connected parts (2 edges each when possible) plus
    the dense remainder as the last part."""
    if k <= 1:
        return trivial_decomposition(g)
    rng = random.Random(seed)
    remaining = set(range(g.m))
    parts: list[EdgeSet] = []
    for _ in range(k - 1):
        if not remaining:
            raise GraphError("not enough edges for the requested part count")
        e0 = rng.choice(sorted(remaining))
        picked = {e0}
        u, v = g.edges[e0]
        touch = {u, v}
        for e in sorted(remaining - picked):
            a, b = g.edges[e]
            if a in touch or b in touch:
                picked.add(e)
                touch.update((a, b))
                break
        remaining -= picked
        bits = 0
        for e in picked:
            bits |= 1 << e
        parts.append(EdgeSet(bits, g.m))
    if not remaining:
        raise GraphError("no edges left for the spanning part")
    bits = 0
    for e in remaining:
        bits |= 1 << e
    parts.append(EdgeSet(bits, g.m))
    return validate_decomposition(g, parts)


@dataclass
class TheoremRecord:
    n: int
    m: int
    k: int
    r: int
    seed: int | None
    chi: BoundedValue
    cut: int
    cut_exact: bool
    equal: str  # yes | no | indeterminate
    greedy_colors: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "r": self.r,
            "seed": self.seed,
            "chi_lower": self.chi.lower,
            "chi_upper": self.chi.upper,
            "chi_exact": self.chi.exact,
            "cut": self.cut,
            "cut_exact": self.cut_exact,
            "equal": self.equal,
            "greedy_colors": self.greedy_colors,
            "notes": self.notes,
        }


def verify_theorem(
    g: Graph,
    d: Decomposition,
    r: int = 0,
    budget_ms: float = 60_000.0,
    cap: int = DEFAULT_BUILD_CAP,
    exact_cap: int = DEFAULT_EXACT_CAP,
    seed: int | None = None,
) -> TheoremRecord:
    """Compare chi(KG(g, d, T_{n-r})) with cut_{r+1}(g, d); the one-sided
    bound chi <= cut is always witnessed by the greedy coloring when the
    Turan witness is exact."""
    if g.n - r < 2:
        raise GraphError("need n - r >= 2")
    t = g.n - r
    f = FamilyDescriptor.trees(t)
    notes: list[str] = []
    cres = cut_decomp(g, d, r + 1, budget_ms=budget_ms)

    try:
        kg = build_kneser(g, d, f, cap=cap)
        chi = chromatic_number(kg, budget_ms=budget_ms, exact_cap=exact_cap)
    except CapExceeded:
        kg = None
        notes.append("instance over build cap; bounded light path")
        lower = 0
        if d.k == 1:
            lower = min(len(greedy_edge_disjoint_trees(g, t)), 1_000_000)
        gc = greedy_upper_coloring(g, d, f, cres.turan.witness)
        chi = BoundedValue(max(lower, 1), gc.num_colors)

    greedy_colors = None
    if cres.turan.exact:
        gc = greedy_upper_coloring(g, d, f, cres.turan.witness, kg=kg)
        greedy_colors = gc.num_colors
        if greedy_colors > cres.value:
            notes.append("greedy coloring exceeded the cut value (unexpected)")
        if greedy_colors < chi.upper:
            chi = BoundedValue(chi.lower, greedy_colors, chi.certificate)

    if chi.exact and cres.exact:
        equal = "yes" if chi.value == cres.value else "no"
    elif cres.exact and (chi.lower > cres.value or chi.upper < cres.value):
        equal = "no"
    else:
        equal = "indeterminate"
    return TheoremRecord(
        g.n, g.m, d.k, r, seed, chi, cres.value, cres.exact, equal, greedy_colors, notes
    )


_FAMILY_RE = re.compile(r"^(kneser|schrijver|circular)\((\d+),\s*(\d+)\)$")

FAMILY_CAPS = {"kneser": 3500, "schrijver": 3500, "circular": 3500}


def families_crosscheck(
    selection: list[str], budget_ms: float = 120_000.0
) -> list[dict]:
    """Build the known-family instances as general Kneser graphs, compute
    chi exactly, and compare with the published closed forms."""
    report = []
    for name in selection:
        match = _FAMILY_RE.match(name.replace(" ", ""))
        if not match:
            report.append({"name": name, "error": "unrecognized family"})
            continue
        kind, a, b = match.group(1), int(match.group(2)), int(match.group(3))
        if kind == "kneser":
            host = matching_graph(a)
            fam = FamilyDescriptor.matching(b)
            expected = max(a - 2 * b + 2, 0) if a >= 2 * b else 0
        elif kind == "schrijver":
            host = cycle_graph(a)
            fam = FamilyDescriptor.matching(b)
            expected = max(a - 2 * b + 2, 0) if a >= 2 * b else 0
        else:
            host = cycle_graph(a)
            fam = FamilyDescriptor.path(b)
            expected = math.ceil(a / b)
        d = trivial_decomposition(host)
        try:
            kg = build_kneser(host, d, fam, cap=FAMILY_CAPS[kind])
        except CapExceeded as exc:
            report.append({"name": name, "skipped": str(exc)})
            continue
        chi = chromatic_number(kg, budget_ms=budget_ms)
        report.append(
            {
                "name": name,
                "vertices": kg.num_vertices,
                "chi_lower": chi.lower,
                "chi_upper": chi.upper,
                "chi_exact": chi.exact,
                "expected": expected,
                "match": chi.exact and chi.value == expected,
            }
        )
    return report


def _existing_keys(out_path: str) -> set[str]:
    keys = set()
    try:
        with open(out_path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    keys.add(json.loads(line)["key"])
                except (ValueError, KeyError):
                    continue
    except FileNotFoundError:
        pass
    return keys


def campaign(config_path: str, out_path: str | None = None) -> list[dict]:
    """Run verify_theorem over a seeded instance grid; one JSON-serializable
    record per instance, resumable by instance key when out_path exists."""
    with open(config_path, "rb") as fh:
        try:
            cfg = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise GraphError(f"malformed config {config_path}: {exc}") from exc
    grid = cfg.get("campaign", cfg)
    ns = grid.get("n", [5, 6])
    rs = grid.get("r", [0])
    deltas = grid.get("delta", [0.6])
    seeds = grid.get("seeds", [0])
    k = int(grid.get("k", 1))
    budget_ms = float(grid.get("budget_ms", 30_000))

    done = _existing_keys(out_path) if out_path else set()
    records: list[dict] = []
    out_fh = open(out_path, "a") if out_path else None
    try:
        for n in ns:
            for r in rs:
                for delta in deltas:
                    for seed in seeds:
                        key = f"n{n}-r{r}-delta{delta}-k{k}-seed{seed}"
                        if key in done:
                            continue
                        started = time.monotonic()
                        record: dict = {
                            "key": key,
                            "inputs": {
                                "n": n,
                                "r": r,
                                "delta": delta,
                                "k": k,
                                "seed": seed,
                            },
                        }
                        try:
                            g = random_dense_graph(n, delta, seed)
                            d = random_decomposition(g, k, seed)
                            tr = verify_theorem(
                                g, d, r, budget_ms=budget_ms, seed=seed
                            )
                            record["result"] = tr.to_dict()
                            record["gap"] = (
                                tr.cut - tr.chi.value if tr.chi.exact else None
                            )
                        except GraphError as exc:
                            record["error"] = str(exc)
                        record["elapsed_ms"] = round(
                            (time.monotonic() - started) * 1000, 1
                        )
                        records.append(record)
                        if out_fh:
                            out_fh.write(json.dumps(record, sort_keys=True) + "\n")
                            out_fh.flush()
    finally:
        if out_fh:
            out_fh.close()
    return records
