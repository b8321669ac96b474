"""Global minimum cuts, balanced r-cuts, generalized Turan numbers, and the
decomposition-relative cut number derived from them."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from .graphs import (
    Decomposition,
    EdgeSet,
    FamilyDescriptor,
    Graph,
    GraphError,
    components,
    is_G_subgraph,
)
from .subtrees import contains_G_tree, enumerate_family


@dataclass(frozen=True)
class CutResult:
    value: int
    side: tuple[int, ...]  # S; the partition is (S, V \ S)

    def verify(self, g: Graph) -> bool:
        s = set(self.side)
        crossing = sum(1 for u, v in g.edges if (u in s) != (v in s))
        return crossing == self.value


@dataclass(frozen=True)
class TuranResult:
    value: int
    witness: EdgeSet
    exact: bool


def _crossing(g: Graph, side_mask: int) -> int:
    count = 0
    for u, v in g.edges:
        if (side_mask >> u & 1) != (side_mask >> v & 1):
            count += 1
    return count


def min_cut_global(g: Graph) -> CutResult:
    """Exact global minimum cut by deterministic maximum-adjacency
    contraction (Stoer-Wagner with unit weights)."""
    if g.n < 2:
        raise GraphError("minimum cut needs at least 2 vertices")
    comps = components(g, g.full_edge_set())
    if len(comps) > 1:
        return CutResult(0, tuple(comps[0]))

    # contracted-vertex groups; weights between supervertices
    groups = {v: [v] for v in range(g.n)}
    weight = {v: {} for v in range(g.n)}
    for u, v in g.edges:
        weight[u][v] = weight[u].get(v, 0) + 1
        weight[v][u] = weight[v].get(u, 0) + 1

    best_value = None
    best_side: tuple[int, ...] = ()
    active = sorted(groups)
    while len(active) > 1:
        # maximum-adjacency order from the smallest active vertex
        start = active[0]
        in_a = {start}
        order = [start]
        conn = dict(weight[start])
        while len(order) < len(active):
            pick = None
            pick_w = -1
            for v in active:
                if v in in_a:
                    continue
                w = conn.get(v, 0)
                if w > pick_w or (w == pick_w and (pick is None or v < pick)):
                    pick, pick_w = v, w
            order.append(pick)
            in_a.add(pick)
            for u, w in weight[pick].items():
                if u not in in_a:
                    conn[u] = conn.get(u, 0) + w
        s, t = order[-2], order[-1]
        cut_of_phase = sum(weight[t].values())
        if best_value is None or cut_of_phase < best_value:
            best_value = cut_of_phase
            best_side = tuple(sorted(groups[t]))
        # contract t into s
        groups[s] = groups[s] + groups[t]
        for u, w in list(weight[t].items()):
            if u == s:
                continue
            weight[s][u] = weight[s].get(u, 0) + w
            weight[u][s] = weight[s][u]
            del weight[u][t]
        weight[s].pop(t, None)
        del weight[t]
        del groups[t]
        active = sorted(groups)
    result = CutResult(best_value, best_side)
    assert result.verify(g), "min-cut certificate failed re-validation"
    return result


def _brute_force_min_cut(g: Graph) -> int:
    best = None
    for mask in range(1, 1 << (g.n - 1)):  # vertex n-1 always on the other side
        c = _crossing(g, mask)
        if best is None or c < best:
            best = c
    return best


def cut_r(g: Graph, r: int) -> CutResult:
    """Minimum cut over bipartitions with both sides of size >= r."""
    if not 1 <= r <= g.n // 2:
        raise GraphError(f"infeasible side sizes: need 1 <= r <= {g.n // 2}")
    if r == 1:
        result = min_cut_global(g)
        if g.n <= 12:
            assert result.value == _brute_force_min_cut(g), (
                "contraction min-cut disagrees with subset search"
            )
        return result
    best = None
    best_side = None
    verts = list(range(1, g.n))
    # vertex 0 fixed on side S to kill complement symmetry
    for size in range(r, g.n - r + 1):
        for combo in itertools.combinations(verts, size - 1):
            mask = 1
            for v in combo:
                mask |= 1 << v
            c = _crossing(g, mask)
            if best is None or c < best:
                best = c
                best_side = (0,) + combo
    return CutResult(best, tuple(sorted(best_side)))


def _has_forbidden(g: Graph, kept: EdgeSet, d: Decomposition, f: FamilyDescriptor) -> bool:
    if f.kind == "trees":
        return contains_G_tree(g, kept, d, f.param)
    for es in enumerate_family(g, f, within=kept):
        if is_G_subgraph(es, d):
            return True
    return False


def _turan_trees_trivial(g: Graph, t: int) -> TuranResult:
    """Exact ex for the trivial decomposition and a tree family: minimum
    crossing edges over vertex partitions with every block of size <= t-1,
    by canonical-block branch and bound."""
    n = g.n
    cap = t - 1
    if t > n:
        return TuranResult(g.m, g.full_edge_set(), True)
    # adjacency counts for incremental crossing cost
    adj = [[0] * n for _ in range(n)]
    for u, v in g.edges:
        adj[u][v] = adj[v][u] = 1

    best = {"cost": g.m + 1, "assign": None}
    assign = [-1] * n
    block_sizes: list[int] = []

    def rec(v: int, cost: int):
        if cost >= best["cost"]:
            return
        if v == n:
            best["cost"] = cost
            best["assign"] = assign[:]
            return
        num_blocks = len(block_sizes)
        for b in range(num_blocks + 1):
            if b < num_blocks and block_sizes[b] >= cap:
                continue
            extra = 0
            for u in range(v):
                if adj[u][v] and assign[u] != b:
                    extra += 1
            assign[v] = b
            if b == num_blocks:
                block_sizes.append(1)
            else:
                block_sizes[b] += 1
            rec(v + 1, cost + extra)
            if b == num_blocks:
                block_sizes.pop()
            else:
                block_sizes[b] -= 1
            assign[v] = -1
            if b == num_blocks:
                break  # opening any later new block is symmetric

    rec(0, 0)
    a = best["assign"]
    witness_bits = 0
    for i, (u, v) in enumerate(g.edges):
        if a[u] == a[v]:
            witness_bits |= 1 << i
    return TuranResult(g.m - best["cost"], EdgeSet(witness_bits, g.m), True)


def turan_ex(
    g: Graph,
    d: Decomposition,
    f: FamilyDescriptor,
    budget_ms: float = 60_000.0,
) -> TuranResult:
    """Maximum edges of a spanning subgraph with no decomposition-meeting
    family member.  Removal sets are searched smallest-first (feasibility is
    monotone under removal), so the first feasible size is optimal."""
    full = g.full_edge_set()
    if not _has_forbidden(g, full, d, f):
        return TuranResult(g.m, full, True)
    if (
        f.kind == "trees"
        and d.k == 1
        and d.covering
        and d.parts[0].bits == (1 << g.m) - 1
    ):
        return _turan_trees_trivial(g, f.param)

    deadline = time.monotonic() + budget_ms / 1000.0
    # removing the smallest part entirely kills every d-meeting subgraph,
    # so the optimal removal count is at most |E(G_1)|
    max_removals = len(d.parts[0]) if d.covering else g.m
    for s in range(1, max_removals + 1):
        for combo in itertools.combinations(range(g.m), s):
            removed = 0
            for i in combo:
                removed |= 1 << i
            kept = EdgeSet(full.bits & ~removed, g.m)
            if not _has_forbidden(g, kept, d, f):
                return TuranResult(g.m - s, kept, True)
            if time.monotonic() > deadline:
                return _turan_greedy_fallback(g, d, f)
    # removing the whole smallest part is always feasible
    kept = full - d.parts[0]
    return TuranResult(len(kept), kept, True)


def _turan_greedy_fallback(g: Graph, d: Decomposition, f: FamilyDescriptor) -> TuranResult:
    kept = g.full_edge_set()
    while True:
        member = None
        for es in enumerate_family(g, f, within=kept):
            if is_G_subgraph(es, d):
                member = es
                break
        if member is None:
            return TuranResult(len(kept), kept, False)
        drop = next(iter(member))
        kept = EdgeSet(kept.bits & ~(1 << drop), g.m)


@dataclass(frozen=True)
class CutDecompResult:
    value: int
    exact: bool
    turan: TuranResult


def cut_decomp(
    g: Graph, d: Decomposition, i: int, budget_ms: float = 60_000.0
) -> CutDecompResult:
    """Decomposition-relative cut number: |E| minus the Turan number for
    trees with n-i+1 vertices."""
    if not 1 <= i <= g.n - 1:
        raise GraphError(f"need 1 <= i <= {g.n - 1}")
    tr = turan_ex(g, d, FamilyDescriptor.trees(g.n - i + 1), budget_ms)
    return CutDecompResult(g.m - tr.value, tr.exact, tr)


def brute_force_turan(g: Graph, d: Decomposition, f: FamilyDescriptor) -> int:
    """Independent oracle: maximum over all kept-edge subsets (small m only)."""
    best = 0
    for mask in range(1 << g.m):
        kept = EdgeSet(mask, g.m)
        if len(kept) <= best:
            continue
        if not _has_forbidden(g, kept, d, f):
            best = len(kept)
    return best
