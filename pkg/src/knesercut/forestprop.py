"""Rainbow cycles and the forest-property sufficient conditions, with an
exhaustive verifier over block-consecutive orderings for tiny instances."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .altcolor import AlternatingColoring, EdgeOrdering, realize_coloring
from .graphs import (
    Decomposition,
    EdgeSet,
    Graph,
    GraphError,
    components,
    is_G_subgraph,
    touched_vertices,
)
from .subtrees import find_G_forest


@dataclass(frozen=True)
class RainbowCycle:
    edges: EdgeSet
    parts_touched: tuple[int, ...]

    def validate(self, g: Graph, d: Decomposition) -> bool:
        idx = list(self.edges)
        if len(idx) < 3 or len(idx) > d.k:
            return False
        verts = touched_vertices(g, self.edges)
        if len(verts) != len(idx):
            return False
        deg = {v: 0 for v in verts}
        for e in idx:
            u, v = g.edges[e]
            deg[u] += 1
            deg[v] += 1
        if any(x != 2 for x in deg.values()):
            return False
        live = [c for c in components(g, self.edges) if verts.intersection(c)]
        if len(live) != 1:
            return False
        for part in d.parts:
            if (part.bits & self.edges.bits).bit_count() > 1:
                return False
        return True


def _part_of(d: Decomposition, e: int) -> int:
    for i, part in enumerate(d.parts):
        if e in part:
            return i
    return -1


def rainbow_cycles(
    g: Graph, d: Decomposition, within: EdgeSet | None = None
) -> list[RainbowCycle]:
    """All cycles of length <= k using at most one edge per part; DFS from
    each anchor vertex with a part-usage mask, each cycle reported once."""
    k = d.k
    if k < 3:
        return []
    allowed = within.bits if within is not None else (1 << g.m) - 1
    part_of = [_part_of(d, e) for e in range(g.m)]
    found: list[RainbowCycle] = []
    seen: set[int] = set()

    def dfs(anchor: int, v: int, visited: set[int], ebits: int, pmask: int, depth: int):
        for e in g.incident[v]:
            if not allowed >> e & 1 or ebits >> e & 1:
                continue
            p = part_of[e]
            if p < 0 or pmask >> p & 1:
                continue
            w = g.other_end(e, v)
            if w == anchor and depth >= 3:
                bits = ebits | 1 << e
                if bits not in seen:
                    seen.add(bits)
                    parts = tuple(sorted(part_of[f] for f in EdgeSet(bits, g.m)))
                    found.append(RainbowCycle(EdgeSet(bits, g.m), parts))
                continue
            if w <= anchor or w in visited or depth == k:
                continue
            dfs(anchor, w, visited | {w}, ebits | 1 << e, pmask | 1 << p, depth + 1)

    for anchor in range(g.n):
        dfs(anchor, anchor, {anchor}, 0, 0, 1)
    return found


@dataclass(frozen=True)
class LemmaVerdict:
    holds: bool
    detail: str
    witness: RainbowCycle | None = None


def _binom_2k3(k: int) -> int:
    return math.comb(max(2 * k - 3, 0), 2)


def check_lemma3(g: Graph, d: Decomposition) -> LemmaVerdict:
    """Per rainbow cycle C: either the parts meeting C are jointly large,
    (a) sum |E(G_i)| > 2|E(C)|/(|E(C)|-1) * C(2k-3,2) + |E(C)|, or (b) some
    part meeting C satisfies |E(G_i)| - |E(G_1)| >= 2*C(2k-3,2) + 1."""
    k = d.k
    cycles = rainbow_cycles(g, d)
    if not cycles:
        return LemmaVerdict(True, "no rainbow cycles; holds vacuously")
    b = _binom_2k3(k)
    e1 = len(d.parts[0])
    for cyc in cycles:
        c_len = len(cyc.edges)
        total = sum(len(d.parts[i]) for i in cyc.parts_touched)
        cond_a = total > 2 * c_len / (c_len - 1) * b + c_len
        cond_b = any(
            len(d.parts[i]) - e1 >= 2 * b + 1 for i in cyc.parts_touched
        )
        if not (cond_a or cond_b):
            return LemmaVerdict(
                False,
                f"cycle of length {c_len} fails both conditions "
                f"(sum {total}, bound {2 * c_len / (c_len - 1) * b + c_len:.2f})",
                cyc,
            )
    return LemmaVerdict(True, f"all {len(cycles)} rainbow cycles pass")


def check_lemma4(g: Graph, d: Decomposition) -> LemmaVerdict:
    """Bullet list of sufficient conditions, checked in order."""
    k = d.k
    sizes = [len(p) for p in d.parts]
    if k <= 2:
        return LemmaVerdict(True, "bullet 1: k <= 2")
    if k == 3 and sizes[2] >= sizes[0] + 7:
        return LemmaVerdict(True, "bullet 2: k = 3 and |E(G_3)| >= |E(G_1)| + 7")
    b = _binom_2k3(k)
    if sum(sizes[:3]) >= 3 * b + 4:
        return LemmaVerdict(True, "bullet 3: first three parts jointly large")
    prefix_bits = 0
    for part in d.parts[:-1]:
        prefix_bits |= part.bits
    prefix = EdgeSet(prefix_bits, g.m)
    if not rainbow_cycles(g, d, within=prefix) and sizes[-1] - sizes[0] >= 2 * b + 1:
        return LemmaVerdict(
            True, "bullet 4: no rainbow cycle outside the last part and it is large"
        )
    return LemmaVerdict(False, "no bullet applies")


def _block_consecutive_orderings(d: Decomposition, budget: int):
    """All orderings that list each part consecutively; raises when the
    count k! * prod |E(G_i)|! exceeds the budget."""
    sizes = [len(p) for p in d.parts]
    total = math.factorial(d.k)
    for s in sizes:
        total *= math.factorial(s)
    if total > budget:
        raise GraphError(
            f"{total} block orderings exceed budget {budget}; "
            "use sampled checking instead"
        )
    part_lists = [list(p) for p in d.parts]
    for part_order in itertools.permutations(range(d.k)):
        pools = [part_lists[i] for i in part_order]
        for perms in itertools.product(*(itertools.permutations(p) for p in pools)):
            perm = tuple(e for block in perms for e in block)
            yield EdgeOrdering(perm)


def _connected_spanning(g: Graph, es: EdgeSet, d: Decomposition) -> bool:
    if not es.bits:
        return False
    if not is_G_subgraph(es, d):
        return False
    if touched_vertices(g, es) != set(range(g.n)):
        return False
    return len(components(g, es)) == 1


def verify_forest_property_exhaustive(
    g: Graph, d: Decomposition, budget: int = 100_000
) -> bool:
    """For every block-consecutive ordering and every alternating coloring
    of length >= |E(G)| - |E(G_1)| + 1: if one color class is a connected
    spanning subgraph meeting every part, it must contain an acyclic
    one-edge-per-part selection."""
    m = g.m
    min_len = m - len(d.parts[0]) + 1
    subsets = [
        EdgeSet(bits, m)
        for bits in range(1 << m)
        if bits.bit_count() >= min_len
    ]
    # fail fast on over-budget ordering spaces even if the fast path would
    # settle the verdict
    sizes = [len(p) for p in d.parts]
    total_orderings = math.factorial(d.k)
    for s in sizes:
        total_orderings *= math.factorial(s)
    if total_orderings > budget:
        raise GraphError(
            f"{total_orderings} block orderings exceed budget {budget}; "
            "use sampled checking instead"
        )

    side_ok: dict[int, bool] = {}

    def check_side(side: EdgeSet) -> bool:
        hit = side_ok.get(side.bits)
        if hit is not None:
            return hit
        if not _connected_spanning(g, side, d):
            res = True
        else:
            res = find_G_forest(g, side, d) is not None
        side_ok[side.bits] = res
        return res

    # every ordering splits a colored set into one balanced partition, so
    # if every balanced partition of every long-enough set is safe, every
    # ordering is safe; only unsafe partitions force the ordering sweep
    suspects = []
    for colored in subsets:
        idx = list(colored)
        half = (len(idx) + 1) // 2
        for reds in itertools.combinations(idx, half):
            rbits = 0
            for e in reds:
                rbits |= 1 << e
            red = EdgeSet(rbits, m)
            blue = colored - red
            if not check_side(red) or not check_side(blue):
                suspects.append(colored)
                break
    if not suspects:
        return True

    suspect_set = {c.bits for c in suspects}
    for sigma in _block_consecutive_orderings(d, budget):
        for colored in subsets:
            if colored.bits not in suspect_set:
                continue
            # validity is parity-symmetric: one parity visits both sides
            coloring = realize_coloring(sigma, colored)
            if not check_side(coloring.red) or not check_side(coloring.blue):
                return False
    return True
