"""General Kneser graph construction plus exact/certified chromatic and
clique numbers, and the least-removed-edge greedy upper coloring."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .graphs import (
    Decomposition,
    EdgeSet,
    FamilyDescriptor,
    Graph,
    GraphError,
    is_G_subgraph,
)
from .subtrees import enumerate_family, find_G_tree

DEFAULT_BUILD_CAP = 50_000
DEFAULT_EXACT_CAP = 2_000


class CapExceeded(GraphError):
    pass


@dataclass
class KneserInstance:
    host: Graph
    family: FamilyDescriptor
    decomposition: Decomposition
    vertices: list[EdgeSet]
    neighbor_bits: list[int]  # per-vertex neighbor bitmask over vertex indices

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return sum(nb.bit_count() for nb in self.neighbor_bits) // 2

    def neighbors(self, i: int) -> list[int]:
        out = []
        nb = self.neighbor_bits[i]
        while nb:
            low = nb & -nb
            out.append(low.bit_length() - 1)
            nb ^= low
        return out

    def export_adjacency(self) -> str:
        lines = [f"p {self.num_vertices} {self.num_edges}"]
        for i in range(self.num_vertices):
            lines.append(" ".join(str(j) for j in self.neighbors(i)))
        return "\n".join(lines) + "\n"


@dataclass
class BoundedValue:
    lower: int
    upper: int
    certificate: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int:
        if not self.exact:
            raise ValueError("value requested from inexact bounds")
        return self.lower


def build_kneser(
    g: Graph,
    d: Decomposition,
    f: FamilyDescriptor,
    cap: int = DEFAULT_BUILD_CAP,
) -> KneserInstance:
    """Vertices are the family members that meet every part of d, in
    enumeration order; adjacency is edge-set disjointness."""
    vertices: list[EdgeSet] = []
    for es in enumerate_family(g, f):
        if is_G_subgraph(es, d):
            vertices.append(es)
            if len(vertices) > cap:
                raise CapExceeded(f"vertex count exceeds cap {cap}")
    masks = [v.bits for v in vertices]
    nv = len(masks)
    neighbor_bits = [0] * nv
    for i in range(nv):
        mi = masks[i]
        row = 0
        for j in range(i + 1, nv):
            if not mi & masks[j]:
                row |= 1 << j
                neighbor_bits[j] |= 1 << i
        neighbor_bits[i] |= row
    return KneserInstance(g, f, d, vertices, neighbor_bits)


def count_kneser_vertices(
    g: Graph, d: Decomposition, f: FamilyDescriptor, cap: int | None = None
) -> int:
    count = 0
    for es in enumerate_family(g, f):
        if is_G_subgraph(es, d):
            count += 1
            if cap is not None and count > cap:
                return count
    return count


def _greedy_clique(kg: KneserInstance) -> list[int]:
    nv = kg.num_vertices
    best: list[int] = []
    order = sorted(range(nv), key=lambda i: -kg.neighbor_bits[i].bit_count())
    for seed in order[: min(nv, 40)]:
        clique = [seed]
        cand = kg.neighbor_bits[seed]
        while cand:
            pick = -1
            pick_deg = -1
            c = cand
            while c:
                low = c & -c
                j = low.bit_length() - 1
                c ^= low
                deg = (kg.neighbor_bits[j] & cand).bit_count()
                if deg > pick_deg:
                    pick, pick_deg = j, deg
            clique.append(pick)
            cand &= kg.neighbor_bits[pick]
        if len(clique) > len(best):
            best = sorted(clique)
    return best


def _dsatur_coloring(kg: KneserInstance) -> list[int]:
    """Greedy saturation-order coloring; colors are 0-based."""
    nv = kg.num_vertices
    color = [-1] * nv
    sat: list[set[int]] = [set() for _ in range(nv)]
    degrees = [kg.neighbor_bits[i].bit_count() for i in range(nv)]
    for _ in range(nv):
        pick = -1
        key = (-1, -1, 1)
        for i in range(nv):
            if color[i] != -1:
                continue
            k = (len(sat[i]), degrees[i], -i)
            if k > key:
                key = k
                pick = i
        c = 0
        while c in sat[pick]:
            c += 1
        color[pick] = c
        nb = kg.neighbor_bits[pick]
        while nb:
            low = nb & -nb
            j = low.bit_length() - 1
            nb ^= low
            sat[j].add(c)
    return color


def is_proper_coloring(kg: KneserInstance, color: list[int]) -> bool:
    for i in range(kg.num_vertices):
        nb = kg.neighbor_bits[i]
        while nb:
            low = nb & -nb
            j = low.bit_length() - 1
            nb ^= low
            if j > i and color[i] == color[j]:
                return False
    return True


def chromatic_number(
    kg: KneserInstance,
    budget_ms: float = 10_000.0,
    exact_cap: int = DEFAULT_EXACT_CAP,
) -> BoundedValue:
    """Exact chromatic number via branch-and-bound when it closes within
    budget, else certified [clique lower bound, greedy upper coloring]."""
    nv = kg.num_vertices
    if nv == 0:
        return BoundedValue(0, 0, [])
    if all(nb == 0 for nb in kg.neighbor_bits):
        return BoundedValue(1, 1, [0] * nv)

    clique = _greedy_clique(kg)
    lb = len(clique)
    greedy = _dsatur_coloring(kg)
    ub = max(greedy) + 1
    best_coloring = greedy
    if lb == ub or nv > exact_cap:
        return BoundedValue(lb, ub, best_coloring)

    deadline = time.monotonic() + budget_ms / 1000.0
    neighbor = kg.neighbor_bits
    color = [-1] * nv
    # seed: clique vertices get fixed distinct colors
    for c, v in enumerate(clique):
        color[v] = c

    state = {"best": ub, "best_coloring": best_coloring, "timeout": False, "nodes": 0}

    def rec(num_colored: int, max_color: int):
        if state["timeout"]:
            return
        state["nodes"] += 1
        if state["nodes"] % 2048 == 0 and time.monotonic() > deadline:
            state["timeout"] = True
            return
        if max_color + 1 >= state["best"]:
            return
        if num_colored == nv:
            state["best"] = max_color + 1
            state["best_coloring"] = color[:]
            return
        # saturation-order pick, ties by vertex index
        pick = -1
        pick_key = (-1, -1, 1)
        pick_forbidden = 0
        for i in range(nv):
            if color[i] != -1:
                continue
            forbidden = 0
            nb = neighbor[i]
            while nb:
                low = nb & -nb
                j = low.bit_length() - 1
                nb ^= low
                if color[j] != -1:
                    forbidden |= 1 << color[j]
            k = (forbidden.bit_count(), neighbor[i].bit_count(), -i)
            if k > pick_key:
                pick_key = k
                pick = i
                pick_forbidden = forbidden
        limit = min(max_color + 1, state["best"] - 1)
        for c in range(limit + 1):
            if pick_forbidden >> c & 1:
                continue
            color[pick] = c
            rec(num_colored + 1, max(max_color, c))
            color[pick] = -1
            if state["timeout"] or state["best"] == lb:
                return

    rec(len(clique), len(clique) - 1)
    if state["timeout"]:
        return BoundedValue(lb, state["best"], state["best_coloring"])
    return BoundedValue(state["best"], state["best"], state["best_coloring"])


def _member_size(f: FamilyDescriptor) -> int | None:
    if f.kind == "trees":
        return f.param - 1
    if f.kind == "matching":
        return f.param
    if f.kind == "path":
        return f.param
    sizes = {len(m) for m in f.members}
    return sizes.pop() if len(sizes) == 1 else None


def clique_number(kg: KneserInstance, budget_ms: float = 60_000.0) -> BoundedValue:
    """Exact clique number via branch-and-bound with an edge-budget bound
    (members of uniform size s allow at most m/s pairwise disjoint ones)."""
    nv = kg.num_vertices
    if nv == 0:
        return BoundedValue(0, 0, [])
    size = _member_size(kg.family)
    m_host = kg.host.m
    edge_cap = m_host // size if size else nv

    greedy = _greedy_clique(kg)
    best = {"size": len(greedy), "clique": list(greedy), "timeout": False, "nodes": 0}
    root_ub = min(nv, edge_cap) if size else nv
    if best["size"] >= root_ub:
        return BoundedValue(root_ub, root_ub, best["clique"][:root_ub])

    deadline = time.monotonic() + budget_ms / 1000.0
    neighbor = kg.neighbor_bits
    masks = [v.bits for v in kg.vertices]

    def rec(clique: list[int], cand: int, used_edges: int):
        if best["timeout"]:
            return
        best["nodes"] += 1
        if best["nodes"] % 1024 == 0 and time.monotonic() > deadline:
            best["timeout"] = True
            return
        if len(clique) > best["size"]:
            best["size"] = len(clique)
            best["clique"] = clique[:]
        bound = len(clique) + cand.bit_count()
        if size:
            bound = min(bound, len(clique) + (m_host - used_edges.bit_count()) // size)
        if bound <= best["size"]:
            return
        c = cand
        while c:
            low = c & -c
            j = low.bit_length() - 1
            c ^= low
            cand ^= low  # exclude j from later siblings
            rec(clique + [j], cand & neighbor[j], used_edges | masks[j])
            if best["timeout"] or best["size"] >= root_ub:
                return

    rec([], (1 << nv) - 1, 0)
    if best["timeout"]:
        return BoundedValue(best["size"], root_ub, best["clique"])
    return BoundedValue(best["size"], best["size"], best["clique"])


@dataclass
class GreedyColoring:
    colors: list[int]  # per Kneser vertex: index of its least removed edge
    removed: tuple[int, ...]
    num_colors: int


def greedy_upper_coloring(
    g: Graph,
    d: Decomposition,
    f: FamilyDescriptor,
    witness: EdgeSet,
    kg: KneserInstance | None = None,
) -> GreedyColoring:
    """Color each Kneser vertex by the least edge index it owns outside the
    witness.  Proper because adjacent vertices are edge-disjoint.  Raises if
    the witness itself contains a forbidden family member."""
    offending = None
    for es in enumerate_family(g, f, within=witness):
        if is_G_subgraph(es, d):
            offending = es
            break
    if offending is not None:
        raise GraphError(
            f"witness contains a forbidden member with edges {offending.indices()}"
        )
    removed = tuple(i for i in range(g.m) if i not in witness)
    removed_mask = 0
    for i in removed:
        removed_mask |= 1 << i
    colors = []
    if kg is not None:
        vertex_iter = kg.vertices
    else:
        vertex_iter = (
            es for es in enumerate_family(g, f) if is_G_subgraph(es, d)
        )
    for es in vertex_iter:
        outside = es.bits & removed_mask
        if not outside:
            raise GraphError("vertex lies inside the witness; witness invalid")
        colors.append((outside & -outside).bit_length() - 1)
    return GreedyColoring(colors, removed, len(set(colors)))


def edge_disjoint_tree_family(g: Graph, t: int, count: int) -> list[EdgeSet] | None:
    """`count` pairwise edge-disjoint t-vertex trees of g, or None if no such
    family exists (complete backtracking over remaining-edge subgraphs)."""

    def rec(found: list[EdgeSet], used: int):
        if len(found) == count:
            return found
        remaining = EdgeSet(~used & ((1 << g.m) - 1), g.m)
        for tree in enumerate_family(g, FamilyDescriptor.trees(t), within=remaining):
            res = rec(found + [tree], used | tree.bits)
            if res is not None:
                return res
        return None

    if count == 0:
        return []
    return rec([], 0)


def greedy_edge_disjoint_trees(g: Graph, t: int, cap: int = 64) -> list[EdgeSet]:
    """Fast greedy lower-bound family of pairwise edge-disjoint t-vertex
    trees (first-found order, no backtracking)."""
    found: list[EdgeSet] = []
    used = 0
    trivial = Decomposition((g.full_edge_set(),), True)
    while len(found) < cap:
        remaining = EdgeSet(~used & ((1 << g.m) - 1), g.m)
        tree = find_G_tree(g, remaining, trivial, t)
        if tree is None:
            break
        found.append(tree)
        used |= tree.bits
    return found
