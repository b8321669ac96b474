"""Staged construction of the dense-decomposition edge ordering: per-part
Eulerian orders, K4-factor packing, monogamous C4 blocks, Hall assignment,
edge-disjoint Hamiltonian cycles, odd-vertex pairing paths, triangle blocks,
the staged Eulerian tour, and final assembly with certificates.

Targets derived from asymptotic formulas are clamped to whatever the
instance supports; the report records target vs achieved per stage.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .altcolor import EdgeOrdering, TourCertificate
from .graphs import Decomposition, EdgeSet, Graph, GraphError, touched_vertices


class StageFailure(GraphError):
    pass


@dataclass(frozen=True)
class SubOrdering:
    """A consecutive run of edge indices induced by Eulerian tours; one
    vertex walk per connected component."""

    edges: tuple[int, ...]
    walks: tuple[tuple[int, ...], ...]


def _hierholzer(adj: dict[int, list[tuple[int, int]]], start: int) -> tuple[list[int], list[int]]:
    """Closed Eulerian tour from `start` over the multigraph adjacency
    {v: [(edge_id, other_vertex), ...]}.  Returns (vertex walk, edge order)."""
    ptr = {v: 0 for v in adj}
    used: set[int] = set()
    stack: list[tuple[int, int | None]] = [(start, None)]
    walk_rev: list[int] = []
    edges_rev: list[int] = []
    while stack:
        v, via = stack[-1]
        lst = adj.get(v, [])
        advanced = False
        while ptr[v] < len(lst):
            e, w = lst[ptr[v]]
            ptr[v] += 1
            if e in used:
                continue
            used.add(e)
            stack.append((w, e))
            advanced = True
            break
        if not advanced:
            stack.pop()
            walk_rev.append(v)
            if via is not None:
                edges_rev.append(via)
    return walk_rev[::-1], edges_rev[::-1]


def eulerize_and_order(part: EdgeSet, host: Graph) -> SubOrdering:
    """Order the part's edges by Eulerian tours of its parity-augmented
    components (virtual vertex joined to the odd-degree vertices); only
    original edges appear in the output, in tour order."""
    if not part.bits:
        raise GraphError("empty part")
    edge_list = list(part)
    verts = sorted(touched_vertices(host, part))
    # component split
    comp_of: dict[int, int] = {}
    adj0: dict[int, list[tuple[int, int]]] = {v: [] for v in verts}
    for e in edge_list:
        u, v = host.edges[e]
        adj0[u].append((e, v))
        adj0[v].append((e, u))
    cid = 0
    for v in verts:
        if v in comp_of:
            continue
        stack = [v]
        comp_of[v] = cid
        while stack:
            x = stack.pop()
            for _, y in adj0[x]:
                if y not in comp_of:
                    comp_of[y] = cid
                    stack.append(y)
        cid += 1

    order: list[int] = []
    walks: list[tuple[int, ...]] = []
    virtual_id = host.n
    virtual_edge = host.m
    for c in range(cid):
        cverts = [v for v in verts if comp_of[v] == c]
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in cverts}
        degree = {v: 0 for v in cverts}
        cedges = []
        for e in edge_list:
            u, v = host.edges[e]
            if comp_of[u] == c:
                adj[u].append((e, v))
                adj[v].append((e, u))
                degree[u] += 1
                degree[v] += 1
                cedges.append(e)
        odd = [v for v in cverts if degree[v] % 2]
        z = None
        if odd:
            z = virtual_id
            virtual_id += 1
            adj[z] = []
            for v in odd:
                ve = virtual_edge
                virtual_edge += 1
                adj[z].append((ve, v))
                adj[v].append((ve, z))
        start = z if z is not None else cverts[0]
        walk, tour_edges = _hierholzer(adj, start)
        originals = [e for e in tour_edges if e < host.m]
        if len(originals) != len(cedges):
            raise StageFailure("Eulerian tour missed edges of a component")
        order.extend(originals)
        walks.append(tuple(walk))
    return SubOrdering(tuple(order), tuple(walks))


@dataclass(frozen=True)
class K4Factor:
    quads: tuple[tuple[int, int, int, int], ...]  # vertex-disjoint K4s

    def synthetic_quads(self, n_real: int) -> list[tuple[int, int, int, int]]:
        return [q for q in self.quads if any(v >= n_real for v in q)]


def k4_factor_packing(
    g: Graph,
    factors_wanted: int,
    seed: int = 0,
    allowed: EdgeSet | None = None,
    restarts: int = 20,
) -> list[K4Factor]:
    """Greedy edge-disjoint K4-factors of g padded to a multiple of 4 with
    virtual universal vertices.  Returns however many factors were found."""
    rng = random.Random(seed)
    n = g.n
    pad = (4 - n % 4) % 4
    padded = n + pad
    allowed_bits = allowed.bits if allowed is not None else (1 << g.m) - 1

    def real_adjacent(u: int, v: int) -> bool:
        if u >= n or v >= n:
            return True  # virtual vertices are universal
        if not g.has_edge(u, v):
            return False
        return bool(allowed_bits >> g.edge_index(u, v) & 1)

    used_pairs: set[frozenset] = set()

    def pair_free(u: int, v: int) -> bool:
        return real_adjacent(u, v) and frozenset((u, v)) not in used_pairs

    def try_factor() -> list[tuple[int, int, int, int]] | None:
        verts = list(range(padded))
        rng.shuffle(verts)
        quads: list[tuple[int, int, int, int]] = []
        budget = [600]

        def rec(remaining: list[int]) -> bool:
            if not remaining:
                return True
            budget[0] -= 1
            if budget[0] < 0:
                return False
            v = remaining[0]
            pool = remaining[1:]
            rng.shuffle(pool)
            tried = 0
            for trio in itertools.combinations(pool, 3):
                group = (v,) + trio
                ok = True
                for i in range(4):
                    for j in range(i + 1, 4):
                        if not pair_free(group[i], group[j]):
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    continue
                quads.append(tuple(sorted(group)))
                rest = [x for x in pool if x not in group]
                if rec(rest):
                    return True
                quads.pop()
                tried += 1
                if tried >= 25:
                    break
            return False

        return quads if rec(verts) else None

    factors: list[K4Factor] = []
    for _ in range(factors_wanted):
        quads = None
        for _ in range(restarts):
            quads = try_factor()
            if quads is not None:
                break
        if quads is None:
            break
        for q in quads:
            for i in range(4):
                for j in range(i + 1, 4):
                    used_pairs.add(frozenset((q[i], q[j])))
        factors.append(K4Factor(tuple(quads)))
    return factors


@dataclass(frozen=True)
class FourBlock:
    cycle: tuple[int, int, int, int]  # vertices in C4 order

    @property
    def vertex_pairs(self) -> list[frozenset]:
        vs = self.cycle
        return [frozenset((vs[i], vs[j])) for i in range(4) for j in range(i + 1, 4)]

    def cycle_edges(self, g: Graph) -> tuple[int, ...]:
        vs = self.cycle
        return tuple(g.edge_index(vs[i], vs[(i + 1) % 4]) for i in range(4))


def monogamous_c4_blocks(factors: list[K4Factor], g: Graph) -> list[FourBlock]:
    """One C4 per real K4 per factor; blocks using synthetic (virtual) edges
    are dropped, and pairwise vertex-pair monogamy is verified, reselecting
    diagonals or dropping a block on a clash."""
    n = g.n
    blocks: list[FourBlock] = []
    seen_pairs: set[frozenset] = set()
    for factor in factors:
        for quad in factor.quads:
            if any(v >= n for v in quad):
                continue
            a, b, c, d = quad
            choices = [(a, b, c, d), (a, b, d, c), (a, c, b, d)]
            placed = False
            for cyc in choices:
                block = FourBlock(cyc)
                if all(p not in seen_pairs for p in block.vertex_pairs):
                    seen_pairs.update(block.vertex_pairs)
                    blocks.append(block)
                    placed = True
                    break
            # unresolvable clash: drop the offending block
            if not placed:
                continue
    return blocks


class HallFailure(StageFailure):
    def __init__(self, deficient: list[int]):
        super().__init__(f"no saturating assignment; deficient vertices {deficient}")
        self.deficient = deficient


def assign_blocks_hall(
    blocks: list[FourBlock], l: int, g: Graph
) -> dict[int, list[FourBlock]]:
    """Assign l distinct blocks to every vertex by bipartite matching over
    (vertex copies) x (blocks containing the vertex).  Raises HallFailure
    with a deficient vertex list when saturation is impossible."""
    n = g.n
    if l == 0:
        return {v: [] for v in range(n)}
    containing: dict[int, list[int]] = {v: [] for v in range(n)}
    for bi, block in enumerate(blocks):
        for v in block.cycle:
            containing[v].append(bi)
    short = [v for v in range(n) if len(containing[v]) < l]
    if short:
        raise HallFailure(short)

    left = [(v, c) for v in range(n) for c in range(l)]
    match_block: dict[int, tuple[int, int]] = {}  # block -> left node
    match_left: dict[tuple[int, int], int] = {}

    def augment(u, visited) -> bool:
        v, _ = u
        for bi in containing[v]:
            if bi in visited:
                continue
            visited.add(bi)
            if bi not in match_block or augment(match_block[bi], visited):
                match_block[bi] = u
                match_left[u] = bi
                return True
        return False

    for u in left:
        if not augment(u, set()):
            raise HallFailure([u[0]])

    assigned: dict[int, list[FourBlock]] = {v: [] for v in range(n)}
    for (v, _), bi in match_left.items():
        assigned[v].append(blocks[bi])
    return assigned


def h_subgraph_edges(assigned: dict[int, list[FourBlock]], g: Graph) -> dict[int, EdgeSet]:
    out = {}
    for v, blks in assigned.items():
        bits = 0
        for b in blks:
            for e in b.cycle_edges(g):
                bits |= 1 << e
        out[v] = EdgeSet(bits, g.m)
    return out


def hamiltonian_cycles_disjoint(
    g: Graph,
    count: int,
    seed: int = 0,
    forbidden: EdgeSet | None = None,
    restarts: int = 300,
) -> list[list[int]]:
    """Up to `count` pairwise edge-disjoint Hamiltonian cycles by rotation-
    extension with seeded restarts.  Returns the cycles found (vertex order)."""
    rng = random.Random(seed)
    n = g.n
    if n < 3:
        return []
    banned = forbidden.bits if forbidden is not None else 0
    cycles: list[list[int]] = []

    def neighbors(v: int, banned_now: int) -> list[int]:
        out = []
        for e in g.incident[v]:
            if banned_now >> e & 1:
                continue
            out.append(g.other_end(e, v))
        return out

    for _ in range(count):
        found = None
        for _ in range(restarts):
            start = rng.randrange(n)
            path = [start]
            pos = {start: 0}
            for _ in range(40 * n):
                end = path[-1]
                nbrs = neighbors(end, banned)
                ext = [w for w in nbrs if w not in pos]
                if ext:
                    w = ext[rng.randrange(len(ext))]
                    pos[w] = len(path)
                    path.append(w)
                    continue
                if len(path) == n and path[0] in nbrs:
                    found = path[:]
                    break
                # rotate: reverse the tail after a neighbor inside the path
                inside = [w for w in nbrs if w in pos and pos[w] < len(path) - 2]
                if not inside:
                    break
                w = inside[rng.randrange(len(inside))]
                i = pos[w]
                tail = path[i + 1 :][::-1]
                path = path[: i + 1] + tail
                pos = {v: idx for idx, v in enumerate(path)}
            if found:
                break
        if not found:
            break
        for i in range(n):
            e = g.edge_index(found[i], found[(i + 1) % n])
            banned |= 1 << e
        cycles.append(found)
    return cycles


def cycle_edge_set(g: Graph, cycle: list[int]) -> EdgeSet:
    bits = 0
    for i in range(len(cycle)):
        bits |= 1 << g.edge_index(cycle[i], cycle[(i + 1) % len(cycle)])
    return EdgeSet(bits, g.m)


def odd_pairing_paths(
    c_prime: list[int], odd_vertices: set[int], g: Graph
) -> list[list[int]]:
    """Vertex-disjoint subpaths of the cycle whose endpoint set is exactly
    the odd vertices: consecutive odd vertices around the cycle are paired
    and joined by the direct arc."""
    if not odd_vertices:
        return []
    if len(odd_vertices) % 2:
        raise StageFailure("odd vertex count must be even")
    n = len(c_prime)
    positions = [i for i, v in enumerate(c_prime) if v in odd_vertices]
    for rotation in range(2):
        ordered = positions[rotation:] + positions[:rotation]
        paths = []
        ok = True
        used: set[int] = set()
        for j in range(0, len(ordered), 2):
            a, b = ordered[j], ordered[j + 1]
            arc = []
            i = a
            while True:
                arc.append(c_prime[i])
                if i == b:
                    break
                i = (i + 1) % n
            if any(v in used for v in arc):
                ok = False
                break
            used.update(arc)
            paths.append(arc)
        if ok:
            return paths
    raise StageFailure("no rotation yields vertex-disjoint pairing paths")


def path_edge_list(g: Graph, path: list[int]) -> list[int]:
    return [g.edge_index(path[i], path[i + 1]) for i in range(len(path) - 1)]


@dataclass(frozen=True)
class ThreeBlock:
    vertices: tuple[int, int, int]
    edges: tuple[int, int, int]


def triangle_blocks(remainder: EdgeSet, g: Graph, seed: int = 0) -> list[ThreeBlock]:
    """Greedy maximal edge-disjoint triangle packing inside the remainder."""
    rng = random.Random(seed)
    avail = remainder.bits
    edge_order = list(remainder)
    rng.shuffle(edge_order)
    blocks: list[ThreeBlock] = []
    for e in edge_order:
        if not avail >> e & 1:
            continue
        u, v = g.edges[e]
        done = False
        for f in g.incident[u]:
            if not avail >> f & 1 or f == e:
                continue
            w = g.other_end(f, u)
            if w == v or not g.has_edge(v, w):
                continue
            h = g.edge_index(v, w)
            if not avail >> h & 1:
                continue
            avail &= ~(1 << e | 1 << f | 1 << h)
            blocks.append(ThreeBlock((u, v, w), (e, h, f)))
            done = True
            break
        if done:
            continue
    return blocks


def staged_euler_order(
    g: Graph,
    h_parts: dict[int, EdgeSet],
    three_blocks: list[ThreeBlock],
    q_components: list[EdgeSet],
    c_n: list[int],
) -> SubOrdering:
    """The stage loop: per cycle vertex, tour its assigned C4 union, sweep
    its untraversed triangles, tour its untraversed residual component, then
    step along the cycle edge.  The result is an Eulerian tour of the union."""
    n = len(c_n)
    union_bits = 0
    for es in h_parts.values():
        union_bits |= es.bits
    for tb in three_blocks:
        for e in tb.edges:
            union_bits |= 1 << e
    for q in q_components:
        union_bits |= q.bits
    union_bits |= cycle_edge_set(g, c_n).bits
    # parity check
    deg = [0] * g.n
    bits = union_bits
    while bits:
        low = bits & -bits
        e = low.bit_length() - 1
        bits ^= low
        u, v = g.edges[e]
        deg[u] += 1
        deg[v] += 1
    bad = [v for v in range(g.n) if deg[v] % 2]
    if bad:
        raise StageFailure(f"odd degree at vertices {bad} in staged union")

    def tour_of(es: EdgeSet, start: int) -> tuple[list[int], list[int]]:
        adj: dict[int, list[tuple[int, int]]] = {}
        for e in es:
            u, v = g.edges[e]
            adj.setdefault(u, []).append((e, v))
            adj.setdefault(v, []).append((e, u))
        if start not in adj:
            raise StageFailure(f"component unreachable from vertex {start}")
        walk, edges = _hierholzer(adj, start)
        if len(edges) != len(es):
            raise StageFailure("component is not connected-Eulerian")
        return walk, edges

    order: list[int] = []
    walk_all: list[int] = [c_n[0]]
    triangle_done = [False] * len(three_blocks)
    q_done = [False] * len(q_components)
    for i in range(n):
        v = c_n[i]
        hp = h_parts.get(v)
        if hp is not None and hp.bits:
            walk, edges = tour_of(hp, v)
            order.extend(edges)
            walk_all.extend(walk[1:])
        for ti, tb in enumerate(three_blocks):
            if triangle_done[ti] or v not in tb.vertices:
                continue
            a, b = [x for x in tb.vertices if x != v]
            order.extend(
                [g.edge_index(v, a), g.edge_index(a, b), g.edge_index(b, v)]
            )
            walk_all.extend([a, b, v])
            triangle_done[ti] = True
        for qi, q in enumerate(q_components):
            if q_done[qi]:
                continue
            qverts = touched_vertices(g, q)
            if v not in qverts:
                continue
            walk, edges = tour_of(q, v)
            order.extend(edges)
            walk_all.extend(walk[1:])
            q_done[qi] = True
        nxt = c_n[(i + 1) % n]
        order.append(g.edge_index(v, nxt))
        walk_all.append(nxt)
    if len(order) != union_bits.bit_count():
        raise StageFailure("stage loop missed edges (unreachable component)")
    return SubOrdering(tuple(order), (tuple(walk_all),))


def assemble_sigma(
    g: Graph,
    part_orders: list[SubOrdering],
    pi: SubOrdering,
    m_paths: list[list[int]],
    c_second: list[int] | None,
    c_third: list[int] | None,
) -> EdgeOrdering:
    """sigma = part orders, then the staged tour, then the pairing-path
    edges (incident pairs adjacent), then the interleaved tail of the two
    extra cycles.  Inputs must partition E(G)."""
    perm: list[int] = []
    certs: list[TourCertificate] = []
    for so in part_orders + [pi]:
        start = len(perm)
        perm.extend(so.edges)
        for walk in so.walks:
            certs.append(TourCertificate(start, len(perm), walk))
    for path in m_paths:
        perm.extend(path_edge_list(g, path))
    tail_a = path_edge_list(g, c_second + [c_second[0]]) if c_second else []
    tail_b = path_edge_list(g, c_third + [c_third[0]]) if c_third else []
    if tail_a and tail_b:
        for fa, fb in zip(tail_a, tail_b):
            perm.append(fa)
            perm.append(fb)
    else:
        perm.extend(tail_a or tail_b)
    if sorted(perm) != list(range(g.m)):
        have = set(perm)
        missing = [e for e in range(g.m) if e not in have]
        dupes = len(perm) - len(have)
        raise StageFailure(
            f"inputs do not partition E(G): missing {missing}, {dupes} duplicates"
        )
    return EdgeOrdering(tuple(perm), tuple(certs))


@dataclass
class SigmaStage:
    name: str
    succeeded: bool
    target: int
    achieved: int
    note: str = ""


@dataclass
class SigmaPipelineReport:
    stages: list[SigmaStage] = field(default_factory=list)
    ordering: EdgeOrdering | None = None
    gk_edges: EdgeSet | None = None
    notes: list[str] = field(default_factory=list)
    blocks: list[FourBlock] = field(default_factory=list)
    h_parts: dict[int, EdgeSet] = field(default_factory=dict)
    cycles: list[list[int]] = field(default_factory=list)

    def stage(self, name: str) -> SigmaStage | None:
        for s in self.stages:
            if s.name == name:
                return s
        return None

    def to_dict(self) -> dict:
        return {
            "stages": [
                {
                    "name": s.name,
                    "succeeded": s.succeeded,
                    "target": s.target,
                    "achieved": s.achieved,
                    "note": s.note,
                }
                for s in self.stages
            ],
            "ordering": list(self.ordering.perm) if self.ordering else None,
            "notes": self.notes,
        }


def export_sigma(ordering: EdgeOrdering) -> str:
    """One edge index per line; '#' lines carry the certified spans."""
    lines = [str(e) for e in ordering.perm]
    for c in ordering.certificates:
        lines.append(f"# span {c.start} {c.end} eulerian")
    return "\n".join(lines) + "\n"


def build_sigma(
    g: Graph,
    d: Decomposition,
    r: int = 0,
    seed: int = 0,
    policy: str = "best-effort",
) -> SigmaPipelineReport:
    """Run the whole ordering pipeline: Eulerian orders for the small parts
    and the staged construction for the spanning part, with every target
    clamped to what the instance supports."""
    if policy not in ("strict", "best-effort"):
        raise GraphError(f"unknown policy {policy!r}")
    if not d.covering:
        raise GraphError("decomposition must cover E(G)")
    report = SigmaPipelineReport()
    gk = d.parts[-1]
    report.gk_edges = gk
    gk_verts = touched_vertices(g, gk)
    if gk_verts != set(range(g.n)):
        report.notes.append("last part is not spanning; degraded handling")
    deg_gk = [0] * g.n
    for e in gk:
        u, v = g.edges[e]
        deg_gk[u] += 1
        deg_gk[v] += 1
    min_deg = min(deg_gk) if g.n else 0
    delta = max(min_deg / g.n if g.n else 0.0, 1e-9)

    part_orders = []
    for i in range(d.k - 1):
        so = eulerize_and_order(d.parts[i], g)
        part_orders.append(so)
        report.stages.append(
            SigmaStage(f"euler-part-{i}", True, len(d.parts[i]), len(so.edges))
        )

    k = d.k
    l_paper = math.ceil((26 * r + 26) / delta + 3 * k / 2)

    def fallback_trivial(reason: str):
        report.notes.append(f"trivial Euler pipeline: {reason}")
        so = eulerize_and_order(gk, g)
        report.stages.append(SigmaStage("gk-euler-trivial", True, len(gk), len(so.edges)))
        ordering = assemble_sigma(g, part_orders, so, [], None, None)
        report.ordering = ordering
        return report

    if g.n < 5 or min_deg < 2:
        return fallback_trivial("instance below dense-pipeline scale")

    factors_target = 4 * l_paper + 3
    factors = k4_factor_packing(g, factors_target, seed=seed, allowed=gk)
    report.stages.append(
        SigmaStage(
            "k4-factors",
            bool(factors),
            factors_target,
            len(factors),
            f"paper l={l_paper}",
        )
    )
    if not factors:
        if policy == "strict":
            report.notes.append("strict policy: aborted at K4 packing")
            return report
        return fallback_trivial("no K4 factor found")

    blocks = monogamous_c4_blocks(factors, g)
    report.stages.append(SigmaStage("c4-blocks", True, 3 * len(factors), len(blocks)))

    per_vertex = [0] * g.n
    for b in blocks:
        for v in b.cycle:
            per_vertex[v] += 1
    l_cap = min(per_vertex) if per_vertex else 0
    odd_gk = {v for v in range(g.n) if deg_gk[v] % 2}
    need_cycles = 2 if odd_gk else 1

    chosen = None
    for l in range(min(l_paper, l_cap), -1, -1):
        try:
            assigned = assign_blocks_hall(blocks, l, g)
        except HallFailure:
            continue
        h_parts = h_subgraph_edges(assigned, g)
        h_union = 0
        for es in h_parts.values():
            h_union |= es.bits
        remainder = EdgeSet(gk.bits & ~h_union, g.m)
        outside = EdgeSet(((1 << g.m) - 1) & ~remainder.bits, g.m)
        cycles = hamiltonian_cycles_disjoint(g, 4, seed=seed, forbidden=outside)
        if len(cycles) >= need_cycles:
            chosen = (l, assigned, h_parts, cycles)
            break
    report.stages.append(
        SigmaStage(
            "hall-assignment",
            chosen is not None,
            l_paper,
            chosen[0] if chosen else 0,
        )
    )
    if chosen is None:
        report.stages.append(SigmaStage("hamiltonian-cycles", False, 4, 0))
        if policy == "strict":
            report.notes.append("strict policy: aborted at Hamiltonian stage")
            return report
        return fallback_trivial("no Hamiltonian cycle even with empty H parts")

    l, assigned, h_parts, cycles = chosen
    report.blocks = blocks
    report.h_parts = h_parts
    report.cycles = cycles
    report.stages.append(SigmaStage("hamiltonian-cycles", True, 4, len(cycles)))
    c_n = cycles[0]
    c_prime = cycles[1] if len(cycles) > 1 else None
    c_second = cycles[2] if len(cycles) > 2 else None
    c_third = cycles[3] if len(cycles) > 3 else None

    if odd_gk:
        m_paths = odd_pairing_paths(c_prime, odd_gk, g)
    else:
        m_paths = []
    report.stages.append(
        SigmaStage("odd-pairing", True, len(odd_gk), sum(len(p) - 1 for p in m_paths))
    )

    removed = 0
    for es in h_parts.values():
        removed |= es.bits
    removed |= cycle_edge_set(g, c_n).bits
    for p in m_paths:
        for e in path_edge_list(g, p):
            removed |= 1 << e
    for cyc in (c_second, c_third):
        if cyc:
            removed |= cycle_edge_set(g, cyc).bits
    leftover = EdgeSet(gk.bits & ~removed, g.m)
    tblocks = triangle_blocks(leftover, g, seed=seed)
    report.stages.append(SigmaStage("triangle-blocks", True, len(leftover) // 3, len(tblocks)))

    tri_bits = 0
    for tb in tblocks:
        for e in tb.edges:
            tri_bits |= 1 << e
    gk2 = EdgeSet(leftover.bits & ~tri_bits, g.m)
    q_components = []
    remaining_bits = gk2.bits
    while remaining_bits:
        low = remaining_bits & -remaining_bits
        e0 = low.bit_length() - 1
        # flood one component
        comp = 1 << e0
        frontier = set(g.edges[e0])
        changed = True
        while changed:
            changed = False
            bb = remaining_bits & ~comp
            while bb:
                lo = bb & -bb
                e = lo.bit_length() - 1
                bb ^= lo
                u, v = g.edges[e]
                if u in frontier or v in frontier:
                    comp |= 1 << e
                    frontier.update((u, v))
                    changed = True
        q_components.append(EdgeSet(comp, g.m))
        remaining_bits &= ~comp
    report.stages.append(SigmaStage("residual-components", True, 0, len(q_components)))

    try:
        pi = staged_euler_order(g, h_parts, tblocks, q_components, c_n)
    except StageFailure as exc:
        report.stages.append(SigmaStage("staged-tour", False, 0, 0, str(exc)))
        if policy == "strict":
            return report
        return fallback_trivial(f"staged tour failed: {exc}")
    report.stages.append(SigmaStage("staged-tour", True, len(pi.edges), len(pi.edges)))

    ordering = assemble_sigma(g, part_orders, pi, m_paths, c_second, c_third)
    report.ordering = ordering
    return report
