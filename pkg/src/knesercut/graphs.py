"""Core graph, edge-set, decomposition, and family-descriptor types.

Edges carry dense, stable indices (file order); every other module refers
to edges only through those indices, so witnesses stay comparable across
reports.  All values are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class GraphError(Exception):
    """Invalid graph, edge set, or decomposition input."""


class ParseError(GraphError):
    """Malformed input document; message names the offending line."""


@dataclass(frozen=True)
class EdgeSet:
    """Subset of the edge indices 0..m-1 of a host graph, stored as a bitmask."""

    bits: int
    m: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.m:
            raise GraphError("edge index out of range for host graph")

    @classmethod
    def of(cls, indices, m: int) -> "EdgeSet":
        bits = 0
        for i in indices:
            if not 0 <= i < m:
                raise GraphError(f"edge index {i} out of range 0..{m - 1}")
            bits |= 1 << i
        return cls(bits, m)

    @classmethod
    def empty(cls, m: int) -> "EdgeSet":
        return cls(0, m)

    @classmethod
    def full(cls, m: int) -> "EdgeSet":
        return cls((1 << m) - 1, m)

    def __iter__(self):
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, i: int) -> bool:
        return 0 <= i < self.m and bool(self.bits >> i & 1)

    def __or__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.bits | other.bits, self.m)

    def __and__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.bits & other.bits, self.m)

    def __sub__(self, other: "EdgeSet") -> "EdgeSet":
        return EdgeSet(self.bits & ~other.bits, self.m)

    def isdisjoint(self, other: "EdgeSet") -> bool:
        return not self.bits & other.bits

    def issubset(self, other: "EdgeSet") -> bool:
        return not self.bits & ~other.bits

    def indices(self) -> tuple[int, ...]:
        return tuple(self)


class Graph:
    """Simple undirected graph with stable vertex indices 0..n-1 and edge
    indices 0..m-1.  No self-loops, no duplicate edges; isolated vertices
    are allowed."""

    def __init__(self, n: int, edges):
        if n < 0:
            raise GraphError("negative vertex count")
        self.n = n
        self.edges: list[tuple[int, int]] = []
        self.incident: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for idx, (u, v) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {idx}: vertex out of range")
            if u == v:
                raise GraphError(f"edge {idx}: self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"edge {idx}: duplicate edge {key}")
            seen.add(key)
            self.edges.append(key)
            self.incident[u].append(idx)
            self.incident[v].append(idx)
        self.m = len(self.edges)
        self._index = {e: i for i, e in enumerate(self.edges)}
        # per-vertex incident-edge bitmask
        self.incident_bits = [0] * n
        for i, (u, v) in enumerate(self.edges):
            self.incident_bits[u] |= 1 << i
            self.incident_bits[v] |= 1 << i

    def edge_index(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        return self._index[key]

    def has_edge(self, u: int, v: int) -> bool:
        key = (u, v) if u < v else (v, u)
        return key in self._index

    def degree(self, v: int) -> int:
        return len(self.incident[v])

    def edge_set(self, indices) -> EdgeSet:
        return EdgeSet.of(indices, self.m)

    def full_edge_set(self) -> EdgeSet:
        return EdgeSet.full(self.m)

    def empty_edge_set(self) -> EdgeSet:
        return EdgeSet.empty(self.m)

    def other_end(self, edge_idx: int, v: int) -> int:
        u, w = self.edges[edge_idx]
        return w if v == u else u

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def parse_graph(text: str) -> Graph:
    """Parse an edge-list document: first line "n m", then m lines "u v".

    Lines starting with '#' and blank lines are ignored.  Errors name the
    1-based line in the document.
    """
    lines = text.splitlines()
    header = None
    header_line = 0
    edges = []
    edge_lines = []
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if header is None:
            parts = stripped.split()
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected header 'n m'")
            try:
                header = (int(parts[0]), int(parts[1]))
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer header") from None
            header_line = lineno
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected edge 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer vertex") from None
        edges.append((u, v))
        edge_lines.append(lineno)
    if header is None:
        raise ParseError("line 1: missing header 'n m'")
    n, m = header
    if len(edges) != m:
        raise ParseError(
            f"line {header_line}: header declares {m} edges, found {len(edges)}"
        )
    seen = set()
    for (u, v), lineno in zip(edges, edge_lines):
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"line {lineno}: vertex out of range 0..{n - 1}")
        if u == v:
            raise ParseError(f"line {lineno}: self-loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise ParseError(f"line {lineno}: duplicate edge {u} {v}")
        seen.add(key)
    return Graph(n, edges)


@dataclass(frozen=True)
class Decomposition:
    """Ordered partition of (a subset of) E(G) into nonempty edge-disjoint
    parts, sizes nondecreasing; ties keep original part position."""

    parts: tuple[EdgeSet, ...]
    covering: bool = True

    @property
    def k(self) -> int:
        return len(self.parts)


class DecompositionError(GraphError):
    pass


def validate_decomposition(g: Graph, raw_parts, covering: bool = True) -> Decomposition:
    """Validate and normalize a decomposition: parts nonempty, pairwise
    disjoint, sorted nondecreasing by size (original order breaks ties);
    when `covering`, the union must be all of E(g)."""
    parts = list(raw_parts)
    if not parts:
        raise DecompositionError("decomposition needs at least one part")
    union = 0
    for i, p in enumerate(parts):
        if not isinstance(p, EdgeSet):
            p = g.edge_set(p)
            parts[i] = p
        if p.m != g.m:
            raise DecompositionError(f"part {i}: wrong host graph")
        if not p.bits:
            raise DecompositionError(f"part {i}: empty part")
        if union & p.bits:
            shared = union & p.bits
            raise DecompositionError(
                f"part {i}: overlaps an earlier part on edge "
                f"{(shared & -shared).bit_length() - 1}"
            )
        union |= p.bits
    if covering and union != (1 << g.m) - 1:
        missing = ~union & ((1 << g.m) - 1)
        raise DecompositionError(
            f"covering demanded but edge {(missing & -missing).bit_length() - 1}"
            " is in no part"
        )
    order = sorted(range(len(parts)), key=lambda i: (len(parts[i]), i))
    return Decomposition(tuple(parts[i] for i in order), covering)


def parse_decomposition(text: str, g: Graph, covering: bool = True) -> Decomposition:
    """Parse a decomposition file: one line per part, space-separated edge
    indices; '#' comment lines ignored."""
    parts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            idxs = [int(tok) for tok in stripped.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer edge index") from None
        try:
            parts.append(g.edge_set(idxs))
        except GraphError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    return validate_decomposition(g, parts, covering)


@dataclass(frozen=True)
class FamilyDescriptor:
    """Which subgraph family the Kneser vertices are drawn from."""

    kind: str  # "trees" | "matching" | "path" | "explicit"
    param: int = 0
    members: tuple[EdgeSet, ...] = field(default=())

    @classmethod
    def trees(cls, t: int) -> "FamilyDescriptor":
        if t < 2:
            raise GraphError("tree family needs t >= 2")
        return cls("trees", t)

    @classmethod
    def matching(cls, k: int) -> "FamilyDescriptor":
        if k < 1:
            raise GraphError("matching family needs k >= 1")
        return cls("matching", k)

    @classmethod
    def path(cls, d: int) -> "FamilyDescriptor":
        if d < 1:
            raise GraphError("path family needs d >= 1")
        return cls("path", d)

    @classmethod
    def explicit(cls, members) -> "FamilyDescriptor":
        return cls("explicit", 0, tuple(members))

    def __str__(self):
        if self.kind == "trees":
            return f"trees({self.param})"
        if self.kind == "matching":
            return f"matching({self.param})"
        if self.kind == "path":
            return f"path({self.param})"
        return f"explicit({len(self.members)})"


def components(g: Graph, h: EdgeSet) -> list[list[int]]:
    """Connected components of the spanning subgraph (V(g), h), singleton
    components of isolated vertices included.  Components are sorted by
    their smallest vertex; vertices inside a component are sorted."""
    if h.m != g.m:
        raise GraphError("edge set belongs to a different host graph")
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in h:
        u, v = g.edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda c: c[0])


def is_G_subgraph(h: EdgeSet, d: Decomposition) -> bool:
    """True iff h has at least one edge in every part of d."""
    return all(h.bits & p.bits for p in d.parts)


def is_acyclic(g: Graph, h: EdgeSet) -> bool:
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in h:
        u, v = g.edges[i]
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[rv] = ru
    return True


def touched_vertices(g: Graph, h: EdgeSet) -> set[int]:
    verts = set()
    for i in h:
        u, v = g.edges[i]
        verts.add(u)
        verts.add(v)
    return verts


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def matching_graph(k: int) -> Graph:
    """k disjoint edges on 2k vertices (edge i joins 2i and 2i+1)."""
    return Graph(2 * k, [(2 * i, 2 * i + 1) for i in range(k)])


def trivial_decomposition(g: Graph) -> Decomposition:
    return validate_decomposition(g, [g.full_edge_set()], covering=True)
