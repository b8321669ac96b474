"""Alternating 2-colorings along an edge ordering, the fixed-ordering and
minimized alternating Turan numbers, and the consecutive-path / Eulerian
degree-bound checkers."""

from __future__ import annotations

import itertools
import random
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
from .subtrees import contains_G_tree, enumerate_family


@dataclass(frozen=True)
class TourCertificate:
    """Records that the ordering span [start, end) is induced by an Eulerian
    tour; `tour_vertices` is the tour's vertex walk in the host graph."""

    start: int
    end: int
    tour_vertices: tuple[int, ...]
    part_index: int | None = None


@dataclass(frozen=True)
class EdgeOrdering:
    perm: tuple[int, ...]
    certificates: tuple[TourCertificate, ...] = ()

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise GraphError("ordering is not a permutation of edge indices")

    @property
    def m(self) -> int:
        return len(self.perm)

    def position(self, edge: int) -> int:
        return self.perm.index(edge)

    @classmethod
    def identity(cls, m: int) -> "EdgeOrdering":
        return cls(tuple(range(m)))


RED = "red"
BLUE = "blue"


@dataclass(frozen=True)
class AlternatingColoring:
    colored: EdgeSet
    parity: str  # color of the first colored edge in sigma order
    red: EdgeSet
    blue: EdgeSet

    @property
    def length(self) -> int:
        return len(self.colored)

    def flipped(self) -> "AlternatingColoring":
        other = BLUE if self.parity == RED else RED
        return AlternatingColoring(self.colored, other, self.blue, self.red)


def realize_coloring(
    sigma: EdgeOrdering, colored: EdgeSet, parity: str = RED
) -> AlternatingColoring:
    """Derive the red/blue split by alternating along sigma restricted to
    the colored edges, starting with `parity`."""
    if parity not in (RED, BLUE):
        raise GraphError("parity must be 'red' or 'blue'")
    red_bits = 0
    blue_bits = 0
    next_red = parity == RED
    for e in sigma.perm:
        if e in colored:
            if next_red:
                red_bits |= 1 << e
            else:
                blue_bits |= 1 << e
            next_red = not next_red
    m = colored.m
    return AlternatingColoring(colored, parity, EdgeSet(red_bits, m), EdgeSet(blue_bits, m))


def export_coloring(sigma: EdgeOrdering, coloring: AlternatingColoring) -> str:
    """Per-edge letters R/B/N in sigma order."""
    out = []
    for e in sigma.perm:
        if e in coloring.red:
            out.append("R")
        elif e in coloring.blue:
            out.append("B")
        else:
            out.append("N")
    return "".join(out)


class MonochromeOracle:
    """Caches, per edge mask, whether the spanning subgraph on that mask
    contains a decomposition-meeting family member."""

    def __init__(self, g: Graph, d: Decomposition, f: FamilyDescriptor):
        self.g = g
        self.d = d
        self.f = f
        self._cache: dict[int, bool] = {}

    def forbidden(self, bits: int) -> bool:
        hit = self._cache.get(bits)
        if hit is not None:
            return hit
        es = EdgeSet(bits, self.g.m)
        if self.f.kind == "trees":
            res = contains_G_tree(self.g, es, self.d, self.f.param)
        else:
            res = False
            for member in enumerate_family(self.g, self.f, within=es):
                if is_G_subgraph(member, self.d):
                    res = True
                    break
        self._cache[bits] = res
        return res


def is_valid_alt(
    g: Graph,
    d: Decomposition,
    f: FamilyDescriptor,
    coloring: AlternatingColoring,
    oracle: MonochromeOracle | None = None,
) -> bool:
    """True iff neither the red nor the blue subgraph contains a
    decomposition-meeting family member."""
    if oracle is None:
        oracle = MonochromeOracle(g, d, f)
    return not oracle.forbidden(coloring.red.bits) and not oracle.forbidden(
        coloring.blue.bits
    )


@dataclass(frozen=True)
class ExAltResult:
    value: int
    exact: bool
    certificate: EdgeSet | None = None  # colored set of a maximum valid coloring


def _alternate_split(perm, colored_bits: int) -> tuple[int, int]:
    red = 0
    blue = 0
    next_red = True
    for e in perm:
        if colored_bits >> e & 1:
            if next_red:
                red |= 1 << e
            else:
                blue |= 1 << e
            next_red = not next_red
    return red, blue


def ex_alt_fixed(
    g: Graph,
    d: Decomposition,
    f: FamilyDescriptor,
    sigma: EdgeOrdering,
    budget_ms: float = 60_000.0,
    oracle: MonochromeOracle | None = None,
) -> ExAltResult:
    """Maximum length of a valid alternating coloring along sigma.  Neutral
    sets are enumerated smallest-first; validity is parity-symmetric, so a
    single parity suffices.  Ties resolve to the lexicographically least
    colored set."""
    if oracle is None:
        oracle = MonochromeOracle(g, d, f)
    m = g.m
    full = (1 << m) - 1
    deadline = time.monotonic() + budget_ms / 1000.0
    desc = tuple(range(m - 1, -1, -1))
    for s in range(m + 1):
        for neutral_combo in itertools.combinations(desc, s):
            neutral = 0
            for i in neutral_combo:
                neutral |= 1 << i
            colored = full & ~neutral
            red, blue = _alternate_split(sigma.perm, colored)
            if not oracle.forbidden(red) and not oracle.forbidden(blue):
                return ExAltResult(m - s, True, EdgeSet(colored, m))
            if time.monotonic() > deadline:
                # empty coloring is always valid: certified trivial bound
                return ExAltResult(0, False, EdgeSet(0, m))
    return ExAltResult(0, True, EdgeSet(0, m))


def _sigma_reaches(perm, oracle: MonochromeOracle, m: int, min_len: int) -> bool:
    """Whether some valid coloring along perm has length >= min_len."""
    if min_len <= 0:
        return True
    full = (1 << m) - 1
    for s in range(m - min_len + 1):
        for neutral_combo in itertools.combinations(range(m), s):
            neutral = 0
            for i in neutral_combo:
                neutral |= 1 << i
            colored = full & ~neutral
            red, blue = _alternate_split(perm, colored)
            if not oracle.forbidden(red) and not oracle.forbidden(blue):
                return True
    return False


def _sigma_value(perm, oracle: MonochromeOracle, m: int) -> int:
    full = (1 << m) - 1
    for s in range(m + 1):
        for neutral_combo in itertools.combinations(range(m), s):
            neutral = 0
            for i in neutral_combo:
                neutral |= 1 << i
            colored = full & ~neutral
            red, blue = _alternate_split(perm, colored)
            if not oracle.forbidden(red) and not oracle.forbidden(blue):
                return m - s
    return 0


@dataclass(frozen=True)
class ExAltMinResult:
    value: int
    mode: str
    exact: bool  # True only for the exhaustive mode


EXHAUSTIVE_THRESHOLD = 8


def _block_orderings(d: Decomposition, limit: int):
    """All orderings with each part's edges consecutive, up to `limit`."""
    part_lists = [tuple(p) for p in d.parts]
    count = 1
    for p in part_lists:
        count *= _factorial(len(p))
    count *= _factorial(len(part_lists))
    if count > limit:
        return None
    perms = []
    for part_order in itertools.permutations(range(len(part_lists))):
        pools = [list(itertools.permutations(part_lists[i])) for i in part_order]
        for combo in itertools.product(*pools):
            perm = tuple(e for block in combo for e in block)
            perms.append(perm)
    return perms


def _factorial(x: int) -> int:
    out = 1
    for i in range(2, x + 1):
        out *= i
    return out


def ex_alt_min(
    g: Graph,
    d: Decomposition,
    f: FamilyDescriptor,
    mode: str = "exhaustive",
    count: int = 64,
    seed: int = 0,
    budget_ms: float = 300_000.0,
    threshold: int = EXHAUSTIVE_THRESHOLD,
    block_limit: int = 100_000,
) -> ExAltMinResult:
    """Minimum over orderings of the per-ordering maximum valid length.

    exhaustive: all m! orderings (m <= threshold); block-structured: all
    orderings with parts consecutive (falls back to sampling those beyond
    `block_limit`); sampled: `count` seeded random orderings.  Non-exhaustive
    results are upper bounds on the true minimum."""
    m = g.m
    oracle = MonochromeOracle(g, d, f)
    if m == 0:
        return ExAltMinResult(0, mode, True)

    if mode == "exhaustive":
        if m > threshold:
            raise GraphError(
                f"m={m} exceeds exhaustive threshold {threshold};"
                " use block-structured or sampled mode"
            )
        perms = itertools.permutations(range(m))
    elif mode == "block-structured":
        block = _block_orderings(d, block_limit)
        if block is None:
            rng = random.Random(seed)
            block = []
            for _ in range(count):
                order = list(range(d.k))
                rng.shuffle(order)
                perm = []
                for i in order:
                    part = list(d.parts[i])
                    rng.shuffle(part)
                    perm.extend(part)
                block.append(tuple(perm))
        perms = block
    elif mode == "sampled":
        rng = random.Random(seed)
        sampled = []
        for _ in range(count):
            perm = list(range(m))
            rng.shuffle(perm)
            sampled.append(tuple(perm))
        perms = sampled
    else:
        raise GraphError(f"unknown mode {mode!r}")

    deadline = time.monotonic() + budget_ms / 1000.0
    best = m + 1
    for perm in perms:
        if best == 0:
            break
        if _sigma_reaches(perm, oracle, m, best):
            continue  # this ordering cannot lower the minimum
        best = _sigma_value(perm, oracle, m)
        if time.monotonic() > deadline:
            return ExAltMinResult(min(best, m), mode, False)
    if best > m:
        best = _sigma_value(tuple(range(m)), oracle, m)
    return ExAltMinResult(best, mode, mode == "exhaustive")


@dataclass(frozen=True)
class ConsecutivePathCount:
    adjacent_pairs: int      # positions where sigma[i], sigma[i+1] both touch v
    edge_disjoint: int       # greedy left-to-right edge-disjoint selection


def count_consecutive_paths(sigma: EdgeOrdering, g: Graph, v: int) -> ConsecutivePathCount:
    total = 0
    disjoint = 0
    last_used = -2
    for i in range(len(sigma.perm) - 1):
        e1, e2 = sigma.perm[i], sigma.perm[i + 1]
        if v in g.edges[e1] and v in g.edges[e2]:
            total += 1
            if i > last_used:
                disjoint += 1
                last_used = i + 1
    return ConsecutivePathCount(total, disjoint)


def validate_tour_certificate(
    sigma: EdgeOrdering, cert: TourCertificate, host: Graph
) -> bool:
    """The tour walk must be closed, cover each span edge once, and list the
    span's edges in traversal order (span edges are a subsequence of the
    tour's edge sequence)."""
    walk = cert.tour_vertices
    if len(walk) < 2 or walk[0] != walk[-1]:
        return False
    tour_edges = []
    for a, b in zip(walk, walk[1:]):
        if not host.has_edge(a, b):
            return False
        tour_edges.append(host.edge_index(a, b))
    if len(set(tour_edges)) != len(tour_edges):
        return False
    span = sigma.perm[cert.start : cert.end]
    it = iter(tour_edges)
    for e in span:
        for t in it:
            if t == e:
                break
        else:
            return False
    return True


def verify_euler_degree_bound(
    sigma: EdgeOrdering,
    host: Graph,
    g_sub: EdgeSet,
    coloring: AlternatingColoring,
) -> bool:
    """With sigma induced by an Eulerian tour of `host`, each vertex sees at
    most (deg_host(v)+2)/2 red and blue edges inside g_sub."""
    cert = None
    for c in sigma.certificates:
        span_bits = 0
        for e in sigma.perm[c.start : c.end]:
            span_bits |= 1 << e
        if not g_sub.bits & ~span_bits:
            cert = c
            break
    if cert is None:
        raise GraphError("ordering carries no Eulerian tour certificate covering g_sub")
    for v in range(host.n):
        deg_host = host.degree(v)
        red = sum(1 for e in coloring.red if e in g_sub and v in host.edges[e])
        blue = sum(1 for e in coloring.blue if e in g_sub and v in host.edges[e])
        if 2 * red > deg_host + 2 or 2 * blue > deg_host + 2:
            return False
    return True
