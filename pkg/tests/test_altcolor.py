import pytest

from knesercut.altcolor import (
    EdgeOrdering,
    MonochromeOracle,
    TourCertificate,
    count_consecutive_paths,
    ex_alt_fixed,
    ex_alt_min,
    export_coloring,
    is_valid_alt,
    realize_coloring,
    validate_tour_certificate,
    verify_euler_degree_bound,
)
from knesercut.cuts import turan_ex
from knesercut.graphs import (
    EdgeSet,
    FamilyDescriptor,
    GraphError,
    complete_graph,
    cycle_graph,
    path_graph,
    trivial_decomposition,
    validate_decomposition,
)


class TestOrdering:
    def test_permutation_enforced(self):
        with pytest.raises(GraphError):
            EdgeOrdering((0, 0, 1))
        assert EdgeOrdering.identity(3).perm == (0, 1, 2)

    def test_position(self):
        sigma = EdgeOrdering((2, 0, 1))
        assert sigma.position(0) == 1


class TestRealize:
    def test_alternation(self):
        sigma = EdgeOrdering.identity(4)
        c = realize_coloring(sigma, EdgeSet.of([0, 2, 3], 4))
        assert list(c.red) == [0, 3]
        assert list(c.blue) == [2]
        assert c.length == 3

    def test_export(self):
        sigma = EdgeOrdering.identity(3)
        c = realize_coloring(sigma, EdgeSet.of([0, 2], 3))
        assert export_coloring(sigma, c) == "RNB"

    def test_flip_swaps_sides(self):
        sigma = EdgeOrdering.identity(3)
        c = realize_coloring(sigma, EdgeSet.of([0, 1], 3))
        f = c.flipped()
        assert f.red.bits == c.blue.bits and f.blue.bits == c.red.bits


class TestValidity:
    def test_parity_symmetric(self):
        g = complete_graph(4)
        d = trivial_decomposition(g)
        f = FamilyDescriptor.trees(3)
        sigma = EdgeOrdering.identity(g.m)
        for bits in range(1 << g.m):
            c = realize_coloring(sigma, EdgeSet(bits, g.m))
            assert is_valid_alt(g, d, f, c) == is_valid_alt(g, d, f, c.flipped())

    def test_empty_always_valid(self):
        g = complete_graph(3)
        c = realize_coloring(EdgeOrdering.identity(3), EdgeSet.empty(3))
        assert is_valid_alt(g, trivial_decomposition(g), FamilyDescriptor.trees(2), c)


class TestExAltFixed:
    def test_k3_spanning_trees(self):
        # color all 3 edges: 2 red + 1 blue, red pair is a spanning tree; so
        # drop to length 2: one red one blue single edges, both valid
        g = complete_graph(3)
        d = trivial_decomposition(g)
        res = ex_alt_fixed(g, d, FamilyDescriptor.trees(3), EdgeOrdering.identity(3))
        assert res.exact and res.value == 2

    def test_k3_edges_family(self):
        # forbidding single edges (trees on 2 vertices) forces everything
        # neutral: ex_alt = 0
        g = complete_graph(3)
        d = trivial_decomposition(g)
        res = ex_alt_fixed(g, d, FamilyDescriptor.trees(2), EdgeOrdering.identity(3))
        assert res.exact and res.value == 0

    def test_reversal_invariance(self):
        g = complete_graph(4)
        d = trivial_decomposition(g)
        f = FamilyDescriptor.trees(4)
        sigma = EdgeOrdering.identity(g.m)
        rev = EdgeOrdering(tuple(reversed(sigma.perm)))
        a = ex_alt_fixed(g, d, f, sigma)
        b = ex_alt_fixed(g, d, f, rev)
        assert a.value == b.value

    def test_eq1_bounds(self):
        # ex <= ex_alt_fixed <= 2 ex for every ordering of C_4
        g = cycle_graph(4)
        d = trivial_decomposition(g)
        f = FamilyDescriptor.trees(4)
        ex = turan_ex(g, d, f).value
        import itertools

        for perm in itertools.permutations(range(4)):
            val = ex_alt_fixed(g, d, f, EdgeOrdering(perm)).value
            assert ex <= val <= 2 * ex

    def test_certificate_is_valid(self):
        g = complete_graph(4)
        d = trivial_decomposition(g)
        f = FamilyDescriptor.trees(4)
        sigma = EdgeOrdering.identity(g.m)
        res = ex_alt_fixed(g, d, f, sigma)
        c = realize_coloring(sigma, res.certificate)
        assert is_valid_alt(g, d, f, c)
        assert c.length == res.value


class TestExAltMin:
    def test_k3_exhaustive(self):
        g = complete_graph(3)
        d = trivial_decomposition(g)
        res = ex_alt_min(g, d, FamilyDescriptor.trees(3), mode="exhaustive")
        assert res.exact and res.value == 2

    def test_threshold_guard(self):
        g = complete_graph(5)
        d = trivial_decomposition(g)
        with pytest.raises(GraphError, match="threshold"):
            ex_alt_min(g, d, FamilyDescriptor.trees(5), mode="exhaustive")

    def test_modes_upper_bound_exhaustive(self):
        g = complete_graph(4)
        d = validate_decomposition(
            g, [EdgeSet.of([0, 1], 6), EdgeSet.of([2, 3, 4, 5], 6)]
        )
        f = FamilyDescriptor.trees(4)
        exact = ex_alt_min(g, d, f, mode="exhaustive").value
        block = ex_alt_min(g, d, f, mode="block-structured").value
        samp = ex_alt_min(g, d, f, mode="sampled", count=16, seed=1).value
        assert block >= exact
        assert samp >= exact

    def test_sampled_deterministic(self):
        g = complete_graph(4)
        d = trivial_decomposition(g)
        f = FamilyDescriptor.trees(4)
        a = ex_alt_min(g, d, f, mode="sampled", count=8, seed=7)
        b = ex_alt_min(g, d, f, mode="sampled", count=8, seed=7)
        assert a.value == b.value


class TestConsecutivePaths:
    def test_path_graph_center(self):
        g = path_graph(3)
        sigma = EdgeOrdering.identity(2)
        res = count_consecutive_paths(sigma, g, 1)
        assert res.adjacent_pairs == 1 and res.edge_disjoint == 1

    def test_no_pairs(self):
        g = path_graph(4)
        sigma = EdgeOrdering((0, 2, 1))
        assert count_consecutive_paths(sigma, g, 1).adjacent_pairs == 0


class TestTourCertificates:
    def test_triangle_tour(self):
        g = complete_graph(3)
        # tour 0-1-2-0 visits edges (0,1), (1,2), (0,2) -> indices 0, 2, 1
        sigma = EdgeOrdering((0, 2, 1), (TourCertificate(0, 3, (0, 1, 2, 0)),))
        assert validate_tour_certificate(sigma, sigma.certificates[0], g)

    def test_open_walk_rejected(self):
        g = complete_graph(3)
        sigma = EdgeOrdering((0, 2, 1), (TourCertificate(0, 3, (0, 1, 2)),))
        assert not validate_tour_certificate(sigma, sigma.certificates[0], g)

    def test_wrong_span_order_rejected(self):
        g = complete_graph(3)
        sigma = EdgeOrdering((0, 1, 2), (TourCertificate(0, 3, (0, 1, 2, 0)),))
        assert not validate_tour_certificate(sigma, sigma.certificates[0], g)

    def test_degree_bound_triangle(self):
        g = complete_graph(3)
        sigma = EdgeOrdering((0, 2, 1), (TourCertificate(0, 3, (0, 1, 2, 0)),))
        for bits in range(1 << 3):
            c = realize_coloring(sigma, EdgeSet(bits, 3))
            assert verify_euler_degree_bound(sigma, g, g.full_edge_set(), c)

    def test_degree_bound_needs_certificate(self):
        g = complete_graph(3)
        sigma = EdgeOrdering.identity(3)
        c = realize_coloring(sigma, EdgeSet.empty(3))
        with pytest.raises(GraphError, match="certificate"):
            verify_euler_degree_bound(sigma, g, g.full_edge_set(), c)


class TestOracle:
    def test_cache_consistency(self):
        g = complete_graph(4)
        d = trivial_decomposition(g)
        oracle = MonochromeOracle(g, d, FamilyDescriptor.trees(4))
        bits = g.full_edge_set().bits
        assert oracle.forbidden(bits)
        assert oracle.forbidden(bits)  # cached path
        assert not oracle.forbidden(0)
