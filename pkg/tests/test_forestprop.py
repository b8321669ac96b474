import pytest

from knesercut.forestprop import (
    check_lemma3,
    check_lemma4,
    rainbow_cycles,
    verify_forest_property_exhaustive,
)
from knesercut.graphs import (
    EdgeSet,
    GraphError,
    complete_graph,
    cycle_graph,
    trivial_decomposition,
    validate_decomposition,
)


def singleton_parts(g):
    return validate_decomposition(g, [EdgeSet.of([i], g.m) for i in range(g.m)])


class TestRainbowCycles:
    def test_k3_singletons(self):
        g = complete_graph(3)
        cycles = rainbow_cycles(g, singleton_parts(g))
        assert len(cycles) == 1
        cyc = cycles[0]
        assert cyc.validate(g, singleton_parts(g))
        assert len(cyc.edges) == 3

    def test_c4_opposite_pairs(self):
        g = cycle_graph(4)
        d = validate_decomposition(
            g, [EdgeSet.of([0, 2], 4), EdgeSet.of([1, 3], 4)]
        )
        assert rainbow_cycles(g, d) == []

    def test_k_leq_2_forced_empty(self):
        g = complete_graph(4)
        d = validate_decomposition(
            g, [EdgeSet.of([0, 1, 2], 6), EdgeSet.of([3, 4, 5], 6)]
        )
        assert rainbow_cycles(g, d) == []

    def test_k4_singletons(self):
        g = complete_graph(4)
        cycles = rainbow_cycles(g, singleton_parts(g))
        # 4 triangles plus 3 four-cycles
        assert len(cycles) == 7
        for cyc in cycles:
            assert cyc.validate(g, singleton_parts(g))

    def test_at_most_one_edge_per_part(self):
        g = complete_graph(4)
        d = validate_decomposition(
            g,
            [
                EdgeSet.of([0], 6),
                EdgeSet.of([1], 6),
                EdgeSet.of([2, 3, 4, 5], 6),
            ],
        )
        for cyc in rainbow_cycles(g, d):
            for part in d.parts:
                assert len(cyc.edges & part) <= 1


class TestLemma3:
    def test_vacuous_holds(self):
        g = complete_graph(4)
        d = validate_decomposition(
            g, [EdgeSet.of([0, 1, 2], 6), EdgeSet.of([3, 4, 5], 6)]
        )
        v = check_lemma3(g, d)
        assert v.holds and "vacuous" in v.detail

    def test_k3_singletons_fails(self):
        # sum over parts is 3, bound is 3*C(3,2)+3 = 12; (b) needs gap >= 7
        g = complete_graph(3)
        v = check_lemma3(g, singleton_parts(g))
        assert not v.holds
        assert v.witness is not None and len(v.witness.edges) == 3

    def test_big_last_part_passes_via_b(self):
        # k=3 on K_5: sizes (1, 1, 8); 8 - 1 >= 2*C(3,2)+1 = 7
        g = complete_graph(5)
        e01 = g.edge_index(0, 1)
        e02 = g.edge_index(0, 2)
        rest = g.full_edge_set() - EdgeSet.of([e01, e02], g.m)
        d = validate_decomposition(
            g, [EdgeSet.of([e01], g.m), EdgeSet.of([e02], g.m), rest]
        )
        assert rainbow_cycles(g, d)  # rainbow triangle 0-1-2 exists
        assert check_lemma3(g, d).holds


class TestLemma4:
    def test_bullet1_small_k(self):
        g = complete_graph(4)
        assert check_lemma4(g, trivial_decomposition(g)).holds
        d = validate_decomposition(
            g, [EdgeSet.of([0, 1, 2], 6), EdgeSet.of([3, 4, 5], 6)]
        )
        v = check_lemma4(g, d)
        assert v.holds and "bullet 1" in v.detail

    def test_bullet2_k3_gap(self):
        g = complete_graph(5)
        e01 = g.edge_index(0, 1)
        e02 = g.edge_index(0, 2)
        rest = g.full_edge_set() - EdgeSet.of([e01, e02], g.m)
        d = validate_decomposition(
            g, [EdgeSet.of([e01], g.m), EdgeSet.of([e02], g.m), rest]
        )
        v = check_lemma4(g, d)
        assert v.holds and "bullet 2" in v.detail

    def test_k3_singletons_fails(self):
        g = complete_graph(3)
        v = check_lemma4(g, singleton_parts(g))
        assert not v.holds


class TestExhaustiveVerifier:
    def test_k3_trivial(self):
        g = complete_graph(3)
        assert verify_forest_property_exhaustive(g, trivial_decomposition(g))

    def test_k3_singletons(self):
        # the sufficient conditions fail here, but the property itself holds
        g = complete_graph(3)
        assert verify_forest_property_exhaustive(g, singleton_parts(g))

    def test_c4_two_parts(self):
        g = cycle_graph(4)
        d = validate_decomposition(
            g, [EdgeSet.of([0, 2], 4), EdgeSet.of([1, 3], 4)]
        )
        assert verify_forest_property_exhaustive(g, d)

    def test_budget_guard(self):
        g = complete_graph(5)
        with pytest.raises(GraphError, match="budget"):
            verify_forest_property_exhaustive(g, trivial_decomposition(g))

    def test_lemma3_soundness(self):
        # check_lemma3 holds must imply the exhaustive verdict on instances
        # small enough to run both
        g = complete_graph(3)
        cases = [
            trivial_decomposition(g),
            validate_decomposition(g, [EdgeSet.of([0], 3), EdgeSet.of([1, 2], 3)]),
        ]
        g4 = cycle_graph(4)
        cases.append(
            validate_decomposition(g4, [EdgeSet.of([0, 2], 4), EdgeSet.of([1, 3], 4)])
        )
        for d in cases:
            host = g if d.parts[0].m == 3 else g4
            if check_lemma3(host, d).holds:
                assert verify_forest_property_exhaustive(host, d)
