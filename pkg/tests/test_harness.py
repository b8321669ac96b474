import json

import pytest

from knesercut.cli import main
from knesercut.graphs import GraphError, complete_graph, components, trivial_decomposition
from knesercut.harness import (
    campaign,
    families_crosscheck,
    random_decomposition,
    random_dense_graph,
    verify_theorem,
)


class TestRandomDenseGraph:
    def test_floor_respected_and_connected(self):
        g = random_dense_graph(10, 0.5, seed=3)
        assert min(g.degree(v) for v in range(10)) >= 5
        assert len(components(g, g.full_edge_set())) == 1

    def test_deterministic(self):
        a = random_dense_graph(9, 0.6, seed=4)
        b = random_dense_graph(9, 0.6, seed=4)
        assert a.edges == b.edges

    def test_near_one_forces_complete(self):
        g = random_dense_graph(8, 0.875, seed=0)  # floor 7 = n-1
        assert g.m == 28

    def test_infeasible_floor(self):
        with pytest.raises(GraphError):
            random_dense_graph(4, 0.99, seed=0)
        with pytest.raises(GraphError):
            random_dense_graph(5, 1.5, seed=0)


class TestRandomDecomposition:
    def test_k1_is_trivial(self):
        g = complete_graph(5)
        assert random_decomposition(g, 1).k == 1

    def test_k3_structure(self):
        g = complete_graph(6)
        d = random_decomposition(g, 3, seed=2)
        assert d.k == 3 and d.covering
        assert len(d.parts[-1]) >= len(d.parts[0])


class TestVerifyTheorem:
    def test_k3_counterexample(self):
        g = complete_graph(3)
        rec = verify_theorem(g, trivial_decomposition(g), 0)
        assert rec.chi.exact and rec.chi.value == 1
        assert rec.cut == 2 and rec.cut_exact
        assert rec.equal == "no"

    def test_k4_counterexample(self):
        g = complete_graph(4)
        rec = verify_theorem(g, trivial_decomposition(g), 0)
        assert rec.chi.value == 2 and rec.cut == 3
        assert rec.equal == "no"

    def test_greedy_respects_cut(self):
        g = complete_graph(5)
        rec = verify_theorem(g, trivial_decomposition(g), 0)
        assert rec.greedy_colors is not None
        assert rec.greedy_colors <= rec.cut

    def test_r_range(self):
        g = complete_graph(3)
        with pytest.raises(GraphError):
            verify_theorem(g, trivial_decomposition(g), 2)

    def test_record_serializes(self):
        g = complete_graph(4)
        rec = verify_theorem(g, trivial_decomposition(g), 0)
        blob = json.dumps(rec.to_dict())
        assert '"equal": "no"' in blob


class TestFamilies:
    def test_kneser_4_2(self):
        report = families_crosscheck(["kneser(4,2)"])
        assert report[0]["match"] and report[0]["chi_lower"] == 2

    def test_unrecognized(self):
        report = families_crosscheck(["frobnicate(1,2)"])
        assert "error" in report[0]


class TestCampaign:
    def test_grid_and_resume(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text(
            '[campaign]\nn = [5]\nr = [0]\ndelta = [0.6]\nseeds = [0, 1]\n'
            'budget_ms = 20000\n'
        )
        out = tmp_path / "report.jsonl"
        records = campaign(str(cfg), str(out))
        assert len(records) == 2
        for rec in records:
            assert "result" in rec
            assert rec["result"]["greedy_colors"] <= rec["result"]["cut"]
        # resumable: second run adds nothing
        again = campaign(str(cfg), str(out))
        assert again == []
        lines = [json.loads(x) for x in out.read_text().splitlines()]
        assert len(lines) == 2

    def test_malformed_config(self, tmp_path):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("[campaign\nn = [5]\n")
        with pytest.raises(GraphError, match="malformed"):
            campaign(str(cfg))

    def test_infeasible_instance_recorded(self, tmp_path):
        cfg = tmp_path / "c.toml"
        cfg.write_text("[campaign]\nn = [5]\nr = [4]\ndelta = [0.6]\nseeds = [0]\n")
        records = campaign(str(cfg))
        assert len(records) == 1 and "error" in records[0]


@pytest.fixture
def k4_file(tmp_path):
    g = complete_graph(4)
    path = tmp_path / "k4.txt"
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


class TestCli:
    def test_kneser_chi(self, k4_file, capsys):
        assert main(["kneser-chi", k4_file, "-f", "trees:4"]) == 0
        assert "chi = 2" in capsys.readouterr().out

    def test_cut_balanced(self, k4_file, capsys):
        assert main(["cut", k4_file, "-r", "1"]) == 0
        assert "cut_1 = 3" in capsys.readouterr().out

    def test_cut_decomp_json(self, k4_file, capsys):
        assert main(["cut", k4_file, "-r", "1", "--mode", "decomp", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["value"] == 3 and payload["exact"]

    def test_ex(self, k4_file, capsys):
        assert main(["ex", k4_file, "-f", "trees:4", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["value"] == 3

    def test_ex_alt_exhaustive(self, k4_file, capsys):
        assert main(["ex-alt", k4_file, "-f", "trees:4", "--mode", "exhaustive", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["exact"]

    def test_sigma(self, k4_file, capsys):
        assert main(["sigma", k4_file]) == 0
        out = capsys.readouterr().out
        assert "euler" in out or "trivial" in out

    def test_forest_check(self, k4_file, capsys):
        assert main(["forest-check", k4_file, "--mode", "lemma4", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["holds"]

    def test_verify_theorem(self, k4_file, capsys):
        assert main(["verify-theorem", k4_file, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["equal"] == "no"

    def test_families(self, capsys):
        assert main(["families", "kneser(4,2)", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)[0]["match"]

    def test_decomposition_file(self, k4_file, tmp_path, capsys):
        dpath = tmp_path / "d.txt"
        dpath.write_text("0 1\n2 3 4 5\n")
        assert main(["ex", k4_file, "-d", str(dpath), "-f", "trees:3", "--json"]) == 0
        assert json.loads(capsys.readouterr().out)["exact"]

    def test_error_path(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("not a graph\n")
        assert main(["cut", str(bad)]) == 1
        assert "error" in capsys.readouterr().err
