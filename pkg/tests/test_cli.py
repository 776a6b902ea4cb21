"""End-to-end command-line tests, run in process through main(argv).

Exit-code contract: 0 success, 1 failed bound check, 2 usage errors or
rejected input.
"""

import json
import math

import pytest

from spannerkit import (
    build_half_theta6,
    gen_random,
    graph_from_json,
    points_from_json,
    points_to_json,
    graph_to_json,
    trace_from_json,
)
from spannerkit.cli_io import SEED_ENV, main


@pytest.fixture(autouse=True)
def clean_seed_env(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)


@pytest.fixture()
def h6_file(tmp_path):
    ps = gen_random(20, 11)
    g = build_half_theta6(ps)
    path = tmp_path / "h6.json"
    path.write_text(graph_to_json(g))
    return str(path), g


class TestGen:
    def test_random_is_deterministic(self, capsys):
        assert main(["gen", "--kind", "random", "--n", "12", "--seed", "5"]) == 0
        first = capsys.readouterr().out
        assert main(["gen", "--kind", "random", "--n", "12", "--seed", "5"]) == 0
        assert capsys.readouterr().out == first
        ps = points_from_json(first)
        assert len(list(ps)) == 12

    def test_env_seed_fallback(self, capsys, monkeypatch):
        assert main(["gen", "--kind", "random", "--n", "8", "--seed", "5"]) == 0
        explicit = capsys.readouterr().out
        monkeypatch.setenv(SEED_ENV, "5")
        assert main(["gen", "--kind", "random", "--n", "8"]) == 0
        assert capsys.readouterr().out == explicit

    def test_missing_seed_everywhere(self, capsys):
        assert main(["gen", "--kind", "random", "--n", "8"]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_n(self, capsys):
        assert main(["gen", "--kind", "random", "--seed", "1"]) == 2
        assert main(["gen", "--kind", "circle"]) == 2
        capsys.readouterr()

    @pytest.mark.parametrize(
        "kind,extra,count",
        [
            ("circle", ["--n", "10"], 10),
            ("theta5_lb", [], 31),
            ("routing_lb_positive", [], 3),
            ("routing_lb_negative_a", [], 5),
            ("routing_lb_negative_b", [], 5),
        ],
    )
    def test_instance_kinds(self, capsys, kind, extra, count):
        assert main(["gen", "--kind", kind, *extra]) == 0
        ps = points_from_json(capsys.readouterr().out)
        assert len(list(ps)) == count

    def test_out_writes_file(self, tmp_path, capsys):
        out = tmp_path / "pts.json"
        assert main(["gen", "--kind", "circle", "--n", "6", "--out", str(out)]) == 0
        assert capsys.readouterr().out == ""
        assert len(list(points_from_json(out.read_text()))) == 6

    def test_bad_generator_parameters(self, capsys):
        assert main(["gen", "--kind", "circle", "--n", "1"]) == 2
        assert main(["gen", "--kind", "theta5_lb", "--nudge", "0.5"]) == 2
        assert main(["gen", "--kind", "routing_lb_positive", "--alpha", "2.0"]) == 2
        capsys.readouterr()


class TestBuild:
    def test_matches_library_construction(self, tmp_path, capsys):
        ps = gen_random(15, 3)
        pts_file = tmp_path / "pts.json"
        pts_file.write_text(points_to_json(ps))
        assert main(["build", "--graph", "half_theta6", "--points", str(pts_file)]) == 0
        g = graph_from_json(capsys.readouterr().out)
        assert g == build_half_theta6(ps)

    def test_theta_k1_is_a_usage_error(self, tmp_path, capsys):
        pts_file = tmp_path / "pts.json"
        pts_file.write_text(points_to_json(gen_random(8, 3)))
        assert main(["build", "--graph", "theta", "--k", "1", "--points", str(pts_file)]) == 2
        assert main(["build", "--graph", "theta", "--points", str(pts_file)]) == 2
        capsys.readouterr()

    def test_rotated_union_defaults_to_one_copy(self, tmp_path, capsys):
        ps = gen_random(15, 3)
        pts_file = tmp_path / "pts.json"
        pts_file.write_text(points_to_json(ps))
        assert main(["build", "--graph", "rotated_union", "--points", str(pts_file)]) == 0
        g = graph_from_json(capsys.readouterr().out)
        assert g.metadata == {"m": 1}
        assert g.edges == build_half_theta6(ps).edges

    def test_mst_needs_no_k(self, tmp_path, capsys):
        pts_file = tmp_path / "pts.json"
        pts_file.write_text(points_to_json(gen_random(9, 3)))
        assert main(["build", "--graph", "mst", "--points", str(pts_file)]) == 0
        assert len(graph_from_json(capsys.readouterr().out).edges) == 8

    def test_missing_points_file(self, capsys):
        assert main(["build", "--graph", "mst", "--points", "/nonexistent.json"]) == 2
        capsys.readouterr()


class TestAnalyze:
    def test_reports_ratio(self, h6_file, capsys):
        path, _g = h6_file
        assert main(["analyze", "--graph", path]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["max_ratio"] >= 1.0
        assert len(doc["witness"]) == 2

    def test_check_mode_exit_codes(self, h6_file, capsys):
        path, _g = h6_file
        assert main(["analyze", "--graph", path, "--check"]) == 0
        assert json.loads(capsys.readouterr().out)["pass"] is True
        assert main(["analyze", "--graph", path, "--check", "--tolerance", "-1.5"]) == 1
        assert json.loads(capsys.readouterr().out)["pass"] is False

    def test_per_pair_csv(self, h6_file, tmp_path, capsys):
        path, g = h6_file
        csv_path = tmp_path / "pairs.csv"
        assert main(["analyze", "--graph", path, "--per-pair", "--out", str(csv_path)]) == 0
        lines = csv_path.read_text().splitlines()
        n = len(list(g.points))
        assert lines[0] == "u,v,euclidean,graph_distance,ratio"
        assert len(lines) == 1 + n * (n - 1) // 2
        u, v, euclid, gd, ratio = lines[1].split(",")
        assert float(ratio) == float(gd) / float(euclid)
        summary = json.loads(capsys.readouterr().out)
        assert "per_pair" not in summary

    def test_per_pair_json(self, h6_file, capsys):
        path, g = h6_file
        assert main(["analyze", "--graph", path, "--per-pair"]) == 0
        doc = json.loads(capsys.readouterr().out)
        n = len(list(g.points))
        assert len(doc["per_pair"]) == n * (n - 1) // 2

    def test_malformed_graph_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"nope": 1}')
        assert main(["analyze", "--graph", str(bad)]) == 2
        capsys.readouterr()


class TestVerify:
    def test_generative_mode(self, capsys):
        code = main(
            ["verify", "--graph", "half_theta6", "--n", "64", "--trials", "20", "--seed", "7"]
        )
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["pass"] is True
        assert doc["bound"] == 2.0
        assert doc["worst_ratio"] <= 2.0 + 1e-9
        assert doc["trials"] == 20 and doc["n"] == 64 and doc["seed"] == 7

    def test_generative_yao_with_k(self, capsys):
        code = main(
            ["verify", "--graph", "yao", "--k", "7", "--n", "24", "--trials", "3", "--seed", "2"]
        )
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["bound"] == pytest.approx(1 / (1 - 2 * math.sin(math.pi / 7)))

    def test_generative_requires_n_and_trials(self, capsys):
        assert main(["verify", "--graph", "half_theta6", "--seed", "7"]) == 2
        capsys.readouterr()

    def test_file_mode(self, h6_file, capsys):
        path, _g = h6_file
        assert main(["verify", "--graph", path]) == 0
        assert json.loads(capsys.readouterr().out)["pass"] is True
        assert main(["verify", "--graph", path, "--tolerance", "-1.5"]) == 1
        capsys.readouterr()


class TestRoute:
    def test_summary_and_trace(self, h6_file, capsys):
        path, _g = h6_file
        assert main(["route", "--graph", path, "--algo", "stateless",
                     "--from", "0", "--to", "13"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["pass"] is True
        assert main(["route", "--graph", path, "--algo", "stateless",
                     "--from", "0", "--to", "13", "--trace"]) == 0
        trace = trace_from_json(capsys.readouterr().out)
        assert len(trace.steps) == summary["steps"]
        assert trace.total_path_length == summary["total"]

    def test_source_equals_target_is_usage_error(self, h6_file, capsys):
        path, _g = h6_file
        assert main(["route", "--graph", path, "--algo", "stateless",
                     "--from", "0", "--to", "0"]) == 2
        capsys.readouterr()

    def test_algo_kind_mismatch(self, h6_file, capsys):
        path, _g = h6_file
        assert main(["route", "--graph", path, "--algo", "g12",
                     "--from", "0", "--to", "3"]) == 2
        capsys.readouterr()

    def test_svg_overlay_marks_every_step(self, h6_file, tmp_path, capsys):
        path, _g = h6_file
        svg_path = tmp_path / "route.svg"
        assert main(["route", "--graph", path, "--algo", "stateful",
                     "--from", "2", "--to", "17", "--trace",
                     "--svg", str(svg_path)]) == 0
        trace = trace_from_json(capsys.readouterr().out)
        svg = svg_path.read_text()
        assert svg.count('class="route"') == len(trace.steps)
        assert svg.count("<polygon") == 1

    def test_check_flag_passes_here(self, h6_file, capsys):
        path, _g = h6_file
        assert main(["route", "--graph", path, "--algo", "stateless",
                     "--from", "1", "--to", "9", "--check"]) == 0
        capsys.readouterr()


class TestRender:
    def test_point_svg_is_byte_stable(self, tmp_path, capsys):
        pts_file = tmp_path / "pts.json"
        pts_file.write_text(points_to_json(gen_random(10, 8)))
        assert main(["render", "--points", str(pts_file)]) == 0
        first = capsys.readouterr().out
        assert main(["render", "--points", str(pts_file)]) == 0
        assert capsys.readouterr().out == first
        assert first.count("<circle") == 10
        assert "<line" not in first

    def test_graph_svg_draws_every_edge(self, h6_file, capsys):
        path, g = h6_file
        assert main(["render", "--graph", path]) == 0
        svg = capsys.readouterr().out
        assert svg.count("<line") == len(g.edges)
        assert svg.count("<circle") == len(list(g.points))

    def test_requires_exactly_one_input(self, h6_file, tmp_path, capsys):
        path, _g = h6_file
        pts_file = tmp_path / "pts.json"
        pts_file.write_text(points_to_json(gen_random(5, 8)))
        assert main(["render"]) == 2
        assert main(["render", "--points", str(pts_file), "--graph", path]) == 2
        capsys.readouterr()


class TestPipelines:
    def test_gen_build_verify_route(self, tmp_path, capsys):
        pts = tmp_path / "p.json"
        gr = tmp_path / "g.json"
        assert main(["gen", "--kind", "random", "--n", "24", "--seed", "4",
                     "--out", str(pts)]) == 0
        assert main(["build", "--graph", "g9", "--points", str(pts),
                     "--out", str(gr)]) == 0
        assert main(["verify", "--graph", str(gr), "--tolerance", "1e-9"]) == 2
        capsys.readouterr()
        assert main(["route", "--graph", str(gr), "--algo", "g9",
                     "--from", "0", "--to", "23", "--check"]) == 0
        capsys.readouterr()
