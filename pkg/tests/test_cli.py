from __future__ import annotations

import json

import pytest

from cdcform import io
from cdcform.cli import FAILED, OK, SIZE_GATE, USAGE, main
from cdcform.generators import cardinality, sos2, sosk, union_jack
from cdcform.geometry import PlanarPartition


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(io.dumps(doc))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sos2_5(tmp_path):
    return write(tmp_path, "sos2_5.json", io.cdc_to_json(sos2(5)))


@pytest.fixture
def sos3_6(tmp_path):
    return write(tmp_path, "sos3_6.json", io.cdc_to_json(sosk(6, 3)))


def test_generate_sos2(capsys):
    code, out, _ = run(capsys, "generate", "sos2", "--n", 5)
    assert code == OK
    assert io.cdc_from_json(json.loads(out)) == sos2(5)


def test_generate_to_file(tmp_path, capsys):
    target = tmp_path / "uj.json"
    assert run(capsys, "generate", "unionjack", "--m", 3, "--n", 3, "--out", target)[0] == OK
    assert io.triangulation_from_json(json.loads(target.read_text())) == union_jack(3, 3)


def test_generate_cardinality(capsys):
    code, out, _ = run(capsys, "generate", "cardinality", "--n", 4, "--l", 2)
    assert code == OK
    assert io.cdc_from_json(json.loads(out)) == cardinality(4, 2)


def test_generate_is_deterministic(capsys):
    first = run(capsys, "generate", "random-triangulation", "--m", 4, "--n", 4, "--seed", 7)
    second = run(capsys, "generate", "random-triangulation", "--m", 4, "--n", 4, "--seed", 7)
    assert first == second and first[0] == OK


def test_generate_usage_errors(capsys):
    code, _, err = run(capsys, "generate", "random-triangulation", "--m", 3, "--n", 3)
    assert code == USAGE and "--seed" in err
    assert run(capsys, "generate", "sos2")[0] == USAGE
    assert run(capsys, "generate", "multilinear", "--dims", "3,x")[0] == USAGE
    assert run(capsys, "generate", "sos2", "--n", 0)[0] == USAGE


def test_analyze_sos2(sos2_5, capsys):
    code, out, _ = run(capsys, "analyze", sos2_5)
    assert code == OK
    assert "pairwise: yes, rank 2, log-lb 2" in out
    assert "ground set: 5" in out and "conflict edges: 6" in out


def test_analyze_cardinality(tmp_path, capsys):
    path = write(tmp_path, "card.json", io.cdc_to_json(cardinality(5, 3)))
    code, out, _ = run(capsys, "analyze", path)
    assert code == OK
    assert "pairwise: no, rank 4" in out


def test_analyze_truncated_rank(tmp_path, capsys):
    path = write(tmp_path, "card.json", io.cdc_to_json(cardinality(5, 3)))
    assert "rank: > 3" in run(capsys, "analyze", path, "--max-rank", 3)[1]


def test_analyze_partition_and_dot(tmp_path, capsys):
    ring = PlanarPartition((
        ((0, 0), (3, 0), (2, 1), (1, 1)),
        ((3, 0), (3, 3), (2, 2), (2, 1)),
        ((3, 3), (0, 3), (1, 2), (2, 2)),
        ((0, 3), (0, 0), (1, 1), (1, 2)),
    ))
    path = write(tmp_path, "ring.json", io.partition_to_json(ring))
    dot = tmp_path / "g.dot"
    code, out, _ = run(capsys, "analyze", path, "--dot", dot)
    assert code == OK
    assert "partition rank <= 3: yes" in out
    assert dot.read_text().startswith("graph conflict {")


def test_cover_exact_sos3(sos3_6, tmp_path, capsys):
    target = tmp_path / "cover.json"
    code, _, err = run(capsys, "cover", sos3_6, "--method", "exact", "--out", target)
    assert code == OK
    assert "depth 3" in err and "depth 2 unsat" in err
    assert len(json.loads(target.read_text())["levels"]) == 3


def test_cover_chromatic_union_jack(tmp_path, capsys):
    path = write(tmp_path, "uj.json", io.triangulation_to_json(union_jack(3, 3)))
    code, _, err = run(capsys, "cover", path, "--method", "chromatic")
    assert code == OK and "depth 3" in err


def test_cover_stars(sos2_5, capsys):
    code, out, _ = run(capsys, "cover", sos2_5, "--method", "stars")
    assert code == OK
    assert len(json.loads(out)["levels"]) <= 5


def test_cover_sosk_half_matches_display(sos3_6, capsys):
    code, out, _ = run(capsys, "cover", sos3_6, "--method", "sosk-half")
    assert code == OK
    levels = [(set(lv["A"]), set(lv["B"])) for lv in json.loads(out)["levels"]]
    assert levels == [({0}, {3, 4, 5}), ({0, 1}, {4, 5}), ({0, 1, 2}, {5})]


def test_cover_refuses_mismatched_method(tmp_path, sos2_5, capsys):
    path = write(tmp_path, "card.json", io.cdc_to_json(cardinality(4, 2)))
    assert run(capsys, "cover", path, "--method", "gray")[0] == USAGE
    assert run(capsys, "cover", sos2_5, "--method", "chromatic")[0] == USAGE
    assert run(capsys, "cover", path, "--method", "multilinear")[0] == USAGE


def test_sos2_is_a_one_dimensional_grid(sos2_5, capsys):
    code, _, err = run(capsys, "cover", sos2_5, "--method", "multilinear")
    assert code == OK and "depth 2" in err


def test_cover_cnf_on_non_pairwise(tmp_path, capsys):
    path = write(tmp_path, "card.json", io.cdc_to_json(cardinality(4, 2)))
    code, out, err = run(capsys, "cover", path, "--method", "cnf")
    assert code == OK
    assert json.loads(out)["k"] == 3 and "3-way scheme" in err


def test_size_gate(tmp_path, capsys):
    path = write(tmp_path, "big.json", io.cdc_to_json(sos2(20)))
    code, _, err = run(capsys, "cover", path, "--method", "exact")
    assert code == SIZE_GATE and "size gate" in err


def test_emit_encoded_sos2(sos2_5, capsys):
    code, out, err = run(capsys, "emit", sos2_5, "--formulation", "encoded", "--sizes")
    assert code == OK
    assert len(out.split("Binaries\n")[1].split("End")[0].split()) == 2
    assert "binaries\t2" in err


def test_emit_covermip(sos3_6, capsys):
    code, out, _ = run(capsys, "emit", sos3_6, "--formulation", "covermip", "--depth", 2)
    assert code == OK
    assert len(out.split("Binaries\n")[1].split("End")[0].split()) == 54
    assert run(capsys, "emit", sos3_6, "--formulation", "covermip")[0] == USAGE


def test_emit_ideal_from_cover_file(sos3_6, tmp_path, capsys):
    cover = tmp_path / "cover.json"
    assert run(capsys, "cover", sos3_6, "--method", "sosk-half", "--out", cover)[0] == OK
    code, out, err = run(capsys, "emit", sos3_6, "--formulation", "ideal", "--cover", cover, "--sizes")
    assert code == OK
    assert out.startswith("\\ ") and out.endswith("End\n")
    assert "binaries\t3" in err
    assert run(capsys, "emit", sos3_6, "--formulation", "ideal")[0] == USAGE


def test_emit_with_data(sos2_5, tmp_path, capsys):
    data = write(tmp_path, "data.json", {"values": {str(v): v * v for v in range(1, 6)}})
    code, out, _ = run(capsys, "emit", sos2_5, "--formulation", "jeroslow", "--data", data)
    assert code == OK
    assert " def_x_1: x_1 - lam_1 - 4 lam_2 - 9 lam_3 - 16 lam_4 - 25 lam_5 = 0" in out
    positional = write(tmp_path, "list.json", {"values": [1, 4, 9, 16, 25]})
    assert run(capsys, "emit", sos2_5, "--formulation", "jeroslow", "--data", positional)[0] == USAGE


def test_verify_valid_and_corrupted_cover(sos2_5, tmp_path, capsys):
    cover = tmp_path / "gray.json"
    assert run(capsys, "cover", sos2_5, "--method", "gray", "--out", cover)[0] == OK
    code, out, _ = run(capsys, "verify", sos2_5, "--cover", cover)
    assert code == OK and "cover ok, depth 2" in out
    doc = json.loads(cover.read_text())
    doc["levels"] = doc["levels"][:1]
    broken = write(tmp_path, "broken.json", doc)
    code, out, _ = run(capsys, "verify", sos2_5, "--cover", broken)
    assert code == FAILED
    assert "invalid cover" in out and "Uncovered" in out


def test_verify_ideal_model(sos2_5, tmp_path, capsys):
    cover = tmp_path / "gray.json"
    run(capsys, "cover", sos2_5, "--method", "gray", "--out", cover)
    code, out, _ = run(capsys, "verify", sos2_5, "--cover", cover, "--formulation", "ideal")
    assert code == OK
    assert "projection: ok" in out and "ideal: yes" in out


def test_verify_needs_a_mode(sos2_5, capsys):
    assert run(capsys, "verify", sos2_5)[0] == USAGE


def test_verify_jobs(tmp_path, capsys):
    paths = [write(tmp_path, f"s{n}.json", io.cdc_to_json(sos2(n))) for n in (3, 4, 5)]
    serial = run(capsys, "verify", *paths, "--formulation", "jeroslow")
    parallel = run(capsys, "verify", *paths, "--formulation", "jeroslow", "--jobs", 2)
    assert serial[0] == parallel[0] == OK
    assert serial[1] == parallel[1]
    assert serial[1].count("ideal: yes") == 2
    assert "ideal: skipped" in serial[1]


def test_missing_file(tmp_path, capsys):
    assert run(capsys, "analyze", tmp_path / "absent.json")[0] == USAGE
