import json

from weylflow import fixtures
from weylflow.cli import main


def run(args):
    return main(args)


def test_validate_fixture_passes(capsys):
    assert run(["validate", "k33"]) == 0
    out = capsys.readouterr().out
    assert "regular:   ok" in out


def test_validate_corrupted_fails(tmp_path, capsys):
    doc = fixtures.load_fixture("a2q2").to_json_dict()
    a = doc["residues"]["0"][0][0]
    b = doc["residues"]["0"][1][0]
    doc["residues"]["0"][0][0], doc["residues"]["0"][1][0] = b, a
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    assert run(["validate", str(p)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_missing_file_is_usage_error(capsys):
    assert run(["validate", "no-such-file.json"]) == 2


def test_germs_output_deterministic(tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert run(["germs", "k33", "--radius", "2", "--out", str(out1)]) == 0
    assert run(["germs", "k33", "--radius", "2", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["format"] == "germs/v1" and doc["count"] == 36


def test_transfer_csv_and_budget_guard(tmp_path, capsys):
    out = tmp_path / "m.csv"
    assert run(["transfer", "k33", "--mu", "1", "--radius", "2", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    header = json.loads(lines[0])
    assert header["M_mu"] == 2 and header["dim"] == 18 and header["radius"] == 1
    assert len(lines) == 1 + 18
    assert set(lines[1].split(",")) <= {"0/1", "1/2"}
    # insufficient budget: the operator would act on F_0
    assert run(["transfer", "k33", "--mu", "2", "--radius", "2"]) == 1
    assert "need --radius >=" in capsys.readouterr().err


def test_transfer_rejects_bad_mu(capsys):
    assert run(["transfer", "k33", "--mu", "1,0", "--radius", "2"]) == 2


def test_spectrum_deterministic_and_schema(tmp_path):
    out1 = tmp_path / "s1.json"
    out2 = tmp_path / "s2.json"
    assert run(["spectrum", "k33", "--theta", "1/2", "--out", str(out1)]) == 0
    assert run(["spectrum", "k33", "--theta", "1/2", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert doc["format"] == "spectrum/v1"
    assert doc["dimF1"] == 18
    assert doc["generators"] == [[1]]
    assert any(abs(j["chi"][0][0] - 1.0) < 1e-9 for j in doc["joint"])


def test_koszul_command(tmp_path):
    out = tmp_path / "k.json"
    assert run(["koszul", "k33", "--chi", "1+0j", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["cohomology"] == [1, 1]


def test_ihara_command(tmp_path, capsys):
    out = tmp_path / "i.json"
    assert run(["ihara", "q3", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["directed_edges"] == 24
    assert doc["identity_residual"] <= 1e-10
    bad = tmp_path / "odd.json"
    bad.write_text(json.dumps({"format": "graph/v1", "edges": [[0, 1], [1, 2], [2, 0]]}))
    assert run(["ihara", str(bad)]) == 2


def test_gen_commands_roundtrip(tmp_path):
    g = tmp_path / "g.json"
    assert run(["gen-graph", "--kind", "biregular", "--out", str(g)]) == 0
    doc = json.loads(g.read_text())
    assert doc["format"] == "graph/v1" and len(doc["edges"]) == 12
    a = tmp_path / "a.json"
    assert run(["gen-a2", "--out", str(a)]) == 0
    doc = json.loads(a.read_text())
    assert doc["format"] == "triangle-presentation/v1"
    assert len(doc["triples"]) == 21
    from weylflow.chamber import load

    assert load(str(g)).num_chambers == 12
    assert load(str(a)).num_chambers == 21


def test_fixture_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("WEYLFLOW_FIXTURES", str(tmp_path))
    fixtures.write_fixture_files(tmp_path)
    assert fixtures.fixture_path("k33") == tmp_path / "k33.json"
    system = fixtures.load_fixture("k33")
    assert system.num_chambers == 9


def test_verify_subcommand_small(capsys):
    assert run(["verify", "k33", "--radius", "2"]) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out and "[FAIL]" not in out
