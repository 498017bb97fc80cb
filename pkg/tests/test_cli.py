import json

import pytest

from strongprops.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def p5(tmp_path):
    path = tmp_path / "P5.el"
    path.write_text("1 2\n2 3\n3 4\n4 5\n")
    return str(path)


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "--property", "ssp", "--cert", "corpus:exstar")[0] == 0
    code, out, _ = run(capsys, "verify", "--property", "smp", "--cert", "corpus:SMPnotSAP",
                       "--format", "json")
    assert code == 1
    rep = json.loads(out)
    assert rep["report"]["verdict"] is False and rep["report"]["witness"]


def test_float_mode(capsys):
    code, out, _ = run(capsys, "verify", "--property", "ssp", "--cert", "corpus:bowtie", "--mode", "float")
    assert code == 0


def test_exact_mode_rejects_decimals(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"entries": [[0.5, 1], [1, 0]]}))
    code, _, err = run(capsys, "verify", "--property", "ssp", "--cert", str(path))
    assert code == 3 and "exact" in err
    assert run(capsys, "verify", "--property", "ssp", "--cert", str(path), "--mode", "float")[0] == 0


def test_json_is_deterministic(tmp_path, capsys):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        run(capsys, "verify", "--property", "ssp", "--cert", "corpus:exdistinctnoSSP",
            "--format", "json", "--out", str(path))
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("prop,cert", [("ssp", "exstar"), ("ssp", "exdistinctnoSSP"),
                                       ("smp", "SMPnotSAP"), ("sap", "bowtie")])
def test_recheck_round_trip(tmp_path, capsys, prop, cert):
    path = tmp_path / "r.json"
    first = run(capsys, "verify", "--property", prop, "--cert", f"corpus:{cert}",
                "--format", "json", "--out", str(path))[0]
    again = run(capsys, "verify", "--recheck", str(path))[0]
    assert first == again


def test_classify_path(p5, capsys):
    code, out, _ = run(capsys, "classify", "--graph", p5)
    assert code == 0 and "q = |G| (path)" in out


def test_bounds(p5, capsys):
    code, out, _ = run(capsys, "bounds", "--graph", p5, "--format", "json")
    rep = json.loads(out)
    assert code == 0 and rep["bounds"]["upper"]["value"] == 5 == rep["bounds"]["lower"]["value"]
    code, out, _ = run(capsys, "bounds", "--graph", p5, "--brute-force")
    assert code == 0 and "lower" in out.lower()


def test_lift(tmp_path, capsys):
    g = tmp_path / "K4.el"
    g.write_text("1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n")
    code, out, _ = run(capsys, "lift", "--seed", "corpus:exstar", "--supergraph", str(g))
    assert code == 0 and json.loads(out)["result"]["in_class"]
    code, _, _ = run(capsys, "lift", "--seed", "corpus:SMPnotSAP", "--supergraph", str(g))
    assert code == 3  # order mismatch without --extra is a usage error


def test_corpus_commands(tmp_path, capsys):
    code, out, _ = run(capsys, "corpus", "list")
    assert code == 0 and "bowtie" in out
    code, out, _ = run(capsys, "corpus", "show", "exstar")
    assert json.loads(out)["id"] == "exstar"
    path = tmp_path / "c.json"
    assert run(capsys, "corpus", "export", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "corpus", "check", str(path))
    assert code == 0 and out.count(": ok") >= 9


def test_gersh(capsys):
    assert run(capsys, "gersh", "--cert", "corpus:bowtie")[0] == 2


def test_usage_errors(tmp_path, capsys):
    assert run(capsys, "verify", "--property", "xyz", "--cert", "corpus:exstar")[0] == 3
    assert run(capsys, "verify", "--property", "ssp", "--cert", str(tmp_path / "missing.json"))[0] == 3
    assert run(capsys, "verify", "--property", "ssp", "--cert", "corpus:nope")[0] == 3
    assert run(capsys, "classify", "--graph", str(tmp_path / "none.el"))[0] == 3


def test_env_corpus_override(tmp_path, monkeypatch, capsys):
    from strongprops.constructs import corpus, dump_corpus
    path = tmp_path / "one.json"
    path.write_text(dump_corpus([c for c in corpus() if c.id == "bowtie"]))
    monkeypatch.setenv("STRONGPROPS_CORPUS", str(path))
    assert run(capsys, "verify", "--property", "ssp", "--cert", "corpus:exstar")[0] == 3
    assert run(capsys, "verify", "--property", "ssp", "--cert", "corpus:bowtie")[0] == 0
