import json
import subprocess
import sys
from pathlib import Path

import pytest

from efl import fileformats as ff
from efl.cli import run

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("argv,code", [
    (["prove", "@'n 'n"], 0),
    (["prove", "p"], 1),
    (["prove", "@'n <F> 'm -> @'m <F> 'n"], 1),
    (["prove", "@'n <F> 'm -> @'m <F> 'n", "--frame", "sym"], 0),
    (["prove", "[] p -> p", "--logic", "s4"], 0),
    (["prove", "[] p -> p"], 1),
    (["prove", "@'n ->"], 65),
    (["prove", "p", "--frame", "@'n =>"], 64),
    (["prove", "p", "--bogus"], 64),
    ([], 64),
])
def test_prove_exit_codes(argv, code, capsys):
    assert run(argv) == code


def test_prove_verdict_on_stdout(capsys):
    run(["prove", "p -> p"])
    out, err = capsys.readouterr()
    assert out.split()[0].lower().startswith("proved")
    assert err


def test_prove_emits_files(tmp_path):
    d = tmp_path / "d.json"
    assert run(["prove", "@'n (p -> p)", "--emit-derivation", str(d)]) == 0
    assert run(["check-derivation", str(d), "--no-cut"]) == 0
    m = tmp_path / "m.json"
    assert run(["prove", "F p -> p", "--emit-countermodel", str(m)]) == 1
    model, assignment = ff.parse_countermodel(m.read_text())
    assert model.worlds


def test_batch(tmp_path, capsys):
    f = tmp_path / "batch.txt"
    f.write_text("p -> p\n@'n 'n\n")
    assert run(["prove", "--batch", str(f)]) == 0
    f.write_text("p -> p\np\n")
    assert run(["prove", "--batch", str(f), "--jobs", "2"]) == 1


def test_check_model(capsys):
    path = str(GOLDEN / "models" / "box_example.json")
    assert run(["check", "[] p", "--model", path, "--world", "w0", "--agent", "a0"]) == 0
    assert run(["check", "p", "--model", path, "--world", "w0", "--agent", "a0"]) == 1


def test_oracle(tmp_path, capsys):
    assert run(["oracle", "p -> p", "--max-worlds", "2", "--max-agents", "2"]) == 0
    out = tmp_path / "cm.json"
    assert run(["oracle", "[] p -> p", "--max-worlds", "2", "--max-agents", "1", "-o", str(out)]) == 1
    assert "assignment" in json.loads(out.read_text())


def test_translate(capsys):
    assert run(["translate", str(GOLDEN / "sequents" / "sample_tree.json")]) == 0
    assert "@'n" in capsys.readouterr().out


def test_derivation_and_hilbert_tools(tmp_path, capsys):
    rigid = str(GOLDEN / "derivations" / "rigid.json")
    assert run(["check-derivation", rigid, "--no-cut"]) == 0
    out = tmp_path / "h.json"
    assert run(["elaborate", rigid, "-o", str(out)]) == 0
    assert run(["check-hilbert", str(out)]) == 0
    emb = tmp_path / "e.json"
    sample = str(GOLDEN / "proofs" / "sample.json")
    concl = json.loads(Path(sample).read_text())["lines"][-1]["formula"]
    assert run(["embed", "--formula", concl, "--hilbert", sample, "-o", str(emb)]) == 0
    assert run(["check-derivation", str(emb)]) == 0


def test_check_hilbert_rejects_bad_file(tmp_path, capsys):
    data = json.loads((GOLDEN / "proofs" / "sample.json").read_text())
    data["lines"][0]["formula"] = "p -> q"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert run(["check-hilbert", str(bad)]) == 1


def test_missing_file_is_usage_error(capsys):
    assert run(["translate", "/nonexistent/file.json"]) == 64


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "efl", "prove", "@'n 'n"], capture_output=True, text=True)
    assert r.returncode == 0
