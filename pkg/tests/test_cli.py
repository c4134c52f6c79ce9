"""Command-line interface: exit codes, formats, determinism, figures."""

import json
import subprocess
import sys

import pytest

from qisom import QMatrix
from qisom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def qfile(tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps(QMatrix.random(2, seed=7).to_json()))
    return str(path)


class TestRewrite:
    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "rewrite", "--preset", "zero", "--n", "2",
                           "--word", "a1* a1")
        assert code == 0
        assert "normal form: 1" in out

    def test_json_output(self, capsys):
        code, out, _ = run(capsys, "rewrite", "--preset", "random:42", "--n", "2",
                           "--word", "a1* a2", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == 1
        assert payload["mu"] == [2] and payload["sigma"] == [1]
        q = QMatrix.random(2, seed=42)
        assert payload["coefficient"] == pytest.approx(
            [q.entry(1, 2).real, q.entry(1, 2).imag])

    def test_bad_word(self, capsys):
        code, _, err = run(capsys, "rewrite", "--preset", "zero", "--n", "2",
                           "--word", "b1")
        assert code == 2
        assert "error:" in err

    def test_rejects_general_diagonal(self, capsys, tmp_path):
        general = QMatrix.random(2, seed=1, diagonal=(0.2, -0.3))
        path = tmp_path / "general.json"
        path.write_text(json.dumps(general.to_json()))
        code, _, err = run(capsys, "rewrite", "--q", str(path), "--word", "a1* a1")
        assert code == 2
        assert "zero diagonal" in err


class TestQSource:
    def test_file_and_preset_conflict(self, capsys, qfile):
        code, _, err = run(capsys, "gram", "--q", qfile, "--preset", "zero",
                           "--v", "1,1")
        assert code == 2
        assert "one coefficient source" in err

    def test_missing_source(self, capsys):
        code, _, err = run(capsys, "gram", "--v", "1,1")
        assert code == 2

    def test_unknown_preset(self, capsys):
        code, _, err = run(capsys, "gram", "--preset", "cayley", "--v", "1,1")
        assert code == 2
        assert "unknown preset" in err

    def test_non_hermitian_file_names_the_invariant(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({
            "n": 2,
            "q": [[[0.0, 0.0], [0.5, 0.0]], [[0.1, 0.0], [0.0, 0.0]]],
        }))
        code, _, err = run(capsys, "gram", "--q", str(path), "--v", "1,1")
        assert code == 2
        assert "Hermitian symmetry" in err

    def test_modulus_bound_enforced(self, capsys, tmp_path):
        path = tmp_path / "big.json"
        path.write_text(json.dumps({
            "n": 2,
            "q": [[[0.0, 0.0], [1.5, 0.0]], [[1.5, 0.0], [0.0, 0.0]]],
        }))
        code, _, err = run(capsys, "gram", "--q", str(path), "--v", "1,1")
        assert code == 2
        assert "modulus bound" in err


class TestGram:
    def test_json_payload(self, capsys):
        code, out, _ = run(capsys, "gram", "--preset", "random:42", "--n", "2",
                           "--v", "1,1", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == 1
        assert payload["positive"] is True
        assert payload["basis"] == [[1, 2], [2, 1]]
        assert payload["determinant"][0] == pytest.approx(0.36)
        assert payload["min_pivot"] == pytest.approx(0.36)

    def test_text_verdict(self, capsys):
        code, out, _ = run(capsys, "gram", "--preset", "zero", "--n", "2",
                           "--v", "2,0")
        assert code == 0
        assert "positive-definite: yes" in out

    def test_bad_vector_text(self, capsys):
        code, _, err = run(capsys, "gram", "--preset", "zero", "--n", "2",
                           "--v", "1,notanumber")
        assert code == 2
        code, _, err = run(capsys, "gram", "--preset", "zero", "--n", "2", "--v", "1")
        assert code == 2

    def test_figures_written(self, capsys, tmp_path):
        figdir = tmp_path / "figs"
        code, _, _ = run(capsys, "gram", "--preset", "random:42", "--n", "2",
                         "--v", "1,1", "--figures", str(figdir))
        assert code == 0
        assert (figdir / "gram_v1-1.png").stat().st_size > 0
        csv_text = (figdir / "gram_v1-1.csv").read_text()
        assert csv_text.startswith("row,col,re,im")

    def test_deterministic_bytes(self, capsys):
        args = ("gram", "--preset", "random:42", "--n", "2", "--v", "1,1",
                "--format", "json")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second


class TestRep:
    def test_block_listing(self, capsys):
        code, out, _ = run(capsys, "rep", "--preset", "zero", "--n", "2", "--L", "2")
        assert code == 0
        assert "total dimension 7" in out

    def test_verify_json(self, capsys):
        code, out, _ = run(capsys, "rep", "--preset", "random:42", "--n", "2",
                           "--L", "3", "--verify", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert payload["max_residual"] < 1e-9
        assert "invariant" not in payload

    def test_verify_text(self, capsys):
        code, out, _ = run(capsys, "rep", "--preset", "zero", "--n", "2",
                           "--L", "3", "--verify")
        assert code == 0
        assert "verdict: pass" in out


class TestGicar:
    def test_default_json(self, capsys):
        code, out, _ = run(capsys, "gicar", "--preset", "random:42", "--n", "2",
                           "--k", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert payload["total_dim"] == 7
        assert len(payload["blocks"]) == 4

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "gicar", "--preset", "zero", "--n", "2",
                           "--k", "1", "--format", "text")
        assert code == 0
        assert "verdict         : pass" in out


class TestBratteli:
    def test_dot_deterministic(self, capsys):
        args = ("bratteli", "--n", "2", "--k-max", "2", "--format", "dot")
        code, first, _ = run(capsys, *args)
        assert code == 0
        assert first.startswith("digraph filtration {")
        _, second, _ = run(capsys, *args)
        assert first == second

    def test_numeric_crosscheck(self, capsys):
        code, out, _ = run(capsys, "bratteli", "--preset", "random:42", "--n", "2",
                           "--k-max", "1", "--numeric", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == 1

    def test_figures(self, capsys, tmp_path):
        figdir = tmp_path / "figs"
        code, _, _ = run(capsys, "bratteli", "--n", "2", "--k-max", "1",
                         "--figures", str(figdir))
        assert code == 0
        assert (figdir / "bratteli.png").stat().st_size > 0
        assert (figdir / "bratteli_edges.csv").read_text().startswith("k,v,u,m")

    def test_rejects_unknown_format(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["bratteli", "--n", "2", "--format", "svg"])
        assert err.value.code == 2


class TestSymmetry:
    def test_compatible_unitary(self, capsys, tmp_path, qfile):
        ufile = tmp_path / "u.json"
        ufile.write_text(json.dumps({
            "u": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}))
        code, out, _ = run(capsys, "symmetry", "--q", qfile, "--u", str(ufile))
        assert code == 0
        assert "compatible" in out

    def test_incompatible_unitary_names_invariant(self, capsys, tmp_path, qfile):
        ufile = tmp_path / "swap.json"
        ufile.write_text(json.dumps({
            "u": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]}))
        code, out, _ = run(capsys, "symmetry", "--q", qfile, "--u", str(ufile),
                           "--format", "json")
        assert code == 1
        payload = json.loads(out)
        assert payload["compatible"] is False
        assert payload["invariant"] == "unitary relation compatibility"
        assert len(payload["witness"]) == 4

    def test_non_unitary_file(self, capsys, tmp_path, qfile):
        ufile = tmp_path / "stretch.json"
        ufile.write_text(json.dumps({
            "u": [[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}))
        code, _, err = run(capsys, "symmetry", "--q", qfile, "--u", str(ufile))
        assert code == 2
        assert "u^H u" in err

    def test_sampling(self, capsys):
        code, out, _ = run(capsys, "symmetry", "--preset", "random:5", "--n", "2",
                           "--sample", "10", "--format", "json")
        assert code == 0
        assert json.loads(out)["passed"] is True

    def test_requires_a_mode(self, capsys, qfile):
        code, _, err = run(capsys, "symmetry", "--q", qfile)
        assert code == 2
        assert "--u FILE or --sample" in err


class TestIdeal:
    def test_default_json(self, capsys):
        code, out, _ = run(capsys, "ideal", "--preset", "random:42", "--n", "2")
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert payload["rank_p"] == 1
        assert payload["family_size"] == 49

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, "ideal", "--preset", "zero", "--n", "2",
                           "--L", "3", "--max-len", "1", "--format", "text")
        assert code == 0
        assert "independent units           : 9/9" in out


class TestVerify:
    def test_single_check_text(self, capsys):
        code, out, _ = run(capsys, "verify", "--checks", "gram-positivity")
        assert code == 0
        assert "PASS" in out
        assert "1/1 checks passed" in out

    def test_single_check_json(self, capsys):
        code, out, _ = run(capsys, "verify", "--checks", "gram-positivity",
                           "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert payload["checks"][0]["name"] == "gram-positivity"

    def test_unknown_check(self, capsys):
        code, _, err = run(capsys, "verify", "--checks", "no-such-check")
        assert code == 2


def test_console_script_help():
    proc = subprocess.run([sys.executable, "-m", "qisom.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "rewrite" in proc.stdout and "verify" in proc.stdout
