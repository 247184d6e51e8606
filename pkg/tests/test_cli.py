import json
import subprocess
import sys

import pytest

from ssnc.cli import EXIT_COUNTEREXAMPLE, EXIT_DIVERGENCE, EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE, main
from ssnc.core import build
from ssnc.formats import emit_digraph6, emit_edgelist
from ssnc.generators import planted_min_degree


@pytest.fixture
def graph_file(tmp_path):
    def write(D, fmt="edgelist", name="g.txt"):
        p = tmp_path / name
        p.write_text(emit_edgelist(D) if fmt == "edgelist" else emit_digraph6(D) + "\n")
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


def strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing")
    return doc


class TestCheck:
    def test_c3(self, capsys, graph_file, c3):
        code, doc, _ = run(capsys, "check", graph_file(c3), "--k", "3", "--m", "2")
        assert code == EXIT_OK
        assert doc["schema_version"] == 1 and doc["command"] == "check"
        assert doc["input"]["digraph6"] == "&BP_" and doc["input"]["format"] == "edgelist"
        assert doc["m_free"] == {"m": 2, "holds": True}
        assert doc["profile"]["girth"] == 3
        assert doc["seymour"]["seymour_vertices"] == [0, 1, 2]
        assert doc["lambda_check"]["passes"]

    def test_tt3_witness(self, capsys, graph_file, tt3):
        code, doc, _ = run(capsys, "check", graph_file(tt3, "digraph6"), "--k", "2")
        assert code == EXIT_OK and doc["input"]["format"] == "digraph6"
        w = doc["profile"]["anti_transitive"][0]["witness"]
        assert (w["u"], w["v"]) == (0, 2) and w["path"] == [0, 1, 2]

    def test_two_cycle_file(self, capsys, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("2\n0 1\n1 0\n")
        code, _, err = run(capsys, "check", str(p))
        assert code == EXIT_USAGE
        assert "line 3" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "check", "/nonexistent/graph")
        assert code == EXIT_USAGE and "error" in err

    def test_stdin(self, capsys, monkeypatch):
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO("&BP_\n"))
        code, doc, _ = run(capsys, "check", "-")
        assert code == EXIT_OK and doc["input"]["source"] == "<stdin>"

    def test_counterexample_exit(self, capsys, graph_file, c3, monkeypatch):
        import ssnc.cli as cli

        class NoSeymour:
            has_seymour_vertex = False

            def to_dict(self):
                return {}

        monkeypatch.setattr(cli, "seymour_report", lambda D: NoSeymour())
        code, _, _ = run(capsys, "check", graph_file(c3))
        assert code == EXIT_COUNTEREXAMPLE


class TestTrace:
    def test_c5(self, capsys, graph_file, c5):
        code, doc, _ = run(capsys, "trace", graph_file(c5), "--k", "7")
        assert code == EXIT_OK and doc["ok"]
        assert doc["trace"]["branch"] == "SmallDelta" and doc["trace"]["result"] == 0

    def test_precondition(self, capsys, graph_file):
        D = build(8, [(i, i + 1) for i in range(7)] + [(0, 7)])
        code, doc, err = run(capsys, "trace", graph_file(D), "--k", "7")
        assert code == EXIT_PRECONDITION and not doc["ok"]
        assert doc["error"]["kind"] == "PreconditionViolated"
        assert doc["error"]["detail"]["anti_transitivity_witness"]["v"] == 7
        assert "trace failed" in err

    def test_divergence(self, capsys, graph_file):
        D = planted_min_degree(21, 7, 3, p_extra=0.0)
        code, doc, _ = run(capsys, "trace", graph_file(D), "--k", "7", "--skip-precheck")
        assert code == EXIT_DIVERGENCE
        assert doc["error"]["kind"] == "ProofDivergence"

    def test_k_required(self, capsys, graph_file, c5):
        with pytest.raises(SystemExit) as exc:
            main(["trace", graph_file(c5)])
        assert exc.value.code == EXIT_USAGE


class TestSweeps:
    def test_enumerate(self, capsys):
        code, doc, err = run(capsys, "enumerate", "--n", "4", "--progress-every", "300")
        assert code == EXIT_OK
        assert doc["hunt"]["scanned"] == 729 and doc["hunt"]["counterexamples"] == []
        assert err.count("progress:") == 2
        assert "729 scanned" in err.splitlines()[-1]

    def test_hunt_random(self, capsys):
        code, doc, _ = run(capsys, "hunt", "--kind", "random", "--n", "12", "--p", "0.3",
                           "--seed", "7", "--limit", "500")
        assert code == EXIT_OK and doc["hunt"]["tested"] == 500

    def test_caccetta(self, capsys):
        code, doc, _ = run(capsys, "enumerate", "--n", "3", "--target", "caccetta")
        assert code == EXIT_OK and doc["hunt"]["tested"] == 2

    def test_hunt_planted(self, capsys):
        code, doc, _ = run(capsys, "hunt", "--kind", "planted", "--n", "12", "--delta", "4",
                           "--p", "0.2", "--limit", "50", "--target", "lemma3")
        assert code == EXIT_OK and doc["hunt"]["spec"]["delta"] == 4

    def test_bad_spec(self, capsys):
        code, _, err = run(capsys, "hunt", "--n", "5")
        assert code == EXIT_USAGE and "limit" in err

    def test_out_file(self, capsys, tmp_path):
        out = tmp_path / "rep.json"
        assert main(["enumerate", "--n", "2", "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["hunt"]["scanned"] == 3

    def test_deterministic_modulo_timing(self, capsys):
        argv = ["hunt", "--n", "9", "--p", "0.4", "--seed", "3", "--limit", "200"]
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert strip_timing(a) == strip_timing(b)
        assert list(a) == sorted(a)


class TestConvert:
    def test_roundtrip(self, capsys, graph_file, c5_chord, tmp_path):
        code, out, _ = run(capsys, "convert", graph_file(c5_chord), "--to", "digraph6")
        assert code == EXIT_OK and out == "&DWOOW?\n"
        p = tmp_path / "g.d6"
        p.write_text(out)
        _, back, _ = run(capsys, "convert", str(p), "--to", "edgelist")
        assert back == emit_edgelist(c5_chord)


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_USAGE


def test_module_entry_point(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("3\n0 1\n1 2\n2 0\n")
    res = subprocess.run([sys.executable, "-m", "ssnc", "check", str(p)], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["tool"] == "ssnc"
