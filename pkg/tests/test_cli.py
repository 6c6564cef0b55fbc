"""Command-line surface: subcommands, exit codes, cache round trips."""

import json

import pytest

from momentq.cli import (
    EXIT_CAPPED,
    EXIT_INPUT,
    EXIT_OK,
    EXIT_VERIFY,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_writes_sections(capsys, tmp_path):
    out = tmp_path / "gens.txt"
    code, _, _ = run(
        capsys, "generate", "--k", "2", "--n", "2", "--out", str(out)
    )
    assert code == EXIT_OK
    text = out.read_text()
    assert "# k=2 n=2 group=O kind=moment" in text
    assert "# k=2 n=2 group=O kind=quadratic" in text


def test_generate_so_determinants(capsys):
    code, out, _ = run(
        capsys,
        "generate", "--k", "1", "--n", "2", "--group", "SO",
        "--kind", "so-determinants",
    )
    assert code == EXIT_OK
    assert "kind=so-determinants" in out
    assert "det[1,2]" in out


def test_groebner_on_generated_file(capsys, tmp_path):
    path = tmp_path / "quad.txt"
    run(
        capsys,
        "generate", "--k", "2", "--n", "2", "--kind", "quadratic",
        "--out", str(path),
    )
    code, out, _ = run(
        capsys, "groebner", "--input", str(path), "--json"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["complete"]
    assert payload["size"] == len(payload["basis"]) > 0


def test_groebner_missing_file_is_input_error(capsys, tmp_path):
    code, _, err = run(
        capsys, "groebner", "--input", str(tmp_path / "nope.txt")
    )
    assert code == EXIT_INPUT
    assert "error" in err


def test_eliminate_small_case_json(capsys, tmp_path):
    code, out, _ = run(
        capsys,
        "eliminate", "--k", "2", "--n", "2",
        "--cache-dir", str(tmp_path), "--json",
    )
    assert code == EXIT_OK
    record = json.loads(out)
    assert record["verdict"] == "equal"
    assert record["elimination_size"] == 9

    # second run hits the cache (text mode shows the marker)
    code, out, _ = run(
        capsys,
        "eliminate", "--k", "2", "--n", "2", "--cache-dir", str(tmp_path),
    )
    assert code == EXIT_OK
    assert "(from cache)" in out


def test_report_reads_cache(capsys, tmp_path):
    run(
        capsys,
        "eliminate", "--k", "1", "--n", "2", "--cache-dir", str(tmp_path),
    )
    code, out, _ = run(
        capsys,
        "report", "--k", "1", "--n", "2", "--cache-dir", str(tmp_path),
        "--json",
    )
    assert code == EXIT_OK
    assert json.loads(out)["verdict"] == "equal"

    code, _, err = run(
        capsys,
        "report", "--k", "3", "--n", "1", "--cache-dir", str(tmp_path),
    )
    assert code == EXIT_INPUT
    assert "no cached entry" in err


def test_hilbert_case(capsys):
    code, out, _ = run(
        capsys, "hilbert", "--k", "2", "--n", "2", "--json"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["dimension"] == 6
    assert payload["a_invariant"] == -6
    assert payload["gorenstein"] and payload["graded_gorenstein"]


def test_verify_small_grid(capsys):
    code, out, _ = run(
        capsys, "verify", "--kmax", "1", "--nmax", "2", "--json"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["failures"] == []


def test_certify_single_and_all(capsys):
    code, out, _ = run(
        capsys,
        "certify", "--k", "2", "--rows", "2,3,4", "--cols", "2,3,4",
    )
    assert code == EXIT_OK
    assert "minor(2,3,4;2,3,4)" in out
    assert "verified: True" in out

    code, out, _ = run(capsys, "certify", "--k", "1", "--json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["verified"]

    code, _, err = run(capsys, "certify", "--k", "2", "--rows", "1,2,3")
    assert code == EXIT_INPUT


def test_bench_small_case(capsys):
    code, out, _ = run(
        capsys,
        "bench", "--k", "1", "--n", "2",
        "--orders", "paper,grevlex", "--budget", "60", "--json",
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    assert len(payload["rows"]) == 2
    assert all(r["complete"] and r["consistent"] for r in payload["rows"])


def test_input_errors(capsys):
    code, _, _ = run(capsys, "eliminate", "--k", "0", "--n", "1")
    assert code == EXIT_INPUT
    code, _, _ = run(
        capsys, "eliminate", "--k", "2", "--n", "3", "--group", "SO"
    )
    assert code == EXIT_INPUT
    code, _, _ = run(capsys, "no-such-command")
    assert code == EXIT_INPUT


def test_capped_groebner_exit_code(capsys, tmp_path, monkeypatch):
    import momentq.pipeline as pipeline

    path = tmp_path / "quad.txt"
    run(
        capsys,
        "generate", "--k", "2", "--n", "2", "--kind", "quadratic",
        "--out", str(path),
    )
    monkeypatch.setattr(pipeline, "DEFAULT_MAX_PAIRS", 2)
    code, out, _ = run(
        capsys, "groebner", "--input", str(path), "--json"
    )
    assert code == EXIT_CAPPED
    assert not json.loads(out)["complete"]

    # --no-cap lifts the limit again
    code, out, _ = run(
        capsys, "groebner", "--input", str(path), "--json", "--no-cap"
    )
    assert code == EXIT_OK
