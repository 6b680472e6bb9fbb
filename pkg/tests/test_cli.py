"""In-process checks of the command line front end."""

import csv
import json
import os

import pytest

from lat40 import cli
from lat40.construction import ConstructionError, build_O40
from lat40.enumeration import (
    read_vector_cache_text,
    vectors_of_norm_at_most,
    write_vector_cache_text,
)
from lat40.lattice import frame_scaled_gram, make_lattice
from lat40.matrices import read_matrix_text, write_matrix


@pytest.fixture(autouse=True, scope="module")
def cache_env(tmp_path_factory):
    old = os.environ.get("LAT40_CACHE")
    os.environ["LAT40_CACHE"] = str(tmp_path_factory.mktemp("cache"))
    yield
    if old is None:
        del os.environ["LAT40_CACHE"]
    else:
        os.environ["LAT40_CACHE"] = old


@pytest.fixture()
def vecs_file(tmp_path, s40):
    path = tmp_path / "s40.txt"
    path.write_text(write_vector_cache_text(s40))
    return str(path)


@pytest.fixture(scope="module")
def sub2(s40):
    """Rank-2 sublattice spanned by two orthogonal minimal vectors."""
    num, den = frame_scaled_gram(s40.frame)
    v0 = s40.vectors[0]
    v1 = next(
        v
        for v in s40.vectors
        if sum(a * sum(n * c for n, c in zip(row, v)) for a, row in zip(v0, num)) == 0
    )
    return make_lattice(s40.frame, [list(v0), list(v1)])


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_build_text_matches_construction(capsys):
    code, out, err = run_cli(capsys, "build")
    assert code == 0 and err == ""
    rows = read_matrix_text(out)
    assert rows == [list(r) for r in build_O40().basis]


def test_build_out_file_is_deterministic(capsys, tmp_path):
    f1, f2 = tmp_path / "a.txt", tmp_path / "b.txt"
    code1, out1, _ = run_cli(capsys, "build", "--out", str(f1))
    code2, out2, _ = run_cli(capsys, "build", "--out", str(f2))
    assert code1 == code2 == 0
    assert out1 == out2 == ""
    assert f1.read_bytes() == f2.read_bytes()


def test_build_json(capsys):
    code, out, _ = run_cli(capsys, "build", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["frame"] == "o40"
    assert len(payload["basis"]) == 40
    assert all(len(row) == 40 for row in payload["basis"])


def test_build_csv(capsys):
    code, out, _ = run_cli(capsys, "build", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == [f"c{i+1}" for i in range(40)]
    assert len(rows) == 41


def test_minvec_sublattice_matches_library(capsys, tmp_path, sub2):
    path = tmp_path / "basis.txt"
    write_matrix(path, [list(r) for r in sub2.basis])
    code, out, _ = run_cli(capsys, "minvec", "--lattice", str(path))
    assert code == 0
    got = read_vector_cache_text(out, sub2.frame)
    want = vectors_of_norm_at_most(sub2, 4)
    assert got.vectors == want.vectors
    assert got.norms == want.norms


def test_minvec_norm_bound_changes_count(capsys, tmp_path, sub2):
    path = tmp_path / "basis.txt"
    write_matrix(path, [list(r) for r in sub2.basis])
    counts = {}
    for norm in (4, 8):
        code, out, _ = run_cli(
            capsys, "minvec", "--lattice", str(path), "--norm", str(norm),
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["count"] == len(payload["vectors"])
        counts[norm] = payload["count"]
        assert counts[norm] == len(vectors_of_norm_at_most(sub2, norm))
    # the generators are orthogonal of norm 4, so the counts are forced
    assert counts[4] == 4
    assert counts[8] == 8


def test_minvec_vecs_round_trip(capsys, tmp_path, sub2):
    text = write_vector_cache_text(vectors_of_norm_at_most(sub2, 8))
    basis_path = tmp_path / "basis.txt"
    vec_path = tmp_path / "vecs.txt"
    write_matrix(basis_path, [list(r) for r in sub2.basis])
    vec_path.write_text(text)
    code, out, _ = run_cli(
        capsys, "minvec", "--lattice", str(basis_path), "--vecs", str(vec_path)
    )
    assert code == 0
    assert out == text


def test_minvec_rejects_bad_norm(capsys):
    code, out, err = run_cli(capsys, "minvec", "--norm", "0")
    assert code == 2
    assert "norm" in err


def test_rejects_negative_threads(capsys):
    code, _, err = run_cli(capsys, "build", "--threads", "-1")
    assert code == 2
    assert "threads" in err


def test_rejects_missing_lattice_file(capsys):
    code, _, err = run_cli(capsys, "minvec", "--lattice", "/nonexistent/x.txt")
    assert code == 2
    assert "cannot read lattice file" in err


def test_rejects_malformed_lattice_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not a matrix\n")
    code, _, err = run_cli(capsys, "minvec", "--lattice", str(path))
    assert code == 2
    assert "bad lattice file" in err


def test_rejects_wrong_column_count(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2 3\n1 0 0\n0 1 0\n")
    code, _, err = run_cli(capsys, "minvec", "--lattice", str(path))
    assert code == 2
    assert "40 columns" in err


def test_rejects_vecs_frame_mismatch(capsys, tmp_path, sub2):
    text = write_vector_cache_text(vectors_of_norm_at_most(sub2, 4))
    path = tmp_path / "vecs.txt"
    path.write_text(text.replace(" o40", " other", 1))
    code, _, err = run_cli(capsys, "minvec", "--vecs", str(path))
    assert code == 2
    assert "bad vector file" in err


def test_rejects_empty_vecs_file(capsys, tmp_path):
    path = tmp_path / "vecs.txt"
    path.write_text("")
    code, _, err = run_cli(capsys, "minvec", "--vecs", str(path))
    assert code == 2


def test_unknown_format_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as ex:
        cli.main(["build", "--format", "xml"])
    assert ex.value.code == 2


def test_types_stdout_csv(capsys, vecs_file):
    code, out, _ = run_cli(capsys, "types", "--vecs", vecs_file)
    assert code == 0
    first, second = out.split("\n\n", 1)
    rows1 = list(csv.reader(first.splitlines()))
    rows2 = list(csv.reader(second.splitlines()))
    assert rows1[0] == rows2[0] == ["label", "t0", "t1", "t2", "t4", "size"]
    assert len(rows1) == 1 + 18
    assert len(rows2) == 1 + 64
    assert sum(int(r[-1]) for r in rows1[1:]) == 39600
    assert sum(int(r[-1]) for r in rows2[1:]) == 39600


def test_types_out_dir(capsys, tmp_path, vecs_file):
    outdir = tmp_path / "tables"
    code, out, _ = run_cli(capsys, "types", "--vecs", vecs_file, "--out", str(outdir))
    assert code == 0
    assert "wrote table1.csv and table2.csv" in out
    t1 = (outdir / "table1.csv").read_text().splitlines()
    t2 = (outdir / "table2.csv").read_text().splitlines()
    assert len(t1) == 1 + 18
    assert len(t2) == 1 + 64


def test_frames_text_verdict(capsys, vecs_file):
    code, out, _ = run_cli(capsys, "frames", "--vecs", vecs_file)
    assert code == 0
    assert out.endswith("n_max=32 frame=false\n")
    rows = list(csv.reader(out.splitlines()[:-1]))
    assert rows[0] == ["m", "count"]
    assert sum(int(r[1]) for r in rows[1:]) == 132


def test_aut_json(capsys, vecs_file, aut):
    code, out, _ = run_cli(capsys, "aut", "--vecs", vecs_file)
    assert code == 0
    payload = json.loads(out)
    assert payload["order"] == 684
    assert payload["g1_order"] == 36
    assert payload["g2_order"] == 19
    assert payload["relation_exponent"] == 3
    assert payload["normal"] is True
    assert payload["trivial_intersection"] is True
    assert payload["product_is_group"] is True


def test_glue_text(capsys, vecs_file):
    code, out, _ = run_cli(capsys, "glue", "--vecs", vecs_file)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 42
    assert all(len(ln.split()) == 40 for ln in lines[:40])
    assert lines[40] == "gram=diag([4],[4],A19(2),A19(2))"
    assert lines[41] == "theorem3=true"


def test_verify_all_formats_from_canned_claims(capsys, monkeypatch):
    canned = [
        cli.Claim("alpha", "first", "ok", "pass"),
        cli.Claim("beta", "second", "went wrong", "fail"),
        cli.Claim("delta", "third", "blocked: alpha", "blocked"),
    ]
    monkeypatch.setattr(cli, "run_claims", lambda: list(canned))
    code, out, _ = run_cli(capsys, "verify-all")
    assert code == 1
    lines = out.splitlines()
    assert lines[0].startswith("pass") and "alpha" in lines[0]
    assert lines[1].startswith("fail") and "beta" in lines[1]
    assert lines[2].startswith("blocked") and "delta" in lines[2]
    assert lines[3] == "verify-all: 1 pass, 1 fail, 1 blocked"

    code, out, _ = run_cli(capsys, "verify-all", "--format", "csv")
    assert code == 1
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["id", "status", "expected", "computed"]
    assert [r[1] for r in rows[1:]] == ["pass", "fail", "blocked"]

    monkeypatch.setattr(
        cli, "run_claims", lambda: [cli.Claim("alpha", "first", "ok", "pass")]
    )
    code, out, _ = run_cli(capsys, "verify-all", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["pass"] == 1 and payload["fail"] == 0


def test_verify_all_out_file_prints_summary(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(
        cli, "run_claims", lambda: [cli.Claim("alpha", "first", "ok", "pass")]
    )
    path = tmp_path / "report.txt"
    code, out, _ = run_cli(capsys, "verify-all", "--out", str(path))
    assert code == 0
    assert out == "verify-all: 1 pass, 0 fail, 0 blocked\n"
    assert path.read_text().splitlines()[-1] == "verify-all: 1 pass, 0 fail, 0 blocked"


def test_verify_all_blocks_downstream_when_construction_fails(capsys, monkeypatch):
    def broken():
        raise ConstructionError("fixtures", "checksum mismatch")

    monkeypatch.setattr(cli, "load_fixtures", broken)
    code, out, _ = run_cli(capsys, "verify-all", "--format", "json")
    assert code == 1
    payload = json.loads(out)
    by_id = {c["id"]: c for c in payload["claims"]}
    assert by_id["construction"]["status"] == "fail"
    assert "checksum mismatch" in by_id["construction"]["computed"]
    rest = [c for c in payload["claims"] if c["id"] != "construction"]
    assert all(c["status"] == "blocked" for c in rest)
    assert payload["blocked"] == len(rest)


def test_verify_all_real_run(capsys):
    code, out, _ = run_cli(capsys, "verify-all", "--format", "json")
    assert code == 1
    payload = json.loads(out)
    status = {c["id"]: c["status"] for c in payload["claims"]}
    assert status.pop("frame-certification") == "fail"
    assert set(status.values()) == {"pass"}
    assert payload["fail"] == 1 and payload["blocked"] == 0
