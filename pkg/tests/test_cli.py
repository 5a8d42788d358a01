"""Command-line interface: exit codes, reports, sidecars, output files."""

from __future__ import annotations

import hashlib
import json
import shutil

import pytest

from geotype import has_corner_property, load_type, power, serialize_type
from geotype.cli import main

from conftest import GOLDEN_DIR, golden_bytes


@pytest.fixture()
def work(tmp_path):
    """A scratch directory seeded with the golden corpus."""
    for path in GOLDEN_DIR.glob("*.gt"):
        shutil.copy(path, tmp_path / path.name)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


# -- validate ------------------------------------------------------------------

def test_validate_accepts_golden(work, capsys):
    code, out, err = run(capsys, "validate", work / "t_aw.gt")
    assert code == 0
    assert "valid" in out
    assert err == ""


def test_validate_report_shape(work, capsys):
    code, report, _ = run_json(capsys, "validate", work / "t_aw.gt")
    assert code == 0
    assert report["schema"] == "geotype.run-report/1"
    assert report["exit_code"] == 0
    assert report["result"]["valid"] is True
    assert report["command"][0] == "validate"
    (inp,) = report["inputs"]
    digest = hashlib.sha256((work / "t_aw.gt").read_bytes()).hexdigest()
    assert inp["sha256"] == digest
    assert report["outputs"] == []
    assert isinstance(report["wall_time_s"], float)
    assert report["tool"]["name"] == "geotype"


def test_validate_rejects_malformed_file(work, capsys):
    bad = work / "broken.gt"
    bad.write_text("n 1\nhv 1 2 2\nphi 1 1 1 1 1\nphi 1 2 1 1 1\n")
    code, report, err = run_json(capsys, "validate", bad)
    assert code == 1
    assert report["result"]["valid"] is False
    (violation,) = report["result"]["violations"]
    assert violation["kind"] == "BijectionViolation"
    assert "hit by both" in violation["message"]


def test_validate_missing_file_is_an_io_error(work, capsys):
    code, out, err = run(capsys, "validate", work / "nope.gt")
    assert code == 2
    assert "nope.gt" in err


def test_validate_directory_is_an_io_error(work, capsys):
    code, _, err = run(capsys, "validate", work)
    assert code == 2
    assert "directory" in err


# -- matrix / check / genus ----------------------------------------------------

def test_matrix_report(work, capsys):
    code, report, _ = run_json(capsys, "matrix", work / "t_aw.gt")
    assert code == 0
    assert report["result"]["matrix"] == [[2, 1], [1, 1]]


def test_check_accepts_the_cat_type(work, capsys):
    code, report, _ = run_json(capsys, "check", work / "t_aw.gt")
    assert code == 0
    assert report["result"]["status"] == "pseudo-anosov"
    assert report["result"]["iterates_checked"] == 12


def test_check_rejects_the_horseshoe_with_a_witness(work, capsys):
    code, report, _ = run_json(capsys, "check", work / "t_hs.gt")
    assert code == 1
    assert report["result"]["status"] == "not-pseudo-anosov"
    assert report["result"]["witness"]["kind"] == "impasse"
    assert report["result"]["witness"]["m"] == 1


def test_check_jobs_flag_changes_nothing(work, capsys):
    _, plain, _ = run_json(capsys, "check", work / "t_db.gt")
    _, parallel, _ = run_json(capsys, "check", work / "t_db.gt", "--jobs", "3")
    plain.pop("wall_time_s")
    parallel.pop("wall_time_s")
    parallel["command"] = plain["command"]
    assert plain == parallel


def test_genus_report(work, capsys):
    code, report, _ = run_json(capsys, "genus", work / "t_sq.gt", "--trust-pa")
    assert code == 0
    assert report["result"]["genus"] == 0
    assert report["result"]["spine_count"] == 4


def test_genus_gate_refuses_non_pa_input(work, capsys):
    code, report, err = run_json(capsys, "genus", work / "t_hs.gt")
    assert code == 1
    assert report["result"]["refused"] is True
    assert "--trust-pa" in err


# -- transforms and sidecars -----------------------------------------------------

def test_power_writes_default_output_and_sidecar(work, capsys):
    code, out, _ = run(capsys, "power", work / "t_db.gt", "-m", "3")
    assert code == 0
    out_path = work / "t_db.power3.gt"
    sidecar = work / "t_db.power3.report.json"
    assert out_path.exists() and sidecar.exists()
    assert load_type(out_path) == power(load_type(work / "t_db.gt"), 3)
    report = json.loads(sidecar.read_text())
    assert report["exit_code"] == 0
    (entry,) = report["outputs"]
    digest = hashlib.sha256(out_path.read_bytes()).hexdigest()
    assert entry["sha256"] == digest


def test_reports_are_stable_modulo_wall_time(work, capsys):
    _, first, _ = run_json(capsys, "power", work / "t_db.gt", "-m", "2")
    _, second, _ = run_json(capsys, "power", work / "t_db.gt", "-m", "2")
    first.pop("wall_time_s")
    second.pop("wall_time_s")
    assert first == second


def test_power_cell_limit_is_an_abort(work, capsys):
    code, _, err = run(
        capsys, "power", work / "t_db.gt", "-m", "25", "--max-cells", "1000"
    )
    assert code == 2
    assert "--max-cells" in err


def test_hrefine_reproduces_the_stored_golden(work, capsys):
    out_path = work / "split.gt"
    code, _, _ = run(capsys, "hrefine", work / "t_db.gt", "-o", out_path)
    assert code == 0
    assert out_path.read_bytes() == golden_bytes("t_fs")


def test_inverse_round_trips(work, capsys):
    mid = work / "inv.gt"
    back = work / "inv.inverse.gt"
    assert run(capsys, "inverse", work / "t_aw.gt", "-o", mid)[0] == 0
    assert run(capsys, "inverse", mid)[0] == 0
    assert back.read_bytes() == (work / "t_aw.gt").read_bytes()


def test_refine_s_reproduces_the_stored_golden(work, capsys):
    out_path = work / "cut.gt"
    code, report, _ = run_json(
        capsys, "refine-s", work / "t_fs.gt", "--orbit", "1,2", "-o", out_path
    )
    assert code == 0
    assert out_path.read_bytes() == golden_bytes("t_fs_refined_12")
    assert report["result"]["bookkeeping"]["side"] == "s"
    assert report["result"]["bookkeeping"]["orbits"] == [[1, 2]]


def test_refine_s_refuses_non_binary_input(work, capsys):
    code, _, err = run(
        capsys, "refine-s", work / "t_aw.gt", "--orbit", "1,2"
    )
    assert code == 1
    assert "hrefine" in err  # points at the cell-splitting remedy


def test_corner_binarizes_when_needed(work, capsys):
    out_path = work / "cornered.gt"
    code, report, _ = run_json(
        capsys, "corner", work / "t_aw.gt", "-o", out_path
    )
    assert code == 0
    assert report["result"]["binarized"] is True
    assert has_corner_property(load_type(out_path))


def test_joint_writes_two_corner_types(work, capsys):
    cut = work / "cut.gt"
    assert run(capsys, "refine-s", work / "t_fs.gt", "--orbit", "1,2", "-o", cut)[0] == 0
    a_path = work / "a.gt"
    b_path = work / "b.gt"
    code, _, _ = run(
        capsys, "joint", work / "t_fs.gt", cut, "-o", a_path, b_path
    )
    assert code == 0
    for p in (a_path, b_path):
        assert has_corner_property(load_type(p))


def test_compare_verdicts_and_exit_codes(work, capsys):
    code, report, _ = run_json(
        capsys, "compare", work / "t_aw.gt", work / "t_aw.gt", "--trust-pa"
    )
    assert code == 0
    assert report["result"]["verdict"].startswith("compatible")
    code, report, _ = run_json(
        capsys, "compare", work / "t_aw.gt", work / "t_g2.gt", "--trust-pa"
    )
    assert code == 1
    assert report["result"]["verdict"] == "necessarily distinct"


def test_compare_gate_refuses_undecided_pairs(work, capsys):
    code, report, err = run_json(
        capsys, "compare", work / "t_aw.gt", work / "t_hs.gt"
    )
    assert code == 1
    assert report["result"]["refused"] is True


def test_orbits_listing(work, capsys):
    code, report, _ = run_json(
        capsys, "orbits", work / "t_fs.gt", "--max-period", "3"
    )
    assert code == 0
    words = [o["word"] for o in report["result"]["orbits"]]
    assert words == [[1], [2], [1, 2], [1, 1, 2], [1, 2, 2]]


def test_reports_validate_against_the_published_schema(work, capsys):
    jsonschema = pytest.importorskip("jsonschema")
    from pathlib import Path

    schema = json.loads(
        (Path(__file__).resolve().parents[1] / "docs" / "schemas" /
         "run-report.v1.schema.json").read_text()
    )
    validator = jsonschema.Draft202012Validator(schema)
    reports = []
    reports.append(run_json(capsys, "validate", work / "t_aw.gt")[1])
    reports.append(run_json(capsys, "check", work / "t_hs.gt")[1])
    reports.append(run_json(capsys, "genus", work / "t_sq.gt", "--trust-pa")[1])
    reports.append(run_json(capsys, "power", work / "t_db.gt", "-m", "2")[1])
    reports.append(
        run_json(capsys, "compare", work / "t_aw.gt", work / "t_g2.gt",
                 "--trust-pa")[1]
    )
    reports.append(run_json(capsys, "orbits", work / "t_fs.gt")[1])
    for report in reports:
        validator.validate(report)
