"""Command surface: exit codes, pinned output rows, ledger handling, the
resolution harness, and the coverage cross-check."""

import contextlib
import io
import json
import shutil
from pathlib import Path

from loopchains.cli import (MANIFEST, SUITES, certify_assignment, main,
                            resolve_conventions)
from loopchains.conventions import CHOICES, DEFAULT, parse_ledger, serialize_ledger

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


def fx(*argv):
    return run_cli("--fixtures", str(FIXTURES), *argv)


def copy_fixtures(tmp_path):
    dst = tmp_path / "fixtures"
    shutil.copytree(FIXTURES, dst)
    return dst


# -- exit codes --------------------------------------------------------------------

def test_verify_all_passes_at_seed_7():
    code, out, _ = fx("verify", "all", "--seed", "7")
    assert code == 0
    for name in ("ledger", "signs", "cobar", "t_chain_map", "hochschild",
                 "freeloop", "s1", "boxquot"):
        assert f"{name}: pass" in out
    assert f"coverage: pass ({len(MANIFEST)} operations)" in out


def test_unknown_subcommand_exits_2():
    code, _, _ = run_cli("entropy")
    assert code == 2


def test_unknown_flag_exits_2():
    code, _, _ = fx("verify", "all", "--entropy", "9")
    assert code == 2


def test_missing_target_exits_2():
    code, _, _ = fx("verify")
    assert code == 2


def test_verify_cobar_target_includes_the_comparison_map():
    code, out, _ = fx("verify", "cobar")
    assert code == 0
    assert "cobar: pass" in out
    assert "t_chain_map: pass" in out


def test_verify_signs_only():
    code, out, _ = fx("verify", "signs")
    assert code == 0
    assert out.startswith("signs: pass")
    assert "cobar" not in out


# -- fixture subcommands -----------------------------------------------------------

def test_homology_rows_for_the_projective_plane():
    code, out, _ = fx("homology", str(FIXTURES / "rp2.json"))
    assert code == 0
    assert out == "0\t1\t-\n1\t0\t2\n2\t0\t-\n"


def test_homology_json_format():
    code, out, _ = fx("homology", str(FIXTURES / "torus_7.json"),
                      "--format", "json")
    assert code == 0
    assert json.loads(out) == {
        "0": {"rank": 1, "torsion": []},
        "1": {"rank": 2, "torsion": []},
        "2": {"rank": 1, "torsion": []},
    }


def test_homology_out_flag_writes_the_file(tmp_path):
    target = tmp_path / "rows.tsv"
    code, out, _ = fx("homology", str(FIXTURES / "s1_3.json"),
                      "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == "0\t1\t-\n1\t1\t-\n"


def test_homology_missing_fixture_exits_1():
    code, _, err = fx("homology", str(FIXTURES / "absent.json"))
    assert code == 1
    assert "error:" in err


def test_hh_circle_rank_four_at_weight_three():
    code, out, _ = fx("hh", str(FIXTURES / "s1_3.json"),
                      "--degree", "0", "--max-weight", "3")
    assert code == 0
    assert out == ("degree\t0\nmax_weight\t3\nrank\t4\ntorsion\t-\n"
                   "stabilized\tno\n")


def test_hh_json_format():
    code, out, _ = fx("hh", str(FIXTURES / "s1_3.json"), "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["rank"] == 4
    assert payload["torsion"] == []


def test_cobar_word_counts_on_the_sphere():
    code, out, _ = fx("cobar", str(FIXTURES / "boundary_delta3.json"),
                      "--max-weight", "4")
    assert code == 0
    assert out == ("words\t273\ndegree\t-2\t16\ndegree\t-1\t136\n"
                   "degree\t0\t121\nd2\tok\n")


def test_t_map_torus_summary():
    code, out, _ = fx("t-map", str(FIXTURES / "torus_7.json"))
    assert code == 0
    assert out == ("cells\t29\nnonzero residuals\t0\ncorner terms\t42\n"
                   "corners balanced\tyes\nstatus\tok\n")


# -- resolution --------------------------------------------------------------------

def test_resolution_is_unique_and_matches_the_committed_ledger():
    conv, log = resolve_conventions(FIXTURES)
    assert conv == DEFAULT
    assert log == ("stage one: 1 of 128 assignments certified",
                   "stage two: 1 of 64 assignments certified")
    stored = (FIXTURES / "conventions.ledger").read_text()
    assert stored == serialize_ledger(conv)
    assert parse_ledger(stored) == conv


def test_resolve_command_is_byte_deterministic(tmp_path):
    first = tmp_path / "a.ledger"
    second = tmp_path / "b.ledger"
    code, out, _ = fx("resolve", "--out", str(first))
    assert code == 0
    assert "stage one: 1 of 128" in out
    code, _, _ = fx("resolve", "--out", str(second))
    assert code == 0
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text() == (FIXTURES / "conventions.ledger").read_text()


def test_every_single_entry_flip_fails_certification():
    for name in CHOICES:
        reason = certify_assignment(FIXTURES, DEFAULT.flip(name))
        assert reason is not None, name


# -- ledger tampering --------------------------------------------------------------

def test_tampered_ledger_value_fails_verify(tmp_path):
    fixtures = copy_fixtures(tmp_path)
    path = fixtures / "conventions.ledger"
    path.write_text(path.read_text().replace(
        "t_word_sign      = corrected", "t_word_sign      = printed"))
    code, out, _ = run_cli("--fixtures", str(fixtures), "verify", "all")
    assert code == 1
    assert "ledger: FAIL" in out
    assert "t_chain_map: FAIL" in out
    assert "signs: pass" in out


def test_unparseable_ledger_fails_verify(tmp_path):
    fixtures = copy_fixtures(tmp_path)
    (fixtures / "conventions.ledger").write_text("mu2_order = upside_down\n")
    code, out, _ = run_cli("--fixtures", str(fixtures), "verify", "all")
    assert code == 1
    assert "note:" in out
    assert "ledger: FAIL" in out


def test_missing_ledger_is_noted_and_fails_only_the_ledger_suite(tmp_path):
    fixtures = copy_fixtures(tmp_path)
    (fixtures / "conventions.ledger").unlink()
    code, out, _ = run_cli("--fixtures", str(fixtures), "verify", "s1")
    assert code == 0
    assert out.startswith("note: conventions.ledger not found")
    code, out, _ = run_cli("--fixtures", str(fixtures), "verify", "all")
    assert code == 1
    assert "ledger: FAIL" in out
    assert "boxquot: pass" in out


# -- report ------------------------------------------------------------------------

def test_report_is_green_and_byte_deterministic():
    code, first, _ = fx("report", "--seed", "7")
    assert code == 0
    code, second, _ = fx("report", "--seed", "7")
    assert code == 0
    assert first == second
    assert "artifact bugs: 0" in first
    assert "classified failures: 2226/2226" in first
    # the six pinned counterexamples for identities suspected of misprints
    assert "degrees=(0,) d1=0 r=1" in first
    assert "(1 ; t[1,2])" in first
    assert "(t[1,2]*t[2,0,1])" in first
    assert "(q[1,2|2,0|0,1])" in first
    assert "(q[0,1,2|2,3|3,0])" in first
    assert "face 1(0) commutes (level side)" in first
    assert "circle_cubes\tagree\tconcat=2" in first


def test_report_json_payload():
    code, out, _ = fx("report", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    assert payload["artifact_bugs"] == 0
    assert len(payload["suspected_typos"]) == 6
    assert payload["homology"]["rp2"]["1"] == {"rank": 0, "torsion": [2]}
    assert payload["hochschild_circle"]["3"]["rank"] == 4


def test_report_on_empty_fixture_directory(tmp_path):
    code, out, _ = run_cli("--fixtures", str(tmp_path), "report")
    assert code == 0
    assert out == "no fixtures\n"


def test_report_marks_the_certifying_suite_on_tamper(tmp_path):
    fixtures = copy_fixtures(tmp_path)
    path = fixtures / "conventions.ledger"
    path.write_text(path.read_text().replace(
        "pi2_bsplit_sign  = geometric", "pi2_bsplit_sign  = printed"))
    code, out, _ = run_cli("--fixtures", str(fixtures), "report")
    assert code == 1
    assert "[t_chain_map: FAIL]" in out
    assert "failing checks:" in out
    assert "artifact bugs:" not in out


# -- coverage manifest -------------------------------------------------------------

def test_manifest_and_suite_covers_agree():
    claimed = {}
    for suite in SUITES.values():
        for op in suite.covers:
            assert op not in claimed, f"{op} claimed twice"
            claimed[op] = suite.name
    assert claimed == MANIFEST


def test_every_module_contributes_operations():
    prefixes = {op.split(".")[0] for op in MANIFEST}
    assert prefixes == {"exactalg", "signkoszul", "simpcx", "cobarloop",
                        "hochschild", "freeloop", "boxquot", "cli"}
