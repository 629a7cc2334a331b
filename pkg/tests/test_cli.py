"""Command line interface: goldens, exit codes, JSON stability."""

import io
import json

import pytest

from probfpc.cli import main

from conftest import example


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


# --- check ---------------------------------------------------------------------

def test_check_reports_the_type():
    code, out, err = run(["check", example("fair.pfpc")])
    assert (code, err) == (0, "")
    assert out == "Unit -> Unit + Unit\n"
    assert run(["check", example("id.pfpc")])[1] == "Nat -> Nat\n"
    assert run(["check", example("randw2_head.pfpc")])[1] == "Nat + Unit\n"


def test_check_rejects_ill_typed_file(tmp_path):
    bad = tmp_path / "bad.pfpc"
    bad.write_text("fst *\n")
    code, out, err = run(["check", str(bad)])
    assert code == 1 and out == ""
    assert err.startswith("probfpc:") and "product type" in err and "line 1" in err


def test_check_missing_and_empty_files(tmp_path):
    code, _, err = run(["check", str(tmp_path / "nope.pfpc")])
    assert code == 1 and err.startswith("probfpc:")
    empty = tmp_path / "empty.pfpc"
    empty.write_text("-- nothing here\n")
    code, _, err = run(["check", str(empty)])
    assert code == 1 and "expected a term" in err


# --- probterm ------------------------------------------------------------------

def test_probterm_geo_table():
    code, out, err = run(["probterm", example("geo.pfpc"), "--depth", "3"])
    assert (code, err) == (0, "")
    assert out == ("depth  probterm\n"
                   "    0  1/2\n"
                   "    1  3/4\n"
                   "    2  7/8\n"
                   "    3  15/16\n")


def test_probterm_diverge_is_zero():
    code, out, _ = run(["probterm", example("diverge.pfpc"), "--depth", "4"])
    assert code == 0
    assert all(line.endswith("  0") for line in out.splitlines()[1:])


def test_probterm_star_terminates_immediately(tmp_path):
    f = tmp_path / "star.pfpc"
    f.write_text("*\n")
    code, out, _ = run(["probterm", str(f), "--depth", "2"])
    assert code == 0
    assert [l.split()[-1] for l in out.splitlines()[1:]] == ["1", "1", "1"]


def test_probterm_json_is_byte_stable():
    argv = ["probterm", example("geo.pfpc"), "--depth", "6", "--format", "json"]
    a, b = run(argv)[1], run(argv)[1]
    assert a == b
    doc = json.loads(a)
    assert doc["probterm"][0] == "1/2"
    assert doc["depths"] == list(range(7))


def test_probterm_approx_column():
    code, out, _ = run(["probterm", example("geo.pfpc"), "--depth", "1",
                        "--approx"])
    assert code == 0
    assert "0.500000" in out and "0.750000" in out


def test_probterm_denotational_modes():
    for mode in ("den", "den-steps"):
        code, out, _ = run(["probterm", example("geo.pfpc"), "--depth", "4",
                            "--mode", mode])
        assert code == 0 and out.startswith("depth  probterm")


# --- compare -------------------------------------------------------------------

def test_compare_program_with_itself_exactly():
    code, out, _ = run(["compare", example("fair_harness.pfpc"),
                        example("fair_harness.pfpc"), "--eps", "0"])
    assert code == 0
    assert out.startswith("eqlim holds at eps=0, depth=64")


def test_compare_fair_and_coin_harnesses():
    # the operational sequences at depth 64 still differ by about (5/9)^6,
    # beyond the default tolerance; the verdict is honestly inconclusive
    code, out, _ = run(["compare", example("fair_harness.pfpc"),
                        example("coin_harness.pfpc")])
    assert code == 2 and out.startswith("inconclusive")
    # the standard denotational reading of the left side settles it
    code, out, _ = run(["compare", example("fair_harness.pfpc"),
                        example("coin_harness.pfpc"), "--mode-a", "den"])
    assert code == 0 and out.startswith("eqlim holds")
    # as does a deeper operational run
    code, out, _ = run(["compare", example("fair_harness.pfpc"),
                        example("coin_harness.pfpc"), "--depth", "256"])
    assert code == 0 and out.startswith("eqlim holds")


def test_compare_json_keys():
    code, out, _ = run(["compare", example("coin_harness.pfpc"),
                        example("coin_harness.pfpc"), "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["holds"] is True
    for key in ("eps", "depth", "mode_a", "mode_b", "max_a", "max_b"):
        assert key in doc


def test_compare_requires_unit_programs():
    code, _, err = run(["compare", example("geo.pfpc"), example("geo.pfpc")])
    assert code == 1 and "Unit" in err


# --- refine --------------------------------------------------------------------

def test_refine_hesitant_identity_both_directions():
    for a, b in (("id_hes.pfpc", "id.pfpc"), ("id.pfpc", "id_hes.pfpc")):
        code, out, _ = run(["refine", example(a), example(b)])
        assert code == 0
        assert out.startswith("Holds: 4 probes passed (fuel=6, horizon=64")


def test_refine_random_walk_heads_both_directions():
    for a, b in (("randw_even_head.pfpc", "randw2_head.pfpc"),
                 ("randw2_head.pfpc", "randw_even_head.pfpc")):
        code, out, _ = run(["refine", example(a), example(b), "--fuel", "4"])
        assert code == 0
        assert out.startswith("Holds: per-level couplings found (fuel=4")


def test_refine_distinct_numerals_is_inconclusive(tmp_path):
    z, o = tmp_path / "z.pfpc", tmp_path / "o.pfpc"
    z.write_text("0\n")
    o.write_text("1\n")
    code, out, _ = run(["refine", str(z), str(o)])
    assert code == 2 and out.startswith("Unknown")


def test_refine_requires_one_type():
    code, _, err = run(["refine", example("id.pfpc"), example("fair.pfpc")])
    assert code == 1 and "one type on both sides" in err


def test_refine_json_trace():
    code, out, _ = run(["refine", example("id_hes.pfpc"), example("id.pfpc"),
                        "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["holds"] is True and "trace" in doc


# --- examples -------------------------------------------------------------------

def test_examples_list():
    code, out, _ = run(["examples", "list"])
    assert code == 0
    names = [line.split()[0] for line in out.splitlines()]
    assert names == ["geo", "id_hes", "fair_from", "randw", "randw2",
                     "everysnd", "lazylist-ops", "diverge"]


def test_examples_run_geo():
    code, out, _ = run(["examples", "run", "geo", "--depth", "4"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "type: Nat"
    assert [l.split()[-1] for l in lines[2:]] == ["0", "0", "1/2", "1/2", "1/2"]


def test_examples_run_with_arguments():
    code, out, _ = run(["examples", "run", "geo(2/3)", "--depth", "2"])
    assert code == 0
    assert out.splitlines()[-1].endswith("2/3")


def test_examples_run_unknown_name():
    code, _, err = run(["examples", "run", "nonesuch"])
    assert code == 1 and err.startswith("probfpc:")


# --- global flags ----------------------------------------------------------------

def test_seed_flag_and_env(monkeypatch):
    code, out, _ = run(["--seed", "7", "examples", "run", "geo", "--depth", "1"])
    assert code == 0
    monkeypatch.setenv("PROBFPC_SEED", "11")
    assert run(["examples", "run", "geo", "--depth", "1"])[0] == 0
    monkeypatch.setenv("PROBFPC_SEED", "eleven")
    code, _, err = run(["examples", "run", "geo", "--depth", "1"])
    assert code == 0 and "ignoring non-integer PROBFPC_SEED" in err


def test_negative_tolerance_rejected():
    with pytest.raises(SystemExit):
        main(["compare", example("coin_harness.pfpc"),
              example("coin_harness.pfpc"), "--eps=-1/2"],
             out=io.StringIO(), err=io.StringIO())
