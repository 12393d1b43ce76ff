import json
import subprocess
import sys

import pytest

from cwfkit import presets as P
from cwfkit.cli import main
from cwfkit.fibration import is_discrete
from cwfkit.presentation import decode, encode, parse


@pytest.fixture
def gen(tmp_path):
    def make(preset, *params):
        out = tmp_path / f"{preset}{'_'.join(params).replace(':', '-')}.json"
        assert main(["gen", preset, *params, "-o", str(out)]) == 0
        return str(out)
    return make


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _records(out):
    return [json.loads(s) for s in out.splitlines()]


# -- exit codes ---------------------------------------------------------------

def test_check_generated_b2_passes(gen, capsys):
    code, out, _ = _run(capsys, "check", gen("boolean_poset", "2"))
    assert code == 0 and out.startswith("PASS check")


def test_check_corrupted_b2_fails_with_witness(gen, capsys):
    code, out, err = _run(capsys, "check", gen("corrupt_b2"))
    assert code == 1
    assert "FAIL" in out and "violation" in out
    assert "check failed" in err and "[" in err


def test_corrupt_compcat_names_the_lost_pullback(gen, capsys):
    code, out, err = _run(capsys, "check", "--format", "structured", gen("corrupt_cod_compcat"))
    assert code == 1
    bad = [r for r in _records(out) if r.get("violations")]
    assert bad and bad[0]["violations"][0]["law"] == "cartesian arrow not sent to a pullback"
    assert "cartesian arrow not sent to a pullback" in err


def test_syntax_error_is_an_input_error_with_location(tmp_path, capsys):
    f = tmp_path / "broken.json"
    f.write_text('{"format":\n  oops}\n')
    code, _, err = _run(capsys, "check", str(f))
    assert code == 2 and f"{f}:2:3" in err


def test_dangling_id_is_an_input_error_naming_it(gen, capsys):
    path = gen("boolean_poset", "2")
    d = json.loads(open(path).read())
    d["categories"]["B2"]["identities"]["a"] = "a<=q"
    with open(path, "w") as fh:
        json.dump(d, fh)
    code, _, err = _run(capsys, "check", path)
    assert code == 2 and "'a<=q'" in err


def test_missing_file_and_unknown_preset_are_input_errors(tmp_path, capsys):
    assert _run(capsys, "check", str(tmp_path / "nothing.json"))[0] == 2
    assert _run(capsys, "gen", "moebius")[0] == 2
    assert _run(capsys, "gen", "boolean_poset", "7")[0] == 2


def test_translate_from_wrong_kind_is_an_input_error(gen, capsys):
    code, _, err = _run(capsys, "translate", "--from", "gcwf", "--to", "compcat", gen("cod_fibration"))
    assert code == 2 and "not a gcwf" in err


def test_structure_commands_reject_plain_categories(gen, capsys):
    assert _run(capsys, "lemmas", gen("chain", "2"))[0] == 2


def test_module_entry_point(gen):
    res = subprocess.run([sys.executable, "-m", "cwfkit", "check", gen("terminal")],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "PASS" in res.stdout


# -- commands -----------------------------------------------------------------

def test_roundtrip_on_cod_b2(gen, capsys):
    code, out, _ = _run(capsys, "roundtrip", "--format", "structured", gen("cod_fibration"))
    assert code == 0
    recs = _records(out)
    assert all(r["ok"] for r in recs)
    names = {r["check"].split("/")[1] for r in recs if r["check"].count("/") == 1}
    assert {n.split(" ")[0] for n in names} == {"compcat-roundtrip", "wccmd-roundtrip", "wc-roundtrip",
                                                 "unit-equivalence"}


def test_roundtrip_on_a_cwf_includes_the_discrete_round_trip(gen, capsys):
    code, out, _ = _run(capsys, "roundtrip", gen("presheaf_cwf", "two_cwf"))
    assert code == 0 and "discrete-roundtrip" in out


def test_translate_dcwf1_to_a_discrete_compcat(gen, tmp_path, capsys):
    out = tmp_path / "t.json"
    code, _, _ = _run(capsys, "translate", "--from", "gcwf", "--to", "compcat", gen("presheaf_cwf"),
                      "-o", str(out))
    assert code == 0
    c = decode(parse(out))
    assert is_discrete(c.fibration)
    assert _run(capsys, "check", str(out))[0] == 0


TRANSLATABLE = [("cod_fibration", (), "compcat"), ("display_map", ("boolean_poset:2", "meet:a"), "compcat"),
                ("identity_wc", ("walking_arrow",), "wccmd"), ("chaotic_gcwf", (), "gcwf"),
                ("presheaf_cwf", ("two_types",), "gcwf"), ("swap_morphism", (), "compcat"),
                ("chaotic_swap", (), "compcat")]


@pytest.mark.parametrize("preset,params,kind", TRANSLATABLE)
@pytest.mark.parametrize("target", ["compcat", "wccmd", "gcwf"])
def test_translate_output_revalidates(gen, tmp_path, capsys, preset, params, kind, target):
    out = tmp_path / "out.json"
    code, _, _ = _run(capsys, "translate", "--from", kind, "--to", target, gen(preset, *params), "-o", str(out))
    assert code == 0
    assert _run(capsys, "check", str(out))[0] == 0


def test_lemmas_and_equivalence_pass_on_fixtures(gen, capsys):
    for path in (gen("chaotic_gcwf"), gen("predicate_compcat"), gen("presheaf_cwf", "two_cwf")):
        assert _run(capsys, "lemmas", path)[0] == 0
        assert _run(capsys, "equivalence", path)[0] == 0


def test_heart_reflection_on_predicates(gen, capsys):
    code, out, _ = _run(capsys, "heart", "--format", "structured", gen("predicate_compcat"))
    assert code == 0
    refl = [r for r in _records(out) if r["check"].startswith("heart/heart reflection")]
    assert refl[0]["info"]["from_heart"] == refl[0]["info"]["from_input"] == 48


def test_heart_budget_exhaustion_is_a_check_failure(gen, capsys):
    code, out, err = _run(capsys, "heart", "--budget", "10", gen("predicate_compcat"))
    assert code == 1 and "budget exceeded" in out + err


def test_enumerate_homset_between_cwfs(gen, capsys):
    two = gen("presheaf_cwf", "two_cwf")
    types = gen("presheaf_cwf", "two_types")
    code, out, _ = _run(capsys, "enumerate-homset", "--format", "structured", two, types)
    assert code == 0
    top = [r for r in _records(out) if r["check"] == "enumerate-homset/homset"][0]
    assert top["info"]["count"] == 4 and top["info"]["preserving_chosen_lifts"] == 2


def test_enumerate_homset_between_compcats(gen, capsys):
    c = gen("cod_fibration", "walking_arrow")
    code, out, _ = _run(capsys, "enumerate-homset", "--class", "strict", "--format", "structured", c, c)
    assert code == 0
    top = [r for r in _records(out) if r["check"] == "enumerate-homset/homset"][0]
    assert top["info"]["class"] == "strict" and top["info"]["count"] >= 1


# -- determinism --------------------------------------------------------------

@pytest.mark.parametrize("cmd", ["roundtrip", "lemmas", "heart"])
def test_structured_reports_are_byte_identical_across_runs_and_jobs(gen, tmp_path, cmd):
    path = gen("display_map", "boolean_poset:2", "meet:a")
    outs = []
    for jobs in ("1", "1", "4"):
        out = tmp_path / f"r{len(outs)}.txt"
        assert main([cmd, "--format", "structured", "--jobs", jobs, path, "-o", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_check_many_files_keeps_order_under_jobs(gen, tmp_path):
    files = [gen("terminal"), gen("corrupt_b2"), gen("chain", "3"), gen("cod_fibration")]
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["check", "--format", "structured", *files, "-o", str(a)]) == 1
    assert main(["check", "--format", "structured", "--jobs", "3", *files, "-o", str(b)]) == 1
    assert a.read_bytes() == b.read_bytes()


def test_timing_is_recorded_only_on_request(gen, capsys):
    path = gen("terminal")
    _, out, _ = _run(capsys, "check", "--format", "structured", "--timing", path)
    assert "seconds" in _records(out)[1]["info"]
    _, out, _ = _run(capsys, "check", "--format", "structured", path)
    assert "seconds" not in out


def test_gen_output_is_canonical(gen):
    path = gen("chaotic_swap")
    text = open(path).read()
    assert parse(path).dumps() == text and decode(parse(path)) == P.chaotic_swap()
    assert encode(P.chaotic_swap(), description="generated by preset chaotic_swap").dumps() == text
