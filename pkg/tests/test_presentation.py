import json

import pytest
from hypothesis import given, strategies as st

from conftest import compcats, gcwfs, wccmds
from cwfkit import presets as P
from cwfkit.kernel import Report
from cwfkit.presentation import (
    PRESETS, IntegrityError, PresentationError, decode, emit, encode, generate, parse, parse_text,
)
from cwfkit.presets import PresetError

FIXTURES = {
    "B2": P.boolean_poset(2),
    "Chain3": P.chain(3),
    "swap": P.swap_morphism(),
    "chaotic swap": P.chaotic_swap(),
    "chaotic swap cell": P.chaotic_swap_cell(),
    "lax initial": P.initial_to_identities(),
    **compcats(), **wccmds(), **gcwfs(),
}


def _b2_dict():
    return generate("boolean_poset", ["2"]).to_dict()


# -- parsing ------------------------------------------------------------------

def test_boolean_poset_2_is_a_category_presentation():
    pres = generate("boolean_poset", ["2"])
    assert pres.kind == "category" and pres.name == "B2"
    assert decode(pres) == P.boolean_poset(2)


def test_parse_reads_a_file(tmp_path):
    f = tmp_path / "b2.json"
    f.write_text(generate("boolean_poset", ["2"]).dumps())
    assert decode(parse(f)) == P.boolean_poset(2)


def test_syntax_error_has_line_and_column():
    text = '{\n  "format": "cwfkit-presentation/1",\n  "kind": category\n}\n'
    with pytest.raises(PresentationError) as exc:
        parse_text(text, "broken.json")
    assert exc.value.location == "broken.json:3:11"


def test_missing_file_is_a_presentation_error(tmp_path):
    with pytest.raises(PresentationError):
        parse(tmp_path / "absent.json")


def test_schema_violation_names_the_path():
    d = _b2_dict()
    d["kind"] = "sheaf"
    with pytest.raises(PresentationError) as exc:
        parse_text(json.dumps(d), "x.json")
    assert "kind" in exc.value.location


def test_dangling_arrow_id_is_named():
    d = _b2_dict()
    d["categories"]["B2"]["composition"].append(["a<=ab", "0<=a", "0<=zz"])
    with pytest.raises(IntegrityError) as exc:
        parse_text(json.dumps(d))
    assert exc.value.ident == "0<=zz" and "0<=zz" in str(exc.value)


def test_dangling_object_in_arrow_table_is_named():
    d = _b2_dict()
    d["categories"]["B2"]["arrows"]["a<=ab"] = ["a", "c"]
    with pytest.raises(IntegrityError) as exc:
        parse_text(json.dumps(d))
    assert exc.value.ident == "c" and "arrows/a<=ab" in exc.value.location


def test_dangling_category_reference_is_named():
    d = _b2_dict()
    d["payload"] = {"category": "B3"}
    with pytest.raises(IntegrityError) as exc:
        parse_text(json.dumps(d))
    assert exc.value.ident == "B3"


def test_malformed_id_rejected():
    d = _b2_dict()
    d["categories"]["B2"]["objects"].append("has space")
    with pytest.raises(PresentationError):
        parse_text(json.dumps(d))


# -- canonical round trip -----------------------------------------------------

@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_encode_parse_is_byte_identical(name):
    x = FIXTURES[name]
    text = encode(x).dumps()
    again = encode(decode(parse_text(text))).dumps()
    assert again == text
    assert parse_text(text).dumps() == text


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_decode_recovers_the_object(name):
    x = FIXTURES[name]
    assert decode(parse_text(encode(x).dumps())) == x


def test_key_order_in_input_does_not_change_output():
    text = generate("cod_fibration").dumps()
    shuffled = json.dumps(json.loads(text), indent=None, sort_keys=False)
    assert parse_text(shuffled).dumps() == text


# -- generators ---------------------------------------------------------------

PRESET_CALLS = [
    ("terminal", []), ("walking_arrow", []), ("walking_cospan", []),
    ("boolean_poset", ["1"]), ("boolean_poset", ["3"]), ("chain", ["2"]),
    ("cod_fibration", []), ("cod_fibration", ["chain:3"]), ("display_map", ["boolean_poset:2", "meet:a"]),
    ("predicate_compcat", []), ("chaotic_compcat", []), ("identity_wc", ["boolean_poset:2"]),
    ("chaotic_gcwf", []), ("presheaf_cwf", []), ("presheaf_cwf", ["two_cwf"]),
    ("swap_morphism", []), ("chaotic_swap", []), ("initial_to_identities", []),
]


def test_every_preset_is_exercised():
    assert {p for p, _ in PRESET_CALLS} | {"corrupt_b2", "corrupt_cod_compcat"} == set(PRESETS)


@pytest.mark.parametrize("preset,params", PRESET_CALLS)
def test_generated_presets_pass_their_checker(preset, params):
    from cwfkit.cli import check_object
    x = decode(parse_text(generate(preset, params).dumps()))
    assert check_object(x).ok


@pytest.mark.parametrize("preset", ["corrupt_b2", "corrupt_cod_compcat"])
def test_corrupt_presets_are_rejected(preset):
    from cwfkit.cli import check_object
    assert not check_object(decode(generate(preset))).ok


def test_presheaf_tables_from_file_reproduce_dcwf1(tmp_path):
    f = tmp_path / "one.json"
    f.write_text(json.dumps({"base": "terminal", "types": {"*": ["U"]}, "terms": {"*": {"u0": "U"}},
                             "extension": [["*", "U", "*", "id_*", "u0"]], "name": "DCwf1"}))
    assert decode(generate("presheaf_cwf", [str(f)])) == P.dcwf1()


def test_inconsistent_presheaf_tables_raise(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"base": "terminal", "types": {"*": ["U"]}, "terms": {"*": {"u0": "V"}}}))
    with pytest.raises(PresetError):
        generate("presheaf_cwf", [str(f)])


@pytest.mark.parametrize("preset,params", [("nope", []), ("boolean_poset", ["x"]),
                                           ("boolean_poset", ["9"]), ("cod_fibration", ["ring:2"]),
                                           ("presheaf_cwf", ["/no/such/file"])])
def test_bad_preset_parameters_raise(preset, params):
    with pytest.raises(PresetError):
        generate(preset, params)


def test_generation_is_deterministic():
    for preset, params in PRESET_CALLS:
        assert generate(preset, params).dumps() == generate(preset, params).dumps()


# -- report rendering ---------------------------------------------------------

def _report():
    r = Report("top")
    r.info["n"] = 3
    a = r.add(Report("child a"))
    a.fail("some law", "x", "y")
    b = r.add(Report("child b"))
    b.error("budget exceeded", "search")
    return r


def test_text_report_marks_pass_and_fail():
    lines = emit(_report()).decode().splitlines()
    assert lines[0] == "FAIL top"
    assert "  FAIL child a" in lines and "    violation some law: x, y" in lines


def test_structured_report_is_one_json_object_per_line():
    lines = emit(_report(), "structured").decode().splitlines()
    recs = [json.loads(s) for s in lines]
    assert [r["check"] for r in recs] == ["top", "top/child a", "top/child b"]
    assert recs[1]["violations"][0]["witness"] == ["x", "y"]
    assert recs[0]["info"] == {"n": 3}


def test_unknown_format_rejected():
    with pytest.raises(ValueError):
        emit(Report("x"), "yaml")


@given(st.lists(st.tuples(st.text(min_size=1, max_size=5), st.booleans()), max_size=6))
def test_emit_is_deterministic(children):
    def build():
        r = Report("root")
        for name, bad in children:
            c = r.add(Report(name))
            if bad:
                c.fail("law", name)
        return r
    for fmt in ("text", "structured"):
        assert emit(build(), fmt) == emit(build(), fmt)


def test_structured_records_match_the_report_schema():
    import jsonschema
    from importlib import resources
    from cwfkit.cli import roundtrip_tasks, _run_tasks
    schema = json.loads(resources.files("cwfkit").joinpath("schema/report.schema.json").read_text())
    reports = [_report(), _run_tasks("roundtrip", roundtrip_tasks(P.dcwf1()), 1, True)]
    for r in reports:
        for line in emit(r, "structured").decode().splitlines():
            jsonschema.validate(json.loads(line), schema)
