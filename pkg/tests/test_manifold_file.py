import json

import pytest

from handlecalc import cli
from handlecalc import manifold_file as MF
from handlecalc.kirby import companion_link
from handlecalc.bundles import build_cacime

ALL_TARGETS = [("surface", {"genus": 1}), ("surface", {"genus": 3}), ("sigma2xT2", {}), ("E", {}),
               ("Eprime", {}), ("E0", {}), ("cacime", {}), ("cacime", {"gluing_word": "[x1,y1]"})]


@pytest.mark.parametrize("target, params", ALL_TARGETS)
def test_round_trip(target, params):
    mf = cli.build_target(target, **params)
    text = MF.serialize(mf)
    back = MF.parse(text)
    assert back == mf
    assert MF.serialize(back) == text


def test_word_serialisation_uses_names():
    text = MF.serialize(cli.build_target("surface", genus=1))
    data = json.loads(text)
    assert data["format_version"] == 1
    assert data["handlebody"]["relators"] == [[["x1", 1], ["y1", 1], ["x1", -1], ["y1", -1]]]
    assert data["framed_link"]["linking"] == [[0, 0, 0], [0, 0, 0], [0, 0, 0]]


def test_exponents_expand_on_read():
    data = json.loads(MF.serialize(cli.build_target("surface", genus=1)))
    data["handlebody"]["relators"] = [[["x1", 2], ["x1", -1]]]
    data["framed_link"] = None
    mf = MF.from_json(data)
    assert mf.handlebody.presentation.relators == (((0, 1),),)


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d.update(format_version=2), "$.format_version"),
    (lambda d: d["handlebody"].update(n3="x"), "$.handlebody.n3"),
    (lambda d: d["handlebody"]["relators"][0].append(["q", 1]), "$.handlebody.relators[0][4]"),
    (lambda d: d["framed_link"]["linking"][0].__setitem__(1, 5), "$.framed_link"),
    (lambda d: d.pop("handlebody"), "$"),
])
def test_parse_errors_carry_location(mutate, where):
    data = json.loads(MF.serialize(cli.build_target("surface", genus=1)))
    mutate(data)
    with pytest.raises(MF.ParseError) as err:
        MF.from_json(data)
    assert err.value.location == where


def test_json_syntax_error_location():
    with pytest.raises(MF.ParseError) as err:
        MF.parse('{"format_version": 1,\n  "handlebody": }')
    assert err.value.location == "line 2, column 17"


def test_link_must_match_presentation():
    h = build_cacime()
    other = companion_link(cli.build_target("E").handlebody)
    with pytest.raises(Exception):
        MF.ManifoldFile(h, other)


def test_script_parsing():
    text = json.dumps({"format_version": 1, "moves": [
        {"kind": "slide", "i": "r1", "j": 10, "sign": -1, "conjugator": "x1"},
        {"kind": "stabilize"},
        {"kind": "tietze", "move": "T3", "word": [["x1", 1]]},
    ]})
    recs = MF.parse_script(text)
    assert [r.kind for r in recs] == ["slide", "stabilize", "tietze"]
    assert recs[0].args == {"i": "r1", "j": 10, "sign": -1, "conjugator": "x1"}
    assert MF.parse_script(json.dumps(MF.script_to_json(recs))) == recs


@pytest.mark.parametrize("bad", [
    [{"kind": "twist"}],
    [{"kind": "slide", "i": 0}],
    [{"kind": "slide", "i": 0, "j": 1, "sign": 2}],
    [{"kind": "tietze", "move": "T9"}],
    [{"kind": "blowup", "sign": "+"}],
    {"moves": 3},
])
def test_script_validation(bad):
    with pytest.raises(MF.ParseError):
        MF.parse_script(json.dumps(bad))


def test_inner_link_location_kept():
    data = json.loads(MF.serialize(cli.build_target("surface", genus=1)))
    data["framed_link"]["algebraic_only"] = "no"
    with pytest.raises(MF.ParseError) as err:
        MF.from_json(data)
    assert err.value.location == "$.framed_link.algebraic_only"
