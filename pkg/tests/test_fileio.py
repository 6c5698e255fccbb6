import json

import pytest

from icpsk.codes import parse_code
from icpsk.fileio import (
    FormatError,
    RunManifest,
    cascade_document,
    format_pair,
    load_codes,
    load_pairs,
    parse_codes,
    parse_pair,
)
from icpsk.geometry import PskMapping
from icpsk.optimizer import priority_cascade


def test_pair_round_trip():
    text = "({x1, x2+x3, x4+x5},(0,1,6,7,4,5,2,3))"
    code, M = parse_pair(text, 5)
    assert code == parse_code("x1, x2+x3, x4+x5", 5)
    assert M == PskMapping((0, 1, 6, 7, 4, 5, 2, 3))
    assert format_pair(code, M) == text


def test_pair_spacing_tolerated():
    code, M = parse_pair(" ( {x1 , x2+x3,x4+x5} , (0, 1, 2, 3, 4, 5, 6, 7) ) ", 5)
    assert M.order == 8


@pytest.mark.parametrize(
    "bad",
    ["{x1, x2}", "({x1, x2+x3, x4+x5},(0,1,2,3))", "({x1, x1, x4},(0,1,2,3,4,5,6,7))", "({x1},(0,0))"],
)
def test_pair_rejects(bad):
    with pytest.raises(ValueError):
        parse_pair(bad, 5)


def test_listed_pairs_file(data_dir):
    pairs = load_pairs(data_dir / "example1_listed.pairs", 5)
    assert len(pairs) == 4


def test_line_numbers(tmp_path):
    p = tmp_path / "x.pairs"
    p.write_text("# header\n({x1, x2+x3, x4+x5},(0,1,2,3,4,5,6,7))\n\n(oops)\n")
    with pytest.raises(FormatError, match=":4:"):
        load_pairs(p, 5)


def test_codes_inline_and_file(data_dir):
    assert load_codes("{x1+x4, x2+x3, x5, x6}", 6) == [parse_code("x1+x4, x2+x3, x5, x6", 6)]
    assert load_codes(str(data_dir / "example2.codes"), 6) == load_codes("{x1+x4, x2+x3, x5, x6}", 6)
    two = parse_codes("{x1, x2} {x1+x2, x2}\n10,01\n", 2)
    assert len(two) == 3


def test_codes_empty():
    with pytest.raises(FormatError):
        parse_codes("# nothing\n", 3)


def test_manifest_round_trip():
    m = RunManifest("simulate", "p.json", "00", "0.1.0", {"trials": 5}, seed=3)
    assert RunManifest.from_json(m.to_json()) == m


def test_cascade_document(ex2, code2):
    doc = cascade_document(priority_cascade(ex2, [code2]))
    assert doc["survivors"] == 16 and len(doc["pairs"]) == 16
    assert [s["survivors"] for s in doc["trace"]] == [645120, 128, 24, 16, 16, 16]
    assert doc["pairs"][0]["code"] == ["100100", "011000", "000010", "000001"]
    json.dumps(doc)
