import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from blpack import pack
from blpack import io
from blpack.generators import build

from conftest import instance_and_order


@settings(max_examples=60, deadline=None)
@given(case=instance_and_order())
def test_packing_round_trip(case, tmp_path_factory):
    inst, order = case
    packing = pack(inst, order).packing
    path = tmp_path_factory.mktemp("rt") / "p.json"
    io.write_json(path, io.packing_to_dict(packing))
    again = io.read_packing(path)
    assert again == packing
    assert io.dumps(io.packing_to_dict(again)) == path.read_text()


def test_instance_round_trip_keeps_orderings_and_metadata(tmp_path):
    case = build("square43", h=2, eps=Fraction(1, 10))
    doc = io.instance_to_dict(case.instance, {"construction": case.name, "params": case.params}, case.orderings)
    path = tmp_path / "i.json"
    io.write_json(path, doc)
    inst, orderings, meta = io.read_instance(path)
    assert inst == case.instance
    assert orderings == case.orderings
    assert meta == {"construction": "square43", "params": {"h": 2, "eps": "1/10"}}
    raw = json.loads(path.read_text())
    assert raw["items"][0] == {"id": 0, "w": "21/10", "h": "21/10"}


def test_trace_file_lists_steps(tmp_path):
    case = build("rect43", eps=Fraction(1, 100))
    trace = pack(case.instance, case.orderings["layout"])
    doc = json.loads(io.dumps(io.trace_to_dict(trace)))
    assert [s["id"] for s in doc["steps"]] == list(case.orderings["layout"])
    assert doc["steps"][-1]["height"] == "4"
    path = tmp_path / "t.json"
    io.write_json(path, io.trace_to_dict(trace))
    assert io.read_trace(path).order == case.orderings["layout"]


@pytest.mark.parametrize("doc,match", [
    ({"items": []}, "width"),
    ({"width": "1", "items": [{"id": 0, "w": 1.5, "h": "1"}]}, "integer or"),
    ({"width": "1", "items": [{"id": 0, "w": "2", "h": "1"}]}, "wider"),
    ({"width": "1", "items": [{"id": 0, "w": "1"}]}, "needs"),
    ({"width": "3", "items": [{"id": 0, "w": "1", "h": "1"}], "orderings": {"x": [1]}}, "permutation"),
])
def test_bad_instances(doc, match):
    with pytest.raises(io.FormatError, match=match):
        io.instance_from_dict(doc)


def test_bad_packings():
    inst = {"width": "2", "items": [{"id": 0, "w": "1", "h": "1"}]}
    with pytest.raises(io.FormatError, match="does not match"):
        io.packing_from_dict({"instance": inst, "placements": [{"id": 0, "x": "0", "y": "0"}], "height": "2"})
    with pytest.raises(io.FormatError, match="unknown item"):
        io.packing_from_dict({"instance": inst, "placements": [{"id": 3, "x": "0", "y": "0"}]})


def test_not_json(tmp_path):
    path = tmp_path / "x.json"
    path.write_text("{nope")
    with pytest.raises(io.FormatError):
        io.read_json(path)


def test_ordering_files(tmp_path):
    (tmp_path / "a.json").write_text("[2, 0, 1]")
    (tmp_path / "b.json").write_text('{"ordering": [1, 0]}')
    (tmp_path / "c.json").write_text('["1"]')
    assert io.read_ordering(tmp_path / "a.json") == [2, 0, 1]
    assert io.read_ordering(tmp_path / "b.json") == [1, 0]
    with pytest.raises(io.FormatError):
        io.read_ordering(tmp_path / "c.json")
