from fractions import Fraction

from blpack import Instance, pack
from blpack.generators import build
from blpack.repro import line_waste_certificate, run_suite, unit_rows


def test_claimed_square43_height_is_infeasible():
    case = build("square43", h=2, eps=Fraction(1, 10))
    cert = line_waste_certificate(case.instance, Fraction(79, 10), 0)
    # 22 x 7.9 leaves 1.35 of slack, the middle square alone forces 0.9 x 2.1 of waste
    assert cert["slack"] == Fraction(27, 20)
    assert cert["forced_waste"] == Fraction(189, 100)
    assert cert["infeasible"]
    assert not line_waste_certificate(case.instance, Fraction(81, 10), 0)["infeasible"]
    assert case.reference_packings["opt"].height == Fraction(81, 10)


def test_certificate_when_item_is_taller_than_the_strip():
    inst = Instance.of_squares(3, [2, 1])
    assert line_waste_certificate(inst, Fraction(1), 0)["infeasible"]


def test_unit_rows_of_the_checkerboard():
    case = build("checkerboard", m=4)
    trace = pack(case.instance, case.orderings["decreasing"])
    assert unit_rows(trace.packing, case.groups["unit"]) == [16, 17, 18, 19]


def test_fast_suites_pass():
    for name in ("thm-rect43", "cor-square65", "checkerboard", "expsteps"):
        (res,) = run_suite(name)
        assert res.passed, [c.as_dict() for c in res.failed()]
        assert res.as_dict()["suite"] == name


def test_unknown_suite():
    import pytest

    with pytest.raises(KeyError):
        run_suite("nope")
