from fractions import Fraction

import pytest

from blpack import area_lower_bound, bl_height, feasible, pack
from blpack.engine import best_exhaustive
from blpack.generators import CONSTRUCTIONS, InvalidParameter, build, checkerboard_eps, ten_thirds_m

SMALL = {
    "rect43": {"eps": Fraction(1, 100)},
    "rect43int": {"h": 2},
    "square65": {"eps": Fraction(1, 100)},
    "square43": {"h": 2, "eps": Fraction(1, 10)},
    "checkerboard": {"m": 4},
    "resetrow": {"m": 4},
    "tenthirds": {"n": 2},
    "localsearch": {"k": 2},
    "expsteps": {"k": 3},
}


def test_every_construction_has_a_small_case():
    assert set(SMALL) == set(CONSTRUCTIONS)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_references_and_orderings_are_sound(name):
    case = build(name, **SMALL[name])
    assert case.name == name
    for ref in case.reference_packings.values():
        ok, problems = feasible(ref)
        assert ok, problems
        assert ref.is_complete
    for order in case.orderings.values():
        assert sorted(order) == list(range(case.instance.n))
    grouped = [i for ids in case.groups.values() for i in ids]
    assert len(grouped) == len(set(grouped))
    if grouped:
        assert sorted(grouped) == list(range(case.instance.n))


@pytest.mark.parametrize("name,params,n,width", [
    ("rect43", {"eps": Fraction(1, 100)}, 7, 7),
    ("checkerboard", {"m": 4}, 86, Fraction(127, 4)),
    ("localsearch", {"k": 3}, 21, 60),
    ("square43", {"h": 2, "eps": Fraction(1, 10)}, 13, 22),
])
def test_counts(name, params, n, width):
    inst = build(name, **params).instance
    assert (inst.n, inst.width) == (n, width)


def test_reference_heights():
    eps = Fraction(1, 100)
    assert build("rect43", eps=eps).reference_packings["opt"].height == 3 + eps
    assert build("square65", eps=eps).reference_packings["opt_a"].height == 5 + eps
    assert build("square65", eps=eps).reference_packings["opt_b"].height == 5 + eps
    for k in (1, 2, 3):
        assert build("localsearch", k=k).reference_packings["opt"].height == k + 2


def test_rect43int_best():
    case = build("rect43int", h=2)
    assert case.reference_packings["opt"].height == 7
    assert best_exhaustive(case.instance).height == case.expected["bl_best_height"] == 8


def test_checkerboard_eps():
    assert checkerboard_eps(4) == Fraction(1, 544)
    assert ten_thirds_m(2) == 4


def test_expected_heights_of_named_orderings():
    for name in ("rect43", "square65", "square43"):
        case = build(name, **SMALL[name])
        assert bl_height(case.instance, case.orderings["layout"]) == case.expected["bl_height_layout"]
    case = build("checkerboard", m=6)
    assert bl_height(case.instance, case.orderings["decreasing"]) == 8 - checkerboard_eps(6)


def test_tenthirds_small_reaches_bound():
    case = build("tenthirds", n=2)
    trace = pack(case.instance, case.orderings["adversarial"])
    assert trace.height == case.expected["bl_height_adversarial"]
    assert trace.height >= case.expected["bl_height_lower_bound"]
    assert trace.height / area_lower_bound(case.instance) > Fraction(3, 2)


@pytest.mark.parametrize("name,params", [
    ("rect43", {"eps": 0}),
    ("rect43", {"eps": Fraction(1, 2)}),
    ("square43", {"h": 1, "eps": Fraction(1, 10)}),
    ("square43", {"h": 2, "eps": Fraction(1, 8)}),
    ("checkerboard", {"m": 3}),
    ("localsearch", {"k": 0}),
    ("expsteps", {"k": "2"}),
    ("tenthirds", {}),
    ("nonsense", {}),
])
def test_invalid_parameters(name, params):
    with pytest.raises(InvalidParameter):
        build(name, **params)
