from fractions import Fraction

from hypothesis import strategies as st

from blpack import Instance, Item

sizes = st.builds(Fraction, st.integers(1, 12), st.integers(1, 4))


@st.composite
def rect_instances(draw, min_items=1, max_items=7, squares=False):
    n = draw(st.integers(min_items, max_items))
    if squares:
        dims = [(s, s) for s in draw(st.lists(sizes, min_size=n, max_size=n))]
    else:
        dims = draw(st.lists(st.tuples(sizes, sizes), min_size=n, max_size=n))
    widest = max(w for w, _ in dims)
    width = widest * Fraction(draw(st.integers(4, 16)), 4)
    return Instance(width, tuple(Item(i, w, h) for i, (w, h) in enumerate(dims)))


@st.composite
def instance_and_order(draw, **kw):
    inst = draw(rect_instances(**kw))
    order = draw(st.permutations(list(range(inst.n))))
    return inst, tuple(order)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
