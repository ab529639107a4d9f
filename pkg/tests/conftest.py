import pytest
from hypothesis import strategies as st

from vskein.codec import CATALOG_NAMES, catalog
from vskein.model import semi_arcs
from vskein.numbering import insert_canceling_pair, push_through_crossing
from vskein.poly import MultiPoly

A = MultiPoly.A()
d1 = MultiPoly.d(1)


@pytest.fixture(params=CATALOG_NAMES)
def fixture_diagram(request):
    return request.param, catalog(request.param)


@st.composite
def braid_words(draw, max_len=7, virtual=True):
    strands = draw(st.integers(2, 4))
    kinds = "sSv" if virtual else "sS"
    tokens = draw(st.lists(st.tuples(st.sampled_from(kinds), st.integers(1, strands - 1)),
                           min_size=1, max_size=max_len))
    return f"s={strands}: " + " ".join(f"{k}{i}" for k, i in tokens)


def perturbed_systems(d, base, rng, count=3):
    """Cut systems reached from ``base`` by inserting pairs and pushing them on."""
    arcs = semi_arcs(d)
    into = {a.end: a.id for a in arcs if not a.closed}
    out = []
    for _ in range(count):
        cuts = base
        for _ in range(rng.randint(1, 3)):
            cuts = insert_canceling_pair(d, cuts, rng.choice(arcs).id, rng.choice((1, -1)))
        if d.classical:
            c = rng.choice(d.classical)
            sign = rng.choice((1, -1))
            for port in ("o_in", "u_in"):
                cuts = insert_canceling_pair(d, cuts, into[(c.id, port)], -sign)
            cuts = push_through_crossing(d, cuts, c.id)
        out.append(cuts)
    return out


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    lines = test_acceptance.RESULTS
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
