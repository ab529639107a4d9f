import pytest
from hypothesis import given, settings

from vskein.codec import catalog, parse_braid
from vskein.model import DiagramError, semi_arcs
from vskein.numbering import (
    CutSystem,
    MoveError,
    Numbering,
    canonical_cut_system,
    insert_canceling_pair,
    is_almost_classical_diagram,
    is_checkerboard_colorable,
    is_valid_cut_system,
    push_through_crossing,
    solve_numbering,
)

from .conftest import braid_words
from .oracles import brute_force_mod2, numbering_violations

ALMOST_CLASSICAL_TWO_VIRTUAL = "s=3: s1 v2 s1 v2"
COLORABLE_NOT_ALMOST = "s=2: s1 v1 s1 v1"


def arc_into(d, crossing, port):
    return next(a for a in semi_arcs(d) if a.end == (crossing, port))


def test_trefoil_numberable():
    d = catalog("trefoil")
    n = solve_numbering(d)
    assert n and n.modulus == 0
    assert numbering_violations(d, n) == []


def test_virtual_trefoil_not_numberable():
    res = solve_numbering(catalog("vtrefoil"))
    assert not res and not res.solvable
    assert res.offset != 0 and len(res.cycle) >= 2
    assert set(res.cycle) <= {a.id for a in semi_arcs(catalog("vtrefoil"))}


def test_virtual_trefoil_numberable_with_canonical_cuts():
    d = catalog("vtrefoil")
    cuts = canonical_cut_system(d)
    assert len(cuts) > 0
    n = solve_numbering(d, cuts)
    assert n
    assert numbering_violations(d, n, cuts) == []


def test_almost_classical_examples():
    assert is_almost_classical_diagram(catalog("figure8"))
    assert not is_almost_classical_diagram(catalog("vtrefoil"))
    d = parse_braid(ALMOST_CLASSICAL_TWO_VIRTUAL)
    assert len(d.virtual) == 2 and is_almost_classical_diagram(d)


def test_checkerboard_examples():
    assert is_checkerboard_colorable(parse_braid(ALMOST_CLASSICAL_TWO_VIRTUAL))
    assert is_checkerboard_colorable(catalog("hopf+"))
    assert not is_checkerboard_colorable(catalog("vtrefoil"))
    d = parse_braid(COLORABLE_NOT_ALMOST)
    assert is_checkerboard_colorable(d) and not is_almost_classical_diagram(d)


def test_mod2_witness_for_virtual_trefoil():
    res = solve_numbering(catalog("vtrefoil"), modulus=2)
    assert not res and res.offset % 2 == 1


def test_unknot_cut_systems():
    d = catalog("unknot")
    (arc,) = semi_arcs(d)
    assert not is_valid_cut_system(d, CutSystem.from_mapping({arc.edges[0]: [1]}))
    assert is_valid_cut_system(d, CutSystem.from_mapping({arc.edges[0]: [1, -1]}))
    n = solve_numbering(d, CutSystem.from_mapping({arc.edges[0]: [1, -1]}))
    assert n.values[arc.id] == (0, 1, 0)


def test_cut_system_rejects_unknown_edge():
    with pytest.raises(DiagramError):
        solve_numbering(catalog("unknot"), CutSystem.from_mapping({42: [1]}))


def test_around_virtual_placement():
    d = catalog("paper_triple_virtual")
    (v,) = d.virtual
    cuts = canonical_cut_system(d, around_virtual=v.id)
    assert len(cuts) == 2
    assert set(cuts.as_dict()) == {v.a_out, v.b_out}
    assert sorted(s for _, signs in cuts.cuts for s in signs) == [-1, 1]
    assert solve_numbering(d, cuts)
    with pytest.raises(DiagramError):
        canonical_cut_system(d, around_virtual=2)


def test_canonical_cut_system_empty_for_classical(fixture_diagram):
    _, d = fixture_diagram
    cuts = canonical_cut_system(d)
    assert is_valid_cut_system(d, cuts)
    assert (len(cuts) == 0) == is_almost_classical_diagram(d)


@given(braid_words())
@settings(max_examples=80, deadline=None)
def test_solver_soundness_and_canonical_cuts(word):
    d = parse_braid(word)
    for m in (0, 2):
        n = solve_numbering(d, None, m)
        if n:
            assert numbering_violations(d, n) == []
    assert is_checkerboard_colorable(d) == brute_force_mod2(d)
    if is_almost_classical_diagram(d):
        assert is_checkerboard_colorable(d)
    cuts = canonical_cut_system(d)
    assert (len(cuts) == 0) == is_almost_classical_diagram(d)
    n = solve_numbering(d, cuts)
    assert n and numbering_violations(d, n, cuts) == []


@given(braid_words())
@settings(max_examples=40, deadline=None)
def test_gauge_freedom(word):
    d = parse_braid(word)
    cuts = canonical_cut_system(d)
    n = solve_numbering(d, cuts)
    for k in (1, -3, 17):
        shifted = Numbering(0, {a: tuple(x + k for x in v) for a, v in n.values.items()})
        assert numbering_violations(d, shifted, cuts) == []


@given(braid_words())
@settings(max_examples=40, deadline=None)
def test_insert_keeps_validity(word):
    d = parse_braid(word)
    cuts = canonical_cut_system(d)
    for arc in semi_arcs(d):
        for first in (1, -1):
            more = insert_canceling_pair(d, cuts, arc.id, first)
            assert len(more) == len(cuts) + 2
            assert is_valid_cut_system(d, more)


def test_insert_rejects_unknown_arc():
    with pytest.raises(DiagramError):
        insert_canceling_pair(catalog("trefoil"), CutSystem.empty(), 999)


@pytest.mark.parametrize("name", ["trefoil", "figure8", "vtrefoil"])
def test_push_through_each_crossing(name):
    d = catalog(name)
    base = canonical_cut_system(d)
    for c in d.classical:
        cuts = base
        for port in ("o_in", "u_in"):
            cuts = insert_canceling_pair(d, cuts, arc_into(d, c.id, port).id, first=-1)
        pushed = push_through_crossing(d, cuts, c.id)
        assert len(pushed) == len(cuts)
        assert is_valid_cut_system(d, pushed)
        n1, n2 = solve_numbering(d, base), solve_numbering(d, pushed)
        assert numbering_violations(d, n2, pushed) == []
        far = [a.id for a in semi_arcs(d) if c.id not in (a.start and a.start[0], a.end and a.end[0])]
        assert len({n2.start(a) - n1.start(a) for a in far}) <= 1


def test_push_precondition():
    d = catalog("trefoil")
    with pytest.raises(MoveError):
        push_through_crossing(d, CutSystem.empty(), 1)
    cuts = insert_canceling_pair(d, CutSystem.empty(), arc_into(d, 1, "o_in").id, first=-1)
    cuts = insert_canceling_pair(d, cuts, arc_into(d, 1, "u_in").id, first=1)
    with pytest.raises(MoveError):
        push_through_crossing(d, cuts, 1)
    with pytest.raises(MoveError):
        push_through_crossing(catalog("vtrefoil"), CutSystem.empty(), catalog("vtrefoil").virtual[0].id)


def test_cut_points_listing():
    d = catalog("vtrefoil")
    cuts = canonical_cut_system(d)
    points = cuts.points(d)
    assert len(points) == len(cuts)
    by_arc = cuts.by_arc(d)
    assert sum(len(v) for v in by_arc.values()) == len(points)
    for p in points:
        assert p.sign in (1, -1)
