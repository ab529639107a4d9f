"""Alexander numberings, cut systems and the moves between cut systems.

Cut points live on edges, so their positions survive local edits elsewhere in
the diagram.  A cut point of sign +1 raises the number by one when its edge is
traversed forward; -1 lowers it.  Crossing constraints, with ``i`` free per
crossing::

    positive:  o_in = i+1, o_out = i,   u_in = i,   u_out = i+1
    negative:  o_in = i,   o_out = i+1, u_in = i+1, u_out = i

Virtual crossings pass both numbers through unchanged.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

from .model import ClassicalCrossing, Diagram, DiagramError, SemiArc, VirtualCrossing, semi_arcs

# value of each classical port relative to the crossing's base number i
PORT_OFFSET = {
    +1: {"o_in": 1, "o_out": 0, "u_in": 0, "u_out": 1},
    -1: {"o_in": 0, "o_out": 1, "u_in": 1, "u_out": 0},
}


class CutPoint(NamedTuple):
    arc: int
    position: int
    sign: int
    edge: int


@dataclass(frozen=True)
class CutSystem:
    """Ordered cut-point signs per edge label; edges without cuts are omitted."""

    cuts: tuple[tuple[int, tuple[int, ...]], ...] = ()

    @classmethod
    def from_mapping(cls, cuts: Mapping[int, Iterable[int]]) -> "CutSystem":
        clean = []
        for edge, signs in sorted(cuts.items()):
            signs = tuple(signs)
            if any(s not in (1, -1) for s in signs):
                raise ValueError(f"cut signs must be +-1, got {signs} on edge {edge}")
            if signs:
                clean.append((edge, signs))
        return cls(tuple(clean))

    @classmethod
    def empty(cls) -> "CutSystem":
        return cls()

    def as_dict(self) -> dict[int, tuple[int, ...]]:
        return dict(self.cuts)

    def on_edge(self, edge: int) -> tuple[int, ...]:
        return self.as_dict().get(edge, ())

    def __len__(self) -> int:
        return sum(len(s) for _, s in self.cuts)

    def __bool__(self) -> bool:
        return bool(self.cuts)

    def arc_signs(self, arc: SemiArc) -> tuple[int, ...]:
        table = self.as_dict()
        return tuple(s for e in arc.edges for s in table.get(e, ()))

    def jump(self, arc: SemiArc) -> int:
        return sum(self.arc_signs(arc))

    def points(self, d: Diagram) -> list[CutPoint]:
        table = self.as_dict()
        out = []
        for arc in semi_arcs(d):
            pos = 0
            for e in arc.edges:
                for s in table.get(e, ()):
                    out.append(CutPoint(arc.id, pos, s, e))
                    pos += 1
        return out

    def by_arc(self, d: Diagram) -> dict[int, list[CutPoint]]:
        out: dict[int, list[CutPoint]] = {}
        for p in self.points(d):
            out.setdefault(p.arc, []).append(p)
        return out

    def to_json(self) -> dict:
        return {"cuts": {str(e): list(s) for e, s in self.cuts}}


@dataclass(frozen=True)
class Numbering:
    """Numbers per semi-arc segment, in traversal order along the arc.

    ``modulus`` 0 means integers.  A semi-arc with ``k`` cut points has
    ``k + 1`` segments.
    """

    modulus: int
    values: dict[int, tuple[int, ...]]

    solvable = True

    def __bool__(self) -> bool:
        return True

    def start(self, arc: int) -> int:
        return self.values[arc][0]

    def end(self, arc: int) -> int:
        return self.values[arc][-1]

    def to_json(self) -> dict:
        return {
            "solvable": True,
            "modulus": self.modulus,
            "values": {str(a): list(v) for a, v in sorted(self.values.items())},
        }


@dataclass(frozen=True)
class Unsolvable:
    """A cycle of semi-arcs whose constraints accumulate a nonzero offset."""

    modulus: int
    cycle: tuple[int, ...]
    offset: int

    solvable = False

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"solvable": False, "modulus": self.modulus, "cycle": list(self.cycle), "offset": self.offset}


class _Constraint(NamedTuple):
    src: int
    dst: int
    diff: int  # value(dst) - value(src)


def _arc_ends(arcs: list[SemiArc]) -> tuple[dict, dict]:
    ending = {a.end: a for a in arcs if a.end is not None}
    starting = {a.start: a for a in arcs if a.start is not None}
    return ending, starting


def _constraints(d: Diagram, arcs: list[SemiArc], cuts: CutSystem) -> list[_Constraint]:
    jump = {a.id: cuts.jump(a) for a in arcs}
    ending, starting = _arc_ends(arcs)
    out = []
    for c in d.classical:
        a1 = ending[(c.id, "o_in")].id
        a2 = ending[(c.id, "u_in")].id
        a3 = starting[(c.id, "o_out")].id
        a4 = starting[(c.id, "u_out")].id
        # end(o_in) - end(u_in) = sign; o_out = end(u_in); u_out = end(o_in)
        out.append(_Constraint(a2, a1, c.sign - jump[a1] + jump[a2]))
        out.append(_Constraint(a2, a3, jump[a2]))
        out.append(_Constraint(a1, a4, jump[a1]))
    for a in arcs:
        if a.closed:
            out.append(_Constraint(a.id, a.id, jump[a.id]))
    return out


def _check_arcs(d: Diagram, cuts: CutSystem) -> None:
    known = d.labels()
    for e, _ in cuts.cuts:
        if e not in known:
            raise DiagramError(f"cut point on unknown edge {e}")


def solve_numbering(d: Diagram, cuts: CutSystem | None = None, modulus: int = 0) -> Numbering | Unsolvable:
    """Propagate the difference constraints breadth-first from base value 0.

    Returns a :class:`Numbering`, or an :class:`Unsolvable` carrying a cycle
    of semi-arcs with nonzero accumulated offset (mod ``modulus``).
    """
    if modulus < 0:
        raise ValueError("modulus must be >= 0")
    cuts = cuts or CutSystem.empty()
    _check_arcs(d, cuts)
    arcs = semi_arcs(d)
    cons = _constraints(d, arcs, cuts)

    def norm(x: int) -> int:
        return x % modulus if modulus else x

    adj: dict[int, list[tuple[int, int]]] = {a.id: [] for a in arcs}
    for c in cons:
        adj[c.src].append((c.dst, c.diff))
        adj[c.dst].append((c.src, -c.diff))

    value: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    for root in sorted(adj):
        if root in value:
            continue
        value[root], parent[root], depth[root] = 0, None, 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, w in adj[u]:
                if v not in value:
                    value[v], parent[v], depth[v] = value[u] + w, u, depth[u] + 1
                    queue.append(v)

    for c in cons:
        offset = value[c.src] + c.diff - value[c.dst]
        if norm(offset):
            return Unsolvable(modulus, _tree_cycle(c.src, c.dst, parent, depth), norm(offset))

    out = {}
    for a in arcs:
        vals = [value[a.id]]
        for s in cuts.arc_signs(a):
            vals.append(vals[-1] + s)
        out[a.id] = tuple(norm(v) for v in vals)
    return Numbering(modulus, out)


def _tree_cycle(u: int, v: int, parent: dict, depth: dict) -> tuple[int, ...]:
    left, right = [u], [v]
    a, b = u, v
    while depth[a] > depth[b]:
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        left.append(a)
        right.append(b)
    # left ends at the common ancestor; right repeats it
    return tuple(left + right[-2::-1]) if u != v else (u,)


def is_valid_cut_system(d: Diagram, cuts: CutSystem) -> bool:
    return bool(solve_numbering(d, cuts, 0))


def is_almost_classical_diagram(d: Diagram) -> bool:
    return bool(solve_numbering(d, None, 0))


def is_checkerboard_colorable(d: Diagram) -> bool:
    return bool(solve_numbering(d, None, 2))


def canonical_cut_system(d: Diagram, around_virtual: int | None = None) -> CutSystem:
    """Deterministic cut system for ``d``.

    Each classical crossing gets a base number by depth-first search over the
    semi-arcs (crossings in id order) so that tree arcs need no jump; every
    remaining arc ``s`` receives ``|j_s|`` cut points of sign ``sgn(j_s)`` on
    its first edge.  Almost classical diagrams get the empty system.

    With ``around_virtual`` set to a virtual crossing id, place instead one
    cut point on each edge leaving that crossing (a -1/+1 pair, the over
    strand ``a`` dropping), which is valid when ``d`` came from an almost
    classical diagram by virtualizing that crossing.
    """
    if around_virtual is not None:
        return _around_virtual(d, around_virtual)

    arcs = semi_arcs(d)
    by_id = {c.id: c for c in d.classical}
    out_arcs: dict[int, list[SemiArc]] = {cid: [] for cid in by_id}
    in_arcs: dict[int, list[SemiArc]] = {cid: [] for cid in by_id}
    for a in arcs:
        if not a.closed:
            out_arcs[a.start.crossing].append(a)
            in_arcs[a.end.crossing].append(a)

    def port_value(port, base):
        c = by_id[port.crossing]
        return base[c.id] + PORT_OFFSET[c.sign][port.name]

    base: dict[int, int] = {}
    for root in sorted(by_id):
        if root in base:
            continue
        base[root] = 0
        stack = [root]
        while stack:
            cid = stack.pop()
            for a in sorted(out_arcs[cid] + in_arcs[cid], key=lambda s: s.id):
                other = a.end if a.start.crossing == cid else a.start
                if other.crossing in base:
                    continue
                # choose the neighbour's base so that arc a carries no jump
                here = a.start if other is a.end else a.end
                target = port_value(here, base)
                base[other.crossing] = target - PORT_OFFSET[by_id[other.crossing].sign][other.name]
                stack.append(other.crossing)

    cuts = {}
    for a in arcs:
        if a.closed:
            continue
        j = port_value(a.end, base) - port_value(a.start, base)
        if j:
            cuts[a.edges[0]] = (1 if j > 0 else -1,) * abs(j)
    return CutSystem.from_mapping(cuts)


def _around_virtual(d: Diagram, vid: int) -> CutSystem:
    v = d.crossing(vid)
    if not isinstance(v, VirtualCrossing):
        raise DiagramError(f"crossing {vid} is not virtual")
    for a_sign in (-1, 1):
        table: dict[int, list[int]] = {}
        table.setdefault(v.a_out, []).insert(0, a_sign)
        table.setdefault(v.b_out, []).insert(0, -a_sign)
        cuts = CutSystem.from_mapping(table)
        if is_valid_cut_system(d, cuts):
            return cuts
    raise DiagramError(f"no two-point cut system around virtual crossing {vid}")


def insert_canceling_pair(d: Diagram, cuts: CutSystem, arc: int, first: int = 1) -> CutSystem:
    """Append the adjacent pair ``(first, -first)`` at the end of semi-arc ``arc``."""
    if first not in (1, -1):
        raise ValueError("first must be +-1")
    arcs = {a.id: a for a in semi_arcs(d)}
    if arc not in arcs:
        raise DiagramError(f"no semi-arc {arc}")
    table = {e: list(s) for e, s in cuts.cuts}
    table.setdefault(arcs[arc].edges[-1], []).extend((first, -first))
    return CutSystem.from_mapping(table)


class MoveError(DiagramError):
    pass


def push_through_crossing(d: Diagram, cuts: CutSystem, crossing: int) -> CutSystem:
    """Move a same-sign pair of cut points from the two in-edges to the two out-edges.

    Both edges entering ``crossing`` must end with a cut point of one common
    sign; those are removed and a cut point of that sign is prepended to both
    outgoing edges.  The numbering away from the crossing is unchanged.
    """
    c = d.crossing(crossing)
    if not isinstance(c, ClassicalCrossing):
        raise MoveError(f"crossing {crossing} is not classical")
    table = {e: list(s) for e, s in cuts.cuts}
    ends = [table.get(c.o_in, []), table.get(c.u_in, [])]
    if not all(ends) or ends[0][-1] != ends[1][-1] or (c.o_in == c.u_in and len(ends[0]) < 2):
        raise MoveError(f"crossing {crossing}: in-edges lack terminal cut points of one sign")
    sign = ends[0][-1]
    table[c.o_in].pop()
    table[c.u_in].pop()
    table.setdefault(c.o_out, []).insert(0, sign)
    table.setdefault(c.u_out, []).insert(0, sign)
    return CutSystem.from_mapping(table)
