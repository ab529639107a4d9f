"""Oriented virtual link diagrams as abstract 4-valent port graphs.

Every port of a crossing holds an integer edge label; an edge runs from the
out-port that carries its label to the in-port that carries it.  Components with
no crossing at all are kept in :attr:`Diagram.loops`.

Local geometry is pinned once.  At a positive crossing the over strand runs
SW -> NE and the under strand SE -> NW; a negative crossing is the mirror
(over SE -> NW, under SW -> NE).  Everything downstream (splices, numberings,
cusp sides) reads its conventions from :data:`PORT_ANGLE`.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterator, NamedTuple, Union

CLASSICAL_PORTS = ("o_in", "o_out", "u_in", "u_out")
VIRTUAL_PORTS = ("a_in", "a_out", "b_in", "b_out")
IN_PORTS = {"o_in", "u_in", "a_in", "b_in"}

# compass position (degrees) of each port, by crossing sign
PORT_ANGLE = {
    +1: {"o_out": 45, "u_out": 135, "o_in": 225, "u_in": 315},
    -1: {"u_out": 45, "o_out": 135, "u_in": 225, "o_in": 315},
}

# strand pairing through a crossing: in-port -> out-port
THROUGH = {"o_in": "o_out", "u_in": "u_out", "a_in": "a_out", "b_in": "b_out"}


class DiagramError(ValueError):
    """Raised when an operation is applied to an unsuitable diagram or crossing."""


@dataclass(frozen=True)
class ClassicalCrossing:
    id: int
    sign: int
    o_in: int
    o_out: int
    u_in: int
    u_out: int

    kind = "classical"

    def ports(self) -> dict[str, int]:
        return {p: getattr(self, p) for p in CLASSICAL_PORTS}


@dataclass(frozen=True)
class VirtualCrossing:
    id: int
    a_in: int
    a_out: int
    b_in: int
    b_out: int

    kind = "virtual"

    def ports(self) -> dict[str, int]:
        return {p: getattr(self, p) for p in VIRTUAL_PORTS}


Crossing = Union[ClassicalCrossing, VirtualCrossing]


class Port(NamedTuple):
    crossing: int
    name: str


class Edge(NamedTuple):
    label: int
    tail: Port  # out-port the edge leaves
    head: Port  # in-port the edge enters


@dataclass(frozen=True)
class SemiArc:
    """Maximal edge path avoiding classical crossings.

    ``start``/``end`` are the classical out-/in-ports at its ends, both None for
    a closed semi-arc (a component without classical crossings).
    """

    id: int
    edges: tuple[int, ...]
    start: Port | None
    end: Port | None

    @property
    def closed(self) -> bool:
        return self.start is None


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


@dataclass(frozen=True)
class Diagram:
    classical: tuple[ClassicalCrossing, ...] = ()
    virtual: tuple[VirtualCrossing, ...] = ()
    loops: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "classical", tuple(sorted(self.classical, key=lambda c: c.id)))
        object.__setattr__(self, "virtual", tuple(sorted(self.virtual, key=lambda c: c.id)))
        object.__setattr__(self, "loops", tuple(sorted(self.loops)))

    def crossings(self) -> list[Crossing]:
        return sorted([*self.classical, *self.virtual], key=lambda c: c.id)

    def crossing(self, cid: int) -> Crossing:
        for c in self.crossings():
            if c.id == cid:
                return c
        raise DiagramError(f"no crossing with id {cid}")

    def classical_crossing(self, cid: int) -> ClassicalCrossing:
        c = self.crossing(cid)
        if not isinstance(c, ClassicalCrossing):
            raise DiagramError(f"crossing {cid} is virtual")
        return c

    def edges(self) -> list[Edge]:
        """Edges of a valid diagram, sorted by label (crossingless loops excluded)."""
        tails: dict[int, Port] = {}
        heads: dict[int, Port] = {}
        for c in self.crossings():
            for name, label in c.ports().items():
                (heads if name in IN_PORTS else tails)[label] = Port(c.id, name)
        return [Edge(lab, tails[lab], heads[lab]) for lab in sorted(tails)]

    def labels(self) -> set[int]:
        out = set(self.loops)
        for c in self.crossings():
            out.update(c.ports().values())
        return out

    @property
    def n_classical(self) -> int:
        return len(self.classical)


def validate_diagram(d: Diagram) -> list[Violation]:
    """Return every structural problem of ``d``; an empty list means valid."""
    out: list[Violation] = []
    ids = Counter(c.id for c in d.crossings())
    for cid, n in sorted(ids.items()):
        if n > 1:
            out.append(Violation("duplicate id", f"crossing id {cid} used {n} times"))
    for c in d.classical:
        if c.sign not in (1, -1):
            out.append(Violation("bad sign", f"crossing {c.id} has sign {c.sign!r}"))

    as_in: Counter[int] = Counter()
    as_out: Counter[int] = Counter()
    for c in d.crossings():
        for name, label in c.ports().items():
            if label is None:
                out.append(Violation("dangling port", f"port {name} of crossing {c.id} has no edge"))
                continue
            (as_in if name in IN_PORTS else as_out)[label] += 1
    loop_counts = Counter(d.loops)
    for label in sorted(set(as_in) | set(as_out) | set(loop_counts)):
        i, o, lp = as_in[label], as_out[label], loop_counts[label]
        if lp and (i or o or lp > 1):
            out.append(Violation("port arity", f"loop label {label} reused"))
        elif i + o > 2:
            out.append(Violation("port arity", f"label {label} used by {i + o} ports"))
        elif i + o == 1:
            out.append(Violation("dangling port", f"label {label} has only one end"))
        elif (i, o) in ((2, 0), (0, 2)):
            kind = "in" if i else "out"
            out.append(Violation("non-closed component", f"label {label} joins two {kind}-ports"))
    return out


def is_valid(d: Diagram) -> bool:
    return not validate_diagram(d)


def _require_valid(d: Diagram) -> None:
    problems = validate_diagram(d)
    if problems:
        raise DiagramError("invalid diagram: " + "; ".join(map(str, problems)))


def successor_map(d: Diagram) -> dict[int, int]:
    """Label of the edge following each edge, passing straight through crossings."""
    by_id = {c.id: c for c in d.crossings()}
    nxt = {}
    for e in d.edges():
        c = by_id[e.head.crossing]
        nxt[e.label] = getattr(c, THROUGH[e.head.name])
    for lab in d.loops:
        nxt[lab] = lab
    return nxt


def component_cycles(d: Diagram) -> list[tuple[int, ...]]:
    """Edge-label cycles of the link components, each starting at its least label."""
    nxt = successor_map(d)
    seen: set[int] = set()
    cycles = []
    for start in sorted(nxt):
        if start in seen:
            continue
        cyc = []
        lab = start
        while lab not in seen:
            seen.add(lab)
            cyc.append(lab)
            lab = nxt[lab]
        cycles.append(tuple(cyc))
    return cycles


def components(d: Diagram) -> int:
    _require_valid(d)
    return len(component_cycles(d))


def writhe(d: Diagram) -> int:
    return sum(c.sign for c in d.classical)


def semi_arcs(d: Diagram) -> list[SemiArc]:
    """Partition the edges into semi-arcs, sorted by id (first edge label)."""
    by_id = {c.id: c for c in d.crossings()}
    edges = {e.label: e for e in d.edges()}
    nxt = successor_map(d)
    arcs: list[SemiArc] = []
    used: set[int] = set()
    for e in sorted(edges.values()):
        if not isinstance(by_id[e.tail.crossing], ClassicalCrossing):
            continue
        path = [e.label]
        cur = e
        while isinstance(by_id[cur.head.crossing], VirtualCrossing):
            cur = edges[nxt[cur.label]]
            path.append(cur.label)
        used.update(path)
        arcs.append(SemiArc(e.label, tuple(path), e.tail, cur.head))
    for cyc in component_cycles(d):
        if cyc[0] not in used:
            arcs.append(SemiArc(cyc[0], cyc, None, None))
    return sorted(arcs, key=lambda s: s.id)


def _relabel(d: Diagram, old: int, new: int) -> Diagram:
    def fix(c):
        return replace(c, **{p: (new if v == old else v) for p, v in c.ports().items()})

    return Diagram(
        tuple(fix(c) for c in d.classical),
        tuple(fix(c) for c in d.virtual),
        tuple(new if lab == old else lab for lab in d.loops),
    )


def _swap(c: ClassicalCrossing) -> ClassicalCrossing:
    return ClassicalCrossing(c.id, -c.sign, c.u_in, c.u_out, c.o_in, c.o_out)


def crossing_change(d: Diagram, cid: int) -> Diagram:
    """Swap over and under at classical crossing ``cid`` (its sign flips)."""
    d.classical_crossing(cid)
    return replace(d, classical=tuple(_swap(c) if c.id == cid else c for c in d.classical))


def virtualize(d: Diagram, cid: int) -> Diagram:
    """Replace classical crossing ``cid`` by a virtual crossing with the same id.

    The over strand becomes strand ``a`` and the under strand strand ``b``.
    """
    c = d.classical_crossing(cid)
    v = VirtualCrossing(c.id, c.o_in, c.o_out, c.u_in, c.u_out)
    return Diagram(tuple(x for x in d.classical if x.id != cid), d.virtual + (v,), d.loops)


def smooth_oriented(d: Diagram, cid: int) -> Diagram:
    """Remove ``cid`` reconnecting o_in -> u_out and u_in -> o_out.

    The incoming edge label survives each reconnection; an edge that closes on
    itself becomes a crossingless loop.
    """
    c = d.classical_crossing(cid)
    out = Diagram(tuple(x for x in d.classical if x.id != cid), d.virtual, d.loops)
    joins = [(c.o_in, c.u_out), (c.u_in, c.o_out)]
    for k, (inc, outg) in enumerate(joins):
        if inc == outg:
            out = replace(out, loops=out.loops + (inc,))
            continue
        out = _relabel(out, outg, inc)
        joins[k + 1:] = [(inc if a == outg else a, inc if b == outg else b) for a, b in joins[k + 1:]]
    return out


def mirror(d: Diagram) -> Diagram:
    return replace(d, classical=tuple(_swap(c) for c in d.classical))


@dataclass(frozen=True)
class SkeinTriple:
    """The diagrams ``D_+``, ``D_-``, ``D_0``, ``D_v`` built at one crossing.

    ``relabeled`` is True when the input crossing was negative, so that
    ``plus`` is the crossing-changed input and ``minus`` the input itself.
    """

    crossing: int
    plus: Diagram
    minus: Diagram
    zero: Diagram
    virtual: Diagram
    relabeled: bool = False

    def __iter__(self) -> Iterator[Diagram]:
        return iter((self.plus, self.minus, self.zero, self.virtual))


def skein_triples(d: Diagram, cid: int) -> SkeinTriple:
    c = d.classical_crossing(cid)
    plus = d if c.sign > 0 else crossing_change(d, cid)
    return SkeinTriple(
        cid,
        plus,
        crossing_change(plus, cid),
        smooth_oriented(plus, cid),
        virtualize(plus, cid),
        relabeled=c.sign < 0,
    )


def isomorphic(a: Diagram, b: Diagram) -> bool:
    """Equality up to edge relabeling, matching crossings in id order."""
    ca, cb = a.crossings(), b.crossings()
    if len(ca) != len(cb) or len(a.loops) != len(b.loops):
        return False
    fwd: dict[int, int] = {}
    back: dict[int, int] = {}
    for x, y in zip(ca, cb):
        if x.kind != y.kind or getattr(x, "sign", 0) != getattr(y, "sign", 0):
            return False
        for p, la in x.ports().items():
            lb = y.ports()[p]
            if fwd.setdefault(la, lb) != lb or back.setdefault(lb, la) != la:
                return False
    return True
