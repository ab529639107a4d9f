"""Text formats for diagrams (virtual PD, signed Gauss, braid words) and JSON output.

PD records list classical ports as ``X[o_in,o_out,u_in,u_out] +`` and virtual
ports as ``V[a_in,a_out,b_in,b_out]``; ``O[k]`` is a crossingless loop.
Records are separated by ``;``.  Crossing ids are assigned 1, 2, ... in record
order.

Gauss codes are whitespace-separated ``O<k><sign>`` / ``U<k><sign>`` tokens,
one cyclic word per component, components separated by ``/``.

Braid words read ``s=<n>: s1 S2 v1 ...`` where ``s<i>`` is a positive classical
generator, ``S<i>`` its inverse and ``v<i>`` a virtual crossing.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass
from itertools import count
from typing import Any

from .model import (
    PORT_ANGLE,
    ClassicalCrossing,
    Diagram,
    VirtualCrossing,
    skein_triples,
    validate_diagram,
)


class CodecError(ValueError):
    """Malformed input text.  ``pos`` is a character offset when known."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at position {pos})")


# --- PD ---------------------------------------------------------------------

_PD_RECORD = re.compile(
    r"\s*(?:(?P<kind>[XV])\s*\[\s*(?P<labels>-?\d+(?:\s*,\s*-?\d+){3})\s*\]\s*(?P<sign>[+-])?"
    r"|O\s*\[\s*(?P<loop>-?\d+)\s*\])\s*"
)


def parse_pd(text: str) -> Diagram:
    classical, virtual, loops = [], [], []
    ids = count(1)
    pos = 0
    for chunk in re.split(r"(;|\n)", text):
        if chunk in (";", "\n"):
            pos += 1
            continue
        if chunk.strip():
            m = _PD_RECORD.fullmatch(chunk)
            if not m:
                raise CodecError(f"syntax error in PD record {chunk.strip()!r}", pos + len(chunk) - len(chunk.lstrip()))
            if m["loop"] is not None:
                loops.append(int(m["loop"]))
            else:
                labels = [int(x) for x in m["labels"].split(",")]
                if m["kind"] == "X":
                    if m["sign"] is None:
                        raise CodecError("classical record needs a sign", pos + m.end("labels"))
                    sign = 1 if m["sign"] == "+" else -1
                    classical.append(ClassicalCrossing(next(ids), sign, *labels))
                else:
                    if m["sign"] is not None:
                        raise CodecError("virtual record takes no sign", pos + m.start("sign"))
                    virtual.append(VirtualCrossing(next(ids), *labels))
        pos += len(chunk)
    d = Diagram(tuple(classical), tuple(virtual), tuple(loops))
    violations = validate_diagram(d)
    for v in violations:
        if v.kind == "port arity":
            raise CodecError(f"label arity: {v.detail}")
    for v in violations:
        if v.kind in ("dangling port", "non-closed component"):
            raise CodecError(f"open component: {v.detail}")
    if violations:
        raise CodecError(f"{violations[0].kind}: {violations[0].detail}")
    return d


def emit_pd(d: Diagram) -> str:
    records = []
    for c in d.crossings():
        if isinstance(c, ClassicalCrossing):
            records.append(f"X[{c.o_in},{c.o_out},{c.u_in},{c.u_out}] {'+' if c.sign > 0 else '-'}")
        else:
            records.append(f"V[{c.a_in},{c.a_out},{c.b_in},{c.b_out}]")
    records.extend(f"O[{lab}]" for lab in d.loops)
    return "; ".join(records)


# --- Gauss ------------------------------------------------------------------


@dataclass(frozen=True)
class GaussPass:
    over: bool
    crossing: int
    sign: int

    def __str__(self) -> str:
        return f"{'O' if self.over else 'U'}{self.crossing}{'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class SignedGaussCode:
    components: tuple[tuple[GaussPass, ...], ...]

    def __str__(self) -> str:
        return " / ".join(" ".join(map(str, comp)) for comp in self.components)

    def crossing_order(self) -> list[int]:
        seen: dict[int, None] = {}
        for comp in self.components:
            for p in comp:
                seen.setdefault(p.crossing)
        return list(seen)


_GAUSS_TOKEN = re.compile(r"([OU])(\d+)([+-])")


def parse_gauss(text: str) -> SignedGaussCode:
    comps = []
    offset = 0
    for part in text.split("/"):
        comp = []
        for m in re.finditer(r"\S+", part):
            tok = _GAUSS_TOKEN.fullmatch(m.group())
            if not tok:
                raise CodecError(f"bad Gauss token {m.group()!r}", offset + m.start())
            comp.append(GaussPass(tok[1] == "O", int(tok[2]), 1 if tok[3] == "+" else -1))
        comps.append(tuple(comp))
        offset += len(part) + 1
    passes = [p for comp in comps for p in comp]
    overs = Counter(p.crossing for p in passes if p.over)
    unders = Counter(p.crossing for p in passes if not p.over)
    for k in sorted(set(overs) | set(unders)):
        if overs[k] != 1 or unders[k] != 1:
            raise CodecError(f"unmatched O/U for crossing {k}")
        signs = {p.sign for p in passes if p.crossing == k}
        if len(signs) != 1:
            raise CodecError(f"sign mismatch at crossing {k}")
    return SignedGaussCode(tuple(comps))


def _port_xy(x0: int, sign: int, port: str) -> tuple[int, int]:
    angle = PORT_ANGLE[sign][port]
    dx = 1 if angle in (45, 315) else -1
    dy = 1 if angle in (45, 135) else -1
    return x0 + dx, dy


def realize_gauss(g: SignedGaussCode) -> Diagram:
    """Lay the code out in the plane and turn every stray wire crossing virtual.

    Classical crossings sit on the x-axis in first-appearance order with ports
    placed per the pinned chirality.  Edge ``j`` leaves its port vertically to
    its private lane at height ``+-(10 + 2j)``; an edge joining a north port
    to a south port detours around the right end through its private column.
    All lanes and columns are distinct, so wires meet only transversally, and
    each meeting becomes a virtual crossing.
    """
    order = g.crossing_order()
    xpos = {k: 10 * i for i, k in enumerate(order)}
    signs = {p.crossing: p.sign for comp in g.components for p in comp}
    right = 10 * len(order) + 10

    # one edge per consecutive pair of passes in a component
    wires = []  # (tail (k, port), head (k, port), polyline)
    loops = []
    for comp in g.components:
        if not comp:
            loops.append(None)
            continue
        for i, p in enumerate(comp):
            q = comp[(i + 1) % len(comp)]
            tail = (p.crossing, "o_out" if p.over else "u_out")
            head = (q.crossing, "o_in" if q.over else "u_in")
            j = len(wires)
            h, col = 10 + 2 * j, right + 2 * j
            px, py = _port_xy(xpos[tail[0]], signs[tail[0]], tail[1])
            qx, qy = _port_xy(xpos[head[0]], signs[head[0]], head[1])
            if py == qy:
                y = h * py
                pts = [(px, py), (px, y), (qx, y), (qx, qy)]
            else:
                pts = [(px, py), (px, h * py), (col, h * py), (col, h * qy), (qx, h * qy), (qx, qy)]
            wires.append((tail, head, pts))

    # transversal meetings: (wire, arclength) on both wires
    def segments(pts):
        s = 0
        for a, b in zip(pts, pts[1:]):
            yield a, b, s
            s += abs(b[0] - a[0]) + abs(b[1] - a[1])

    hits: list[tuple[int, float, int, float]] = []
    segs = [list(segments(w[2])) for w in wires]
    for i, si in enumerate(segs):
        for j, sj in enumerate(segs):
            for (a, b, s0) in si:
                if a[1] != b[1]:
                    continue  # i horizontal
                for (c, e, t0) in sj:
                    if c[0] != e[0] or (i == j):
                        continue  # j vertical, distinct wire
                    x, y = c[0], a[1]
                    if min(a[0], b[0]) < x < max(a[0], b[0]) and min(c[1], e[1]) < y < max(c[1], e[1]):
                        hits.append((i, s0 + abs(x - a[0]), j, t0 + abs(y - c[1])))

    next_id = count(max(order, default=0) + 1)
    vids = {}
    for h in sorted(hits):
        vids[h] = next(next_id)

    # split each wire at its meetings, in arclength order
    stops: dict[int, list[tuple[float, tuple, str]]] = {i: [] for i in range(len(wires))}
    for h, vid in vids.items():
        i, si, j, sj = h
        stops[i].append((si, vid, "a"))
        stops[j].append((sj, vid, "b"))
    labels = count(1)
    cports: dict[int, dict[str, int]] = {k: {} for k in order}
    vports: dict[int, dict[str, int]] = {vid: {} for vid in vids.values()}
    for i, (tail, head, _) in enumerate(wires):
        lab = next(labels)
        cports[tail[0]][tail[1]] = lab
        for _, vid, strand in sorted(stops[i]):
            vports[vid][f"{strand}_in"] = lab
            lab = next(labels)
            vports[vid][f"{strand}_out"] = lab
        cports[head[0]][head[1]] = lab

    classical = tuple(ClassicalCrossing(k, signs[k], **cports[k]) for k in order)
    virtual = tuple(VirtualCrossing(vid, **ports) for vid, ports in vports.items())
    loop_labels = tuple(next(labels) for _ in loops)
    return Diagram(classical, virtual, loop_labels)


# --- braids -----------------------------------------------------------------

_BRAID_HEAD = re.compile(r"\s*s\s*=\s*(\d+)\s*[:,]?")
_BRAID_TOKEN = re.compile(r"([sSv])(\d+)")


def parse_braid_word(text: str) -> tuple[int, list[tuple[str, int]]]:
    m = _BRAID_HEAD.match(text)
    if not m:
        raise CodecError("braid word must start with 's=<n>:'", 0)
    strands = int(m[1])
    word = []
    for t in re.finditer(r"\S+", text[m.end():]):
        tok = _BRAID_TOKEN.fullmatch(t.group())
        if not tok:
            raise CodecError(f"bad braid token {t.group()!r}", m.end() + t.start())
        i = int(tok[2])
        if not 1 <= i < strands:
            raise CodecError(f"generator index {i} out of range for {strands} strands", m.end() + t.start())
        word.append((tok[1], i))
    if strands < 1:
        raise CodecError("empty word on 0 strands")
    return strands, word


def parse_braid(text: str) -> Diagram:
    """Closure of a braid word; strands run upward, crossing ids follow the word.

    At ``s<i>`` the strand entering from position ``i`` passes over to
    position ``i+1`` (positive crossing); ``S<i>`` is its mirror and ``v<i>``
    swaps the two strands virtually.
    """
    strands, word = parse_braid_word(text)
    labels = count(strands + 1)
    current = list(range(1, strands + 1))  # edge label leaving each position
    raw = []
    for cid, (kind, i) in enumerate(word, start=1):
        left, right = current[i - 1], current[i]
        new_left, new_right = next(labels), next(labels)
        if kind == "s":
            raw.append(("X", cid, 1, (left, new_right, right, new_left)))
        elif kind == "S":
            raw.append(("X", cid, -1, (right, new_left, left, new_right)))
        else:
            raw.append(("V", cid, 0, (left, new_right, right, new_left)))
        current[i - 1], current[i] = new_left, new_right

    # closure: top of position j is the bottom of position j
    rename = {current[j]: j + 1 for j in range(strands) if current[j] != j + 1}
    loops = tuple(j + 1 for j in range(strands) if current[j] == j + 1)
    classical, virtual = [], []
    for kind, cid, sign, ports in raw:
        ports = tuple(rename.get(p, p) for p in ports)
        if kind == "X":
            classical.append(ClassicalCrossing(cid, sign, *ports))
        else:
            virtual.append(VirtualCrossing(cid, *ports))
    return Diagram(tuple(classical), tuple(virtual), loops)


# --- catalog ----------------------------------------------------------------

CATALOG_PD = {
    # crossingless circle
    "unknot": "O[1]",
    # one-crossing curls: edge 1 runs o_out -> u_in, edge 2 runs u_out -> o_in
    "curl+": "X[2,1,1,2] +",
    "curl-": "X[2,1,1,2] -",
}

CATALOG_BRAIDS = {
    "hopf+": "s=2: s1 s1",
    "trefoil": "s=2: s1 s1 s1",
    "trefoil_mirror": "s=2: S1 S1 S1",
    "figure8": "s=3: s1 S2 s1 S2",
    "vtrefoil": "s=2: s1 s1 v1",
}

TRIPLE_CROSSING = 1
"""Crossing of ``figure8`` used for the worked virtual skein triple (``paper_triple_*``)."""

CATALOG_NAMES = (
    "unknot", "curl+", "curl-", "hopf+", "trefoil", "trefoil_mirror", "figure8", "vtrefoil",
    "paper_triple_plus", "paper_triple_minus", "paper_triple_virtual",
)


def catalog(name: str) -> Diagram:
    if name in CATALOG_PD:
        return parse_pd(CATALOG_PD[name])
    if name in CATALOG_BRAIDS:
        return parse_braid(CATALOG_BRAIDS[name])
    if name.startswith("paper_triple_"):
        triple = skein_triples(catalog("figure8"), TRIPLE_CROSSING)
        part = name.removeprefix("paper_triple_")
        if part in ("plus", "minus", "virtual"):
            return getattr(triple, part)
    raise KeyError(f"unknown catalog entry {name!r}")


# --- JSON -------------------------------------------------------------------


def to_jsonable(obj: Any) -> Any:
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, Diagram):
        return {"pd": emit_pd(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    return obj


def emit_json(result: Any) -> str:
    """Canonical compact JSON with sorted keys; equal inputs give equal bytes."""
    return json.dumps(to_jsonable(result), sort_keys=True, separators=(",", ":"))


__all__ = [
    "CATALOG_NAMES", "CodecError", "GaussPass", "TRIPLE_CROSSING", "SignedGaussCode",
    "catalog", "emit_json", "emit_pd", "parse_braid", "parse_braid_word", "parse_gauss",
    "parse_pd", "realize_gauss", "to_jsonable",
]
