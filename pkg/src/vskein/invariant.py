"""State sums: the cut-system double bracket, the cusp-reduction oracle, and skein checks.

Splices are pinned as follows.  At a positive crossing the A-splice is the
oriented one (o_in-u_out, u_in-o_out) and the B-splice the disoriented one
(o_in-u_in, o_out-u_out); at a negative crossing the two swap.  States are
indexed by a bitmask over classical crossings in id order, bit set = B.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator

from .model import (
    PORT_ANGLE,
    Diagram,
    DiagramError,
    component_cycles,
    semi_arcs,
    skein_triples,
    writhe,
)
from .numbering import (
    CutSystem,
    canonical_cut_system,
    is_almost_classical_diagram,
    is_checkerboard_colorable,
    is_valid_cut_system,
)
from .poly import DELTA, MultiPoly

log = logging.getLogger(__name__)

A = MultiPoly.A()
DEFAULT_CAP = 26

_PORTS = ("o_in", "o_out", "u_in", "u_out")
_ORIENTED = {0: 3, 3: 0, 2: 1, 1: 2}
_DISORIENTED = {0: 2, 2: 0, 1: 3, 3: 1}


class CrossingCapError(ValueError):
    """The diagram has more classical crossings than the configured cap."""


class LoopIndexError(ArithmeticError):
    """A state loop carried an odd algebraic number of cut points (or cusps)."""


class PreconditionError(ValueError):
    """A verifier's hypothesis does not hold for the given diagram."""


# --- state tables -----------------------------------------------------------


class _Tables:
    """Flat lookup tables for tracing state loops.

    Node ``4k + p`` is port ``p`` of the ``k``-th classical crossing.  Semi-arcs
    join nodes; splices join nodes of one crossing.
    """

    def __init__(self, d: Diagram, cuts: CutSystem | None):
        self.order = [c.id for c in d.classical]
        self.m = len(self.order)
        index = {cid: k for k, cid in enumerate(self.order)}
        signs = [c.sign for c in d.classical]
        self.signs = signs
        n = 4 * self.m
        self.arc_partner = [0] * n
        self.arc_jump = [0] * n
        self.arc_of = [0] * n
        self.arc_forward = [False] * n
        self.closed_jumps: list[tuple[int, int]] = []
        cuts = cuts or CutSystem.empty()
        for a in semi_arcs(d):
            j = cuts.jump(a)
            if a.closed:
                self.closed_jumps.append((a.id, j))
                continue
            s = 4 * index[a.start.crossing] + _PORTS.index(a.start.name)
            e = 4 * index[a.end.crossing] + _PORTS.index(a.end.name)
            self.arc_partner[s], self.arc_partner[e] = e, s
            self.arc_jump[s], self.arc_jump[e] = j, -j
            self.arc_of[s] = self.arc_of[e] = a.id
            self.arc_forward[s] = True

        # splice[b][node], side[b][node]: b = 0 for A, 1 for B
        self.splice = [[0] * n, [0] * n]
        self.side = [[0] * n, [0] * n]
        for k, sign in enumerate(signs):
            angles = PORT_ANGLE[sign]
            for b in (0, 1):
                oriented = (b == 0) == (sign > 0)
                pairing = _ORIENTED if oriented else _DISORIENTED
                for p, q in pairing.items():
                    self.splice[b][4 * k + p] = 4 * k + q
                    if not oriented:
                        turn = (angles[_PORTS[q]] - angles[_PORTS[p]]) % 360
                        self.side[b][4 * k + p] = 1 if turn == 90 else -1

    def loops(self, mask: int, cusps: bool = False) -> list[tuple[int, list[int], list[tuple[int, bool]]]]:
        """Trace all loops of one state.

        Each loop is ``(cut_sum, cusp_sides, arcs)`` with ``arcs`` a list of
        ``(arc_id, forward)``; ``cusp_sides`` is filled only when ``cusps``.
        """
        out = []
        visited = bytearray(4 * self.m)
        partner, jump, splice, side = self.arc_partner, self.arc_jump, self.splice, self.side
        for start in range(4 * self.m):
            if visited[start]:
                continue
            total = 0
            sides: list[int] = []
            arcs = []
            cur = start
            while True:
                visited[cur] = 1
                nxt = partner[cur]
                total += jump[cur]
                arcs.append((self.arc_of[cur], self.arc_forward[cur]))
                visited[nxt] = 1
                b = (mask >> (nxt >> 2)) & 1
                if cusps and side[b][nxt]:
                    sides.append(side[b][nxt])
                cur = splice[b][nxt]
                if cur == start:
                    break
            out.append((total, sides, arcs))
        for arc_id, j in self.closed_jumps:
            out.append((j, [], [(arc_id, True)]))
        return out


def _cut_index(total: int) -> int:
    if total % 2:
        raise LoopIndexError(f"loop carries odd cut-point sum {total}")
    return abs(total) // 2


def _cusp_index(sides: list[int]) -> int:
    """Cancel adjacent same-side cusps; the surviving zig-zag has 2n cusps."""
    stack: list[int] = []
    for s in sides:
        if stack and stack[-1] == s:
            stack.pop()
        else:
            stack.append(s)
    while len(stack) >= 2 and stack[0] == stack[-1]:
        stack = stack[1:-1]
    if len(stack) % 2:
        raise LoopIndexError(f"loop carries odd reduced cusp count {len(stack)}")
    return len(stack) // 2


def _monomial(natural: int, n_loops: int, indices) -> MultiPoly:
    dpart = Counter(i for i in indices if i)
    return MultiPoly.mono(natural, dpart) * DELTA ** (n_loops - 1)


def _count_states(tables: _Tables, lo: int, hi: int, cusps: bool) -> Counter:
    counts: Counter = Counter()
    m = tables.m
    for mask in range(lo, hi):
        loops = tables.loops(mask, cusps)
        if cusps:
            idx = tuple(sorted(_cusp_index(s) for _, s, _ in loops))
        else:
            idx = tuple(sorted(_cut_index(t) for t, _, _ in loops))
        natural = m - 2 * bin(mask).count("1")
        counts[(natural, len(loops), idx)] += 1
    return counts


def _counts_to_poly(counts: Counter) -> MultiPoly:
    total = MultiPoly.zero()
    for (natural, n_loops, idx), k in sorted(counts.items()):
        total = total + k * _monomial(natural, n_loops, idx)
    return total


def _chunk_poly(args) -> MultiPoly:
    tables, lo, hi, cusps = args
    return _counts_to_poly(_count_states(tables, lo, hi, cusps))


def _state_sum(tables: _Tables, cusps: bool, workers: int) -> MultiPoly:
    n = 1 << tables.m
    if workers <= 1 or n < 1024:
        return _chunk_poly((tables, 0, n, cusps))
    step = -(-n // (workers * 4))
    jobs = [(tables, lo, min(lo + step, n), cusps) for lo in range(0, n, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_chunk_poly, jobs))
    return reduce(lambda p, q: p + q, parts, MultiPoly.zero())


def _check_cap(d: Diagram, cap: int | None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    if d.n_classical > cap:
        raise CrossingCapError(f"{d.n_classical} classical crossings exceed the cap of {cap}")


def _writhe_factor(d: Diagram) -> MultiPoly:
    return (-(A**3)) ** (-writhe(d))


# --- public state-sum API ---------------------------------------------------


@dataclass(frozen=True)
class LoopReport:
    arcs: tuple[tuple[int, bool], ...]
    cut_sum: int
    index: int


@dataclass(frozen=True)
class StateReport:
    mask: int
    choices: str  # one letter per classical crossing, in id order
    natural: int
    loops: tuple[LoopReport, ...]
    contribution: MultiPoly

    @property
    def n_loops(self) -> int:
        return len(self.loops)

    def line(self) -> str:
        idx = ",".join(str(lp.index) for lp in self.loops)
        return f"{self.choices or '-'}\tnatural={self.natural}\tloops={self.n_loops}\tindex=[{idx}]\t{self.contribution}"

    def to_json(self) -> dict:
        return {
            "choices": self.choices,
            "natural": self.natural,
            "loops": [
                {"arcs": [[a, f] for a, f in lp.arcs], "cut_sum": lp.cut_sum, "index": lp.index}
                for lp in self.loops
            ],
            "n_loops": self.n_loops,
            "contribution": self.contribution.to_json(),
        }


def _resolve_cuts(d: Diagram, cuts: CutSystem | None) -> CutSystem:
    if cuts is None:
        return canonical_cut_system(d)
    if not is_valid_cut_system(d, cuts):
        raise DiagramError("cut system admits no Alexander numbering")
    return cuts


def enumerate_states(d: Diagram, cuts: CutSystem | None = None, cap: int | None = None) -> Iterator[StateReport]:
    """Yield all ``2^m`` cut point states, masks in increasing order."""
    _check_cap(d, cap)
    cuts = _resolve_cuts(d, cuts)
    tables = _Tables(d, cuts)
    for mask in range(1 << tables.m):
        loops = tuple(
            LoopReport(tuple(arcs), total, _cut_index(total)) for total, _, arcs in tables.loops(mask)
        )
        natural = tables.m - 2 * bin(mask).count("1")
        choices = "".join("B" if (mask >> k) & 1 else "A" for k in range(tables.m))
        yield StateReport(mask, choices, natural, loops, _monomial(natural, len(loops), [lp.index for lp in loops]))


def double_bracket(d: Diagram, cuts: CutSystem | None = None, *, cap: int | None = None, workers: int = 1) -> MultiPoly:
    _check_cap(d, cap)
    return _state_sum(_Tables(d, _resolve_cuts(d, cuts)), cusps=False, workers=workers)


def x_polynomial(d: Diagram, *, cap: int | None = None, workers: int = 1) -> MultiPoly:
    """``(-A^3)^{-w} <<D>>`` with the canonical cut system."""
    return _writhe_factor(d) * double_bracket(d, None, cap=cap, workers=workers)


def f_polynomial(d: Diagram, *, cap: int | None = None, workers: int = 1) -> MultiPoly:
    return x_polynomial(d, cap=cap, workers=workers).substitute_d_one()


def arrow_oracle(d: Diagram, *, cap: int | None = None, workers: int = 1) -> MultiPoly:
    """Same state sum, indices from cusps instead of cut points.

    Each disoriented splice leaves a cusp on both new arcs, pointing at the
    crossing.  Along a loop, adjacent cusps on the same side cancel; a loop
    left with ``2n`` cusps has index ``n``.  No cut system or numbering is
    consulted.
    """
    _check_cap(d, cap)
    return _writhe_factor(d) * _state_sum(_Tables(d, None), cusps=True, workers=workers)


# --- skein verifiers --------------------------------------------------------


@dataclass(frozen=True)
class SkeinReport:
    relation: str
    crossing: int
    lhs: MultiPoly
    rhs: MultiPoly
    relabeled: bool = False
    values: dict = field(default_factory=dict)

    @property
    def residual(self) -> MultiPoly:
        return self.lhs - self.rhs

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    def to_json(self) -> dict:
        return {
            "relation": self.relation,
            "crossing": self.crossing,
            "relabeled": self.relabeled,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "residual": self.residual.to_json(),
            "ok": self.ok,
            "values": {k: v.to_json() for k, v in sorted(self.values.items())},
        }


def verify_skein_classical(d: Diagram, c: int, *, cap: int | None = None) -> SkeinReport:
    """``A^4 f+ - A^-4 f- + (A^2 - A^-2) f0``; lhs is that sum, rhs is 0."""
    t = skein_triples(d, c)
    fp, fm, f0 = (f_polynomial(x, cap=cap) for x in (t.plus, t.minus, t.zero))
    lhs = A**4 * fp - A**-4 * fm + (A**2 - A**-2) * f0
    return SkeinReport("classical", c, lhs, MultiPoly.zero(), t.relabeled, {"f+": fp, "f-": fm, "f0": f0})


def verify_skein_virtual_cc(d: Diagram, c: int, *, cap: int | None = None) -> SkeinReport:
    """``A^3 f+ + A^-3 f- = (A^3 + A^-3) fv`` for checkerboard colorable ``D+``."""
    t = skein_triples(d, c)
    if not is_checkerboard_colorable(t.plus):
        raise PreconditionError("D+ is not checkerboard colorable")
    fp, fm, fv = (f_polynomial(x, cap=cap) for x in (t.plus, t.minus, t.virtual))
    lhs = A**3 * fp + A**-3 * fm
    rhs = (A**3 + A**-3) * fv
    return SkeinReport("checkerboard", c, lhs, rhs, t.relabeled, {"f+": fp, "f-": fm, "fv": fv})


def verify_skein_main(d: Diagram, c: int, *, cap: int | None = None) -> SkeinReport:
    """``(A^6 - d1) X+ + (-A^-6 + d1) X- = (A^6 - A^-6) Xv`` for almost classical ``D+``, ``D-``."""
    t = skein_triples(d, c)
    if not is_almost_classical_diagram(t.plus):
        raise PreconditionError("D+ is not almost classical")
    if not is_almost_classical_diagram(t.minus):
        raise PreconditionError("D- is not almost classical")
    xp, xm, xv = (x_polynomial(x, cap=cap) for x in (t.plus, t.minus, t.virtual))
    d1 = MultiPoly.d(1)
    lhs = (A**6 - d1) * xp + (-(A**-6) + d1) * xm
    rhs = (A**6 - A**-6) * xv
    return SkeinReport("main", c, lhs, rhs, t.relabeled, {"X+": xp, "X-": xm, "Xv": xv})


# --- exponent congruences ---------------------------------------------------


@dataclass(frozen=True)
class CongruenceReport:
    components: int
    exp_set: frozenset[int]
    exp_set_d1: frozenset[int]
    d_indices: frozenset[int]
    premise: str = "obtained from an almost classical diagram by one virtualization (caller-asserted)"

    @property
    def plain_residue(self) -> int:
        return 0 if self.components % 2 else 2

    @property
    def d1_residue(self) -> int:
        return 2 if self.components % 2 else 0

    @property
    def plain_ok(self) -> bool:
        return all(e % 4 == self.plain_residue for e in self.exp_set)

    @property
    def d1_ok(self) -> bool:
        return all(e % 4 == self.d1_residue for e in self.exp_set_d1)

    @property
    def only_d1(self) -> bool:
        return self.d_indices <= {1}

    @property
    def ok(self) -> bool:
        return self.plain_ok and self.d1_ok and self.only_d1

    def to_json(self) -> dict:
        return {
            "components": self.components,
            "exp_set": sorted(self.exp_set),
            "exp_set_d1": sorted(self.exp_set_d1),
            "d_indices": sorted(self.d_indices),
            "plain_residue_mod4": self.plain_residue,
            "d1_residue_mod4": self.d1_residue,
            "plain_ok": self.plain_ok,
            "d1_ok": self.d1_ok,
            "only_d1": self.only_d1,
            "premise": self.premise,
            "ok": self.ok,
        }


def check_exponent_congruence(d: Diagram, x: MultiPoly | None = None, *, cap: int | None = None) -> CongruenceReport:
    """Check the mod-4 exponent pattern of ``X_D`` and that only ``d_1`` occurs."""
    x = x_polynomial(d, cap=cap) if x is None else x
    return CongruenceReport(
        len(component_cycles(d)),
        frozenset(x.exp_set()),
        frozenset(x.exp_set_d(1)),
        frozenset(x.d_indices()),
    )


# --- state classes across a virtual skein triple ----------------------------


@dataclass(frozen=True)
class StatePair:
    """One splice choice away from ``p``, seen in ``D+`` (A and B at ``p``) and ``Dv``."""

    mask: int
    kind: str  # "S'", "S''" or "diagonal", from how the rest of the state joins p's ports
    loops_plus_a: int
    loops_plus_b: int
    loops_v: int

    @property
    def relation_holds(self) -> bool:
        if self.kind == "S'":
            return self.loops_plus_a == self.loops_v + 1 and self.loops_plus_b == self.loops_v
        if self.kind == "S''":
            return self.loops_plus_a == self.loops_v and self.loops_plus_b == self.loops_v + 1
        return False


def _outside_pairing(tables: _Tables, mask: int, k: int) -> str:
    """Follow the state from crossing ``k``'s o_in port back to another port of ``k``."""
    node = 4 * k
    while True:
        node = tables.arc_partner[node]
        if node >> 2 == k:
            break
        node = tables.splice[(mask >> (node >> 2)) & 1][node]
        if node >> 2 == k:
            break
    return {3: "S'", 2: "S''", 1: "diagonal"}[node & 3]


def skein_state_classes(d: Diagram, c: int, cap: int | None = None) -> tuple[list[StatePair], dict[str, MultiPoly]]:
    """Pair states of ``D+``, ``D-`` and ``Dv`` sharing the splices away from ``c``.

    Returns the pairs and the six partial brackets ``<<D|S>>`` keyed
    ``"+S'"``, ``"+S''"``, ``"-S'"``, ``"-S''"``, ``"vS'"``, ``"vS''"``.  ``D+`` and
    ``D-`` use empty cut systems; ``Dv`` uses the two cut points around the
    virtualized crossing.
    """
    t = skein_triples(d, c)
    _check_cap(t.plus, cap)
    for x in (t.plus, t.minus):
        if not is_almost_classical_diagram(x):
            raise PreconditionError("D+ and D- must be almost classical")
    tp, tm = _Tables(t.plus, None), _Tables(t.minus, None)
    tv = _Tables(t.virtual, canonical_cut_system(t.virtual, around_virtual=c))
    k = tp.order.index(c)
    low = (1 << k) - 1

    def stats(tables, mask):
        loops = tables.loops(mask)
        idx = [_cut_index(tot) for tot, _, _ in loops]
        natural = tables.m - 2 * bin(mask).count("1")
        return len(loops), _monomial(natural, len(loops), idx)

    pairs = []
    parts = {key: MultiPoly.zero() for key in ("+S'", "+S''", "-S'", "-S''", "vS'", "vS''")}
    for vmask in range(1 << tv.m):
        a_mask = (vmask & low) | ((vmask & ~low) << 1)
        b_mask = a_mask | (1 << k)
        kind = _outside_pairing(tp, a_mask, k)
        na, pa = stats(tp, a_mask)
        nb, pb = stats(tp, b_mask)
        nv, pv = stats(tv, vmask)
        _, ma = stats(tm, a_mask)
        _, mb = stats(tm, b_mask)
        pairs.append(StatePair(vmask, kind, na, nb, nv))
        if kind != "diagonal":
            parts["+" + kind] += pa + pb
            parts["-" + kind] += ma + mb
            parts["v" + kind] += pv
    return pairs, parts
