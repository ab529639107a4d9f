"""Exact sparse Laurent polynomials in ``A`` with monomials in ``d_1, d_2, ...``.

A monomial is keyed by ``(a_exp, dpart)`` where ``dpart`` is a sorted tuple of
``(index, power)`` pairs with ``power >= 1``.  Coefficients are Python ints, so
there is no overflow.

>>> A, d1 = MultiPoly.A(), MultiPoly.d(1)
>>> str((A**6 - d1) * A**-6)
'1 - A^-6*d1'
"""

from __future__ import annotations

import re
from collections import defaultdict
from typing import Iterable, Iterator, Mapping

DPart = tuple[tuple[int, int], ...]
Key = tuple[int, DPart]


def _dpart(d: Mapping[int, int] | Iterable[tuple[int, int]] | None) -> DPart:
    if d is None:
        return ()
    items = d.items() if isinstance(d, Mapping) else d
    merged: dict[int, int] = defaultdict(int)
    for index, power in items:
        if index < 1 or power < 0:
            raise ValueError(f"bad d-variable d{index}^{power}")
        if power:
            merged[index] += power
    return tuple(sorted(merged.items()))


def _mul_dparts(p: DPart, q: DPart) -> DPart:
    if not p:
        return q
    if not q:
        return p
    return _dpart(list(p) + list(q))


class MultiPoly:
    """Immutable element of Z[A^{+-1}, d_1, d_2, ...]."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Key, int] | None = None):
        clean: dict[Key, int] = {}
        if terms:
            for key, coeff in terms.items():
                if coeff:
                    clean[key] = int(coeff)
        self._terms = clean
        self._hash: int | None = None

    # constructors

    @classmethod
    def mono(cls, a_exp: int = 0, dpart=None, coeff: int = 1) -> "MultiPoly":
        return cls({(int(a_exp), _dpart(dpart)): coeff})

    @classmethod
    def const(cls, c: int) -> "MultiPoly":
        return cls.mono(0, None, c)

    @classmethod
    def A(cls, k: int = 1) -> "MultiPoly":
        return cls.mono(k)

    @classmethod
    def d(cls, index: int, power: int = 1) -> "MultiPoly":
        return cls.mono(0, {index: power})

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls()

    @classmethod
    def one(cls) -> "MultiPoly":
        return cls.const(1)

    # access

    @property
    def terms(self) -> dict[Key, int]:
        return dict(self._terms)

    def items(self) -> list[tuple[Key, int]]:
        """Terms in canonical order: A-exponent ascending, then d-part."""
        return sorted(self._terms.items())

    def __iter__(self) -> Iterator[tuple[Key, int]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_d_free(self) -> bool:
        return all(not dp for _, dp in self._terms)

    def d_indices(self) -> set[int]:
        return {i for _, dp in self._terms for i, _ in dp}

    # ring operations

    @staticmethod
    def _coerce(other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, int):
            return MultiPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, 0) + c
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Key, int] = defaultdict(int)
        for (a1, d1), c1 in self._terms.items():
            for (a2, d2), c2 in other._terms.items():
                out[(a1 + a2, _mul_dparts(d1, d2))] += c1 * c2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            # only monomials A^k are invertible here
            if len(self._terms) != 1:
                raise ValueError("negative power of a non-monomial")
            ((a, dp), c), = self._terms.items()
            if dp or c not in (1, -1):
                raise ValueError("negative power of a non-unit monomial")
            return MultiPoly({(a * n, ()): c ** (-n)})
        result = MultiPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # substitutions and exponent sets

    def substitute_d_one(self) -> "MultiPoly":
        out: dict[Key, int] = defaultdict(int)
        for (a, _), c in self._terms.items():
            out[(a, ())] += c
        return MultiPoly(out)

    def invert_A(self) -> "MultiPoly":
        """Apply A -> A^{-1}, leaving d-parts alone."""
        return MultiPoly({(-a, dp): c for (a, dp), c in self._terms.items()})

    def exp_set(self) -> set[int]:
        """A-exponents of the terms with no d-variable."""
        return {a for a, dp in self._terms if not dp}

    def exp_set_d(self, index: int) -> set[int]:
        """A-exponents of the terms containing ``d_index``."""
        return {a for a, dp in self._terms if any(i == index for i, _ in dp)}

    # rendering

    def to_text(self) -> str:
        """Canonical machine form: ``c*A^k*d1^e1*...`` terms joined by ``+``."""
        if not self._terms:
            return "0"
        parts = []
        for (a, dp), c in self.items():
            s = f"{c}*A^{a}"
            for i, e in dp:
                s += f"*d{i}^{e}"
            parts.append(s)
        return "+".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "MultiPoly":
        text = text.strip()
        if text == "0":
            return cls()
        out: dict[Key, int] = defaultdict(int)
        for term in text.split("+"):
            m = _TERM_RE.fullmatch(term.strip())
            if not m:
                raise ValueError(f"bad term {term!r}")
            dp = [(int(i), int(e)) for i, e in _D_RE.findall(m.group(3) or "")]
            out[(int(m.group(2)), _dpart(dp))] += int(m.group(1))
        return cls(out)

    def to_json(self) -> dict:
        return {
            "poly": [
                {"A": a, "d": {str(i): e for i, e in dp}, "c": c}
                for (a, dp), c in self.items()
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> "MultiPoly":
        out: dict[Key, int] = defaultdict(int)
        for t in obj["poly"]:
            out[(int(t["A"]), _dpart({int(i): int(e) for i, e in t["d"].items()}))] += int(t["c"])
        return cls(out)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        # highest A-power first reads like the usual notation
        terms = sorted(self._terms.items(), key=lambda kv: (len(kv[0][1]) > 0, kv[0][1], -kv[0][0]))
        out = []
        for (a, dp), c in terms:
            factors = []
            if a:
                factors.append(f"A^{a}")
            factors.extend(f"d{i}" if e == 1 else f"d{i}^{e}" for i, e in dp)
            body = "*".join(factors)
            mag = abs(c)
            if not body:
                piece = str(mag)
            elif mag == 1:
                piece = body
            else:
                piece = f"{mag}*{body}"
            if not out:
                out.append(piece if c > 0 else f"-{piece}")
            else:
                out.append(f"+ {piece}" if c > 0 else f"- {piece}")
        return " ".join(out)

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_text()!r})"


_TERM_RE = re.compile(r"(-?\d+)\*A\^(-?\d+)((?:\*d\d+\^\d+)*)")
_D_RE = re.compile(r"\*d(\d+)\^(\d+)")

A = MultiPoly.A()
DELTA = -(A**2) - A**-2
"""Value of an extra loop, ``-A^2 - A^{-2}``."""


def d(index: int) -> MultiPoly:
    return MultiPoly.d(index)
