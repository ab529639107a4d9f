"""Seeded random braid-closure instances for reproducible property runs."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .codec import parse_braid
from .model import Diagram, virtualize


@dataclass(frozen=True)
class Instance:
    word: str
    crossing: int  # classical crossing to build skein triples at
    virtualize: tuple[int, ...] = ()

    def diagram(self) -> Diagram:
        d = parse_braid(self.word)
        for cid in self.virtualize:
            d = virtualize(d, cid)
        return d

    def to_json(self) -> dict:
        return {"word": self.word, "crossing": self.crossing, "virtualize": list(self.virtualize)}


def random_word(rng: random.Random, max_crossings: int = 12, virtual_rate: float = 0.0) -> str:
    strands = rng.randint(2, 4)
    length = rng.randint(1, max_crossings)
    tokens = []
    for _ in range(length):
        i = rng.randint(1, strands - 1)
        kind = "v" if rng.random() < virtual_rate else rng.choice("sS")
        tokens.append(f"{kind}{i}")
    return f"s={strands}: " + " ".join(tokens)


def random_instances(
    seed: int,
    count: int,
    *,
    max_crossings: int = 12,
    virtual_rate: float = 0.0,
    virtualize_extra: bool = False,
) -> list[Instance]:
    """Deterministic instance list for ``seed``.

    ``virtual_rate`` mixes ``v<i>`` generators into the words.  With
    ``virtualize_extra`` a random nonempty subset of the other classical
    crossings is virtualized (when there is one).  Every instance keeps at
    least one classical crossing, its ``crossing``.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        word = random_word(rng, max_crossings, virtual_rate)
        classical = [c.id for c in parse_braid(word).classical]
        if not classical:
            continue
        crossing = rng.choice(classical)
        extra: tuple[int, ...] = ()
        others = [c for c in classical if c != crossing]
        if virtualize_extra and others:
            k = rng.randint(1, len(others))
            extra = tuple(sorted(rng.sample(others, k)))
        out.append(Instance(word, crossing, extra))
    return out
