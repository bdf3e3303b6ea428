"""Primal cardinality vectors (PCVs) and the partition families built from them.

A PCV records, for a vertex subset X of a union of d disjoint blocks, the
positive sizes |X & V_i| sorted non-increasingly.  Two PCVs are compared with
the containment order: ``b <=_c a`` iff ``b`` is no longer than ``a`` and is
dominated coordinate-wise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "DegenerateSubsetError",
    "Pcv",
    "PcvFamily",
    "contains",
    "enum_pp",
    "enum_qq",
    "enum_vk",
    "partitions",
    "pcv_from_counts",
]

_PCV_RE = re.compile(r"^\(\s*\d+(\s*,\s*\d+)*\s*\)$")


class DegenerateSubsetError(ValueError):
    """Raised when a cardinality vector describes the empty subset."""


@dataclass(frozen=True)
class Pcv:
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(int(x) for x in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("a PCV needs at least one part")
        if any(x < 1 for x in parts):
            raise ValueError(f"PCV parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"PCV parts must be non-increasing: {parts}")

    def __len__(self) -> int:
        return len(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def is_crossing(self) -> bool:
        """True when the subset meets at least two blocks."""
        return len(self.parts) >= 2

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.parts) + ")"

    def __repr__(self) -> str:
        return f"Pcv{self}"

    @classmethod
    def parse(cls, text: str) -> "Pcv":
        """Inverse of ``str``: ``"(3,1)"`` -> ``Pcv((3, 1))``."""
        text = text.strip()
        if not _PCV_RE.match(text):
            raise ValueError(f"malformed PCV: {text!r}")
        return cls(tuple(int(x) for x in text[1:-1].split(",")))


def pcv_from_counts(counts: Iterable[int]) -> Pcv:
    """Build the PCV of a subset from its per-block intersection sizes."""
    counts = [int(c) for c in counts]
    if any(c < 0 for c in counts):
        raise ValueError(f"negative intersection size in {counts}")
    positive = sorted((c for c in counts if c > 0), reverse=True)
    if not positive:
        raise DegenerateSubsetError("all intersection sizes are zero")
    return Pcv(tuple(positive))


def contains(a: Pcv, b: Pcv) -> bool:
    """Return True iff ``b <=_c a``."""
    if len(b) > len(a):
        return False
    return all(y <= x for x, y in zip(a.parts, b.parts))


def partitions(s: int, max_parts: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``s`` into at most ``max_parts`` parts, each <= ``max_part``.

    Yields in decreasing lexicographic order.
    """
    if max_part is None:
        max_part = s
    if s == 0:
        yield ()
        return
    if max_parts <= 0 or max_part <= 0:
        return
    # the first part must leave a remainder that fits in max_parts - 1 parts of size <= first
    lo = -(-s // max_parts)
    for first in range(min(s, max_part), lo - 1, -1):
        for rest in partitions(s - first, max_parts - 1, first):
            yield (first,) + rest


@dataclass(frozen=True)
class PcvFamily:
    """An enumerated family: V (all), P (largest part <= s-2) or Q (<= s-1)."""

    kind: str
    s: int
    d: int
    members: tuple[Pcv, ...]

    def __iter__(self) -> Iterator[Pcv]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: object) -> bool:
        return v in self.members

    def crossing(self) -> tuple[Pcv, ...]:
        return tuple(m for m in self.members if m.is_crossing)


def _family(kind: str, s: int, d: int, max_part: int) -> PcvFamily:
    members = tuple(Pcv(parts) for parts in partitions(s, d, max_part))
    return PcvFamily(kind, s, d, members)


def enum_vk(s: int, d: int) -> PcvFamily:
    """All PCVs with total ``s`` and at most ``d`` parts."""
    if s < 1 or d < 1:
        raise ValueError(f"enum_vk needs s >= 1 and d >= 1, got s={s}, d={d}")
    return _family("Vk", s, d, s)


def enum_pp(p: int, d: int) -> PcvFamily:
    """The P family: total ``p``, at most ``d`` parts, largest part <= p-2.

    May be empty; an empty P family imposes no constraint.
    """
    if p < 3 or d < 2:
        raise ValueError(f"enum_pp needs p >= 3 and d >= 2, got p={p}, d={d}")
    return _family("Pp", p, d, p - 2)


def enum_qq(q: int, d: int) -> PcvFamily:
    """The Q family: total ``q``, at most ``d`` parts, largest part <= q-1."""
    if q < 2 or d < 2:
        raise ValueError(f"enum_qq needs q >= 2 and d >= 2, got q={q}, d={d}")
    return _family("Qq", q, d, q - 1)


def canonical_key(v: Pcv) -> tuple[int, ...]:
    """Sort key for the canonical (decreasing lexicographic) order; use with reverse=True."""
    return v.parts


def padded(vectors: Sequence[Pcv], width: int):
    """Stack PCVs into a zero-padded integer matrix of shape (len, width).

    With zero padding, ``contains(a, b)`` is exactly ``(pad(a) >= pad(b)).all()``.
    """
    import numpy as np

    out = np.zeros((len(vectors), width), dtype=np.int16)
    for i, v in enumerate(vectors):
        if len(v) > width:
            raise ValueError(f"{v} is longer than width {width}")
        out[i, : len(v)] = v.parts
    return out
