"""Pasting at the PCV level.

d disjoint copies of a (p-1, q; k)-coloring are glued together and every
crossing edge is colored by its PCV alone.  The glued coloring has no red
p-clique and no blue q-clique iff every member of the P family contains a blue
crossing PCV and every member of the Q family contains a red one.  That
covering condition is what ``build_pasting_cnf`` encodes and
``verify_pasting_coloring`` checks.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .pcv import Pcv, contains, enum_pp, enum_qq, enum_vk, padded
from .sat.cnf import Cnf

__all__ = [
    "Color",
    "ColoringDomainError",
    "EmptyClauseError",
    "IncompleteAssignmentError",
    "PastingInstance",
    "PcvColoring",
    "Verdict",
    "build_pasting_cnf",
    "closed_form_coloring",
    "crossing_domain",
    "decode_coloring",
    "verify_pasting_coloring",
]


class Color(enum.Enum):
    RED = "red"
    BLUE = "blue"

    def __str__(self) -> str:
        return self.value

    @property
    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


RED, BLUE = Color.RED, Color.BLUE


class EmptyClauseError(ValueError):
    """A P or Q member contains no crossing PCV, so crossing edges alone cannot cover it."""

    def __init__(self, kind: str, pcv: Pcv):
        super().__init__(f"{kind} member {pcv} contains no crossing PCV of the edge size")
        self.kind = kind
        self.pcv = pcv


class IncompleteAssignmentError(ValueError):
    pass


class ColoringDomainError(ValueError):
    pass


def crossing_domain(k: int, d: int) -> tuple[Pcv, ...]:
    """Crossing members of V_k(d), in canonical order."""
    return enum_vk(k, d).crossing()


@dataclass(frozen=True)
class PcvColoring:
    k: int
    entries: Mapping[Pcv, Color] = field(default_factory=dict)

    def __post_init__(self) -> None:
        entries = {Pcv(tuple(v)) if not isinstance(v, Pcv) else v: Color(c) for v, c in dict(self.entries).items()}
        for v in entries:
            if v.total != self.k or not v.is_crossing:
                raise ValueError(f"{v} is not a crossing PCV of total {self.k}")
        ordered = dict(sorted(entries.items(), key=lambda item: item[0].parts, reverse=True))
        object.__setattr__(self, "entries", ordered)

    def __getitem__(self, v: Pcv) -> Color:
        return self.entries[v]

    def __len__(self) -> int:
        return len(self.entries)

    def red(self) -> list[Pcv]:
        return [v for v, c in self.entries.items() if c is RED]

    def blue(self) -> list[Pcv]:
        return [v for v, c in self.entries.items() if c is BLUE]

    def missing(self, d: int) -> list[Pcv]:
        return [v for v in crossing_domain(self.k, d) if v not in self.entries]

    def restricted(self, d: int) -> "PcvColoring":
        return PcvColoring(self.k, {v: c for v, c in self.entries.items() if len(v) <= d})

    def to_text(self, d: int) -> str:
        """Serialize the entries on crossing V_k(d) in canonical order."""
        missing = self.missing(d)
        if missing:
            raise ColoringDomainError(f"coloring has no entry for {missing[0]}")
        lines = [f"pcv-coloring k={self.k} d={d}"]
        lines += [f"{v} {self.entries[v]}" for v in crossing_domain(self.k, d)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> tuple["PcvColoring", int]:
        """Parse a coloring file; returns the coloring and its stated d."""
        lines = [l for l in text.splitlines() if l.strip()]
        if not lines:
            raise ValueError("empty coloring file")
        m = re.fullmatch(r"pcv-coloring k=(\d+) d=(\d+)", lines[0].strip())
        if not m:
            raise ValueError(f"line 1: bad header {lines[0]!r}")
        k, d = int(m.group(1)), int(m.group(2))
        entries: dict[Pcv, Color] = {}
        for lineno, line in enumerate(lines[1:], 2):
            fields = line.split()
            if len(fields) != 2 or fields[1] not in ("red", "blue"):
                raise ValueError(f"line {lineno}: expected '<pcv> <red|blue>', got {line!r}")
            v = Pcv.parse(fields[0])
            if v in entries:
                raise ValueError(f"line {lineno}: duplicate entry {v}")
            entries[v] = Color(fields[1])
        chi = cls(k, entries)
        if chi.missing(d):
            raise ColoringDomainError(f"coloring file misses {chi.missing(d)[0]}")
        return chi, d


@dataclass(frozen=True)
class PastingInstance:
    k: int
    p: int
    q: int
    d: int
    variables: tuple[Pcv, ...]

    def __post_init__(self) -> None:
        if self.k < 2 or self.d < 2 or self.p < self.k + 1 or self.q < self.k + 1:
            raise ValueError(f"pasting needs k >= 2, d >= 2, p, q >= k+1; got {self}")

    def variable(self, v: Pcv) -> int:
        return self.variables.index(v) + 1

    @property
    def variable_map(self) -> dict[Pcv, int]:
        return {v: i for i, v in enumerate(self.variables, 1)}


@dataclass(frozen=True)
class Verdict:
    valid: bool
    witness: tuple[str, Pcv] | None = None

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return "VALID"
        kind, v = self.witness
        color = "blue" if kind == "Pp" else "red"
        return f"INVALID {kind} member {v} contains no {color} PCV"


def _containment(members: tuple[Pcv, ...], variables: tuple[Pcv, ...], width: int) -> np.ndarray:
    """Boolean matrix M[i, j] = contains(members[i], variables[j])."""
    if not members or not variables:
        return np.zeros((len(members), len(variables)), dtype=bool)
    a = padded(members, width)
    b = padded(variables, width)
    out = np.empty((len(members), len(variables)), dtype=bool)
    for i in range(len(members)):
        out[i] = (b <= a[i]).all(axis=1)
    return out


def build_pasting_cnf(k: int, p: int, q: int, d: int) -> tuple[PastingInstance, Cnf]:
    """Encode the crossing-edge coloring problem for Pasting(k, p, q, d).

    Variable ``i`` is true iff crossing PCV ``instance.variables[i-1]`` is blue.
    One all-positive clause per P member, then one all-negative clause per Q member.
    """
    variables = crossing_domain(k, d)
    instance = PastingInstance(k, p, q, d, variables)
    p_members = enum_pp(p, d).members
    q_members = enum_qq(q, d).members
    width = max(d, 1)
    clauses: list[list[int]] = []
    for kind, members, sign in (("Pp", p_members, 1), ("Qq", q_members, -1)):
        cover = _containment(members, variables, width)
        for v, row in zip(members, cover):
            idx = np.flatnonzero(row)
            if len(idx) == 0:
                raise EmptyClauseError(kind, v)
            clauses.append([sign * (int(j) + 1) for j in idx])
    return instance, Cnf.from_clauses(len(variables), clauses)


def decode_coloring(instance: PastingInstance, assignment: Mapping[int, bool]) -> PcvColoring:
    """true -> blue, false -> red."""
    entries = {}
    for i, v in enumerate(instance.variables, 1):
        if i not in assignment:
            raise IncompleteAssignmentError(f"variable {i} ({v}) is unassigned")
        entries[v] = BLUE if assignment[i] else RED
    return PcvColoring(instance.k, entries)


def verify_pasting_coloring(chi: PcvColoring, p: int, q: int, d: int) -> Verdict:
    """Check the covering condition directly from the definitions (no CNF involved)."""
    missing = chi.missing(d)
    if missing:
        raise ColoringDomainError(f"coloring has no entry for crossing PCV {missing[0]} of V_{chi.k}({d})")
    blue = [v for v in chi.blue() if len(v) <= d]
    red = [v for v in chi.red() if len(v) <= d]
    for v in enum_pp(p, d):
        if not any(contains(v, u) for u in blue):
            return Verdict(False, ("Pp", v))
    for v in enum_qq(q, d):
        if not any(contains(v, u) for u in red):
            return Verdict(False, ("Qq", v))
    return Verdict(True)


def _chi1_4() -> PcvColoring:
    return PcvColoring(4, {Pcv((3, 1)): RED, Pcv((2, 2)): BLUE})


def _chi2_4() -> PcvColoring:
    # four entries are prescribed; the rest of crossing V_4(4) is filled with blue
    entries = {v: BLUE for v in crossing_domain(4, 4)}
    entries[Pcv((3, 1))] = RED
    entries[Pcv((1, 1, 1, 1))] = RED
    return PcvColoring(4, entries)


def _two_divide(k: int) -> PcvColoring:
    """d = 2 coloring for edge size k, grown from the k = 4 coloring one step at a time."""
    chi = _chi1_4().entries
    for size in range(5, k + 1):
        prev = chi
        chi = {}
        for u1 in range(size - 1, (size - 1) // 2, -1):
            u2 = size - u1
            if u1 > u2:
                chi[Pcv((u1, u2))] = prev[Pcv((u1 - 1, u2))]
        if size % 2 == 0:
            half = size // 2
            companion = Pcv((half + 1, half - 1))
            chi[Pcv((half, half))] = chi[companion].other
    return PcvColoring(k, chi)


def _large_q(k: int, d: int) -> PcvColoring:
    red = Pcv((k - 1, 1))
    return PcvColoring(k, {v: RED if v == red else BLUE for v in crossing_domain(k, d)})


def closed_form_coloring(family: str, k: int | None = None, d: int | None = None) -> PcvColoring:
    """Explicit colorings: ``chi1_4``, ``chi2_4``, ``two_divide`` (needs k) and ``large_q`` (needs k; d defaults to k)."""
    if family == "chi1_4":
        return _chi1_4()
    if family == "chi2_4":
        return _chi2_4()
    if family in ("two_divide", "large_q"):
        if k is None or k < 4:
            raise ValueError(f"{family} needs k >= 4, got {k}")
        if family == "two_divide":
            return _two_divide(k)
        return _large_q(k, d if d is not None else k)
    raise ValueError(f"unknown closed-form family {family!r}")


def coloring_from_mapping(k: int, items: Iterable[tuple[str, str]]) -> PcvColoring:
    return PcvColoring(k, {Pcv.parse(v): Color(c) for v, c in items})
