"""Direct encoding of r_k(k+1, k+1) > n and certificate verification.

Every k-subset of [n] is a variable (1 = blue = true).  Each (k+1)-subset
contributes a clause of its k+1 sub-edges positively (some edge is blue)
and one negatively (some edge is red).  Edges are numbered by colexicographic
rank.  For 1-based S = {a_1 < ... < a_k} that is sum_i C(a_i - 1, i), so the
numbering of [n] is a prefix of the numbering of [n+1].
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

import numpy as np
from numba import config as _numba_config
from numba import njit, prange

from .sat.cnf import Cnf
from .sat.local_search import NeighborRelation

# The system TBB is often too old for numba; try OpenMP and workqueue first
# unless the user picked a layer.
if "NUMBA_THREADING_LAYER" not in os.environ:
    _numba_config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

__all__ = [
    "CliqueVerdict",
    "EdgeColoring",
    "build_direct_cnf",
    "coloring_from_assignment",
    "count_monochromatic",
    "rank_edge",
    "unrank_edge",
    "verify_certificate",
]


def _binom_table(n: int, k: int) -> np.ndarray:
    """T[x, j] = C(x, j) for 0 <= x <= n, 0 <= j <= k."""
    t = np.zeros((n + 1, k + 1), dtype=np.int64)
    for x in range(n + 1):
        for j in range(min(x, k) + 1):
            t[x, j] = comb(x, j)
    return t


def rank_edge(subset: Sequence[int], n: int, k: int) -> int:
    """Colex rank of a strictly increasing 1-based k-subset of [n]."""
    s = [int(x) for x in subset]
    if len(s) != k:
        raise ValueError(f"expected {k} elements, got {len(s)}")
    if any(b <= a for a, b in zip(s, s[1:])):
        raise ValueError(f"subset must be strictly increasing: {s}")
    if s and (s[0] < 1 or s[-1] > n):
        raise ValueError(f"subset {s} not inside [1, {n}]")
    return sum(comb(a - 1, i) for i, a in enumerate(s, 1))


def unrank_edge(rank: int, n: int, k: int) -> tuple[int, ...]:
    """Inverse of ``rank_edge``."""
    if not 0 <= rank < comb(n, k):
        raise ValueError(f"rank {rank} outside [0, C({n},{k}))")
    out = []
    r = rank
    for i in range(k, 0, -1):
        # largest a with C(a-1, i) <= r
        a = i
        while comb(a, i) <= r:
            a += 1
        out.append(a)
        r -= comb(a - 1, i)
    return tuple(reversed(out))


def _all_edges(n: int, k: int) -> np.ndarray:
    """0-based vertex tuples of every k-subset, row i holding the edge of colex rank i."""
    lex = np.array(list(combinations(range(n), k)), dtype=np.int32).reshape(-1, k)
    table = _binom_table(n, k)
    ranks = table[lex, np.arange(1, k + 1)].sum(axis=1)
    out = np.empty_like(lex)
    out[ranks] = lex
    return out


def build_direct_cnf(n: int, k: int) -> tuple[Cnf, NeighborRelation]:
    """CNF satisfiable iff K_n^(k) has a coloring with no monochromatic (k+1)-clique.

    Clauses come in pairs (positive, negative) per (k+1)-subset, subsets in
    lexicographic order.
    """
    if k < 1 or n <= k:
        raise ValueError(f"direct encoding needs n > k >= 1, got n={n}, k={k}")
    table = _binom_table(n, k)
    cliques = np.array(list(combinations(range(n), k + 1)), dtype=np.int32).reshape(-1, k + 1)
    lits = np.empty((len(cliques), k + 1), dtype=np.int64)
    cols = np.arange(k + 1)
    for drop in range(k + 1):
        sub = cliques[:, cols != drop]
        lits[:, drop] = table[sub, np.arange(1, k + 1)].sum(axis=1) + 1
    # sub-edges sorted by rank keeps each clause's literal order canonical
    lits.sort(axis=1)
    matrix = np.empty((2 * len(cliques), k + 1), dtype=np.int32)
    matrix[0::2] = lits
    matrix[1::2] = -lits
    cnf = Cnf.from_uniform(comb(n, k), matrix, check=False)
    neighbors = NeighborRelation.from_groups(comb(n, k), _all_edges(n, k), n)
    return cnf, neighbors


@dataclass
class EdgeColoring:
    n: int
    k: int
    bits: np.ndarray  # uint8 per colex rank, 1 = blue

    def __post_init__(self) -> None:
        self.bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if self.bits.shape != (comb(self.n, self.k),):
            raise ValueError(f"need C({self.n},{self.k}) = {comb(self.n, self.k)} bits, got {self.bits.size}")
        if np.any(self.bits > 1):
            raise ValueError("bits must be 0 or 1")

    def color(self, subset: Sequence[int]) -> str:
        return "blue" if self.bits[rank_edge(subset, self.n, self.k)] else "red"

    def swapped(self) -> "EdgeColoring":
        """Exchange red and blue."""
        return EdgeColoring(self.n, self.k, 1 - self.bits)

    def to_text(self, p: int, q: int) -> str:
        bitstring = "".join("1" if b else "0" for b in self.bits.tolist())
        return f"ramsey-cert n={self.n} k={self.k} p={p} q={q}\n{bitstring}\n"

    @classmethod
    def from_text(cls, text: str) -> tuple["EdgeColoring", int, int]:
        """Parse a certificate file; returns (coloring, p, q)."""
        lines = [l.strip() for l in text.splitlines() if l.strip()]
        if len(lines) != 2:
            raise ValueError(f"certificate must have exactly 2 non-empty lines, got {len(lines)}")
        m = re.fullmatch(r"ramsey-cert n=(\d+) k=(\d+) p=(\d+) q=(\d+)", lines[0])
        if not m:
            raise ValueError(f"line 1: bad header {lines[0]!r}")
        n, k, p, q = map(int, m.groups())
        if set(lines[1]) - {"0", "1"}:
            raise ValueError("line 2: bitstring may only contain '0' and '1'")
        if len(lines[1]) != comb(n, k):
            raise ValueError(f"line 2: expected {comb(n, k)} bits, got {len(lines[1])}")
        bits = np.frombuffer(lines[1].encode(), dtype=np.uint8) - ord("0")
        return cls(n, k, bits), p, q


@dataclass(frozen=True)
class CliqueVerdict:
    valid: bool
    witness: tuple[tuple[int, ...], str] | None = None  # 1-based vertex set and its color

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return "VALID"
        verts, color = self.witness
        return f"INVALID {color} clique {{{','.join(map(str, verts))}}}"


@njit(cache=True)
def _mono_color(sub, pats, bits, table, k):
    """0 = all red, 1 = all blue, -1 = mixed; stops at the first edge of the second color."""
    seen_red = False
    seen_blue = False
    for e in range(pats.shape[0]):
        r = 0
        for i in range(k):
            r += table[sub[pats[e, i]], i + 1]
        if bits[r]:
            seen_blue = True
        else:
            seen_red = True
        if seen_red and seen_blue:
            return -1
    return 1 if seen_blue else 0


@njit(cache=True, parallel=True)
def _scan(bits, table, pats, n, m, k, want_red, want_blue, stop_first):
    """Enumerate m-subsets grouped by smallest vertex (one group per worker task).

    Returns per-first-vertex hit counts and the first hit found in each group.
    """
    counts = np.zeros(n, dtype=np.int64)
    first = np.full((n, m + 1), -1, dtype=np.int64)
    for a0 in prange(n - m + 1):
        sub = np.empty(m, dtype=np.int64)
        sub[0] = a0
        for i in range(1, m):
            sub[i] = a0 + i
        while True:
            c = _mono_color(sub, pats, bits, table, k)
            if (c == 0 and want_red) or (c == 1 and want_blue):
                if counts[a0] == 0:
                    for i in range(m):
                        first[a0, i] = sub[i]
                    first[a0, m] = c
                counts[a0] += 1
                if stop_first:
                    break
            # next combination with sub[0] fixed
            i = m - 1
            while i >= 1 and sub[i] == n - m + i:
                i -= 1
            if i < 1:
                break
            sub[i] += 1
            for j in range(i + 1, m):
                sub[j] = sub[j - 1] + 1
    return counts, first


def _patterns(m: int, k: int) -> np.ndarray:
    return np.array(list(combinations(range(m), k)), dtype=np.int64).reshape(-1, k)


def _run_scan(coloring: EdgeColoring, m: int, want_red: bool, want_blue: bool, stop_first: bool):
    n, k = coloring.n, coloring.k
    if m < k:
        raise ValueError(f"clique size {m} is smaller than the edge size {k}")
    if m > n:
        return np.zeros(max(n, 1), dtype=np.int64), np.full((max(n, 1), m + 1), -1, dtype=np.int64)
    table = _binom_table(n, k)
    return _scan(coloring.bits, table, _patterns(m, k), n, m, k, want_red, want_blue, stop_first)


def _witness(counts, first, m) -> tuple[tuple[int, ...], str] | None:
    hits = np.flatnonzero(counts)
    if len(hits) == 0:
        return None
    row = first[hits[0]]
    verts = tuple(int(x) + 1 for x in row[:m])
    return verts, "blue" if row[m] == 1 else "red"


def verify_certificate(coloring: EdgeColoring, p: int, q: int) -> CliqueVerdict:
    """Valid iff there is no red p-clique and no blue q-clique.

    For p == q one pass checks both colors per subset.  Otherwise red p-subsets
    and blue q-subsets are scanned separately.
    """
    k = coloring.k
    if p < k or q < k:
        raise ValueError(f"clique sizes must be at least k={k}")
    passes = [(p, True, True)] if p == q else [(p, True, False), (q, False, True)]
    for m, red, blue in passes:
        counts, first = _run_scan(coloring, m, red, blue, True)
        w = _witness(counts, first, m)
        if w is not None:
            verts, color = w
            _recheck(coloring, verts, color)
            return CliqueVerdict(False, w)
    return CliqueVerdict(True)


def _recheck(coloring: EdgeColoring, verts: tuple[int, ...], color: str) -> None:
    expected = 1 if color == "blue" else 0
    for e in combinations(verts, coloring.k):
        if coloring.bits[rank_edge(e, coloring.n, coloring.k)] != expected:
            raise AssertionError(f"witness {verts} is not monochromatic {color}")


def count_monochromatic(coloring: EdgeColoring, m: int) -> tuple[int, int]:
    """Exhaustively count (red, blue) monochromatic m-cliques.

    Unlike ``verify_certificate`` this never stops early, so its running time
    is that of a full verification pass over every m-subset.
    """
    counts_r, _ = _run_scan(coloring, m, True, False, False)
    counts_b, _ = _run_scan(coloring, m, False, True, False)
    return int(counts_r.sum()), int(counts_b.sum())


def coloring_from_assignment(assignment: Mapping[int, bool] | Sequence[bool], n: int, k: int) -> EdgeColoring:
    """Variable i (1-based, colex rank i-1) true -> blue."""
    size = comb(n, k)
    if isinstance(assignment, Mapping):
        if len(assignment) != size or any(v not in assignment for v in range(1, size + 1)):
            raise ValueError(f"assignment must cover exactly variables 1..{size}")
        bits = np.fromiter((1 if assignment[v] else 0 for v in range(1, size + 1)), dtype=np.uint8, count=size)
    else:
        if len(assignment) != size:
            raise ValueError(f"assignment has {len(assignment)} values, need {size}")
        bits = np.asarray(assignment, dtype=bool).astype(np.uint8)
    return EdgeColoring(n, k, bits)
