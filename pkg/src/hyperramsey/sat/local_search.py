"""Stochastic local search with neighborhood checking.

Each restart draws a uniform random assignment.  Each step flips the best
(by tie-break H) variable among those with ``nc(v)`` set and positive score.
If no such variable exists, it picks a uniformly random unsatisfied clause
and flips that clause's best variable under H.  After ``cutoff_flips`` flips
without success it restarts.

Randomness comes from one seeded generator consumed in a fixed order: at each
restart, one bit per variable in index order, then one clause index for every
random-walk step.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import _kernels as K
from .cnf import Cnf
from .result import SolveResult, Status

log = logging.getLogger(__name__)

__all__ = [
    "LocalSearchParams",
    "NeighborRelation",
    "SearchState",
    "flip",
    "solve_local_search",
    "tiebreak_H",
]


class NeighborRelation:
    """Symmetric, irreflexive relation: two variables are neighbors iff they share a group.

    Hyperedge variables use one group per vertex, so sharing a group means
    sharing an endpoint.  An explicit adjacency is stored as one group per
    neighbor pair.  Every variable also gets a private group.  It keeps nc
    true until the variable's first flip.
    """

    def __init__(self, variable_count: int, memberships: Sequence[Iterable[int]], n_shared_groups: int):
        self.variable_count = int(variable_count)
        if len(memberships) != self.variable_count:
            raise ValueError("need one membership list per variable")
        self.n_shared_groups = int(n_shared_groups)
        starts = [0]
        ids: list[int] = []
        for v, groups in enumerate(memberships):
            gs = sorted(set(int(g) for g in groups))
            if gs and (gs[0] < 0 or gs[-1] >= self.n_shared_groups):
                raise ValueError(f"variable {v + 1}: group id out of range")
            ids.extend(gs)
            ids.append(self.n_shared_groups + v)  # private group
            starts.append(len(ids))
        self.grp_start = np.array(starts, dtype=np.int64)
        self.grp_id = np.array(ids, dtype=np.int32)
        self._members: list[list[int]] | None = None

    @classmethod
    def from_groups(cls, variable_count: int, memberships: np.ndarray, n_groups: int) -> "NeighborRelation":
        """Fast path for a dense (variable_count, width) membership matrix."""
        memberships = np.asarray(memberships, dtype=np.int32)
        rel = cls.__new__(cls)
        rel.variable_count = int(variable_count)
        rel.n_shared_groups = int(n_groups)
        width = memberships.shape[1]
        private = np.arange(n_groups, n_groups + variable_count, dtype=np.int32)[:, None]
        rel.grp_id = np.hstack([np.sort(memberships, axis=1), private]).reshape(-1).astype(np.int32)
        rel.grp_start = np.arange(0, (width + 1) * variable_count + 1, width + 1, dtype=np.int64)
        rel._members = None
        return rel

    @classmethod
    def from_adjacency(cls, variable_count: int, adjacency: Mapping[int, Iterable[int]]) -> "NeighborRelation":
        """Build from 1-based adjacency sets; symmetry is enforced, self-loops rejected."""
        pairs: dict[tuple[int, int], int] = {}
        memberships: list[list[int]] = [[] for _ in range(variable_count)]
        for u, nbrs in adjacency.items():
            for v in nbrs:
                if u == v:
                    raise ValueError(f"variable {u} listed as its own neighbor")
                if not (1 <= u <= variable_count and 1 <= v <= variable_count):
                    raise ValueError(f"neighbor pair ({u}, {v}) out of range")
                key = (min(u, v), max(u, v))
                if key not in pairs:
                    pairs[key] = len(pairs)
                    memberships[key[0] - 1].append(pairs[key])
                    memberships[key[1] - 1].append(pairs[key])
        return cls(variable_count, memberships, len(pairs))

    @classmethod
    def clause_sharing(cls, cnf: Cnf) -> "NeighborRelation":
        """Variables are neighbors iff they occur in a common clause."""
        memberships: list[list[int]] = [[] for _ in range(cnf.variable_count)]
        for ci, clause in enumerate(cnf):
            for lit in clause:
                memberships[abs(lit) - 1].append(ci)
        return cls(cnf.variable_count, memberships, len(cnf))

    def groups(self, v: int) -> list[int]:
        """Shared groups of 1-based variable ``v`` (private group excluded)."""
        gs = self.grp_id[self.grp_start[v - 1] : self.grp_start[v]]
        return [int(g) for g in gs if g < self.n_shared_groups]

    def _group_members(self) -> list[list[int]]:
        if self._members is None:
            members: list[list[int]] = [[] for _ in range(self.n_shared_groups)]
            for v in range(1, self.variable_count + 1):
                for g in self.groups(v):
                    members[g].append(v)
            self._members = members
        return self._members

    def neighbors(self, v: int) -> set[int]:
        members = self._group_members()
        out: set[int] = set()
        for g in self.groups(v):
            out.update(members[g])
        out.discard(v)
        return out

    def are_neighbors(self, u: int, v: int) -> bool:
        return u != v and bool(set(self.groups(u)) & set(self.groups(v)))

    @property
    def adjacency(self) -> dict[int, set[int]]:
        return {v: self.neighbors(v) for v in range(1, self.variable_count + 1)}


class SearchState:
    """Incremental bookkeeping for one local-search worker.

    Every array is 0-based by variable or clause.  ``score``, ``subscore``,
    ``true_literal_count`` and the unsatisfied list are maintained
    incrementally by ``flip``.
    """

    def __init__(self, cnf: Cnf, neighbors: NeighborRelation, assignment: np.ndarray | Sequence[bool] | None = None):
        if neighbors.variable_count != cnf.variable_count:
            raise ValueError("neighbor relation does not cover the CNF's variables")
        n, m = cnf.variable_count, len(cnf)
        self.cnf = cnf
        self.neighbors = neighbors
        self.cl_start = cnf.offsets
        self.cl_var = (np.abs(cnf.literals) - 1).astype(np.int32)
        self.cl_sign = (cnf.literals > 0).astype(np.int8)
        sizes = np.bincount(self.cl_var, minlength=n) if len(self.cl_var) else np.zeros(n, dtype=np.int64)
        self.occ_start = np.concatenate(([0], np.cumsum(sizes))).astype(np.int64)
        clause_of = np.repeat(np.arange(m, dtype=np.int32), np.diff(cnf.offsets))
        order = np.argsort(self.cl_var, kind="stable")
        self.occ_clause = clause_of[order].astype(np.int32)
        self.occ_sign = self.cl_sign[order]
        self.true_count = np.zeros(m, dtype=np.int32)
        self.score = np.zeros(n, dtype=np.int32)
        self.subscore = np.zeros(n, dtype=np.int32)
        self.unsat = np.zeros(m, dtype=np.int32)
        self.unsat_pos = np.full(m, -1, dtype=np.int32)
        self.good = np.zeros(n, dtype=np.int32)
        self.good_pos = np.full(n, -1, dtype=np.int32)
        self.last_flip = np.zeros(n, dtype=np.int64)
        self.group_time = np.ones(neighbors.n_shared_groups + n, dtype=np.int64)
        self.counts = np.zeros(3, dtype=np.int64)  # unsat size, good size, step
        self.assign = np.zeros(n, dtype=np.int8)
        if assignment is not None:
            self.reset(assignment)

    def reset(self, assignment: np.ndarray | Sequence[bool]) -> None:
        """Load ``assignment`` (0-based, truthy = true) and recompute from scratch."""
        a = np.asarray(assignment).astype(np.int8)
        if a.shape != (self.cnf.variable_count,):
            raise ValueError("assignment length does not match the variable count")
        self.assign[:] = a
        K.init_state(self.assign, self.cl_start, self.cl_var, self.cl_sign, self.true_count, self.score,
                     self.subscore, self.unsat, self.unsat_pos, self.good, self.good_pos, self.last_flip,
                     self.group_time, self.counts)

    def _args(self):
        return (self.assign, self.cl_start, self.cl_var, self.cl_sign, self.occ_start, self.occ_clause, self.occ_sign,
                self.neighbors.grp_start, self.neighbors.grp_id, self.true_count, self.score, self.subscore,
                self.unsat, self.unsat_pos, self.good, self.good_pos, self.last_flip, self.group_time, self.counts)

    @property
    def step(self) -> int:
        return int(self.counts[2])

    @property
    def age(self) -> np.ndarray:
        return self.counts[2] - self.last_flip

    @property
    def nc(self) -> np.ndarray:
        times = self.group_time[self.neighbors.grp_id]
        owner = np.repeat(np.arange(self.cnf.variable_count), np.diff(self.neighbors.grp_start))
        flagged = times > self.last_flip[owner]
        return np.bincount(owner, weights=flagged, minlength=self.cnf.variable_count) > 0

    @property
    def true_literal_count(self) -> np.ndarray:
        return self.true_count

    @property
    def unsat_list(self) -> list[int]:
        return sorted(int(c) for c in self.unsat[: self.counts[0]])

    @property
    def num_unsat(self) -> int:
        return int(self.counts[0])

    @property
    def assignment(self) -> dict[int, bool]:
        return {v + 1: bool(x) for v, x in enumerate(self.assign)}


def flip(state: SearchState, v: int, neighbors: NeighborRelation | None = None) -> SearchState:
    """Flip 1-based variable ``v`` in place and return the state."""
    if neighbors is not None and neighbors is not state.neighbors:
        raise ValueError("state was built for a different neighbor relation")
    if not 1 <= v <= state.cnf.variable_count:
        raise ValueError(f"variable {v} out of range")
    K.flip(v - 1, *state._args())
    return state


def tiebreak_H(state: SearchState, candidates: Iterable[int]) -> int:
    """Greatest score, then smallest subscore, then greatest age, then smallest index (1-based)."""
    cands = np.array(sorted({int(c) - 1 for c in candidates}), dtype=np.int32)
    if len(cands) == 0:
        raise ValueError("tie-break needs at least one candidate")
    return int(K.pick_best(cands, len(cands), state.score, state.subscore, state.last_flip)) + 1


@dataclass
class LocalSearchParams:
    seed: int = 0
    cutoff_flips: int = 10_000_000
    max_restarts: int = 1_000_000
    time_limit: float | None = None  # seconds; None = no wall-clock limit
    chunk: int = 200_000  # flips per compiled call between progress reports


def solve_local_search(
    cnf: Cnf,
    neighbors: NeighborRelation,
    params: LocalSearchParams | None = None,
    *,
    warm_start: Sequence[bool] | None = None,
    progress: Callable[[int, int, int], None] | None = None,
    stop: Callable[[], bool] | None = None,
) -> SolveResult:
    """Search for a satisfying assignment.

    ``warm_start`` (0-based truth values) replaces the first restart's random
    assignment.  ``progress(total_flips, unsat_count, restart)`` is called
    after every chunk.  ``stop()`` returning True ends the run as a timeout.
    """
    params = params or LocalSearchParams()
    if neighbors.variable_count != cnf.variable_count:
        raise ValueError("neighbor relation must cover every variable")
    if np.any(np.diff(cnf.offsets) == 0):
        # an empty clause can never be satisfied
        return SolveResult(Status.TIMEOUT, seed=params.seed)
    state = SearchState(cnf, neighbors)
    K.seed_rng(params.seed)
    started = time.monotonic()
    total = 0
    n = cnf.variable_count
    for restart in range(params.max_restarts):
        bits = K.random_bits(n)
        if restart == 0 and warm_start is not None:
            bits = np.asarray(warm_start, dtype=np.int8)
        state.reset(bits)
        remaining = params.cutoff_flips
        while True:
            if state.num_unsat == 0:
                assignment = state.assignment
                if not cnf.is_satisfied_by(assignment):
                    raise AssertionError("local search produced a non-satisfying assignment")
                return SolveResult(Status.SAT, assignment, flips=total, restarts=restart, seed=params.seed)
            if remaining <= 0:
                break
            done = K.run(min(params.chunk, remaining), *state._args())
            total += done
            remaining -= done
            if progress is not None:
                progress(total, state.num_unsat, restart)
            if done == 0 and state.num_unsat > 0:
                break
            timed_out = params.time_limit is not None and time.monotonic() - started > params.time_limit
            if timed_out or (stop is not None and stop()):
                return SolveResult(Status.TIMEOUT, flips=total, restarts=restart, seed=params.seed)
    return SolveResult(Status.TIMEOUT, flips=total, restarts=params.max_restarts, seed=params.seed)
