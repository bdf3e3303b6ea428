"""CNF container and DIMACS interchange."""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

Assignment = dict[int, bool]


class CnfError(ValueError):
    pass


class AssignmentParseError(ValueError):
    pass


class Cnf:
    """Clauses over variables ``1..variable_count`` stored as one flat literal array.

    ``literals[offsets[i]:offsets[i+1]]`` is clause ``i``.  The flat layout keeps
    the half-million-clause direct encodings cheap to hold and to hand to the
    compiled kernels.
    """

    __slots__ = ("variable_count", "literals", "offsets")

    def __init__(self, variable_count: int, literals: np.ndarray, offsets: np.ndarray, *, check: bool = True):
        self.variable_count = int(variable_count)
        self.literals = np.ascontiguousarray(literals, dtype=np.int32)
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        if check:
            self.validate()

    @classmethod
    def from_clauses(cls, variable_count: int, clauses: Iterable[Sequence[int]]) -> "Cnf":
        flat: list[int] = []
        offsets = [0]
        for clause in clauses:
            flat.extend(int(l) for l in clause)
            offsets.append(len(flat))
        return cls(variable_count, np.array(flat, dtype=np.int32), np.array(offsets, dtype=np.int64))

    @classmethod
    def from_uniform(cls, variable_count: int, matrix: np.ndarray, *, check: bool = True) -> "Cnf":
        """Build from an (m, width) literal matrix where every clause has the same length."""
        matrix = np.asarray(matrix, dtype=np.int32)
        m, width = matrix.shape
        offsets = np.arange(0, (m + 1) * width, width, dtype=np.int64)
        return cls(variable_count, matrix.reshape(-1), offsets, check=check)

    def validate(self) -> None:
        if self.variable_count < 0:
            raise CnfError("negative variable count")
        if self.offsets.ndim != 1 or len(self.offsets) == 0 or self.offsets[0] != 0:
            raise CnfError("malformed clause offsets")
        if self.offsets[-1] != len(self.literals) or np.any(np.diff(self.offsets) < 0):
            raise CnfError("clause offsets do not match the literal array")
        lits = self.literals
        if len(lits):
            mag = np.abs(lits)
            if mag.min() < 1 or mag.max() > self.variable_count:
                raise CnfError(f"literal outside 1..{self.variable_count}")
        for i, clause in enumerate(self):
            if len(set(clause)) != len(clause):
                raise CnfError(f"clause {i} repeats a literal: {clause}")
            if any(-l in clause for l in clause):
                raise CnfError(f"clause {i} is tautological: {clause}")

    def __len__(self) -> int:
        return len(self.offsets) - 1

    def clause(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.literals[self.offsets[i] : self.offsets[i + 1]])

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        lits = self.literals.tolist()
        offs = self.offsets.tolist()
        for a, b in zip(offs, offs[1:]):
            yield tuple(lits[a:b])

    @property
    def clauses(self) -> list[tuple[int, ...]]:
        return list(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cnf):
            return NotImplemented
        return (
            self.variable_count == other.variable_count
            and np.array_equal(self.offsets, other.offsets)
            and np.array_equal(self.literals, other.literals)
        )

    def __repr__(self) -> str:
        return f"Cnf(variables={self.variable_count}, clauses={len(self)})"

    def is_satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        """Independent evaluator used to re-check every SAT answer."""
        return first_falsified_clause(self, assignment) is None


def first_falsified_clause(cnf: Cnf, assignment: Mapping[int, bool]) -> int | None:
    values = np.zeros(cnf.variable_count + 1, dtype=bool)
    for v in range(1, cnf.variable_count + 1):
        values[v] = bool(assignment[v])
    lits = cnf.literals
    if len(cnf) == 0:
        return None
    true_lit = np.where(lits > 0, values[np.abs(lits)], ~values[np.abs(lits)])
    cum = np.concatenate(([0], np.cumsum(true_lit, dtype=np.int64)))
    hits = cum[cnf.offsets[1:]] - cum[cnf.offsets[:-1]]
    bad = np.flatnonzero(hits == 0)
    return int(bad[0]) if len(bad) else None


def export_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.variable_count} {len(cnf)}"]
    lines.extend(" ".join(map(str, clause + (0,))) for clause in cnf)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Cnf:
    """Read DIMACS CNF; clauses may span lines and are terminated by 0."""
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise CnfError(f"line {lineno}: bad problem line {line!r}")
            header = (int(fields[2]), int(fields[3]))
            continue
        if header is None:
            raise CnfError(f"line {lineno}: clause before problem line")
        try:
            values = [int(x) for x in line.split()]
        except ValueError:
            raise CnfError(f"line {lineno}: non-integer literal in {line!r}") from None
        for lit in values:
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if header is None:
        raise CnfError("missing 'p cnf' problem line")
    if current:
        clauses.append(current)
    n_vars, n_clauses = header
    if len(clauses) != n_clauses:
        raise CnfError(f"header announces {n_clauses} clauses, found {len(clauses)}")
    return Cnf.from_clauses(n_vars, clauses)


def import_assignment(text: str, variable_count: int) -> Assignment:
    """Parse solver solution lines (``v``-prefixed or bare signed integers)."""
    assignment: Assignment = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "cs":
            continue
        if line.startswith("v"):
            line = line[1:]
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise AssignmentParseError(f"line {lineno}: not an integer: {tok!r}") from None
            if lit == 0:
                continue
            var = abs(lit)
            if var > variable_count:
                raise AssignmentParseError(f"line {lineno}: variable {var} out of range 1..{variable_count}")
            assignment[var] = lit > 0
    missing = [v for v in range(1, variable_count + 1) if v not in assignment]
    if missing:
        raise AssignmentParseError(f"variable {missing[0]} unassigned ({len(missing)} missing)")
    return assignment


def format_assignment(assignment: Mapping[int, bool]) -> str:
    """Solution line in the format ``import_assignment`` reads back."""
    lits = [v if assignment[v] else -v for v in sorted(assignment)]
    return "v " + " ".join(map(str, lits + [0])) + "\n"
