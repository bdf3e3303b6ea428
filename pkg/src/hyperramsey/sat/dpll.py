"""Complete backtracking solver: unit propagation, most-constrained branching,
chronological backtracking.  Intended for the small pasting CNFs where an UNSAT
answer must be certified by exhausting the search space.
"""

from __future__ import annotations

from .cnf import Cnf
from .result import SolveResult, Status


def solve_complete(cnf: Cnf, budget: int | None = None) -> SolveResult:
    """Decide ``cnf``.  ``budget`` caps the number of decision nodes."""
    solver = _Dpll(cnf)
    status = solver.run(budget)
    if status is Status.SAT:
        assignment = {v: bool(solver.value[v] == 1) for v in range(1, cnf.variable_count + 1)}
        if not cnf.is_satisfied_by(assignment):
            raise AssertionError("complete solver produced a non-satisfying assignment")
        return SolveResult(Status.SAT, assignment, nodes=solver.nodes)
    return SolveResult(status, None, nodes=solver.nodes)


class _Dpll:
    def __init__(self, cnf: Cnf):
        n = cnf.variable_count
        self.n = n
        self.clauses = cnf.clauses
        # occurrence lists indexed by literal: occ[lit] for lit in -n..n
        self.occ: dict[int, list[int]] = {l: [] for v in range(1, n + 1) for l in (v, -v)}
        for ci, clause in enumerate(self.clauses):
            for lit in clause:
                self.occ[lit].append(ci)
        self.free = [len(c) for c in self.clauses]  # unassigned literals per clause
        self.sat = [0] * len(self.clauses)  # true literals per clause
        self.value = [0] * (n + 1)  # 0 unassigned, 1 true, -1 false
        self.trail: list[int] = []
        self.nodes = 0
        self.occurrences = [0] * (n + 1)
        for clause in self.clauses:
            for lit in clause:
                self.occurrences[abs(lit)] += 1

    def _assign(self, lit: int) -> bool:
        """Set ``lit`` true; return False on conflict (all counters stay consistent)."""
        var = abs(lit)
        self.value[var] = 1 if lit > 0 else -1
        self.trail.append(lit)
        ok = True
        for ci in self.occ[lit]:
            self.sat[ci] += 1
            self.free[ci] -= 1
        for ci in self.occ[-lit]:
            self.free[ci] -= 1
            if self.sat[ci] == 0 and self.free[ci] == 0:
                ok = False
        return ok

    def _unassign(self) -> int:
        lit = self.trail.pop()
        self.value[abs(lit)] = 0
        for ci in self.occ[lit]:
            self.sat[ci] -= 1
            self.free[ci] += 1
        for ci in self.occ[-lit]:
            self.free[ci] += 1
        return lit

    def _unit_literal(self, ci: int) -> int:
        for lit in self.clauses[ci]:
            if self.value[abs(lit)] == 0:
                return lit
        raise AssertionError("clause has no free literal")

    def _propagate(self, start: int) -> bool:
        """Unit-propagate from trail position ``start``."""
        i = start
        while i < len(self.trail):
            lit = self.trail[i]
            i += 1
            for ci in self.occ[-lit]:
                if self.sat[ci] == 0:
                    if self.free[ci] == 0:
                        return False
                    if self.free[ci] == 1:
                        if not self._assign(self._unit_literal(ci)):
                            return False
        return True

    def _choose(self) -> int | None:
        """Pick a literal from the shortest open clause, preferring the most frequent variable."""
        best_ci = -1
        best_free = 1 << 30
        for ci, s in enumerate(self.sat):
            if s == 0 and self.free[ci] < best_free:
                best_free = self.free[ci]
                best_ci = ci
                if best_free == 2:
                    break
        if best_ci < 0:
            return None
        free_lits = [l for l in self.clauses[best_ci] if self.value[abs(l)] == 0]
        return max(free_lits, key=lambda l: (self.occurrences[abs(l)], -abs(l)))

    def run(self, budget: int | None) -> Status:
        for ci, clause in enumerate(self.clauses):
            if not clause:
                return Status.UNSAT
        # initial units
        for ci, clause in enumerate(self.clauses):
            if self.sat[ci] == 0 and self.free[ci] == 1:
                if not self._assign(self._unit_literal(ci)) or not self._propagate(len(self.trail) - 1):
                    return Status.UNSAT
            elif self.sat[ci] == 0 and self.free[ci] == 0:
                return Status.UNSAT
        # decision stack entries: (trail length before decision, decision literal, flipped?)
        stack: list[tuple[int, int, bool]] = []
        while True:
            lit = self._choose()
            if lit is None:
                return Status.SAT
            if budget is not None and self.nodes >= budget:
                return Status.BUDGET_EXCEEDED
            self.nodes += 1
            stack.append((len(self.trail), lit, False))
            ok = self._assign(lit) and self._propagate(len(self.trail) - 1)
            while not ok:
                # chronological backtracking: undo to the newest unflipped decision
                while stack and stack[-1][2]:
                    mark, _, _ = stack.pop()
                    while len(self.trail) > mark:
                        self._unassign()
                if not stack:
                    return Status.UNSAT
                mark, dlit, _ = stack.pop()
                while len(self.trail) > mark:
                    self._unassign()
                stack.append((mark, -dlit, True))
                ok = self._assign(-dlit) and self._propagate(len(self.trail) - 1)
