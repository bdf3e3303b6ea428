import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hyperramsey.pasting import build_pasting_cnf
from hyperramsey.sat import (
    AssignmentParseError,
    Cnf,
    CnfError,
    Status,
    export_dimacs,
    format_assignment,
    import_assignment,
    parse_dimacs,
    solve_complete,
)


@st.composite
def cnfs(draw, max_vars=16, max_clauses=60, max_width=4):
    n = draw(st.integers(0, max_vars))
    if n == 0:
        return Cnf.from_clauses(0, [])
    m = draw(st.integers(0, max_clauses))
    clauses = []
    for _ in range(m):
        width = draw(st.integers(1, min(max_width, n)))
        vs = draw(st.lists(st.integers(1, n), min_size=width, max_size=width, unique=True))
        signs = draw(st.lists(st.booleans(), min_size=width, max_size=width))
        clauses.append([v if s else -v for v, s in zip(vs, signs)])
    return Cnf.from_clauses(n, clauses)


def truth_table_sat(cnf):
    n = cnf.variable_count
    for bits in itertools.product((False, True), repeat=n):
        a = {i + 1: b for i, b in enumerate(bits)}
        if all(any(a[abs(l)] == (l > 0) for l in c) for c in cnf):
            return True
    return False


class TestCnf:
    def test_invariants(self):
        with pytest.raises(CnfError):
            Cnf.from_clauses(2, [[1, -1]])
        with pytest.raises(CnfError):
            Cnf.from_clauses(2, [[1, 1]])
        with pytest.raises(CnfError):
            Cnf.from_clauses(2, [[3]])
        with pytest.raises(CnfError):
            Cnf.from_clauses(2, [[0, 1]])

    def test_access(self):
        cnf = Cnf.from_clauses(3, [[1, -2], [], [3]])
        assert len(cnf) == 3
        assert cnf.clause(0) == (1, -2)
        assert cnf.clauses == [(1, -2), (), (3,)]
        assert not cnf.is_satisfied_by({1: True, 2: True, 3: True})


class TestDimacs:
    def test_examples(self):
        assert export_dimacs(Cnf.from_clauses(2, [[1, 2], [-1, -2]])) == "p cnf 2 2\n1 2 0\n-1 -2 0\n"
        assert export_dimacs(Cnf.from_clauses(0, [])) == "p cnf 0 0\n"
        _, cnf = build_pasting_cnf(4, 6, 5, 2)
        assert export_dimacs(cnf).splitlines()[0] == "p cnf 2 4"

    @settings(max_examples=100, deadline=None)
    @given(cnfs())
    def test_round_trip(self, cnf):
        text = export_dimacs(cnf)
        back = parse_dimacs(text)
        assert back == cnf
        assert export_dimacs(back) == text

    def test_parse_variants(self):
        text = "c comment\np cnf 3 2\n1 -2\n 3 0 -1\n0\n"
        assert parse_dimacs(text).clauses == [(1, -2, 3), (-1,)]

    @pytest.mark.parametrize(
        "text",
        ["1 2 0\n", "p cnf 2 2\n1 2 0\n", "p cnf 2 1\n1 x 0\n", "p dnf 2 1\n1 0\n", "p cnf 1 1\n2 0\n"],
    )
    def test_parse_errors(self, text):
        with pytest.raises(CnfError):
            parse_dimacs(text)


class TestAssignments:
    def test_examples(self):
        assert import_assignment("v 1 -2 0", 2) == {1: True, 2: False}
        assert import_assignment("1 2 0", 2) == {1: True, 2: True}
        with pytest.raises(AssignmentParseError):
            import_assignment("v 1 0", 2)

    def test_solver_output(self):
        text = "c solver\ns SATISFIABLE\nv 1 -2\nv 3 0\n"
        assert import_assignment(text, 3) == {1: True, 2: False, 3: True}

    def test_out_of_range(self):
        with pytest.raises(AssignmentParseError):
            import_assignment("v 1 -2 3 0", 2)
        with pytest.raises(AssignmentParseError):
            import_assignment("v 1 two 0", 2)

    @given(st.lists(st.booleans(), min_size=1, max_size=40))
    def test_round_trip(self, bits):
        a = {i + 1: b for i, b in enumerate(bits)}
        assert import_assignment(format_assignment(a), len(bits)) == a


class TestComplete:
    def test_empty(self):
        res = solve_complete(Cnf.from_clauses(0, []))
        assert res.status is Status.SAT and res.assignment == {}

    def test_empty_clause(self):
        assert solve_complete(Cnf.from_clauses(1, [[1], []])).status is Status.UNSAT

    def test_pasting_examples(self):
        _, cnf = build_pasting_cnf(9, 11, 10, 10)
        assert solve_complete(cnf).status is Status.UNSAT
        _, cnf = build_pasting_cnf(8, 10, 9, 9)
        res = solve_complete(cnf)
        assert res.status is Status.SAT and cnf.is_satisfied_by(res.assignment)

    def test_budget(self):
        # pigeonhole 5 -> 4 needs many decisions
        n, h = 5, 4
        var = lambda i, j: i * h + j + 1
        clauses = [[var(i, j) for j in range(h)] for i in range(n)]
        for j in range(h):
            for a, b in itertools.combinations(range(n), 2):
                clauses.append([-var(a, j), -var(b, j)])
        cnf = Cnf.from_clauses(n * h, clauses)
        res = solve_complete(cnf, budget=3)
        assert res.status is Status.BUDGET_EXCEEDED and res.nodes >= 3
        assert solve_complete(cnf).status is Status.UNSAT

    def test_deterministic(self):
        _, cnf = build_pasting_cnf(12, 14, 13, 13)
        a, b = solve_complete(cnf), solve_complete(cnf)
        assert a.status is b.status and a.assignment == b.assignment and a.nodes == b.nodes

    @pytest.mark.criterion(6)
    @settings(max_examples=300, deadline=None)
    @given(cnfs())
    def test_agrees_with_truth_table(self, cnf):
        res = solve_complete(cnf)
        assert (res.status is Status.SAT) == truth_table_sat(cnf)
        if res.is_sat:
            assert cnf.is_satisfied_by(res.assignment)
