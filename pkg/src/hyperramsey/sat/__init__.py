"""CNF container, DIMACS interchange, and the complete and local-search solvers."""

from .cnf import (
    Assignment,
    AssignmentParseError,
    Cnf,
    CnfError,
    export_dimacs,
    format_assignment,
    import_assignment,
    parse_dimacs,
)
from .dpll import solve_complete
from .result import SolveResult, Status
