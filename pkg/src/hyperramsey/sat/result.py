from __future__ import annotations

import enum
from dataclasses import dataclass


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    BUDGET_EXCEEDED = "BUDGET_EXCEEDED"
    TIMEOUT = "TIMEOUT"

    def __str__(self) -> str:
        return self.value


@dataclass
class SolveResult:
    """Outcome of a solver run.

    ``assignment`` maps variable index to truth value and is set only for SAT.
    ``nodes`` counts decisions (complete solver); ``flips`` and ``restarts``
    count local-search work.
    """

    status: Status
    assignment: dict[int, bool] | None = None
    nodes: int = 0
    flips: int = 0
    restarts: int = 0
    seed: int | None = None

    @property
    def is_sat(self) -> bool:
        return self.status is Status.SAT
