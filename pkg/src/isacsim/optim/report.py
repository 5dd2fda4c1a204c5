from __future__ import annotations

from dataclasses import dataclass, field

CONVERGED = "converged"
MAX_ITER = "max_iter"
INFEASIBLE = "infeasible"


@dataclass
class SolveReport:
    status: str
    iterations: int = 0
    objective_trace: list[float] = field(default_factory=list)
    achieved_scnr: float = float("nan")
    constraint_slack: float = float("nan")   # achieved SCNR minus target
    power_slack: float = float("nan")        # 1 - transmitted signal fraction
    details: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE

    @property
    def objective(self) -> float:
        return self.objective_trace[-1] if self.objective_trace else float("nan")
