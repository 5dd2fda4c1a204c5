from .report import SolveReport, CONVERGED, MAX_ITER, INFEASIBLE
from .coeffs import (ScnrConstraintCoeffs, PowerAllocCoeffs, build_constraint_coeffs,
                     build_power_alloc_coeffs)
from .subproblem import P2Solver, SubproblemResult, solve_p2_subproblem
from .sca import ScaOptions, sca_design, max_margin_beam
from .active_set import active_set_qp, QPResult
from .power_allocation import power_allocation, solve_power_qp, p3_kkt_residual, default_beams

__all__ = [
    "SolveReport", "CONVERGED", "MAX_ITER", "INFEASIBLE",
    "ScnrConstraintCoeffs", "PowerAllocCoeffs", "build_constraint_coeffs", "build_power_alloc_coeffs",
    "P2Solver", "SubproblemResult", "solve_p2_subproblem",
    "ScaOptions", "sca_design", "max_margin_beam",
    "active_set_qp", "QPResult",
    "power_allocation", "solve_power_qp", "p3_kkt_residual", "default_beams",
]
