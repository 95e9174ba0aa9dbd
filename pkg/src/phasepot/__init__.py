"""
phasepot: one phase shift in, one nonsingular potential out
===========================================================

Fixed-energy quantum inverse scattering at the one-term level: from a single
phase shift delta at angular momentum l, construct the unique nonsingular
potential (and any singular branch on demand), check the Wronskian
nonsingularity condition and the Bessel-zero inequalities behind it, and
close the loop with a forward radial solve that re-derives delta.
"""

__version__ = "0.1.0"

from .errors import (
    BranchSelectionError,
    ConvergenceError,
    DomainError,
    PhasePotError,
    SingularityError,
)
from .oneterm import (
    BranchParams,
    PhaseShiftSpec,
    PotentialTable,
    branch_parameter,
    input_kernel_g,
    kernel_K,
    potential_table,
    potential_value,
    residual_integral_equation,
    select_nonsingular,
)
from .verify import (
    PhaseShiftResult,
    pole_order_estimate,
    solve_phase_shift,
    weighted_absolute_integral,
)
from .wronskian import (
    PairParams,
    WronskianProfile,
    find_roots,
    infinity_limit,
    is_nonsingular_pair,
    origin_coefficient,
    theorem_sweep,
    wronskian,
    wronskian_orders,
)
from .zeros import (
    InterlaceReport,
    ZeroQuery,
    bessel_zero,
    check_proposition,
    interlace_scan,
    proposition_margin,
    proposition_sweep,
)

__all__ = [
    "__version__",
    "PhasePotError",
    "DomainError",
    "SingularityError",
    "BranchSelectionError",
    "ConvergenceError",
    "PhaseShiftSpec",
    "BranchParams",
    "PotentialTable",
    "branch_parameter",
    "select_nonsingular",
    "input_kernel_g",
    "kernel_K",
    "potential_value",
    "potential_table",
    "residual_integral_equation",
    "PairParams",
    "WronskianProfile",
    "wronskian",
    "wronskian_orders",
    "origin_coefficient",
    "infinity_limit",
    "find_roots",
    "is_nonsingular_pair",
    "theorem_sweep",
    "ZeroQuery",
    "InterlaceReport",
    "bessel_zero",
    "interlace_scan",
    "check_proposition",
    "proposition_margin",
    "proposition_sweep",
    "PhaseShiftResult",
    "solve_phase_shift",
    "pole_order_estimate",
    "weighted_absolute_integral",
]
