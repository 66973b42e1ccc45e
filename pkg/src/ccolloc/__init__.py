"""Clenshaw-Curtis, Gauss-Legendre and Newton-Cotes collocation Runge-Kutta methods."""
from .chebyshev import (
    ChebyshevSeries,
    NodeSet,
    boundary_derivative,
    chebyshev_points,
    eval_T,
    eval_U,
    integrate_series,
    interp_coeffs,
)
from .solver import (
    ErrorFloorError,
    IVProblem,
    NonConvergence,
    SolverConfig,
    Strategy,
    estimate_order,
    integrate,
    irk_step,
    terminal_error,
)
from .stability import (
    RootCertificationFailure,
    a0_sample,
    a_stability_scan,
    cc_stability_polys,
    min_real_part_of_D_roots,
    stability_function_value,
    stability_region_grid,
)
from .tableau import (
    ButcherTableau,
    CollocationKernel,
    Family,
    cc_tableau,
    collocation_tableau,
    gauss_legendre_nodes,
    make_tableau,
    newton_cotes_nodes,
    order_of,
)

__version__ = "0.1.0"
