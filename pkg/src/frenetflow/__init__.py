"""
frenetflow: Frenet frames of sampled curves in R^n, flows written in the
Frenet basis, and residual checks of their evolution equations.
"""
__version__ = "0.1.0"

from . import errors, export, flow, frenet, geometry, scenario, verify
from .errors import *  # noqa: F401,F403
from .export import export_csv, export_svg_projection
from .flow import (
    Constant,
    Cosine,
    Curvature,
    CurvatureDerivative,
    FlowField,
    Polynomial,
    Sine,
    Tabulated,
    Trajectory,
    Zero,
    arclength_drift,
    evolve,
    realize,
    solve_tangential,
    step,
    velocity,
)
from .frenet import FrenetData, check_nondegenerate, curvatures, frenet_frame, frenet_residual, orthonormality_defect
from .geometry import (
    DiscreteCurve,
    arclength,
    circle,
    cumulative_integral,
    derivative,
    ellipse,
    flat_torus,
    from_points,
    helix,
    reparameterize_arclength,
    segment,
    sine,
    speed,
    total_length,
)
from .scenario import ScenarioConfig, load_scenario, parse_scenario
from .verify import (
    VerificationReport,
    convergence_study,
    curvature_pde_residual,
    curvature_pde_terms,
    drift_report,
    estimate_order,
    frame_evolution_residual,
    lemma_speed_residual,
    psi_antisymmetry,
    psi_matrix,
)
