"""Numerical experiments with Legendrian curves, Reeb chords and contact flows
in standard contact space ``(R^{2n+1}, dz - sum y_i dx_i)``."""

from .chords import (
    ChordReport,
    ObstructionRow,
    ReebChord,
    action_defect_C,
    find_chords_between,
    find_self_chords,
    neighbourhood_contains,
    obstruction_experiment,
)
from .constructions import (
    LegendrianCurve,
    SuspensionMap,
    WiggleResult,
    legendrian_lift,
    spiral_approximation,
    suspension_pullback_norm,
    wiggle_approximation,
)
from .core import STANDARD, ContactModel, TangentVector, alpha_eval, bundle_E, complex_structure_J, project_pi
from .curves import (
    AnalyticCurve,
    PiecewiseCurve,
    SampledCurve,
    c0_distance,
    circle_curve,
    lagrangian_projection,
    legendrian_defect,
    line_curve,
    path_action,
    signed_area,
    winding_number,
)
from .errors import ContactLabError, ContractViolation, DegenerateInputError, IntegrationAccuracyError
from .flows import (
    ContactHamiltonian,
    FlowResult,
    NormReport,
    contact_vector_field,
    displacement_experiment,
    flow,
    hamiltonian,
    hofer_osc_norm,
    tangency_margin,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticCurve",
    "ChordReport",
    "ContactHamiltonian",
    "ContactLabError",
    "ContactModel",
    "ContractViolation",
    "DegenerateInputError",
    "FlowResult",
    "IntegrationAccuracyError",
    "LegendrianCurve",
    "NormReport",
    "ObstructionRow",
    "PiecewiseCurve",
    "ReebChord",
    "STANDARD",
    "SampledCurve",
    "SuspensionMap",
    "TangentVector",
    "WiggleResult",
    "action_defect_C",
    "alpha_eval",
    "bundle_E",
    "c0_distance",
    "circle_curve",
    "complex_structure_J",
    "contact_vector_field",
    "displacement_experiment",
    "find_chords_between",
    "find_self_chords",
    "flow",
    "hamiltonian",
    "hofer_osc_norm",
    "lagrangian_projection",
    "legendrian_defect",
    "legendrian_lift",
    "line_curve",
    "neighbourhood_contains",
    "obstruction_experiment",
    "path_action",
    "project_pi",
    "signed_area",
    "spiral_approximation",
    "suspension_pullback_norm",
    "tangency_margin",
    "wiggle_approximation",
    "winding_number",
]
