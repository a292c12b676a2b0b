"""Exact-arithmetic kernel for surgery invariants of rational homology
spheres: the diagrammatic route (wheels, gluing, formal Gaussian
integration, Lie-algebra weight systems) and the Lie-theoretic route
(Weyl groups, quantum dimensions, the perturbative surgery formula),
with order-by-order comparison of the two.
"""

from .qseries import HSeries, Rational, modified_bernoulli, q_power, sinh_ratio
from .diagrams import CanonicalForm, DiagramSeries, JacobiDiagram, canonicalize
from .balg import (
    fg_integral,
    omega,
    pair,
    partial,
    strut,
    strut_split,
    theta,
    wheel,
    wheeling,
    wheeling_inverse,
)
from .liews import (
    LieAlgebraData,
    WeightTensor,
    build_sl,
    evaluate_at,
    hat_weight,
    weight_tensor,
    wick,
)
from .rootsys import (
    ExponentialWeightSum,
    RootSystem,
    build_root_system,
    c_coeff,
    quantum_dim_sq_shifted,
    tau_pg,
    weyl_denominator,
)
from .pipeline import (
    ComparisonReport,
    SurgeryInput,
    compare,
    lmo_via_definition,
    lmo_via_lemma,
    taupg_route,
    verify_suite,
)

__all__ = [
    "HSeries", "Rational", "modified_bernoulli", "q_power", "sinh_ratio",
    "CanonicalForm", "DiagramSeries", "JacobiDiagram", "canonicalize",
    "fg_integral", "omega", "pair", "partial", "strut", "strut_split",
    "theta", "wheel", "wheeling", "wheeling_inverse",
    "LieAlgebraData", "WeightTensor", "build_sl", "evaluate_at",
    "hat_weight", "weight_tensor", "wick",
    "ExponentialWeightSum", "RootSystem", "build_root_system", "c_coeff",
    "quantum_dim_sq_shifted", "tau_pg", "weyl_denominator",
    "ComparisonReport", "SurgeryInput", "compare", "lmo_via_definition",
    "lmo_via_lemma", "taupg_route", "verify_suite",
]

__version__ = "0.1.0"
