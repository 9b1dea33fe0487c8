"""Exact finite-N thermodynamics of quantum mean-field spin models in
random external fields, with the limiting variational formulas."""

from ._core import (
    FieldDistribution,
    LambdaEvaluator,
    PolynomialSymbol,
    assemble_full,
    bbar,
    berezin_bounds,
    binary_entropy,
    block_degeneracy,
    bogoliubov_gap,
    deterministic_pressure,
    diagonalize,
    duffield_error,
    gibbs_average,
    gibbs_trial_bound,
    micro_gap,
    pressure,
    quadratic_inf_pressure,
    sample_fields,
    thermal_variance,
    variational_pressure,
    weyl_ordered_operator,
)

__all__ = [
    "FieldDistribution",
    "LambdaEvaluator",
    "PolynomialSymbol",
    "assemble_full",
    "bbar",
    "berezin_bounds",
    "binary_entropy",
    "block_degeneracy",
    "bogoliubov_gap",
    "deterministic_pressure",
    "diagonalize",
    "duffield_error",
    "gibbs_average",
    "gibbs_trial_bound",
    "micro_gap",
    "pressure",
    "quadratic_inf_pressure",
    "sample_fields",
    "thermal_variance",
    "variational_pressure",
    "weyl_ordered_operator",
]
