"""Lagrangian and Eulerian dynamic mode decomposition reduced-order models."""

from ._ldmd import (
    Error,
    DmdModel,
    ProblemSpec,
    RankDeficient,
    GridEntanglement,
    fit_dmd,
    fit_lagrangian_dmd,
    predict,
    preset_names,
    preset_problem,
    preset_training_count,
    run_eulerian_hfm,
    run_experiment,
    run_lagrangian_hfm,
    singular_values,
    truncation_rank,
    validate_output,
)

__all__ = [
    "Error",
    "DmdModel",
    "ProblemSpec",
    "RankDeficient",
    "GridEntanglement",
    "fit_dmd",
    "fit_lagrangian_dmd",
    "predict",
    "preset_names",
    "preset_problem",
    "preset_training_count",
    "run_eulerian_hfm",
    "run_experiment",
    "run_lagrangian_hfm",
    "singular_values",
    "truncation_rank",
    "validate_output",
]
