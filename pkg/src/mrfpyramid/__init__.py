"""Multiscale coarse-to-fine minimization of pairwise discrete energies."""
from .coarsen import (
    AgreementMap,
    CoarseningParams,
    Interpolation,
    build_interpolation,
    coarsen_energy,
    coarsen_labels,
    estimate_agreements,
    select_coarse_vars,
)
from .energy import (
    Energy,
    assignment_to_labeling,
    evaluate,
    evaluate_assignment,
    labeling_to_assignment,
    validate,
)
from .icm import IcmParams, SampleSet, icm_optimize, icm_sweep, sample_low_energy
from .pyramid import PyramidParams, Pyramid, SolveReport, build_pyramid, solve_coarsest, solve_multiscale, solve_single_scale
from .synth import SyntheticParams, brute_force_min, generate_synthetic

__version__ = "0.1.0"
