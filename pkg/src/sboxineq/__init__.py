"""Minimal linear-inequality models of SBox difference distribution tables."""

from .estimator import SboxModeler
from .exceptions import (
    CertificationError,
    InfeasibleCoverError,
    ResourceLimitError,
    SboxIneqError,
    ValidationError,
)
from .greedy import GreedyRun, greedy_random_tiebreaker, greedy_reduce
from .hull import HRep, compute_hrep, hrep_of
from .inequality import Inequality, evaluate, parse_text, single_point_cut, to_text
from .pipeline import Budget, ReductionResult, reduce_sbox
from .pool import (
    CandidatePool,
    GoodnessVerdict,
    classify_sum,
    conditional_pool,
    hull_pool,
    hyperplanes_through,
    random_sum_pool,
    subset_addition_pool,
)
from .sbox import SBox, Transitions, compute_ddt, parse_sbox, transitions_of
from .setcover import CoverInstance, CoverSolution, build_instance, solve_exact
from .verify import certify_model, diff_models

__version__ = "0.1.0"
