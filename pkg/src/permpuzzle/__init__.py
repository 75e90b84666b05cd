"""Rank distinguisher for permuted polynomial puzzles over prime fields."""
from .attack import (
    Decision,
    KernelVector,
    Verdict,
    beta_witness,
    check_annihilation,
    distinguish,
    failure_bound,
    k_basis,
    recommend_m,
    threshold,
)
from .errors import (
    CompositeModulus,
    DimensionMismatch,
    InvalidCount,
    InvalidParams,
    InvalidTarget,
    PuzzleError,
    SubsetTooLarge,
    ZeroInverse,
)
from .field import Elem, Field, make_field, smallest_prime_at_least
from .harness import ExperimentConfig, Report, TrialResult, run_experiment, run_trial, wilson_interval
from .instance import Case, Conjecture, Instance, Params, build_instance, col_index, eval_polynomial
from .linalg import RankResult, RowBasis, SparseRow, dense_rank_oracle, rank_incremental, row_dot
from .sampler import (
    Polynomial,
    Rng,
    derive_rng,
    sample_function,
    sample_permutation,
    sample_polynomial,
    sample_subset,
)

__version__ = "0.1.0"
