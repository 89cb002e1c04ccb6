"""lclcodes: exact workbench for coordinate-wise-linear code properties.

Exact finite-field linear algebra (compiled kernels with a pure-Python
fallback), subspace lattices, profile threshold rates, list-decoding and
list-recovery certification, random-code ensembles, a polynomial
constraint-revelation process, and a reproducible Monte Carlo harness.
"""

from ._backend import BACKEND
from .errors import CapExceeded, InvariantViolation
from .field import FieldSpec, field_make
from .matrix import MatrixFq, kernel, rank, rref, read_matrix_text, write_matrix_text
from .subspace import (Subspace, enumerate_subspaces, enumerate_subspaces_of,
                       gaussian_binomial, intersect, is_distinct_type, span_sum)
from .profile import (Profile, RecoveryParams, ThresholdResult, deg,
                      build_extremal_lr_profile, build_lr_profile,
                      enumerate_lr_family, lr_threshold_closed_form,
                      read_profile, threshold_rate_V, threshold_rate_VU,
                      threshold_rate_family, write_profile)
from .witness import (WordSet, certify_list_decodable_linear,
                      certify_list_recoverable, code_contains_profile,
                      is_avg_clustered, is_avg_recovery_clustered, is_clustered,
                      is_recovery_clustered)
from .ensembles import (Code, RngStream, coupled_rs_pair, enumerate_codewords,
                        explicit_code, low_weight_codewords, sample_rlc,
                        sample_rlc_uniform, sample_rs, write_code)
from .polyproc import (PolyMatrix, PolyProfile, PolySpace, constrain_step,
                       eval_map, fqx_rank, gamma, kernel_clearing_matrix,
                       lcl_to_poly_profile, run_process)
from .experiments import (ExperimentConfig, run_reduction_experiment,
                          run_threshold_experiment, verify_lemmas, wilson_interval)

__version__ = "0.1.0"
