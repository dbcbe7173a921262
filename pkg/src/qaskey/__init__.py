"""Terminating basic hypergeometric series, the four-parameter symmetric
polynomial family, and a randomized identity-verification harness.

The package is generic over two scalar backends: exact Gaussian
rationals (the ground-truth oracle) and machine complex floats (fast,
with cancellation-aware comparisons).
"""

from .arithmetic import (
    FLOAT,
    RATIONAL,
    Backend,
    GaussianRational,
    GuardViolation,
    QBase,
    QError,
    approx_eq,
    binom2,
    format_scalar,
    get_backend,
    parse_scalar,
    pow_int,
)
from .qpochhammer import identity_suite, omega_contains, poch, poch_list, poch_qinv
from .qseries import (
    SeriesSpec,
    TermTrace,
    VwpSpec,
    connect_qinv,
    eval_phi,
    eval_phi_direct,
    eval_w,
    eval_w_direct,
    invert_series,
    invert_w,
    qinvert_f,
    vwp_as_phi,
    watson_whipple,
)
from .askey_wilson import (
    ALL_REPS,
    AWParams,
    EvalReport,
    RepId,
    RepTag,
    check_qinv_scaling,
    check_symmetry,
    check_theta_flip,
    eval_all,
    eval_qinv_all,
    eval_qinv_direct,
    eval_qinv_rep,
    eval_rep,
)
from .identity_catalog import (
    CheckOutcome,
    Draw,
    IdentityRecord,
    Verdict,
    catalog,
    check,
    derive_from_aw,
    find_single_factor_correction,
    record_by_id,
)
from .sampler_verifier import (
    DrawConfig,
    SamplerExhausted,
    SweepReport,
    UnknownTarget,
    all_target_ids,
    draw_params,
    run_sweep,
)

__version__ = "0.1.0"
