"""Exact calculus for rearrangement-invariant and mixed norm spaces on the
unit cube: step/grid function kernels, Lorentz-family norms, K-functionals
against L^inf, optimal embedding constructions, and a verification suite."""

from .stepcore import (
    DomainError,
    PiecewiseHyperbolic,
    StepFn,
    distribution,
    double_star,
    indicator,
    rearrangement,
    step_fn,
)
from .rispace import (
    L1,
    LINF,
    FundamentalFn,
    RiSpaceSpec,
    lebesgue,
    lorentz,
    lorentz_lambda,
    parse_space,
    ri_norm,
)
from .mixed import GridFn, MixedSpaceSpec, bp_norm, mixed_norm, psi
from .kfun import KProfile, interp_norm, k_exact, mixed_couple, ri_couple
from .embed import (
    EmbeddingReport,
    WitnessSpec,
    fournier_check,
    optimal_domain_norm,
    optimal_range_norm,
    sharpness_sweep,
    witness_generate,
)
from .verify import SuiteConfig, run_all

__version__ = "0.1.0"
