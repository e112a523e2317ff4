"""Active-learning laboratory for finite hypothesis classes.

Exact complexity measures (star number, teaching dimensions, disagreement
coefficient, splitting, covering/doubling), label-noise models with
generators and checkers, query-based learners, and a deterministic
experiment harness for empirical label-complexity curves.
"""
from .core import (
    HypothesisClass,
    InstanceDomain,
    LabeledSample,
    SizeCapExceeded,
    VersionSpace,
    build_gap_lower,
    build_gap_upper,
    build_intervals,
    build_min_width_intervals,
    build_singletons_plus_allneg,
    build_thresholds,
    disagreement_region,
    induced_labelings,
    uniform_grid,
    vc_dimension,
    version_space,
)
from .complexity import (
    ComplexityReport,
    FinDiscreteMarginal,
    StarWitness,
    covering_number,
    disagreement_coefficient,
    doubling_dimension,
    is_splittable,
    is_star_set,
    ring_rho,
    split_count,
    star_number,
    td,
    teaching_dim,
    vs_compression_size,
    xptd,
    xtd,
)
from .noise import (
    GammaProfile,
    JointDistribution,
    NoiseReport,
    bayes,
    classify_noise,
    error_rate,
    excess_error,
    gamma_profile,
    make_realizable,
    rr_family,
    sample_stream,
)
from .learners import (
    Alg1Params,
    BudgetExhausted,
    LearnerResult,
    MembershipOracle,
    QueryOracle,
    SplitOracle,
    algorithm0,
    algorithm1,
    cal,
    epsilon_net_select,
    erm_passive,
    gamma_hat_default,
    memb_halving2,
    partition_J,
    subroutine1,
)
from .harness import (
    EmpiricalLC,
    ExperimentConfig,
    TrialRecord,
    measure_label_complexity,
    run_config,
    verify_equivalences,
    wilson_lower_bound,
)

__version__ = "0.1.0"
