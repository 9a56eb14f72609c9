"""Desk-scale computations in algebras of periodic generalized functions.

Periodic distributions and ultradistributions are represented by their
Fourier coefficients, embedded into nets of trigonometric polynomials
by mollifier convolution, and classified as moderate, negligible or
regular against a weight-sequence growth scale.  All verdicts are
finite-grid proxies for the defining suprema and say so in their
reports.
"""

from .algebra import (
    GeneralizedNumber,
    GeneratorFail,
    HypothesisFail,
    Net,
    NoWitness,
    classify_moderate,
    classify_negligible,
    classify_negligible_supnorm,
    coef_classify,
    constant_net,
    find_witness,
    gn_classify,
    make_net,
    net_add,
    net_mul,
    net_scale,
    point_value,
    roumieu_rj_classify,
)
from .embedding import (
    DecayFail,
    Mollifier,
    MollifierFail,
    build_mollifier,
    check_operator_commutes,
    check_product_preservation,
    const_embed,
    embed,
    modulate,
)
from .operators import (
    ClassFail,
    GrowthFail,
    NoConverge,
    RelationFail,
    Ultrapolynomial,
    apply_operator,
    build_ultrapolynomial,
    eval_ultrapoly,
    lower_bound_check,
    shifted_operator,
    structure_factorize,
)
from .regularity import (
    RegularityVerdict,
    check_embedding_residual,
    check_regularity_equivalence,
    classify_regular,
    coefficient_decay_class,
)
from .series import (
    AliasWarning,
    CoefDistribution,
    CoefficientOverflow,
    TrigPoly,
    certify_growth,
    coef_seminorm,
    convolve,
    cot_reg,
    delta,
    derivative,
    evaluate,
    exp_decay,
    exp_growth,
    fourier_coefficients,
    from_trigpoly,
    multiply,
    sup_norm,
    ud_norm,
    ud_norm_rj,
)
from .verdict import DEFAULTS, DeskParams, GrowthVerdict, bounded_test
from .weights import (
    CertificationFail,
    DivergenceFail,
    InvalidSpec,
    RSequence,
    TruncationWarning,
    WeightSequence,
    associated_function,
    associated_function_rj,
    associated_gauge,
    build_rsequence,
    build_weight_sequence,
    check_doubling_inequality,
    gevrey,
    linear_rsequence,
    relation,
)

__version__ = "0.1.0"
