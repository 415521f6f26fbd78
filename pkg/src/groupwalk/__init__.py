"""Random walks on finite groups: exact mixing curves, bounds, simulation."""

from .groups import (
    Group,
    GroupError,
    build_group,
    conjugacy_classes,
    cube,
    cyclic,
    dihedral,
    generated_subgroup,
    heisenberg,
    is_ergodic,
    quaternion,
    symmetric,
    validate_group,
)
from .measures import (
    Measure,
    MeasureError,
    convolution_power,
    convolve,
    dirac,
    dp_distance,
    entropy_gap,
    lp_distance,
    separation_distance,
    switzer_guess_probability,
    uniform,
    variation_distance,
)
from .walks import WalkSpec, WalkError, driving_measure, measure_for, parse_walk
from .spectral import (
    StochasticOperator,
    Spectrum,
    eigenvector_lower_bound,
    gershgorin,
    is_invertible,
    operator_from_charge,
    operator_from_measure,
    spectral_variation_bounds,
    spectrum,
    support_lower_bound,
)
from .fourier import (
    IrrepCatalog,
    Representation,
    character_inner_product,
    convolution_theorem_check,
    diaconis_upper_bound,
    fourier_inversion,
    fourier_transform,
    irrep_catalog,
    plancherel_check,
)
from .bounds import (
    BoundCurve,
    appendix_inequality_suite,
    circle_bound_curves,
    circle_bounds,
    circle_lower,
    circle_upper,
    coupon_collector_bound,
    cube_lower_asymptotic,
    cube_upper,
    diameter_eigenvalue_bound,
    growth_profile,
    moderate_growth_bounds,
    moderate_growth_certificate,
    separation_decay_bound,
)
from .cutoff import (
    BudgetError,
    DistanceCurve,
    NotErgodicError,
    continuous_finitary,
    cutoff_scan,
    distance_curve,
    finitary_cutoff,
    mixing_time,
)
from .simulate import (
    RngStream,
    StoppingTimeSample,
    cube_coupling,
    random_to_top_sut,
    sample_trajectory,
    switzer_game,
    visits_before_return,
)
from .factorize import (
    ChargeSolveResult,
    FactorizationProblem,
    charge_preimage,
    check_factorization,
    circle_pq_operator,
    no_finite_power_reaches_pi,
    urban_factors,
    urban_problem,
)

__version__ = "0.1.0"
