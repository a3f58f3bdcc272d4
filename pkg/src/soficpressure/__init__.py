"""Numerical estimation of topological pressure and measure entropy for
shift actions of countable groups under finite permutation approximations,
with classical amenable pressure and transfer-matrix oracles for
cross-checking.
"""

__version__ = "0.1.0"

from .groups import (
    FiniteGroup,
    FreeGroup,
    IntegerLattice,
    IntegerLine,
    canonical_subset,
)
from .sofic import (
    DefectReport,
    QuasiTiling,
    SoficMap,
    cyclic_approximation,
    defect_report,
    good_set,
    quasi_tile,
    random_approximation,
    regular_approximation,
    torus_approximation,
)
from .shiftspace import (
    Alphabet,
    CoordinateMetric,
    Labeling,
    Observable,
    Subshift,
    WeightedWordMetric,
    eval_observable,
    full_shift,
    golden_mean_shift,
    pullback_symbol,
    rho,
    rho2,
    rho_J_inf,
    rho_inf,
    violation_fraction,
)
from .pressure import (
    EmpiricalConstraint,
    EnumerationBudgetError,
    MapSpaceQuery,
    PressureEstimate,
    Schedule,
    ScheduleCell,
    amenable_pressure,
    classical_cover_sum,
    classical_separated_sum,
    count_map_space,
    enumerate_map_space,
    evaluate_cell,
    good_index_set,
    greedy_separated,
    log_partition_sum,
    map_membership,
    run_schedule,
    summarize_schedule,
    transfer_cell,
)
from .measures import (
    EmpiricalMeasure,
    EntropyEstimate,
    MarkovMeasure,
    ProductMeasure,
    SignedCylinderMeasure,
    entropy_cell,
    gibbs_measure,
    map_mu_membership,
    pressure_domination_check,
    shannon_entropy,
    variational_gap,
    variational_objective,
    variational_search,
)
