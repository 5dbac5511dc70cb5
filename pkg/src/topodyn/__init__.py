"""Computable topological dynamics over entourages.

Neighborhoods of the diagonal (entourages) replace metric epsilons as the
primitive notion, which keeps expansivity, tracing, chain recurrence, and
stability statements checkable on concrete systems: linear saddles, torus
automorphisms, shifts of finite type, finite permutations, and a few
deliberately non-compact counterexample spaces.
"""

from .entourage import (
    Box,
    CompactWitness,
    Entourage,
    FiniteRelation,
    GaugeBall,
    GaugeComputationError,
    MetricBall,
    SampledGauge,
    compose,
    compose_n,
    contains_diagonal,
    core_wide,
    cross_section,
    finite_relation,
    gauge_entourage,
    is_wide,
    metric_ball,
    predicate_entourage,
    proper_restrict,
    relation_from_text,
    relation_to_text,
    smooth_gauge,
    symmetrize,
    transpose,
)
from .systems import (
    DynamicalSystem,
    FiniteSystem,
    HarmonicPoints,
    LinearSaddle,
    NotHyperbolicError,
    ShiftOfFiniteType,
    StripConjugacy,
    StripFamily,
    SymbolicPoint,
    TorusAutomorphism,
    catalog,
    catalog_text,
    conjugate_system,
    finite_system,
    harmonic_points,
    linear_hyperbolic,
    periodic_symbolic_point,
    permutation_from_cycles,
    plane_two_metrics,
    sft_metric,
    sft_shift,
    shrinking_intervals,
    splice_symbolic,
    symbolic_point,
    torus_automorphism,
    torus_grid,
)
from .chains import (
    ChainComponentSet,
    ChainGraph,
    build_chain_graph,
    chain_components,
    chain_recurrent_set,
    component_report,
    is_chain,
    nonwandering_set,
    strong_chain_reachable,
    strong_chain_recurrent_set,
    torus_grid_graph,
)
from .shadowing import (
    ORBIT_TAIL,
    PERIODIC,
    PseudoOrbit,
    TracingResult,
    UniqueTracingResult,
    compute_defects,
    exact_orbit,
    harmonic_stall_walk,
    perturbed_pseudo_orbit,
    pseudo_orbit_from_text,
    pseudo_orbit_to_text,
    strip_climb_pseudo_orbit,
    trace_finite_bruteforce,
    trace_linear_hyperbolic,
    trace_sft,
    trace_strips,
    tracing_report,
    unique_tracing_check,
    verify_defect_bound,
)
from .hyperbolic import (
    CONSISTENT,
    LIFT_AMBIGUITY,
    REFUTED,
    ExpansivityReport,
    LiftAmbiguityError,
    LocalInvariantSet,
    ProductDomainError,
    ProductStructure,
    StabilityReport,
    expansive_check,
    glued_pseudo_orbit,
    image_entourage,
    local_stable_set,
    local_unstable_set,
    product_map_t,
    sft_flip_perturbation,
    stability_conjugacy_h,
    trig_perturbation,
    v_n_box_halfwidths,
    v_n_entourage,
)
from .spectral import (
    BasicSet,
    Certificate,
    SpectralDecomposition,
    periodic_density_certificate,
    spectral_decompose,
    symbol_graph_chain,
    transitivity_certificate,
)
from .report import FAIL, PASS, RESOLUTION_LIMITED, Report, parse_report
from .demos import DEMO_NAMES, run_demo

__version__ = "0.1.0"
