"""Manifold-constraint tracking control and its simulation harness."""

from .constraint import (
    INSIDE,
    LATERAL,
    LONGITUDINAL,
    OBLIQUE,
    OUTSIDE_LOWER,
    OUTSIDE_UPPER,
    ConstraintGeometry,
    FlexState,
    classify_region,
    constraint_variable,
    flexible_variable,
    make_geometry,
    oblique_intersection,
)
from .control import (
    BARRIER_LOG,
    BARRIER_RATIONAL,
    XI_LIMIT,
    Actuator,
    Controller,
    StepDiag,
    barrier,
    saturate,
    settling_bound,
    settling_bound_finite_time,
    settling_bound_recursive,
    settling_bound_variable_exponent,
)
from .errors import ConfigError, ControlSimError, DivergedError, NumericDomainError
from .harness import (
    PRESETS,
    CheckResult,
    RunReport,
    ScenarioConfig,
    check_csv,
    csv_header,
    load_config,
    measure_settling,
    read_csv,
    run_scenario,
    scenario_bound,
    write_csv,
)
from .manifold import (
    FiniteTimeLaw,
    FixedTimeLaw,
    LinearLaw,
    ManifoldChain,
    NonsingularSkew,
    SkewedLaw,
    SmoothSkew,
    VariableExponentLaw,
    signed_pow,
)
from .observer import DifferentiatorConfig, differentiator_deriv, differentiator_init
from .plant import (
    PLANTS,
    SecondOrderBench,
    SimRecord,
    SimStats,
    ThirdOrderBench,
    rk4_step,
    simulate,
)
from .transition import (
    Envelope,
    smooth_ramp,
    smooth_ramp_deriv,
    smooth_step,
    smooth_step_deriv,
    smooth_vee,
    smooth_vee_deriv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
