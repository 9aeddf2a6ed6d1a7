"""Signaling-policy design, ethics auditing and simulation for overt
defensive deception.

The heavy lifting lives in the compiled `_core` module; this package just
re-exports it.
"""

from pyged._core import (  # noqa: F401
    ActionAssignment,
    AdaptResult,
    AdmissibilityViolation,
    AuditVerdict,
    Belief,
    BindingConstraint,
    CaseStudy,
    EthicsSpec,
    GedError,
    GedModel,
    HarmEvent,
    LegitSubclass,
    MessageMode,
    Mode,
    ModeComparison,
    OracleResult,
    PrincipleFinding,
    PrincipleStatus,
    Scenario,
    SignalingPolicy,
    SimConfig,
    SimMetrics,
    SolutionReport,
    SolvedMechanism,
    TieBreak,
    TraceRow,
    TypeMetrics,
    UserClass,
    UserType,
    Violation,
    adaptive_resolve,
    audit,
    best_response,
    best_response_assignment,
    brute_force_optimum,
    case_study,
    check_admissible,
    compare_modes,
    defender_risk,
    expected_user_utility,
    full_disclosure_policy,
    honey1,
    honey1_ethics,
    honey1_exit,
    honey1_state_labeled,
    insider_threat,
    load_scenario,
    no_disclosure_policy,
    parse_scenario,
    posterior,
    run_cli,
    run_covert,
    run_overt,
    scenario_errors,
    serialize_scenario,
    solve,
    trace_text,
    uniform_policy,
    validate_model,
    validate_spec,
    verify_ic,
    verify_ir,
)

__version__ = "0.1.0"
