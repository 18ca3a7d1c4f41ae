"""Mamdani fuzzy inference for attacker profiling and attack success rates."""
from .dsl import ModelSyntaxError, ParseDiagnostic, check_model, load_model, parse_model, serialize_model
from .inference import (
    DEFAULT_GRID,
    Diagnostic,
    EmptyAggregateError,
    EvaluationTrace,
    FisDefinition,
    FisStructureError,
    LinguisticVariable,
    Rule,
    evaluate,
    firing_strength,
    fuzzify,
    validate_fis,
)
from .membership import MembershipFunction, Trapezoidal, Triangular, eval_mf
from .profiles import (
    AttackerPreset,
    Level,
    OutputLevel,
    attack_success_rate,
    build_attacker_profile_fis,
    build_success_rate_fis,
    complete_attacker_rule_base,
    complete_success_rule_base,
    pipeline,
    preset,
    rule_index,
    score_attacker,
)
from .surface import SweepResult, export_csv, export_json, sweep

__version__ = "0.1.0"
