"""The two built-in models: attacker profile score and attack success rate.

Only a handful of rules of each rule base were ever published. The rest are
filled in by a monotone linear score over the input levels::

    consequent = clamp(floor(sum(w_i * level_i) + 1/2), 0, 4)

with weights chosen so that every published rule is reproduced. The weights
are a reconstruction, not ground truth; construction refuses to finish if an
edit to them breaks one of the published rules.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from importlib import resources as importlib_resources
from pathlib import Path

from .inference import DEFAULT_GRID, EvaluationTrace, FisDefinition, LinguisticVariable, Rule, evaluate
from .membership import Trapezoidal, Triangular


class Level(IntEnum):
    SMALL = 0
    MEDIUM = 1
    BIG = 2

    @property
    def label(self) -> str:
        return self.name.lower()


class OutputLevel(IntEnum):
    VERY_SMALL = 0
    SMALL = 1
    MEDIUM = 2
    BIG = 3
    VERY_BIG = 4

    @property
    def label(self) -> str:
        return self.name.lower()


class RuleBaseError(RuntimeError):
    """Generated rule base disagrees with a published rule."""


S, M, B = Level.SMALL, Level.MEDIUM, Level.BIG
VS_, S_, M_, B_, VB_ = OutputLevel

ATTACKER_INPUTS = ("resources", "knowledge", "motivation")
SUCCESS_INPUTS = ("profile", "protection", "vulnerabilities", "restore_cost")

# knowledge dominates, then resources, then motivation
ATTACKER_WEIGHTS = (Fraction("0.75"), Fraction("1.0"), Fraction("0.25"))
# protection pulls the success rate down; everything else pushes it up
SUCCESS_WEIGHTS = (Fraction("1.3"), Fraction("-0.8"), Fraction("0.7"), Fraction("0.7"))

# published rules: index -> (input levels, output level)
ATTACKER_ANCHORS = {
    1: ((S, S, S), VS_),
    4: ((S, M, S), S_),
    8: ((S, B, M), M_),
    14: ((M, M, M), M_),
    26: ((B, B, M), VB_),
    27: ((B, B, B), VB_),
}
SUCCESS_ANCHORS = {
    1: ((S, S, S, S), VS_),
    2: ((S, S, S, M), S_),
    6: ((S, S, M, B), M_),
    10: ((S, M, S, S), VS_),
    15: ((S, M, M, B), S_),
    20: ((S, B, S, M), VS_),
    27: ((S, B, B, B), S_),
    35: ((M, S, B, M), B_),
    40: ((M, M, M, S), S_),
    45: ((M, M, B, B), B_),
    60: ((B, S, M, B), VB_),
    70: ((B, M, B, S), B_),
    81: ((B, B, B, B), VB_),
}

# five evenly spaced triangles on [0, 1], shared by both outputs
OUTPUT_TERMS = (
    ("very_small", Triangular(-0.25, 0.0, 0.25)),
    ("small", Triangular(0.0, 0.25, 0.5)),
    ("medium", Triangular(0.25, 0.5, 0.75)),
    ("big", Triangular(0.5, 0.75, 1.0)),
    ("very_big", Triangular(0.75, 1.0, 1.25)),
)

UNIT = (0.0, 1.0)


def rule_index(levels, arity: int | None = None) -> int:
    """1-based position of a level combination; the first input is most significant."""
    levels = [Level(v) for v in levels]
    if arity is not None and len(levels) != arity:
        raise ValueError(f"expected {arity} levels, got {len(levels)}")
    index = 0
    for level in levels:
        index = index * 3 + int(level)
    return index + 1


def weighted_consequent(levels, weights) -> OutputLevel:
    score = sum((w * int(lv) for w, lv in zip(weights, levels)), Fraction(0))
    return OutputLevel(min(max(math.floor(score + Fraction(1, 2)), 0), 4))


def _complete(names, weights, anchors) -> tuple[Rule, ...]:
    rules = []
    for combo in itertools.product(Level, repeat=len(names)):
        rules.append(Rule(
            antecedents=tuple((n, lv.label) for n, lv in zip(names, combo)),
            consequent=weighted_consequent(combo, weights).label,
            index=rule_index(combo),
        ))
    for index, (levels, expected) in anchors.items():
        rule = rules[index - 1]
        got = tuple(t for _, t in rule.antecedents)
        if rule.index != index or got != tuple(lv.label for lv in levels):
            raise RuleBaseError(f"rule {index} has antecedents {got}, expected {levels}")
        if rule.consequent != expected.label:
            raise RuleBaseError(
                f"rule {index} concludes {rule.consequent}, published rule says {expected.label}"
            )
    return tuple(rules)


def complete_attacker_rule_base() -> tuple[Rule, ...]:
    return _complete(ATTACKER_INPUTS, ATTACKER_WEIGHTS, ATTACKER_ANCHORS)


def complete_success_rule_base() -> tuple[Rule, ...]:
    return _complete(SUCCESS_INPUTS, SUCCESS_WEIGHTS, SUCCESS_ANCHORS)


def _variable(name, small, medium, big) -> LinguisticVariable:
    return LinguisticVariable(name, UNIT, (("small", small), ("medium", medium), ("big", big)))


@lru_cache(maxsize=None)
def build_attacker_profile_fis() -> FisDefinition:
    return FisDefinition(
        name="attacker_profile",
        inputs=(
            _variable(
                "resources",
                Trapezoidal(-0.225, -0.025, 0.1, 0.5),
                Triangular(0.3, 0.6, 0.9),
                Trapezoidal(0.7, 0.9, 1.06, 1.26),
            ),
            _variable(
                "knowledge",
                Triangular(-0.4, 0.0, 0.5),
                Triangular(0.0, 0.5, 1.0),
                Triangular(0.5, 1.0, 1.4),
            ),
            _variable(
                "motivation",
                Trapezoidal(-0.45, -0.05, 0.1, 0.4),
                Triangular(0.2, 0.5, 0.8),
                Trapezoidal(0.6, 0.95, 1.05, 1.45),
            ),
        ),
        output=LinguisticVariable("score", UNIT, OUTPUT_TERMS),
        rules=complete_attacker_rule_base(),
    )


@lru_cache(maxsize=None)
def build_success_rate_fis() -> FisDefinition:
    return FisDefinition(
        name="success_rate",
        inputs=(
            _variable("profile", Triangular(-0.5, 0.0, 0.5), Triangular(0.0, 0.5, 1.0), Triangular(0.5, 1.0, 1.5)),
            _variable("protection", Triangular(-0.4, 0.0, 0.3), Triangular(0.1, 0.4, 0.7), Triangular(0.4, 1.0, 1.4)),
            _variable("vulnerabilities", Triangular(-0.4, 0.0, 0.4), Triangular(0.1, 0.5, 0.8), Triangular(0.6, 1.0, 1.4)),
            _variable("restore_cost", Triangular(-0.4, 0.0, 0.4), Triangular(0.1, 0.5, 0.8), Triangular(0.7, 1.0, 1.4)),
        ),
        output=LinguisticVariable("successrate", UNIT, OUTPUT_TERMS),
        rules=complete_success_rule_base(),
    )


BUILTINS = {
    "attacker": build_attacker_profile_fis,
    "success": build_success_rate_fis,
}


def builtin(name: str) -> FisDefinition:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown built-in model {name!r}; choose from {', '.join(BUILTINS)}") from None


def builtin_source(name: str) -> str:
    """Text of the shipped ``.fis`` file for a built-in model."""
    if name not in BUILTINS:
        raise KeyError(f"unknown built-in model {name!r}; choose from {', '.join(BUILTINS)}")
    return importlib_resources.files(__package__).joinpath("models", f"{name}.fis").read_text(encoding="utf-8")


def builtin_path(name: str) -> Path:
    return Path(str(importlib_resources.files(__package__).joinpath("models", f"{name}.fis")))


def score_attacker(
    resources: float, knowledge: float, motivation: float, *, grid_size: int = DEFAULT_GRID
) -> tuple[float, EvaluationTrace]:
    return evaluate(build_attacker_profile_fis(), (resources, knowledge, motivation), grid_size=grid_size)


def attack_success_rate(
    profile_score: float,
    protection: float,
    vulnerabilities: float,
    restore_cost: float,
    *,
    grid_size: int = DEFAULT_GRID,
) -> tuple[float, EvaluationTrace]:
    return evaluate(
        build_success_rate_fis(),
        (profile_score, protection, vulnerabilities, restore_cost),
        grid_size=grid_size,
    )


def pipeline(
    resources: float,
    knowledge: float,
    motivation: float,
    protection: float,
    vulnerabilities: float,
    restore_cost: float,
    *,
    grid_size: int = DEFAULT_GRID,
) -> tuple[float, float, tuple[EvaluationTrace, EvaluationTrace]]:
    """Score the attacker, then feed that score into the success-rate model."""
    score, profile_trace = score_attacker(resources, knowledge, motivation, grid_size=grid_size)
    rate, rate_trace = attack_success_rate(
        score, protection, vulnerabilities, restore_cost, grid_size=grid_size
    )
    return score, rate, (profile_trace, rate_trace)


# crisp stand-ins for each level; each one is strictly dominated by its own term
LEVEL_VALUES = {Level.SMALL: 0.1, Level.MEDIUM: 0.5, Level.BIG: 0.9}


@dataclass(frozen=True)
class AttackerPreset:
    name: str
    levels: tuple[Level, Level, Level]
    expected_main_rule: int

    @property
    def crisp(self) -> tuple[float, float, float]:
        return tuple(LEVEL_VALUES[lv] for lv in self.levels)


PRESETS = {
    p.name: p
    for p in (
        AttackerPreset("script_kiddie", (S, S, S), 1),
        AttackerPreset("hacker", (S, M, S), 4),
        AttackerPreset("disgruntled_employee", (S, B, M), 8),
        AttackerPreset("terrorist", (M, M, M), 14),
        AttackerPreset("industrial_spy", (B, B, M), 26),
        AttackerPreset("cyber_warrior", (B, B, B), 27),
    )
}


def preset(name: str) -> AttackerPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown attacker preset {name!r}; valid names: {', '.join(PRESETS)}") from None


# +1: output should not fall as the input rises; -1: should not rise
MONOTONE_DIRECTIONS = {
    "attacker": {"resources": 1, "knowledge": 1, "motivation": 1},
    "success": {"profile": 1, "protection": -1, "vulnerabilities": 1, "restore_cost": 1},
}
