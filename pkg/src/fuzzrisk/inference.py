"""Mamdani inference: fuzzify, fire, clip, aggregate, defuzzify.

Operators are fixed to the usual Mamdani choices:

* AND of antecedents: ``min``
* implication (clipping a consequent at the firing strength): ``min``
* aggregation of clipped consequents: ``max``
* defuzzification: discrete centroid over a uniform grid on the output universe
"""
from __future__ import annotations

import itertools
import json
import math
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np

from .membership import MembershipFunction, eval_mf, sample_mf

DEFAULT_GRID = 1001
COVERAGE_GRID = 1001

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class FisStructureError(ValueError):
    """A rule refers to a variable or term the FIS does not declare."""


class EmptyAggregateError(ArithmeticError):
    """No rule produced any output mass, so the centroid is undefined."""


def is_identifier(text: str) -> bool:
    return bool(_IDENT.match(text))


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    universe: tuple[float, float]
    terms: tuple[tuple[str, MembershipFunction], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "universe", tuple(float(v) for v in self.universe))
        object.__setattr__(self, "terms", tuple((label, mf) for label, mf in self.terms))
        lo, hi = self.universe
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValueError(f"variable {self.name!r}: universe needs lo < hi, got {self.universe}")
        if not self.terms:
            raise ValueError(f"variable {self.name!r} has no terms")
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise ValueError(f"variable {self.name!r} has duplicate term labels")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.terms)

    def term(self, label: str) -> MembershipFunction:
        for name, mf in self.terms:
            if name == label:
                return mf
        raise KeyError(label)

    def clamp(self, x: float) -> float:
        lo, hi = self.universe
        return min(max(x, lo), hi)


@dataclass(frozen=True)
class Rule:
    """``IF in1 is t1 AND ... THEN out is consequent``; ``index`` is 1-based."""

    antecedents: tuple[tuple[str, str], ...]
    consequent: str
    index: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "antecedents", tuple((v, t) for v, t in self.antecedents))
        if self.index < 1:
            raise ValueError(f"rule index must be positive, got {self.index}")


@dataclass(frozen=True)
class FisDefinition:
    name: str
    inputs: tuple[LinguisticVariable, ...]
    output: LinguisticVariable
    rules: tuple[Rule, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "rules", tuple(self.rules))
        if not self.inputs:
            raise ValueError("a FIS needs at least one input")
        names = [v.name for v in self.inputs] + [self.output.name]
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be unique, got {names}")
        if '"' in self.name or "\n" in self.name or "\r" in self.name:
            raise ValueError(f"FIS name may not contain quotes or newlines: {self.name!r}")

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.inputs)

    def input(self, name: str) -> LinguisticVariable:
        for var in self.inputs:
            if var.name == name:
                return var
        raise KeyError(name)

    def rule(self, index: int) -> Rule:
        for rule in self.rules:
            if rule.index == index:
                return rule
        raise KeyError(index)

    @cached_property
    def _compiled(self) -> _Compiled:
        return _Compiled(self)


class _Compiled:
    """Index arrays for vectorised rule firing; built once per definition."""

    def __init__(self, fis: FisDefinition) -> None:
        offsets = {}
        flat = 0
        for var in fis.inputs:
            for label in var.labels:
                offsets[(var.name, label)] = flat
                flat += 1
        out_labels = {label: k for k, label in enumerate(fis.output.labels)}
        antecedent_rows = []
        consequents = []
        for rule in fis.rules:
            if tuple(v for v, _ in rule.antecedents) != fis.input_names:
                raise FisStructureError(
                    f"rule {rule.index} must name every input once, in declared order"
                )
            try:
                antecedent_rows.append([offsets[pair] for pair in rule.antecedents])
                consequents.append(out_labels[rule.consequent])
            except KeyError as exc:
                raise FisStructureError(f"rule {rule.index}: unresolved term {exc.args[0]!r}") from None
        self.antecedents = np.array(antecedent_rows, dtype=np.intp).reshape(len(fis.rules), len(fis.inputs))
        self.consequents = np.array(consequents, dtype=np.intp)
        self.indices = np.array([r.index for r in fis.rules], dtype=np.intp)
        self.n_out = len(out_labels)
        self._grids: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        self._output = fis.output

    def grid(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        cached = self._grids.get(n)
        if cached is None:
            xs = output_grid(self._output, n)
            samples = np.vstack([sample_mf(mf, xs) for _, mf in self._output.terms])
            xs.setflags(write=False)
            samples.setflags(write=False)
            cached = self._grids[n] = (xs, samples)
        return cached


def output_grid(variable: LinguisticVariable, n: int = DEFAULT_GRID) -> np.ndarray:
    if n < 2:
        raise ValueError(f"grid needs at least 2 points, got {n}")
    lo, hi = variable.universe
    return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class EvaluationTrace:
    model: str
    inputs: dict[str, float]
    clamped: tuple[str, ...]
    fuzzified: dict[str, dict[str, float]]
    strengths: dict[int, float]
    grid: np.ndarray = field(repr=False)
    aggregate: np.ndarray = field(repr=False)
    crisp: float
    main_active_rule: int

    def active_rules(self) -> dict[int, float]:
        return {k: s for k, s in self.strengths.items() if s > 0.0}

    def to_dict(self) -> dict[str, Any]:
        return {
            "model": self.model,
            "inputs": dict(self.inputs),
            "clamped": list(self.clamped),
            "fuzzified": {k: dict(v) for k, v in self.fuzzified.items()},
            "strengths": {str(k): s for k, s in self.active_rules().items()},
            "grid_size": int(self.grid.size),
            "crisp": self.crisp,
            "main_active_rule": self.main_active_rule,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def fuzzify(variable: LinguisticVariable, x: float) -> dict[str, float]:
    """Degree of every term of ``variable`` at ``x`` (clamped to the universe)."""
    xc = variable.clamp(x)
    return {label: eval_mf(mf, xc) for label, mf in variable.terms}


def firing_strength(rule: Rule, fuzzified: Mapping[str, Mapping[str, float]]) -> float:
    try:
        return min(fuzzified[var][label] for var, label in rule.antecedents)
    except KeyError as exc:
        raise FisStructureError(f"rule {rule.index}: unresolved label {exc.args[0]!r}") from None


def _coerce_inputs(fis: FisDefinition, inputs) -> list[float]:
    if isinstance(inputs, Mapping):
        unknown = set(inputs) - set(fis.input_names)
        if unknown:
            raise KeyError(f"unknown input(s): {', '.join(sorted(unknown))}")
        missing = [n for n in fis.input_names if n not in inputs]
        if missing:
            raise KeyError(f"missing input: {missing[0]}")
        values = [inputs[n] for n in fis.input_names]
    else:
        values = list(inputs)
        if len(values) != len(fis.inputs):
            raise ValueError(f"{fis.name} expects {len(fis.inputs)} inputs, got {len(values)}")
    values = [float(v) for v in values]
    for name, v in zip(fis.input_names, values):
        if not math.isfinite(v):
            raise ValueError(f"input {name} must be finite, got {v!r}")
    return values


def evaluate(
    fis: FisDefinition,
    inputs: Sequence[float] | Mapping[str, float],
    *,
    grid_size: int = DEFAULT_GRID,
) -> tuple[float, EvaluationTrace]:
    """Run the full Mamdani pipeline and return ``(crisp, trace)``.

    ``inputs`` is either one value per declared input, in order, or a mapping
    from input name to value. Out-of-universe values are clamped and the
    affected inputs are listed in ``trace.clamped``.

    Raises:
        EmptyAggregateError: no rule fires (or every fired consequent is zero
            across the output universe).
    """
    compiled = fis._compiled
    values = _coerce_inputs(fis, inputs)

    clamped = []
    used = {}
    fuzzified = {}
    flat = []
    for var, x in zip(fis.inputs, values):
        xc = var.clamp(x)
        if xc != x:
            clamped.append(var.name)
        used[var.name] = xc
        degrees = fuzzify(var, xc)
        fuzzified[var.name] = degrees
        flat.extend(degrees.values())

    strengths = np.asarray(flat)[compiled.antecedents].min(axis=1)

    # max_r min(s_r, mu) == min(max_r s_r, mu): clip each output term once
    heights = np.zeros(compiled.n_out)
    np.maximum.at(heights, compiled.consequents, strengths)
    xs, samples = compiled.grid(grid_size)
    aggregate = np.minimum(samples, heights[:, None]).max(axis=0)

    mass = aggregate.sum()
    if not mass > 0.0:
        raise EmptyAggregateError(f"{fis.name}: no rule fired for inputs {used}")
    lo, hi = fis.output.universe
    crisp = min(max(float(np.dot(xs, aggregate) / mass), lo), hi)

    best = strengths.max()
    main = int(compiled.indices[strengths == best].min())

    trace = EvaluationTrace(
        model=fis.name,
        inputs=used,
        clamped=tuple(clamped),
        fuzzified=fuzzified,
        strengths={int(i): float(s) for i, s in zip(compiled.indices, strengths)},
        grid=xs,
        aggregate=aggregate,
        crisp=crisp,
        main_active_rule=main,
    )
    return crisp, trace


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.message}"


def missing_combinations(fis: FisDefinition) -> list[tuple[str, ...]]:
    """Input-term combinations that no rule covers, in canonical order."""
    present = {tuple(t for _, t in r.antecedents) for r in fis.rules}
    return [
        combo
        for combo in itertools.product(*(v.labels for v in fis.inputs))
        if combo not in present
    ]


def _coverage_holes(var: LinguisticVariable) -> np.ndarray:
    lo, hi = var.universe
    xs = np.linspace(lo, hi, COVERAGE_GRID)
    top = np.max([sample_mf(mf, xs) for _, mf in var.terms], axis=0)
    return xs[top <= 0.0]


def validate_fis(fis: FisDefinition) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    inputs = {v.name: v for v in fis.inputs}
    out_labels = set(fis.output.labels)
    seen_combo: dict[tuple[str, ...], int] = {}
    seen_index: set[int] = set()
    structural_ok = True

    for rule in fis.rules:
        if rule.index in seen_index:
            diags.append(Diagnostic("error", f"rule index {rule.index} used more than once"))
        seen_index.add(rule.index)
        names = tuple(v for v, _ in rule.antecedents)
        if names != fis.input_names:
            structural_ok = False
            diags.append(Diagnostic(
                "error",
                f"rule {rule.index}: antecedents {list(names)} must be exactly "
                f"{list(fis.input_names)} in that order",
            ))
        for var, label in rule.antecedents:
            if var not in inputs:
                structural_ok = False
                diags.append(Diagnostic("error", f"rule {rule.index}: unknown input {var!r}"))
            elif label not in inputs[var].labels:
                structural_ok = False
                diags.append(Diagnostic("error", f"rule {rule.index}: {var} has no term {label!r}"))
        if rule.consequent not in out_labels:
            diags.append(Diagnostic(
                "error", f"rule {rule.index}: {fis.output.name} has no term {rule.consequent!r}"
            ))
        combo = tuple(t for _, t in rule.antecedents)
        if combo in seen_combo:
            diags.append(Diagnostic(
                "error", f"rule {rule.index} duplicates the antecedents of rule {seen_combo[combo]}"
            ))
        else:
            seen_combo[combo] = rule.index

    if structural_ok:
        for combo in missing_combinations(fis):
            listing = ", ".join(f"{n}={t}" for n, t in zip(fis.input_names, combo))
            diags.append(Diagnostic("warning", f"incomplete rule base: no rule for ({listing})"))

    for var in (*fis.inputs, fis.output):
        holes = _coverage_holes(var)
        if holes.size:
            diags.append(Diagnostic(
                "error",
                f"variable {var.name}: no term covers {holes.size} of {COVERAGE_GRID} "
                f"universe points, first at x={holes[0]:g}",
            ))
    return diags
