"""One- and two-axis response sweeps of a FIS, with CSV/JSON export."""
from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .inference import DEFAULT_GRID, FisDefinition, evaluate

DEFAULT_STEPS = 51


class SweepError(ValueError):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    samples: tuple[float, ...]


@dataclass(frozen=True)
class SweepResult:
    """Crisp outputs over a grid.

    ``values`` is a flat tuple for one axis, or a tuple of rows for two axes,
    where row ``i`` holds the first axis at ``samples[i]`` (row-major).
    """

    model: str
    output: str
    axes: tuple[Axis, ...]
    fixed: dict[str, float]
    values: tuple

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a.samples) for a in self.axes)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


def sweep(
    fis: FisDefinition,
    axes: str | Sequence[str],
    fixed: Mapping[str, float],
    steps: int = DEFAULT_STEPS,
    *,
    grid_size: int = DEFAULT_GRID,
) -> SweepResult:
    if isinstance(axes, str):
        axes = (axes,)
    axes = tuple(axes)
    if not 1 <= len(axes) <= 2:
        raise SweepError(f"sweep takes one or two axes, got {len(axes)}")
    if len(set(axes)) != len(axes):
        raise SweepError("sweep axes must be distinct")
    if steps < 2:
        raise SweepError(f"steps must be at least 2, got {steps}")
    names = fis.input_names
    for name in (*axes, *fixed):
        if name not in names:
            raise SweepError(f"{fis.name} has no input {name!r}")
    for name in axes:
        if name in fixed:
            raise SweepError(f"{name} is both swept and fixed")
    missing = [n for n in names if n not in axes and n not in fixed]
    if missing:
        raise SweepError(f"missing fixed input: {', '.join(missing)}")

    grid_axes = tuple(
        Axis(name, tuple(float(x) for x in np.linspace(*fis.input(name).universe, steps)))
        for name in axes
    )
    point = {n: float(v) for n, v in fixed.items()}

    def at(**swept: float) -> float:
        point.update(swept)
        return evaluate(fis, point, grid_size=grid_size)[0]

    first = grid_axes[0]
    if len(grid_axes) == 1:
        values = tuple(at(**{first.name: x}) for x in first.samples)
    else:
        second = grid_axes[1]
        values = tuple(
            tuple(at(**{first.name: x, second.name: y}) for y in second.samples)
            for x in first.samples
        )
    return SweepResult(
        model=fis.name,
        output=fis.output.name,
        axes=grid_axes,
        fixed={n: float(fixed[n]) for n in names if n in fixed},
        values=values,
    )


def export_csv(result: SweepResult) -> str:
    """``x[,y],value`` rows; 2-D sweeps get a leading ``#`` line naming the axes."""
    lines = []
    if len(result.axes) == 1:
        lines.append("x,value")
        lines += [f"{x!r},{v!r}" for x, v in zip(result.axes[0].samples, result.values)]
    else:
        rows, cols = result.axes
        lines.append(f"# x={rows.name} (rows), y={cols.name} (columns), row-major")
        lines.append("x,y,value")
        for x, row in zip(rows.samples, result.values):
            lines += [f"{x!r},{y!r},{v!r}" for y, v in zip(cols.samples, row)]
    return "\n".join(lines) + "\n"


def export_json(result: SweepResult) -> str:
    doc = {
        "model": result.model,
        "output": result.output,
        "axes": [{"name": a.name, "samples": list(a.samples)} for a in result.axes],
        "fixed": dict(result.fixed),
        "values": [list(r) for r in result.values] if len(result.axes) == 2 else list(result.values),
    }
    return json.dumps(doc, indent=2) + "\n"


def load_json(text: str) -> SweepResult:
    doc = json.loads(text)
    axes = tuple(Axis(a["name"], tuple(float(x) for x in a["samples"])) for a in doc["axes"])
    if len(axes) == 2:
        values = tuple(tuple(float(v) for v in row) for row in doc["values"])
    else:
        values = tuple(float(v) for v in doc["values"])
    return SweepResult(
        model=doc["model"],
        output=doc["output"],
        axes=axes,
        fixed={k: float(v) for k, v in doc["fixed"].items()},
        values=values,
    )


@dataclass(frozen=True)
class SweepConfig:
    model: str  # built-in name
    axes: tuple[str, ...]
    fixed: dict[str, float]


# canonical slices and surfaces of the built-in models
FIGURE_SWEEPS = {
    "attacker_surface_medium_motivation": SweepConfig("attacker", ("knowledge", "resources"), {"motivation": 0.5}),
    "disgruntled_employee_knowledge": SweepConfig("attacker", ("knowledge",), {"resources": 0.1, "motivation": 0.5}),
    "industrial_spy_knowledge": SweepConfig("attacker", ("knowledge",), {"resources": 0.9, "motivation": 0.5}),
    "terrorist_knowledge": SweepConfig("attacker", ("knowledge",), {"resources": 0.5, "motivation": 0.5}),
    "attacker_surface_small_motivation": SweepConfig("attacker", ("knowledge", "resources"), {"motivation": 0.1}),
    "script_kiddie_knowledge": SweepConfig("attacker", ("knowledge",), {"resources": 0.1, "motivation": 0.1}),
    "hacker_knowledge": SweepConfig("attacker", ("knowledge",), {"resources": 0.5, "motivation": 0.1}),
    "attacker_surface_big_motivation": SweepConfig("attacker", ("knowledge", "resources"), {"motivation": 0.9}),
    "cyber_warrior_knowledge": SweepConfig("attacker", ("knowledge",), {"resources": 0.9, "motivation": 0.9}),
    "resources_saturation": SweepConfig("attacker", ("resources",), {"motivation": 0.5, "knowledge": 0.9}),
    "success_medium_vulnerabilities_big_restore": SweepConfig(
        "success", ("profile", "protection"), {"vulnerabilities": 0.5, "restore_cost": 0.9}
    ),
}
