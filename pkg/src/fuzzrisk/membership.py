"""Triangular and trapezoidal membership functions.

Breakpoints may sit outside the universe of the variable that owns the
function; evaluation never looks at the universe.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np


def _check_finite(name: str, values: tuple[float, ...]) -> None:
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"{name} breakpoints must be finite, got {values}")


@dataclass(frozen=True)
class Triangular:
    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        _check_finite("triangular", self.params)
        if not (self.a <= self.b <= self.c and self.a < self.c):
            raise ValueError(
                f"triangular breakpoints need a <= b <= c and a < c, got {self.params}"
            )

    @property
    def params(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.c)

    def __call__(self, x: float) -> float:
        return eval_mf(self, x)


@dataclass(frozen=True)
class Trapezoidal:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        _check_finite("trapezoidal", self.params)
        if not (self.a <= self.b <= self.c <= self.d and self.a < self.d):
            raise ValueError(
                f"trapezoidal breakpoints need a <= b <= c <= d and a < d, got {self.params}"
            )

    @property
    def params(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c, self.d)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.d)

    def __call__(self, x: float) -> float:
        return eval_mf(self, x)


MembershipFunction = Union[Triangular, Trapezoidal]


def _rising(x: float, lo: float, hi: float) -> float:
    if hi == lo:
        # vertical edge: full membership from the breakpoint onwards
        return 1.0 if x >= lo else 0.0
    return (x - lo) / (hi - lo)


def _falling(x: float, lo: float, hi: float) -> float:
    if hi == lo:
        return 1.0 if x <= hi else 0.0
    return (hi - x) / (hi - lo)


def eval_mf(mf: MembershipFunction, x: float) -> float:
    """Degree of membership of ``x`` in ``mf``, always within [0, 1]."""
    if not math.isfinite(x):
        raise ValueError(f"membership input must be finite, got {x!r}")
    if isinstance(mf, Triangular):
        degree = min(_rising(x, mf.a, mf.b), _falling(x, mf.b, mf.c))
    elif isinstance(mf, Trapezoidal):
        degree = min(_rising(x, mf.a, mf.b), 1.0, _falling(x, mf.c, mf.d))
    else:
        raise TypeError(f"unsupported membership function {mf!r}")
    return min(max(degree, 0.0), 1.0)


def _rising_array(xs: np.ndarray, lo: float, hi: float) -> np.ndarray:
    if hi == lo:
        return (xs >= lo).astype(float)
    return (xs - lo) / (hi - lo)


def _falling_array(xs: np.ndarray, lo: float, hi: float) -> np.ndarray:
    if hi == lo:
        return (xs <= hi).astype(float)
    return (hi - xs) / (hi - lo)


def sample_mf(mf: MembershipFunction, xs: np.ndarray) -> np.ndarray:
    """Vectorised :func:`eval_mf`; elementwise identical to the scalar path."""
    xs = np.asarray(xs, dtype=float)
    # near-coincident breakpoints overflow to +/-inf; the clip below absorbs it
    with np.errstate(over="ignore"):
        if isinstance(mf, Triangular):
            degree = np.minimum(_rising_array(xs, mf.a, mf.b), _falling_array(xs, mf.b, mf.c))
        elif isinstance(mf, Trapezoidal):
            degree = np.minimum(
                np.minimum(_rising_array(xs, mf.a, mf.b), 1.0),
                _falling_array(xs, mf.c, mf.d),
            )
        else:
            raise TypeError(f"unsupported membership function {mf!r}")
    return np.clip(degree, 0.0, 1.0)


def max_slope(mf: MembershipFunction) -> float:
    """Lipschitz constant of a non-degenerate membership function."""
    p = mf.params
    edges = [(p[0], p[1]), (p[-2], p[-1])]
    if any(hi == lo for lo, hi in edges):
        return math.inf
    return max(1.0 / (hi - lo) for lo, hi in edges)
