"""Seeded random valid FIS definitions for round-trip testing."""
import itertools

import numpy as np

from fuzzrisk import FisDefinition, LinguisticVariable, Rule, Trapezoidal, Triangular


def _mf(rng, lo, hi):
    span = hi - lo
    if rng.random() < 0.5:
        a, b, c = np.sort(rng.uniform(lo - 0.3 * span, hi + 0.3 * span, 3))
        return Triangular(float(a), float(b), float(c) + 1e-3)
    a, b, c, d = np.sort(rng.uniform(lo - 0.3 * span, hi + 0.3 * span, 4))
    return Trapezoidal(float(a), float(b), float(c), float(d) + 1e-3)


def _variable(rng, name):
    lo = float(np.round(rng.uniform(-10, 10), int(rng.integers(0, 6))))
    hi = lo + float(rng.uniform(0.1, 20))
    n_terms = int(rng.integers(1, 5))
    return LinguisticVariable(name, (lo, hi), tuple((f"t{k}_{name}", _mf(rng, lo, hi)) for k in range(n_terms)))


def random_fis(seed):
    rng = np.random.default_rng(seed)
    n_inputs = int(rng.integers(1, 4))
    inputs = tuple(_variable(rng, f"in_{k}") for k in range(n_inputs))
    output = _variable(rng, "Out")
    combos = list(itertools.product(*(v.labels for v in inputs)))
    keep = [c for c in combos if rng.random() < 0.7] or combos[:1]
    order = rng.permutation(len(keep))
    rules = tuple(
        Rule(
            tuple(zip((v.name for v in inputs), keep[j])),
            output.labels[int(rng.integers(len(output.labels)))],
            i + 1,
        )
        for i, j in enumerate(order)
    )
    return FisDefinition(f"random model {seed}", inputs, output, rules)
