"""Shared test helpers: independent oracles and small generators."""
from __future__ import annotations

import math
from itertools import product

import numpy as np
import pytest

from waveoracle import Phasor

TWO_PI = 2.0 * math.pi
QUARTER_PI = math.pi / 4.0


def time_domain_fit(waves, samples: int = 256) -> tuple[float, float]:
    """Independent route to a superposition's amplitude and phase: sample
    y(t) = sum A_i sin(t + phi_i) over one period and project onto the
    sin/cos basis (exact by discrete orthogonality for samples > 2)."""
    t = np.arange(samples) * (TWO_PI / samples)
    y = np.zeros(samples)
    for w in waves:
        y += w.amplitude * np.sin(t + w.phase)
    a = 2.0 / samples * float((y * np.sin(t)).sum())
    b = 2.0 / samples * float((y * np.cos(t)).sum())
    return math.hypot(a, b), math.atan2(b, a)


def circ_diff(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def all_binary_shifter_patterns(n: int):
    """Every valid shifter assignment for n inputs (the two all-equal
    patterns excluded)."""
    for bits in range(1, 2 ** n - 1):
        yield tuple(QUARTER_PI if (bits >> i) & 1 else -QUARTER_PI
                    for i in range(n))


def brute_force_order(base: int, modulus: int) -> int:
    """Multiplicative order by plain modular iteration."""
    v, k = base % modulus, 1
    while v != 1:
        v = (v * base) % modulus
        k += 1
    return k


def exhaustive_argmax(oracle) -> tuple[tuple[float, ...], float]:
    """Plain-Python exhaustive scan (independent of the vectorized path)."""
    best_combo, best_p = None, -1.0
    for combo in product(oracle.alphabet.values, repeat=oracle.n):
        s = sum(complex(sg * math.cos(p + d), sg * math.sin(p + d))
                for sg, p, d in zip(oracle.sigmas, combo, oracle.deltas))
        p_out = abs(s) ** 2
        if p_out > best_p:
            best_combo, best_p = combo, p_out
    return best_combo, best_p


@pytest.fixture
def rng():
    import random
    return random.Random(20260810)
