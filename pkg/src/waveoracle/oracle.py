"""Construction and querying of interferometric oracles.

An oracle is a fixed multi-input interferometer: input ``i`` accumulates a
phase shift ``delta_i`` and an amplitude factor ``sigma_i`` on the way to the
single output, where all inputs interfere.  A query drives the inputs at
chosen phases and reads the output amplitude, phase, time-averaged power and
the thresholded detector bit.  Query counting lives here so that every search
strategy is charged identically.
"""
from __future__ import annotations

import json
import math
import random
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .errors import (
    AllShiftersEqual,
    ArityMismatch,
    BadShifterValue,
    NoUniqueTarget,
    GroundTruthAccessError,
    ValueNotInAlphabet,
)
from .phasor import DEFAULT_TOLERANCE, Phasor, canonical_phase, detect, superpose

QUARTER_PI = math.pi / 4.0
HALF_PI = math.pi / 2.0

#: Tolerance for matching a float phase against an alphabet member.  Alphabet
#: values are exact float expressions; this only absorbs ulp-level noise from
#: equivalent formulas (e.g. 2*pi/14 vs pi/7).
PHASE_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class PhaseAlphabet:
    """Ordered set of admissible input phases, all within [0, pi/2]."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise ValueError("alphabet needs at least two phases")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("alphabet phases must be strictly increasing")
        if vals[0] < -PHASE_MATCH_TOL or vals[-1] > HALF_PI + PHASE_MATCH_TOL:
            raise ValueError("alphabet phases must lie in [0, pi/2]")
        object.__setattr__(self, "values", vals)

    @property
    def size(self) -> int:
        return len(self.values)

    def index_of(self, phase: float) -> int:
        """Index of the alphabet member matching ``phase``, or raise."""
        for i, v in enumerate(self.values):
            if abs(v - phase) <= PHASE_MATCH_TOL:
                return i
        raise ValueNotInAlphabet(f"phase {phase!r} is not in the alphabet")

    def contains(self, phase: float) -> bool:
        try:
            self.index_of(phase)
            return True
        except ValueNotInAlphabet:
            return False

    @classmethod
    def binary(cls) -> "PhaseAlphabet":
        return cls((0.0, HALF_PI))

    @classmethod
    def uniform(cls, m: int) -> "PhaseAlphabet":
        """m phases evenly spaced over [0, pi/2]; uniform(8) is the
        eight-level alphabet {0, pi/14, ..., 6pi/14, pi/2}."""
        if m < 2:
            raise ValueError("need at least two phases")
        return cls(tuple(i * HALF_PI / (m - 1) for i in range(m)))

    def is_binary(self) -> bool:
        return self.size == 2 and self.contains(0.0) and self.contains(HALF_PI)


class QueryCounter:
    """Monotonic query tally; exact under concurrent increments."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._count = 0

    def increment(self, by: int = 1) -> None:
        with self._lock:
            self._count += by

    @property
    def value(self) -> int:
        return self._count

    def __repr__(self) -> str:  # pragma: no cover
        return f"QueryCounter({self._count})"


@dataclass(frozen=True)
class Measurement:
    """One query result: output amplitude, phase, power and detector bit."""

    a_out: float
    phi_out: float
    p_out: float
    bit: int


@dataclass(frozen=True)
class OracleSpec:
    """An oracle instance: per-input phase shifts and attenuations, the
    detector reference power, and the admissible input-phase alphabet.

    Immutable after construction except for the query counter.
    """

    n: int
    deltas: tuple[float, ...]
    sigmas: tuple[float, ...]
    p_ref: float
    alphabet: PhaseAlphabet
    counter: QueryCounter = field(default_factory=QueryCounter,
                                  compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("oracle needs at least two inputs")
        if len(self.deltas) != self.n or len(self.sigmas) != self.n:
            raise ValueError("deltas and sigmas must both have length n")
        if any(not (0.0 < s <= 1.0) for s in self.sigmas):
            raise ValueError("attenuations must lie in (0, 1]")
        if self.p_ref < 0.0:
            raise ValueError("p_ref must be >= 0")

    @property
    def queries(self) -> int:
        return self.counter.value


def build_binary_oracle(deltas: Sequence[float],
                        p_ref: float | None = None) -> OracleSpec:
    """Oracle whose shifters are all +pi/4 or -pi/4 (and not all equal),
    with the binary input alphabet {0, pi/2} and p_ref defaulting to n**2."""
    n = len(deltas)
    if n < 2:
        raise ValueError("need at least two shifters")
    snapped = []
    for d in deltas:
        if abs(d - QUARTER_PI) <= PHASE_MATCH_TOL:
            snapped.append(QUARTER_PI)
        elif abs(d + QUARTER_PI) <= PHASE_MATCH_TOL:
            snapped.append(-QUARTER_PI)
        else:
            raise BadShifterValue(f"shifter {d!r} is not +pi/4 or -pi/4")
    if len(set(snapped)) == 1:
        raise AllShiftersEqual("all shifters equal; no unique constructive input")
    return OracleSpec(n=n, deltas=tuple(snapped), sigmas=(1.0,) * n,
                      p_ref=float(n * n) if p_ref is None else float(p_ref),
                      alphabet=PhaseAlphabet.binary())


def build_multivalued_oracle(deltas: Sequence[float],
                             alphabet: PhaseAlphabet,
                             p_ref: float | None = None) -> OracleSpec:
    """Oracle whose shifters are drawn from ``alphabet`` (not all equal).

    p_ref defaults to n**2, the power that full constructive interference
    actually produces for n unit inputs.
    """
    n = len(deltas)
    if n < 2:
        raise ValueError("need at least two shifters")
    idx = [alphabet.index_of(d) for d in deltas]
    if len(set(idx)) == 1:
        raise AllShiftersEqual("all shifters equal; no unique constructive input")
    snapped = tuple(alphabet.values[i] for i in idx)
    return OracleSpec(n=n, deltas=snapped, sigmas=(1.0,) * n,
                      p_ref=float(n * n) if p_ref is None else float(p_ref),
                      alphabet=alphabet)


def evaluate(oracle: OracleSpec, phases: Sequence[float],
             tolerance: float = DEFAULT_TOLERANCE) -> Measurement:
    """Interference result for the given input phases, without charging the
    query counter.  Analysis code (margins, synthetic tables) uses this;
    search code must go through :func:`query`."""
    if len(phases) != oracle.n:
        raise ArityMismatch(f"expected {oracle.n} phases, got {len(phases)}")
    out = superpose(Phasor(s, p + d)
                    for s, p, d in zip(oracle.sigmas, phases, oracle.deltas))
    p_out = out.amplitude * out.amplitude
    return Measurement(a_out=out.amplitude, phi_out=out.phase, p_out=p_out,
                       bit=detect(p_out, oracle.p_ref, tolerance))


def query(oracle: OracleSpec, phases: Sequence[float],
          tolerance: float = DEFAULT_TOLERANCE) -> Measurement:
    """One charged oracle query.  Input phases may be any reals (undecided
    inputs are driven at midpoint phases), not just alphabet members."""
    m = evaluate(oracle, phases, tolerance)
    oracle.counter.increment()
    return m


def _binary_target(oracle: OracleSpec) -> tuple[float, ...]:
    # A binary oracle's unique constructive input aligns every phi_i+delta_i
    # at pi/4: phi_i = 0 under a +pi/4 shifter, pi/2 under -pi/4.
    return tuple(0.0 if d > 0.0 else HALF_PI for d in oracle.deltas)


def target_of(oracle: OracleSpec, test_access: bool = False) -> tuple[float, ...]:
    """Analytic ground truth: the unique alphabet combination with output
    amplitude n (at unit attenuations).

    Test harnesses only; ``test_access=True`` must be passed explicitly so
    search benchmarks cannot call this by accident.  Raises NoUniqueTarget
    when the alignment equation has zero or several alphabet solutions
    (possible for multivalued oracles, never for valid binary ones).
    """
    if not test_access:
        raise GroundTruthAccessError("target_of is a test-only accessor; "
                             "pass test_access=True")
    if oracle.alphabet.is_binary():
        return _binary_target(oracle)
    solutions: list[tuple[float, ...]] = []
    for v in oracle.alphabet.values:
        c = v + oracle.deltas[0]
        combo = []
        for d in oracle.deltas:
            phi = canonical_phase(c - d)
            if not oracle.alphabet.contains(phi):
                break
            combo.append(oracle.alphabet.values[oracle.alphabet.index_of(phi)])
        else:
            if combo not in solutions:
                solutions.append(tuple(combo))
    if len(solutions) != 1:
        raise NoUniqueTarget(
            f"{len(solutions)} alphabet combinations attain amplitude n")
    return solutions[0]


def random_oracle(n: int, kind: str = "binary",
                  alphabet: PhaseAlphabet | None = None,
                  seed: int = 0) -> OracleSpec:
    """Deterministic pseudo-random oracle for test-case generation."""
    if n < 2:
        raise ValueError("need at least two inputs")
    rng = random.Random(seed)
    if kind == "binary":
        deltas = [rng.choice((QUARTER_PI, -QUARTER_PI)) for _ in range(n)]
        if len(set(deltas)) == 1:
            deltas[rng.randrange(n)] *= -1.0
        return build_binary_oracle(deltas)
    if kind == "multivalued":
        alpha = alphabet if alphabet is not None else PhaseAlphabet.uniform(8)
        deltas = [rng.choice(alpha.values) for _ in range(n)]
        if len(set(deltas)) == 1:
            others = [v for v in alpha.values if v != deltas[0]]
            deltas[rng.randrange(n)] = rng.choice(others)
        return build_multivalued_oracle(deltas, alpha)
    raise ValueError(f"unknown oracle kind {kind!r}")


# --- JSON wire format: {n, deltas, sigmas, p_ref, alphabet}, radians ---

def oracle_to_json(oracle: OracleSpec) -> str:
    doc = {
        "n": oracle.n,
        "deltas": list(oracle.deltas),
        "sigmas": list(oracle.sigmas),
        "p_ref": oracle.p_ref,
        "alphabet": list(oracle.alphabet.values),
    }
    return json.dumps(doc, indent=2)


def oracle_from_json(text: str) -> OracleSpec:
    """Parse and validate the JSON wire format.  The query counter starts
    fresh on load."""
    try:
        doc = json.loads(text)
        n = int(doc["n"])
        deltas = [float(d) for d in doc["deltas"]]
        sigmas = [float(s) for s in doc["sigmas"]]
        p_ref = float(doc["p_ref"])
        alphabet = PhaseAlphabet(tuple(float(v) for v in doc["alphabet"]))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ValueError(f"malformed oracle document: {exc}") from exc
    if len(deltas) != n or len(sigmas) != n:
        raise ValueError("deltas/sigmas length disagrees with n")
    if alphabet.is_binary():
        spec = build_binary_oracle(deltas, p_ref=p_ref)
    else:
        if len(set(alphabet.index_of(d) for d in deltas)) == 1:
            raise AllShiftersEqual("all shifters equal")
        spec = build_multivalued_oracle(deltas, alphabet, p_ref=p_ref)
    if tuple(sigmas) != spec.sigmas:
        spec = OracleSpec(n=n, deltas=spec.deltas, sigmas=tuple(sigmas),
                          p_ref=spec.p_ref, alphabet=spec.alphabet)
    return spec


# --- shipped presets ---

def example1_oracle() -> OracleSpec:
    """Five-input binary preset with shifters (+ - - + +) * pi/4; its unique
    constructive input is (0, pi/2, pi/2, 0, 0)."""
    return build_binary_oracle((QUARTER_PI, -QUARTER_PI, -QUARTER_PI,
                                QUARTER_PI, QUARTER_PI))


def example2_oracle() -> OracleSpec:
    """Three-input preset over the eight-level alphabet with shifters
    (5pi/14, pi/2, 0); its unique constructive input is (pi/7, 0, pi/2)."""
    alpha = PhaseAlphabet.uniform(8)
    return build_multivalued_oracle(
        (5.0 * math.pi / 14.0, HALF_PI, 0.0), alpha)
