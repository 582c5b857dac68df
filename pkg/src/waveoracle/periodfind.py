"""Period finding through wave-superposition phase convergence, and the gcd
factorization step built on it.

The sequence f(k) = m**k mod N (coprime m) is mapped to unit waves with
phases f(k)*pi/N.  Partial superpositions of those waves have a phase that
revisits the one-period value exactly at every multiple of the period, so the
first arithmetically confirmed revisit of the converged phase is the
multiplicative order of m.  All number theory runs in exact integer
arithmetic; only the wave bookkeeping is floating point.
"""
from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

from .errors import (
    ExhaustedAttempts,
    FalseMatch,
    NotConverged,
    NotCoprime,
    OddPeriod,
    TrivialCase,
    UnsupportedModulus,
)

TWO_PI = 2.0 * math.pi

#: Partial sums with magnitude below this have no meaningful phase.
ZERO_AMPLITUDE = 1e-12


# ---------------------------------------------------------------------------
# modular sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModularSequence:
    """Values f(k) = base**k mod modulus for k = 1..K."""

    modulus: int
    base: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        N, m = self.modulus, self.base
        if N < 2 or not 2 <= m < N:
            raise ValueError("need modulus >= 2 and 2 <= base < modulus")
        if not self.values:
            raise ValueError("sequence must be non-empty")
        v = m % N
        for k, got in enumerate(self.values, start=1):
            if got != v:
                raise ValueError(f"value at k={k} is {got}, expected {v}")
            v = (v * m) % N

    @property
    def length(self) -> int:
        return len(self.values)


def mod_sequence(modulus: int, base: int, length: int) -> ModularSequence:
    """Compute f(k) = base**k mod modulus for k = 1..length by iterated
    modular multiplication (no big-power intermediates)."""
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if not 2 <= base < modulus:
        raise ValueError("base must satisfy 2 <= base < modulus")
    if length < 1:
        raise ValueError("length must be >= 1")
    g = math.gcd(base, modulus)
    if g != 1:
        raise NotCoprime(base, modulus, g)
    values = []
    v = 1
    for _ in range(length):
        v = (v * base) % modulus
        values.append(v)
    return ModularSequence(modulus, base, tuple(values))


def auto_sequence(modulus: int, base: int, periods: int = 4,
                  cap: int | None = None) -> ModularSequence:
    """Sequence long enough for period finding: iterate until f(k) = 1 first
    appears and extend to ``periods`` full repetitions.

    For coprime bases the 1 always appears within modulus-1 steps; ``cap``
    (default 4*modulus) only guards memory.
    """
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if not 2 <= base < modulus:
        raise ValueError("base must satisfy 2 <= base < modulus")
    g = math.gcd(base, modulus)
    if g != 1:
        raise NotCoprime(base, modulus, g)
    if cap is None:
        cap = 4 * modulus
    values = []
    v = 1
    first_one = None
    k = 0
    while True:
        k += 1
        v = (v * base) % modulus
        values.append(v)
        if v == 1 and first_one is None:
            first_one = k
        if first_one is not None and k >= periods * first_one:
            break
        if k >= cap:
            raise NotConverged(
                f"no full period within cap={cap} for base {base} mod {modulus}")
    return ModularSequence(modulus, base, tuple(values))


# ---------------------------------------------------------------------------
# wave mapping
# ---------------------------------------------------------------------------

def phase_map(seq: ModularSequence) -> list[float]:
    """phi(k) = f(k) * pi / N, each in [0, pi)."""
    N = seq.modulus
    return [v * math.pi / N for v in seq.values]


def _partial_sums(phases: Sequence[float]) -> np.ndarray:
    return np.cumsum(np.exp(1j * np.asarray(phases, dtype=np.float64)))


def running_phase(phases: Sequence[float]) -> list[float]:
    """Phase of the wave superposition after 1, 2, ... inputs.

    Entries where the partial sum has (near-)zero amplitude carry NaN rather
    than a fabricated phase.
    """
    if len(phases) == 0:
        raise ValueError("need at least one phase")
    sums = _partial_sums(phases)
    out = np.angle(sums)
    out[np.abs(sums) < ZERO_AMPLITUDE] = np.nan
    return [float(x) for x in out]


def circular_distance(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


# ---------------------------------------------------------------------------
# period extraction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodResult:
    period: int
    converged_phase: float
    phase_trace: tuple[float, ...]
    factors: tuple[int, ...] = ()


def find_period(seq: ModularSequence, tol: float = 1e-6) -> PeriodResult:
    """Smallest k whose running phase matches the converged (final) phase
    within ``tol`` circular distance and passes the arithmetic check
    base**k = 1 (mod modulus).

    Phase coincidences that fail the arithmetic check are skipped; if every
    match fails it, FalseMatch is raised rather than returning a wrong
    period.  The caller must supply a sequence covering whole periods (see
    :func:`auto_sequence`); the final entry of such a sequence equals the
    one-period superposition phase exactly, because full-period blocks add
    collinearly.
    """
    N, m = seq.modulus, seq.base
    phases = phase_map(seq)
    sums = _partial_sums(phases)
    running = np.angle(sums)
    dead = np.abs(sums) < ZERO_AMPLITUDE
    if dead[-1]:
        raise NotConverged("final superposition has no defined phase")
    converged = float(running[-1])
    diff = np.abs(running - converged) % TWO_PI
    dist = np.minimum(diff, TWO_PI - diff)
    matches = np.nonzero((dist <= tol) & ~dead)[0]
    false_matches = []
    for idx in matches:
        k = int(idx) + 1
        if pow(m, k, N) == 1:
            trace = tuple(float(np.nan) if dead[i] else float(running[i])
                          for i in range(len(running)))
            return PeriodResult(period=k, converged_phase=converged,
                                phase_trace=trace)
        false_matches.append(k)
    if false_matches:
        raise FalseMatch(
            f"phase recurred at k={false_matches} but none satisfy "
            f"{m}**k = 1 (mod {N}); sequence too short or drifting")
    raise NotConverged("no phase recurrence within tolerance")


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------

def factor_step(modulus: int, base: int, period: int) -> tuple[int, ...]:
    """gcd candidates from an even period: gcd(base**(r/2) + 1, N) and
    gcd(base**(r/2) - 1, N), keeping those strictly between 1 and N."""
    if period % 2 != 0:
        raise OddPeriod(f"period {period} is odd")
    h = pow(base, period // 2, modulus)
    candidates = (math.gcd(h + 1, modulus), math.gcd(h - 1, modulus))
    factors = tuple(g for g in candidates if 1 < g < modulus)
    if not factors:
        raise TrivialCase(
            f"gcd candidates {candidates} are trivial for N={modulus}")
    return factors


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (fixed witness set)."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _perfect_power_base(n: int) -> int | None:
    """Smallest b with b**k = n for some k >= 2, else None."""
    for k in range(2, n.bit_length() + 1):
        lo, hi = 2, 1 << (n.bit_length() // k + 1)
        while lo <= hi:
            mid = (lo + hi) // 2
            p = mid ** k
            if p == n:
                return mid
            if p < n:
                lo = mid + 1
            else:
                hi = mid - 1
    return None


@dataclass(frozen=True)
class AttemptRecord:
    base: int
    outcome: str
    period: int | None = None
    factors: tuple[int, ...] = ()


@dataclass(frozen=True)
class FactorizationResult:
    n: int
    factor: int
    attempts: tuple[AttemptRecord, ...]
    period_result: PeriodResult | None = None


def factorize(n: int, seed: int = 0, max_attempts: int = 32,
              periods: int = 4, tol: float = 1e-6) -> FactorizationResult:
    """Find a nontrivial factor of an odd composite (non-prime-power) n by
    drawing bases from ``seed``, running wave-phase period finding, and
    applying the gcd step; retries on odd periods and trivial gcds.

    A base sharing a factor with n short-circuits: that gcd is the answer.
    """
    if n < 4:
        raise UnsupportedModulus(n, "need n >= 4")
    if n % 2 == 0:
        raise UnsupportedModulus(n, "even (2 is a factor); handle directly")
    if is_probable_prime(n):
        raise UnsupportedModulus(n, "prime; nothing to factor")
    b = _perfect_power_base(n)
    if b is not None:
        raise UnsupportedModulus(n, f"prime power with base {b}")
    rng = random.Random(seed)
    attempts: list[AttemptRecord] = []
    tried: set[int] = set()
    while len(attempts) < max_attempts:
        base = rng.randrange(2, n - 1)
        if base in tried:
            continue
        tried.add(base)
        g = math.gcd(base, n)
        if g != 1:
            attempts.append(AttemptRecord(base, "lucky-gcd", factors=(g,)))
            return FactorizationResult(n, g, tuple(attempts))
        seq = auto_sequence(n, base, periods=periods)
        try:
            pr = find_period(seq, tol=tol)
        except (NotConverged, FalseMatch) as exc:
            attempts.append(AttemptRecord(base, f"period-finding failed: {exc}"))
            continue
        try:
            factors = factor_step(n, base, pr.period)
        except OddPeriod:
            attempts.append(AttemptRecord(base, "odd period", period=pr.period))
            continue
        except TrivialCase:
            attempts.append(AttemptRecord(base, "trivial gcds", period=pr.period))
            continue
        attempts.append(AttemptRecord(base, "factored", period=pr.period,
                                      factors=factors))
        return FactorizationResult(
            n, factors[0], tuple(attempts),
            period_result=PeriodResult(pr.period, pr.converged_phase,
                                       pr.phase_trace, factors))
    raise ExhaustedAttempts(
        f"no factor of {n} after {max_attempts} attempts (seed {seed})")


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

PHASE_TRACE_COLUMNS = ("k", "f_k", "phi_k", "running_phase",
                       "running_amplitude")


def write_phase_trace_csv(seq: ModularSequence, out: TextIO) -> None:
    """Per-k wave bookkeeping, sufficient to re-plot the convergence of the
    superposition phase."""
    phases = phase_map(seq)
    sums = _partial_sums(phases)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(PHASE_TRACE_COLUMNS)
    for k, (f_k, phi_k, s) in enumerate(zip(seq.values, phases, sums), start=1):
        amp = abs(s)
        ang = float(np.angle(s)) if amp >= ZERO_AMPLITUDE else math.nan
        w.writerow([k, f_k, repr(phi_k), repr(ang), repr(float(amp))])
