"""Superposition-based database search and its exhaustive baseline.

Three strategies over one oracle interface:

* :func:`binary_superposition_search` decides one input per step by comparing
  the two candidate phases while every undecided input idles at the midpoint
  phase pi/4; 2n+1 queries including the final confirmation.
* :func:`segment_search` recursively halves each phase axis, queries every
  child box at its midpoint phases, and descends into the strongest box until
  the surviving lattice fits one exhaustive sweep.
* :func:`brute_force` enumerates the full phase lattice in lexicographic
  order (the independent baseline all searches are checked against).

Margin analysis (:func:`step_margin`, :func:`worst_case_margin`) quantifies
the decision gap that makes the bit-by-bit search sound.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import SpaceTooLarge, TieAtStep, TieBetweenSegments, VerificationFailed
from .oracle import OracleSpec, evaluate, query, _binary_target
from .phasor import DEFAULT_TOLERANCE

QUARTER_PI = math.pi / 4.0
HALF_PI = math.pi / 2.0

#: Above this many combinations brute force stops tracing every query and
#: records only running-maximum improvements (results are unchanged).
FULL_TRACE_LIMIT = 4096


@dataclass(frozen=True)
class QueryRecord:
    """One charged query inside a search step."""

    phases: tuple[float, ...]
    a_out: float
    p_out: float


@dataclass(frozen=True)
class StepRecord:
    """One decision step: the queries it issued and what was decided."""

    step: int
    label: str
    queries: tuple[QueryRecord, ...]
    decision: str


@dataclass(frozen=True)
class SearchResult:
    solution: tuple[float, ...]
    queries: int
    trace: tuple[StepRecord, ...]
    verified: bool
    ties: tuple[tuple[float, ...], ...] = ()


# ---------------------------------------------------------------------------
# bit-by-bit superposition search (binary oracles)
# ---------------------------------------------------------------------------

def binary_superposition_search(oracle: OracleSpec,
                                tolerance: float = DEFAULT_TOLERANCE,
                                protocol: str = "direct") -> SearchResult:
    """Find the unique constructive input of a binary oracle in 2n+1 queries.

    Step i queries input i at phase 0 and then at pi/2, with decided inputs
    fixed and undecided ones at pi/4; the larger output power wins.  With
    ``protocol="detector"`` the comparison is routed through the threshold
    detector (reference set to the first measurement) instead of comparing
    the two powers directly; decisions are identical.
    """
    if not oracle.alphabet.is_binary():
        raise ValueError("binary superposition search needs a binary oracle")
    if protocol not in ("direct", "detector"):
        raise ValueError(f"unknown protocol {protocol!r}")
    n = oracle.n
    before = oracle.counter.value
    decided: list[float] = []
    steps: list[StepRecord] = []
    for i in range(n):
        tail = [QUARTER_PI] * (n - i - 1)
        lo = tuple(decided + [0.0] + tail)
        hi = tuple(decided + [HALF_PI] + tail)
        m_lo = query(oracle, lo, tolerance)
        m_hi = query(oracle, hi, tolerance)
        if abs(m_hi.p_out - m_lo.p_out) <= tolerance:
            raise TieAtStep(
                f"step {i + 1}: candidate powers tie within {tolerance}")
        if protocol == "detector":
            hi_wins = bool(m_hi.p_out >= m_lo.p_out - tolerance)
        else:
            hi_wins = m_hi.p_out > m_lo.p_out
        choice = HALF_PI if hi_wins else 0.0
        decided.append(choice)
        steps.append(StepRecord(
            step=i + 1,
            label=f"input {i + 1}",
            queries=(QueryRecord(lo, m_lo.a_out, m_lo.p_out),
                     QueryRecord(hi, m_hi.a_out, m_hi.p_out)),
            decision=f"phi{i + 1}={'pi/2' if hi_wins else '0'}",
        ))
    solution = tuple(decided)
    confirm = query(oracle, solution, tolerance)
    steps.append(StepRecord(
        step=n + 1,
        label="confirmation",
        queries=(QueryRecord(solution, confirm.a_out, confirm.p_out),),
        decision=f"bit={confirm.bit}",
    ))
    if confirm.bit != 1:
        raise VerificationFailed(
            f"confirmation power {confirm.p_out:.6g} below reference "
            f"{oracle.p_ref:.6g}")
    return SearchResult(solution=solution,
                        queries=oracle.counter.value - before,
                        trace=tuple(steps),
                        verified=True)


# ---------------------------------------------------------------------------
# decision margins
# ---------------------------------------------------------------------------

def step_margin(oracle: OracleSpec, step: int,
                decided: Sequence[float] = ()) -> float:
    """Normalized power gap (P_true - P_false) / n**2 at the given 1-based
    step of the bit-by-bit search, assuming the prefix was decided correctly.

    Strictly positive for every valid binary oracle; uncharged (uses
    evaluation, not queries).
    """
    if not oracle.alphabet.is_binary():
        raise ValueError("step margins are defined for binary oracles")
    n = oracle.n
    if not 1 <= step <= n:
        raise ValueError(f"step must be in 1..{n}")
    target = _binary_target(oracle)
    decided = tuple(decided) if decided else target[:step - 1]
    if len(decided) != step - 1:
        raise ValueError(f"expected {step - 1} decided phases, got {len(decided)}")
    if any(abs(a - b) > 1e-9 for a, b in zip(decided, target)):
        raise ValueError("decided prefix disagrees with the correct phases")
    tail = [QUARTER_PI] * (n - step)
    true_phase = target[step - 1]
    false_phase = HALF_PI if true_phase == 0.0 else 0.0
    p_true = evaluate(oracle, tuple(decided) + (true_phase,) + tuple(tail)).p_out
    p_false = evaluate(oracle, tuple(decided) + (false_phase,) + tuple(tail)).p_out
    return (p_true - p_false) / float(n * n)


def worst_case_margin(n: int) -> float:
    """Step-1 margin of the adversarial shifter family (n-1 shifters +pi/4,
    one -pi/4), evaluated by direct complex arithmetic.

    This is the minimum decision gap over that family; it shrinks with n
    (2*sqrt(2)/n**2) but stays far above measurement tolerance at any
    practical size.
    """
    if n < 2:
        raise ValueError("need at least two inputs")
    # Step 1 tests input 1 (shifter +pi/4, true phase 0); inputs 2..n-1 idle
    # at pi/4 under +pi/4 shifters, input n idles at pi/4 under -pi/4.
    rest = complex(1.0, 0.0) + (n - 2) * complex(0.0, 1.0)
    p_true = abs(rest + complex(math.cos(QUARTER_PI), math.sin(QUARTER_PI))) ** 2
    p_false = abs(rest + complex(math.cos(3 * QUARTER_PI),
                                 math.sin(3 * QUARTER_PI))) ** 2
    return (p_true - p_false) / float(n * n)


def margin_sweep(n_min: int, n_max: int) -> list[tuple[int, float]]:
    if not 2 <= n_min <= n_max:
        raise ValueError("need 2 <= n_min <= n_max")
    return [(n, worst_case_margin(n)) for n in range(n_min, n_max + 1)]


# ---------------------------------------------------------------------------
# segment subdivision search (multivalued oracles)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SegmentBox:
    """Axis-aligned box in phase space: one continuous interval per input,
    obtained by recursively halving the alphabet's span."""

    lows: tuple[float, ...]
    highs: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.lows) != len(self.highs):
            raise ValueError("lows and highs must have equal length")
        if any(h < l for l, h in zip(self.lows, self.highs)):
            raise ValueError("each axis needs low <= high")

    @property
    def midpoints(self) -> tuple[float, ...]:
        return tuple((l + h) / 2.0 for l, h in zip(self.lows, self.highs))

    def children(self) -> list["SegmentBox"]:
        """The 2**n boxes from halving every axis, in lexicographic order
        (axis 1 most significant, lower half first)."""
        per_axis = [((l, (l + h) / 2.0), ((l + h) / 2.0, h))
                    for l, h in zip(self.lows, self.highs)]
        out = []
        for combo in itertools.product(*per_axis):
            out.append(SegmentBox(tuple(c[0] for c in combo),
                                  tuple(c[1] for c in combo)))
        return out

    def lattice_axes(self, values: Sequence[float]) -> list[tuple[float, ...]]:
        """Alphabet members inside the box, per axis."""
        eps = 1e-12
        return [tuple(v for v in values if l - eps <= v <= h + eps)
                for l, h in zip(self.lows, self.highs)]


def segment_search(oracle: OracleSpec,
                   tie_tolerance: float = DEFAULT_TOLERANCE,
                   on_tie: str = "descend") -> SearchResult:
    """Subdivision search over a multivalued oracle whose alphabet size is a
    power of two.

    Each stage halves every axis of the surviving box(es), queries all child
    boxes at their midpoint phases, and keeps the strongest.  Children within
    ``tie_tolerance`` of the maximum are all kept (``on_tie="descend"``, the
    default) or rejected (``on_tie="error"`` raises TieBetweenSegments).
    Once every axis holds at most two lattice phases, the remaining
    combinations are checked one by one.
    """
    m = oracle.alphabet.size
    if m & (m - 1) != 0:
        raise ValueError("segment search needs an alphabet size that is a "
                         "power of two")
    if on_tie not in ("descend", "error"):
        raise ValueError(f"unknown tie policy {on_tie!r}")
    values = oracle.alphabet.values
    before = oracle.counter.value
    frontier = [SegmentBox((values[0],) * oracle.n, (values[-1],) * oracle.n)]
    steps: list[StepRecord] = []
    stage = 0
    while not all(
            all(len(ax) <= 2 for ax in box.lattice_axes(values))
            for box in frontier):
        stage += 1
        children = [child for box in frontier for child in box.children()]
        records = []
        measured = []
        for child in children:
            mid = child.midpoints
            meas = query(oracle, mid)
            records.append(QueryRecord(mid, meas.a_out, meas.p_out))
            measured.append(meas.p_out)
        best = max(measured)
        keep = [i for i, p in enumerate(measured) if best - p <= tie_tolerance]
        if len(keep) > 1 and on_tie == "error":
            raise TieBetweenSegments(
                f"stage {stage}: {len(keep)} segments tie within {tie_tolerance}")
        frontier = [children[i] for i in keep]
        steps.append(StepRecord(
            step=stage,
            label=f"stage {stage}",
            queries=tuple(records),
            decision="descend into box(es) " + ",".join(str(i) for i in keep),
        ))
    # Exhaustive sweep of the surviving lattice, lexicographic, deduplicated.
    seen: set[tuple[float, ...]] = set()
    candidates: list[tuple[float, ...]] = []
    for box in frontier:
        for combo in itertools.product(*box.lattice_axes(values)):
            if combo not in seen:
                seen.add(combo)
                candidates.append(combo)
    candidates.sort()
    records = []
    powers = []
    bits = []
    for combo in candidates:
        meas = query(oracle, combo)
        records.append(QueryRecord(combo, meas.a_out, meas.p_out))
        powers.append(meas.p_out)
        bits.append(meas.bit)
    best = max(powers)
    winners = [i for i, p in enumerate(powers) if best - p <= tie_tolerance]
    steps.append(StepRecord(
        step=stage + 1,
        label="exhaustive",
        queries=tuple(records),
        decision="argmax " + ",".join(str(i) for i in winners),
    ))
    return SearchResult(
        solution=candidates[winners[0]],
        queries=oracle.counter.value - before,
        trace=tuple(steps),
        verified=bits[winners[0]] == 1,
        ties=tuple(candidates[i] for i in winners),
    )


# ---------------------------------------------------------------------------
# exhaustive baseline
# ---------------------------------------------------------------------------

def brute_force(oracle: OracleSpec,
                cap: int = 2 ** 24,
                tie_tolerance: float = DEFAULT_TOLERANCE,
                full_trace_limit: int = FULL_TRACE_LIMIT) -> SearchResult:
    """Query every alphabet combination in lexicographic order and return
    the argmax of output power, with all ties reported.

    Evaluation is vectorized; the counter is charged the full m**n either
    way.  Up to ``full_trace_limit`` combinations every query is traced; above
    it only running-maximum improvements are, keeping traces bounded.
    """
    values = oracle.alphabet.values
    m = len(values)
    n = oracle.n
    space = m ** n
    if space > cap:
        raise SpaceTooLarge(f"{m}**{n} = {space} exceeds cap {cap}")
    # arr[j] = interference sum for the j-th lexicographic combination
    # (axis 0 is the most significant digit).
    arr = np.zeros(1, dtype=np.complex128)
    for axis in range(n):
        contrib = np.array(
            [oracle.sigmas[axis] * np.exp(1j * (v + oracle.deltas[axis]))
             for v in values], dtype=np.complex128)
        arr = (arr[:, None] + contrib[None, :]).ravel()
    amplitudes = np.abs(arr)
    powers = amplitudes * amplitudes
    oracle.counter.increment(space)

    best = float(powers.max())
    winner_idx = [int(i) for i in np.nonzero(best - powers <= tie_tolerance)[0]]

    def combo_at(j: int) -> tuple[float, ...]:
        digits = []
        for axis in range(n - 1, -1, -1):
            digits.append(values[j % m])
            j //= m
        return tuple(reversed(digits))

    steps: list[StepRecord] = []
    if space <= full_trace_limit:
        running = -math.inf
        for j, combo in enumerate(itertools.product(values, repeat=n)):
            p = float(powers[j])
            decision = "new-max" if p > running else ""
            running = max(running, p)
            steps.append(StepRecord(
                step=j + 1, label=f"combo {j}",
                queries=(QueryRecord(combo, float(amplitudes[j]), p),),
                decision=decision))
    else:
        prev = np.concatenate(([-np.inf], np.maximum.accumulate(powers)[:-1]))
        for k, j in enumerate(np.nonzero(powers > prev)[0]):
            j = int(j)
            steps.append(StepRecord(
                step=k + 1, label=f"combo {j}",
                queries=(QueryRecord(combo_at(j), float(amplitudes[j]),
                                     float(powers[j])),),
                decision="new-max"))

    solution = combo_at(winner_idx[0])
    return SearchResult(
        solution=solution,
        queries=space,
        trace=tuple(steps),
        verified=bool(best >= oracle.p_ref - tie_tolerance),
        ties=tuple(combo_at(j) for j in winner_idx),
    )


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

TRACE_COLUMNS = ("step", "input_index_or_box", "phases", "phases_pi",
                 "a_out", "p_out", "decision")


def _fmt_pi(x: float) -> str:
    return f"{x / math.pi:.6g}"


def write_trace_csv(result: SearchResult, out: TextIO) -> None:
    """One row per query: step index, step label, phases (semicolon-joined
    radians plus the same in multiples of pi), amplitude, power, decision."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    for step in result.trace:
        for rec in step.queries:
            w.writerow([
                step.step,
                step.label,
                ";".join(repr(p) for p in rec.phases),
                ";".join(_fmt_pi(p) for p in rec.phases),
                repr(rec.a_out),
                repr(rec.p_out),
                step.decision,
            ])


def write_margin_csv(rows: Iterable[tuple[int, float]], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("n", "margin"))
    for n, margin in rows:
        w.writerow([n, repr(margin)])
