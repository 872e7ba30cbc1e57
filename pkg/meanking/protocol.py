"""Mean King and Tracking-the-King as runnable state machines.

Both variants share one engine:

1. Alice prepares a two-qudit state: the normalized balance state (MKP) or a
   line state |P_j> (tracking).
2. The King measures particle 1 in basis b and sees outcome m.
3. Alice measures the non-degenerate operator B whose eigenvectors are the
   d² line states and sees a line j' = (m̈', m₀'').
4. Alice infers m from b (MKP), or b from j and j' (tracking).

Runs are exhaustive (every branch with its probability) or sampled from a
counter-based seed: trial t of seed s draws from SeedSequence(s, spawn_key=(t,)),
so multi-round runs are reproducible round by round.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from meanking.config import default_tolerance
from meanking.entangle import balance_state, line_state, line_state_basis
from meanking.errors import InvalidLabelError
from meanking.finitefield import DimLike, ModInt, PrimeDim, as_dim, mod_div
from meanking.geometry import Line, Point, all_lines, intersect_lines, line_row, lines_through_point
from meanking.mub import CB, BasisLabel, Shifted, all_basis_labels, is_cb, mub_basis
from meanking.qudit import (
    Ket,
    Operator,
    fidelity,
    measure_first_particle,
    measure_in_basis,
    outer,
)

logger = logging.getLogger(__name__)

# Sign of the tracking constraint m₀'' - m₀ = SIGN * b * (m̈ - m̈'),
# frozen after `resolve_tracking_sign` agreed with simulation at d = 3, 5.
TRACKING_SIGN = 1


class Variant(str, Enum):
    MKP = "mkp"
    TRACKING = "tracking"


@dataclass(frozen=True)
class Exhaustive:
    pass


@dataclass(frozen=True)
class Sampled:
    seed: int
    trials: int = 1
    offset: int = 0


Mode = Union[Exhaustive, Sampled]


@dataclass(frozen=True)
class InferredOutcome:
    m: ModInt


@dataclass(frozen=True)
class InferredBasis:
    b: BasisLabel


@dataclass(frozen=True)
class Undetermined:
    pass


InferenceResult = Union[InferredOutcome, InferredBasis, Undetermined]


@dataclass(frozen=True)
class Transcript:
    dim: PrimeDim
    variant: Variant
    prepared: Optional[Line]  # None: the balance state
    king_basis: BasisLabel
    king_outcome: ModInt
    control_outcome: Line
    inference: InferenceResult
    # Exhaustive mode only: probability of this branch, and the control
    # distribution given the King's outcome (nonzero entries).
    probability: Optional[float] = None
    probabilities: Optional[Dict[Line, float]] = None

    @property
    def correct(self) -> Optional[bool]:
        """Whether the inference matches what the King did; None for erasures."""
        if isinstance(self.inference, InferredOutcome):
            return self.inference.m == self.king_outcome
        if isinstance(self.inference, InferredBasis):
            return self.inference.b == self.king_basis
        return None


@dataclass
class ChannelResult:
    decoded: List[Union[BasisLabel, Undetermined]] = field(default_factory=list)
    transcripts: List[Transcript] = field(default_factory=list)


def round_rng(seed: int, counter: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(counter,)))


def message_rng(seed: int) -> np.random.Generator:
    """Generator for random channel messages, independent of every round stream."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0, 1)))


def alice_control_basis(d: DimLike) -> List[Ket]:
    """Eigenvectors of B: the line states in `all_lines` order."""
    return list(_control_setup(as_dim(d).d)[1])


@lru_cache(maxsize=None)
def _control_setup(d: int) -> Tuple[Tuple[Line, ...], Tuple[Ket, ...]]:
    return tuple(all_lines(d)), tuple(s.vector for s in line_state_basis(d))


def control_label(j: Line) -> int:
    """Eigenvalue label Gamma of B for outcome line j: m̈'*d + m₀''."""
    return j.m_ddot.value * j.dim.d + j.m0.value


def control_operator(d: DimLike) -> Operator:
    dim = as_dim(d)
    total = Operator(np.zeros((dim.d ** 2, dim.d ** 2), dtype=complex))
    for j, vector in zip(all_lines(dim), alice_control_basis(dim)):
        total = total + outer(vector, vector).scaled(control_label(j))
    return total


def infer_king_outcome(b: BasisLabel, control: Line) -> InferredOutcome:
    """m = m₀'' + (b/2)(2m̈' - 1), or m̈' for the CB."""
    return InferredOutcome(line_row(control, b))


def infer_king_basis(prepared: Line, control: Line, sign: int = TRACKING_SIGN) -> InferenceResult:
    if control == prepared:
        return Undetermined()
    if control.m_ddot == prepared.m_ddot:
        return InferredBasis(CB)
    b = mod_div(control.m0 - prepared.m0, prepared.m_ddot - control.m_ddot)
    return InferredBasis(Shifted(b * sign))


def _prepared_state(dim: PrimeDim, prepared: Optional[Line]) -> Ket:
    if prepared is None:
        return balance_state(dim).vector.normalized()
    if prepared.dim != dim:
        raise InvalidLabelError(f"line {prepared} is not a line of d={dim.d}")
    return line_state(dim, prepared).vector


def _check_basis_label(dim: PrimeDim, b: BasisLabel) -> None:
    if is_cb(b):
        return
    if not isinstance(b, Shifted) or b.b.dim != dim:
        raise InvalidLabelError(f"{b!r} is not a basis label of d={dim.d}")


def _infer(variant: Variant, prepared: Optional[Line], b: BasisLabel, control: Line) -> InferenceResult:
    if variant is Variant.MKP:
        return infer_king_outcome(b, control)
    return infer_king_basis(prepared, control)


def _run(
    dim: PrimeDim,
    variant: Variant,
    prepared: Optional[Line],
    b: BasisLabel,
    mode: Mode,
    tol: Optional[float] = None,
) -> List[Transcript]:
    tol = default_tolerance() if tol is None else tol
    _check_basis_label(dim, b)
    state = _prepared_state(dim, prepared)
    king_basis = mub_basis(dim, b)
    lines, control_basis = _control_setup(dim.d)
    transcripts = []

    def record(king_index, control_index, probability=None, probabilities=None):
        control = lines[control_index]
        return Transcript(
            dim=dim,
            variant=variant,
            prepared=prepared,
            king_basis=b,
            king_outcome=dim.residue(king_index),
            control_outcome=control,
            inference=_infer(variant, prepared, b, control),
            probability=probability,
            probabilities=probabilities,
        )

    if isinstance(mode, Exhaustive):
        for king in measure_first_particle(state, king_basis, tol=tol):
            if king.probability <= tol:
                continue
            control = measure_in_basis(king.post_state, control_basis, tol=tol)
            support = {lines[o.index]: o.probability for o in control if o.probability > tol}
            for o in control:
                if o.probability > tol:
                    transcripts.append(
                        record(king.index, o.index, king.probability * o.probability, support)
                    )
    else:
        for t in range(mode.offset, mode.offset + mode.trials):
            rng = round_rng(mode.seed, t)
            king = measure_first_particle(state, king_basis, rng, tol=tol)[0]
            control = measure_in_basis(king.post_state, control_basis, rng, tol=tol)[0]
            transcripts.append(record(king.index, control.index))

    logger.debug(
        "%s d=%d b=%s prepared=%s: %d transcripts",
        variant.value, dim.d, b, prepared, len(transcripts),
    )
    return transcripts


def run_mkp(d: DimLike, b: BasisLabel, mode: Mode = Exhaustive(), tol: Optional[float] = None) -> List[Transcript]:
    return _run(as_dim(d), Variant.MKP, None, b, mode, tol)


def run_tracking(
    d: DimLike, j: Line, b: BasisLabel, mode: Mode = Exhaustive(), tol: Optional[float] = None
) -> List[Transcript]:
    if not isinstance(j, Line):
        raise InvalidLabelError(f"{j!r} is not a line")
    return _run(as_dim(d), Variant.TRACKING, j, b, mode, tol)


def verify_reset(d: DimLike, transcript: Transcript, tol: Optional[float] = None) -> bool:
    """Replay the branch through the measurement engine.

    True when both recorded outcomes are reachable and the state the control
    measurement leaves behind is the outcome line's state.
    """
    tol = default_tolerance() if tol is None else tol
    dim = as_dim(d)
    state = _prepared_state(dim, transcript.prepared)
    king = measure_first_particle(state, mub_basis(dim, transcript.king_basis), tol=tol)
    after_king = king[transcript.king_outcome.value]
    if after_king.probability <= tol:
        return False
    control = measure_in_basis(after_king.post_state, alice_control_basis(dim), tol=tol)
    after_control = control[control_label(transcript.control_outcome)]
    if after_control.probability <= tol:
        return False
    target = line_state(dim, transcript.control_outcome).vector
    return abs(fidelity(target, after_control.post_state) - 1.0) <= tol


def tracking_support(d: DimLike, j: Line, b: BasisLabel, tol: Optional[float] = None) -> List[Line]:
    """Control outcomes the simulation reaches with nonzero probability."""
    seen = {t.control_outcome for t in run_tracking(d, j, b, Exhaustive(), tol)}
    return sorted(seen, key=control_label)


def expected_tracking_support(d: DimLike, j: Line, b: BasisLabel) -> List[Line]:
    """The d lines through the prepared line's point in column b."""
    return sorted(lines_through_point(d, Point(line_row(j, b), b)), key=control_label)


def resolve_tracking_sign(d: DimLike, tol: Optional[float] = None) -> int:
    """Decide the sign of the tracking constraint from the quantum simulation.

    Returns +1 if every reachable (j, j', b) satisfies m₀''-m₀ = b(m̈-m̈'),
    -1 if every one satisfies m₀''-m₀ = b(m̈'-m̈). Raises if neither does.
    """
    dim = as_dim(d)
    plus = minus = True
    for j in all_lines(dim):
        for b in all_basis_labels(dim)[1:]:
            for j2 in tracking_support(dim, j, b, tol):
                if j2.m_ddot == j.m_ddot:
                    continue
                lhs = j2.m0 - j.m0
                plus = plus and lhs == b.b * (j.m_ddot - j2.m_ddot)
                minus = minus and lhs == b.b * (j2.m_ddot - j.m_ddot)
    if plus and not minus:
        return 1
    if minus and not plus:
        return -1
    raise ArithmeticError(f"no consistent tracking sign for d={dim.d}")


def geometric_basis(prepared: Line, control: Line) -> BasisLabel:
    """Column of the point shared by the prepared and the outcome line."""
    return intersect_lines(prepared.dim, prepared, control).b


def run_channel(
    d: DimLike,
    message: Sequence[BasisLabel],
    initial_line: Line,
    seed: int,
    tol: Optional[float] = None,
) -> ChannelResult:
    """Send one basis symbol per round, each round starting from the last outcome line."""
    dim = as_dim(d)
    result = ChannelResult()
    line = initial_line
    for counter, symbol in enumerate(message):
        transcript = run_tracking(dim, line, symbol, Sampled(seed, trials=1, offset=counter), tol)[0]
        result.transcripts.append(transcript)
        inference = transcript.inference
        result.decoded.append(inference.b if isinstance(inference, InferredBasis) else inference)
        line = transcript.control_outcome
    erasures = sum(isinstance(x, Undetermined) for x in result.decoded)
    logger.info("channel d=%d: %d rounds, %d erasures", dim.d, len(message), erasures)
    return result


def random_message(d: DimLike, rounds: int, seed: int) -> List[BasisLabel]:
    labels = all_basis_labels(d)
    picks = message_rng(seed).integers(0, len(labels), size=rounds)
    return [labels[int(k)] for k in picks]


def _weights(transcripts: Sequence[Transcript]) -> List[float]:
    return [1.0 if t.probability is None else t.probability for t in transcripts]


def summarize_mkp(transcripts: Sequence[Transcript]) -> Dict[str, object]:
    weights = _weights(transcripts)
    total = sum(weights) or 1.0
    frequencies: Dict[int, float] = {}
    for t, w in zip(transcripts, weights):
        frequencies[t.king_outcome.value] = frequencies.get(t.king_outcome.value, 0.0) + w / total
    correct = sum(1 for t in transcripts if t.correct)
    return {
        "branches": len(transcripts),
        "accuracy": correct / len(transcripts) if transcripts else 0.0,
        "outcome_frequencies": {str(k): round(v, 12) for k, v in sorted(frequencies.items())},
    }


def summarize_tracking(transcripts: Sequence[Transcript]) -> Dict[str, object]:
    weights = _weights(transcripts)
    total = sum(weights) or 1.0
    decoded = [t for t in transcripts if t.correct is not None]
    erased = sum(w for t, w in zip(transcripts, weights) if t.correct is None)
    correct = sum(1 for t in decoded if t.correct)
    return {
        "branches": len(transcripts),
        "decode_accuracy": correct / len(decoded) if decoded else 0.0,
        "erasure_fraction": round(erased / total, 12),
    }


def summarize_channel(message: Sequence[BasisLabel], result: ChannelResult) -> Dict[str, object]:
    rounds = len(message)
    erasures = sum(isinstance(x, Undetermined) for x in result.decoded)
    delivered = [(m, x) for m, x in zip(message, result.decoded) if not isinstance(x, Undetermined)]
    correct = sum(1 for m, x in delivered if m == x)
    return {
        "rounds": rounds,
        "erasures": erasures,
        "erasure_rate": erasures / rounds if rounds else 0.0,
        "decode_accuracy": correct / len(delivered) if delivered else 0.0,
    }
