from typing import Any, Dict, List, Tuple

from meanking.checks.controller import SweepController
from meanking.checks.util_classes import (
    CheckDefinition,
    CheckRecord,
    CheckSpec,
    DIM_PARAMETERS,
    _result_error,
    record,
    records_result,
    suite_args,
    within,
)
from meanking.finitefield import PrimeDim
from meanking.geometry import Line, all_lines
from meanking.mub import BasisLabel, all_basis_labels
from meanking.protocol import (
    TRACKING_SIGN,
    Exhaustive,
    InferredBasis,
    Undetermined,
    expected_tracking_support,
    geometric_basis,
    resolve_tracking_sign,
    run_mkp,
    run_tracking,
    verify_reset,
)


# -----------------------------------------------------------
# Helpers
# -----------------------------------------------------------


def _king_deviation(dim: PrimeDim, transcripts) -> float:
    """Largest gap between a King outcome's total probability and 1/d."""
    totals = {m: 0.0 for m in range(dim.d)}
    for t in transcripts:
        totals[t.king_outcome.value] += t.probability
    return max(abs(p - 1 / dim.d) for p in totals.values())


def _mkp_job(job: Tuple[PrimeDim, BasisLabel, float]) -> Dict[str, Any]:
    dim, b, tol = job
    transcripts = run_mkp(dim, b, Exhaustive(), tol)
    return {
        "branches": len(transcripts),
        "correct": all(t.correct for t in transcripts),
        "branch_probability": max(abs(t.probability - 1 / dim.d ** 2) for t in transcripts),
        "king": _king_deviation(dim, transcripts),
        "reset": all(verify_reset(dim, t, tol) for t in transcripts),
    }


def _tracking_job(job: Tuple[PrimeDim, Line, BasisLabel, float]) -> Dict[str, Any]:
    dim, j, b, tol = job
    transcripts = run_tracking(dim, j, b, Exhaustive(), tol)
    decoded = [t for t in transcripts if isinstance(t.inference, InferredBasis)]
    erased = sum(t.probability for t in transcripts if isinstance(t.inference, Undetermined))
    support = sorted({t.control_outcome for t in transcripts}, key=lambda x: (x.m_ddot.value, x.m0.value))
    expected = sorted(expected_tracking_support(dim, j, b), key=lambda x: (x.m_ddot.value, x.m0.value))
    return {
        "correct": all(t.correct for t in decoded),
        "geometric": all(geometric_basis(j, t.control_outcome) == t.inference.b for t in decoded),
        "undetermined": abs(erased - 1 / dim.d),
        "king": _king_deviation(dim, transcripts),
        "support": support == expected,
        "reset": all(verify_reset(dim, t, tol) for t in transcripts),
    }


# -----------------------------------------------------------
# Suite: protocol
# -----------------------------------------------------------


def protocol_records(_controller: SweepController, dim: PrimeDim, tol: float) -> List[CheckRecord]:
    d = dim.d
    suite = "protocol"
    out: List[CheckRecord] = []
    labels = all_basis_labels(dim)

    mkp = _controller.map(_mkp_job, [(dim, b, tol) for b in labels], desc=f"mkp d={d}")
    out.append(record(suite, "mkp_branches_per_basis", d, [d * d], sorted({r["branches"] for r in mkp})))
    out.append(record(suite, "mkp_always_correct", d, True, all(r["correct"] for r in mkp)))
    out.append(within(suite, "mkp_branch_probability", d, max(r["branch_probability"] for r in mkp), tol))
    out.append(within(suite, "mkp_king_uniform", d, max(r["king"] for r in mkp), tol))
    out.append(record(suite, "mkp_reset", d, True, all(r["reset"] for r in mkp)))

    jobs = [(dim, j, b, tol) for j in all_lines(dim) for b in labels]
    tracking = _controller.map(_tracking_job, jobs, desc=f"tracking d={d}")
    out.append(record(suite, "tracking_decodes_correctly", d, True, all(r["correct"] for r in tracking)))
    out.append(record(suite, "tracking_matches_geometry", d, True, all(r["geometric"] for r in tracking)))
    out.append(within(suite, "tracking_undetermined_one_over_d", d, max(r["undetermined"] for r in tracking), tol))
    out.append(within(suite, "tracking_king_uniform", d, max(r["king"] for r in tracking), tol))
    out.append(record(suite, "tracking_support_is_pencil", d, True, all(r["support"] for r in tracking)))
    out.append(record(suite, "tracking_reset", d, True, all(r["reset"] for r in tracking)))

    try:
        sign = resolve_tracking_sign(dim, tol)
    except ArithmeticError as e:
        sign = str(e)
    out.append(record(suite, "tracking_sign", d, TRACKING_SIGN, sign))
    return out


def check_protocol(_controller: SweepController, args: Dict[str, Any]) -> Dict[str, Any]:
    try:
        dim, tol = suite_args(args)
        return records_result(protocol_records(_controller, dim, tol))
    except Exception as e:
        return _result_error(e)


_PROTOCOL_CHECK_SPECS = {
    "protocol": CheckSpec(
        name="protocol",
        description="Exhaustive Mean King and tracking runs for every line and King basis.",
        parameters=DIM_PARAMETERS,
    ),
}

protocol_checks = [
    CheckDefinition("protocol", check_protocol, _PROTOCOL_CHECK_SPECS["protocol"]),
]
