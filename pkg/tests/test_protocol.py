from dataclasses import replace

import numpy as np
import pytest

from meanking import protocol
from meanking.errors import InvalidLabelError
from meanking.finitefield import PrimeDim
from meanking.geometry import all_lines, make_line
from meanking.mub import CB, all_basis_labels, shifted
from meanking.protocol import (
    TRACKING_SIGN,
    Exhaustive,
    InferredBasis,
    InferredOutcome,
    Sampled,
    Undetermined,
    alice_control_basis,
    control_label,
    control_operator,
    expected_tracking_support,
    geometric_basis,
    infer_king_basis,
    infer_king_outcome,
    random_message,
    resolve_tracking_sign,
    run_channel,
    run_mkp,
    run_tracking,
    summarize_channel,
    summarize_mkp,
    summarize_tracking,
    tracking_support,
    verify_reset,
)

DIMS = [3, 5]


@pytest.mark.parametrize("d", DIMS)
def test_mkp_exhaustive_always_correct(d):
    for b in all_basis_labels(d):
        transcripts = run_mkp(d, b, Exhaustive())
        assert len(transcripts) == d * d
        assert all(t.correct for t in transcripts)
        assert sum(t.probability for t in transcripts) == pytest.approx(1.0)
        for t in transcripts:
            assert t.probability == pytest.approx(1 / d ** 2)
            assert isinstance(t.inference, InferredOutcome)


def test_mkp_d3_branch_count():
    total = sum(len({t.king_outcome for t in run_mkp(3, b)}) for b in all_basis_labels(3))
    assert total == 3 * (3 + 1)


def test_mkp_cb_control_mddot_equals_outcome():
    for t in run_mkp(3, CB):
        assert t.control_outcome.m_ddot == t.king_outcome


def test_mkp_control_distribution_given_king():
    d = 5
    for t in run_mkp(d, shifted(d, 3)):
        assert len(t.probabilities) == d
        for p in t.probabilities.values():
            assert p == pytest.approx(1 / d)


def test_mkp_sampled_is_reproducible_and_correct():
    first = run_mkp(3, CB, Sampled(seed=42, trials=100))
    second = run_mkp(3, CB, Sampled(seed=42, trials=100))
    assert [(t.king_outcome, t.control_outcome) for t in first] == [(t.king_outcome, t.control_outcome) for t in second]
    assert all(t.correct for t in first)
    assert summarize_mkp(first)["accuracy"] == 1.0


def test_sampled_offset_continues_the_stream():
    whole = run_mkp(5, shifted(5, 1), Sampled(seed=3, trials=10))
    tail = run_mkp(5, shifted(5, 1), Sampled(seed=3, trials=5, offset=5))
    assert [t.control_outcome for t in whole[5:]] == [t.control_outcome for t in tail]


@pytest.mark.parametrize("d", DIMS)
def test_tracking_exhaustive(d):
    for j in all_lines(d):
        for b in all_basis_labels(d):
            transcripts = run_tracking(d, j, b)
            erased = sum(t.probability for t in transcripts if isinstance(t.inference, Undetermined))
            assert erased == pytest.approx(1 / d)
            for t in transcripts:
                if isinstance(t.inference, InferredBasis):
                    assert t.inference.b == b
                    assert geometric_basis(j, t.control_outcome) == b


def test_tracking_example_d5():
    transcripts = run_tracking(5, make_line(5, 1, 2), shifted(5, 3))
    summary = summarize_tracking(transcripts)
    assert summary["decode_accuracy"] == 1.0
    assert summary["erasure_fraction"] == pytest.approx(1 / 5)


def test_tracking_cb_keeps_mddot():
    j = make_line(3, 0, 0)
    for t in run_tracking(3, j, CB):
        assert t.control_outcome.m_ddot.value == 0


@pytest.mark.parametrize("d", DIMS)
def test_tracking_king_outcomes_uniform(d):
    j = make_line(d, 1, 1)
    for b in all_basis_labels(d):
        totals = {}
        for t in run_tracking(d, j, b):
            totals[t.king_outcome.value] = totals.get(t.king_outcome.value, 0.0) + t.probability
        assert sorted(totals) == list(range(d))
        for p in totals.values():
            assert p == pytest.approx(1 / d)


@pytest.mark.parametrize("d", DIMS)
def test_tracking_support_is_pencil_through_line_point(d):
    for j in all_lines(d):
        for b in all_basis_labels(d):
            assert tracking_support(d, j, b) == expected_tracking_support(d, j, b)


def test_tracking_sign_resolved_by_simulation():
    assert resolve_tracking_sign(3) == TRACKING_SIGN
    assert resolve_tracking_sign(5) == TRACKING_SIGN


def test_opposite_sign_decodes_wrongly():
    d = 5
    j = make_line(d, 1, 2)
    decoded = [t for t in run_tracking(d, j, shifted(d, 3)) if isinstance(t.inference, InferredBasis)]
    assert decoded
    for t in decoded:
        assert infer_king_basis(j, t.control_outcome, -TRACKING_SIGN) == InferredBasis(shifted(d, 2))


def test_infer_king_basis_cases():
    d = 5
    j = make_line(d, 1, 2)
    assert isinstance(infer_king_basis(j, j), Undetermined)
    assert infer_king_basis(j, make_line(d, 1, 4)) == InferredBasis(CB)
    # b = (m0'' - m0) / (mddot - mddot')
    assert infer_king_basis(j, make_line(d, 4, 1)) == InferredBasis(shifted(d, 2))


def test_infer_king_outcome():
    d = 7
    control = make_line(d, 2, 3)
    assert infer_king_outcome(CB, control).m.value == 2
    assert infer_king_outcome(shifted(d, 0), control).m.value == 3


@pytest.mark.parametrize("d", [3])
def test_reset_on_every_branch(d):
    for b in all_basis_labels(d):
        for t in run_mkp(d, b):
            assert verify_reset(d, t)
        for j in all_lines(d):
            for t in run_tracking(d, j, b):
                assert verify_reset(d, t)


def test_reset_rejects_unreachable_control_outcome():
    d = 5
    j, b = make_line(d, 1, 2), shifted(d, 3)
    branch = run_tracking(d, j, b)[0]
    support = set(expected_tracking_support(d, j, b))
    for line in all_lines(d):
        forged = replace(branch, control_outcome=line)
        assert verify_reset(d, forged) == (line in support)


def test_reset_inspects_the_post_control_state(monkeypatch):
    d = 3
    basis = alice_control_basis(d)
    rotated = basis[1:] + basis[:1]
    transcripts = run_tracking(d, make_line(d, 1, 1), shifted(d, 2))
    assert all(verify_reset(d, t) for t in transcripts)
    monkeypatch.setattr(protocol, "alice_control_basis", lambda _: rotated)
    assert not any(verify_reset(d, t) for t in transcripts)




def test_control_operator_is_non_degenerate():
    d = 3
    op = control_operator(d)
    assert op.is_hermitian()
    eigenvalues = np.linalg.eigvalsh(op.entries)
    np.testing.assert_allclose(sorted(eigenvalues), range(d * d), atol=1e-9)
    assert [control_label(j) for j in all_lines(d)] == list(range(d * d))
    assert len(alice_control_basis(d)) == d * d


def test_run_tracking_rejects_foreign_line():
    with pytest.raises(InvalidLabelError):
        run_tracking(5, make_line(3, 0, 0), CB)
    with pytest.raises(InvalidLabelError):
        run_tracking(5, make_line(5, 0, 0), shifted(3, 1))


def test_channel_all_cb_message():
    d = 3
    message = [CB] * 50
    result = run_channel(d, message, make_line(d, 0, 0), seed=5)
    assert len(result.decoded) == 50
    assert all(x == CB or isinstance(x, Undetermined) for x in result.decoded)


def test_channel_chains_lines():
    d = 5
    message = random_message(d, 30, seed=1)
    result = run_channel(d, message, make_line(d, 0, 0), seed=1)
    for previous, current in zip(result.transcripts, result.transcripts[1:]):
        assert current.prepared == previous.control_outcome
    assert summarize_channel(message, result)["decode_accuracy"] == 1.0


def test_channel_erasure_rate_matches_one_over_d():
    d = 5
    rounds = 10_000
    message = random_message(d, rounds, seed=2024)
    result = run_channel(d, message, make_line(d, 0, 0), seed=2024)
    summary = summarize_channel(message, result)
    sigma = np.sqrt((1 / d) * (1 - 1 / d) / rounds)
    assert abs(summary["erasure_rate"] - 1 / d) < 3 * sigma
    assert summary["decode_accuracy"] == 1.0


def test_channel_is_reproducible():
    d = 3
    message = random_message(d, 40, seed=9)
    assert message == random_message(d, 40, seed=9)
    a = run_channel(d, message, make_line(d, 1, 2), seed=9)
    b = run_channel(d, message, make_line(d, 1, 2), seed=9)
    assert [t.control_outcome for t in a.transcripts] == [t.control_outcome for t in b.transcripts]


def test_summaries_on_exhaustive_runs():
    summary = summarize_mkp(run_mkp(PrimeDim(3), CB))
    assert summary["accuracy"] == 1.0
    for freq in summary["outcome_frequencies"].values():
        assert freq == pytest.approx(1 / 3)
