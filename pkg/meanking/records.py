"""Wire formats: the Transcript JSON schema.

Field names are a stable contract. The CB basis label is spelled "dd0",
shifted bases are plain integers.
"""

from __future__ import annotations

from typing import Dict, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict

from meanking.mub import BasisLabel, render_basis_label
from meanking.protocol import (
    InferredBasis,
    InferredOutcome,
    Transcript,
    Undetermined,
)

BasisToken = Union[Literal["dd0"], int]


class LineRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    mddot: int
    m0: int


class ControlRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    mddot_prime: int
    m0_dprime: int


class InferenceRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["outcome", "basis", "undetermined"]
    value: Optional[BasisToken] = None


class TranscriptRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim: int
    variant: Literal["mkp", "tracking"]
    prepared: Union[LineRecord, Literal["balance"]]
    king_basis: BasisToken
    king_outcome: int
    control: ControlRecord
    inference: InferenceRecord
    probability: Optional[float] = None
    probabilities: Optional[Dict[str, float]] = None

    def to_json(self) -> str:
        return self.model_dump_json(exclude_none=True)


def inference_record(inference) -> InferenceRecord:
    if isinstance(inference, InferredOutcome):
        return InferenceRecord(kind="outcome", value=inference.m.value)
    if isinstance(inference, InferredBasis):
        return InferenceRecord(kind="basis", value=basis_token(inference.b))
    if isinstance(inference, Undetermined):
        return InferenceRecord(kind="undetermined")
    raise TypeError(f"unknown inference result: {inference!r}")


def basis_token(label: BasisLabel) -> BasisToken:
    return render_basis_label(label)


def transcript_record(t: Transcript) -> TranscriptRecord:
    prepared = (
        "balance"
        if t.prepared is None
        else LineRecord(mddot=t.prepared.m_ddot.value, m0=t.prepared.m0.value)
    )
    probabilities = None
    if t.probabilities is not None:
        probabilities = {
            f"{j.m_ddot.value},{j.m0.value}": round(p, 12)
            for j, p in sorted(t.probabilities.items(), key=lambda kv: (kv[0].m_ddot.value, kv[0].m0.value))
        }
    return TranscriptRecord(
        dim=t.dim.d,
        variant=t.variant.value,
        prepared=prepared,
        king_basis=basis_token(t.king_basis),
        king_outcome=t.king_outcome.value,
        control=ControlRecord(
            mddot_prime=t.control_outcome.m_ddot.value,
            m0_dprime=t.control_outcome.m0.value,
        ),
        inference=inference_record(t.inference),
        probability=None if t.probability is None else round(t.probability, 12),
        probabilities=probabilities,
    )
