"""Dense state vectors and operators for one qudit (dim d) or two (dim d²).

Two-qudit amplitudes use particle-1-major order: index = n1*d + n2.
Everything here is plain numpy; kets and operators are immutable wrappers.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

from meanking.config import default_tolerance
from meanking.errors import (
    DimensionMismatchError,
    IncompleteBasisError,
    NotNormalizedError,
)

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def _frozen(array, ndim: int) -> np.ndarray:
    out = np.array(array, dtype=complex)
    if out.ndim != ndim:
        raise DimensionMismatchError(f"expected a {ndim}-d array, got shape {out.shape}")
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Ket:
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes, 1))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.norm() - 1.0) <= tol

    def normalized(self) -> "Ket":
        n = self.norm()
        if n == 0:
            raise NotNormalizedError("cannot normalize the zero vector")
        return Ket(self.amplitudes / n)

    def conj(self) -> "Ket":
        """Componentwise conjugation in the computational basis (the map tau)."""
        return Ket(np.conj(self.amplitudes))

    def scaled(self, factor: complex) -> "Ket":
        return Ket(self.amplitudes * factor)

    def __add__(self, other: "Ket") -> "Ket":
        _check_dims(self.dim, other.dim)
        return Ket(self.amplitudes + other.amplitudes)

    def __sub__(self, other: "Ket") -> "Ket":
        _check_dims(self.dim, other.dim)
        return Ket(self.amplitudes - other.amplitudes)

    def allclose(self, other: "Ket", tol: Optional[float] = None) -> bool:
        tol = default_tolerance() if tol is None else tol
        return self.dim == other.dim and bool(
            np.allclose(self.amplitudes, other.amplitudes, rtol=0, atol=tol)
        )


@dataclass(frozen=True, eq=False)
class Operator:
    entries: np.ndarray

    def __post_init__(self):
        entries = _frozen(self.entries, 2)
        if entries.shape[0] != entries.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got {entries.shape}")
        object.__setattr__(self, "entries", entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "Operator":
        return cls(np.eye(dim, dtype=complex))

    def dagger(self) -> "Operator":
        return Operator(self.entries.conj().T)

    def __matmul__(self, other: "Operator") -> "Operator":
        _check_dims(self.dim, other.dim)
        return Operator(self.entries @ other.entries)

    def __add__(self, other: "Operator") -> "Operator":
        _check_dims(self.dim, other.dim)
        return Operator(self.entries + other.entries)

    def __sub__(self, other: "Operator") -> "Operator":
        _check_dims(self.dim, other.dim)
        return Operator(self.entries - other.entries)

    def scaled(self, factor: complex) -> "Operator":
        return Operator(self.entries * factor)

    def power(self, k: int) -> "Operator":
        if k < 0:
            return Operator(np.linalg.matrix_power(self.dagger().entries, -k))
        return Operator(np.linalg.matrix_power(self.entries, k))

    def kron(self, other: "Operator") -> "Operator":
        return Operator(np.kron(self.entries, other.entries))

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_unitary(self, tol: Optional[float] = None) -> bool:
        tol = default_tolerance() if tol is None else tol
        eye = np.eye(self.dim)
        return bool(np.allclose(self.entries @ self.entries.conj().T, eye, rtol=0, atol=tol))

    def is_hermitian(self, tol: Optional[float] = None) -> bool:
        tol = default_tolerance() if tol is None else tol
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0, atol=tol))

    def allclose(self, other: "Operator", tol: Optional[float] = None) -> bool:
        tol = default_tolerance() if tol is None else tol
        return self.dim == other.dim and bool(
            np.allclose(self.entries, other.entries, rtol=0, atol=tol)
        )


@dataclass(frozen=True)
class MeasurementOutcome:
    index: int
    probability: float
    post_state: Ket


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"dimension mismatch: {a} vs {b}")


def root_of_unity(d: int, k: int) -> complex:
    """e^{2 pi i k / d}, evaluated on the reduced exponent k mod d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return complex(np.exp(2j * np.pi * (k % d) / d))


def basis_ket(dim: int, index: int) -> Ket:
    v = np.zeros(dim, dtype=complex)
    v[index % dim] = 1.0
    return Ket(v)


def outer(a: Ket, b: Ket) -> Operator:
    """|a><b|"""
    return Operator(np.outer(a.amplitudes, np.conj(b.amplitudes)))


def tensor(a: Ket, b: Ket) -> Ket:
    return Ket(np.kron(a.amplitudes, b.amplitudes))


def inner(a: Ket, b: Ket) -> complex:
    """<a|b>, conjugate-linear in a."""
    _check_dims(a.dim, b.dim)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def apply(op: Operator, s: Ket) -> Ket:
    _check_dims(op.dim, s.dim)
    return Ket(op.entries @ s.amplitudes)


def fidelity(a: Ket, b: Ket) -> float:
    """|<a|b>|^2 for normalized kets."""
    return abs(inner(a, b)) ** 2


def basis_matrix(basis: Sequence[Ket]) -> np.ndarray:
    """Stack a basis as columns."""
    return np.column_stack([k.amplitudes for k in basis])


def check_basis(basis: Sequence[Ket], dim: int, tol: Optional[float] = None) -> np.ndarray:
    """Return the column matrix of `basis` after checking it is orthonormal and complete."""
    tol = default_tolerance() if tol is None else tol
    if len(basis) != dim:
        raise IncompleteBasisError(f"basis has {len(basis)} vectors, dimension is {dim}")
    for k in basis:
        _check_dims(k.dim, dim)
    cols = basis_matrix(basis)
    if not np.allclose(cols.conj().T @ cols, np.eye(dim), rtol=0, atol=tol):
        raise IncompleteBasisError("basis is not orthonormal")
    return cols


def schmidt_coefficients(s: Ket, d: int) -> np.ndarray:
    """Schmidt coefficients of a two-qudit state, descending."""
    if s.dim != d * d:
        raise DimensionMismatchError(f"expected dimension {d * d}, got {s.dim}")
    return np.linalg.svd(s.amplitudes.reshape(d, d), compute_uv=False)


def _pick(probabilities: np.ndarray, rng_seed: SeedLike) -> int:
    rng = np.random.default_rng(rng_seed)
    p = np.clip(probabilities, 0.0, None)
    return int(rng.choice(len(p), p=p / p.sum()))


def measure_in_basis(
    s: Ket,
    basis: Sequence[Ket],
    rng_seed: SeedLike = None,
    tol: Optional[float] = None,
) -> List[MeasurementOutcome]:
    """Born-rule projective measurement of `s` in an orthonormal basis.

    Without a seed every outcome is returned with its probability
    (exhaustive mode). With a seed (an int, a SeedSequence or a Generator)
    a single outcome is sampled and returned as a one-element list.
    """
    tol = default_tolerance() if tol is None else tol
    if not s.is_normalized(tol):
        raise NotNormalizedError(f"state has norm {s.norm():.12g}")
    cols = check_basis(basis, s.dim, tol)
    probabilities = np.abs(cols.conj().T @ s.amplitudes) ** 2
    outcomes = [
        MeasurementOutcome(index=k, probability=float(p), post_state=basis[k])
        for k, p in enumerate(probabilities)
    ]
    if rng_seed is None:
        return outcomes
    k = _pick(probabilities, rng_seed)
    logger.debug("sampled outcome %d with probability %.6f", k, probabilities[k])
    return [outcomes[k]]


def measure_first_particle(
    s: Ket,
    basis: Sequence[Ket],
    rng_seed: SeedLike = None,
    tol: Optional[float] = None,
) -> List[MeasurementOutcome]:
    """Measure particle 1 of a two-qudit state in a single-qudit basis.

    The post state of outcome k is basis[k] ⊗ (normalized particle-2 residue).
    Outcomes of zero probability carry basis[k] ⊗ 0 and are never sampled.
    """
    tol = default_tolerance() if tol is None else tol
    if not s.is_normalized(tol):
        raise NotNormalizedError(f"state has norm {s.norm():.12g}")
    d = len(basis)
    _check_dims(s.dim, d * d)
    cols = check_basis(basis, d, tol)
    # residues[k] = <basis_k|_1 s>
    residues = cols.conj().T @ s.amplitudes.reshape(d, d)
    probabilities = np.sum(np.abs(residues) ** 2, axis=1)
    outcomes = []
    for k in range(d):
        p = float(probabilities[k])
        rest = residues[k] / np.sqrt(p) if p > tol * tol else np.zeros(d, dtype=complex)
        outcomes.append(
            MeasurementOutcome(index=k, probability=p, post_state=Ket(np.kron(cols[:, k], rest)))
        )
    if rng_seed is None:
        return outcomes
    return [outcomes[_pick(probabilities, rng_seed)]]
