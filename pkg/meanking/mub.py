"""The d+1 mutually unbiased bases of a prime-dimension qudit.

Besides the computational basis (label CB, spelled `dd0`) there are d bases
b = 0..d-1 with amplitudes

    <n|m;b> = d^(-1/2) * w^((b/2) n(n-1) - n m),    w = e^(2 pi i / d)

where the exponent is evaluated exactly mod d before exponentiating.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Union

import numpy as np

from meanking.config import default_tolerance
from meanking.errors import InvalidLabelError
from meanking.finitefield import DimLike, ModInt, as_dim
from meanking.qudit import Ket, Operator, basis_ket, inner, outer, root_of_unity

CB_TOKEN = "dd0"


@dataclass(frozen=True)
class ComputationalBasis:
    """The computational basis. The label has no numerical meaning."""

    def __str__(self) -> str:
        return CB_TOKEN


@dataclass(frozen=True)
class Shifted:
    b: ModInt

    def __str__(self) -> str:
        return str(self.b.value)


CB = ComputationalBasis()

BasisLabel = Union[ComputationalBasis, Shifted]


def is_cb(label: BasisLabel) -> bool:
    return isinstance(label, ComputationalBasis)


@dataclass(frozen=True)
class MubIndex:
    b: BasisLabel
    m: ModInt


def shifted(d: DimLike, b: int) -> Shifted:
    return Shifted(as_dim(d).residue(b))


def all_basis_labels(d: DimLike) -> List[BasisLabel]:
    """CB first, then b = 0..d-1 (left to right columns)."""
    dim = as_dim(d)
    return [CB] + [Shifted(b) for b in dim.residues()]


def parse_basis_label(text: Union[str, int], d: DimLike) -> BasisLabel:
    dim = as_dim(d)
    token = str(text).strip()
    if token == CB_TOKEN:
        return CB
    try:
        value = int(token)
    except ValueError:
        raise InvalidLabelError(f"basis label must be '{CB_TOKEN}' or an integer, got {text!r}")
    if not 0 <= value < dim.d:
        raise InvalidLabelError(f"basis label {value} out of range for d={dim.d}")
    return Shifted(dim.residue(value))


def render_basis_label(label: BasisLabel) -> Union[str, int]:
    return CB_TOKEN if is_cb(label) else label.b.value


def _mub_amplitudes(d: int, b: Optional[int], m: int) -> np.ndarray:
    if b is None:
        return basis_ket(d, m).amplitudes
    h = (d + 1) // 2
    n = np.arange(d)
    exponents = (h * b * n * (n - 1) - n * m) % d
    return np.exp(2j * np.pi * exponents / d) / np.sqrt(d)


@lru_cache(maxsize=None)
def _cached_state(d: int, b: Optional[int], m: int) -> Ket:
    return Ket(_mub_amplitudes(d, b, m))


def _raw_b(label: BasisLabel) -> Optional[int]:
    return None if is_cb(label) else label.b.value


def mub_state(d: DimLike, idx: MubIndex) -> Ket:
    dim = as_dim(d)
    return _cached_state(dim.d, _raw_b(idx.b), idx.m.value)


def mub_basis(d: DimLike, label: BasisLabel) -> List[Ket]:
    """The d states of one basis, ordered by m."""
    dim = as_dim(d)
    return [mub_state(dim, MubIndex(label, m)) for m in dim.residues()]


def all_mub_bases(d: DimLike) -> List[List[Ket]]:
    return [mub_basis(d, label) for label in all_basis_labels(d)]


def pauli_z(d: DimLike) -> Operator:
    dim = as_dim(d)
    return Operator(np.diag([root_of_unity(dim.d, n) for n in range(dim.d)]))


def pauli_x(d: DimLike) -> Operator:
    """Cyclic shift X|n> = |n+1>."""
    dim = as_dim(d)
    return Operator(np.roll(np.eye(dim.d, dtype=complex), 1, axis=0))


def basis_operator(d: DimLike, label: BasisLabel) -> Operator:
    """The unitary whose eigenbasis is `label`: Z for CB, X Z^b otherwise."""
    dim = as_dim(d)
    if is_cb(label):
        return pauli_z(dim)
    return pauli_x(dim) @ pauli_z(dim).power(label.b.value)


def conjugate_label(d: DimLike, idx: MubIndex) -> MubIndex:
    """(m, b) -> (-m, -b); the CB is its own conjugate."""
    if is_cb(idx.b):
        return idx
    return MubIndex(Shifted(-idx.b.b), -idx.m)


def inversion_operator(d: DimLike) -> Operator:
    """I|n> = |-n>"""
    dim = as_dim(d)
    entries = np.zeros((dim.d, dim.d), dtype=complex)
    for n in range(dim.d):
        entries[(-n) % dim.d, n] = 1.0
    return Operator(entries)


def king_eigenvalue(m: ModInt) -> complex:
    return root_of_unity(m.dim.d, m.value)


def king_operator(d: DimLike, b: BasisLabel) -> Operator:
    """K_b = sum_m |m,b> w^m <b,m|, non-degenerate."""
    dim = as_dim(d)
    total = Operator(np.zeros((dim.d, dim.d), dtype=complex))
    for m in dim.residues():
        state = mub_state(dim, MubIndex(b, m))
        total = total + outer(state, state).scaled(king_eigenvalue(m))
    return total


def verify_unbiased(
    basis1: Sequence[Ket], basis2: Sequence[Ket], tol: Optional[float] = None
) -> bool:
    tol = default_tolerance() if tol is None else tol
    d = basis1[0].dim
    target = 1.0 / np.sqrt(d)
    return all(abs(abs(inner(u, v)) - target) <= tol for u in basis1 for v in basis2)


def all_pairs_unbiased(d: DimLike, tol: Optional[float] = None) -> bool:
    bases = all_mub_bases(d)
    return all(verify_unbiased(x, y, tol) for x, y in combinations(bases, 2))
