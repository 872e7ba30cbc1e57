"""Center-of-mass (c) and relative (r) coordinates of two qudits.

    n_r = (n1 - n2)/2,  n_c = (n1 + n2)/2   <->   n1 = n_r + n_c,  n2 = n_c - n_r

Vectors always live in particle storage (index n1*d + n2). The collective
labelling is a view through `particle_to_collective_map`, whose target
ordering is c-major: index n_c*d + n_r.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Literal, NamedTuple

import numpy as np

from meanking.finitefield import DimLike, ModInt, PrimeDim, as_dim, mod_half
from meanking.mub import BasisLabel, MubIndex, mub_state, pauli_x, pauli_z
from meanking.qudit import Ket, Operator

Mode = Literal["r", "c"]


@dataclass(frozen=True)
class CollectiveIndex:
    n_r: ModInt
    n_c: ModInt

    @classmethod
    def from_particles(cls, n1: ModInt, n2: ModInt) -> "CollectiveIndex":
        return cls(n_r=mod_half(n1 - n2), n_c=mod_half(n1 + n2))

    def to_particles(self) -> tuple:
        return self.n_r + self.n_c, self.n_c - self.n_r

    def storage_index(self) -> int:
        """Position in c-major collective ordering."""
        return self.n_c.value * self.n_c.dim.d + self.n_r.value


class CollectiveOperators(NamedTuple):
    z_r: Operator
    z_c: Operator
    x_r: Operator
    x_c: Operator


def collective_operators(d: DimLike) -> CollectiveOperators:
    """Z_r = Z1^(1/2) Z2^(-1/2), Z_c = Z1^(1/2) Z2^(1/2), X_r = X1 X2^-1, X_c = X1 X2."""
    dim = as_dim(d)
    h = dim.half_unit
    z, x = pauli_z(dim), pauli_x(dim)
    eye = Operator.identity(dim.d)
    z1, z2 = z.kron(eye), eye.kron(z)
    x1, x2 = x.kron(eye), eye.kron(x)
    return CollectiveOperators(
        z_r=z1.power(h) @ z2.power(dim.d - h),
        z_c=z1.power(h) @ z2.power(h),
        x_r=x1 @ x2.power(dim.d - 1),
        x_c=x1 @ x2,
    )


def particle_to_collective_map(d: DimLike) -> Operator:
    """Permutation taking |n1,n2> (particle storage) to |n_c,n_r> (c-major)."""
    return _permutation(as_dim(d).d)


@lru_cache(maxsize=None)
def _permutation(d: int) -> Operator:
    dim = PrimeDim(d)
    entries = np.zeros((dim.d ** 2, dim.d ** 2), dtype=complex)
    for n1 in dim.residues():
        for n2 in dim.residues():
            target = CollectiveIndex.from_particles(n1, n2).storage_index()
            entries[target, n1.value * dim.d + n2.value] = 1.0
    return Operator(entries)


def collective_basis_state(d: DimLike, mode: Mode, b_s: BasisLabel, m_s: ModInt) -> Ket:
    """Single-mode MUB state; `mode` only says which collective mode it describes."""
    if mode not in ("r", "c"):
        raise ValueError(f"mode must be 'r' or 'c', got {mode!r}")
    return mub_state(d, MubIndex(b_s, m_s))


def embed_collective(d: DimLike, c_ket: Ket, r_ket: Ket) -> Ket:
    """The product |x>_c |y>_r written in particle storage."""
    dim = as_dim(d)
    product = np.kron(c_ket.amplitudes, r_ket.amplitudes)
    perm = particle_to_collective_map(dim).entries.real
    return Ket(perm.T @ product)
