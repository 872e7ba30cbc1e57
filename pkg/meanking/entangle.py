"""Two-particle states underpinned by the geometry.

A point (m, b) carries the product state |A> = |m,b>_1 |m~,b~>_2 and a line
j = (m̈, m₀) the maximally entangled state |P_j> = |m̈>_c |2m₀>_r.

Two line-vector conventions are kept apart:
- `line_state` is the unit vector used for every Born probability;
- `line_vector_raw` = sum of the line's point states minus the balance state,
  of norm sqrt(d), the one obeying the geometric sum identities exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from meanking.collective import collective_basis_state, embed_collective
from meanking.finitefield import DimLike, ModInt, as_dim
from meanking.geometry import (
    Line,
    Point,
    all_lines,
    all_points,
    column_points,
    line_points,
    line_row,
)
from meanking.mub import (
    CB,
    BasisLabel,
    MubIndex,
    Shifted,
    conjugate_label,
    inversion_operator,
    mub_state,
    pauli_x,
    pauli_z,
)
from meanking.qudit import Ket, Operator, apply, inner, outer, root_of_unity, tensor


@dataclass(frozen=True)
class PointState:
    point: Point
    vector: Ket


@dataclass(frozen=True)
class LineState:
    line: Line
    vector: Ket


@dataclass(frozen=True)
class BalanceState:
    vector: Ket


def _point_index(p: Point) -> MubIndex:
    return MubIndex(p.b, p.m)


def point_state(d: DimLike, p: Point) -> PointState:
    dim = as_dim(d)
    idx = _point_index(p)
    first = mub_state(dim, idx)
    second = mub_state(dim, conjugate_label(dim, idx))
    return PointState(point=p, vector=tensor(first, second))


def column_sum(d: DimLike, b: BasisLabel) -> Ket:
    """Sum of the point states of one column."""
    dim = as_dim(d)
    total = np.zeros(dim.d ** 2, dtype=complex)
    for p in column_points(dim, b):
        total += point_state(dim, p).vector.amplitudes
    return Ket(total)


def balance_state(d: DimLike) -> BalanceState:
    """sum_n |n>_1 |n>_2, identical to every column sum."""
    return _cached_balance(as_dim(d).d)


@lru_cache(maxsize=None)
def _cached_balance(d: int) -> BalanceState:
    dim = as_dim(d)
    total = np.zeros(dim.d ** 2, dtype=complex)
    for n in range(dim.d):
        total[n * dim.d + n] = 1.0
    return BalanceState(vector=Ket(total))


def line_state(d: DimLike, j: Line) -> LineState:
    """|m̈>_c |2m₀>_r, relative factor the b=0 MUB state with label 2m₀."""
    dim = as_dim(d)
    return LineState(line=j, vector=_cached_line_ket(dim.d, j.m_ddot.value, j.m0.value))


@lru_cache(maxsize=None)
def _cached_line_ket(d: int, m_ddot: int, m0: int) -> Ket:
    dim = as_dim(d)
    c_ket = collective_basis_state(dim, "c", CB, dim.residue(m_ddot))
    r_ket = collective_basis_state(dim, "r", Shifted(dim.residue(0)), dim.residue(2 * m0))
    return embed_collective(dim, c_ket, r_ket)


def line_state_basis(d: DimLike) -> List[LineState]:
    """All d² line states, ordered like `all_lines` (position m̈*d + m₀)."""
    return [line_state(d, j) for j in all_lines(d)]


def line_vector_raw(d: DimLike, j: Line) -> Ket:
    dim = as_dim(d)
    total = -balance_state(dim).vector.amplitudes
    for p in line_points(dim, j):
        total = total + point_state(dim, p).vector.amplitudes
    return Ket(total)


def line_state_weyl_form(d: DimLike, j: Line, b: BasisLabel = CB) -> Ket:
    """w^(2m̈m₀)/sqrt(d) sum_m |m,b>_1 X^(2m̈) Z^(2m₀) I |m~,b~>_2, for any basis b."""
    dim = as_dim(d)
    weyl = (
        pauli_x(dim).power((2 * j.m_ddot).value)
        @ pauli_z(dim).power((2 * j.m0).value)
        @ inversion_operator(dim)
    )
    total = np.zeros(dim.d ** 2, dtype=complex)
    for m in dim.residues():
        idx = MubIndex(b, m)
        partner = apply(weyl, mub_state(dim, conjugate_label(dim, idx)))
        total += tensor(mub_state(dim, idx), partner).amplitudes
    phase = root_of_unity(dim.d, (2 * j.m_ddot * j.m0).value)
    return Ket(total * phase / np.sqrt(dim.d))


def projector(d: DimLike, p: Point) -> Operator:
    """A_(m,b) = |m,b><b,m|"""
    state = mub_state(d, _point_index(p))
    return outer(state, state)


def line_operator(d: DimLike, j: Line) -> Operator:
    """P_j = sum of the line's point projectors minus the identity."""
    dim = as_dim(d)
    total = -np.eye(dim.d, dtype=complex)
    for p in line_points(dim, j):
        total = total + projector(dim, p).entries
    return Operator(total)


def line_operator_elements(d: DimLike, j: Line) -> Operator:
    """<n|P_j|n'> = delta(n+n', 2m̈) w^(-(n-n')m₀)."""
    dim = as_dim(d)
    entries = np.zeros((dim.d, dim.d), dtype=complex)
    for n in range(dim.d):
        n_prime = (2 * j.m_ddot.value - n) % dim.d
        entries[n, n_prime] = root_of_unity(dim.d, -(n - n_prime) * j.m0.value)
    return Operator(entries)


def overlap_point_line(d: DimLike, p: Point, j: Line) -> complex:
    return inner(point_state(d, p).vector, line_state(d, j).vector)


def single_particle_residue(
    d: DimLike, m: ModInt, b: BasisLabel, j: Line
) -> Tuple[Ket, complex]:
    """<b,m|_1 P_j>, a particle-2 vector of squared norm 1/d.

    The vector is phase/sqrt(d) times the conjugate of the MUB state
    (m̄ + Δ, b), m̄ the line's row in column b and Δ = m̄ - m. The phase is
    returned alongside.
    """
    dim = as_dim(d)
    bra = mub_state(dim, MubIndex(b, m))
    amplitudes = bra.amplitudes.conj() @ line_state(dim, j).vector.amplitudes.reshape(dim.d, dim.d)
    residue = Ket(amplitudes)
    target = mub_state(dim, residue_label(dim, m, b, j))
    phase = np.sqrt(dim.d) * inner(target, residue)
    return residue, complex(phase)


def residue_label(d: DimLike, m: ModInt, b: BasisLabel, j: Line) -> MubIndex:
    """Label of the particle-2 direction left by <b,m|_1 on |P_j>."""
    m_bar = line_row(j, b)
    delta = m_bar - m
    return conjugate_label(d, MubIndex(b, m_bar + delta))


def line_sum_identities(d: DimLike) -> Tuple[Ket, Ket]:
    """((1/d) sum_j raw(j), (1/(d+1)) sum_a |A_a>), both equal to the balance state."""
    dim = as_dim(d)
    lines_total = sum(
        (line_vector_raw(dim, j).amplitudes for j in all_lines(dim)),
        np.zeros(dim.d ** 2, dtype=complex),
    )
    points_total = sum(
        (point_state(dim, p).vector.amplitudes for p in all_points(dim)),
        np.zeros(dim.d ** 2, dtype=complex),
    )
    return Ket(lines_total / dim.d), Ket(points_total / (dim.d + 1))


def projector_column_sum(d: DimLike, b: BasisLabel) -> Operator:
    """sum_m A_(m,b); the identity for every column."""
    dim = as_dim(d)
    total = np.zeros((dim.d, dim.d), dtype=complex)
    for p in column_points(dim, b):
        total += projector(dim, p).entries
    return Operator(total)
