from itertools import combinations
from typing import Any, Dict, List

import numpy as np

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
from meanking.collective import (
    CollectiveIndex,
    collective_operators,
    embed_collective,
    particle_to_collective_map,
)
from meanking.finitefield import PrimeDim, mod_half, mod_inv
from meanking.mub import (
    MubIndex,
    all_basis_labels,
    all_mub_bases,
    basis_operator,
    conjugate_label,
    inversion_operator,
    king_eigenvalue,
    king_operator,
    mub_state,
    pauli_x,
    pauli_z,
    verify_unbiased,
)
from meanking.qudit import Operator, apply, basis_ket, basis_matrix, root_of_unity


def _dev(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


# -----------------------------------------------------------
# Suite: mub
# -----------------------------------------------------------


def mub_records(dim: PrimeDim, tol: float) -> List[CheckRecord]:
    d = dim.d
    out: List[CheckRecord] = []
    suite = "mub"

    inverses_ok = all((a * mod_inv(a)).value == 1 for a in dim.residues() if a.value)
    out.append(record(suite, "modular_inverse_exhaustive", d, True, inverses_ok))
    halves_ok = all(mod_half(a) + mod_half(a) == a for a in dim.residues())
    out.append(record(suite, "modular_half_doubles_back", d, True, halves_ok))

    bases = all_mub_bases(dim)
    out.append(record(suite, "basis_count", d, d + 1, len(bases)))
    gram = max(_dev(basis_matrix(B).conj().T @ basis_matrix(B), np.eye(d)) for B in bases)
    out.append(within(suite, "bases_orthonormal", d, gram, tol))

    target = 1 / np.sqrt(d)
    worst = max(
        abs(abs(np.vdot(u.amplitudes, v.amplitudes)) - target)
        for x, y in combinations(bases, 2)
        for u in x
        for v in y
    )
    out.append(within(suite, "all_pairs_unbiased", d, worst, tol))
    out.append(record(suite, "basis_not_unbiased_with_itself", d, False, verify_unbiased(bases[1], bases[1], tol)))

    conj = 0.0
    for label in all_basis_labels(dim):
        for m in dim.residues():
            idx = MubIndex(label, m)
            conj = max(conj, _dev(mub_state(dim, idx).conj().amplitudes,
                                  mub_state(dim, conjugate_label(dim, idx)).amplitudes))
    out.append(within(suite, "conjugation_closure", d, conj, tol))

    z, x = pauli_z(dim), pauli_x(dim)
    w = root_of_unity(d, 1)
    out.append(within(suite, "weyl_commutation_zx_eq_w_xz", d, _dev((z @ x).entries, w * (x @ z).entries), tol))
    eye = np.eye(d)
    out.append(within(suite, "x_z_order_d", d, max(_dev(x.power(d).entries, eye), _dev(z.power(d).entries, eye)), tol))

    eig = 0.0
    for label in all_basis_labels(dim):
        op = basis_operator(dim, label)
        king = king_operator(dim, label)
        for m in dim.residues():
            state = mub_state(dim, MubIndex(label, m))
            eig = max(eig, _dev(apply(op, state).amplitudes, root_of_unity(d, m.value) * state.amplitudes))
            eig = max(eig, _dev(apply(king, state).amplitudes, king_eigenvalue(m) * state.amplitudes))
    out.append(within(suite, "basis_and_king_eigenrelations", d, eig, tol))
    eigenvalues = {round(king_eigenvalue(m).real, 9) + 1j * round(king_eigenvalue(m).imag, 9) for m in dim.residues()}
    out.append(record(suite, "king_nondegenerate", d, d, len(eigenvalues)))

    inv = inversion_operator(dim)
    out.append(within(suite, "inversion_involutive", d, _dev((inv @ inv).entries, eye), tol))
    return out


def check_mub(_controller: SweepController, args: Dict[str, Any]) -> Dict[str, Any]:
    try:
        dim, tol = suite_args(args)
        return records_result(mub_records(dim, tol))
    except Exception as e:
        return _result_error(e)


# -----------------------------------------------------------
# Suite: collective
# -----------------------------------------------------------


def collective_records(dim: PrimeDim, tol: float) -> List[CheckRecord]:
    d = dim.d
    out: List[CheckRecord] = []
    suite = "collective"
    ops = collective_operators(dim)
    w = root_of_unity(d, 1)
    eye = np.eye(d * d)

    comm = max(
        _dev((ops.z_r @ ops.x_r).entries, w * (ops.x_r @ ops.z_r).entries),
        _dev((ops.z_c @ ops.x_c).entries, w * (ops.x_c @ ops.z_c).entries),
    )
    out.append(within(suite, "mode_weyl_commutation", d, comm, tol))
    cross = max(
        _dev((ops.x_r @ ops.z_c).entries, (ops.z_c @ ops.x_r).entries),
        _dev((ops.x_c @ ops.z_r).entries, (ops.z_r @ ops.x_c).entries),
    )
    out.append(within(suite, "modes_cross_commute", d, cross, tol))
    order = max(_dev(op.power(d).entries, eye) for op in ops)
    out.append(within(suite, "collective_order_d", d, order, tol))
    out.append(record(suite, "collective_unitary", d, True, all(op.is_unitary(tol) for op in ops)))

    perm = particle_to_collective_map(dim)
    out.append(record(suite, "map_is_unitary_permutation", d, True, perm.is_unitary(tol)))
    z = pauli_z(dim)
    ident = Operator.identity(d)
    z1, z2 = z.kron(ident), ident.kron(z)
    # collective ordering is c-major: c acts on the first factor
    conj1 = perm @ z1 @ perm.dagger()
    conj2 = perm @ z2 @ perm.dagger()
    dev = max(_dev(conj1.entries, z.kron(z).entries), _dev(conj2.entries, z.kron(z.power(-1)).entries))
    out.append(within(suite, "map_conjugates_particle_clocks", d, dev, tol))

    delta_ok = True
    for n1 in dim.residues():
        for n2 in dim.residues():
            idx = CollectiveIndex.from_particles(n1, n2)
            delta_ok = delta_ok and idx.to_particles() == (n1, n2)
            delta_ok = delta_ok and bool(perm.entries[idx.storage_index(), n1.value * d + n2.value] == 1)
    out.append(record(suite, "particle_collective_roundtrip", d, True, delta_ok))

    products = [
        embed_collective(dim, basis_ket(d, c), basis_ket(d, r)).amplitudes
        for c in range(d)
        for r in range(d)
    ]
    cols = np.column_stack(products)
    out.append(within(suite, "collective_products_orthonormal", d, _dev(cols.conj().T @ cols, eye), tol))
    return out


def check_collective(_controller: SweepController, args: Dict[str, Any]) -> Dict[str, Any]:
    try:
        dim, tol = suite_args(args)
        return records_result(collective_records(dim, tol))
    except Exception as e:
        return _result_error(e)


_ALGEBRA_CHECK_SPECS = {
    "mub": CheckSpec(
        name="mub",
        description="Orthonormality and mutual unbiasedness of the d+1 bases, Weyl pair, conjugation, King operator.",
        parameters=DIM_PARAMETERS,
    ),
    "collective": CheckSpec(
        name="collective",
        description="Center-of-mass and relative operators and the particle/collective change of basis.",
        parameters=DIM_PARAMETERS,
    ),
}

algebra_checks = [
    CheckDefinition("mub", check_mub, _ALGEBRA_CHECK_SPECS["mub"]),
    CheckDefinition("collective", check_collective, _ALGEBRA_CHECK_SPECS["collective"]),
]
