from typing import Any, Dict, List

import numpy as np

from meanking.checks.controller import SweepController
from meanking.checks.util_classes import (
    CheckDefinition,
    CheckRecord,
    CheckSpec,
    DIM_PARAMETERS,
    _result_error,
    within,
    records_result,
    suite_args,
)
from meanking.entangle import (
    balance_state,
    column_sum,
    line_operator,
    line_operator_elements,
    line_state,
    line_state_basis,
    line_state_weyl_form,
    line_sum_identities,
    line_vector_raw,
    overlap_point_line,
    point_state,
    projector_column_sum,
    single_particle_residue,
    residue_label,
)
from meanking.finitefield import PrimeDim
from meanking.geometry import all_lines, all_points, lines_through_point, on_line
from meanking.mub import all_basis_labels, mub_state
from meanking.qudit import basis_matrix, schmidt_coefficients


# -----------------------------------------------------------
# Suite: entangle
# -----------------------------------------------------------


def entangle_records(dim: PrimeDim, tol: float) -> List[CheckRecord]:
    d = dim.d
    suite = "entangle"
    out: List[CheckRecord] = []
    lines = all_lines(dim)
    points = all_points(dim)
    root = np.sqrt(d)

    cols = basis_matrix([s.vector for s in line_state_basis(dim)])
    out.append(within(suite, "line_states_orthonormal", d, np.max(np.abs(cols.conj().T @ cols - np.eye(d * d))), tol))

    schmidt = max(
        np.max(np.abs(schmidt_coefficients(line_state(dim, j).vector, d) - 1 / root)) for j in lines
    )
    out.append(within(suite, "line_states_maximally_entangled", d, schmidt, tol))

    overlap = max(
        abs(overlap_point_line(dim, p, j) - (1 / root if on_line(p, j) else 0.0))
        for p in points
        for j in lines
    )
    out.append(within(suite, "point_line_overlap", d, overlap, tol))

    balance = balance_state(dim).vector.amplitudes
    columns = max(np.max(np.abs(column_sum(dim, b).amplitudes - balance)) for b in all_basis_labels(dim))
    out.append(within(suite, "column_sums_equal_balance", d, columns, tol))

    raw = max(
        np.max(np.abs(line_vector_raw(dim, j).amplitudes - root * line_state(dim, j).vector.amplitudes))
        for j in lines
    )
    out.append(within(suite, "raw_line_vector_is_scaled_line_state", d, raw, tol))

    recovery = 0.0
    for p in points:
        total = sum(line_vector_raw(dim, j).amplitudes for j in lines_through_point(dim, p))
        recovery = max(recovery, np.max(np.abs(total / d - point_state(dim, p).vector.amplitudes)))
    out.append(within(suite, "points_recovered_from_lines", d, recovery, tol))

    elements = algebra = matrix_form = 0.0
    eye = np.eye(d)
    for j in lines:
        op = line_operator(dim, j).entries
        elements = max(elements, np.max(np.abs(op - line_operator_elements(dim, j).entries)))
        algebra = max(algebra, np.max(np.abs(op @ op - eye)), np.max(np.abs(op - op.conj().T)))
        matrix_form = max(matrix_form, np.max(np.abs(line_vector_raw(dim, j).amplitudes.reshape(d, d) - op)))
    out.append(within(suite, "line_operator_elements", d, elements, tol))
    out.append(within(suite, "line_operator_hermitian_involution", d, algebra, tol))
    out.append(within(suite, "raw_line_vector_matrix_is_line_operator", d, matrix_form, tol))

    # tr(P_j P_j') = d delta(j, j')
    ops = [line_operator(dim, j) for j in lines]
    trace = max(
        abs((a @ b).trace() - (d if x == y else 0))
        for x, a in enumerate(ops)
        for y, b in enumerate(ops)
    )
    out.append(within(suite, "line_operator_trace_orthogonality", d, trace, tol))

    residue = 0.0
    for j in lines:
        for p in points:
            vector, phase = single_particle_residue(dim, p.m, p.b, j)
            target = mub_state(dim, residue_label(dim, p.m, p.b, j)).amplitudes
            residue = max(
                residue,
                abs(vector.norm() ** 2 - 1 / d),
                abs(abs(phase) - 1),
                np.max(np.abs(vector.amplitudes - phase / root * target)),
            )
    out.append(within(suite, "single_particle_residue_direction", d, residue, tol))

    weyl = max(
        np.max(np.abs(line_state_weyl_form(dim, j, b).amplitudes - line_state(dim, j).vector.amplitudes))
        for j in lines
        for b in all_basis_labels(dim)
    )
    out.append(within(suite, "weyl_form_any_basis", d, weyl, tol))

    from_lines, from_points = line_sum_identities(dim)
    sums = max(np.max(np.abs(from_lines.amplitudes - balance)), np.max(np.abs(from_points.amplitudes - balance)))
    out.append(within(suite, "line_and_point_sums_equal_balance", d, sums, tol))

    resolution = max(
        np.max(np.abs(projector_column_sum(dim, b).entries - eye)) for b in all_basis_labels(dim)
    )
    out.append(within(suite, "column_projectors_resolve_identity", d, resolution, tol))
    return out


def check_entangle(_controller: SweepController, args: Dict[str, Any]) -> Dict[str, Any]:
    try:
        dim, tol = suite_args(args)
        return records_result(entangle_records(dim, tol))
    except Exception as e:
        return _result_error(e)


_STATE_CHECK_SPECS = {
    "entangle": CheckSpec(
        name="entangle",
        description="Point, balance and line states: orthonormality, entanglement, overlaps and sum identities.",
        parameters=DIM_PARAMETERS,
    ),
}

state_checks = [
    CheckDefinition("entangle", check_entangle, _STATE_CHECK_SPECS["entangle"]),
]
