from typing import Any, Dict, List

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
)
from meanking.finitefield import PrimeDim
from meanking.geometry import (
    all_lines,
    all_points,
    audit_dapg,
    connected,
    incidence_rows,
    intersect_lines,
    line_points,
    on_line,
)


# -----------------------------------------------------------
# Suite: geometry
# -----------------------------------------------------------


def geometry_records(dim: PrimeDim) -> List[CheckRecord]:
    d = dim.d
    suite = "geometry"
    out = [
        CheckRecord(suite, r.name, d, r.expected, r.observed, r.passed)
        for r in audit_dapg(dim).records
    ]

    out.append(record(suite, "incidence_row_count", d, d * d * (d + 1), sum(1 for _ in incidence_rows(dim))))

    # every cross-column point pair is joined by a line containing both
    points = all_points(dim)
    joined = True
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            j = connected(dim, p, q)
            if p.b == q.b:
                joined = joined and j is None
            else:
                joined = joined and j is not None and on_line(p, j) and on_line(q, j)
    out.append(record(suite, "connected_matches_incidence", d, True, joined))

    lines = all_lines(dim)
    symmetric = all(
        intersect_lines(dim, a, c) == intersect_lines(dim, c, a)
        for i, a in enumerate(lines)
        for c in lines[i + 1:]
    )
    out.append(record(suite, "intersection_symmetric", d, True, symmetric))
    on_own = all(on_line(p, j) for j in lines for p in line_points(dim, j))
    out.append(record(suite, "line_points_lie_on_line", d, True, on_own))
    return out


def check_geometry(_controller: SweepController, args: Dict[str, Any]) -> Dict[str, Any]:
    try:
        dim, _tol = suite_args(args)
        return records_result(geometry_records(dim))
    except Exception as e:
        return _result_error(e)


_GEOMETRY_CHECK_SPECS = {
    "geometry": CheckSpec(
        name="geometry",
        description="Exhaustive audit of the dual affine plane: counts, incidence, intersections, columns.",
        parameters=DIM_PARAMETERS,
    ),
}

geometry_checks = [
    CheckDefinition("geometry", check_geometry, _GEOMETRY_CHECK_SPECS["geometry"]),
]
