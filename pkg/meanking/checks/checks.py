"""Verification suites and their registry.

This module provides:
- modular suite definitions (mub, collective, geometry, entangle, protocol),
- `get_check_specs()` which returns JSON-schema-like metadata for each suite,
- `execute_check(name, args)` as the single entrypoint the CLI calls, and
- `run_suites(names, dims)` for sweeping several suites over several dimensions.

Every suite returns a JSON-serializable dict with `ok` and `result` or
`error`. A successful result carries `passed` and the list of check records.
"""

import json
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

from meanking.checks.checks_algebra import algebra_checks
from meanking.checks.checks_geometry import geometry_checks
from meanking.checks.checks_protocol import protocol_checks
from meanking.checks.checks_states import state_checks
from meanking.checks.controller import SweepController
from meanking.checks.util_classes import (
    CheckSpec,
    DIM_PARAMETERS,
    _result_error,
    _result_ok,
)

logger = logging.getLogger(__name__)

_controller = SweepController()

SUITE_ALL = "all"


# Register modular suites, in dependency order
_MODULAR_CHECKS: Dict[str, Callable[[SweepController, Dict[str, Any]], Dict[str, Any]]] = {}
_MODULAR_SPECS: Dict[str, CheckSpec] = {}
for check_def in algebra_checks + geometry_checks + state_checks + protocol_checks:
    _MODULAR_CHECKS[check_def.name] = check_def.func
    _MODULAR_SPECS[check_def.name] = check_def.spec

SUITE_NAMES = list(_MODULAR_CHECKS)


def check_all(_controller: SweepController, args: Dict[str, Any]) -> Dict[str, Any]:
    records: List[Dict[str, Any]] = []
    for name, fn in _MODULAR_CHECKS.items():
        result = fn(_controller, args)
        if not result["ok"]:
            return _result_error(f"{name}: {result['error']}")
        records.extend(result["result"]["records"])
    return _result_ok({"passed": all(r["passed"] for r in records), "records": records})


_CORE_CHECKS = {SUITE_ALL: check_all}
_CORE_SPECS = {
    SUITE_ALL: CheckSpec(
        name=SUITE_ALL,
        description="Every suite, in order.",
        parameters=DIM_PARAMETERS,
    ),
}

_CHECKS: Dict[str, Callable[[SweepController, Dict[str, Any]], Dict[str, Any]]] = {
    **_MODULAR_CHECKS,
    **_CORE_CHECKS,
}


def get_check_specs() -> List[Dict[str, Any]]:
    specs = []
    for spec in list(_MODULAR_SPECS.values()) + list(_CORE_SPECS.values()):
        specs.append({"name": spec.name, "description": spec.description, "parameters": spec.parameters})
    return specs


def execute_check(
    name: str, args: Dict[str, Any], controller: Optional[SweepController] = None
) -> Dict[str, Any]:
    """Single entrypoint to run a named suite with args (dict)."""
    fn = _CHECKS.get(name)
    if fn is None:
        return _result_error(f"unknown suite: {name}")
    try:
        return fn(controller or _controller, args or {})
    except Exception as e:
        return _result_error(e)


def run_suites(
    names: Sequence[str],
    dims: Sequence[int],
    tol: Optional[float] = None,
    controller: Optional[SweepController] = None,
) -> List[Dict[str, Any]]:
    """Run each suite at each dimension; one result per (dim, suite)."""
    results = []
    for d in dims:
        for name in names:
            args: Dict[str, Any] = {"dim": d}
            if tol is not None:
                args["tol"] = tol
            result = execute_check(name, args, controller)
            if result["ok"]:
                logger.info("suite %s d=%d: %s", name, d, "pass" if result["result"]["passed"] else "FAIL")
            else:
                logger.error("suite %s d=%d failed to run: %s", name, d, result["error"])
            results.append({"suite": name, "dim": d, **result})
    return results


if __name__ == "__main__":
    print("=== Available Suites ===\n")
    print(json.dumps(get_check_specs(), indent=2))
