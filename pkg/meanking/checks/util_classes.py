"""Shared utility classes for check definitions and results."""

from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Tuple

from meanking.config import default_tolerance
from meanking.finitefield import PrimeDim


def _result_ok(value: Any) -> Dict[str, Any]:
	"""Wrap a successful result."""
	return {"ok": True, "result": value}


def _result_error(message: Any) -> Dict[str, Any]:
	"""Wrap an error result."""
	return {"ok": False, "error": str(message)}


@dataclass
class CheckRecord:
	"""One verified property: what was expected, what was seen."""
	suite: str
	name: str
	dim: int
	expected: Any
	observed: Any
	passed: bool

	def to_dict(self) -> Dict[str, Any]:
		return asdict(self)


@dataclass
class CheckSpec:
	"""Metadata for a single verification suite."""
	name: str
	description: str
	parameters: Dict[str, Any]


@dataclass
class CheckDefinition:
	"""Pairs a suite function with its spec for easy registration."""
	name: str
	func: Callable
	spec: CheckSpec


def record(suite: str, name: str, dim: int, expected: Any, observed: Any) -> CheckRecord:
	return CheckRecord(suite, name, dim, expected, observed, bool(expected == observed))


def within(suite: str, name: str, dim: int, deviation: float, tol: float) -> CheckRecord:
	"""Record a numerical check as max deviation against a tolerance."""
	deviation = float(deviation)
	return CheckRecord(suite, name, dim, f"<= {tol:g}", f"{deviation:.3e}", deviation <= tol)


def records_result(records: List[CheckRecord]) -> Dict[str, Any]:
	return _result_ok({
		"passed": all(r.passed for r in records),
		"records": [r.to_dict() for r in records],
	})


DIM_PARAMETERS = {
	"type": "object",
	"properties": {
		"dim": {"type": "integer", "description": "Odd prime qudit dimension."},
		"tol": {"type": "number", "description": "Numerical tolerance."},
	},
	"required": ["dim"],
}


def suite_args(args: Dict[str, Any]) -> Tuple[PrimeDim, float]:
	"""(dim, tol) out of a suite's argument dict."""
	if "dim" not in args:
		raise ValueError("'dim' parameter is required")
	tol = args.get("tol")
	return PrimeDim(int(args["dim"])), default_tolerance() if tol is None else float(tol)
