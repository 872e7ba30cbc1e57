"""Self-verification suites for the meanking package."""

from .checks import (
	SUITE_ALL,
	SUITE_NAMES,
	SweepController,
	execute_check,
	get_check_specs,
	run_suites,
)

__all__ = [
	"SUITE_ALL",
	"SUITE_NAMES",
	"SweepController",
	"execute_check",
	"get_check_specs",
	"run_suites",
]
