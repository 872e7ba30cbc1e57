#!/usr/bin/env python3
"""Simple runner script for the verification suites.

Usage:
  python run_checks.py
"""

if __name__ == "__main__":
	from meanking.checks import execute_check, get_check_specs
	import json

	print("=== Available Suites ===\n")
	print(json.dumps(get_check_specs(), indent=2))
	print("\n=== Demo Execution ===\n")

	seq = [
		("mub", {"dim": 3}),
		("geometry", {"dim": 5}),
		# ("protocol", {"dim": 7}),
	]

	for name, args in seq:
		print(f"Executing: {name}")
		result = execute_check(name, args)
		if result["ok"]:
			failed = [r for r in result["result"]["records"] if not r["passed"]]
			print(f"Result: passed={result['result']['passed']} failed={json.dumps(failed, indent=2)}\n")
		else:
			print(f"Result: {json.dumps(result, indent=2)}\n")
