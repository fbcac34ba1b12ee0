#!/usr/bin/env python3
"""Pre-merge checks for blowup-rank.

Runs format, lint, type and fast-test gates in order and stops at the first
failure. Slow exhaustive searches are left to ``pytest -m slow``.
"""

import subprocess
import sys
from typing import List, Tuple

STEPS: List[Tuple[str, List[str]]] = [
    ("format", ["ruff", "format", "--check", "blowuprank", "tests", "scripts"]),
    ("lint", ["ruff", "check", "blowuprank", "tests", "scripts"]),
    ("types", ["mypy", "blowuprank", "tests"]),
    ("fast tests", ["pytest", "-m", "not slow", "-q", "--no-cov"]),
]


def run_command(command: List[str]) -> Tuple[int, str]:
    """Run a command and return its exit code and combined output."""
    process = subprocess.run(
        command, stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True
    )
    return process.returncode, process.stdout


def main() -> int:
    """Run every step, returning the exit code of the first that fails."""
    for number, (name, command) in enumerate(STEPS, start=1):
        print(f"[{number}/{len(STEPS)}] {name}: {' '.join(command)}")
        exit_code, output = run_command(command)
        if exit_code != 0:
            print(output)
            print(f"{name} failed with exit code {exit_code}")
            return exit_code
    print("blowup-rank checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
