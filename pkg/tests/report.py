"""Collector for the per-guarantee summary printed after the test run."""

LINES: list[str] = []


def record(passed: bool, name: str, detail: str) -> None:
    LINES.append(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
