"""Collects one verdict line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def record(number: int, ok: bool, text: str) -> str:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {text}"
    LINES.append(line)
    print(line)
    return line
