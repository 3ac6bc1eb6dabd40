"""Line-oriented run reports: ``key=value`` lines followed by a residual table.

Numbers are exact; rationals print as ``p/q`` and integers as ``p``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, Fraction)):
        return str(value)
    return str(value)


def fmt_pattern(sigma: str) -> str:
    return sigma if sigma else "-"


class RunReport:
    def __init__(self, command: str):
        self.fields: list[tuple[str, str]] = [("command", command)]
        self.rows: list[tuple[str, str]] = []
        self.status = "ok"

    def add(self, key: str, value) -> "RunReport":
        self.fields.append((key, fmt(value)))
        return self

    def residuals(self, items: Iterable[tuple[str, Fraction]]) -> "RunReport":
        self.rows.extend((fmt_pattern(s), fmt(v)) for s, v in items)
        return self

    def render(self) -> str:
        lines = [f"{k}={v}" for k, v in self.fields]
        lines.append(f"status={self.status}")
        if self.rows:
            lines.append("# residuals")
            lines.extend(f"{s} {v}" for s, v in self.rows)
        return "\n".join(lines) + "\n"

    def render_csv(self) -> str:
        return "pattern,residual\n" + "".join(f"{s},{v}\n" for s, v in self.rows)
