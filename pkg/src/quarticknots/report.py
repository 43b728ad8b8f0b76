"""Check records and reports with a stable text form and a JSON-lines stream."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any


def _plain(x: Any) -> Any:
    """Convert numpy scalars, enums and tuples into JSON-friendly values."""
    if hasattr(x, "value") and hasattr(x, "name") and not isinstance(x, (int, float)):
        return x.value
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "item") and callable(x.item):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else "-inf" if x < 0 else "nan"
    return x


@dataclass
class Check:
    id: str
    passed: bool
    margin: float | None = None
    inputs: dict = field(default_factory=dict)
    detail: str = ""

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def record(self) -> dict:
        return {"id": self.id, "inputs": _plain(self.inputs), "margin": _plain(self.margin),
                "verdict": self.verdict, "detail": self.detail}

    def line(self) -> str:
        margin = "" if self.margin is None else f"  margin={self.margin:.3g}"
        detail = f"  {self.detail}" if self.detail else ""
        return f"[{self.verdict.upper()}] {self.id}{margin}{detail}"


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    runtime: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        lines = [f"== {self.command} =="]
        for k, v in self.inputs.items():
            lines.append(f"input {k}: {_plain(v)}")
        for k, v in self.results.items():
            if isinstance(v, list) and v and isinstance(v[0], (list, tuple)):
                lines.append(f"{k}:")
                lines.extend("  " + "  ".join(str(_plain(x)) for x in row) for row in v)
            else:
                lines.append(f"{k}: {_plain(v)}")
        for c in self.checks:
            lines.append(c.line())
        if self.checks:
            n_ok = sum(c.passed for c in self.checks)
            lines.append(f"{n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines) + "\n"

    def to_jsonl(self) -> str:
        head = {"record": "report", "command": self.command, "inputs": _plain(self.inputs),
                "results": _plain(self.results)}
        out = [json.dumps(head, sort_keys=True)]
        out += [json.dumps({"record": "check", **c.record()}, sort_keys=True) for c in self.checks]
        return "\n".join(out) + "\n"
