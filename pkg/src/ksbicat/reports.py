"""Command reports in JSON and plain text."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .kstheory import VerificationReport

PASS, FAIL, INCONCLUSIVE, INPUT_ERROR = "pass", "fail", "inconclusive", "input-error"
EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2, INPUT_ERROR: 3}


@dataclass
class Report:
    command: str
    inputs: dict
    status: str = PASS
    verdicts: VerificationReport = field(default_factory=VerificationReport)
    idempotents: list | None = None
    permutation: list | None = None
    complete: bool | None = None
    seed: int | None = None
    timing: float | None = None
    data: dict = field(default_factory=dict)
    message: str = ""

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]

    def settle(self, strict: bool = False) -> "Report":
        """Derive the status from the verdicts and the completeness flag."""
        if self.status == INPUT_ERROR:
            return self
        if not self.verdicts.passed:
            self.status = FAIL
        elif self.complete is False:
            self.status = FAIL if strict else INCONCLUSIVE
        return self

    def to_json(self) -> dict:
        out: dict[str, Any] = {"command": self.command, "inputs": self.inputs, "status": self.status,
                               "exit_code": self.exit_code}
        if self.message:
            out["message"] = self.message
        if self.complete is not None:
            out["complete"] = self.complete
        if self.idempotents is not None:
            out["idempotents"] = self.idempotents
        if self.permutation is not None:
            out["permutation"] = self.permutation
        out.update(self.data)
        out["verdicts"] = self.verdicts.to_json()
        if self.seed is not None:
            out["seed"] = self.seed
        if self.timing is not None:
            out["timing_seconds"] = round(self.timing, 4)
        return out

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.status.upper()}"]
        for k, v in self.inputs.items():
            lines.append(f"  {k}: {v}")
        if self.message:
            lines.append(f"  {self.message}")
        if self.complete is not None:
            lines.append(f"  complete: {'yes' if self.complete else 'no (partial factorization)'}")
        if self.idempotents is not None:
            lines.append(f"  idempotents ({len(self.idempotents)}):")
            lines.extend(f"    [{', '.join(e)}]" for e in self.idempotents)
        if self.permutation is not None:
            lines.append(f"  permutation: {self.permutation}")
        for k, v in self.data.items():
            lines.append(f"  {k}: {json.dumps(v) if isinstance(v, (list, dict)) else v}")
        if len(self.verdicts):
            bad = self.verdicts.failures
            lines.append(f"  checks: {len(self.verdicts) - len(bad)}/{len(self.verdicts)} passed")
            for v in bad:
                where = f" [{v.subject}]" if v.subject else ""
                lines.append(f"    FAILED {v.name}{where}{': ' + v.detail if v.detail else ''}")
        if self.timing is not None:
            lines.append(f"  time: {self.timing:.3f}s")
        return "\n".join(lines)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=1)
        return self.to_text()
