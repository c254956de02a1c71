"""Named pass/fail verdicts collected during verification."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    subject: str = ""
    detail: str = ""

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.subject:
            out["subject"] = self.subject
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    verdicts: list[Verdict] = field(default_factory=list)

    def add(self, name: str, passed: bool, subject: str = "", detail: str = "") -> bool:
        self.verdicts.append(Verdict(name, bool(passed), subject, detail))
        return bool(passed)

    def extend(self, other: "VerificationReport", subject: str | None = None) -> None:
        for v in other.verdicts:
            if subject is None:
                self.verdicts.append(v)
            else:
                sub = f"{subject}/{v.subject}" if v.subject else subject
                self.verdicts.append(Verdict(v.name, v.passed, sub, v.detail))

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def failures(self) -> list[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    def names(self) -> set[str]:
        return {v.name for v in self.verdicts}

    def get(self, name: str, subject: str | None = None) -> list[Verdict]:
        return [v for v in self.verdicts if v.name == name and (subject is None or v.subject == subject)]

    def to_json(self) -> list[dict]:
        return [v.to_json() for v in self.verdicts]

    def __iter__(self) -> Iterable[Verdict]:
        return iter(self.verdicts)

    def __len__(self):
        return len(self.verdicts)
