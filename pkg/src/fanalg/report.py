"""Structured findings shared by every checker in the package.

A check never raises on a mathematical failure; it returns a report whose
findings carry a short code, a location, and a human-readable detail.  Input
errors (malformed data, mismatched fans) raise ValueError instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Finding:
    code: str
    location: str
    detail: str

    def line(self) -> str:
        return f"{self.code}\t{self.location}\t{self.detail}"


@dataclass
class Report:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def __bool__(self) -> bool:
        return self.ok

    def add(self, code: str, location: str, detail: str) -> None:
        self.findings.append(Finding(code, location, detail))

    def extend(self, other: "Report") -> None:
        self.findings.extend(other.findings)

    def lines(self) -> list[str]:
        return [f.line() for f in sorted(self.findings, key=lambda f: (f.code, f.location))]

    def summary(self) -> str:
        if self.ok:
            return "SUMMARY: pass"
        return f"SUMMARY: fail ({len(self.findings)} finding{'s' if len(self.findings) != 1 else ''})"

    def render(self) -> str:
        return "\n".join(self.lines() + [self.summary()])
