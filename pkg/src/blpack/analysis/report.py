from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """Outcome of one property check: "pass", "fail" or "n/a" plus the reasons."""

    name: str
    status: str
    violations: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def as_dict(self) -> dict:
        out = {"name": self.name, "status": self.status}
        if self.violations:
            out["violations"] = list(self.violations)
        if self.details:
            out["details"] = self.details
        return out
