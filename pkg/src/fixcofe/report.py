"""Outcome records for property probes and checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable


def _jsonable(value: Any) -> Any:
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    if hasattr(value, "payload") and hasattr(value, "level"):
        return {"level": value.level, "payload": _jsonable(value.payload)}
    return value


@dataclass
class CheckReport:
    """Result of a finite-depth probe.

    A passing report is evidence up to the explored depth only. A failing
    report carries the witnesses that broke the property; :meth:`replay`
    re-runs the predicate on exactly those witnesses.

    ``level`` is the step index at which the failure was detected (for
    implications, the premise level). ``provenance`` holds JSON-ready
    descriptions of the witnesses, used for out-of-process replay.
    """

    name: str
    passed: bool
    level: int | None = None
    witnesses: dict[str, Any] = field(default_factory=dict)
    observations: dict[str, Any] = field(default_factory=dict)
    provenance: dict[str, Any] = field(default_factory=dict)
    samples: int = 0
    premise_hits: int = 0
    info: dict[str, Any] = field(default_factory=dict)
    note: str = ""
    predicate: Callable[[], bool] | None = field(default=None, repr=False, compare=False)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "counterexample"

    def __bool__(self) -> bool:
        return self.passed

    def replay(self) -> bool:
        """Return True when the stored witnesses still violate the property."""
        if self.passed or self.predicate is None:
            return False
        return bool(self.predicate())

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "check": self.name,
            "verdict": self.verdict,
            "level": self.level,
            "stats": {"samples": self.samples, "premise_hits": self.premise_hits},
        }
        if not self.passed:
            out["witness"] = _jsonable(self.provenance)
            out["observations"] = _jsonable(self.observations)
        if self.info:
            out["info"] = _jsonable(self.info)
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def ok(cls, name: str, *, samples: int = 0, premise_hits: int = 0,
           depth: int | None = None, **info: Any) -> "CheckReport":
        note = "finite-depth evidence only"
        if depth is not None:
            note += f" (explored to level {depth})"
        return cls(name, True, samples=samples, premise_hits=premise_hits,
                   info=info, note=note)
