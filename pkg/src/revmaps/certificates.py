"""Machine-checkable verdicts with witnesses and truncation degree."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Certificate:
    """A verdict packaged with re-verifiable evidence.

    verdict is a bool (or a tag string for classification results);
    witness, when present, lets the claim be re-checked by composition
    alone.  degree records the truncation at which the claim holds.
    """

    verdict: bool | str
    degree: int
    witness: object | None = None
    notes: list[str] = field(default_factory=list)

    def __bool__(self):
        return bool(self.verdict)
