"""Evidence records shared by the operator and admissibility checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional


def _jsonable(x):
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


@dataclass(frozen=True)
class Evidence:
    """One evaluated condition.

    ``lhs`` and ``rhs`` are the two sides of the inequality (or equality) the
    condition asserts; ``witness_k`` is the index where it was decided, if the
    condition is indexed by ``k``.
    """

    condition: str
    paper_tag: str
    passed: bool
    witness_k: Optional[int] = None
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    note: str = ""

    def to_dict(self):
        d = {
            "condition": self.condition,
            "paper_tag": self.paper_tag,
            "pass": bool(self.passed),
            "witness_k": self.witness_k,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
        }
        if self.note:
            d["note"] = self.note
        return d
