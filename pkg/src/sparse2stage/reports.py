"""Record types for inequality checks shared by the solver and the harness."""

from __future__ import annotations

from dataclasses import dataclass, field

# relative round-off slack applied when flagging a record as passed
PASS_SLACK = 1e-9


def passes(lhs, rhs):
    return lhs <= rhs + PASS_SLACK * max(1.0, abs(rhs))


@dataclass
class BoundRecord:
    """One named inequality: LHS <= RHS with the constants that built the RHS."""

    name: str
    lhs: float
    rhs: float
    constants: dict = field(default_factory=dict)
    event_T: bool = True
    hypothesis_met: bool = True
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = passes(self.lhs, self.rhs)

    def to_dict(self):
        return {
            "name": self.name,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "constants": {k: _jsonable(v) for k, v in sorted(self.constants.items())},
            "event_T": bool(self.event_T),
            "hypothesis_met": bool(self.hypothesis_met),
            "pass": bool(self.passed),
        }


def _jsonable(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    try:
        return float(v)
    except (TypeError, ValueError):
        return str(v)
