"""Outcome records for the theorem checkers.

Every checker returns a :class:`CheckResult`. A check whose hypotheses hold
but whose conclusion fails is never raised as an exception: it is returned
with a verdict so callers can report it and keep going.
"""

from __future__ import annotations

from dataclasses import dataclass, field

CONFIRMED = "confirmed"
HYPOTHESES_NOT_MET = "hypotheses_not_met"
MISMATCH = "paper-claim mismatch"
COUNTEREXAMPLE = "counterexample-candidate"

VERDICTS = (CONFIRMED, HYPOTHESES_NOT_MET, MISMATCH, COUNTEREXAMPLE)


@dataclass(frozen=True)
class CheckResult:
    name: str
    hypotheses_hold: bool
    holds: bool
    verdict: str
    detail: str = ""
    data: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    @property
    def failed(self) -> bool:
        return self.verdict == COUNTEREXAMPLE


def judge(name: str, hypotheses_hold: bool, holds: bool, detail: str = "",
          *, on_failure: str = COUNTEREXAMPLE, **data) -> CheckResult:
    """Map (hypotheses, conclusion) to a verdict.

    ``on_failure`` selects how a failed conclusion under satisfied
    hypotheses is labelled: a hard theorem gets ``COUNTEREXAMPLE``, a claim
    known not to transfer to the finite model gets ``MISMATCH``.
    """
    if not hypotheses_hold:
        verdict = HYPOTHESES_NOT_MET
    elif holds:
        verdict = CONFIRMED
    else:
        verdict = on_failure
    return CheckResult(name, hypotheses_hold, holds, verdict, detail, dict(data))
