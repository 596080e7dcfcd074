"""Three-valued membership verdicts."""
from __future__ import annotations

import enum
from typing import Iterable


class Verdict(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def of(cls, flag: bool) -> "Verdict":
        return cls.YES if flag else cls.NO

    @property
    def definite(self) -> bool:
        return self is not Verdict.UNKNOWN

    def __and__(self, other: "Verdict") -> "Verdict":
        if self is Verdict.NO or other is Verdict.NO:
            return Verdict.NO
        if self is Verdict.YES and other is Verdict.YES:
            return Verdict.YES
        return Verdict.UNKNOWN

    def __or__(self, other: "Verdict") -> "Verdict":
        if self is Verdict.YES or other is Verdict.YES:
            return Verdict.YES
        if self is Verdict.NO and other is Verdict.NO:
            return Verdict.NO
        return Verdict.UNKNOWN

    def __invert__(self) -> "Verdict":
        if self is Verdict.YES:
            return Verdict.NO
        if self is Verdict.NO:
            return Verdict.YES
        return Verdict.UNKNOWN


def all_of(verdicts: Iterable[Verdict]) -> Verdict:
    out = Verdict.YES
    for v in verdicts:
        out = out & v
        if out is Verdict.NO:
            return out
    return out


def any_of(verdicts: Iterable[Verdict]) -> Verdict:
    out = Verdict.NO
    for v in verdicts:
        out = out | v
        if out is Verdict.YES:
            return out
    return out


def contradicts(a: Verdict, b: Verdict) -> bool:
    """True when one verdict is a definite Yes and the other a definite No."""
    return {a, b} == {Verdict.YES, Verdict.NO}
