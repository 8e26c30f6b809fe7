"""Stochastic-dominance comparison of lotteries under an ordinal preference.

A lottery p stochastically dominates q for preference P when, for every
prefix of P's ranking, p puts at least as much probability mass on that
prefix as q does.  All comparisons are exact.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import Sequence

from .core import Preference


class SdComparison(enum.Enum):
    DOMINATES = "dominates"
    DOMINATED_BY = "dominated-by"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"

    def flipped(self) -> "SdComparison":
        if self is SdComparison.DOMINATES:
            return SdComparison.DOMINATED_BY
        if self is SdComparison.DOMINATED_BY:
            return SdComparison.DOMINATES
        return self


def cumulative_prefix(lottery: Sequence[Fraction], pref: Preference) -> tuple[Fraction, ...]:
    """Inclusive prefix sums F_k = mass on pref's k best objects, k = 1..n.

    The last entry equals the total mass of the lottery.
    """
    out = []
    acc = Fraction(0)
    for obj in pref.ranking:
        acc += lottery[obj]
        out.append(acc)
    return tuple(out)


def compare_sd(p: Sequence[Fraction], q: Sequence[Fraction], pref: Preference) -> SdComparison:
    """Exact four-way stochastic-dominance comparison of p against q."""
    fp = cumulative_prefix(p, pref)
    fq = cumulative_prefix(q, pref)
    some_above = any(a > b for a, b in zip(fp, fq))
    some_below = any(a < b for a, b in zip(fp, fq))
    if some_above and some_below:
        return SdComparison.INCOMPARABLE
    if some_above:
        return SdComparison.DOMINATES
    if some_below:
        return SdComparison.DOMINATED_BY
    return SdComparison.EQUAL


def sd_at_least(p: Sequence[Fraction], q: Sequence[Fraction], pref: Preference) -> bool:
    """True when p weakly stochastically dominates q (equal counts)."""
    return compare_sd(p, q, pref) in (SdComparison.DOMINATES, SdComparison.EQUAL)
