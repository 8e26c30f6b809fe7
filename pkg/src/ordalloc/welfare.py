"""Quantifying the welfare cost of symmetric assignment.

With identical ordinal preferences a_1 > a_2 > ... > a_n, the uniform
allocation is the natural symmetric choice and is sd-efficient, yet a
chain of bilateral trades (agent 1 buys the other agents' shares of
a_2 at their exact indifference rates) raises agent 1's expected
utility by almost (n-2)/n while leaving everyone else exactly
indifferent.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Allocation, ONE, Preference, Profile, ZERO, rat, uniform_allocation, validate_allocation
from .efficiency import VnmUtility


class DegenerateDenominator(ValueError):
    pass


class InadmissibleEpsilon(ValueError):
    pass


def exchange_rate(k: int, n: int, eps) -> Fraction:
    """Rate mu^k = (k-2)eps / (1 - (n-k)eps): units of a_1 per unit of a_2
    that leave the holder of a_k's trading partner exactly indifferent."""
    eps = rat(eps)
    if not 3 <= k <= n:
        raise ValueError(f"k must be in 3..{n}, got {k}")
    den = 1 - (n - k) * eps
    if den == 0:
        raise DegenerateDenominator(f"1 - (n-k)*eps vanishes at k={k}")
    return (k - 2) * eps / den


def tilted_utilities(n: int, eps) -> tuple[VnmUtility, ...]:
    """The utility profile of the construction: everyone ranks a_1 > ... > a_n;
    agent 0 values a_2 at 1-eps, everyone else at (n-2)*eps; object a_l is
    worth (n-l)*eps for l >= 3."""
    eps = rat(eps)
    tail = [(n - l) * eps for l in range(3, n + 1)]
    first = tuple([ONE, 1 - eps] + tail)
    rest = tuple([ONE, (n - 2) * eps] + tail)
    return (VnmUtility(first),) + (VnmUtility(rest),) * (n - 1)


def common_ranking_profile(n: int) -> Profile:
    return Profile(tuple(Preference(tuple(range(n))) for _ in range(n)))


@dataclass(frozen=True)
class SymmetryCostReport:
    n: int
    eps: Fraction
    rates: tuple[Fraction, ...]  # mu^k for k = 3..n
    lottery: tuple[Fraction, ...]  # agent 0's post-trade row
    allocation: Allocation  # the full post-trade allocation
    gain: Fraction  # agent 0's exact welfare gain over uniform
    bound: Fraction  # the limit (n-2)/n


def symmetry_cost(n: int, eps) -> SymmetryCostReport:
    """Build the traded allocation and agent 0's exact welfare gain.

    Trade k (k=3..n) swaps agent (k-1)'s full 1/n share of a_2 for
    mu^k/n of a_1 plus (1-mu^k)/n of a_k from agent 0.
    """
    eps = rat(eps)
    if n < 3:
        raise InadmissibleEpsilon(f"need n >= 3, got {n}")
    if eps <= 0 or (n - 2) * eps >= 1:
        raise InadmissibleEpsilon(f"eps must lie in (0, 1/(n-2)), got {eps}")
    rates = tuple(exchange_rate(k, n, eps) for k in range(3, n + 1))
    if any(not 0 < mu < 1 for mu in rates):
        raise InadmissibleEpsilon(f"exchange rates {rates} leave the unit interval")
    utilities = tilted_utilities(n, eps)
    for k, mu in zip(range(3, n + 1), rates):
        per_unit = (1 - eps) - mu - (1 - mu) * (n - k) * eps
        if per_unit <= 0:
            raise InadmissibleEpsilon(f"trade k={k} does not benefit agent 0 at eps={eps}")

    u = Fraction(1, n)
    rows = [[u] * n for _ in range(n)]
    for k, mu in zip(range(3, n + 1), rates):
        j = k - 1  # partner's 0-based index; their object a_k has index k-1
        rows[0][1] += u
        rows[j][1] -= u
        rows[0][0] -= mu * u
        rows[j][0] += mu * u
        rows[0][k - 1] -= (1 - mu) * u
        rows[j][k - 1] += (1 - mu) * u
    alloc = validate_allocation(rows)

    uniform = uniform_allocation(n)
    for j in range(1, n):
        assert utilities[j].value(alloc[j]) == utilities[j].value(uniform[j])
    gain = utilities[0].value(alloc[0]) - utilities[0].value(uniform[0])
    return SymmetryCostReport(
        n=n,
        eps=eps,
        rates=rates,
        lottery=alloc[0],
        allocation=alloc,
        gain=gain,
        bound=Fraction(n - 2, n),
    )
