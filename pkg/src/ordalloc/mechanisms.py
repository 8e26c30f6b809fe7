"""Serial dictatorships, randomized serial dictatorship over order sets,
adjacent-k constructions, and the hierarchy-of-monarchies-and-diarchies
(HMD) engine.

An HMD run repeatedly asks a sequencing rule, keyed only by the history
signature (who was allocated so far, which assignments were integral,
and whether the residual supply is integral), for the next directive: a
monarchy (one agent takes the greedy top lottery from the remaining
supply) or an alpha-diarchy (two agents mix first-pick and second-pick
greedy lotteries).  Diarchies are only admissible while the residual
supply is integral.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .core import Allocation, ONE, Profile, ZERO, rat, validate_allocation


class MechanismError(ValueError):
    pass


class InsufficientSupply(MechanismError):
    pass


class InfeasiblePartial(MechanismError):
    pass


class RuleNamesAllocatedAgent(MechanismError):
    pass


class DiarchyOnFractionalResidual(MechanismError):
    pass


class BlockNotAdjacentInBase(MechanismError):
    pass


SupplyVector = tuple[Fraction, ...]


def full_supply(n: int) -> SupplyVector:
    return (ONE,) * n


def is_integral_vector(values: Iterable[Fraction]) -> bool:
    return all(v.denominator == 1 for v in values)


@dataclass(frozen=True)
class PartialAllocation:
    """Lottery rows for the agents served this step, None elsewhere."""

    rows: tuple[Optional[tuple[Fraction, ...]], ...]

    @property
    def allocated(self) -> frozenset[int]:
        return frozenset(i for i, r in enumerate(self.rows) if r is not None)

    def column_sum(self, a: int) -> Fraction:
        return sum((r[a] for r in self.rows if r is not None), ZERO)


@dataclass(frozen=True)
class History:
    steps: tuple[PartialAllocation, ...]

    @property
    def allocated(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for step in self.steps:
            out |= step.allocated
        return out


@dataclass(frozen=True)
class HistorySignature:
    """Identity-integrality class of a history.

    Per step: the served agents with a flag for whether each received a
    degenerate (integral) lottery; plus a flag for whether the residual
    supply after the whole history is integral.
    """

    steps: tuple[tuple[tuple[int, bool], ...], ...]
    residual_integral: bool

    @property
    def allocated(self) -> frozenset[int]:
        return frozenset(i for step in self.steps for i, _ in step)

    @property
    def last_step_integral(self) -> bool:
        if not self.steps:
            return True
        return all(flag for _, flag in self.steps[-1])


@dataclass(frozen=True)
class Monarchy:
    agent: int


@dataclass(frozen=True)
class Diarchy:
    i: int
    j: int
    alpha: Fraction


Directive = Union[Monarchy, Diarchy]
SequencingRule = Callable[[HistorySignature], Directive]


def signature_of(history: History, residual_supply: SupplyVector) -> HistorySignature:
    steps = []
    for step in history.steps:
        flags = tuple(
            sorted((i, is_integral_vector(step.rows[i])) for i in step.allocated)
        )
        steps.append(flags)
    return HistorySignature(tuple(steps), is_integral_vector(residual_supply))


# ------------------------------------------------------------------ greedy


def top_allocation(i: int, s: SupplyVector, profile: Profile) -> tuple[Fraction, ...]:
    """Greedy top lottery for agent i from supply s: fill one unit of
    probability walking down the agent's ranking."""
    if sum(s) < 1:
        raise InsufficientSupply(f"total supply {sum(s)} < 1 for agent {i}")
    need = ONE
    row = [ZERO] * len(s)
    for a in profile[i].ranking:
        take = min(need, s[a])
        row[a] = take
        need -= take
        if need == 0:
            break
    return tuple(row)


def top_after(i: int, j: int, s: SupplyVector, profile: Profile) -> tuple[Fraction, ...]:
    """Agent i's greedy top lottery once agent j's has been carved out."""
    first = top_allocation(j, s, profile)
    rest = tuple(x - y for x, y in zip(s, first))
    return top_allocation(i, rest, profile)


def apply_directive(d: Directive, s: SupplyVector, profile: Profile) -> PartialAllocation:
    n = profile.n
    rows: list[Optional[tuple[Fraction, ...]]] = [None] * n
    if isinstance(d, Diarchy) and d.i != d.j:
        i, j, alpha = d.i, d.j, d.alpha
        ti = top_allocation(i, s, profile)
        tj = top_allocation(j, s, profile)
        tji = top_after(i, j, s, profile)
        tij = top_after(j, i, s, profile)
        rows[i] = tuple(alpha * x + (1 - alpha) * y for x, y in zip(ti, tji))
        rows[j] = tuple(alpha * x + (1 - alpha) * y for x, y in zip(tij, tj))
    else:
        agent = d.agent if isinstance(d, Monarchy) else d.i
        rows[agent] = top_allocation(agent, s, profile)
    return PartialAllocation(tuple(rows))


def residual(s: SupplyVector, partial: PartialAllocation) -> SupplyVector:
    out = []
    for a in range(len(s)):
        left = s[a] - partial.column_sum(a)
        if left < 0 or left > 1:
            raise InfeasiblePartial(f"object {a} over-allocated: residual {left}")
        out.append(left)
    return tuple(out)


def _check_residual_invariant(s: SupplyVector) -> None:
    frac = [v for v in s if v.denominator != 1]
    if len(frac) > 2:
        raise InfeasiblePartial(f"{len(frac)} fractionally available objects in residual {s}")
    if frac and sum(frac).denominator != 1:
        raise InfeasiblePartial(f"fractional parts of residual {s} do not sum to an integer")


def hmd_run(rule: SequencingRule, profile: Profile) -> tuple[Allocation, History]:
    """Run the sequencing rule to completion; returns the (bistochastic)
    sum of the step allocations together with the full history."""
    n = profile.n
    s = full_supply(n)
    history = History(())
    while len(history.allocated) < n:
        sig = signature_of(history, s)
        d = rule(sig)
        named = {d.agent} if isinstance(d, Monarchy) else {d.i, d.j}
        clash = named & sig.allocated
        if clash:
            raise RuleNamesAllocatedAgent(f"rule named allocated agent(s) {sorted(clash)}")
        if isinstance(d, Diarchy) and d.i != d.j and not sig.residual_integral:
            raise DiarchyOnFractionalResidual(f"diarchy ({d.i},{d.j}) requested at fractional residual {s}")
        partial = apply_directive(d, s, profile)
        s = residual(s, partial)
        _check_residual_invariant(s)
        history = History(history.steps + (partial,))
    rows = []
    for i in range(n):
        row = next(step.rows[i] for step in history.steps if step.rows[i] is not None)
        rows.append(row)
    return validate_allocation(rows), history


# ---------------------------------------------------------- dictatorships


def serial_dictatorship(order: Sequence[int], profile: Profile) -> Allocation:
    """Agents pick their best remaining object in the given order."""
    n = profile.n
    if sorted(order) != list(range(n)):
        raise MechanismError(f"{order} is not an agent order")
    taken: set[int] = set()
    assignment = [0] * n
    for i in order:
        pick = next(a for a in profile[i].ranking if a not in taken)
        assignment[i] = pick
        taken.add(pick)
    rows = tuple(tuple(ONE if a == assignment[i] else ZERO for a in range(n)) for i in range(n))
    return validate_allocation(rows)


def rsd(weights: Mapping[tuple[int, ...], Fraction], profile: Profile) -> Allocation:
    """Exact mixture of serial dictatorships with the given order weights."""
    items = sorted(weights.items())
    if any(rat(w) <= 0 for _, w in items):
        raise MechanismError("order weights must be positive")
    if sum(rat(w) for _, w in items) != 1:
        raise MechanismError("order weights must sum to 1")
    n = profile.n
    acc = [[ZERO] * n for _ in range(n)]
    for order, w in items:
        w = rat(w)
        sd = serial_dictatorship(order, profile)
        for i in range(n):
            for a in range(n):
                acc[i][a] += w * sd[i][a]
    return validate_allocation(acc)


def uniform_rsd(profile: Profile) -> Allocation:
    orders = list(itertools.permutations(range(profile.n)))
    w = Fraction(1, len(orders))
    return rsd({o: w for o in orders}, profile)


# ------------------------------------------------------- adjacent-k sets


def make_adjacent_k_set(base: Sequence[int], block: Iterable[int], position: int) -> frozenset[tuple[int, ...]]:
    """The k! orders obtained from base by rearranging the given block of
    agents, which must occupy base[position : position+k]."""
    base = tuple(base)
    block = frozenset(block)
    k = len(block)
    if frozenset(base[position : position + k]) != block:
        raise BlockNotAdjacentInBase(f"agents {sorted(block)} do not fill positions {position}..{position + k - 1} of {base}")
    out = set()
    for arrangement in itertools.permutations(sorted(block)):
        out.add(base[:position] + arrangement + base[position + k :])
    return frozenset(out)


def is_adjacent_k_set(orders: Iterable[tuple[int, ...]], k: int) -> bool:
    orders = frozenset(tuple(o) for o in orders)
    if not orders or len(orders) != math.factorial(k):
        return False
    base = min(orders)
    n = len(base)
    for position in range(n - k + 1):
        block = frozenset(base[position : position + k])
        if make_adjacent_k_set(base, block, position) == orders:
            return True
    return False


# ---------------------------------------------------------- built-in rules


def _first_unallocated(sig: HistorySignature, order: Sequence[int]) -> int:
    return next(i for i in order if i not in sig.allocated)


def _unallocated(sig: HistorySignature, n: int) -> list[int]:
    return [i for i in range(n) if i not in sig.allocated]


class MonarchySequence:
    """All-monarchy rule following a fixed agent order."""

    def __init__(self, order: Sequence[int]):
        self.order = tuple(order)

    def __call__(self, sig: HistorySignature) -> Directive:
        return Monarchy(_first_unallocated(sig, self.order))


class DiarchyThenMonarchies:
    """One opening alpha-diarchy, then monarchies in a fixed order."""

    def __init__(self, i: int, j: int, alpha, order: Sequence[int]):
        self.i, self.j, self.alpha = i, j, rat(alpha)
        self.order = tuple(order)

    def __call__(self, sig: HistorySignature) -> Directive:
        if not sig.steps:
            return Diarchy(self.i, self.j, self.alpha)
        return Monarchy(_first_unallocated(sig, self.order))


class OpportunisticDiarchies:
    """Open with a fixed diarchy; afterwards pair up the remaining agents
    (ascending) with alpha = 1/2 diarchies whenever the residual supply
    and the latest assignments are integral, falling back to monarchies
    in descending order otherwise."""

    def __init__(self, n: int, i: int = 0, j: int = 1, alpha=Fraction(1, 3)):
        self.n = n
        self.i, self.j, self.alpha = i, j, rat(alpha)

    def __call__(self, sig: HistorySignature) -> Directive:
        if not sig.steps:
            return Diarchy(self.i, self.j, self.alpha)
        free = _unallocated(sig, self.n)
        if sig.residual_integral and sig.last_step_integral and len(free) >= 2:
            return Diarchy(free[0], free[1], Fraction(1, 2))
        return Monarchy(free[-1])


class TabledDiarchies:
    """Explicit five-agent schedule: d^(0,1,1/3); then either d^(2,3,1/2)
    or the monarchy of 2; then either d^(3,4,1/2) or the monarchy of 3;
    monarchies of the least-indexed agent afterwards."""

    def __init__(self, n: int = 5):
        self.n = n

    def __call__(self, sig: HistorySignature) -> Directive:
        free = _unallocated(sig, self.n)
        if not sig.steps:
            return Diarchy(0, 1, Fraction(1, 3))
        if len(free) == 1:
            return Monarchy(free[0])
        if 2 in free:
            if sig.residual_integral and sig.last_step_integral and 3 in free:
                return Diarchy(2, 3, Fraction(1, 2))
            return Monarchy(2)
        if 3 in free:
            if sig.residual_integral and 4 in free:
                return Diarchy(3, 4, Fraction(1, 2))
            return Monarchy(3)
        return Monarchy(free[0])


def builtin_rule(name: str, n: int) -> SequencingRule:
    if name == "paper-3.2":
        if n != 5:
            raise MechanismError("rule 'paper-3.2' is defined for n = 5")
        return OpportunisticDiarchies(5)
    if name == "paper-appendix-B":
        if n != 5:
            raise MechanismError("rule 'paper-appendix-B' is defined for n = 5")
        return TabledDiarchies(5)
    raise MechanismError(f"unknown built-in rule {name!r}")


BUILTIN_RULE_NAMES = ("paper-3.2", "paper-appendix-B")
