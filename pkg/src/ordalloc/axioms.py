"""Exhaustive and randomized verification of mechanism axioms.

A mechanism is a pure map Profile -> Allocation.  Exhaustive mode walks
all (n!)^n profiles (n = 3 only); sampled mode draws seeded random
cases, each reconstructible from (seed, trial index), so every violation
witness replays bit-exactly.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from multiprocessing import get_context
from typing import Callable, Optional, Sequence

from .core import (
    Allocation,
    Preference,
    Profile,
    apply_object_permutation,
    enumerate_profiles,
    permute_allocation_objects,
    support,
)
from .efficiency import Efficient, is_unambiguously_efficient
from .mechanisms import hmd_run, serial_dictatorship, uniform_rsd
from .sd import SdComparison, compare_sd

AXIOMS = (
    "strategy-proofness",
    "non-bossiness",
    "neutrality",
    "bounded-invariance",
    "symmetry",
    "support-monotonic-invariance",
    "unambiguous-efficiency",
)


@dataclass(frozen=True)
class MechanismHandle:
    name: str
    n: int
    fn: Callable[[Profile], Allocation]

    def __call__(self, profile: Profile) -> Allocation:
        return self.fn(profile)


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    verdict: str  # "holds" | "violated"
    mode: str  # "exhaustive" | "sampled"
    trials: Optional[int]
    witness: Optional[dict]

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"


class _Evaluator:
    """Caches mechanism outputs; mechanisms are pure by contract."""

    def __init__(self, m: MechanismHandle):
        self.m = m
        self.cache: dict[Profile, Allocation] = {}

    def __call__(self, profile: Profile) -> Allocation:
        out = self.cache.get(profile)
        if out is None:
            out = self.cache[profile] = self.m(profile)
        return out


def _perms(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n)))


def _profile_from(rankings) -> Profile:
    return Profile(tuple(Preference(tuple(r)) for r in rankings))


def _case_violation(ev: _Evaluator, axiom: str, case: dict) -> bool:
    """True when the case exhibits a violation of the axiom."""
    profile = _profile_from(case["profile"])
    base = ev(profile)
    if axiom == "strategy-proofness":
        i = case["agent"]
        deviated = profile.replace(i, Preference(tuple(case["deviation"])))
        cmp = compare_sd(base[i], ev(deviated)[i], profile[i])
        return cmp not in (SdComparison.DOMINATES, SdComparison.EQUAL)
    if axiom == "non-bossiness":
        i = case["agent"]
        deviated = profile.replace(i, Preference(tuple(case["deviation"])))
        out = ev(deviated)
        return base[i] == out[i] and base != out
    if axiom == "neutrality":
        rho = case["rho"]
        relabeled = ev(apply_object_permutation(profile, rho))
        return relabeled != permute_allocation_objects(base, rho)
    if axiom == "bounded-invariance":
        i, a = case["agent"], case["obj"]
        alt = Preference(tuple(case["deviation"]))
        if profile[i].upper_contour(a) != alt.upper_contour(a):
            return False  # deviation reshuffles above a; axiom is silent
        out = ev(profile.replace(i, alt))
        return base.column(a) != out.column(a)
    if axiom == "symmetry":
        i, j = case["agents"]
        return profile[i] == profile[j] and base[i] != base[j]
    if axiom == "support-monotonic-invariance":
        i = case["agent"]
        alt = Preference(tuple(case["deviation"]))
        old, new = profile[i], alt
        for a in support(base[i]):
            above_new = set(new.ranking[: new.position_of[a]])
            above_old = set(old.ranking[: old.position_of[a]])
            if not above_new <= above_old:
                return False  # not a support monotonic transformation
        return ev(profile.replace(i, alt)) != base
    if axiom == "unambiguous-efficiency":
        return not isinstance(is_unambiguously_efficient(base, profile), Efficient)
    raise ValueError(f"unknown axiom {axiom!r}")


def _exhaustive_cases(axiom: str, n: int):
    perms = _perms(n)
    for profile in enumerate_profiles(n):
        rankings = tuple(p.ranking for p in profile)
        if axiom in ("strategy-proofness", "non-bossiness", "support-monotonic-invariance"):
            for i in range(n):
                for dev in perms:
                    if dev != rankings[i]:
                        yield {"profile": rankings, "agent": i, "deviation": dev}
        elif axiom == "neutrality":
            for rho in perms:
                yield {"profile": rankings, "rho": rho}
        elif axiom == "bounded-invariance":
            for i in range(n):
                for dev in perms:
                    if dev == rankings[i]:
                        continue
                    for a in range(n):
                        yield {"profile": rankings, "agent": i, "deviation": dev, "obj": a}
        elif axiom == "symmetry":
            for i in range(n):
                for j in range(i + 1, n):
                    yield {"profile": rankings, "agents": (i, j)}
        elif axiom == "unambiguous-efficiency":
            yield {"profile": rankings}
        else:
            raise ValueError(f"unknown axiom {axiom!r}")


def _sampled_case(axiom: str, n: int, seed: int, trial: int) -> dict:
    rng = random.Random(f"{axiom}/{seed}/{trial}")
    rankings = []
    for _ in range(n):
        r = list(range(n))
        rng.shuffle(r)
        rankings.append(tuple(r))
    case: dict = {"profile": tuple(rankings)}
    if axiom in ("strategy-proofness", "non-bossiness", "support-monotonic-invariance", "bounded-invariance"):
        i = rng.randrange(n)
        dev = list(rankings[i])
        while tuple(dev) == rankings[i]:
            rng.shuffle(dev)
        case["agent"] = i
        case["deviation"] = tuple(dev)
        if axiom == "bounded-invariance":
            case["obj"] = rng.randrange(n)
    elif axiom == "neutrality":
        # sample a handful of relabelings per profile; transpositions
        # witness most failures
        rho = list(range(n))
        rng.shuffle(rho)
        case["rho"] = tuple(rho)
    elif axiom == "symmetry":
        i, j = rng.sample(range(n), 2)
        j_rank = rankings[:]
        j_rank[j] = rankings[i]  # force a coincidence so the premise can fire
        case = {"profile": tuple(j_rank), "agents": (min(i, j), max(i, j))}
    return case


def _scan_chunk(args) -> Optional[tuple[int, dict]]:
    m, axiom, seed, start, count = args
    ev = _Evaluator(m)
    for t in range(start, start + count):
        case = _sampled_case(axiom, m.n, seed, t)
        if _case_violation(ev, axiom, case):
            return t, case
    return None


def check_axiom(
    m: MechanismHandle,
    axiom: str,
    mode: str = "exhaustive",
    trials: int = 10000,
    seed: int = 0,
    workers: int = 1,
) -> AxiomReport:
    if axiom not in AXIOMS:
        raise ValueError(f"unknown axiom {axiom!r}")
    if mode == "exhaustive":
        if m.n != 3:
            raise ValueError("exhaustive mode is only supported at n = 3")
        ev = _Evaluator(m)
        for case in _exhaustive_cases(axiom, m.n):
            if _case_violation(ev, axiom, case):
                return AxiomReport(axiom, "violated", mode, None, case)
        return AxiomReport(axiom, "holds", mode, None, None)
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if workers > 1:
        chunk = math.ceil(trials / workers)
        jobs = [
            (m, axiom, seed, start, min(chunk, trials - start))
            for start in range(0, trials, chunk)
        ]
        with get_context("fork").Pool(workers) as pool:
            results = pool.map(_scan_chunk, jobs)
        hits = [r for r in results if r is not None]
        if hits:
            _, case = min(hits)  # earliest trial wins: deterministic merge
            return AxiomReport(axiom, "violated", mode, trials, case)
        return AxiomReport(axiom, "holds", mode, trials, None)
    hit = _scan_chunk((m, axiom, seed, 0, trials))
    if hit is not None:
        return AxiomReport(axiom, "violated", mode, trials, hit[1])
    return AxiomReport(axiom, "holds", mode, trials, None)


def replay(m: MechanismHandle, report: AxiomReport) -> bool:
    """Re-run a violation witness; True when the violation reproduces."""
    if report.witness is None:
        raise ValueError("report carries no witness")
    return _case_violation(_Evaluator(m), report.axiom, report.witness)


def check_strategy_proof(m, **kw) -> AxiomReport:
    return check_axiom(m, "strategy-proofness", **kw)


def check_non_bossy(m, **kw) -> AxiomReport:
    return check_axiom(m, "non-bossiness", **kw)


def check_neutral(m, **kw) -> AxiomReport:
    return check_axiom(m, "neutrality", **kw)


def check_bounded_invariance(m, **kw) -> AxiomReport:
    return check_axiom(m, "bounded-invariance", **kw)


def check_symmetric(m, **kw) -> AxiomReport:
    return check_axiom(m, "symmetry", **kw)


def check_support_monotonic_invariance(m, **kw) -> AxiomReport:
    return check_axiom(m, "support-monotonic-invariance", **kw)


def check_unambiguous_efficiency(m, **kw) -> AxiomReport:
    return check_axiom(m, "unambiguous-efficiency", **kw)


# ------------------------------------------------------------------ fixtures


class HmdMechanism:
    def __init__(self, rule):
        self.rule = rule

    def __call__(self, profile: Profile) -> Allocation:
        return hmd_run(self.rule, profile)[0]


class SerialDictatorshipMechanism:
    def __init__(self, order: Sequence[int]):
        self.order = tuple(order)

    def __call__(self, profile: Profile) -> Allocation:
        return serial_dictatorship(self.order, profile)


class UniformRsdMechanism:
    def __call__(self, profile: Profile) -> Allocation:
        return uniform_rsd(profile)


class OrderSwitchingSd:
    """Dictatorship order flips between 0,1,2,... and 0,2,1,3,... based on
    whether agent 0's top object is object 0 -- an object-label test, so
    neutrality fails while the other axioms survive."""

    def __init__(self, n: int):
        self.n = n

    def __call__(self, profile: Profile) -> Allocation:
        if profile[0].ranking[0] == 0:
            order = tuple(range(self.n))
        else:
            order = (0, 2, 1) + tuple(range(3, self.n))
        return serial_dictatorship(order, profile)


class BranchingSd:
    """Agent 0 picks first; the tail order branches on whether agent 1
    contests agent 0's top object, letting agent 1 boss agents 2 and 3
    around without changing their own lottery."""

    def __init__(self, n: int = 4):
        self.n = n

    def __call__(self, profile: Profile) -> Allocation:
        if profile[1].ranking[0] != profile[0].ranking[0]:
            order = tuple(range(self.n))
        else:
            order = (0, 1) + tuple(reversed(range(2, self.n)))
        return serial_dictatorship(order, profile)


class BostonMechanism:
    """Immediate acceptance with one common priority order: in each round
    every unassigned agent applies to their best remaining object, which
    permanently accepts its highest-priority applicant."""

    def __init__(self, n: int, priority: Optional[Sequence[int]] = None):
        self.n = n
        self.priority = tuple(priority) if priority is not None else tuple(range(n))

    def __call__(self, profile: Profile) -> Allocation:
        rank = {i: p for p, i in enumerate(self.priority)}
        unassigned = set(range(self.n))
        available = set(range(self.n))
        assignment = [0] * self.n
        while unassigned:
            proposals: dict[int, list[int]] = {}
            for i in unassigned:
                target = next(a for a in profile[i].ranking if a in available)
                proposals.setdefault(target, []).append(i)
            for a, agents in proposals.items():
                winner = min(agents, key=lambda i: rank[i])
                assignment[winner] = a
                unassigned.remove(winner)
                available.remove(a)
        rows = tuple(
            tuple(Fraction(1 if a == assignment[i] else 0) for a in range(self.n))
            for i in range(self.n)
        )
        return Allocation(rows)


class SecondChoiceDictatorship:
    """Agent 0 receives their second-ranked object; the rest is a serial
    dictatorship.  Violates bounded invariance: reshuffling agent 0's
    ranking below their top changes who is left contesting the top."""

    def __init__(self, n: int = 3):
        self.n = n

    def __call__(self, profile: Profile) -> Allocation:
        taken = {profile[0].ranking[1]}
        assignment = [profile[0].ranking[1]] + [0] * (self.n - 1)
        for i in range(1, self.n):
            pick = next(a for a in profile[i].ranking if a not in taken)
            assignment[i] = pick
            taken.add(pick)
        rows = tuple(
            tuple(Fraction(1 if a == assignment[i] else 0) for a in range(self.n))
            for i in range(self.n)
        )
        return Allocation(rows)


class ConstantMechanism:
    def __init__(self, alloc: Allocation):
        self.alloc = alloc

    def __call__(self, profile: Profile) -> Allocation:
        return self.alloc
