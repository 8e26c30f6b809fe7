"""Decision procedures and certificates for two efficiency notions.

An allocation is *ambiguously efficient* when no other allocation weakly
SD-improves every agent; it is *unambiguously efficient* when every other
allocation strictly SD-worsens some agent (equivalently, it is Pareto
efficient for every vNM utility profile consistent with the ordinal
preferences).  Both are decided exactly with rational LPs over
probability-shift profiles; inefficiency verdicts come with replayable
certificates, and certificates convert into explicit falsifying vNM
utilities.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import lp
from .core import (
    Allocation,
    DimensionMismatch,
    Preference,
    Profile,
    ZERO,
    ONE,
    rat,
    validate_allocation,
)
from .sd import cumulative_prefix


class InvalidCertificate(ValueError):
    pass


@dataclass(frozen=True)
class ShiftProfile:
    """Zero-sum perturbation of an allocation: rows and columns sum to 0."""

    eta: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.eta[i]


@dataclass(frozen=True)
class InefficiencyCertificate:
    """A shift plus per-agent witnesses proving unambiguous inefficiency.

    witnesses[i] is None when agent i's row of the shift is zero, or a
    prefix depth k (1..n-1) at which the shift strictly increases the
    probability mass agent i places on their k best objects.
    """

    shift: ShiftProfile
    witnesses: tuple[Optional[int], ...]


@dataclass(frozen=True)
class VnmUtility:
    values: tuple[Fraction, ...]

    def value(self, lottery: Sequence[Fraction]) -> Fraction:
        return sum(u * p for u, p in zip(self.values, lottery))

    def consistent_with(self, pref: Preference) -> bool:
        r = [self.values[a] for a in pref.ranking]
        return all(x > y for x, y in zip(r, r[1:]))


@dataclass(frozen=True)
class Efficient:
    pass


@dataclass(frozen=True)
class Dominated:
    by: Allocation


@dataclass(frozen=True)
class Certified:
    certificate: InefficiencyCertificate


@dataclass(frozen=True)
class Improvement:
    allocation: Allocation


def _check_dims(alloc: Allocation, profile: Profile) -> None:
    if alloc.n != profile.n:
        raise DimensionMismatch(f"allocation has {alloc.n} agents, profile {profile.n}")


def prefix_gain(eta_row: Sequence[Fraction], pref: Preference, k: int) -> Fraction:
    """Net mass the shift adds to the k best objects of pref."""
    return sum(eta_row[a] for a in pref.ranking[:k])


def max_shift_scale(alloc: Allocation, shift: ShiftProfile) -> Fraction:
    """Largest t in (0,1] with alloc + t*shift entrywise nonnegative."""
    t = ONE
    for row, erow in zip(alloc.rows, shift.eta):
        for p, e in zip(row, erow):
            if e < 0:
                t = min(t, p / -e)
    return t


def apply_shift(alloc: Allocation, shift: ShiftProfile, t: Fraction) -> Allocation:
    rows = tuple(
        tuple(p + t * e for p, e in zip(row, erow))
        for row, erow in zip(alloc.rows, shift.eta)
    )
    return validate_allocation(rows)


def improved_allocation(cert: InefficiencyCertificate, alloc: Allocation) -> Allocation:
    """The dominating-for-the-witnesses allocation alloc + t*shift, t maximal."""
    t = max_shift_scale(alloc, cert.shift)
    if t <= 0:
        raise InvalidCertificate("shift cannot be applied with positive scale")
    return apply_shift(alloc, cert.shift, t)


def validate_certificate(cert: InefficiencyCertificate, alloc: Allocation, profile: Profile) -> None:
    """Raise InvalidCertificate unless cert is sound against (alloc, profile)."""
    n = alloc.n
    eta = cert.shift.eta
    if len(eta) != n or len(cert.witnesses) != n:
        raise InvalidCertificate("certificate size mismatch")
    if all(w is None for w in cert.witnesses):
        raise InvalidCertificate("no witnessed agent")
    for i in range(n):
        row = eta[i]
        if sum(row) != 0:
            raise InvalidCertificate(f"shift row {i} does not sum to 0")
        if cert.witnesses[i] is None:
            if any(e != 0 for e in row):
                raise InvalidCertificate(f"unwitnessed agent {i} has a nonzero shift")
        else:
            k = cert.witnesses[i]
            if not 1 <= k <= n - 1:
                raise InvalidCertificate(f"witness depth {k} out of range")
            if prefix_gain(row, profile[i], k) <= 0:
                raise InvalidCertificate(f"agent {i} has no strict gain at depth {k}")
        for a in range(n):
            if alloc[i][a] == 0 and row[a] < 0:
                raise InvalidCertificate(f"shift removes mass from empty cell ({i},{a})")
    for a in range(n):
        if sum(eta[i][a] for i in range(n)) != 0:
            raise InvalidCertificate(f"shift column {a} does not sum to 0")


# ---------------------------------------------------------------- ambiguous


def is_ambiguously_efficient(alloc: Allocation, profile: Profile):
    """Efficient, or Dominated(by=...) with a weakly-SD-better allocation.

    A single LP over shifts eta: maximize the total prefix gain subject
    to every prefix gain being >= 0, zero row/column sums, eta >= 0 on
    empty cells, and a normalization capping the objective at 1 (the
    feasible set is a cone).  The optimum is 0 exactly when no weakly
    improving move exists.
    """
    _check_dims(alloc, profile)
    n = alloc.n
    nv = n * n
    var = lambda i, a: i * n + a
    nonneg = frozenset(var(i, a) for i in range(n) for a in range(n) if alloc[i][a] == 0)

    # weight of eta_ia in the total prefix gain = number of strict prefixes
    # (depths 1..n-1) of agent i's ranking containing object a
    weights = [ZERO] * nv
    for i in range(n):
        pos = profile[i].position_of
        for a in range(n):
            weights[var(i, a)] = Fraction(n - 1 - pos[a])

    prog = lp.LinearProgram(nv, weights, nonneg=nonneg)
    for i in range(n):
        row = [ZERO] * nv
        for a in range(n):
            row[var(i, a)] = ONE
        prog.add(row, lp.EQ, 0)
    for a in range(n):
        col = [ZERO] * nv
        for i in range(n):
            col[var(i, a)] = ONE
        prog.add(col, lp.EQ, 0)
    for i in range(n):
        ranking = profile[i].ranking
        for k in range(1, n):
            row = [ZERO] * nv
            for a in ranking[:k]:
                row[var(i, a)] = ONE
            prog.add(row, lp.GE, 0)
    prog.add(weights, lp.LE, 1)

    res = lp.solve(prog)
    assert isinstance(res, lp.Optimal)
    if res.value == 0:
        return Efficient()
    eta = tuple(tuple(res.x[var(i, a)] for a in range(n)) for i in range(n))
    shift = ShiftProfile(eta)
    return Dominated(apply_shift(alloc, shift, max_shift_scale(alloc, shift)))


# -------------------------------------------------------------- unambiguous

_MEMO: dict = {}


def _support_sets(alloc: Allocation) -> tuple[frozenset[int], ...]:
    return tuple(frozenset(a for a in range(alloc.n) if alloc[i][a] != 0) for i in range(alloc.n))


def _witness_system(profile: Profile, supports, choices: dict[int, Optional[int]], active):
    """Feasibility LP for a (partial) witness assignment.

    choices maps agent -> depth k or None (unchanged); agents in `active`
    but not in choices are unconstrained apart from the structural
    sign/sum conditions.  Unchanged agents are excluded entirely.
    """
    n = profile.n
    included = [i for i in active if choices.get(i, "free") is not None]
    idx = {}
    for i in included:
        for a in range(n):
            idx[(i, a)] = len(idx)
    nv = len(idx)
    nonneg = frozenset(idx[(i, a)] for i in included for a in range(n) if a not in supports[i])
    prog = lp.LinearProgram(nv, [ZERO] * nv, nonneg=nonneg)
    for i in included:
        row = [ZERO] * nv
        for a in range(n):
            row[idx[(i, a)]] = ONE
        prog.add(row, lp.EQ, 0)
    for a in range(n):
        col = [ZERO] * nv
        for i in included:
            col[idx[(i, a)]] = ONE
        prog.add(col, lp.EQ, 0)
    for i in included:
        k = choices.get(i)
        if isinstance(k, int):
            row = [ZERO] * nv
            for a in profile[i].ranking[:k]:
                row[idx[(i, a)]] = ONE
            prog.add(row, lp.GE, 1)
    return prog, idx, included


def _decide_unambiguous(profile: Profile, supports):
    """None when efficient, else (witnesses, eta rows).

    The verdict depends on the allocation only through its support
    pattern, so results are memoized on (profile, supports).
    """
    key = (tuple(p.ranking for p in profile), supports)
    if key in _MEMO:
        return _MEMO[key]
    n = profile.n

    # Candidate witness depths: depth k is subsumed by depth k+1 whenever
    # the (k+1)-th ranked object is off-support (its shift entry is >= 0,
    # so the deeper prefix gains at least as much).
    cands = []
    for i in range(n):
        ranking = profile[i].ranking
        cands.append([k for k in range(1, n) if ranking[k] in supports[i]])
    order = sorted(range(n), key=lambda i: (len(cands[i]), i))
    active = frozenset(i for i in range(n) if cands[i])

    result = None

    def full_check(choices):
        prog, idx, included = _witness_system(profile, supports, choices, range(n))
        point = lp.feasible_point(prog)
        if isinstance(point, lp.Infeasible):
            return None
        eta = [[ZERO] * n for _ in range(n)]
        for (i, a), j in idx.items():
            eta[i][a] = point[j]
        witnesses = tuple(choices.get(i) if isinstance(choices.get(i), int) else None for i in range(n))
        return witnesses, tuple(tuple(r) for r in eta)

    def dfs(pos: int, choices: dict, any_witness: bool):
        nonlocal result
        if result is not None:
            return
        if pos == len(order):
            if any_witness:
                result = full_check(choices)
            return
        i = order[pos]
        for k in cands[i]:
            choices[i] = k
            prog, _, _ = _witness_system(profile, supports, choices, active)
            if not isinstance(lp.feasible_point(prog), lp.Infeasible):
                dfs(pos + 1, choices, True)
                if result is not None:
                    return
        choices[i] = None
        dfs(pos + 1, choices, any_witness)
        del choices[i]

    if active:
        dfs(0, {}, False)
    _MEMO[key] = result
    return result


def _fast_certificate(alloc: Allocation, profile: Profile):
    """Direct two-agent certificates from the necessary-condition checks."""
    n = alloc.n
    for i, j, a, b, c in check_no_gaps(alloc, profile):
        eta = [[ZERO] * n for _ in range(n)]
        eta[i][a], eta[i][b], eta[i][c] = Fraction(-1), Fraction(2), Fraction(-1)
        eta[j][a], eta[j][b], eta[j][c] = Fraction(1), Fraction(-2), Fraction(1)
        witnesses: list[Optional[int]] = [None] * n
        witnesses[i] = profile[i].position_of[b] + 1
        witnesses[j] = profile[j].position_of[a] + 1
        return InefficiencyCertificate(ShiftProfile(tuple(map(tuple, eta))), tuple(witnesses))
    supports = _support_sets(alloc)
    for i, j in check_support_bound(alloc):
        shared = sorted(supports[i] & supports[j], key=lambda a: profile[i].position_of[a])
        # a pair ranked oppositely by i and j yields a mutually improving swap
        for x in shared:
            for y in shared:
                if profile[i].prefers(x, y) and profile[j].prefers(y, x):
                    eta = [[ZERO] * n for _ in range(n)]
                    eta[i][x], eta[i][y] = Fraction(1), Fraction(-1)
                    eta[j][x], eta[j][y] = Fraction(-1), Fraction(1)
                    witnesses = [None] * n
                    witnesses[i] = profile[i].position_of[x] + 1
                    witnesses[j] = profile[j].position_of[y] + 1
                    return InefficiencyCertificate(ShiftProfile(tuple(map(tuple, eta))), tuple(witnesses))
    return None


def is_unambiguously_efficient(alloc: Allocation, profile: Profile):
    """Efficient, or Certified(certificate) with a sound inefficiency witness.

    Witness choices (unchanged, or a strict-prefix depth per agent) are
    searched depth-first; each partial choice is pruned by an exact LP
    feasibility check with the remaining agents unconstrained.
    """
    _check_dims(alloc, profile)
    fast = _fast_certificate(alloc, profile)
    if fast is not None:
        return Certified(fast)
    supports = _support_sets(alloc)
    found = _decide_unambiguous(profile, supports)
    if found is None:
        return Efficient()
    witnesses, eta = found
    return Certified(InefficiencyCertificate(ShiftProfile(eta), witnesses))


# ------------------------------------------------- necessary-condition checks


def check_support_bound(alloc: Allocation) -> list[tuple[int, int]]:
    """Agent pairs whose lottery supports share three or more objects."""
    supports = _support_sets(alloc)
    n = alloc.n
    return [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if len(supports[i] & supports[j]) >= 3
    ]


def check_no_gaps(alloc: Allocation, profile: Profile) -> list[tuple[int, int, int, int, int]]:
    """Violations (i,j,a,b,c): both rank a>b>c, yet i holds a and c while j holds b."""
    _check_dims(alloc, profile)
    n = alloc.n
    out = []
    for i in range(n):
        pi = profile[i]
        for j in range(n):
            if i == j:
                continue
            pj = profile[j]
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        if len({a, b, c}) < 3:
                            continue
                        if not (pi.prefers(a, b) and pi.prefers(b, c)):
                            continue
                        if not (pj.prefers(a, b) and pj.prefers(b, c)):
                            continue
                        if alloc[i][a] > 0 and alloc[i][c] > 0 and alloc[j][b] > 0:
                            out.append((i, j, a, b, c))
    return out


def support_invariance_probe(alloc: Allocation, profile: Profile, trials: int = 50, rng_seed: int = 0) -> bool:
    """Perturb alloc within its support face; every perturbation must stay
    unambiguously efficient (the verdict is a function of the support alone)."""
    _check_dims(alloc, profile)
    rng = random.Random(rng_seed)
    n = alloc.n
    supports = _support_sets(alloc)
    for _ in range(trials):
        rows = [list(r) for r in alloc.rows]
        for _ in range(3):  # a few random rectangle moves inside the face
            quads = [
                (i, j, a, b)
                for i in range(n)
                for j in range(n)
                if i != j
                for a in supports[i] & supports[j]
                for b in supports[i] & supports[j]
                if a < b
            ]
            if not quads:
                break
            i, j, a, b = quads[rng.randrange(len(quads))]
            bound = min(rows[i][b], rows[j][a])
            if bound == 0:
                continue
            delta = bound * Fraction(rng.randrange(0, 4), 4)
            rows[i][a] += delta
            rows[i][b] -= delta
            rows[j][a] -= delta
            rows[j][b] += delta
        perturbed = validate_allocation(rows)
        if not all(set(s) <= set(supports[i]) for i, s in enumerate(_support_sets(perturbed))):
            continue
        if not isinstance(is_unambiguously_efficient(perturbed, profile), Efficient):
            return False
    return True


# ------------------------------------------------------------- vNM utilities


def falsifying_utilities(cert: InefficiencyCertificate, alloc: Allocation, profile: Profile) -> tuple[VnmUtility, ...]:
    """Consistent vNM utilities under which the certificate's improved
    allocation strictly raises every witnessed agent's expected utility
    and leaves unchanged agents exactly indifferent.

    For a witness at depth k the pivot is the k-th ranked object: it
    gets utility 1, better objects sit just above 1, worse objects just
    above 0, all within a band eps = half the witnessed prefix-mass gain.
    """
    validate_certificate(cert, alloc, profile)
    improved = improved_allocation(cert, alloc)
    n = alloc.n
    out = []
    for i in range(n):
        pref = profile[i]
        k = cert.witnesses[i]
        if k is None:
            values = [ZERO] * n
            for a in range(n):
                values[a] = Fraction(n - pref.position_of[a], n)
            out.append(VnmUtility(tuple(values)))
            continue
        m = cumulative_prefix(alloc[i], pref)[k - 1]
        m2 = cumulative_prefix(improved[i], pref)[k - 1]
        if m2 <= m:
            raise InvalidCertificate(f"agent {i}: no strict prefix gain after scaling")
        eps = (m2 - m) / 2
        values = [ZERO] * n
        for p, a in enumerate(pref.ranking):
            if p < k:  # pivot at position k-1 gets exactly 1
                values[a] = ONE + eps * Fraction(k - 1 - p, k)
            else:
                values[a] = eps * Fraction(n - p, n - k + 1)
        out.append(VnmUtility(tuple(values)))
    return tuple(out)


def is_pareto_efficient_at(alloc: Allocation, utilities: Sequence[VnmUtility]):
    """Exact Pareto check at a fixed vNM profile via one LP over allocations."""
    n = alloc.n
    if len(utilities) != n:
        raise DimensionMismatch("one utility vector per agent required")
    nv = n * n
    var = lambda i, a: i * n + a
    obj = [ZERO] * nv
    for i in range(n):
        for a in range(n):
            obj[var(i, a)] = utilities[i].values[a]
    prog = lp.LinearProgram(nv, obj, nonneg=frozenset(range(nv)))
    for i in range(n):
        row = [ZERO] * nv
        for a in range(n):
            row[var(i, a)] = ONE
        prog.add(row, lp.EQ, 1)
    for a in range(n):
        col = [ZERO] * nv
        for i in range(n):
            col[var(i, a)] = ONE
        prog.add(col, lp.EQ, 1)
    for i in range(n):
        row = [ZERO] * nv
        for a in range(n):
            row[var(i, a)] = utilities[i].values[a]
        prog.add(row, lp.GE, utilities[i].value(alloc[i]))
    res = lp.solve(prog)
    assert isinstance(res, lp.Optimal)
    base = sum(utilities[i].value(alloc[i]) for i in range(n))
    if res.value == base:
        return Efficient()
    rows = tuple(tuple(res.x[var(i, a)] for a in range(n)) for i in range(n))
    return Improvement(validate_allocation(rows))


def sample_consistent_vnm(pref: Preference, rng: random.Random, grid: int = 1000) -> VnmUtility:
    """Utility vector from sorted uniform draws on the rational grid 1/grid..1."""
    n = pref.n
    draws = sorted(rng.sample(range(1, grid + 1), n), reverse=True)
    values = [ZERO] * n
    for p, a in enumerate(pref.ranking):
        values[a] = Fraction(draws[p], grid)
    return VnmUtility(tuple(values))
