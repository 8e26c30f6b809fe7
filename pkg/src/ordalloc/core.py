"""Exact-rational domain types for random assignment of indivisible objects.

Agents and objects are dense 0-based indices; there are exactly as many
agents as objects and at least three of each.  All probabilities are
`fractions.Fraction` values -- floating point never enters the core.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

Rat = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)

MIN_SIZE = 3


def rat(value) -> Fraction:
    """Coerce ints, strings like "2/3", or Fractions to an exact rational."""
    if isinstance(value, float):
        raise TypeError("floats are not allowed in exact-rational code: %r" % (value,))
    return Fraction(value)


class ValidationError(ValueError):
    """Base class for all domain validation failures."""


class NonSquare(ValidationError):
    pass


class TooSmall(ValidationError):
    pass


class RowSumViolation(ValidationError):
    def __init__(self, agent: int, total: Fraction):
        super().__init__(f"row {agent} sums to {total}, expected 1")
        self.agent = agent
        self.total = total


class ColumnSumViolation(ValidationError):
    def __init__(self, obj: int, total: Fraction):
        super().__init__(f"column {obj} sums to {total}, expected 1")
        self.obj = obj
        self.total = total


class RangeViolation(ValidationError):
    def __init__(self, agent: int, obj: int, value: Fraction):
        super().__init__(f"entry ({agent},{obj}) = {value} outside [0,1]")
        self.agent = agent
        self.obj = obj
        self.value = value


class DimensionMismatch(ValidationError):
    pass


@dataclass(frozen=True)
class Preference:
    """A strict linear order over objects, best first."""

    ranking: tuple[int, ...]

    def __post_init__(self):
        n = len(self.ranking)
        if sorted(self.ranking) != list(range(n)):
            raise ValidationError(f"ranking {self.ranking} is not a permutation of 0..{n - 1}")

    @cached_property
    def position_of(self) -> tuple[int, ...]:
        """position_of[obj] = 0-based rank of obj (0 = best)."""
        pos = [0] * len(self.ranking)
        for p, obj in enumerate(self.ranking):
            pos[obj] = p
        return tuple(pos)

    @property
    def n(self) -> int:
        return len(self.ranking)

    def prefers(self, a: int, b: int) -> bool:
        return self.position_of[a] < self.position_of[b]

    def upper_contour(self, obj: int) -> tuple[int, ...]:
        """Objects weakly preferred to obj, in ranking order (obj included)."""
        return self.ranking[: self.position_of[obj] + 1]


@dataclass(frozen=True)
class Profile:
    """One strict preference per agent."""

    prefs: tuple[Preference, ...]

    def __post_init__(self):
        if len(self.prefs) < MIN_SIZE:
            raise TooSmall(f"need at least {MIN_SIZE} agents, got {len(self.prefs)}")
        for i, p in enumerate(self.prefs):
            if p.n != len(self.prefs):
                raise DimensionMismatch(f"agent {i} ranks {p.n} objects in an economy of {len(self.prefs)}")

    @property
    def n(self) -> int:
        return len(self.prefs)

    def __getitem__(self, i: int) -> Preference:
        return self.prefs[i]

    def __iter__(self) -> Iterator[Preference]:
        return iter(self.prefs)

    def replace(self, agent: int, pref: Preference) -> "Profile":
        prefs = list(self.prefs)
        prefs[agent] = pref
        return Profile(tuple(prefs))


def profile_of(*rankings: Sequence[int]) -> Profile:
    return Profile(tuple(Preference(tuple(r)) for r in rankings))


def validate_lottery(probs: Sequence) -> tuple[Fraction, ...]:
    row = tuple(rat(p) for p in probs)
    for a, p in enumerate(row):
        if p < 0 or p > 1:
            raise RangeViolation(0, a, p)
    if sum(row) != 1:
        raise RowSumViolation(0, sum(row))
    return row


def support(row: Sequence[Fraction]) -> tuple[int, ...]:
    return tuple(a for a, p in enumerate(row) if p != 0)


@dataclass(frozen=True)
class Allocation:
    """A bistochastic matrix of exact rationals; row i is agent i's lottery."""

    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.rows[i]

    def column(self, a: int) -> tuple[Fraction, ...]:
        return tuple(row[a] for row in self.rows)

    def support_pattern(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, a) for i, row in enumerate(self.rows) for a, p in enumerate(row) if p != 0)

    def is_deterministic(self) -> bool:
        return all(p in (ZERO, ONE) for row in self.rows for p in row)


def validate_allocation(rows: Sequence[Sequence]) -> Allocation:
    """Check squareness, entry range, and exact row/column sums of 1."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NonSquare(f"matrix is not square: {n} rows, widths {[len(r) for r in rows]}")
    if n < MIN_SIZE:
        raise TooSmall(f"need at least {MIN_SIZE} objects, got {n}")
    mat = tuple(tuple(rat(p) for p in r) for r in rows)
    for i, row in enumerate(mat):
        for a, p in enumerate(row):
            if p < 0 or p > 1:
                raise RangeViolation(i, a, p)
    for i, row in enumerate(mat):
        total = sum(row)
        if total != 1:
            raise RowSumViolation(i, total)
    for a in range(n):
        total = sum(row[a] for row in mat)
        if total != 1:
            raise ColumnSumViolation(a, total)
    return Allocation(mat)


def permutation_matrix(assignment: Sequence[int]) -> Allocation:
    """Allocation giving agent i the object assignment[i] with certainty."""
    n = len(assignment)
    rows = tuple(tuple(ONE if a == assignment[i] else ZERO for a in range(n)) for i in range(n))
    return validate_allocation(rows)


def uniform_allocation(n: int) -> Allocation:
    p = Fraction(1, n)
    return validate_allocation([[p] * n for _ in range(n)])


def enumerate_profiles(n: int) -> Iterator[Profile]:
    """All (n!)^n profiles, in lexicographic order of per-agent permutation indices."""
    if n < MIN_SIZE:
        raise TooSmall(f"need at least {MIN_SIZE} agents, got {n}")
    perms = [Preference(p) for p in itertools.permutations(range(n))]
    for combo in itertools.product(perms, repeat=n):
        yield Profile(combo)


def apply_object_permutation(profile: Profile, rho: Sequence[int]) -> Profile:
    """Relabel objects: object a becomes rho[a] in every ranking, order kept."""
    if sorted(rho) != list(range(profile.n)):
        raise ValidationError(f"{rho} is not a permutation of the objects")
    return Profile(tuple(Preference(tuple(rho[a] for a in p.ranking)) for p in profile))


def permute_allocation_objects(alloc: Allocation, rho: Sequence[int]) -> Allocation:
    """Relabel an allocation's object columns: new column rho[a] = old column a."""
    n = alloc.n
    rows = []
    for row in alloc.rows:
        new = [ZERO] * n
        for a in range(n):
            new[rho[a]] = row[a]
        rows.append(tuple(new))
    return Allocation(tuple(rows))
