"""Birkhoff-von Neumann decomposition with exact rational weights.

Any bistochastic matrix is a convex combination of permutation
matrices.  We repeatedly extract a perfect matching from the bipartite
graph of positive entries (augmenting paths, columns tried in ascending
index for determinism) and subtract the smallest matched entry.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Allocation, ONE, ZERO, permutation_matrix, validate_allocation


@dataclass(frozen=True)
class Decomposition:
    terms: tuple[tuple[Fraction, Allocation], ...]


def _perfect_matching(rows: list[list[Fraction]]) -> list[int]:
    """match[i] = column assigned to row i, over positive entries only."""
    n = len(rows)
    col_owner = [-1] * n

    def augment(i: int, seen: set[int]) -> bool:
        for a in range(n):
            if rows[i][a] > 0 and a not in seen:
                seen.add(a)
                if col_owner[a] < 0 or augment(col_owner[a], seen):
                    col_owner[a] = i
                    return True
        return False

    for i in range(n):
        if not augment(i, set()):
            raise AssertionError("no perfect matching in a bistochastic support graph")
    match = [-1] * n
    for a, i in enumerate(col_owner):
        match[i] = a
    return match


def decompose(alloc: Allocation) -> Decomposition:
    n = alloc.n
    rows = [list(r) for r in alloc.rows]
    remaining = ONE
    terms = []
    while remaining > 0:
        match = _perfect_matching(rows)
        weight = min(rows[i][match[i]] for i in range(n))
        terms.append((weight, permutation_matrix(match)))
        for i in range(n):
            rows[i][match[i]] -= weight
        remaining -= weight
    return Decomposition(tuple(terms))


def recompose(d: Decomposition) -> Allocation:
    n = d.terms[0][1].n
    acc = [[ZERO] * n for _ in range(n)]
    for w, perm in d.terms:
        for i in range(n):
            for a in range(n):
                acc[i][a] += w * perm[i][a]
    return validate_allocation(acc)
