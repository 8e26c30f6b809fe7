"""Exact rational linear programming via two-phase primal simplex.

Small dense tableau solver with Bland's anti-cycling rule.  Every number
is an exact rational, so the outcomes Infeasible / Unbounded / Optimal
are decided exactly, never up to a tolerance.  Internally gmpy2.mpq is
used when available (identical semantics, faster arithmetic); results
are always returned as `fractions.Fraction`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

LE, EQ, GE = "<=", "=", ">="


def _to_frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass
class LinearProgram:
    """maximize objective . x subject to linear constraints.

    Variables are free unless listed in `nonneg`.  Each constraint is a
    (coefficients, relation, rhs) triple with relation one of <=, =, >=.
    """

    num_vars: int
    objective: Sequence
    constraints: list = field(default_factory=list)
    nonneg: frozenset[int] = frozenset()

    def add(self, coeffs: Sequence, rel: str, rhs) -> None:
        if rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {rel!r}")
        if len(coeffs) != self.num_vars:
            raise ValueError("constraint width does not match num_vars")
        self.constraints.append((coeffs, rel, rhs))


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    x: tuple[Fraction, ...]


@dataclass(frozen=True)
class Unbounded:
    """A feasible point plus an improving ray along which x stays feasible."""

    x: tuple[Fraction, ...]
    ray: tuple[Fraction, ...]


@dataclass(frozen=True)
class Infeasible:
    pass


def evaluate(lp: LinearProgram, x: Sequence[Fraction]):
    """(objective value, all constraints satisfied exactly) at point x."""
    value = sum(Fraction(c) * x[j] for j, c in enumerate(lp.objective))
    ok = all(x[j] >= 0 for j in lp.nonneg)
    for coeffs, rel, rhs in lp.constraints:
        lhs = sum(Fraction(c) * x[j] for j, c in enumerate(coeffs))
        rhs = Fraction(rhs)
        if rel == LE:
            ok = ok and lhs <= rhs
        elif rel == GE:
            ok = ok and lhs >= rhs
        else:
            ok = ok and lhs == rhs
    return value, ok


def _pivot(rows, cost, basis, r, c):
    piv = rows[r][c]
    rows[r] = [v / piv for v in rows[r]]
    prow = rows[r]
    for i, row in enumerate(rows):
        if i != r and row[c] != 0:
            f = row[c]
            rows[i] = [v - f * p for v, p in zip(row, prow)]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [v - f * p for v, p in zip(cost, prow)]
    basis[r] = c


def _run(rows, cost, basis, allowed):
    """Bland-rule simplex on a tableau in canonical form; maximizing.

    cost holds reduced costs (entering candidates have cost[j] < 0).
    Returns "optimal" or ("unbounded", entering_column).
    """
    m = len(rows)
    while True:
        enter = -1
        for j in allowed:
            if cost[j] < 0:
                enter = j
                break
        if enter < 0:
            return "optimal", -1
        leave = -1
        best = None
        for i in range(m):
            a = rows[i][enter]
            if a > 0:
                ratio = rows[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded", enter
        _pivot(rows, cost, basis, leave, enter)


def solve(lp: LinearProgram):
    """Solve exactly; returns Optimal, Unbounded, or Infeasible."""
    zero, one = _Q(0), _Q(1)

    # Free variables are split x = x+ - x-; nonnegative ones get one column.
    col_of: list[tuple[int, int]] = []  # (plus column, minus column or -1)
    ncols = 0
    for v in range(lp.num_vars):
        if v in lp.nonneg:
            col_of.append((ncols, -1))
            ncols += 1
        else:
            col_of.append((ncols, ncols + 1))
            ncols += 2
    nstruct = ncols

    rows = []
    for coeffs, rel, rhs in lp.constraints:
        row = [zero] * nstruct
        for v, c in enumerate(coeffs):
            if c == 0:
                continue
            q = _Q(Fraction(c))
            jp, jm = col_of[v]
            row[jp] += q
            if jm >= 0:
                row[jm] -= q
        rows.append((row, rel, _Q(Fraction(rhs))))

    # Slack columns, then one artificial per row; rhs made nonnegative.
    m = len(rows)
    nslack = sum(1 for _, rel, _ in rows if rel != EQ)
    total = nstruct + nslack + m
    tableau = []
    basis = []
    si = nstruct
    for i, (row, rel, rhs) in enumerate(rows):
        full = row + [zero] * (nslack + m) + [rhs]
        if rel != EQ:
            full[si] = one if rel == LE else -one
            si += 1
        if full[-1] < 0:
            full = [-v for v in full]
        full[nstruct + nslack + i] = one
        tableau.append(full)
        basis.append(nstruct + nslack + i)

    # Phase 1: drive artificials to zero.
    cost1 = [zero] * (total + 1)
    for row in tableau:
        cost1 = [c - v for c, v in zip(cost1, row)]
    for j in range(nstruct + nslack, total):
        cost1[j] = zero
    allowed1 = range(nstruct + nslack)
    status, _ = _run(tableau, cost1, basis, allowed1)
    assert status == "optimal"
    if cost1[-1] != 0:  # leftover artificial mass
        return Infeasible()

    # Pivot residual artificials out of the basis; drop redundant rows.
    keep = []
    for i in range(len(tableau)):
        if basis[i] >= nstruct + nslack:
            piv = next((j for j in range(nstruct + nslack) if tableau[i][j] != 0), -1)
            if piv < 0:
                continue  # redundant constraint
            _pivot(tableau, cost1, basis, i, piv)
        keep.append(i)
    tableau = [tableau[i] for i in keep]
    basis = [basis[i] for i in keep]

    # Phase 2 with the real objective (maximize).
    obj = [zero] * (total + 1)
    for v, c in enumerate(lp.objective):
        if c == 0:
            continue
        q = _Q(Fraction(c))
        jp, jm = col_of[v]
        obj[jp] -= q
        if jm >= 0:
            obj[jm] += q
    cost2 = list(obj)
    for i, b in enumerate(basis):
        if cost2[b] != 0:
            f = cost2[b]
            cost2 = [c - f * v for c, v in zip(cost2, tableau[i])]
    allowed2 = range(nstruct + nslack)
    status, enter = _run(tableau, cost2, basis, allowed2)

    def point() -> tuple[Fraction, ...]:
        vals = [zero] * total
        for i, b in enumerate(basis):
            vals[b] = tableau[i][-1]
        out = []
        for jp, jm in col_of:
            v = vals[jp] - (vals[jm] if jm >= 0 else zero)
            out.append(_to_frac(v))
        return tuple(out)

    if status == "unbounded":
        direction = [zero] * total
        direction[enter] = one
        for i, b in enumerate(basis):
            direction[b] = -tableau[i][enter]
        ray = []
        for jp, jm in col_of:
            v = direction[jp] - (direction[jm] if jm >= 0 else zero)
            ray.append(_to_frac(v))
        return Unbounded(point(), tuple(ray))

    return Optimal(_to_frac(cost2[-1]), point())


def feasible_point(lp: LinearProgram):
    """Any feasible point, or Infeasible(); ignores the objective."""
    probe = LinearProgram(lp.num_vars, [0] * lp.num_vars, list(lp.constraints), lp.nonneg)
    res = solve(probe)
    if isinstance(res, Infeasible):
        return res
    return res.x
