"""Shared fixtures: small economies with known-good outcomes."""
from fractions import Fraction as F

import pytest

from ordalloc.core import profile_of, validate_allocation

A, B, C, D, E = range(5)


def row5(**kw):
    r = [F(0)] * 5
    for name, v in kw.items():
        r["abcde".index(name)] = F(v)
    return tuple(r)


@pytest.fixture(scope="session")
def clashing_tops_profile():
    """Five agents; agents 0,1,3 all want object a first, 2 and 4 want b."""
    return profile_of(
        [A, E, D, C, B],
        [A, B, D, E, C],
        [B, E, C, A, D],
        [A, E, B, C, D],
        [B, A, C, E, D],
    )


@pytest.fixture(scope="session")
def distinct_tops_profile():
    """Variant of the above where the opening pair's tops differ."""
    return profile_of(
        [A, B, D, C, E],
        [B, A, D, E, C],
        [B, E, C, A, D],
        [A, E, B, D, C],
        [B, A, C, E, D],
    )


@pytest.fixture(scope="session")
def clashing_tops_golden():
    """Output of the opportunistic-diarchy rule on clashing_tops_profile."""
    return validate_allocation([
        row5(a="1/3", e="2/3"),
        row5(a="2/3", b="1/3"),
        row5(d=1),
        row5(c="2/3", e="1/3"),
        row5(b="2/3", c="1/3"),
    ])


@pytest.fixture(scope="session")
def distinct_tops_golden():
    return validate_allocation([
        row5(a=1),
        row5(b=1),
        row5(c="1/2", e="1/2"),
        row5(d="1/2", e="1/2"),
        row5(c="1/2", d="1/2"),
    ])


@pytest.fixture(scope="session")
def tabled_rule_golden():
    """Output of the tabled five-agent rule on clashing_tops_profile."""
    return validate_allocation([
        row5(a="1/3", e="2/3"),
        row5(a="2/3", b="1/3"),
        row5(b="2/3", e="1/3"),
        row5(c="1/2", d="1/2"),
        row5(c="1/2", d="1/2"),
    ])


@pytest.fixture(scope="session")
def common_prefs_3():
    """Three agents all ranking a > b > c."""
    return profile_of([0, 1, 2], [0, 1, 2], [0, 1, 2])


@pytest.fixture(scope="session")
def wasteful_mixture():
    """Mixing the extremes: sd-efficient but not unambiguously so."""
    return validate_allocation([
        [F(1, 2), F(0), F(1, 2)],
        [F(1, 4), F(1, 2), F(1, 4)],
        [F(1, 4), F(1, 2), F(1, 4)],
    ])


@pytest.fixture(scope="session")
def chain_profile_8():
    """Eight agents: agent 0 ranks objects in index order; agent i >= 1
    ranks object i-1 first, then object 7, then the rest."""
    rankings = [list(range(8))]
    for i in range(1, 8):
        rest = [x for x in range(8) if x not in (i - 1, 7)]
        rankings.append([i - 1, 7] + rest)
    return profile_of(*rankings)


@pytest.fixture(scope="session")
def chain_allocation_8():
    """Row 0 uniform; row i >= 1 puts 7/8 on object i-1 and 1/8 on object 7.
    Unambiguously efficient despite every row being fractional."""
    rows = [[F(1, 8)] * 8]
    for i in range(1, 8):
        r = [F(0)] * 8
        r[i - 1] = F(7, 8)
        r[7] = F(1, 8)
        rows.append(r)
    return validate_allocation(rows)


@pytest.fixture(scope="session")
def four_agent_sd_profile():
    return profile_of(
        [0, 3, 2, 1],
        [0, 1, 3, 2],
        [1, 2, 0, 3],
        [0, 1, 2, 3],
    )
