from fractions import Fraction as F

import pytest

from ordalloc.core import uniform_allocation
from ordalloc.efficiency import Efficient, is_ambiguously_efficient
from ordalloc.welfare import (
    DegenerateDenominator,
    InadmissibleEpsilon,
    common_ranking_profile,
    exchange_rate,
    symmetry_cost,
    tilted_utilities,
)


def test_exchange_rate_values():
    eps = F(1, 100)
    assert exchange_rate(3, 3, eps) == eps
    # n=5, k=3: mu = eps / (1 - 2 eps)
    assert exchange_rate(3, 5, eps) == eps / (1 - 2 * eps)
    assert exchange_rate(5, 5, eps) == 3 * eps


def test_exchange_rate_domain():
    with pytest.raises(ValueError):
        exchange_rate(2, 5, F(1, 100))
    with pytest.raises(DegenerateDenominator):
        exchange_rate(3, 5, F(1, 2))


def test_tilted_utilities_are_consistent():
    profile = common_ranking_profile(5)
    utilities = tilted_utilities(5, F(1, 100))
    for i, u in enumerate(utilities):
        assert u.consistent_with(profile[i])


def test_admissibility():
    with pytest.raises(InadmissibleEpsilon):
        symmetry_cost(5, F(0))
    with pytest.raises(InadmissibleEpsilon):
        symmetry_cost(5, F(1, 3))  # (n-2)*eps = 1
    with pytest.raises(InadmissibleEpsilon):
        symmetry_cost(5, F(-1, 10))


def test_report_exact_gain_formula():
    for n in (3, 4, 5, 6):
        eps = F(1, 1000)
        r = symmetry_cost(n, eps)
        assert r.gain == F(n - 2, n) * (1 - (n - 1) * eps)
        assert r.bound == F(n - 2, n)
        assert r.bound - r.gain == F((n - 2) * (n - 1), n) * eps


def test_traded_allocation_is_bistochastic_and_targeted():
    r = symmetry_cost(5, F(1, 1000))
    # agent 0 bought every other agent's share of the second-best object
    assert r.allocation[0][1] == F(4, 5)
    for j in range(2, 5):
        assert r.allocation[j][1] == 0
    # the bystander with index 1 keeps the uniform lottery
    assert r.allocation[1] == uniform_allocation(5)[1]
    assert r.lottery == r.allocation[0]


def test_partners_exactly_indifferent():
    eps = F(1, 7)
    n = 4
    r = symmetry_cost(n, eps)
    utilities = tilted_utilities(n, eps)
    uni = uniform_allocation(n)
    for j in range(1, n):
        assert utilities[j].value(r.allocation[j]) == utilities[j].value(uni[j])
    assert utilities[0].value(r.allocation[0]) > utilities[0].value(uni[0])


def test_uniform_stays_ambiguously_efficient():
    profile = common_ranking_profile(4)
    assert isinstance(is_ambiguously_efficient(uniform_allocation(4), profile), Efficient)
