"""Randomized structural properties, exact at every draw."""
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from ordalloc.bvn import decompose, recompose
from ordalloc.core import (
    Preference,
    apply_object_permutation,
    permutation_matrix,
    permute_allocation_objects,
    profile_of,
)
from ordalloc.mechanisms import rsd, serial_dictatorship
from ordalloc.sd import SdComparison, compare_sd


def perms(n):
    return st.permutations(list(range(n)))


def lotteries(n):
    """Random rational lotteries with denominator up to 60."""

    @st.composite
    def build(draw):
        weights = [draw(st.integers(0, 12)) for _ in range(n)]
        if sum(weights) == 0:
            weights[draw(st.integers(0, n - 1))] = 1
        total = sum(weights)
        return tuple(F(w, total) for w in weights)

    return build()


@given(lotteries(4), lotteries(4), perms(4))
@settings(max_examples=100, deadline=None)
def test_sd_antisymmetry(x, y, ranking):
    pref = Preference(tuple(ranking))
    assert compare_sd(x, y, pref) is compare_sd(y, x, pref).flipped()
    assert compare_sd(x, x, pref) is SdComparison.EQUAL


@given(perms(4), st.lists(perms(4), min_size=4, max_size=4))
@settings(max_examples=60, deadline=None)
def test_serial_dictatorship_equivariance(rho, rankings):
    """Relabeling objects commutes with running the dictatorship."""
    profile = profile_of(*rankings)
    order = (0, 1, 2, 3)
    direct = serial_dictatorship(order, apply_object_permutation(profile, rho))
    relabeled = permute_allocation_objects(serial_dictatorship(order, profile), rho)
    assert direct == relabeled


@given(st.lists(perms(4), min_size=4, max_size=4), st.data())
@settings(max_examples=40, deadline=None)
def test_bvn_round_trip_on_rsd_mixtures(rankings, data):
    profile = profile_of(*rankings)
    orders = [(0, 1, 2, 3), (3, 2, 1, 0), (1, 3, 0, 2)]
    w = [data.draw(st.integers(1, 5)) for _ in orders]
    total = sum(w)
    alloc = rsd({o: F(x, total) for o, x in zip(orders, w)}, profile)
    d = decompose(alloc)
    assert recompose(d) == alloc
    assert sum(weight for weight, _ in d.terms) == 1


@given(perms(5))
@settings(max_examples=50, deadline=None)
def test_permutation_matrix_decomposition_is_trivial(assignment):
    a = permutation_matrix(assignment)
    assert decompose(a).terms == ((F(1), a),)
