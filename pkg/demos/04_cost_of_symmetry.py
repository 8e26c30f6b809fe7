"""How much welfare can symmetry cost?

When everyone reports the same ranking a_1 > a_2 > ... > a_n, a
symmetric mechanism must hand out the uniform lottery.  That lottery is
sd-efficient, yet for a suitable consistent utility profile a chain of
exactly-indifferent bilateral trades lifts agent 0's expected utility
by almost (n-2)/n of the best object -- approaching the whole gap as
the economy grows.

Run:  python3 demos/04_cost_of_symmetry.py
"""
from fractions import Fraction as F

from ordalloc import symmetry_cost
from ordalloc.core import uniform_allocation
from ordalloc.efficiency import Efficient, is_ambiguously_efficient
from ordalloc.welfare import common_ranking_profile, tilted_utilities


def main():
    eps = F(1, 10**6)
    print(f"eps = {eps}\n")
    print("  n   agent 0 gain           limit (n-2)/n")
    for n in range(3, 9):
        r = symmetry_cost(n, eps)
        print(f"  {n}   {str(r.gain):<22} {r.bound}")

    n = 5
    r = symmetry_cost(n, eps)
    print(f"\nAt n = {n}, agent 0's post-trade lottery:")
    for a, p in enumerate(r.lottery):
        if p:
            print(f"  object {a + 1}: {p}")

    utilities = tilted_utilities(n, eps)
    uni = uniform_allocation(n)
    print("\nEvery trading partner is exactly indifferent:")
    for j in range(1, n):
        assert utilities[j].value(r.allocation[j]) == utilities[j].value(uni[j])
        print(f"  agent {j}: {utilities[j].value(uni[j])} before and after")

    verdict = is_ambiguously_efficient(uni, common_ranking_profile(n))
    print("\nAnd yet the uniform lottery is sd-efficient:", isinstance(verdict, Efficient))
    print("The waste is invisible to ordinal comparisons alone.")


if __name__ == "__main__":
    main()
