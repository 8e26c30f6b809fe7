"""Two efficiency notions, one allocation.

Three agents all rank a > b > c.  Mixing the assignment (a, b, c) with
its reverse (c, b, a) half-and-half for agent 0 looks harmless: no
alternative allocation weakly SD-improves everyone, so the mixture is
*ambiguously* efficient.  But it is not *unambiguously* efficient --
there is a consistent vNM utility profile under which everybody can be
made better off, and the library produces it.

Run:  python3 demos/01_efficiency_notions.py
"""
from fractions import Fraction as F

from ordalloc import (
    Certified,
    Efficient,
    Improvement,
    falsifying_utilities,
    is_ambiguously_efficient,
    is_pareto_efficient_at,
    is_unambiguously_efficient,
    profile_of,
    validate_allocation,
)
from ordalloc.efficiency import improved_allocation


def show(title, rows):
    print(title)
    for row in rows:
        print("   ", "  ".join(str(x).rjust(5) for x in row))


def main():
    profile = profile_of([0, 1, 2], [0, 1, 2], [0, 1, 2])
    alloc = validate_allocation([
        [F(1, 2), F(0), F(1, 2)],
        [F(1, 4), F(1, 2), F(1, 4)],
        [F(1, 4), F(1, 2), F(1, 4)],
    ])
    show("Allocation (everyone ranks a > b > c):", alloc.rows)

    amb = is_ambiguously_efficient(alloc, profile)
    print("\nAmbiguously efficient:", isinstance(amb, Efficient))

    unamb = is_unambiguously_efficient(alloc, profile)
    print("Unambiguously efficient:", isinstance(unamb, Efficient))
    assert isinstance(unamb, Certified)

    cert = unamb.certificate
    show("\nCertificate shift (rows sum to 0, columns sum to 0):", cert.shift.eta)
    print("Witness depths per agent:", cert.witnesses)
    show("\nApplying the shift at maximal scale:", improved_allocation(cert, alloc).rows)

    print("\nThe certificate converts into explicit vNM utilities that are")
    print("consistent with everyone's ranking yet expose the waste:")
    utilities = falsifying_utilities(cert, alloc, profile)
    for i, u in enumerate(utilities):
        print(f"  agent {i}: {tuple(str(v) for v in u.values)}")

    res = is_pareto_efficient_at(alloc, utilities)
    assert isinstance(res, Improvement)
    show("\nPareto improvement at those utilities:", res.allocation.rows)
    for i, u in enumerate(utilities):
        before, after = u.value(alloc[i]), u.value(res.allocation[i])
        print(f"  agent {i}: expected utility {before} -> {after}")


if __name__ == "__main__":
    main()
