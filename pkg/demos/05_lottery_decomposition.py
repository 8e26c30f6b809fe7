"""From bistochastic matrices to implementable lotteries.

A random assignment is a bistochastic matrix, but what gets carried out
in the end is a deterministic assignment.  The Birkhoff-von Neumann
decomposition writes any such matrix as an exact convex combination of
permutation matrices: draw one of the listed assignments with its
weight and every agent faces exactly the marginal probabilities of the
original matrix.

Run:  python3 demos/05_lottery_decomposition.py
"""
from ordalloc import decompose, profile_of, recompose, uniform_rsd


def main():
    profile = profile_of(
        [0, 1, 2, 3],
        [0, 2, 1, 3],
        [1, 0, 3, 2],
        [2, 3, 0, 1],
    )
    alloc = uniform_rsd(profile)
    print("Uniform random dictatorship output:")
    for row in alloc.rows:
        print("   ", "  ".join(str(p).rjust(5) for p in row))

    d = decompose(alloc)
    print(f"\nDecomposed into {len(d.terms)} deterministic assignments:")
    for w, perm in d.terms:
        assignment = [row.index(1) for row in perm.rows]
        print(f"  with probability {w}: agents get objects {assignment}")

    assert recompose(d) == alloc
    assert sum(w for w, _ in d.terms) == 1
    print("\nRecomposition is bit-exact; weights sum to 1 exactly.")


if __name__ == "__main__":
    main()
