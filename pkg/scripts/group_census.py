"""Tabulate the positive-scale automorphism classes by shape.

Splits the group into vertex relabelings, other signed permutations and the
rest, and counts how many elements of each kind preserve nonnegativity.
"""

from collections import Counter

from mvaut.autgroup import is_signed_permutation, is_vertex_relabeling, positive_real_group
from mvaut.pipeline import build_paut


def kind(x) -> str:
    if is_vertex_relabeling(x):
        return "vertex relabeling"
    if is_signed_permutation(x):
        return "signed permutation"
    return "other"


def main() -> None:
    paut, _ = build_paut()
    ppos = positive_real_group(paut)
    counts = Counter((kind(x), x.is_nonnegative()) for x in ppos.elements)
    print(f"order {ppos.order}")
    for (k, nonneg), c in sorted(counts.items()):
        print(f"{k:20s} nonnegative={nonneg!s:5s} {c}")


if __name__ == "__main__":
    main()
