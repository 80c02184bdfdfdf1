"""Sweep the edge-forgetting rank probe over every 6-edge subset of K5 (d=2).

Prints, for each edge set, the best rank seen and whether the set is a K4.
Only the K4 sets should stay below rank 6.
"""

import argparse
import itertools

import numpy as np

from mvaut.varieties import (EdgeIndex, edge_forget_matrix, is_complete_on_some_vertices,
                             projection_rank_probe)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--flips", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    idx = EdgeIndex(5)
    bad = 0
    for k, E in enumerate(itertools.combinations(idx.edges, 6)):
        M = np.array(edge_forget_matrix(E, 5).to_rows(), dtype=float)
        rank = projection_rank_probe(M, 2, 5, trials=args.trials, seed=args.seed + k,
                                     flips=args.flips).max_rank
        k4 = is_complete_on_some_vertices(E, 4)
        bad += (rank < 6) != k4
        label = " ".join(f"{i + 1}{j + 1}" for i, j in E)
        print(f"{label}\trank={rank}\tK4={k4}")
    print(f"mismatches: {bad}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
