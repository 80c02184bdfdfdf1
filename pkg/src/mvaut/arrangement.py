"""The singular arrangement of L_{2,4} and its flat/line incidence graph.

Flats are built from their explicit linear equations in the edge
coordinates (12, 13, 23, 14, 24, 34).  Lines are the one-dimensional
subspaces obtained by intersecting pairs and triples of flats.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactq import QMatrix, Subspace, contains, intersect, nullspace
from .mpoly import MultiPoly, poly_eval, substitute_linear
from .varieties import EdgeIndex, defining_poly

IDX = EdgeIndex(4)
AMBIENT = IDX.N
TRIANGLES = list(itertools.combinations(range(4), 3))
# The three 4-cycles of K4, each given by the perfect matching it omits.
FOUR_CYCLES = [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]


def _slot(i: int, j: int) -> int:
    return IDX.slot(i, j)


def _vec(coeffs: dict[int, int]) -> list[int]:
    v = [0] * AMBIENT
    for k, c in coeffs.items():
        v[k] += c
    return v


@dataclass(frozen=True)
class Flat:
    subspace: Subspace
    flat_type: str
    label: tuple
    normals: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return self.subspace.dim


@dataclass(frozen=True)
class Line:
    subspace: Subspace
    direction: tuple[int, ...]
    line_type: str
    provenance: str


def _make_flat(normals: list[list[int]], flat_type: str, label: tuple) -> Flat:
    S = nullspace(QMatrix.from_rows(normals, cols=AMBIENT))
    if S.dim != 3:
        raise AssertionError(f"flat {flat_type}{label} has dimension {S.dim}")
    return Flat(S, flat_type, label, tuple(tuple(n) for n in normals))


def type1_flats() -> list[Flat]:
    out = []
    for s13, s23, s14, s24, s34 in itertools.product((1, -1), repeat=5):
        normals = [
            _vec({_slot(0, 1): 1, _slot(0, 2): -s13, _slot(1, 2): s23}),
            _vec({_slot(0, 1): 1, _slot(0, 3): -s14, _slot(1, 3): s24}),
            _vec({_slot(0, 2): s13, _slot(0, 3): -s14, _slot(2, 3): s34}),
        ]
        out.append(_make_flat(normals, "I", (("s13", s13), ("s23", s23), ("s14", s14),
                                            ("s24", s24), ("s34", s34))))
    return out


def type2_flats() -> list[Flat]:
    """Collapse edge ij: l_ij = 0 and l_ik = s_k l_jk for the two other vertices k."""
    out = []
    for i, j in IDX.edges:
        others = [k for k in range(4) if k not in (i, j)]
        for signs in itertools.product((1, -1), repeat=2):
            normals = [_vec({_slot(i, j): 1})]
            for k, s in zip(others, signs):
                normals.append(_vec({_slot(i, k): 1, _slot(j, k): -s}))
            out.append(_make_flat(normals, "II", (("collapse", f"{i + 1}{j + 1}"),) +
                                  tuple((f"s{j + 1}{k + 1}", s) for k, s in zip(others, signs))))
    return out


def type3_flats() -> list[Flat]:
    out = []
    for tri in TRIANGLES:
        normals = [_vec({_slot(a, b): 1}) for a, b in itertools.combinations(tri, 2)]
        out.append(_make_flat(normals, "III", (("triangle", "".join(str(v + 1) for v in tri)),)))
    return out


def singular_flats() -> list[Flat]:
    """The 60 three-dimensional flats making up the singular locus of L_{2,4}."""
    flats = type1_flats() + type2_flats() + type3_flats()
    if len({f.subspace for f in flats}) != len(flats):
        raise AssertionError("singular flats are not distinct")
    return flats


def classify_line(direction: Sequence[int]) -> str:
    support = [abs(x) for x in direction if x]
    if set(support) != {1}:
        raise ValueError(f"unexpected line direction {tuple(direction)}")
    kind = {1: "I", 4: "II", 3: "III"}.get(len(support))
    if kind is None:
        raise ValueError(f"unexpected line support size {len(support)}")
    return kind


def intersection_lines(flats: Sequence[Flat]) -> list[Line]:
    """All lines arising as intersections of two or three flats.

    Triples are intersections of a pairwise result with a further flat.
    Lines are returned sorted by (type, direction) so the output does not
    depend on the order of ``flats``.
    """
    found: dict[Subspace, str] = {}
    pair_results: set[Subspace] = set()
    for a, b in itertools.combinations(flats, 2):
        S = intersect(a.subspace, b.subspace)
        if S.dim == 1:
            found.setdefault(S, "pair")
        elif S.dim >= 2:
            pair_results.add(S)
    for S in pair_results:
        for f in flats:
            if contains(f.subspace, S):
                continue
            T = intersect(S, f.subspace)
            if T.dim == 1 and T not in found:
                found[T] = "triple"
    lines = []
    for S, prov in found.items():
        direction = S.direction()
        lines.append(Line(S, direction, classify_line(direction), prov))
    order = {"I": 0, "II": 1, "III": 2}
    lines.sort(key=lambda L: (order[L.line_type], tuple(-abs(x) for x in L.direction), L.direction))
    return lines


@dataclass(frozen=True)
class IncidenceGraph:
    flats: tuple[Flat, ...]
    lines: tuple[Line, ...]
    adjacency: tuple[tuple[bool, ...], ...]

    @property
    def colors(self) -> list[int]:
        return [0] * len(self.flats) + [1] * len(self.lines)

    @property
    def n_vertices(self) -> int:
        return len(self.flats) + len(self.lines)

    def edges(self) -> list[tuple[int, int]]:
        nf = len(self.flats)
        return [(i, nf + j) for i, row in enumerate(self.adjacency) for j, a in enumerate(row) if a]

    def adjacency_matrix(self) -> list[list[bool]]:
        n = self.n_vertices
        A = [[False] * n for _ in range(n)]
        for u, v in self.edges():
            A[u][v] = A[v][u] = True
        return A

    def to_dot(self) -> str:
        out = ["graph Delta {"]
        for i, f in enumerate(self.flats):
            out.append(f'  F{i} [label="F{i} {f.flat_type}", shape=box];')
        for j, L in enumerate(self.lines):
            d = ",".join(str(x) for x in L.direction)
            out.append(f'  L{j} [label="L{j} {L.line_type} ({d})", shape=ellipse];')
        for i, row in enumerate(self.adjacency):
            for j, a in enumerate(row):
                if a:
                    out.append(f"  F{i} -- L{j};")
        out.append("}")
        return "\n".join(out) + "\n"

    def to_json(self) -> dict:
        return {
            "edge_order": IDX.labels(),
            "flats": [{"id": f"F{i}", "type": f.flat_type, "label": [list(x) for x in f.label],
                       "basis": [[str(x) for x in v] for v in f.subspace.vectors()],
                       "normals": [list(n) for n in f.normals]}
                      for i, f in enumerate(self.flats)],
            "lines": [{"id": f"L{j}", "type": L.line_type, "direction": list(L.direction),
                       "provenance": L.provenance}
                      for j, L in enumerate(self.lines)],
            "edges": [[f"F{i}", f"L{j - len(self.flats)}"] for i, j in self.edges()],
        }


def incidence_graph(flats: Sequence[Flat], lines: Sequence[Line]) -> IncidenceGraph:
    adj = tuple(tuple(contains(f.subspace, L.subspace) for L in lines) for f in flats)
    return IncidenceGraph(tuple(flats), tuple(lines), adj)


def flat_in_variety(S: Subspace, P: MultiPoly) -> bool:
    """Exact test that P vanishes identically on the subspace S."""
    if S.ambient_dim != P.nvars:
        raise ValueError("subspace and polynomial live in different spaces")
    if S.dim == 0:
        return P.is_homogeneous() and (P.is_zero() or P.degree() > 0)
    return substitute_linear(P, S.basis.T).is_zero()


def generic_point(S: Subspace, rng: random.Random) -> tuple[Fraction, ...]:
    coeffs = [Fraction(rng.randint(1, 97), rng.randint(1, 13)) for _ in range(S.dim)]
    v = [Fraction(0)] * S.ambient_dim
    for c, b in zip(coeffs, S.vectors()):
        v = [x + c * y for x, y in zip(v, b)]
    return tuple(v)


def gradient_vanishes(S: Subspace, P: MultiPoly, seed: int = 0) -> bool:
    """Exact check that grad P is zero at a random rational point of S."""
    x = generic_point(S, random.Random(seed))
    return all(poly_eval(g, x) == 0 for g in P.gradient())


def l24_polynomial() -> MultiPoly:
    return defining_poly(2).unsquared


def coordinate_subspace(slots: Sequence[int]) -> Subspace:
    return Subspace.from_span([[1 if k == s else 0 for k in range(AMBIENT)] for s in slots], AMBIENT)


def dump_json(graph: IncidenceGraph) -> str:
    return json.dumps(graph.to_json(), sort_keys=True) + "\n"
