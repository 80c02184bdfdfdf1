"""Measurement maps, defining polynomials and desk-scale rank checks.

Edges of K_n are indexed in colex order, so for four points the coordinate
order is 12, 13, 23, 14, 24, 34.  Vertices are 0-based in code and 1-based
in labels.  Everything is exact except the tangent-space probes, which need
square roots of rationals and therefore run in floating point.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from .exactq import QMatrix, as_rational, det
from .mpoly import MultiPoly, compose_linear, proportional

Edge = tuple[int, int]

SV_RTOL = 1e-8


@dataclass(frozen=True)
class EdgeIndex:
    n: int
    edges: tuple[Edge, ...] = field(init=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two vertices")
        order = tuple((i, j) for j in range(self.n) for i in range(j))
        object.__setattr__(self, "edges", order)

    @property
    def N(self) -> int:
        return len(self.edges)

    def slot(self, i: int, j: int) -> int:
        if i == j or not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"invalid edge ({i}, {j}) for n={self.n}")
        i, j = min(i, j), max(i, j)
        return j * (j - 1) // 2 + i

    def edge(self, slot: int) -> Edge:
        return self.edges[slot]

    def labels(self) -> list[str]:
        return [f"{i + 1}{j + 1}" for i, j in self.edges]


def vertex_permutation_matrix(perm: Sequence[int]) -> QMatrix:
    """Edge permutation induced by relabeling vertex v as perm[v]: (P l)_{perm e} = l_e."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"not a permutation: {perm}")
    idx = EdgeIndex(n)
    rows = [[0] * idx.N for _ in range(idx.N)]
    for k, (i, j) in enumerate(idx.edges):
        rows[idx.slot(perm[i], perm[j])][k] = 1
    return QMatrix.from_rows(rows, cols=idx.N)


def sign_flip_matrix(signs: Sequence[int]) -> QMatrix:
    if any(s not in (1, -1) for s in signs):
        raise ValueError("sign flips must be +-1")
    return QMatrix.diag(list(signs))


def n_from_N(N: int) -> int:
    n = 2
    while n * (n - 1) // 2 < N:
        n += 1
    if n * (n - 1) // 2 != N:
        raise ValueError(f"{N} is not a triangular number")
    return n


@dataclass(frozen=True)
class Configuration:
    """n points in d-space, stored as an n x d rational matrix."""

    coords: QMatrix

    @classmethod
    def from_points(cls, points: Sequence[Sequence]) -> "Configuration":
        if not points:
            raise ValueError("empty configuration")
        return cls(QMatrix.from_rows(points))

    @property
    def n(self) -> int:
        return self.coords.rows

    @property
    def d(self) -> int:
        return self.coords.cols

    def point(self, i: int) -> tuple[Fraction, ...]:
        return self.coords.row(i)


def random_configuration(d: int, n: int, rng: random.Random, bound: int = 100) -> Configuration:
    return Configuration(QMatrix(n, d, (rng.randint(-bound, bound) for _ in range(n * d))))


def measure_squared(p: Configuration) -> tuple[Fraction, ...]:
    idx = EdgeIndex(p.n)
    out = []
    for i, j in idx.edges:
        out.append(sum(((a - b) ** 2 for a, b in zip(p.point(i), p.point(j))), Fraction(0)))
    return tuple(out)


def measure_lengths_float(points: np.ndarray) -> np.ndarray:
    """Unsquared edge lengths of a float configuration (n x d), colex order."""
    n = points.shape[0]
    idx = EdgeIndex(n)
    return np.array([np.linalg.norm(points[i] - points[j]) for i, j in idx.edges])


def gram_from_squared(m: Sequence, n: int) -> QMatrix:
    """Gram matrix of the first n-1 points with the last point at the origin."""
    idx = EdgeIndex(n)
    if len(m) != idx.N:
        raise ValueError(f"expected {idx.N} squared lengths, got {len(m)}")
    m = [as_rational(x) for x in m]
    last = n - 1

    def sq(i, j):
        return Fraction(0) if i == j else m[idx.slot(i, j)]

    return QMatrix(last, last, ((sq(a, last) + sq(b, last) - sq(a, b)) / 2
                                for a in range(last) for b in range(last)))


def squared_from_gram(G: QMatrix) -> tuple[Fraction, ...]:
    if G.rows != G.cols:
        raise ValueError("Gram matrix must be square")
    n = G.rows + 1
    idx = EdgeIndex(n)

    def g(a, b):
        return Fraction(0) if a == n - 1 or b == n - 1 else G[a, b]

    return tuple(g(i, i) + g(j, j) - 2 * g(i, j) for i, j in idx.edges)


def _poly_det(M: list[list[MultiPoly]]) -> MultiPoly:
    n = len(M)
    if n == 1:
        return M[0][0]
    total = MultiPoly.zero(M[0][0].nvars)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _poly_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass(frozen=True)
class DefiningPoly:
    d: int
    squared: MultiPoly
    unsquared: MultiPoly

    @property
    def index(self) -> EdgeIndex:
        return EdgeIndex(self.d + 2)


def square_substitute(P: MultiPoly) -> MultiPoly:
    """Substitute each variable by its square."""
    return MultiPoly(P.nvars, {tuple(2 * k for k in e): c for e, c in P.terms.items()})


_DEFINING_CACHE: dict[int, DefiningPoly] = {}


def defining_poly(d: int) -> DefiningPoly:
    """Simplicial volume determinant cutting out M_{d,d+2}, and its unsquared pullback."""
    if d not in (1, 2, 3):
        raise ValueError(f"defining polynomial only available for d in (1, 2, 3), got {d}")
    if d not in _DEFINING_CACHE:
        n = d + 2
        idx = EdgeIndex(n)
        m = [MultiPoly.var(idx.N, k) for k in range(idx.N)]
        zero = MultiPoly.zero(idx.N)
        last = n - 1

        def sq(i, j):
            return zero if i == j else m[idx.slot(i, j)]

        mat = [[sq(a, last) + sq(b, last) - sq(a, b) for b in range(last)] for a in range(last)]
        squared = _poly_det(mat)
        _DEFINING_CACHE[d] = DefiningPoly(d, squared, square_substitute(squared))
    return _DEFINING_CACHE[d]


def l13_linear_forms() -> list[tuple[int, int, int]]:
    """Normals of the four planes making up L_{1,3}, coordinates (l12, l13, l23)."""
    return [(1, -1, 1), (1, 1, -1), (-1, 1, 1), (1, 1, 1)]


def poly_eval_float(P: MultiPoly, x: Sequence[float]) -> tuple[float, float]:
    """Float value of P at x, together with the sum of absolute term magnitudes."""
    x = np.asarray(x, dtype=float)
    val = 0.0
    scale = 0.0
    for e, c in P.terms.items():
        t = float(c) * float(np.prod(x ** np.array(e)))
        val += t
        scale += abs(t)
    return val, scale


def _validate_edges(E: Sequence[Edge], n: int) -> list[Edge]:
    out = []
    for e in E:
        i, j = e
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"invalid edge {e} for n={n}")
        out.append((min(i, j), max(i, j)))
    return out


def rigidity_matrix(p: Configuration, E: Sequence[Edge]) -> QMatrix:
    """Rows are the gradients of the squared edge lengths m_ij at p."""
    n, d = p.n, p.d
    E = _validate_edges(E, n)
    rows = []
    for i, j in E:
        r = [Fraction(0)] * (d * n)
        for k in range(d):
            diff = p.point(i)[k] - p.point(j)[k]
            r[i * d + k] = 2 * diff
            r[j * d + k] = -2 * diff
        rows.append(r)
    return QMatrix.from_rows(rows, cols=d * n)


def is_inf_independent(E: Sequence[Edge], d: int, trials: int = 5, seed: int = 0,
                       n: int | None = None) -> bool:
    """Randomised test: does the rigidity matrix reach full row rank somewhere?"""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    E = list(E)
    if not E:
        return True
    if n is None:
        n = max(max(e) for e in E) + 1
    rng = random.Random(seed)
    for _ in range(trials):
        p = random_configuration(d, n, rng)
        if rigidity_matrix(p, E).rank() == len(E):
            return True
    return False


def voldet_scale_check(s12, s13, s23) -> Fraction | None:
    """Proportionality constant of the d=1 determinant under m_ij -> s_ij m_ij."""
    s = [as_rational(x) for x in (s12, s13, s23)]
    if not all(s):
        raise ValueError("scales must be nonzero")
    P = defining_poly(1).squared
    return proportional(compose_linear(P, QMatrix.diag(s)), P)


def signflip_det_sum(X: QMatrix, Y: QMatrix) -> Fraction:
    """Sum of det(S X + Y) over all diagonal sign matrices S."""
    if X.rows != X.cols or X.shape != Y.shape:
        raise ValueError("X and Y must be square of the same size")
    r = X.rows
    Xr = X.to_rows()
    Yr = Y.to_rows()
    total = Fraction(0)
    for signs in itertools.product((1, -1), repeat=r):
        Z = [[s * x + y for x, y in zip(xr, yr)] for s, xr, yr in zip(signs, Xr, Yr)]
        total += det(Z)
    return total


def _float_rank(M: np.ndarray, rtol: float = SV_RTOL) -> int:
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > rtol * sv[0]))


def good_point(l: Sequence, d: int) -> bool:
    """No zero coordinate and the Gram matrix of the squared point has rank exactly d.

    Exact when every coordinate is rational, floating point otherwise.
    """
    n = n_from_N(len(l))
    if any(x == 0 for x in l):
        return False
    if all(isinstance(x, (int, Fraction)) for x in l):
        m = [as_rational(x) ** 2 for x in l]
        return gram_from_squared(m, n).rank() == d
    m = np.asarray(l, dtype=float) ** 2
    idx = EdgeIndex(n)
    last = n - 1
    G = np.zeros((last, last))
    for a in range(last):
        for b in range(last):
            mab = 0.0 if a == b else m[idx.slot(a, b)]
            G[a, b] = (m[idx.slot(a, last)] + m[idx.slot(b, last)] - mab) / 2
    return _float_rank(G) == d


def edge_forget_matrix(E: Sequence[Edge], n: int) -> QMatrix:
    idx = EdgeIndex(n)
    E = _validate_edges(E, n)
    if len(set(E)) != len(E):
        raise ValueError("duplicate edges")
    rows = []
    for i, j in E:
        r = [0] * idx.N
        r[idx.slot(i, j)] = 1
        rows.append(r)
    return QMatrix.from_rows(rows, cols=idx.N)


def tangent_basis_float(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edge lengths l(p) and an N x dn matrix whose columns span T_l L_{d,n}.

    The differential of l = sqrt(m) is the rigidity matrix with the row of
    edge ij divided by 2 l_ij.
    """
    n, d = points.shape
    idx = EdgeIndex(n)
    l = measure_lengths_float(points)
    R = np.zeros((idx.N, d * n))
    for k, (i, j) in enumerate(idx.edges):
        diff = points[i] - points[j]
        R[k, i * d:(i + 1) * d] = 2 * diff
        R[k, j * d:(j + 1) * d] = -2 * diff
    return l, R / (2 * l)[:, None]


@dataclass
class ProbeReport:
    probe: str
    d: int
    n: int
    E: list[list[float]]
    max_rank: int
    trials: int
    seed: int
    trial_ranks: list[int]
    flips: int

    def as_record(self) -> dict:
        return {"probe": self.probe, "d": self.d, "n": self.n, "E": self.E,
                "max_rank": self.max_rank, "trials": self.trials, "seed": self.seed,
                "trial_ranks": self.trial_ranks, "flips": self.flips}


def projection_rank_probe(E: np.ndarray, d: int, n: int, trials: int = 20, seed: int = 0,
                          flips: int = 64, max_retries: int = 100) -> ProbeReport:
    """Largest numerical rank of E applied to the tangent spaces of L_{d,n}.

    For each of ``trials`` random configurations the tangent space is taken
    at l(p) and at ``flips`` coordinate flips of it (the identity flip is
    always included; every flip is used when 2^N <= flips).
    ``trial_ranks`` holds the best rank per configuration.
    """
    if d < 1 or n < d + 2:
        raise ValueError("need d >= 1 and n >= d + 2")
    E = np.asarray(E, dtype=float)
    N = n * (n - 1) // 2
    if E.ndim != 2 or E.shape[1] != N:
        raise ValueError(f"E must have {N} columns")
    rng = np.random.default_rng(seed)
    full_dim = d * n - comb(d + 1, 2)
    if 2 ** N <= flips:
        flip_set = np.array(list(itertools.product((1.0, -1.0), repeat=N)))
    else:
        flip_set = np.vstack([np.ones(N), rng.choice((1.0, -1.0), size=(flips - 1, N))])
    trial_ranks = []
    for _ in range(trials):
        for _attempt in range(max_retries):
            pts = rng.integers(-100, 101, size=(n, d)).astype(float)
            l, T = tangent_basis_float(pts)
            if np.all(l > 0) and _float_rank(T) == full_dim:
                break
        else:
            raise RuntimeError("could not sample a nondegenerate configuration")
        best = 0
        for s in flip_set:
            best = max(best, _float_rank(E @ (s[:, None] * T)))
        trial_ranks.append(best)
    return ProbeReport("lin-image", d, n, E.tolist(), max(trial_ranks), trials, seed,
                       trial_ranks, len(flip_set))


def k_subgraph_edges(vertices: Sequence[int]) -> list[Edge]:
    vs = sorted(vertices)
    return [(vs[a], vs[b]) for b in range(len(vs)) for a in range(b)]


def is_complete_on_some_vertices(E: Sequence[Edge], k: int) -> bool:
    """True iff E is exactly the edge set of some K_k."""
    E = set(_validate_edges(E, max(max(e) for e in E) + 1)) if E else set()
    vs = {v for e in E for v in e}
    return len(vs) == k and E == set(k_subgraph_edges(vs))


def simplex_exhaustive_check(d: int = 2, n: int = 5, trials: int = 5, seed: int = 0) -> dict:
    """Check that among edge sets of size <= C(d+2,2) only K_{d+2} is dependent."""
    idx = EdgeIndex(n)
    D = comb(d + 2, 2)
    checked = 0
    mismatches = []
    dependent = []
    for k in range(D + 1):
        for E in itertools.combinations(idx.edges, k):
            indep = is_inf_independent(E, d, trials=trials, seed=seed + checked, n=n)
            expect_dep = k == D and is_complete_on_some_vertices(E, d + 2)
            if not indep:
                dependent.append(list(E))
            if indep == expect_dep:
                mismatches.append(list(E))
            checked += 1
    return {"checked": checked, "dependent": dependent, "mismatches": mismatches}
