"""Projective linear automorphism groups of L_{2,4} and L_{1,3}.

Projective classes are stored by a primitive integer representative (gcd
of entries 1).  For complex-scale classes the first nonzero entry is made
positive as well; since every class handled here has a rational
representative, two rational matrices are complex multiples of each other
exactly when these keys agree.  ``rep`` exposes the rational matrix scaled
so that its first nonzero entry is 1 (or +-1 for positive-scale classes).
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .exactq import QMatrix, Subspace, nullspace, primitive_integer_vector
from .mpoly import MultiPoly, compose_linear, product, proportional
from .varieties import (EdgeIndex, l13_linear_forms, sign_flip_matrix,
                        vertex_permutation_matrix)

DEFAULT_SAFETY_BOUND = 10 ** 6


class LiftError(RuntimeError):
    """A permutation of subspaces is not realised by a unique linear map."""


def safety_bound() -> int:
    return int(os.environ.get("MVAUT_SAFETY_BOUND", DEFAULT_SAFETY_BOUND))


def _primitive(ints: Sequence[int], fix_sign: bool) -> tuple[int, ...]:
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ZeroDivisionError("zero matrix has no projective class")
    out = [x // g for x in ints]
    if fix_sign and next(x for x in out if x) < 0:
        out = [-x for x in out]
    return tuple(out)


def _int_entries(M: QMatrix) -> list[int]:
    den = lcm(*(x.denominator for x in M.entries))
    return [int(x * den) for x in M.entries]


def _int_matmul(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = []
    cols = [b[j::n] for j in range(n)]
    for i in range(n):
        r = a[i * n:(i + 1) * n]
        for c in cols:
            out.append(sum(x * y for x, y in zip(r, c)))
    return out


@dataclass(frozen=True)
class ProjClass:
    """Invertible square matrix up to a nonzero scalar."""

    n: int
    key: tuple[int, ...]
    signed = False

    @classmethod
    def from_matrix(cls, M: QMatrix) -> "ProjClass":
        if M.rows != M.cols:
            raise ValueError("projective classes need square matrices")
        return cls(M.rows, _primitive(_int_entries(M), fix_sign=not cls.signed))

    @property
    def matrix(self) -> QMatrix:
        """Primitive integer representative."""
        return QMatrix(self.n, self.n, self.key)

    @property
    def rep(self) -> QMatrix:
        first = next(x for x in self.key if x)
        d = abs(first) if self.signed else first
        return QMatrix(self.n, self.n, (Fraction(x, d) for x in self.key))

    def __mul__(self, other: "ProjClass") -> "ProjClass":
        if self.n != other.n or type(self) is not type(other):
            raise ValueError("incompatible classes")
        return type(self)(self.n, _primitive(_int_matmul(self.key, other.key, self.n),
                                             fix_sign=not self.signed))

    def inverse(self) -> "ProjClass":
        return type(self).from_matrix(self.matrix.inverse())

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for x in self.key)

    def negated(self) -> "ProjClass":
        return type(self)(self.n, tuple(-x for x in self.key))


@dataclass(frozen=True)
class SignedProjClass(ProjClass):
    """Real matrix up to a positive scalar; X and -X are different classes."""

    signed = True


def identity_class(n: int, cls=ProjClass) -> ProjClass:
    return cls.from_matrix(QMatrix.identity(n))


@dataclass
class MatrixGroup:
    elements: set
    generators: list = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self.elements

    def sorted_elements(self) -> list:
        return sorted(self.elements, key=lambda c: c.key)


def group_closure(gens: Iterable, identity, bound: int | None = None) -> MatrixGroup:
    """Close hashable group elements under multiplication (enough for a finite group).

    Generators already in the current closure are skipped, so the work is
    |G| times the number of generators that actually enlarge the group.
    """
    gens = list(dict.fromkeys(gens))
    bound = safety_bound() if bound is None else bound
    seen = {identity}
    used: list = []
    for g in gens:
        if g in seen:
            continue
        used.append(g)
        # the old closure is a group, so its elements only need the new generator
        old = frozenset(seen)
        frontier = deque(old)
        while frontier:
            x = frontier.popleft()
            for h in ([g] if x in old else used):
                y = h * x
                if y not in seen:
                    seen.add(y)
                    if len(seen) > bound:
                        raise RuntimeError(f"closure exceeded safety bound {bound}")
                    frontier.append(y)
    return MatrixGroup(seen, gens)


def projective_closure(gens: Iterable[ProjClass], bound: int | None = None) -> MatrixGroup:
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    return group_closure(gens, identity_class(gens[0].n, type(gens[0])), bound)


def lift_subspace_permutation(sources: Sequence[Subspace], targets: Sequence[Subspace]) -> ProjClass:
    """Unique-up-to-scale A with A(sources[i]) inside targets[i] for every i.

    Each pair contributes (normal of target) . A . (basis vector of source) = 0.
    """
    if len(sources) != len(targets) or not sources:
        raise ValueError("need matching nonempty source and target lists")
    n = sources[0].ambient_dim
    rows = []
    for S, T in zip(sources, targets):
        for nv in T.annihilator().vectors():
            for b in S.vectors():
                rows.append([nv[r] * b[c] for r in range(n) for c in range(n)])
    K = nullspace(QMatrix.from_rows(rows, cols=n * n))
    if K.dim != 1:
        raise LiftError(f"lifting system ({len(rows)}x{n * n}) has nullspace dimension {K.dim}")
    A = QMatrix(n, n, K.basis.row(0))
    if A.rank() != n:
        raise LiftError("lifted matrix is singular")
    return ProjClass.from_matrix(A)


def lifting_system_shape(flats) -> tuple[int, int]:
    n = flats[0].subspace.ambient_dim
    rows = sum(f.subspace.annihilator().dim * f.subspace.dim for f in flats)
    return rows, n * n


def lift_graph_automorphism(rho: Sequence[int], flats, lines=None) -> ProjClass:
    """Linear map realising a graph automorphism of the flat/line incidence graph.

    ``rho`` is a permutation of the vertices (flats first, then lines).  When
    ``lines`` is given, the induced action on lines is checked as well.
    """
    nf = len(flats)
    sources = [f.subspace for f in flats]
    targets = [flats[rho[i]].subspace for i in range(nf)]
    A = lift_subspace_permutation(sources, targets)
    if lines is not None:
        M = A.matrix
        for j, L in enumerate(lines):
            if L.subspace.image(M) != lines[rho[nf + j] - nf].subspace:
                raise LiftError(f"lifted map does not send line {j} to line {rho[nf + j] - nf}")
    return A


def induced_subspace_permutation(A: QMatrix, spaces: Sequence[Subspace]) -> tuple[int, ...]:
    index = {S: i for i, S in enumerate(spaces)}
    out = []
    for S in spaces:
        img = S.image(A)
        if img not in index:
            raise ValueError("matrix does not permute the given subspaces")
        out.append(index[img])
    return tuple(out)


def is_variety_automorphism(A: QMatrix, P: MultiPoly) -> Fraction | None:
    """c with P(A x) = c P(x), or None."""
    if A.rank() != A.rows:
        raise ValueError("matrix is singular")
    return proportional(compose_linear(P, A), P)


def _simplex_points(nvars: int, degree: int) -> np.ndarray:
    pts = [c for c in itertools.product(range(degree + 1), repeat=nvars) if sum(c) == degree]
    return np.array(pts, dtype=np.int64).T


def batch_preserves(keys: Sequence[tuple[int, ...]], n: int, P: MultiPoly) -> np.ndarray:
    """Exact test of P(A x) ~ P(x) for many integer matrices at once.

    Both sides are homogeneous of the same degree, so they agree up to a
    constant iff their values agree up to that constant on the lattice
    points of the scaled simplex {a >= 0, sum(a) = deg}, a unisolvent set
    for homogeneous polynomials of that degree.  Arithmetic is int64 with an
    a-priori overflow bound; larger inputs fall back to Python integers.
    """
    if not P.is_homogeneous() or P.is_zero():
        raise ValueError("need a nonzero homogeneous polynomial")
    deg = P.degree()
    den = lcm(*(c.denominator for c in P.terms.values()))
    exps = np.array(list(P.terms.keys()), dtype=np.int64)
    coefs = [int(c * den) for c in P.terms.values()]
    X = _simplex_points(n, deg)
    M = np.array(keys, dtype=object).reshape(len(keys), n, n)
    row_bound = int(max(np.abs(M).sum(axis=2).max(), 1)) * deg
    term_bound = sum(abs(c) for c in coefs) * row_bound ** deg
    dtype = np.int64 if term_bound < 2 ** 62 else object
    M = M.astype(dtype)
    Xd = X.astype(dtype)

    def evaluate(Y):  # Y: (..., n, npts)
        total = np.zeros(Y.shape[:-2] + Y.shape[-1:], dtype=dtype)
        for e, c in zip(exps, coefs):
            t = np.full(total.shape, c, dtype=dtype)
            for i, k in enumerate(e):
                if k:
                    t = t * Y[..., i, :] ** int(k)
            total = total + t
        return total

    base = evaluate(Xd[None])[0]
    vals = evaluate(M @ Xd)

    def normalise(v):
        v = np.asarray(v)
        g = np.gcd.reduce(v.astype(object) if dtype is object else v, axis=-1)
        g = np.where(g == 0, 1, g)
        v = v // g[..., None]
        first = np.take_along_axis(v, np.argmax(v != 0, axis=-1)[..., None], axis=-1)
        return v * np.where(first < 0, -1, 1)

    nb = normalise(base)
    nv = normalise(vals)
    nonzero = np.any(vals != 0, axis=-1)
    return nonzero & np.all(nv == nb[None], axis=-1)


def flat_action_table(keys: Sequence[tuple[int, ...]], flats) -> np.ndarray:
    """Row k gives the flat permutation induced by matrix k (-1 where no flat matches)."""
    n = flats[0].subspace.ambient_dim
    N = []
    B = []
    for f in flats:
        N.extend(primitive_integer_vector(v) for v in f.subspace.annihilator().vectors())
        B.extend(primitive_integer_vector(v) for v in f.subspace.vectors())
    N = np.array(N, dtype=np.int64)
    B = np.array(B, dtype=np.int64).T
    nf = len(flats)
    Ms = np.array(keys, dtype=np.int64).reshape(len(keys), n, n)
    bound = np.abs(N).sum(axis=1).max() * np.abs(Ms).sum(axis=2).max() * np.abs(B).max()
    if bound >= 2 ** 52:
        raise OverflowError("entries too large for exact float64 products")
    # float64 products of these small integers are exact and use BLAS
    N, B, Ms = N.astype(float), B.astype(float), Ms.astype(float)
    out = np.full((len(keys), nf), -1, dtype=np.int64)
    for lo in range(0, len(keys), 256):
        C = (N[None] @ Ms[lo:lo + 256] @ B[None]).reshape(-1, nf, 3, nf, 3)
        hit = ~np.any(C != 0, axis=(2, 4))  # hit[k, j, i]: A_k F_i inside F_j
        unique = hit.sum(axis=1) == 1
        out[lo:lo + 256] = np.where(unique, np.argmax(hit, axis=1), -1)
    return out


def positive_real_group(g: MatrixGroup) -> MatrixGroup:
    """Split every complex-scale class into its two positive-scale classes."""
    out = set()
    for x in g.elements:
        a = SignedProjClass(x.n, x.key)
        b = a.negated()
        if a == b or a in out or b in out:
            raise AssertionError("class fixed by negation")
        out.update((a, b))
    n = next(iter(g.elements)).n
    gens = [SignedProjClass(x.n, x.key) for x in g.generators]
    gens.append(SignedProjClass.from_matrix(-QMatrix.identity(n)))
    return MatrixGroup(out, gens)


def vertex_relabeling_classes(n_vertices: int = 4, cls=ProjClass) -> list[ProjClass]:
    return [cls.from_matrix(vertex_permutation_matrix(p))
            for p in itertools.permutations(range(n_vertices))]


def sign_flip_classes(N: int = 6, cls=ProjClass) -> list[ProjClass]:
    return list(dict.fromkeys(cls.from_matrix(sign_flip_matrix(s))
                              for s in itertools.product((1, -1), repeat=N)))


def nonnegative_elements(g: MatrixGroup) -> list[SignedProjClass]:
    return sorted((x for x in g.elements if x.is_nonnegative()), key=lambda c: c.key)


@lru_cache(maxsize=None)
def _relabeling_keys(n_vertices: int, cls) -> frozenset:
    return frozenset(c.key for c in vertex_relabeling_classes(n_vertices, cls))


def is_vertex_relabeling(x: ProjClass, n_vertices: int = 4) -> bool:
    return x.key in _relabeling_keys(n_vertices, type(x))


def regge_matrix() -> QMatrix:
    """The Regge map on (l12, l13, l23, l14, l24, l34): fixes l13 and l24 and
    replaces each 4-cycle length by half the sum of the other three minus itself."""
    h = Fraction(1, 2)
    rows = [
        [-h, 0, h, h, 0, h],
        [0, 1, 0, 0, 0, 0],
        [h, 0, -h, h, 0, h],
        [h, 0, h, -h, 0, h],
        [0, 0, 0, 0, 1, 0],
        [h, 0, h, h, 0, -h],
    ]
    return QMatrix.from_rows(rows)


def expected_group() -> MatrixGroup:
    """Vertex relabelings and coordinate sign flips of K4 edge space."""
    return projective_closure(vertex_relabeling_classes(4) + sign_flip_classes(6))


def generation_check(subset: Iterable[ProjClass], g: MatrixGroup) -> bool:
    subset = list(subset)
    if any(x not in g for x in subset):
        raise ValueError("subset is not contained in the group")
    return projective_closure(subset, bound=max(g.order, 1)).elements == g.elements


def l13_automorphisms() -> MatrixGroup:
    """Projective automorphisms of L_{1,3} from permutations of its four planes."""
    normals = l13_linear_forms()
    planes = [nullspace(QMatrix.from_rows([nv])) for nv in normals]
    P = product(MultiPoly.linear_form(nv) for nv in normals)
    found = []
    for sigma in itertools.permutations(range(4)):
        A = lift_subspace_permutation(planes, [planes[s] for s in sigma])
        if is_variety_automorphism(A.matrix, P) is not None:
            found.append(A)
    g = projective_closure(found)
    if g.order != len(set(found)):
        raise AssertionError("lifted plane permutations are not closed")
    return g


def is_signed_permutation(x: ProjClass) -> bool:
    n = x.n
    rows = [x.key[i * n:(i + 1) * n] for i in range(n)]
    mags = {abs(v) for v in x.key if v}
    if len(mags) != 1:
        return False
    return all(sum(1 for v in r if v) == 1 for r in rows) and \
        all(sum(1 for i in range(n) if rows[i][j]) == 1 for j in range(n))


def underlying_permutation(x: ProjClass) -> tuple[int, ...]:
    """Column j of a signed permutation has its nonzero in row perm[j]."""
    n = x.n
    return tuple(next(i for i in range(n) if x.key[i * n + j]) for j in range(n))


def l13_vertex_relabeling_perms() -> set[tuple[int, ...]]:
    idx = EdgeIndex(3)
    out = set()
    for p in itertools.permutations(range(3)):
        out.add(tuple(idx.slot(p[i], p[j]) for i, j in idx.edges))
    return out
