"""The reflection group of the type I and II lines, its root system and Dynkin type."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, isqrt, lcm
from typing import Sequence

from .autgroup import MatrixGroup, SignedProjClass, _primitive, group_closure
from .exactq import QMatrix

Vector = tuple[int, ...]

DEFAULT_H = (1, 3, 9, 27, 81, 243)


def dot(f: Sequence, g: Sequence):
    return sum(a * b for a, b in zip(f, g))


@dataclass(frozen=True)
class RatMatrix:
    """Exact rational square matrix as integer numerators over one positive denominator."""

    n: int
    den: int
    nums: tuple[int, ...]

    @classmethod
    def make(cls, n: int, den: int, nums) -> "RatMatrix":
        nums = tuple(nums)
        g = reduce(gcd, nums, den)
        if den < 0:
            g = -g
        return cls(n, den // g, tuple(x // g for x in nums))

    @classmethod
    def from_qmatrix(cls, M: QMatrix) -> "RatMatrix":
        den = lcm(*(x.denominator for x in M.entries))
        return cls.make(M.rows, den, (int(x * den) for x in M.entries))

    def to_qmatrix(self) -> QMatrix:
        return QMatrix(self.n, self.n, (Fraction(x, self.den) for x in self.nums))

    def __mul__(self, other: "RatMatrix") -> "RatMatrix":
        n = self.n
        cols = [other.nums[j::n] for j in range(n)]
        out = [sum(x * y for x, y in zip(self.nums[i * n:(i + 1) * n], c))
               for i in range(n) for c in cols]
        return RatMatrix.make(n, self.den * other.den, out)

    def is_orthogonal(self) -> bool:
        M = self.to_qmatrix()
        return M.T @ M == QMatrix.identity(self.n)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        n = self.n
        return tuple(Fraction(dot(self.nums[i * n:(i + 1) * n], v), self.den) for i in range(n))


def reflection(f: Sequence) -> QMatrix:
    """Orthogonal reflection I - 2 f f^T / (f . f)."""
    f = [Fraction(x) for x in f]
    ff = dot(f, f)
    if ff == 0:
        raise ValueError("cannot reflect in the zero vector")
    n = len(f)
    return QMatrix(n, n, ((1 if i == j else 0) - 2 * f[i] * f[j] / ff
                          for i in range(n) for j in range(n)))


def reflection_group(directions: Sequence[Vector], bound: int | None = None) -> MatrixGroup:
    gens = [RatMatrix.from_qmatrix(reflection(f)) for f in directions]
    n = len(directions[0])
    return group_closure(gens, RatMatrix.from_qmatrix(QMatrix.identity(n)), bound)


@dataclass(frozen=True)
class RootSystem:
    roots: tuple[Vector, ...]
    reflections: tuple[QMatrix, ...]

    @property
    def rank(self) -> int:
        return len(self.roots[0])


def _integral_root(f: Vector) -> Vector:
    """2 f / |f| for an integer vector whose squared norm is a perfect square."""
    ff = dot(f, f)
    r = isqrt(ff)
    if r * r != ff:
        raise ValueError(f"|{f}| is irrational")
    out = [Fraction(2 * x, r) for x in f]
    if any(x.denominator != 1 for x in out):
        raise ValueError(f"2f/|f| is not integral for {f}")
    return tuple(int(x) for x in out)


def pairing(f: Sequence, g: Sequence) -> Fraction:
    """Crystallographic pairing 2 (f.g)/(g.g)."""
    return Fraction(2 * dot(f, g), dot(g, g))


def root_system(directions: Sequence[Vector]) -> RootSystem:
    roots = []
    for f in directions:
        r = _integral_root(f)
        roots.extend([r, tuple(-x for x in r)])
    if len(set(roots)) != len(roots):
        raise ValueError("duplicate roots")
    refl = tuple(reflection(f) for f in directions)
    rootset = set(roots)
    for R in refl:
        for r in roots:
            img = R.apply(r)
            if any(x.denominator != 1 for x in img) or tuple(int(x) for x in img) not in rootset:
                raise ValueError("root set is not invariant under its reflections")
    for f in roots:
        for g in roots:
            if pairing(f, g).denominator != 1:
                raise ValueError(f"non-integral pairing between {f} and {g}")
    return RootSystem(tuple(sorted(roots, reverse=True)), refl)


def is_reduced(rs: RootSystem) -> bool:
    rootset = set(rs.roots)
    for r in rs.roots:
        for c in (2, 3, Fraction(1, 2)):
            m = tuple(c * x for x in r)
            if all(Fraction(x).denominator == 1 for x in m) and tuple(int(x) for x in m) in rootset:
                return False
    return True


def positive_roots(rs: RootSystem, h: Sequence = DEFAULT_H) -> list[Vector]:
    if any(dot(h, r) == 0 for r in rs.roots):
        raise ValueError("h is orthogonal to a root")
    return [r for r in rs.roots if dot(h, r) > 0]


def _generic_h(rs: RootSystem, h: Sequence | None) -> Sequence:
    candidates = [h] if h is not None else []
    candidates += [DEFAULT_H] + [tuple(k ** i for i in range(rs.rank)) for k in range(4, 12)]
    for c in candidates:
        if len(c) != rs.rank:
            continue
        bad = False
        for r in rs.roots:
            if dot(c, r) == 0:
                bad = True
                break
            # proportional to a root
            if QMatrix.from_rows([list(c), list(r)]).rank() < 2:
                bad = True
                break
        if not bad:
            return c
    raise ValueError("no generic h found")


def simple_roots(rs: RootSystem, h: Sequence | None = None) -> list[Vector]:
    """Positive roots that are not sums of two positive roots."""
    h = _generic_h(rs, h)
    pos = positive_roots(rs, h)
    if 2 * len(pos) != len(rs.roots):
        raise ValueError("h does not split the roots in half")
    sums = {tuple(a + b for a, b in zip(f, g)) for f in pos for g in pos}
    simple = [f for f in pos if f not in sums]
    if len(simple) != rs.rank or QMatrix.from_rows(simple).rank() != rs.rank:
        raise ValueError(f"found {len(simple)} simple roots, expected a basis of size {rs.rank}")
    return sorted(simple, key=lambda f: dot(h, f))


def simple_coordinates(simple: Sequence[Vector], root: Vector) -> tuple[Fraction, ...]:
    """Coefficients of ``root`` in the basis of simple roots."""
    B = QMatrix.from_rows(simple).T
    return B.inverse().apply(root)


def cartan_matrix(simple: Sequence[Vector]) -> list[list[int]]:
    return [[int(pairing(f, g)) for g in simple] for f in simple]


@dataclass(frozen=True)
class DynkinDiagram:
    nodes: int
    edges: tuple[tuple[int, int], ...]
    label: str

    def degrees(self) -> list[int]:
        deg = [0] * self.nodes
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def to_dot(self) -> str:
        out = [f'graph Dynkin {{\n  label="{self.label}";']
        out += [f"  a{i};" for i in range(self.nodes)]
        out += [f"  a{a} -- a{b};" for a, b in self.edges]
        return "\n".join(out) + "\n}\n"


def _connected(n: int, edges) -> bool:
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    todo = [0]
    while todo:
        for y in adj[todo.pop()]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == n


def _arm_lengths(n: int, edges, center: int) -> list[int]:
    adj = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    arms = []
    for start in adj[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [y for y in adj[cur] if y != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return sorted(arms)


def dynkin_diagram(simple: Sequence[Vector]) -> DynkinDiagram:
    """Build the diagram from exact angles and classify the simply laced tree.

    cos^2 of the angle is (f.g)^2 / ((f.f)(g.g)); only 0 (orthogonal) and 1/4
    with negative inner product (angle 2pi/3) are accepted.
    """
    n = len(simple)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            f, g = simple[i], simple[j]
            c2 = Fraction(dot(f, g) ** 2, dot(f, f) * dot(g, g))
            if c2 == 0:
                continue
            if c2 == Fraction(1, 4) and dot(f, g) < 0:
                edges.append((i, j))
                continue
            raise ValueError(f"unexpected angle between simple roots {i} and {j}: cos^2 = {c2}")
    edges = tuple(edges)
    if len({dot(f, f) for f in simple}) != 1:
        raise ValueError("roots of different lengths")
    if len(edges) != n - 1 or not _connected(n, edges):
        raise ValueError("diagram is not a tree")
    deg = DynkinDiagram(n, edges, "").degrees()
    branch = [v for v in range(n) if deg[v] == 3]
    if max(deg) <= 2:
        label = f"A{n}"
    elif len(branch) == 1 and max(deg) == 3:
        arms = _arm_lengths(n, edges, branch[0])
        if arms[:2] == [1, 1]:
            label = f"D{n}"
        elif arms == [1, 2, 2]:
            label = "E6"
        elif arms == [1, 2, 3]:
            label = "E7"
        elif arms == [1, 2, 4]:
            label = "E8"
        else:
            raise ValueError(f"not a finite type tree, arms {arms}")
    else:
        raise ValueError("not a finite type tree")
    return DynkinDiagram(n, edges, label)


def dynkin_classify(simple: Sequence[Vector]) -> str:
    return dynkin_diagram(simple).label


def weyl_order(label: str) -> int:
    from math import factorial
    kind, n = label[0], int(label[1:])
    if kind == "A":
        return factorial(n + 1)
    if kind == "D":
        return 2 ** (n - 1) * factorial(n)
    return {"E6": 51840, "E7": 2903040, "E8": 696729600}[label]


def positive_scale_classes(W: MatrixGroup) -> set[SignedProjClass]:
    return {SignedProjClass(x.n, _primitive(x.nums, fix_sign=False)) for x in W.elements}
