"""Sparse multivariate polynomials with rational coefficients.

A polynomial is a map from exponent tuples to nonzero :class:`Fraction`
coefficients.  Terms iterate in graded lexicographic order, which is also
the order used by :meth:`MultiPoly.to_text`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactq import QMatrix, as_rational

Exponent = tuple[int, ...]


def _grlex_key(e: Exponent):
    return (-sum(e), tuple(-x for x in e))


class MultiPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            c = as_rational(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def linear_form(cls, coeffs: Sequence) -> "MultiPoly":
        n = len(coeffs)
        return cls(n, {tuple(1 if k == i else 0 for k in range(n)): c for i, c in enumerate(coeffs)})

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]) -> "MultiPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"nvars mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        c = as_rational(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = scale

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __call__(self, point: Sequence) -> Fraction:
        return poly_eval(self, point)

    def partial(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly._raw(self.nvars, out)

    def gradient(self) -> list["MultiPoly"]:
        return [self.partial(i) for i in range(self.nvars)]

    def to_text(self, names: Sequence[str] | None = None) -> str:
        """Deterministic text form: grlex-sorted monomials with exact coefficients."""
        if not self.terms:
            return "0"
        names = list(names) if names is not None else [f"x{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}: {self.to_text()})"


def poly_add(P: MultiPoly, Q: MultiPoly) -> MultiPoly:
    return P + Q


def poly_mul(P: MultiPoly, Q: MultiPoly) -> MultiPoly:
    return P * Q


def poly_eval(P: MultiPoly, point: Sequence) -> Fraction:
    if len(point) != P.nvars:
        raise ValueError(f"point has {len(point)} coordinates, polynomial has {P.nvars} variables")
    x = [as_rational(v) for v in point]
    total = Fraction(0)
    for e, c in P.terms.items():
        t = c
        for xi, k in zip(x, e):
            if k:
                t *= xi ** k
        total += t
    return total


def substitute_linear(P: MultiPoly, M: QMatrix) -> MultiPoly:
    """Return ``P(M t)`` as a polynomial in ``M.cols`` variables ``t``.

    Powers of each image linear form are memoised, so the cost is dominated
    by the final products.
    """
    if M.rows != P.nvars:
        raise ValueError(f"matrix has {M.rows} rows, polynomial has {P.nvars} variables")
    k = M.cols
    forms = [MultiPoly.linear_form(M.row(i)) if k else MultiPoly.zero(0) for i in range(M.rows)]
    cache: dict[tuple[int, int], MultiPoly] = {}

    def power(i: int, a: int) -> MultiPoly:
        key = (i, a)
        if key not in cache:
            if a == 0:
                cache[key] = MultiPoly.constant(k, 1)
            elif a == 1:
                cache[key] = forms[i]
            else:
                cache[key] = power(i, a - 1) * forms[i]
        return cache[key]

    out: dict[Exponent, Fraction] = {}
    for e, c in P.terms.items():
        prod = MultiPoly.constant(k, c)
        for i, a in enumerate(e):
            if a:
                prod = prod * power(i, a)
        for f, v in prod.terms.items():
            out[f] = out.get(f, 0) + v
    return MultiPoly._raw(k, {e: c for e, c in out.items() if c})


def compose_linear(P: MultiPoly, A: QMatrix) -> MultiPoly:
    """Pull back ``P`` through the square matrix ``A``: returns ``P(A x)``."""
    if A.rows != A.cols or A.rows != P.nvars:
        raise ValueError(f"need a {P.nvars}x{P.nvars} matrix, got {A.rows}x{A.cols}")
    return substitute_linear(P, A)


def proportional(P: MultiPoly, Q: MultiPoly) -> Fraction | None:
    """Return ``c`` with ``P == c * Q`` (c nonzero), or None."""
    P._check(Q)
    if P.is_zero() and Q.is_zero():
        return Fraction(1)
    if P.is_zero() or Q.is_zero() or P.terms.keys() != Q.terms.keys():
        return None
    e0 = next(iter(Q.terms))
    c = P.terms[e0] / Q.terms[e0]
    if all(P.terms[e] == c * v for e, v in Q.terms.items()):
        return c
    return None


def product(polys: Iterable[MultiPoly]) -> MultiPoly:
    polys = list(polys)
    out = MultiPoly.constant(polys[0].nvars, 1)
    for p in polys:
        out = out * p
    return out

