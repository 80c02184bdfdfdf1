from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from mvaut.exactq import (QMatrix, Subspace, as_rational, contains, det, intersect, nullspace,
                          primitive_integer_vector, rref)

small = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@st.composite
def matrices(draw, max_rows=5, max_cols=5, square=False):
    r = draw(st.integers(1, max_rows))
    c = r if square else draw(st.integers(1, max_cols))
    return QMatrix(r, c, draw(st.lists(small, min_size=r * c, max_size=r * c)))


def to_sympy(M: QMatrix) -> sympy.Matrix:
    return sympy.Matrix(M.rows, M.cols, [sympy.Rational(x.numerator, x.denominator) for x in M.entries])


def from_sympy(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def test_floats_rejected():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        QMatrix(1, 1, [0.5])


def test_shape_errors():
    with pytest.raises(ValueError):
        QMatrix(2, 2, [1, 2, 3])
    with pytest.raises(ValueError):
        QMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(ValueError):
        QMatrix.identity(2) @ QMatrix.identity(3)


def test_det_known_values():
    assert det([[1, 2], [3, 4]]) == -2
    assert QMatrix.from_rows([[2, 0, 0], [0, Fraction(1, 2), 0], [0, 0, 5]]).det() == 5
    assert det([[1, 2], [2, 4]]) == 0


@settings(max_examples=60, deadline=None)
@given(matrices(square=True))
def test_det_matches_sympy(M):
    assert M.det() == from_sympy(to_sympy(M).det())


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_matches_sympy(M):
    R, rank, pivots = rref(M)
    oR, opiv = to_sympy(M).rref()
    assert rank == len(opiv)
    assert tuple(pivots) == tuple(opiv)
    assert R.entries == tuple(from_sympy(x) for x in oR)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_nullspace_is_kernel(M):
    K = nullspace(M)
    assert K.dim == M.cols - M.rank()
    for v in K.vectors():
        assert all(x == 0 for x in M.apply(v))


@settings(max_examples=40, deadline=None)
@given(matrices(square=True))
def test_inverse(M):
    if M.det() == 0:
        with pytest.raises(ZeroDivisionError):
            M.inverse()
    else:
        assert M @ M.inverse() == QMatrix.identity(M.rows)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=1, max_size=4),
       st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=1, max_size=4))
def test_subspace_intersection_dimension(A, B):
    S, T = Subspace.from_span(A, 5), Subspace.from_span(B, 5)
    I = intersect(S, T)
    # Grassmann formula
    assert I.dim == S.dim + T.dim - (S + T).dim
    assert contains(S, I) and contains(T, I)


def test_subspace_canonical_form_is_basis_independent():
    S = Subspace.from_span([[1, 1, 0], [0, 1, 1]], 3)
    T = Subspace.from_span([[1, 2, 1], [2, 1, -1], [1, 0, -1]], 3)
    assert S == T and hash(S) == hash(T)
    assert S.annihilator().vectors() == [(1, -1, 1)]


def test_primitive_integer_vector():
    assert primitive_integer_vector([Fraction(-1, 2), 1, 0]) == (1, -2, 0)
    assert primitive_integer_vector([0, 0]) == (0, 0)
    assert Subspace.from_span([[0, -3, 6]], 3).direction() == (0, 1, -2)
