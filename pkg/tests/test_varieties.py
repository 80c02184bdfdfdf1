import itertools
import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from mvaut.exactq import QMatrix
from mvaut.mpoly import MultiPoly, compose_linear, product, proportional
from mvaut.varieties import (EdgeIndex, Configuration, defining_poly, edge_forget_matrix,
                             gram_from_squared, good_point, is_inf_independent, k_subgraph_edges,
                             l13_linear_forms, measure_squared, poly_eval_float,
                             projection_rank_probe, random_configuration, rigidity_matrix,
                             sign_flip_matrix, signflip_det_sum, squared_from_gram,
                             tangent_basis_float, vertex_permutation_matrix, voldet_scale_check)


def test_colex_edge_order():
    idx = EdgeIndex(4)
    assert idx.labels() == ["12", "13", "23", "14", "24", "34"]
    assert [idx.slot(*e) for e in idx.edges] == list(range(6))
    assert idx.slot(2, 0) == idx.slot(0, 2)


def test_d1_polynomial_text():
    names = ["m12", "m13", "m23"]
    assert defining_poly(1).squared.to_text(names) == (
        "-m12^2 + 2*m12*m13 + 2*m12*m23 - m13^2 + 2*m13*m23 - m23^2")


def test_l24_has_22_terms():
    P = defining_poly(2).unsquared
    assert len(P.terms) == 22 and P.degree() == 6 and P.is_homogeneous()


@pytest.mark.parametrize("d", [1, 2, 3])
def test_matches_cayley_menger_oracle(d):
    n = d + 2
    idx = EdgeIndex(n)
    m = sympy.symbols(f"m0:{idx.N}")

    def D(i, j):
        return 0 if i == j else m[idx.slot(i, j)]

    cm = sympy.Matrix(n + 1, n + 1, lambda a, b: 0 if a == b == 0 else (1 if a == 0 or b == 0 else D(a - 1, b - 1)))
    poly = sympy.Poly(sympy.expand(cm.det()), *m)
    oracle = MultiPoly(idx.N, {e: Fraction(int(c.p), int(c.q)) for e, c in poly.terms()})
    assert proportional(defining_poly(d).squared, oracle) is not None


def test_l13_is_product_of_four_planes():
    forms = [MultiPoly.linear_form(f) for f in l13_linear_forms()]
    assert proportional(defining_poly(1).unsquared, product(forms)) is not None


@pytest.mark.parametrize("d", [1, 2, 3])
def test_polynomial_vanishes_on_configurations(d):
    rng = random.Random(d)
    P = defining_poly(d).squared
    for _ in range(5):
        assert P(measure_squared(random_configuration(d, d + 2, rng))) == 0
    # a generic configuration one dimension up is not on the variety
    assert P(measure_squared(random_configuration(d + 1, d + 2, rng))) != 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=8, max_size=8))
def test_gram_round_trip(coords):
    p = Configuration(QMatrix(4, 2, coords))
    m = measure_squared(p)
    assert squared_from_gram(gram_from_squared(m, 4)) == m
    assert gram_from_squared(m, 4).rank() <= 2


def test_vertex_permutation_preserves_polynomial():
    P = defining_poly(2).unsquared
    for perm in itertools.permutations(range(4)):
        A = vertex_permutation_matrix(perm)
        assert compose_linear(P, A) == P
    for signs in itertools.product((1, -1), repeat=6):
        assert compose_linear(P, sign_flip_matrix(signs)) == P


def test_vertex_permutation_convention():
    # relabel 0 <-> 1: l13 moves to slot 23
    A = vertex_permutation_matrix((1, 0, 2, 3))
    assert A.apply([0, 1, 0, 0, 0, 0]) == (0, 0, 1, 0, 0, 0)


def test_voldet_scale_examples():
    assert voldet_scale_check(2, 2, 2) == 4
    assert voldet_scale_check(1, 1, 2) is None


@settings(max_examples=20, deadline=None)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=5).filter(bool))
def test_voldet_equal_scales(s):
    assert voldet_scale_check(s, s, s) == s * s


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.data())
def test_signflip_identity(r, data):
    q = st.fractions(min_value=-6, max_value=6, max_denominator=5)
    X = QMatrix(r, r, data.draw(st.lists(q, min_size=r * r, max_size=r * r)))
    Y = QMatrix(r, r, data.draw(st.lists(q, min_size=r * r, max_size=r * r)))
    assert signflip_det_sum(X, Y) == 2 ** r * Y.det()


def test_rigidity_rank_of_triangle_and_k4():
    tri = k_subgraph_edges(range(3))
    assert is_inf_independent(tri, 2)
    assert not is_inf_independent(k_subgraph_edges(range(4)), 2)
    rng = random.Random(1)
    p = random_configuration(2, 4, rng)
    assert rigidity_matrix(p, k_subgraph_edges(range(4))).rank() == 5


def test_good_point():
    # an equilateral triangle has Gram rank 2
    assert good_point([1, 1, 1], 2)
    assert not good_point([1, 1, 2], 2)
    assert good_point([1, 1, 2], 1)
    assert not good_point([0, 1, 1], 1)
    assert good_point([1.0, 1.0, 1.0], 2)


def test_tangent_space_dimension():
    pts = np.array([[0.0, 0.0], [3.0, 1.0], [1.0, 4.0], [-2.0, 2.0], [5.0, -3.0]])
    l, T = tangent_basis_float(pts)
    assert T.shape == (10, 10)
    assert np.linalg.matrix_rank(T) == 2 * 5 - comb(3, 2)


def test_poly_eval_float_reports_scale():
    P = MultiPoly(2, {(1, 0): 1, (0, 1): -1})
    assert poly_eval_float(P, [2.0, 2.0]) == (0.0, 4.0)


def test_projection_probe_identity_map_is_full_rank():
    E = np.eye(6)
    rep = projection_rank_probe(E, 2, 4, trials=3, seed=0)
    assert rep.max_rank == 5 and rep.flips == 64


def test_forget_matrix_validation():
    with pytest.raises(ValueError):
        edge_forget_matrix([(0, 1), (1, 0)], 4)
    with pytest.raises(ValueError):
        edge_forget_matrix([(0, 4)], 4)
