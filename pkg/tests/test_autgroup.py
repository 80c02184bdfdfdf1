import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvaut.arrangement import l24_polynomial
from mvaut.autgroup import (LiftError, ProjClass, SignedProjClass, batch_preserves,
                            expected_group, flat_action_table, generation_check, group_closure,
                            identity_class, induced_subspace_permutation, is_signed_permutation,
                            is_variety_automorphism, is_vertex_relabeling, l13_automorphisms,
                            lift_subspace_permutation, lifting_system_shape, nonnegative_elements,
                            projective_closure, regge_matrix, safety_bound, sign_flip_classes,
                            vertex_relabeling_classes)
from mvaut.exactq import QMatrix, Subspace
from mvaut.varieties import vertex_permutation_matrix

ints = st.integers(-5, 5)


@st.composite
def invertible(draw, n=3):
    M = QMatrix(n, n, draw(st.lists(ints, min_size=n * n, max_size=n * n)))
    if M.det() == 0:
        M = M + QMatrix.identity(n).scale(11)
    return M


@settings(max_examples=50, deadline=None)
@given(invertible(), st.fractions(min_value=-7, max_value=7, max_denominator=5).filter(bool))
def test_class_ignores_scalars(M, c):
    assert ProjClass.from_matrix(M) == ProjClass.from_matrix(M.scale(c))
    signed_equal = SignedProjClass.from_matrix(M) == SignedProjClass.from_matrix(M.scale(c))
    assert signed_equal == (c > 0)


@settings(max_examples=50, deadline=None)
@given(invertible(), invertible())
def test_class_product_matches_matrix_product(A, B):
    assert ProjClass.from_matrix(A) * ProjClass.from_matrix(B) == ProjClass.from_matrix(A @ B)
    x = ProjClass.from_matrix(A)
    assert x * x.inverse() == identity_class(3)


def test_closure_of_cyclic_group_and_bound():
    r = ProjClass.from_matrix(QMatrix.from_rows([[0, -1], [1, 0]]))
    assert projective_closure([r]).order == 2  # rotation by 90 degrees squares to -I
    assert projective_closure([SignedProjClass.from_matrix(r.matrix)]).order == 4
    with pytest.raises(RuntimeError):
        group_closure(vertex_relabeling_classes(4), identity_class(6), bound=10)


def test_safety_bound_env(monkeypatch):
    monkeypatch.setenv("MVAUT_SAFETY_BOUND", "123")
    assert safety_bound() == 123


def test_lift_coordinate_axes():
    e = [Subspace.from_span([[1 if i == k else 0 for i in range(3)]], 3) for k in range(3)]
    diag = Subspace.from_span([[1, 1, 1]], 3)
    A = lift_subspace_permutation(e + [diag], [e[1], e[2], e[0], diag])
    assert A.matrix == QMatrix.from_rows([[0, 0, 1], [1, 0, 0], [0, 1, 0]])
    with pytest.raises(LiftError):
        lift_subspace_permutation(e, e)  # diagonal matrices: 3-dimensional solution space


def test_lifting_system_shape(flats):
    assert lifting_system_shape(flats) == (540, 36)


def test_generators_lift_and_preserve(lifted, flats, aut_delta):
    P = l24_polynomial()
    for g, x in zip(aut_delta.generators, lifted):
        assert is_variety_automorphism(x.matrix, P) is not None
        assert induced_subspace_permutation(x.matrix, [f.subspace for f in flats]) == tuple(g[:60])


def test_paut_order(paut):
    assert paut.order == 11520


def test_batch_sweep_agrees_with_symbolic(paut):
    P = l24_polynomial()
    rng = random.Random(3)
    sample = rng.sample(paut.sorted_elements(), 12)
    junk = [ProjClass.from_matrix(QMatrix.identity(6) + QMatrix(6, 6, [rng.randint(-1, 1) for _ in range(36)]))
            for _ in range(12)]
    junk = [j for j in junk if j.matrix.det() != 0]
    keys = [x.key for x in sample + junk]
    fast = batch_preserves(keys, 6, P)
    slow = [is_variety_automorphism(QMatrix(6, 6, k), P) is not None for k in keys]
    assert fast.tolist() == slow
    assert all(fast[:12])


def test_flat_action_table(paut, flats):
    rng = random.Random(5)
    sample = rng.sample(paut.sorted_elements(), 10)
    table = flat_action_table([x.key for x in sample], flats)
    spaces = [f.subspace for f in flats]
    for row, x in zip(table, sample):
        assert tuple(row.tolist()) == induced_subspace_permutation(x.matrix, spaces)
    assert (flat_action_table([tuple(int(v) for v in regge_matrix().scale(2).entries)], flats) == -1).sum() == 0


def test_positive_real_and_nonnegative(ppos):
    assert ppos.order == 23040
    nn = nonnegative_elements(ppos)
    assert len(nn) == 24
    assert all(is_vertex_relabeling(x) for x in nn)


def test_expected_group_and_regge(paut):
    exp = expected_group()
    assert exp.order == 768
    R = regge_matrix()
    assert R @ R == QMatrix.identity(6)
    assert is_variety_automorphism(R, l24_polynomial()) == 1
    rc = ProjClass.from_matrix(R)
    assert rc not in exp.elements and rc in paut
    assert generation_check(vertex_relabeling_classes() + sign_flip_classes() + [rc], paut)
    assert not generation_check(vertex_relabeling_classes() + sign_flip_classes(), paut)


def test_vertex_relabelings_are_permutations():
    for p in itertools.permutations(range(4)):
        x = ProjClass.from_matrix(vertex_permutation_matrix(p))
        assert is_signed_permutation(x) and x.is_nonnegative()


def test_l13_group():
    g = l13_automorphisms()
    assert g.order == 24
    assert all(is_signed_permutation(x) for x in g.elements)


def test_batch_rejects_inhomogeneous():
    from mvaut.mpoly import MultiPoly
    with pytest.raises(ValueError):
        batch_preserves([tuple(np.eye(2, dtype=int).ravel())], 2,
                        MultiPoly(2, {(1, 0): 1, (0, 0): 1}))
