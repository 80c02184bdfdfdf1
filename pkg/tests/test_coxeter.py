import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvaut.coxeter import (RatMatrix, cartan_matrix, dynkin_diagram, is_reduced, pairing,
                           positive_roots, reflection, reflection_group, root_system,
                           simple_coordinates, simple_roots, weyl_order)
from mvaut.exactq import QMatrix


def a2_directions():
    return [(1, -1, 0), (0, 1, -1), (1, 0, -1)]


def d4_directions():
    # the D4 inside F4: unit vectors and (+-1, +-1, +-1, +-1), one from each +- pair
    units = [tuple(1 if i == k else 0 for i in range(4)) for k in range(4)]
    halves = [(1,) + s for s in itertools.product((1, -1), repeat=3)]
    return units + halves


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4).filter(any))
def test_reflection_properties(f):
    R = reflection(f)
    assert R @ R == QMatrix.identity(4)
    assert R.T == R
    assert R.apply(f) == tuple(-Fraction(x) for x in f)
    assert R.det() == -1


def test_ratmatrix_product_matches_qmatrix():
    A = reflection((1, 2, 0))
    B = reflection((0, 1, 1))
    prod = RatMatrix.from_qmatrix(A) * RatMatrix.from_qmatrix(B)
    assert prod.to_qmatrix() == A @ B
    assert prod.is_orthogonal()


def test_a2_group_order():
    assert reflection_group(a2_directions()).order == 6


def test_d4_root_system():
    dirs = d4_directions()
    assert reflection_group(dirs).order == 192
    rs = root_system(dirs)
    assert len(rs.roots) == 24
    assert dynkin_diagram(simple_roots(rs)).label == "D4"
    assert weyl_order("D4") == 192


def test_d4_cartan_matrix():
    rs = root_system(d4_directions())
    assert is_reduced(rs)
    simple = simple_roots(rs)
    C = cartan_matrix(simple)
    assert all(C[i][i] == 2 for i in range(4))
    assert sorted(sum(1 for x in row if x == -1) for row in C) == [1, 1, 1, 3]
    for f in positive_roots(rs):
        assert all(c >= 0 and c.denominator == 1 for c in simple_coordinates(simple, f))


def test_pairing_and_rejections():
    assert pairing((1, 1), (1, 0)) == 2
    with pytest.raises(ValueError):
        root_system([(1, 1, 0)])  # |f| irrational
    with pytest.raises(ValueError):
        reflection((0, 0))


def test_weyl_orders():
    assert [weyl_order(x) for x in ("A1", "A3", "D6", "E6")] == [2, 24, 23040, 51840]


@pytest.fixture(scope="module")
def l24_root_data(lines):
    dirs = [L.direction for L in lines if L.line_type in ("I", "II")]
    rs = root_system(dirs)
    return dirs, rs, simple_roots(rs)


def test_l24_roots(l24_root_data):
    dirs, rs, simple = l24_root_data
    assert len(dirs) == 30 and len(rs.roots) == 60
    assert len(positive_roots(rs)) == 30 and len(simple) == 6
    d = dynkin_diagram(simple)
    assert d.label == "D6" and sorted(d.degrees()) == [1, 1, 1, 2, 2, 3]
    assert "D6" in d.to_dot()
