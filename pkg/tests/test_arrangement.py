import json
from collections import Counter

from mvaut.arrangement import (classify_line, coordinate_subspace, flat_in_variety,
                               gradient_vanishes, l24_polynomial, type1_flats)
from mvaut.exactq import Subspace, contains


def test_flat_counts(flats):
    assert Counter(f.flat_type for f in flats) == {"I": 32, "II": 24, "III": 4}
    assert all(f.dim == 3 for f in flats)


def test_type1_example_normals():
    # all plus signs: l12 = l13 - l23 = l14 - l24 and l13 - l14 + l34 = 0
    f = next(f for f in type1_flats() if all(s == 1 for _, s in f.label))
    assert f.normals == ((1, -1, 1, 0, 0, 0), (1, 0, 0, -1, 1, 0), (0, 1, 0, -1, 0, 1))
    assert contains(f.subspace, Subspace.from_span([[0, 1, 1, 1, 1, 0]], 6))


def test_flats_in_variety_and_singular(flats):
    P = l24_polynomial()
    assert all(flat_in_variety(f.subspace, P) for f in flats)
    assert all(gradient_vanishes(f.subspace, P, seed=k) for k, f in enumerate(flats))


def test_nonsingular_flat_is_rejected():
    P = l24_polynomial()
    assert not flat_in_variety(coordinate_subspace([0, 1, 2, 3]), P)
    # the triangle 123 collapsed is a Type III flat
    assert flat_in_variety(coordinate_subspace([3, 4, 5]), P)


def test_line_counts_and_provenance(lines):
    assert Counter(L.line_type for L in lines) == {"I": 6, "II": 24, "III": 16}
    assert {L.provenance for L in lines} == {"pair"}


def test_line_classification():
    assert classify_line((0, 0, 1, 0, 0, 0)) == "I"
    assert classify_line((1, -1, 0, 1, 1, 0)) == "II"
    assert classify_line((1, 1, -1, 0, 0, 0)) == "III"


def test_incidence_degrees(delta):
    nf = len(delta.flats)
    deg = Counter()
    for u, v in delta.edges():
        deg[u] += 1
        deg[v] += 1
    assert all(deg[i] == 7 for i in range(nf))
    by_type = {t: {deg[nf + j] for j, L in enumerate(delta.lines) if L.line_type == t}
               for t in ("I", "II", "III")}
    assert by_type == {"I": {6}, "II": {6}, "III": {15}}


def test_exports(delta):
    dot = delta.to_dot()
    assert dot.count("shape=") == 106 and dot.startswith("graph Delta {")
    data = json.loads(json.dumps(delta.to_json()))
    assert len(data["flats"]) == 60 and len(data["lines"]) == 46
    assert data["edge_order"] == ["12", "13", "23", "14", "24", "34"]
