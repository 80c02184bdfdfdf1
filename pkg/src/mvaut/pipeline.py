"""End-to-end verification runs and their JSON reports."""

from __future__ import annotations

import itertools
import json
import random
import time
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__
from .arrangement import (AMBIENT, coordinate_subspace, flat_in_variety, gradient_vanishes,
                          incidence_graph, intersection_lines, l24_polynomial, singular_flats)
from .autgroup import (ProjClass, batch_preserves, expected_group, flat_action_table,
                       generation_check, is_signed_permutation, is_variety_automorphism,
                       is_vertex_relabeling, l13_automorphisms, l13_vertex_relabeling_perms,
                       lift_graph_automorphism, lifting_system_shape, nonnegative_elements,
                       positive_real_group, projective_closure, regge_matrix,
                       sign_flip_classes, underlying_permutation, vertex_relabeling_classes)
from .coxeter import (dot, dynkin_diagram, positive_roots, positive_scale_classes, reflection,
                      reflection_group, root_system, simple_coordinates, simple_roots, weyl_order)
from .exactq import QMatrix, Subspace
from .graphauto import ColoredGraph, automorphism_group
from .varieties import (EdgeIndex, defining_poly, is_complete_on_some_vertices, edge_forget_matrix, k_subgraph_edges,
                        projection_rank_probe, signflip_det_sum, simplex_exhaustive_check,
                        voldet_scale_check)

SCHEMA = 1


def q2s(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def matrix_json(M: QMatrix) -> list[list[str]]:
    return [[q2s(x) for x in M.row(i)] for i in range(M.rows)]


@dataclass
class Check:
    name: str
    expected: Any
    computed: Any
    passed: bool
    elapsed_ms: float | None = None

    def as_record(self, timings: bool) -> dict:
        return {"name": self.name, "expected": self.expected, "computed": self.computed,
                "pass": self.passed,
                "elapsed_ms": round(self.elapsed_ms, 1) if timings and self.elapsed_ms is not None else None}


@dataclass
class Report:
    command: str
    seed: int
    checks: list[Check] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, expected, computed, passed: bool | None = None,
            elapsed_ms: float | None = None) -> Check:
        c = Check(name, expected, computed, expected == computed if passed is None else bool(passed),
                  elapsed_ms)
        self.checks.append(c)
        return c

    @contextmanager
    def timed(self, name: str, expected):
        """Record a check whose computed value is set via the yielded dict."""
        box: dict = {}
        t0 = time.perf_counter()
        yield box
        ms = (time.perf_counter() - t0) * 1000
        self.add(name, expected, box.get("computed"), box.get("pass"), ms)

    def to_dict(self, timings: bool = False) -> dict:
        return {"schema": SCHEMA, "version": __version__, "command": self.command,
                "seed": self.seed, "pass": self.passed,
                "checks": [c.as_record(timings) for c in self.checks],
                "summary": self.summary, "notes": self.notes}

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), sort_keys=True, indent=1) + "\n"

    def to_text(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: computed={c.computed} expected={c.expected}"
                 for c in self.checks]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


@dataclass
class L24Artifacts:
    flats: list
    lines: list
    delta: Any
    aut: Any
    lifted: list
    paut: Any
    ppos: Any


def build_arrangement():
    flats = singular_flats()
    lines = intersection_lines(flats)
    return flats, lines, incidence_graph(flats, lines)


def delta_graph(delta) -> ColoredGraph:
    return ColoredGraph.from_edges(delta.n_vertices, delta.edges(), delta.colors)


def verify_l24(report: Report, seed: int = 0) -> L24Artifacts:
    P = l24_polynomial()
    with report.timed("flat_type_counts", {"I": 32, "II": 24, "III": 4}) as r:
        flats = singular_flats()
        counts = Counter(f.flat_type for f in flats)
        r["computed"] = {k: counts[k] for k in ("I", "II", "III")}
    with report.timed("flats_contained_in_L24", 60) as r:
        r["computed"] = sum(flat_in_variety(f.subspace, P) for f in flats)
    with report.timed("flats_singular_gradient_vanishes", 60) as r:
        r["computed"] = sum(gradient_vanishes(f.subspace, P, seed=seed + i) for i, f in enumerate(flats))
    with report.timed("line_type_counts", {"I": 6, "II": 24, "III": 16, "total": 46}) as r:
        lines = intersection_lines(flats)
        counts = Counter(L.line_type for L in lines)
        r["computed"] = {"I": counts["I"], "II": counts["II"], "III": counts["III"],
                         "total": len(lines)}
    report.summary["line_provenance"] = dict(sorted(Counter(L.provenance for L in lines).items()))
    with report.timed("delta_vertices", {"flats": 60, "lines": 46}) as r:
        delta = incidence_graph(flats, lines)
        r["computed"] = {"flats": len(delta.flats), "lines": len(delta.lines)}
    with report.timed("aut_delta_order", 11520) as r:
        aut = automorphism_group(delta_graph(delta))
        r["computed"] = aut.order
    with report.timed("aut_delta_orbit_sizes", [16, 30, 60]) as r:
        r["computed"] = sorted(len(o) for o in aut.orbits)
    with report.timed("lifting_system_shape", [540, 36]) as r:
        r["computed"] = list(lifting_system_shape(flats))
    with report.timed("generators_lift_uniquely", len(aut.generators)) as r:
        lifted = [lift_graph_automorphism(g, flats, lines) for g in aut.generators]
        r["computed"] = len(lifted)
    with report.timed("lift_round_trip", True) as r:
        table = flat_action_table([x.key for x in lifted], flats)
        r["computed"] = all(tuple(table[k]) == tuple(g[:60]) for k, g in enumerate(aut.generators))
    with report.timed("paut_order", 11520) as r:
        paut = projective_closure(lifted)
        r["computed"] = paut.order
    keys = [x.key for x in paut.sorted_elements()]
    with report.timed("paut_elements_preserve_L24", paut.order) as r:
        r["computed"] = int(batch_preserves(keys, 6, P).sum())
    with report.timed("paut_elements_permute_flats", paut.order) as r:
        table = flat_action_table(keys, flats)
        r["computed"] = int(sum((row >= 0).all() and len(set(row.tolist())) == 60 for row in table))
    with report.timed("paut_pos_order", 23040) as r:
        ppos = positive_real_group(paut)
        r["computed"] = ppos.order
    with report.timed("nonnegative_count", 24) as r:
        nonneg = nonnegative_elements(ppos)
        r["computed"] = len(nonneg)
    with report.timed("nonnegative_are_vertex_relabelings_subgroup", True) as r:
        nn = set(nonneg)
        r["computed"] = (all(is_vertex_relabeling(x) for x in nonneg)
                         and all(a * b in nn for a in nonneg for b in nonneg))
    with report.timed("expected_subgroup_order", 768) as r:
        expected = expected_group()
        r["computed"] = expected.order
    with report.timed("expected_subgroup_generates_paut", False) as r:
        r["computed"] = expected.order == paut.order
    regge = regge_matrix()
    with report.timed("regge_preserves_L24", True) as r:
        c = is_variety_automorphism(regge, P)
        r["computed"] = c is not None
        report.summary["regge_scale"] = None if c is None else q2s(c)
    with report.timed("regge_generates", True) as r:
        gens = vertex_relabeling_classes() + sign_flip_classes() + [ProjClass.from_matrix(regge)]
        r["computed"] = generation_check(gens, paut)
    report.summary.update({
        "aut_delta_order": aut.order, "paut_order": paut.order, "paut_pos_order": ppos.order,
        "expected_subgroup_order": expected.order, "nonnegative_count": len(nonneg),
        "regge_generates": report.checks[-1].computed,
        "aut_delta_generators": [g for g in aut.generators_as_cycles()],
    })
    return L24Artifacts(flats, lines, delta, aut, lifted, paut, ppos)


def verify_coxeter(report: Report, lines, ppos=None) -> dict:
    P = l24_polynomial()
    dirs = [L.direction for L in lines if L.line_type in ("I", "II")]
    with report.timed("reflection_group_order", 23040) as r:
        W = reflection_group(dirs)
        r["computed"] = W.order
    with report.timed("reflection_group_orthogonal", True) as r:
        r["computed"] = all(sum(x * x for x in w.nums[i * 6:(i + 1) * 6]) == w.den ** 2
                            for w in W.elements for i in range(6))
    classes = positive_scale_classes(W)
    with report.timed("no_two_W_elements_positive_multiples", True) as r:
        r["computed"] = len(classes) == W.order
    with report.timed("root_counts", {"roots": 60, "positive": 30, "simple": 6}) as r:
        rs = root_system(dirs)
        simple = simple_roots(rs)
        r["computed"] = {"roots": len(rs.roots), "positive": len(positive_roots(rs)),
                         "simple": len(simple)}
    with report.timed("positive_roots_nonnegative_in_simple_basis", True) as r:
        ok = True
        for f in positive_roots(rs):
            co = simple_coordinates(simple, f)
            ok &= all(c.denominator == 1 and c >= 0 for c in co)
        r["computed"] = ok
    with report.timed("simple_root_angles_right_or_2pi3", True) as r:
        cos2 = {Fraction(dot(f, g) ** 2, dot(f, f) * dot(g, g)) * (1 if dot(f, g) <= 0 else -1)
                for f, g in itertools.combinations(simple, 2)}
        r["computed"] = cos2 <= {Fraction(0), Fraction(1, 4)}
    with report.timed("dynkin_type", "D6") as r:
        diagram = dynkin_diagram(simple)
        r["computed"] = diagram.label
    with report.timed("weyl_order_matches_type", 23040) as r:
        r["computed"] = weyl_order(diagram.label)
    with report.timed("simple_reflections_preserve_L24", 6) as r:
        r["computed"] = sum(is_variety_automorphism(reflection(f), P) is not None for f in simple)
    with report.timed("simple_reflections_generate_W", 23040) as r:
        r["computed"] = reflection_group(simple).order
    if ppos is not None:
        with report.timed("W_classes_equal_paut_pos", True) as r:
            r["computed"] = classes == ppos.elements
    summary = {"w_order": W.order, "n_roots": len(rs.roots), "n_positive": len(positive_roots(rs)),
               "n_simple": len(simple), "dynkin_type": diagram.label,
               "simple_roots": [list(f) for f in simple],
               "dynkin_edges": [list(e) for e in diagram.edges]}
    report.summary.update(summary)
    return {"W": W, "roots": rs, "simple": simple, "diagram": diagram}


def verify_l13(report: Report):
    with report.timed("l13_order", 24) as r:
        g = l13_automorphisms()
        r["computed"] = g.order
    with report.timed("l13_signed_vertex_relabelings", True) as r:
        perms = l13_vertex_relabeling_perms()
        r["computed"] = all(is_signed_permutation(x) and underlying_permutation(x) in perms
                            for x in g.elements)
    report.summary["l13_order"] = g.order
    return g


def verify_all(seed: int = 0) -> Report:
    report = Report("verify-all", seed)
    art = verify_l24(report, seed)
    verify_coxeter(report, art.lines, art.ppos)
    verify_l13(report)
    report.notes.append("Equality of the Fano scheme of planes with the 60 flats is out of scope; "
                        "only containment of the 60 flats is checked.")
    return report


# desk-scale checks

def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


def desk_signflip(report: Report, r: int, trials: int, seed: int) -> None:
    rng = random.Random(seed)
    holds = 0
    for _ in range(trials):
        X = QMatrix(r, r, [_random_rational(rng) for _ in range(r * r)])
        Y = QMatrix(r, r, [_random_rational(rng) for _ in range(r * r)])
        holds += signflip_det_sum(X, Y) == 2 ** r * Y.det()
    report.add(f"signflip_det_identity_r{r}", trials, holds)


def desk_voldet(report: Report, trials: int, seed: int) -> None:
    rng = random.Random(seed)
    ok = 0
    for k in range(trials):
        if k % 2 == 0:
            s = _random_rational(rng) or Fraction(1)
            scales = (s, s, s)
        else:
            scales = tuple(_random_rational(rng) or Fraction(1) for _ in range(3))
        c = voldet_scale_check(*scales)
        equal = len(set(scales)) == 1
        ok += (c is not None) == equal and (not equal or c == scales[0] ** 2)
    report.add("voldet_scale_proportional_iff_equal", trials, ok)


def desk_simplex(report: Report, d: int, n: int, trials: int, seed: int) -> None:
    res = simplex_exhaustive_check(d, n, trials, seed)
    report.add(f"simplex_only_K{d + 2}_dependent_d{d}_n{n}", 0, len(res["mismatches"]))
    report.summary["simplex"] = {"checked": res["checked"], "dependent": res["dependent"]}


def desk_lin_image(report: Report, d: int, n: int, trials: int, seed: int,
                   flips: int = 64, n_random: int = 25,
                   n_non_complete: int = 5) -> None:
    from math import comb
    D = comb(d + 2, 2)
    N = comb(n, 2)
    E = np.array(edge_forget_matrix(k_subgraph_edges(range(d + 2)), n).to_rows(), dtype=float)
    probe = projection_rank_probe(E, d, n, trials=trials, seed=seed, flips=flips)
    report.add(f"lin_image_K{d + 2}_forget_max_rank", D - 1, probe.max_rank)
    rng = np.random.default_rng(seed)
    full = 0
    ranks = []
    for k in range(n_random):
        M = rng.standard_normal((D, N))
        p = projection_rank_probe(M, d, n, trials=trials, seed=seed + 1 + k, flips=flips)
        ranks.append(min(p.trial_ranks))
        full += all(t == D for t in p.trial_ranks)
    report.add("lin_image_random_maps_full_rank", n_random, full)
    others = [E for E in itertools.combinations(EdgeIndex(n).edges, D)
              if not is_complete_on_some_vertices(E, d + 2)]
    picks = random.Random(seed).sample(others, min(n_non_complete, len(others)))
    non_k = []
    for k, E2 in enumerate(picks):
        M = np.array(edge_forget_matrix(E2, n).to_rows(), dtype=float)
        non_k.append(projection_rank_probe(M, d, n, trials=trials, seed=seed + 1000 + k,
                                           flips=flips).max_rank)
    report.add(f"lin_image_non_K{d + 2}_forget_max_rank", [D] * len(picks), non_k)
    rec = probe.as_record()
    rec.pop("E", None)
    report.summary["lin_image"] = {"k_forget": rec, "random_min_trial_ranks": ranks,
                                   "non_complete_edge_sets": [list(map(list, E)) for E in picks]}


def run_desk(check: str, d: int, n: int, trials: int, seed: int, r: int) -> Report:
    report = Report(f"desk:{check}", seed)
    if check == "signflip-det":
        desk_signflip(report, r, trials, seed)
    elif check == "voldet-scale":
        desk_voldet(report, trials, seed)
    elif check == "simplex":
        desk_simplex(report, d, n, trials, seed)
    elif check == "lin-image":
        desk_lin_image(report, d, n, trials, seed)
    else:
        raise ValueError(f"unknown desk check {check}")
    return report


# containment side of the Fano-scheme statement

def random_three_flats(count: int, seed: int) -> list[Subspace]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        S = Subspace.from_span([[rng.randint(-3, 3) for _ in range(AMBIENT)] for _ in range(3)], AMBIENT)
        if S.dim == 3:
            out.append(S)
    return out


def run_fano(seed: int = 0, samples: int = 10) -> Report:
    report = Report("fano", seed)
    P = l24_polynomial()
    flats = singular_flats()
    singular = {f.subspace for f in flats}
    report.add("singular_flats_contained", 60, sum(flat_in_variety(f.subspace, P) for f in flats))
    four = [coordinate_subspace(c) for c in itertools.combinations(range(AMBIENT), 4)]
    report.add("coordinate_4flats_not_contained", len(four),
               sum(not flat_in_variety(S, P) for S in four))
    coord3 = [coordinate_subspace(c) for c in itertools.combinations(range(AMBIENT), 3)]
    coord3 = [S for S in coord3 if S not in singular]
    report.add("nonsingular_coordinate_3flats_not_contained", len(coord3),
               sum(not flat_in_variety(S, P) for S in coord3))
    rand3 = [S for S in random_three_flats(samples, seed) if S not in singular]
    report.add("random_3flats_not_contained", len(rand3), sum(not flat_in_variety(S, P) for S in rand3))
    report.summary["sample"] = {
        "coordinate_3flats": [[[q2s(x) for x in v] for v in S.vectors()] for S in coord3],
        "random_3flats": [[[q2s(x) for x in v] for v in S.vectors()] for S in rand3],
    }
    report.notes.append("Only containment is checked; showing that no other 3-dimensional "
                        "linear spaces lie in L_{2,4} needs Groebner bases and is out of scope.")
    return report


def defining_poly_texts() -> dict[int, str]:
    out = {}
    for d in (1, 2, 3):
        names = ["m" + s for s in EdgeIndex(d + 2).labels()]
        out[d] = defining_poly(d).squared.to_text(names)
    return out


def build_paut():
    flats, lines, delta = build_arrangement()
    aut = automorphism_group(delta_graph(delta))
    lifted = [lift_graph_automorphism(g, flats, lines) for g in aut.generators]
    return projective_closure(lifted), lifted


def group_payload(which: str) -> dict:
    """Exact elements of one of the named groups as primitive integer matrices."""
    if which == "paut":
        g, gens = build_paut()
    elif which == "ppos":
        g, _ = build_paut()
        g = positive_real_group(g)
        gens = g.generators
    elif which == "expected":
        g = expected_group()
        gens = g.generators
    elif which == "l13":
        g = l13_automorphisms()
        gens = g.generators
    else:
        raise ValueError(f"unknown group {which}")

    def mat(x):
        n = x.n
        return [list(x.key[i * n:(i + 1) * n]) for i in range(n)]

    return {"schema": SCHEMA, "version": __version__, "group": which, "order": g.order,
            "signed": which == "ppos",
            "generators": [mat(x) for x in gens],
            "elements": [mat(x) for x in g.sorted_elements()]}
