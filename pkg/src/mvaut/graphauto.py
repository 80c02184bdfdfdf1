"""Automorphism groups of vertex-coloured graphs.

Equitable partition refinement plus backtracking, in the style of nauty
but without canonical labelling.  Levels of the first search path are
processed deepest first; at each level only targets outside the orbit of
the already-found generators are searched, so the generators found form a
strong generating set and the group order is the product of the basic
orbit lengths.  The order is also recomputed by explicit closure.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Perm = tuple[int, ...]
Partition = list[list[int]]


@dataclass
class ColoredGraph:
    n: int
    color: list[int]
    neighbors: list[frozenset[int]]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   color: Sequence[int] | None = None) -> "ColoredGraph":
        nb: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not supported")
            nb[u].add(v)
            nb[v].add(u)
        color = list(color) if color is not None else [0] * n
        if len(color) != n:
            raise ValueError("colour list length mismatch")
        return cls(n, color, [frozenset(s) for s in nb])

    @classmethod
    def from_adjacency(cls, adj: Sequence[Sequence[bool]],
                       color: Sequence[int] | None = None) -> "ColoredGraph":
        n = len(adj)
        for i in range(n):
            for j in range(n):
                if bool(adj[i][j]) != bool(adj[j][i]):
                    raise ValueError("adjacency matrix is not symmetric")
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if adj[i][j]]
        return cls.from_edges(n, edges, color)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbors[u]

    def is_automorphism(self, g: Perm) -> bool:
        if sorted(g) != list(range(self.n)):
            return False
        if any(self.color[v] != self.color[g[v]] for v in range(self.n)):
            return False
        return all(frozenset(g[u] for u in self.neighbors[v]) == self.neighbors[g[v]]
                   for v in range(self.n))

    def relabeled(self, perm: Perm) -> "ColoredGraph":
        """Copy with vertex v renamed perm[v]."""
        color = [0] * self.n
        for v in range(self.n):
            color[perm[v]] = self.color[v]
        edges = [(perm[u], perm[v]) for u in range(self.n) for v in self.neighbors[u] if u < v]
        return ColoredGraph.from_edges(self.n, edges, color)


def compose(g: Perm, h: Perm) -> Perm:
    """g after h: v -> g[h[v]]."""
    return tuple(g[x] for x in h)


def inverse(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


def identity(n: int) -> Perm:
    return tuple(range(n))


def to_cycles(g: Perm) -> list[list[int]]:
    seen = set()
    cycles = []
    for v in range(len(g)):
        if v in seen or g[v] == v:
            continue
        cyc = []
        w = v
        while w not in seen:
            seen.add(w)
            cyc.append(w)
            w = g[w]
        cycles.append(cyc)
    return cycles


def from_cycles(cycles: Sequence[Sequence[int]], n: int) -> Perm:
    out = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            out[a] = b
    return tuple(out)


def closure(gens: Sequence[Perm], n: int, bound: int = 10 ** 6) -> set[Perm]:
    e = identity(n)
    seen = {e}
    frontier = deque([e])
    while frontier:
        x = frontier.popleft()
        for g in gens:
            y = compose(g, x)
            if y not in seen:
                seen.add(y)
                if len(seen) > bound:
                    raise RuntimeError(f"closure exceeded {bound} elements")
                frontier.append(y)
    return seen


def _orbits(gens: Sequence[Perm], n: int) -> list[list[int]]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for v in range(n):
            a, b = find(v), find(g[v])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def _orbit_of(v: int, gens: Sequence[Perm]) -> set[int]:
    orb = {v}
    todo = [v]
    while todo:
        x = todo.pop()
        for g in gens:
            y = g[x]
            if y not in orb:
                orb.add(y)
                todo.append(y)
    return orb


@dataclass
class PermGroup:
    degree: int
    generators: list[Perm]
    order: int
    base: list[int] = field(default_factory=list)

    @property
    def orbits(self) -> list[list[int]]:
        return _orbits(self.generators, self.degree)

    def elements(self, bound: int = 10 ** 6) -> set[Perm]:
        return closure(self.generators, self.degree, bound)

    def generators_as_cycles(self) -> list[list[list[int]]]:
        return [to_cycles(g) for g in self.generators]


def orbits(g: PermGroup) -> list[list[int]]:
    return g.orbits


class _Refiner:
    def __init__(self, G: ColoredGraph):
        self.G = G
        self.nb = [tuple(s) for s in G.neighbors]

    def refine(self, cells: Partition) -> Partition:
        """Coarsest equitable refinement; fragments ordered by neighbour count."""
        cells = [list(c) for c in cells]
        changed = True
        while changed:
            changed = False
            s = 0
            while s < len(cells):
                splitter = cells[s]
                cnt: dict[int, int] = {}
                for u in splitter:
                    for v in self.nb[u]:
                        cnt[v] = cnt.get(v, 0) + 1
                new_cells: Partition = []
                for c in cells:
                    if len(c) == 1:
                        new_cells.append(c)
                        continue
                    groups: dict[int, list[int]] = {}
                    for v in c:
                        groups.setdefault(cnt.get(v, 0), []).append(v)
                    if len(groups) == 1:
                        new_cells.append(c)
                    else:
                        changed = True
                        for k in sorted(groups):
                            new_cells.append(groups[k])
                cells = new_cells
                s += 1
        return cells

    def individualize(self, cells: Partition, ci: int, v: int) -> Partition:
        rest = [x for x in cells[ci] if x != v]
        return self.refine(cells[:ci] + [[v], rest] + cells[ci + 1:])


def _shape(cells: Partition) -> tuple[int, ...]:
    return tuple(len(c) for c in cells)


def _target_cell(cells: Partition) -> int | None:
    best = None
    for i, c in enumerate(cells):
        if len(c) > 1 and (best is None or len(c) < len(cells[best])):
            best = i
    return best


def automorphism_group(G: ColoredGraph, verify_closure: bool = True) -> PermGroup:
    """Generators and exact order of the colour-preserving automorphism group."""
    R = _Refiner(G)
    colors = sorted(set(G.color))
    start = R.refine([[v for v in range(G.n) if G.color[v] == c] for c in colors])

    # first path down the search tree
    path: list[Partition] = [start]
    cells_idx: list[int] = []
    base: list[int] = []
    while True:
        ci = _target_cell(path[-1])
        if ci is None:
            break
        v = min(path[-1][ci])
        cells_idx.append(ci)
        base.append(v)
        path.append(R.individualize(path[-1], ci, v))
    leaf = [c[0] for c in path[-1]]
    depth = len(base)

    def descend(level: int, cells: Partition) -> Perm | None:
        if level == depth:
            image = [c[0] for c in cells]
            g = [0] * G.n
            for a, b in zip(leaf, image):
                g[a] = b
            g = tuple(g)
            return g if G.is_automorphism(g) else None
        ci = cells_idx[level]
        for v in sorted(cells[ci]):
            nxt = R.individualize(cells, ci, v)
            if _shape(nxt) != _shape(path[level + 1]):
                continue
            g = descend(level + 1, nxt)
            if g is not None:
                return g
        return None

    gens: list[Perm] = []
    order = 1
    for k in range(depth - 1, -1, -1):
        ci = cells_idx[k]
        orbit = _orbit_of(base[k], gens)
        for t in sorted(path[k][ci]):
            if t in orbit:
                continue
            nxt = R.individualize(path[k], ci, t)
            g = None
            if _shape(nxt) == _shape(path[k + 1]):
                g = descend(k + 1, nxt)
            if g is not None:
                gens.append(g)
                orbit = _orbit_of(base[k], gens)
        order *= len(orbit)

    group = PermGroup(G.n, gens, order, base)
    if verify_closure:
        size = len(closure(gens, G.n))
        if size != order:
            raise AssertionError(f"orbit product {order} disagrees with closure size {size}")
    return group
