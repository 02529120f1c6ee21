"""Rank-2 incidence geometries and generalised n-gon recognition.

A geometry has points ``0..num_points-1`` and lines ``0..len(lines)-1``;
each line is stored as the frozenset of its points.  In the incidence graph
point ``i`` is vertex ``i`` and line ``j`` is vertex ``num_points + j``.

Incidence file format (0-based point indices, whitespace separated)::

    points N
    lines M
    <points on line 0>
    ...
    <points on line M-1>
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from .gf import FieldTable
from .grassmann import Subspace, contains, enumerate_subspaces

REJECT_ORDER = ("disconnected", "thin", "irregular", "girth_diameter")


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class IncidenceGeometry:
    num_points: int
    lines: tuple[frozenset[int], ...]
    allow_repeated_lines: bool = field(default=False, compare=False)

    def __post_init__(self):
        lines = tuple(frozenset(int(p) for p in ln) for ln in self.lines)
        object.__setattr__(self, "lines", lines)
        if self.num_points < 1 or not lines:
            raise GeometryError("points and lines must both be nonempty")
        for j, ln in enumerate(lines):
            for p in ln:
                if not 0 <= p < self.num_points:
                    raise GeometryError(f"line {j} refers to point {p} outside 0..{self.num_points - 1}")
        if not self.allow_repeated_lines and len(set(lines)) != len(lines):
            raise GeometryError("two lines have identical point sets")

    @property
    def num_lines(self) -> int:
        return len(self.lines)

    def flags(self) -> list[tuple[int, int]]:
        return sorted((p, j) for j, ln in enumerate(self.lines) for p in ln)

    def lines_through(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_points)]
        for j, ln in enumerate(self.lines):
            for p in ln:
                out[p].append(j)
        return out

    def collinear(self, a: int, b: int) -> bool:
        return any(a in ln and b in ln for ln in self.lines)


@dataclass(frozen=True)
class PolygonParams:
    n: int
    s: int
    t: int


@dataclass(frozen=True)
class Rejection:
    reason: str
    detail: str

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class Collineation:
    points: tuple[int, ...]
    lines: tuple[int, ...]


def incidence_graph(S: IncidenceGeometry) -> nx.Graph:
    """Bipartite graph on points and lines, with the flags as edges."""
    G = nx.Graph()
    G.add_nodes_from(range(S.num_points), kind="point")
    G.add_nodes_from(range(S.num_points, S.num_points + S.num_lines), kind="line")
    G.add_edges_from((p, S.num_points + j) for p, j in S.flags())
    return G


def _adjacency(S: IncidenceGeometry) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(S.num_points + S.num_lines)]
    for j, ln in enumerate(S.lines):
        v = S.num_points + j
        for p in sorted(ln):
            adj[p].append(v)
            adj[v].append(p)
    return adj


def _bfs(adj: list[list[int]], src: int) -> list[int]:
    dist = [-1] * len(adj)
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _girth(adj: list[list[int]]) -> float:
    best = float("inf")
    for src in range(len(adj)):
        dist = [-1] * len(adj)
        parent = [-1] * len(adj)
        dist[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def _diameter(adj: list[list[int]]) -> int:
    return max(max(_bfs(adj, v)) for v in range(len(adj)))


def classify_generalized_ngon(S: IncidenceGeometry) -> PolygonParams | Rejection:
    """Recognise a thick generalised n-gon, or say which check failed first.

    Checks run in the order: connectivity, degree >= 3, regular point and
    line degrees, girth = 2 * diameter.
    """
    adj = _adjacency(S)
    dist = _bfs(adj, 0)
    if min(dist) < 0:
        unreached = sum(1 for d in dist if d < 0)
        return Rejection("disconnected", f"{unreached} vertices unreachable from point 0")
    point_deg = [len(adj[p]) for p in range(S.num_points)]
    line_deg = [len(ln) for ln in S.lines]
    if min(point_deg) < 3:
        p = point_deg.index(min(point_deg))
        return Rejection("thin", f"point {p} lies on {point_deg[p]} lines")
    if min(line_deg) < 3:
        j = line_deg.index(min(line_deg))
        return Rejection("thin", f"line {j} has {line_deg[j]} points")
    if len(set(point_deg)) > 1:
        return Rejection("irregular", f"point degrees {sorted(set(point_deg))}")
    if len(set(line_deg)) > 1:
        return Rejection("irregular", f"line sizes {sorted(set(line_deg))}")
    diameter = _diameter(adj)
    girth = _girth(adj)
    if girth != 2 * diameter:
        g = "infinite" if girth == float("inf") else int(girth)
        return Rejection("girth_diameter", f"girth {g} but diameter {diameter}")
    return PolygonParams(n=diameter, s=line_deg[0] - 1, t=point_deg[0] - 1)


def dual(S: IncidenceGeometry) -> IncidenceGeometry:
    """Swap points and lines: old line j becomes point j, old point i becomes line i."""
    new_lines = tuple(frozenset(ls) for ls in S.lines_through())
    repeated = len(set(new_lines)) != len(new_lines)
    return IncidenceGeometry(S.num_lines, new_lines, S.allow_repeated_lines or repeated)


# -- collineations ------------------------------------------------------------------

def validate_collineation(S: IncidenceGeometry, g: Collineation) -> None:
    if sorted(g.points) != list(range(S.num_points)):
        raise GeometryError("point map is not a permutation")
    if sorted(g.lines) != list(range(S.num_lines)):
        raise GeometryError("line map is not a permutation")
    for j, ln in enumerate(S.lines):
        if frozenset(g.points[p] for p in ln) != S.lines[g.lines[j]]:
            raise GeometryError(f"line {j} is not mapped onto line {g.lines[j]}")


def collineation_from_points(S: IncidenceGeometry, alpha: Sequence[int]) -> Collineation:
    """Complete a point permutation to a collineation (lines by point sets)."""
    index = {ln: j for j, ln in enumerate(S.lines)}
    beta = []
    for ln in S.lines:
        img = frozenset(alpha[p] for p in ln)
        if img not in index:
            raise GeometryError("point map does not preserve lines")
        beta.append(index[img])
    g = Collineation(tuple(alpha), tuple(beta))
    validate_collineation(S, g)
    return g


def find_collineations(S: IncidenceGeometry, limit: int | None = None) -> Iterator[Collineation]:
    """All collineations by backtracking over point images.

    Requires distinct point sets on distinct lines.  A partial map is
    extended only while it preserves collinearity of assigned pairs.
    """
    if S.allow_repeated_lines:
        raise GeometryError("collineation search needs lines determined by their points")
    n = S.num_points
    coll = np.zeros((n, n), dtype=bool)
    for ln in S.lines:
        pts = sorted(ln)
        for a, b in combinations(pts, 2):
            coll[a, b] = coll[b, a] = True
    alpha = [-1] * n
    used = [False] * n
    found = 0

    def extend(i: int) -> Iterator[Collineation]:
        nonlocal found
        if i == n:
            try:
                g = collineation_from_points(S, alpha)
            except GeometryError:
                return
            found += 1
            yield g
            return
        for img in range(n):
            if used[img]:
                continue
            if any(coll[i, a] != coll[img, alpha[a]] for a in range(i)):
                continue
            alpha[i] = img
            used[img] = True
            yield from extend(i + 1)
            used[img] = False
            alpha[i] = -1
            if limit is not None and found >= limit:
                return

    yield from extend(0)


def check_diamond(S: IncidenceGeometry, g: Collineation) -> list[tuple[int, int, int]]:
    """Triples (x, y1, y2), y1 < y2, where g fixes y1, y2, moves x, and no line
    contains all of x, y1, y2 and xg.  Here x is collinear with y1 and y2.
    """
    validate_collineation(S, g)
    violations = []
    fixed = [p for p in range(S.num_points) if g.points[p] == p]
    for x in range(S.num_points):
        xg = g.points[x]
        if xg == x:
            continue
        nbrs = [y for y in fixed if y != x and S.collinear(x, y)]
        for y1, y2 in combinations(nbrs, 2):
            quad = {x, y1, y2, xg}
            if not any(quad <= ln for ln in S.lines):
                violations.append((x, y1, y2))
    return violations


# -- fixtures -------------------------------------------------------------------

def _geometry_from_subspaces(points: list[Subspace], lines: list[Subspace]) -> IncidenceGeometry:
    line_sets = [frozenset(i for i, p in enumerate(points) if contains(ln, p)) for ln in lines]
    return IncidenceGeometry(len(points), tuple(line_sets))


def build_pg2(F: FieldTable, budget: int | None = None) -> IncidenceGeometry:
    """PG(2,q): 1- and 2-subspaces of GF(q)^3 under containment."""
    points = list(enumerate_subspaces(3, 1, F, budget))
    lines = list(enumerate_subspaces(3, 2, F, budget))
    return _geometry_from_subspaces(points, lines)


def symplectic_form(F: FieldTable, u: Sequence[int], v: Sequence[int]) -> int:
    """Alternating form u1 v2 - u2 v1 + u3 v4 - u4 v3 on GF(q)^4."""
    total = 0
    for a, b in ((0, 1), (2, 3)):
        total = F.add(total, F.sub(F.mul(u[a], v[b]), F.mul(u[b], v[a])))
    return total


def build_symplectic_quadrangle(F: FieldTable, budget: int | None = None) -> IncidenceGeometry:
    """W(q): all points of PG(3,q), lines the totally isotropic 2-subspaces."""
    points = list(enumerate_subspaces(4, 1, F, budget))
    lines = [ln for ln in enumerate_subspaces(4, 2, F, budget)
             if symplectic_form(F, ln.rows[0], ln.rows[1]) == 0]
    return _geometry_from_subspaces(points, lines)


def complete_bipartite(a: int, b: int) -> IncidenceGeometry:
    """a points, b lines, every point on every line (a generalised 2-gon)."""
    return IncidenceGeometry(a, tuple(frozenset(range(a)) for _ in range(b)), allow_repeated_lines=True)


# -- file format ------------------------------------------------------------------

def format_incidence(S: IncidenceGeometry) -> str:
    out = [f"points {S.num_points}", f"lines {S.num_lines}"]
    out += [" ".join(str(p) for p in sorted(ln)) for ln in S.lines]
    return "\n".join(out) + "\n"


def parse_incidence(text: str, allow_repeated_lines: bool = False) -> IncidenceGeometry:
    rows = [r.strip() for r in text.splitlines()]
    rows = [r for r in rows if r and not r.startswith("#")]
    try:
        key, n = rows[0].split()
        key2, m = rows[1].split()
        if key != "points" or key2 != "lines":
            raise ValueError
        n, m = int(n), int(m)
    except (ValueError, IndexError):
        raise GeometryError("expected header lines 'points N' and 'lines M'") from None
    body = rows[2:]
    if len(body) != m:
        raise GeometryError(f"header announces {m} lines, found {len(body)}")
    try:
        lines = tuple(frozenset(int(tok) for tok in r.split()) for r in body)
    except ValueError:
        raise GeometryError("line rows must contain integer point indices") from None
    return IncidenceGeometry(n, lines, allow_repeated_lines)
