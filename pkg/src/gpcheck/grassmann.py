"""k-subspaces of GF(q)^n in canonical (RREF) form.

A :class:`Subspace` stores the reduced row echelon basis as a tuple of
tuples, so equality and hashing are cheap and canonical.  Matrices act on
row vectors from the right: ``apply_matrix(x, M)`` is the span of ``basis @ M``.

Enumeration order: pivot-column sets in lexicographic order
(``itertools.combinations``), then the free entries in row-major order,
each running through codes 0..q-1 with the last free entry varying fastest.

Text form: rows separated by ``;``, entries by ``,``.  ``<e1,e2>`` in
GF(2)^4 is ``1,0,0,0;0,1,0,0``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from . import config
from .gf import DimensionError, FieldTable, SingularMatrixError, is_invertible, mat_mul, rref


class EmptySubspaceError(ValueError):
    """The given vectors span only the zero subspace."""


@dataclass(frozen=True)
class Subspace:
    field: FieldTable = field(repr=False)
    n: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int64).reshape(self.k, self.n)

    def text(self) -> str:
        return ";".join(",".join(map(str, r)) for r in self.rows)

    @classmethod
    def parse(cls, text: str, F: FieldTable) -> "Subspace":
        vectors = [[int(c) for c in row.split(",")] for row in text.strip().split(";")]
        return subspace_span(vectors, F)

    def vectors(self) -> frozenset[int]:
        """All q^k vectors of the subspace, as big-endian base-q integers."""
        F = self.field
        coeffs = np.array(list(product(range(F.q), repeat=self.k)), dtype=np.int64)
        vecs = _combine(F, coeffs, self.basis)
        weights = F.q ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return frozenset((vecs @ weights).tolist())

    def __str__(self) -> str:
        return f"<{self.text()}>"


def _combine(F: FieldTable, coeffs: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return mat_mul(F, coeffs, basis)


def _from_matrix(F: FieldTable, M: np.ndarray) -> Subspace:
    R, r, _ = rref(F, M)
    if r == 0:
        raise EmptySubspaceError("vectors span the zero subspace")
    return Subspace(F, M.shape[1], tuple(tuple(int(x) for x in row) for row in R[:r]))


def subspace_span(vectors: Sequence[Sequence[int]], F: FieldTable) -> Subspace:
    """Canonical subspace spanned by the given vectors."""
    M = np.array(vectors, dtype=np.int64)
    if M.ndim != 2 or M.shape[0] == 0:
        raise ValueError("need a nonempty list of equal-length vectors")
    if M.min() < 0 or M.max() >= F.q:
        raise ValueError(f"entries must be codes in 0..{F.q - 1}")
    return _from_matrix(F, M)


def unit_vector(n: int, i: int) -> list[int]:
    """e_i in GF(q)^n, 1-based."""
    v = [0] * n
    v[i - 1] = 1
    return v


def coordinate_subspace(F: FieldTable, n: int, indices: Sequence[int]) -> Subspace:
    """<e_i : i in indices>, 1-based."""
    return subspace_span([unit_vector(n, i) for i in indices], F)


def _check_same_ambient(x: Subspace, y: Subspace) -> None:
    if x.n != y.n or x.field != y.field:
        raise DimensionError("subspaces live in different ambient spaces")


def intersect_dim(x: Subspace, y: Subspace) -> int:
    """dim(x ∩ y) = dim x + dim y - dim(x + y)."""
    _check_same_ambient(x, y)
    stacked = np.vstack([x.basis, y.basis])
    return x.k + y.k - rref(x.field, stacked)[1]


def contains(big: Subspace, small: Subspace) -> bool:
    return intersect_dim(big, small) == small.k


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-subspaces of GF(q)^n (exact integer)."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (k - i) - 1
    count, rem = divmod(num, den)
    assert rem == 0
    return count


def enumerate_subspaces(n: int, k: int, F: FieldTable, budget: int | None = None) -> Iterator[Subspace]:
    """Yield every k-subspace of GF(q)^n once, in the documented order."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    total = gaussian_binomial(n, k, F.q)
    limit = config.enum_budget(budget)
    if total > limit:
        raise config.BudgetExceeded(f"{total} subspaces exceed enumeration budget {limit}")
    return _enumerate(n, k, F)


def _enumerate(n: int, k: int, F: FieldTable) -> Iterator[Subspace]:
    for pivots in combinations(range(n), k):
        pivset = set(pivots)
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivset]
        base = [[0] * n for _ in range(k)]
        for r, p in enumerate(pivots):
            base[r][p] = 1
        for vals in product(range(F.q), repeat=len(free)):
            rows = [row[:] for row in base]
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield Subspace(F, n, tuple(tuple(row) for row in rows))


def apply_matrix(x: Subspace, M: np.ndarray, check: bool = True) -> Subspace:
    """Image of x under the invertible matrix M (row vectors, right action)."""
    if M.shape != (x.n, x.n):
        raise DimensionError(f"matrix shape {M.shape} does not act on GF(q)^{x.n}")
    if check and not is_invertible(x.field, M):
        raise SingularMatrixError("acting matrix is singular")
    return _from_matrix(x.field, mat_mul(x.field, x.basis, M))


@dataclass
class JohnsonGraph:
    """Generalised Johnson graph: k-subspaces, adjacent iff they meet in dimension i."""

    n: int
    k: int
    q: int
    i: int
    vertices: list[Subspace]
    adjacency: list[list[int]]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2


def johnson_graph(n: int, k: int, F: FieldTable, i: int, budget: int | None = None) -> JohnsonGraph:
    if not 0 <= i <= k - 1:
        raise ValueError(f"need 0 <= i <= k-1, got i={i}, k={k}")
    vertices = list(enumerate_subspaces(n, k, F, budget))
    # |x ∩ y| = q^dim(x ∩ y): compare vector sets rather than ranks
    members = [v.vectors() for v in vertices]
    target = F.q**i
    adjacency: list[list[int]] = [[] for _ in vertices]
    for a in range(len(vertices)):
        ma = members[a]
        for b in range(a + 1, len(vertices)):
            if len(ma & members[b]) == target:
                adjacency[a].append(b)
                adjacency[b].append(a)
    return JohnsonGraph(n, k, F.q, i, vertices, adjacency)


def johnson_connected(J: JohnsonGraph) -> bool:
    if not J.vertices:
        return True
    seen = {0}
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b in J.adjacency[a]:
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return len(seen) == len(J.vertices)
