"""Matrix groups over GF(q): orbits, exact orders, closure, order formulas.

Exact orders come from a stabilizer chain (:mod:`gpcheck.schreier`) for the
faithful action of the group on the nonzero vectors of GF(q)^n, with base
points e_1, e_2, ... in order.  :func:`closure` enumerates the group
element by element and is kept as an independent oracle.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from . import config
from .gf import (
    FieldTable,
    SingularMatrixError,
    DimensionError,
    all_vectors,
    diagonal,
    elementary,
    identity,
    is_invertible,
    mat_mul,
    prime_power,
)
from .grassmann import Subspace, apply_matrix, coordinate_subspace, enumerate_subspaces, intersect_dim
from .schreier import StabilizerChain


class MatrixGroup:
    """Group generated by invertible n x n matrices over a finite field."""

    def __init__(self, field: FieldTable, n: int, generators: Iterable[np.ndarray], check: bool = True):
        self.field = field
        self.n = n
        gens = [np.asarray(g, dtype=np.int64) for g in generators]
        for g in gens:
            if g.shape != (n, n):
                raise DimensionError(f"generator of shape {g.shape}, expected {(n, n)}")
            if check and not is_invertible(field, g):
                raise SingularMatrixError("generator is not invertible")
        self.generators = gens

    def __repr__(self) -> str:
        return f"MatrixGroup(GF({self.field.q}), n={self.n}, {len(self.generators)} generators)"

    @cached_property
    def chain(self) -> StabilizerChain:
        return build_chain(self)

    def order(self) -> int:
        return self.chain.order()

    def contains(self, M: np.ndarray) -> bool:
        perm = _VectorAction.get(self.field, self.n).permutation(np.asarray(M, dtype=np.int64))
        return self.chain.contains(perm)

    def conjugate(self, P: np.ndarray, P_inv: np.ndarray) -> "MatrixGroup":
        F = self.field
        gens = [mat_mul(F, mat_mul(F, P_inv, g), P) for g in self.generators]
        return MatrixGroup(F, self.n, gens, check=False)


# -- vector action --------------------------------------------------------

class _VectorAction:
    """Converts matrices to permutations of the q^n - 1 nonzero vectors."""

    _cache: dict[tuple[FieldTable, int], "_VectorAction"] = {}

    def __init__(self, F: FieldTable, n: int):
        self.field = F
        self.n = n
        self.vectors = all_vectors(F, n)
        self.weights = F.q ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self.degree = F.q**n - 1

    @classmethod
    def get(cls, F: FieldTable, n: int) -> "_VectorAction":
        key = (F, n)
        if key not in cls._cache:
            cls._cache[key] = cls(F, n)
        return cls._cache[key]

    def index(self, v: Sequence[int]) -> int:
        """Point index of a nonzero vector (its base-q code minus one)."""
        return int(np.dot(np.asarray(v, dtype=np.int64), self.weights)) - 1

    def permutation(self, M: np.ndarray) -> np.ndarray:
        images = mat_mul(self.field, self.vectors[1:], M) @ self.weights
        return (images - 1).astype(np.int32)


def build_chain(G: MatrixGroup, budget: int | None = None) -> StabilizerChain:
    F, n = G.field, G.n
    limit = config.orbit_budget(budget)
    if F.q**n > limit:
        raise config.BudgetExceeded(f"q^n = {F.q ** n} exceeds orbit budget {limit}")
    act = _VectorAction.get(F, n)
    base = [act.index([1 if j == i else 0 for j in range(n)]) for i in range(n)]
    chain = StabilizerChain(act.degree, base_hint=base)
    for g in G.generators:
        chain.add_generator(act.permutation(g))
    return chain


def group_order_bsgs(G: MatrixGroup, budget: int | None = None) -> int:
    """Exact |<generators>| via a stabilizer chain on nonzero vectors."""
    if budget is None:
        return G.order()
    return build_chain(G, budget).order()


# -- orbits -------------------------------------------------------------------

def _canonical_vector(v) -> tuple[int, ...]:
    return tuple(int(x) for x in v)


def orbit(G: MatrixGroup, seed, action: str | Callable = "auto", budget: int | None = None) -> list:
    """Orbit of ``seed`` under G in BFS order.

    ``action`` is ``"vector"`` (seed a length-n vector), ``"subspace"``
    (seed a :class:`Subspace`), a callable ``(element, matrix) -> element``
    returning hashable elements, or ``"auto"``.
    """
    limit = config.orbit_budget(budget)
    F = G.field
    if action == "auto":
        action = "subspace" if isinstance(seed, Subspace) else "vector"
    if action == "vector":
        seed = _canonical_vector(seed)
        if len(seed) != G.n:
            raise DimensionError("seed vector has wrong length")

        def act(v, M):
            return _canonical_vector(mat_mul(F, np.array([v], dtype=np.int64), M)[0])
    elif action == "subspace":
        def act(x, M):
            return apply_matrix(x, M, check=False)
    elif callable(action):
        act = action
    else:
        raise ValueError(f"unknown action {action!r}")

    seen: dict[Hashable, None] = {seed: None}
    queue = deque([seed])
    while queue:
        x = queue.popleft()
        for g in G.generators:
            y = act(x, g)
            if y not in seen:
                seen[y] = None
                if len(seen) > limit:
                    raise config.BudgetExceeded(f"orbit exceeds budget {limit}")
                queue.append(y)
    return list(seen)


# -- closure (oracle) -----------------------------------------------------------

def closure(G: MatrixGroup, cap: int | None = None) -> list[np.ndarray]:
    """Every element of G, found by breadth-first multiplication."""
    limit = config.closure_cap(cap)
    F = G.field
    e = identity(F, G.n)
    seen = {e.tobytes(): e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in G.generators:
            y = mat_mul(F, x, g)
            key = y.tobytes()
            if key not in seen:
                seen[key] = y
                if len(seen) > limit:
                    raise config.BudgetExceeded(f"group exceeds closure cap {limit}")
                queue.append(y)
    return list(seen.values())


# -- standard generators --------------------------------------------------------

def sl_generators(n: int, F: FieldTable) -> list[np.ndarray]:
    """Elementary transvections I + c E_ij, c running over an additive basis."""
    if n == 1:
        return [identity(F, 1)]
    return [elementary(F, n, i, j, c) for i in range(n) for j in range(n) if i != j for c in F.additive_basis()]


def gl_generators(n: int, F: FieldTable) -> list[np.ndarray]:
    gens = sl_generators(n, F)
    gens.append(diagonal(F, [F.generator] + [1] * (n - 1)))
    return gens


def parabolic_generators(n: int, k: int, F: FieldTable) -> list[np.ndarray]:
    """Generators of the stabilizer in SL_n(q) of <e_1, ..., e_k>.

    These are the block matrices (A 0; C D) with det(A) det(D) = 1: the
    transvections inside the A, D and C blocks plus one torus element
    diag(g, 1, ..., 1, g^-1, 1, ..., 1) with g^-1 in position k+1.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    basis = F.additive_basis()
    gens = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            in_a = i < k and j < k
            in_d = i >= k and j >= k
            in_c = i >= k and j < k
            if in_a or in_d or in_c:
                gens.extend(elementary(F, n, i, j, c) for c in basis)
    if F.q > 2:
        d = [1] * n
        d[0] = F.generator
        d[k] = F.inv(F.generator)
        gens.append(diagonal(F, d))
    return gens


# -- orbit partitions -------------------------------------------------------------

@dataclass
class OrbitPartition:
    domain: str
    orbits: list[list]

    @property
    def sizes(self) -> list[int]:
        return [len(o) for o in self.orbits]

    @property
    def representatives(self) -> list:
        return [o[0] for o in self.orbits]


def orbit_partition(G: MatrixGroup, domain: Iterable, action: str | Callable = "auto",
                    budget: int | None = None) -> list[list]:
    remaining = dict.fromkeys(domain)
    out = []
    while remaining:
        seed = next(iter(remaining))
        orb = orbit(G, seed, action, budget)
        for y in orb:
            if y not in remaining:
                raise ValueError("orbit leaves the supplied domain")
            del remaining[y]
        out.append(orb)
    return out


def stabilizer_orbits_on_subspaces(n: int, k: int, F: FieldTable, budget: int | None = None) -> OrbitPartition:
    """Orbits of the stabilizer of x = <e_1..e_k> in SL_n(q) on k-subspaces.

    Orbits are listed by decreasing dim(x ∩ y) of their members.
    """
    if not 1 <= k <= n // 2:
        raise ValueError(f"need 1 <= k <= n/2, got n={n}, k={k}")
    x = coordinate_subspace(F, n, range(1, k + 1))
    H = MatrixGroup(F, n, parabolic_generators(n, k, F), check=False)
    domain = list(enumerate_subspaces(n, k, F, budget))
    orbits = orbit_partition(H, domain, "subspace", budget)
    orbits.sort(key=lambda o: -intersect_dim(x, o[0]))
    return OrbitPartition(domain=f"{k}-subspaces of GF({F.q})^{n}", orbits=orbits)


# -- order formulas -------------------------------------------------------------

# Orders stored as data, from the ATLAS of Finite Groups.
NAMED_ORDERS = {
    "M11": 7920,
    "2^4.A6": 5760,
}


def _gl_order(n: int, q: int) -> int:
    return q ** (n * (n - 1) // 2) * prod(q**i - 1 for i in range(1, n + 1))


def _gu_order(n: int, q: int) -> int:
    return q ** (n * (n - 1) // 2) * prod(q**i - (-1) ** i for i in range(1, n + 1))


def _sp_order(n: int, q: int) -> int:
    if n % 2:
        raise ValueError("symplectic groups need even dimension")
    m = n // 2
    return q ** (m * m) * prod(q ** (2 * i) - 1 for i in range(1, m + 1))


def _factorial(m: int) -> int:
    return prod(range(1, m + 1))


def order_formula(family: str, *params: int) -> int:
    """Exact order of a named group.

    Families: GL, SL, PGL, PSL, GU, SU, PSU (n, q); Sp, PSp (n even, q);
    A, S (m); and the stored constants in ``NAMED_ORDERS``.
    """
    if family in NAMED_ORDERS:
        if params:
            raise ValueError(f"{family} takes no parameters")
        return NAMED_ORDERS[family]
    if family in ("A", "S"):
        if len(params) != 1 or params[0] < 1:
            raise ValueError(f"{family} takes one positive degree")
        m = params[0]
        if family == "S":
            return _factorial(m)
        return max(_factorial(m) // 2, 1)
    if family not in {"GL", "SL", "PGL", "PSL", "GU", "SU", "PSU", "Sp", "PSp"}:
        raise ValueError(f"unknown group family {family!r}")
    if len(params) != 2:
        raise ValueError(f"{family} takes (n, q)")
    n, q = params
    prime_power(q)
    if n < 1:
        raise ValueError("dimension must be positive")
    if family == "GL":
        return _gl_order(n, q)
    if family in ("SL", "PGL"):
        return _gl_order(n, q) // (q - 1)
    if family == "PSL":
        return _gl_order(n, q) // (q - 1) // gcd(n, q - 1)
    if family == "GU":
        return _gu_order(n, q)
    if family == "SU":
        return _gu_order(n, q) // (q + 1)
    if family == "PSU":
        return _gu_order(n, q) // (q + 1) // gcd(n, q + 1)
    if family == "Sp":
        return _sp_order(n, q)
    return _sp_order(n, q) // gcd(2, q - 1)  # PSp


_NAME_RE = re.compile(r"^\s*([A-Za-z]+)\s*\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)\s*$")
_COMPACT_RE = re.compile(r"^\s*(A|S)(\d+)\s*$")


def parse_group(name: str) -> tuple[str, tuple[int, ...]]:
    """Parse "PSL(5,3)", "A(5)", "A5", "M11" or "2^4.A6"."""
    s = name.strip()
    if s in NAMED_ORDERS:
        return s, ()
    m = _NAME_RE.match(s)
    if m:
        return m.group(1), tuple(int(x) for x in m.group(2).split(","))
    m = _COMPACT_RE.match(s)
    if m:
        return m.group(1), (int(m.group(2)),)
    raise ValueError(f"cannot parse group name {name!r}")


def named_order(name: str) -> int:
    family, params = parse_group(name)
    return order_formula(family, *params)
