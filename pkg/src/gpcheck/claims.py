"""Executable checks of the case analysis ruling out k-subspace geometries.

Points are k-subspaces of V = GF(q)^n with x = <e_1..e_k>.  Each witness
check builds explicit subspaces, applies a coordinate permutation matrix,
and recomputes "fixes"/"moves" from canonical subspace equality.  The
remaining checks cover the stabilizer orbit count, connectivity of the
Johnson-type graph, the generation of SL_2k(q) by three block families,
and two block-matrix identities used to prove that generation.

Every check returns a :class:`WitnessReport`; ``passed`` is true exactly
when every entry of ``checks`` is true.
"""

from __future__ import annotations

import json
from itertools import permutations
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from . import config
from .gf import (
    FieldTable,
    field_of_order,
    identity,
    mat_inv,
    mat_mul,
    permutation_matrix,
    random_invertible,
    det,
)
from .grassmann import (
    Subspace,
    apply_matrix,
    coordinate_subspace,
    intersect_dim,
    johnson_connected,
    johnson_graph,
    subspace_span,
    unit_vector,
)
from .mgroup import (
    MatrixGroup,
    build_chain,
    closure,
    gl_generators,
    order_formula,
    sl_generators,
    stabilizer_orbits_on_subspaces,
)


class PreconditionError(ValueError):
    """Parameters outside the range where the check is meaningful."""


@dataclass
class WitnessReport:
    claim: str
    params: dict[str, int]
    subspaces: dict[str, str] = field(default_factory=dict)
    permutation: str | None = None
    checks: dict[str, bool] = field(default_factory=dict)
    dims: dict[str, int] = field(default_factory=dict)
    values: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "params": dict(self.params),
            "subspaces": dict(self.subspaces),
            "permutation": self.permutation,
            "checks": dict(self.checks),
            "dims": dict(self.dims),
            "values": {k: _json_value(v) for k, v in self.values.items()},
            "notes": list(self.notes),
            "passed": self.passed,
        }


def _json_value(v):
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, int):
        return v if abs(v) <= 2**53 else str(v)
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def _span(F: FieldTable, n: int, indices: Sequence[int]) -> Subspace:
    return coordinate_subspace(F, n, list(indices))


def _cycles_text(cycles: Sequence[tuple[int, int]]) -> str:
    return "".join(f"({a},{b})" for a, b in cycles)


def _fix_move(report: WitnessReport, F: FieldTable, n: int, cycles, fixed: dict[str, Subspace],
              moved: dict[str, Subspace]) -> None:
    P = permutation_matrix(cycles, n, F)
    report.permutation = _cycles_text(cycles)
    for name, s in fixed.items():
        report.checks[f"fixes_{name}"] = apply_matrix(s, P) == s
    for name, s in moved.items():
        report.checks[f"moves_{name}"] = apply_matrix(s, P) != s


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise PreconditionError(msg)


# -- witnesses ------------------------------------------------------------------

def verify_claim2(k: int, F: FieldTable) -> WitnessReport:
    """n = 2k: y and y' meet x in codimension one, (1,k+1)(k,k+2) fixes both, moves x."""
    _need(k >= 4, f"k = {k}: the witness needs k >= 4")
    n = 2 * k
    x = _span(F, n, range(1, k + 1))
    y = _span(F, n, [*range(1, k), k + 1])
    y2 = _span(F, n, [*range(2, k + 1), k + 2])
    rep = WitnessReport("claim2", {"n": n, "k": k, "q": F.q},
                        subspaces={"x": x.text(), "y": y.text(), "y'": y2.text()})
    rep.dims = {"x∩y": intersect_dim(x, y), "x∩y'": intersect_dim(x, y2), "y∩y'": intersect_dim(y, y2)}
    rep.checks["dim(x∩y)=k-1"] = rep.dims["x∩y"] == k - 1
    rep.checks["dim(x∩y')=k-1"] = rep.dims["x∩y'"] == k - 1
    rep.checks["dim(y∩y')=k-2"] = rep.dims["y∩y'"] == k - 2
    _fix_move(rep, F, n, [(1, k + 1), (k, k + 2)], {"y": y, "y'": y2}, {"x": x})
    return rep


def verify_claim3(n: int, k: int, k1: int, F: FieldTable) -> WitnessReport:
    """y meets x in dimension k1, z shifts y's tail by one; (1,k+2)(k-1,k) fixes y, z, moves x."""
    _need(k >= 4, f"k = {k}: the witness needs k >= 4")
    _need(1 <= k1 <= k - 2, f"k1 = {k1}: need 1 <= k1 <= k-2")
    _need(2 * k - k1 + 1 <= n, f"n = {n}: need 2k - k1 + 1 <= n")
    x = _span(F, n, range(1, k + 1))
    head = list(range(1, k1 + 1))
    y = _span(F, n, head + list(range(k + 1, 2 * k - k1 + 1)))
    z = _span(F, n, head + list(range(k + 2, 2 * k - k1 + 2)))
    rep = WitnessReport("claim3", {"n": n, "k": k, "k1": k1, "q": F.q},
                        subspaces={"x": x.text(), "y": y.text(), "z": z.text()})
    rep.dims = {"x∩y": intersect_dim(x, y), "x∩z": intersect_dim(x, z), "y∩z": intersect_dim(y, z)}
    rep.checks["dim(x∩y)=k1"] = rep.dims["x∩y"] == k1
    rep.checks["dim(x∩z)=k1"] = rep.dims["x∩z"] == k1
    rep.checks["dim(y∩z)=k-1"] = rep.dims["y∩z"] == k - 1
    _fix_move(rep, F, n, [(1, k + 2), (k - 1, k)], {"y": y, "z": z}, {"x": x})
    return rep


def verify_claim4(n: int, k: int, F: FieldTable) -> WitnessReport:
    """n >= 2k+2: y, z disjoint from x and overlapping each other; (1,2k+2)(2,3) fixes y, z, moves x."""
    _need(k >= 4, f"k = {k}: the witness needs k >= 4")
    _need(n >= 2 * k + 2, f"n = {n}: need n >= 2k + 2")
    x = _span(F, n, range(1, k + 1))
    y = _span(F, n, range(k + 1, 2 * k + 1))
    z = _span(F, n, range(k + 2, 2 * k + 2))
    rep = WitnessReport("claim4", {"n": n, "k": k, "q": F.q},
                        subspaces={"x": x.text(), "y": y.text(), "z": z.text()})
    rep.dims = {"x∩y": intersect_dim(x, y), "x∩z": intersect_dim(x, z), "y∩z": intersect_dim(y, z)}
    rep.checks["dim(x∩y)=0"] = rep.dims["x∩y"] == 0
    rep.checks["dim(x∩z)=0"] = rep.dims["x∩z"] == 0
    rep.checks["dim(y∩z)=k-1"] = rep.dims["y∩z"] == k - 1
    if rep.dims["y∩z"] != k - 2:
        rep.notes.append(f"computed dim(y∩z) = {rep.dims['y∩z']} differs from k-2 = {k - 2}; "
                         "the argument only needs it to be positive")
    _fix_move(rep, F, n, [(1, 2 * k + 2), (2, 3)], {"y": y, "z": z}, {"x": x})
    return rep


def verify_claim5(k: int, F: FieldTable) -> WitnessReport:
    """n = 2k+1: z = <e_{k+1}..e_{2k-1}, e_1+e_{2k+1}>; (1,2k+1)(k+1,k+2) fixes y, z, moves x."""
    _need(k >= 4, f"k = {k}: the witness needs k >= 4")
    n = 2 * k + 1
    x = _span(F, n, range(1, k + 1))
    y = _span(F, n, range(k + 1, 2 * k + 1))
    mixed = [a + b for a, b in zip(unit_vector(n, 1), unit_vector(n, 2 * k + 1))]
    z = subspace_span([unit_vector(n, i) for i in range(k + 1, 2 * k)] + [mixed], F)
    rep = WitnessReport("claim5", {"n": n, "k": k, "q": F.q},
                        subspaces={"x": x.text(), "y": y.text(), "z": z.text()})
    rep.dims = {"x∩y": intersect_dim(x, y), "x∩z": intersect_dim(x, z), "y∩z": intersect_dim(y, z)}
    rep.checks["dim(x∩y)=0"] = rep.dims["x∩y"] == 0
    rep.checks["dim(x∩z)=0"] = rep.dims["x∩z"] == 0
    rep.checks["dim(y∩z)=k-1"] = rep.dims["y∩z"] == k - 1
    _fix_move(rep, F, n, [(1, 2 * k + 1), (k + 1, k + 2)], {"y": y, "z": z}, {"x": x})
    return rep


# -- generation of SL_2k(q) -------------------------------------------------------

def block(F: FieldTable, A, B, C, D) -> np.ndarray:
    """The 2k x 2k matrix (A B; C D)."""
    return np.block([[A, B], [C, D]]).astype(np.int64)


def block_families(F: FieldTable, pairs) -> list[np.ndarray]:
    """diag(A, D), (A, A-D; 0, D) and (A, 0; D-A, D) for each pair (A, D)."""
    gens = []
    for A, D in pairs:
        Z = np.zeros_like(A)
        gens.append(block(F, A, Z, Z, D))
        gens.append(block(F, A, F.vsub(A, D), Z, D))
        gens.append(block(F, A, Z, F.vsub(D, A), D))
    return gens


def _elements(F: FieldTable, k: int, gens, cap: int | None) -> list[np.ndarray]:
    return sorted(closure(MatrixGroup(F, k, gens, check=False), cap), key=lambda M: M.tobytes())


def _coordinate_permutations(F: FieldTable, k: int) -> list[np.ndarray]:
    out = []
    for perm in permutations(range(k)):
        P = np.zeros((k, k), dtype=np.int64)
        P[np.arange(k), perm] = 1
        out.append(P)
    return out


def full_pairs(F: FieldTable, k: int, cap: int | None = None) -> list[tuple[np.ndarray, np.ndarray]]:
    """All (A, D) in GL_k(q)^2 with det(AD) = 1."""
    gl = _elements(F, k, gl_generators(k, F), cap)
    by_det: dict[int, list[np.ndarray]] = {}
    for M in gl:
        by_det.setdefault(det(F, M), []).append(M)
    return [(A, D) for A in gl for D in by_det[F.inv(det(F, A))]]


def subset_pairs(F: FieldTable, k: int, cap: int | None = None) -> list[tuple[np.ndarray, np.ndarray]]:
    """(A, I) and (I, D) with A, D in SL_k(q), plus permutation pairs with det(AD) = 1."""
    sl = _elements(F, k, sl_generators(k, F), cap)
    I = identity(F, k)
    pairs = [(A, I) for A in sl] + [(I, D) for D in sl if not np.array_equal(D, I)]
    perms = _coordinate_permutations(F, k)
    pairs += [(A, D) for A in perms for D in perms if F.mul(det(F, A), det(F, D)) == 1]
    return pairs


# above this many pairs the deterministic subset is tried first
FULL_PAIR_LIMIT = 20000


def _gl_order(k: int, q: int) -> int:
    return order_formula("GL", k, q)


def verify_generation(k: int, F: FieldTable, shuffle_seed: int | None = None,
                      budget: int | None = None, cap: int | None = None) -> WitnessReport:
    """Order of the group generated by the three block families versus |SL_2k(q)|."""
    _need(k >= 2, f"k = {k}: blocks of size 1 are outside the supported range k >= 2")
    n = 2 * k
    expected = order_formula("SL", n, F.q)
    pair_count = _gl_order(k, F.q) ** 2 // (F.q - 1)
    rep = WitnessReport("generation", {"k": k, "q": F.q})
    rep.values["expected"] = expected
    attempts = []
    if pair_count > FULL_PAIR_LIMIT:
        attempts.append(("subset", subset_pairs))
    if pair_count <= config.closure_cap(cap):
        attempts.append(("full", full_pairs))
    if not attempts:
        raise config.BudgetExceeded(f"{pair_count} generator pairs exceed the closure cap")
    order = None
    for name, make in attempts:
        gens = block_families(F, make(F, k, cap))
        if shuffle_seed is not None:
            order_idx = np.random.default_rng(shuffle_seed).permutation(len(gens))
            gens = [gens[i] for i in order_idx]
        order = build_chain(MatrixGroup(F, n, gens, check=False), budget).order()
        rep.values.setdefault("attempts", []).append([name, len(gens), order])
        if order == expected:
            break
        rep.notes.append(f"{name} generating set gives order {order}")
    rep.values["order"] = order
    rep.checks["order=|SL_2k(q)|"] = order == expected
    return rep


def verify_sl_identities(k: int, F: FieldTable, trials: int = 100, seed: int = 0) -> WitnessReport:
    """Two block identities on random invertible A, D:

    (A, 0; D-A, D)(A^-1, 0; 0, D^-1) = (I, 0; DA^-1 - I, I)
    h^-1 (I, 0; E_12, I) h = (I, 0; D^-1 E_12 A, I),  h = diag(A, D).
    """
    _need(k >= 2, f"k = {k}: need k >= 2")
    rng = np.random.default_rng(seed)
    I = identity(F, k)
    Z = np.zeros((k, k), dtype=np.int64)
    E12 = Z.copy()
    E12[0, 1] = 1
    ok_product = ok_conj = 0
    for _ in range(trials):
        A = random_invertible(F, k, rng)
        D = random_invertible(F, k, rng)
        Ai, Di = mat_inv(F, A), mat_inv(F, D)
        lhs = mat_mul(F, block(F, A, Z, F.vsub(D, A), D), block(F, Ai, Z, Z, Di))
        rhs = block(F, I, Z, F.vsub(mat_mul(F, D, Ai), I), I)
        ok_product += bool(np.array_equal(lhs, rhs))
        h, h_inv = block(F, A, Z, Z, D), block(F, Ai, Z, Z, Di)
        lhs = mat_mul(F, mat_mul(F, h_inv, block(F, I, Z, E12, I)), h)
        rhs = block(F, I, Z, mat_mul(F, mat_mul(F, Di, E12), A), I)
        ok_conj += bool(np.array_equal(lhs, rhs))
    rep = WitnessReport("sl-identities", {"k": k, "q": F.q, "trials": trials, "seed": seed})
    rep.values = {"product_ok": ok_product, "conjugation_ok": ok_conj}
    rep.checks["product identity"] = ok_product == trials
    rep.checks["conjugation identity"] = ok_conj == trials
    return rep


# -- orbits and connectivity ------------------------------------------------------

def verify_orbit_count(n: int, k: int, F: FieldTable, budget: int | None = None) -> WitnessReport:
    """Stabilizer of x has k+1 orbits on k-subspaces, one per value of dim(x ∩ y)."""
    _need(1 <= k <= n // 2, f"need 1 <= k <= n/2, got n={n}, k={k}")
    part = stabilizer_orbits_on_subspaces(n, k, F, budget)
    x = coordinate_subspace(F, n, range(1, k + 1))
    dims = []
    constant = True
    for orb in part.orbits:
        ds = {intersect_dim(x, y) for y in orb}
        constant &= len(ds) == 1
        dims.append(min(ds))
    rep = WitnessReport("orbit-count", {"n": n, "k": k, "q": F.q}, subspaces={"x": x.text()})
    rep.values = {"sizes": part.sizes, "dims": dims}
    rep.checks["orbit count=k+1"] = len(part.orbits) == k + 1
    rep.checks["orbits constant in dim(x∩y)"] = constant
    return rep


def verify_f2_connectivity(n: int, k: int, F: FieldTable, i: int, budget: int | None = None) -> WitnessReport:
    """The graph on k-subspaces joining pairs that meet in dimension i is connected."""
    _need(1 <= k <= n, f"need 1 <= k <= n, got n={n}, k={k}")
    _need(0 <= i <= k - 1, f"need 0 <= i <= k-1, got i={i}")
    J = johnson_graph(n, k, F, i, budget)
    rep = WitnessReport("connectivity", {"n": n, "k": k, "q": F.q, "i": i})
    rep.values = {"vertices": len(J.vertices), "edges": J.edge_count}
    rep.checks["connected"] = johnson_connected(J)
    return rep


# -- batch runner -------------------------------------------------------------------

_RUNNERS: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "claim2": (lambda p, F: verify_claim2(p["k"], F), ("k", "q")),
    "claim3": (lambda p, F: verify_claim3(p["n"], p["k"], p["k1"], F), ("n", "k", "k1", "q")),
    "claim4": (lambda p, F: verify_claim4(p["n"], p["k"], F), ("n", "k", "q")),
    "claim5": (lambda p, F: verify_claim5(p["k"], F), ("k", "q")),
    "generation": (lambda p, F: verify_generation(p["k"], F, p.get("shuffle_seed")), ("k", "q")),
    "sl-identities": (lambda p, F: verify_sl_identities(p["k"], F, p.get("trials", 100), p.get("seed", 0)),
                      ("k", "q")),
    "orbit-count": (lambda p, F: verify_orbit_count(p["n"], p["k"], F), ("n", "k", "q")),
    "connectivity": (lambda p, F: verify_f2_connectivity(p["n"], p["k"], F, p["i"]), ("n", "k", "q", "i")),
}

CLAIM_NAMES = tuple(_RUNNERS)

DEFAULT_SUITE: tuple[tuple[str, dict[str, int]], ...] = (
    ("claim2", {"k": 4, "q": 2}),
    ("claim2", {"k": 4, "q": 3}),
    ("claim2", {"k": 5, "q": 2}),
    ("claim2", {"k": 5, "q": 3}),
    ("claim3", {"n": 8, "k": 4, "k1": 1, "q": 2}),
    ("claim3", {"n": 10, "k": 4, "k1": 2, "q": 3}),
    ("claim3", {"n": 10, "k": 5, "k1": 3, "q": 2}),
    ("claim4", {"n": 10, "k": 4, "q": 2}),
    ("claim4", {"n": 12, "k": 5, "q": 3}),
    ("claim5", {"k": 4, "q": 2}),
    ("claim5", {"k": 5, "q": 3}),
    ("claim5", {"k": 4, "q": 4}),
    ("orbit-count", {"n": 4, "k": 2, "q": 2}),
    ("orbit-count", {"n": 6, "k": 3, "q": 2}),
    ("connectivity", {"n": 4, "k": 2, "q": 2, "i": 0}),
    ("connectivity", {"n": 4, "k": 2, "q": 2, "i": 1}),
    ("sl-identities", {"k": 2, "q": 3, "trials": 100, "seed": 0}),
    ("sl-identities", {"k": 3, "q": 2, "trials": 100, "seed": 0}),
    ("generation", {"k": 2, "q": 2}),
    ("generation", {"k": 2, "q": 3}),
)


def run_claim(claim: str, params: dict[str, int]) -> WitnessReport:
    """Run one named check; raises on unknown names, missing parameters or bad values."""
    if claim not in _RUNNERS:
        raise ValueError(f"unknown claim {claim!r}; choose from {', '.join(CLAIM_NAMES)}")
    fn, required = _RUNNERS[claim]
    missing = [r for r in required if r not in params]
    if missing:
        raise ValueError(f"{claim} needs parameters {', '.join(missing)}")
    F = field_of_order(int(params["q"]))
    return fn({k: int(v) for k, v in params.items()}, F)


def run_batch(items: Sequence[tuple[str, dict[str, int]]]) -> list[dict]:
    """Run items in order; errors are reported per item without stopping the batch."""
    out = []
    for claim, params in items:
        try:
            out.append(run_claim(claim, params).to_dict())
        except (ValueError, config.BudgetExceeded) as exc:
            out.append({"claim": claim, "params": dict(params), "error": f"{type(exc).__name__}: {exc}",
                        "passed": False})
    return out


def parse_batch(text: str) -> list[tuple[str, dict[str, int]]]:
    """JSON list of {"claim": name, "params": {...}} objects."""
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("claims file must be a JSON list")
    items = []
    for i, row in enumerate(data):
        if not isinstance(row, dict) or "claim" not in row:
            raise ValueError(f"item {i} needs a 'claim' field")
        params = row.get("params", {})
        if not isinstance(params, dict) or not all(isinstance(v, int) for v in params.values()):
            raise ValueError(f"item {i}: 'params' must map names to integers")
        items.append((str(row["claim"]), params))
    return items
