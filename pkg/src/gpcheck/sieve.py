"""Parameter arithmetic for thick generalised hexagons and octagons.

Point counts of a polygon of order (s, t):

    hexagon  f(s, t) = (s+1)(s^2 t^2 + s t + 1)
    octagon  f(s, t) = (s+1)(s^3 t^3 + s^2 t^2 + s t + 1)

Both have the form (s+1) g(st) with g(u) strictly between u^d and (u+1)^d
(d = 2 or 3), so once s+1 is known the value u = st is the integer d-th root
of N/(s+1).  All arithmetic uses Python integers and is exact.
"""

from __future__ import annotations

import bisect
import gc
import json
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from math import isqrt
from typing import Iterable, Sequence

import numpy as np
from sympy import divisors

from .mgroup import named_order


class PointCountKind(str, Enum):
    HEXAGON = "hexagon"
    OCTAGON = "octagon"


def _kind(kind) -> PointCountKind:
    try:
        return PointCountKind(kind)
    except ValueError:
        raise ValueError(f"unknown polygon kind {kind!r}; use 'hexagon' or 'octagon'") from None


def _g(kind: PointCountKind, u: int) -> int:
    if kind is PointCountKind.HEXAGON:
        return u * u + u + 1
    return u * u * u + u * u + u + 1


def _degree(kind: PointCountKind) -> int:
    return 2 if kind is PointCountKind.HEXAGON else 3


def iroot(n: int, d: int) -> int:
    """floor(n ** (1/d)) for n >= 0, exactly."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2:
        return n
    if d == 2:
        return isqrt(n)
    x = 1 << -(-n.bit_length() // d)  # above the root
    while True:
        y = ((d - 1) * x + n // x ** (d - 1)) // d
        if y >= x:
            break
        x = y
    while x**d > n:
        x -= 1
    while (x + 1) ** d <= n:
        x += 1
    return x


def point_count(kind, s: int, t: int) -> int:
    kind = _kind(kind)
    if s < 2 or t < 2:
        raise ValueError(f"order ({s}, {t}) is not thick: need s, t >= 2")
    return (s + 1) * _g(kind, s * t)


def _u_for(kind: PointCountKind, m: int) -> int | None:
    """The u >= 1 with g(u) == m, if any."""
    u = iroot(m, _degree(kind))
    return u if u >= 1 and _g(kind, u) == m else None


def solve_order_equation(kind, N: int) -> list[tuple[int, int]]:
    """All (s, t) with s, t >= 2 and f(s, t) == N, ascending in s.

    Runs over the divisors s+1 of N and solves g(st) = N/(s+1) exactly.
    """
    kind = _kind(kind)
    if N < 1:
        raise ValueError(f"point count must be positive, got {N}")
    out = []
    for d in divisors(N):
        s = d - 1
        if s < 2:
            continue
        u = _u_for(kind, N // d)
        if u is not None and u % s == 0 and u // s >= 2:
            out.append((s, u // s))
    return out


def _max_t(kind: PointCountKind, s: int, bound: int) -> int:
    """Largest t with f(s, t) <= bound (1 if none >= 2)."""
    u = iroot(bound // (s + 1), _degree(kind))
    while u > 0 and (s + 1) * _g(kind, u) > bound:
        u -= 1
    return max(u // s, 1)


def solve_order_equations(kind, values: Iterable[int]) -> dict[int, list[tuple[int, int]]]:
    """Batch form of :func:`solve_order_equation`; same results per value.

    Small s: test s+1 | N for every value at least f(s, 2) (vectorised over
    32-bit limbs) and read u = st off a float root of N/(s+1).  Once
    enumerating t is cheaper than scanning the values, all remaining (s, t)
    pairs with f(s, t) <= max(values) are generated in vectorised chunks and
    matched by a float search.

    Float matches are confirmed exactly: the float window bounds |N - f|
    well below 2^63, so equal residues mod 2^64 (wrapping uint64
    arithmetic) force N == f.
    """
    kind = _kind(kind)
    # a million small result lists would otherwise trigger many full collections
    with _gc_paused():
        return _solve_batch(kind, sorted(set(values)))


@contextmanager
def _gc_paused():
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def _solve_batch(kind: PointCountKind, Ns: list[int]) -> dict[int, list[tuple[int, int]]]:
    if Ns and Ns[0] < 1:
        raise ValueError("point counts must be positive")
    out: dict[int, list[tuple[int, int]]] = {N: [] for N in Ns}
    if not Ns:
        return out
    top = Ns[-1]
    if top >= _LIMB_LIMIT:
        return {N: solve_order_equation(kind, N) for N in Ns}

    tab = _ValueTable(Ns)
    s_stop = iroot(top, _degree(kind) + 1) + 1  # f(s, 2) > s^(deg+1)
    s = 2
    while point_count(kind, s, 2) <= top:
        lo = bisect.bisect_left(Ns, point_count(kind, s, 2))
        if _SCALAR_COST * (len(Ns) - lo) < s_stop - s:
            # few values left: factoring each beats sweeping the remaining s
            for N in Ns[lo:]:
                out[N].extend(p for p in solve_order_equation(kind, N) if p[0] >= s)
            break
        if _ENUM_COST * (_max_t(kind, s, top) - 1) < len(Ns) - lo:
            _enumerate_from(kind, s, tab, out)
            break
        d = s + 1
        r = ((tab.hi[lo:] % d) * ((1 << 32) % d) + tab.lo[lo:]) % d
        idx = np.flatnonzero(r == 0) + lo
        m = tab.f[idx] / d
        root = np.floor(np.sqrt(m) if kind is PointCountKind.HEXAGON else np.cbrt(m))
        # g(u) lies strictly between u^deg and (u+1)^deg, so u is within one of root
        for off in (-1.0, 0.0, 1.0):
            u = root + off
            ok = (u >= 2 * s) & (np.fmod(u, s) == 0)
            ss = np.full(u.shape, float(s))
            hit = ok & tab.matches(kind, idx, ss, u / s)
            for i, uu in zip(idx[hit].tolist(), u[hit].tolist()):
                out[Ns[i]].append((s, int(uu) // s))
        s += 1
    for sols in out.values():
        if len(sols) > 1:
            sols.sort()
    return out


class _ValueTable:
    """Sorted target values in the forms the vectorised searches need."""

    def __init__(self, Ns: list[int]):
        self.values = Ns
        big = np.array(Ns, dtype=object)
        self.hi = (big >> 32).astype(np.int64)
        self.lo = (big & 0xFFFFFFFF).astype(np.int64)
        self.low64 = (big & 0xFFFFFFFFFFFFFFFF).astype(np.uint64)
        self.f = big.astype(np.float64)

    def matches(self, kind: PointCountKind, idx: np.ndarray, s: np.ndarray, t: np.ndarray) -> np.ndarray:
        """Exact test values[idx] == f(s, t) for float arrays holding integers."""
        v = (s + 1) * _float_g(kind, s * t)
        target = self.f[idx]
        close = np.abs(v - target) <= _REL_TOL * target
        s64 = s.astype(np.uint64)
        u64 = s64 * t.astype(np.uint64)
        with np.errstate(over="ignore"):
            low = (s64 + np.uint64(1)) * _float_g(kind, u64)
        return close & (low == self.low64[idx])


def _enumerate_from(kind: PointCountKind, s0: int, tab: _ValueTable, out: dict,
                    chunk: int = 1 << 21) -> None:
    """Match f(s, t) for all s >= s0, t >= 2 with f(s, t) <= max(values)."""
    deg = _degree(kind)
    Ns = tab.values
    # f(s, 2) > s^(deg+1), so larger s cannot contribute
    s_all = np.arange(s0, iroot(Ns[-1], deg + 1) + 2, dtype=np.float64)
    u_max = (tab.f[-1] / (s_all + 1)) ** (1.0 / deg) * (1 + 1e-9)
    counts = np.maximum(np.floor(u_max / s_all).astype(np.int64) - 1, 0)  # t = 2..t_max
    ends = np.cumsum(counts)
    start = 0
    while start < s_all.size:
        base = int(ends[start - 1]) if start else 0
        stop = max(int(np.searchsorted(ends, base + chunk, side="right")), start + 1)
        c = counts[start:stop]
        ss = np.repeat(s_all[start:stop], c)
        tt = np.arange(ss.size, dtype=np.float64) - np.repeat(np.cumsum(c) - c, c) + 2
        v = (ss + 1) * _float_g(kind, ss * tt)
        # sorted keys make the binary search far more cache friendly
        order = np.argsort(v)
        ss, tt, v = ss[order], tt[order], v[order]
        j = np.searchsorted(tab.f, v * (1 - _REL_TOL), side="left")
        live = np.arange(v.size)
        while live.size:
            j_live = j[live]
            inside = j_live < len(Ns)
            live, j_live = live[inside], j_live[inside]
            inside = tab.f[j_live] <= v[live] * (1 + _REL_TOL)
            live, j_live = live[inside], j_live[inside]
            hit = tab.matches(kind, j_live, ss[live], tt[live])
            for i, a, b in zip(j_live[hit].tolist(), ss[live][hit].tolist(), tt[live][hit].tolist()):
                out[Ns[i]].append((int(a), int(b)))
            j[live] += 1
        start = stop


def _float_g(kind: PointCountKind, u: np.ndarray) -> np.ndarray:
    if kind is PointCountKind.HEXAGON:
        return u * u + u + 1
    return (u + 1) * (u * u + 1)


# rough cost of one enumerated pair relative to one divisibility test
_ENUM_COST = 8
# rough cost of one scalar solve relative to one pass of the s loop
_SCALAR_COST = 30
# values below 2^94 split into two int64 limbs without overflow in the
# modular reduction, and a relative float window of _REL_TOL around them
# stays far below 2^63
_LIMB_LIMIT = 2**94
# float evaluation of f is good to a few ulps; this window is much wider
_REL_TOL = 1e-12


@dataclass(frozen=True)
class FilterResult:
    passed: bool
    reason: str

    def __bool__(self) -> bool:
        return self.passed


def squarefree_part(m: int) -> int:
    """Product of the primes dividing m to an odd power (trial division)."""
    if m < 1:
        raise ValueError("need a positive integer")
    out = 1
    p = 2
    while p * p <= m:
        k = 0
        while m % p == 0:
            m //= p
            k += 1
        if k % 2:
            out *= p
        p += 1
    return out * m


def feit_higman_filter(n: int, s: int, t: int) -> FilterResult:
    if s < 2 or t < 2:
        raise ValueError(f"order ({s}, {t}) is not thick")
    if n not in (2, 3, 4, 6, 8):
        return FilterResult(False, f"n = {n} not in {{2, 3, 4, 6, 8}}")
    if n in (2, 4):
        return FilterResult(True, f"no square-free condition for n = {n}")
    sf = squarefree_part(s * t)
    need = 2 if n == 8 else 1
    if sf != need:
        return FilterResult(False, f"square-free part of st = {s * t} is {sf}, need {need}")
    return FilterResult(True, f"square-free part of st = {s * t} is {sf}")


def is_large(group_order: int, subgroup_order: int) -> bool:
    """|H|^3 > |G| for a subgroup H of G."""
    if subgroup_order < 1 or group_order % subgroup_order:
        raise ValueError(f"{subgroup_order} does not divide {group_order}")
    return subgroup_order**3 > group_order


# -- exclusion report -------------------------------------------------------------

@dataclass
class CandidateAction:
    group: str
    stabilizer: str
    group_order: int = field(init=False)
    stabilizer_order: int = field(init=False)

    def __post_init__(self):
        self.group_order = named_order(self.group)
        self.stabilizer_order = named_order(self.stabilizer)
        if self.group_order % self.stabilizer_order:
            raise ValueError(f"|{self.stabilizer}| does not divide |{self.group}|")

    @property
    def index(self) -> int:
        return self.group_order // self.stabilizer_order


DEFAULT_TABLE: tuple[tuple[str, str], ...] = (
    ("PSL(5,3)", "M11"),
    ("PSL(4,5)", "2^4.A6"),
    ("PSL(4,7)", "PSU(4,2)"),
) + tuple((f"PSL(2,{q})", "A(5)") for q in (41, 49, 59, 61, 71))


def default_table() -> list[CandidateAction]:
    return [CandidateAction(g, h) for g, h in DEFAULT_TABLE]


@dataclass
class ReportRow:
    group: str
    stabilizer: str
    index: int
    hexagon_solutions: list[tuple[int, int]]
    octagon_solutions: list[tuple[int, int]]

    @property
    def excluded(self) -> bool:
        return not self.hexagon_solutions and not self.octagon_solutions

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "stabilizer": self.stabilizer,
            "index": json_int(self.index),
            "hexagon_solutions": [list(p) for p in self.hexagon_solutions],
            "octagon_solutions": [list(p) for p in self.octagon_solutions],
            "excluded": self.excluded,
        }


def exclusion_report(table: Sequence[CandidateAction]) -> list[ReportRow]:
    rows = []
    for c in table:
        N = c.index
        rows.append(ReportRow(c.group, c.stabilizer, N,
                              solve_order_equation(PointCountKind.HEXAGON, N),
                              solve_order_equation(PointCountKind.OCTAGON, N)))
    return rows


def json_int(value: int) -> int | str:
    """Integers beyond 2^53 are emitted as strings."""
    return value if abs(value) <= 2**53 else str(value)


def parse_table(text: str) -> list[CandidateAction]:
    """JSON list of {"group": "PSL(5,3)", "stabilizer": "M11"} objects."""
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("table must be a JSON list")
    out = []
    for i, row in enumerate(data):
        if not isinstance(row, dict) or "group" not in row or "stabilizer" not in row:
            raise ValueError(f"row {i} needs 'group' and 'stabilizer'")
        out.append(CandidateAction(str(row["group"]), str(row["stabilizer"])))
    return out


def format_report_text(rows: Sequence[ReportRow]) -> str:
    header = ("G", "G_x", "|G:G_x|", "hexagon (s,t)", "octagon (s,t)", "status")
    body = [(r.group, r.stabilizer, str(r.index),
             " ".join(f"({s},{t})" for s, t in r.hexagon_solutions) or "-",
             " ".join(f"({s},{t})" for s, t in r.octagon_solutions) or "-",
             "EXCLUDED" if r.excluded else "NOT EXCLUDED") for r in rows]
    widths = [max(len(x) for x in col) for col in zip(header, *body)]
    lines = ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in (header, *body)]
    return "\n".join(lines)
