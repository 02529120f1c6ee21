"""Finite fields GF(p^e) and dense linear algebra over them.

Element encoding
----------------
An element of GF(p^e) is stored as an integer code 0 <= c < q.  The base-p
digits of c are the coefficients of a polynomial in x of degree < e,
lowest degree first, taken modulo a fixed monic polynomial f(x):

    c = c_0 + c_1 p + ... + c_{e-1} p^{e-1}  <->  c_0 + c_1 x + ... + c_{e-1} x^{e-1}

so code 0 is zero and code 1 is one.  For prime fields the code is just the
residue mod p.

The modulus f is the first *primitive* monic polynomial of degree e when
candidates x^e + a_{e-1} x^{e-1} + ... + a_0 are scanned in increasing order
of the code a_0 + a_1 p + ... + a_{e-1} p^{e-1}.  The stored generator is x
(code p).  For e = 1 the generator is the least primitive root mod p.
Examples: GF(4): x^2+x+1, GF(8): x^3+x+1, GF(9): x^2+x+2, GF(16): x^4+x+1.

Nonzero products use log/antilog tables.  Sums are computed mod p for prime
fields, by XOR for p = 2, and through a Zech-logarithm table otherwise.

Matrices are plain 2-D ``numpy.int64`` arrays of codes; every routine takes
the field explicitly and never mutates its inputs.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

MAX_ORDER = 2**16


class SingularMatrixError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q = p**e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = _prime_factors(q)[0]
    e = 0
    r = q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in factors):
            return g
    raise AssertionError("no primitive root")  # unreachable for prime p


def _powers_of_x(p: int, e: int, low: Sequence[int]) -> list[int] | None:
    """Codes of x^0, x^1, ..., x^(q-2) modulo x^e + sum(low[i] x^i).

    Returns None unless x has multiplicative order exactly q - 1.
    """
    q = p**e
    if p == 2:
        poly = (1 << e) | sum(b << i for i, b in enumerate(low))
        out = []
        c = 1
        for i in range(q - 1):
            if i and c == 1:
                return None
            out.append(c)
            c <<= 1
            if c & q:
                c ^= poly
        return out if c == 1 else None

    weights = [p**i for i in range(e)]
    digits = [1] + [0] * (e - 1)
    out = []
    for i in range(q - 1):
        code = sum(d * w for d, w in zip(digits, weights))
        if i and code == 1:
            return None
        out.append(code)
        top = digits[-1]
        digits = [0] + digits[:-1]
        if top:
            digits = [(d - top * a) % p for d, a in zip(digits, low)]
    ok = digits[0] == 1 and not any(digits[1:])
    return out if ok else None


class FieldTable:
    """Arithmetic tables for GF(p^e).  Build with :func:`make_field`."""

    def __init__(self, p: int, e: int, modulus: tuple[int, ...], exp: list[int]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus  # coefficients of f, lowest degree first, monic
        m = self.q - 1
        self.generator = exp[1 % m] if m > 1 else 1

        exp_arr = np.array(exp + exp, dtype=np.int64)
        log_arr = np.zeros(self.q, dtype=np.int64)
        log_arr[exp_arr[:m]] = np.arange(m, dtype=np.int64)
        self._exp = exp_arr
        self._log = log_arr

        codes = np.arange(self.q, dtype=np.int64)
        digits = (codes[:, None] // (p ** np.arange(e, dtype=np.int64))) % p
        weights = p ** np.arange(e, dtype=np.int64)
        self._neg = ((-digits) % p) @ weights
        inv = np.zeros(self.q, dtype=np.int64)
        inv[1:] = exp_arr[(m - log_arr[1:]) % m]
        self._inv = inv
        # zech[n] = log(1 + g^n), or -1 when 1 + g^n = 0
        one_plus = exp_arr[:m] - digits[exp_arr[:m], 0] + (digits[exp_arr[:m], 0] + 1) % p
        zech = np.where(one_plus == 0, -1, log_arr[one_plus])
        self._zech = zech.astype(np.int64)

        for arr in (self._exp, self._log, self._neg, self._inv, self._zech):
            arr.setflags(write=False)

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldTable) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self) -> int:
        return hash((self.p, self.e))

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    # -- scalar arithmetic ---------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return int(self.vadd(np.int64(a), np.int64(b)))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, int(self._neg[b]))

    def neg(self, a: int) -> int:
        return int(self._neg[a])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return int(self._inv[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 if k == 0 else 0
        return int(self._exp[(self._log[a] * k) % (self.q - 1)])

    def log(self, a: int) -> int:
        """Discrete log of a nonzero element to the base ``generator``."""
        if a == 0:
            raise ValueError("log of zero")
        return int(self._log[a])

    def element_order(self, a: int) -> int:
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        m = self.q - 1
        k, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            k += 1
            if k > m:
                raise AssertionError("order exceeds q - 1")
        return k

    def additive_basis(self) -> list[int]:
        """g^0, ..., g^(e-1): a basis of the field over its prime subfield."""
        return [self.pow(self.generator, i) for i in range(self.e)]

    # -- vectorised arithmetic (numpy broadcasting) --------------------------
    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        m = self.q - 1
        la = self._log[a]
        lb = self._log[b]
        z = self._zech[(lb - la) % m]
        s = np.where(z < 0, 0, self._exp[(la + np.where(z < 0, 0, z)) % m])
        return np.where(a == 0, b, np.where(b == 0, a, s))

    def vneg(self, a):
        return self._neg[np.asarray(a, dtype=np.int64)]

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a * b) % self.p
        prod_ = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, prod_)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        return self._inv[a]


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldTable:
    """Build (and cache) GF(p^e)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e}")
    q = p**e
    if q > MAX_ORDER:
        raise ValueError(f"field order {q} exceeds supported bound {MAX_ORDER}")
    if e == 1:
        g = _primitive_root(p)
        exp = [pow(g, i, p) for i in range(p - 1)]
        return FieldTable(p, 1, (-g % p, 1), exp)
    for a in range(1, q):
        low = [(a // p**i) % p for i in range(e)]
        if low[0] == 0:
            continue
        exp = _powers_of_x(p, e, low)
        if exp is not None:
            return FieldTable(p, e, tuple(low) + (1,), exp)
    raise AssertionError("no primitive polynomial found")  # unreachable


def field_of_order(q: int) -> FieldTable:
    p, e = prime_power(q)
    return make_field(p, e)


# -- matrices ----------------------------------------------------------------

def as_matrix(F: FieldTable, M) -> np.ndarray:
    """Validate and convert to a 2-D int64 array of codes."""
    A = np.array(M, dtype=np.int64)
    if A.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {A.shape}")
    if A.size and (A.min() < 0 or A.max() >= F.q):
        raise ValueError(f"matrix entries must be codes in 0..{F.q - 1}")
    return A


def identity(F: FieldTable, n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mat_mul(F: FieldTable, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[-1] != B.shape[0]:
        raise DimensionError(f"cannot multiply {A.shape} by {B.shape}")
    if F.e == 1:
        return (A @ B) % F.p
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for j in range(A.shape[-1]):
        out = F.vadd(out, F.vmul(A[..., j, None], B[j]))
    return out


def rref(F: FieldTable, M: np.ndarray) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row echelon form.  Returns (R, rank, pivot_columns)."""
    R = np.array(M, dtype=np.int64, copy=True)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        lead = int(R[r, c])
        if lead != 1:
            R[r] = F.vmul(R[r], F.inv(lead))
        col = R[:, c].copy()
        col[r] = 0
        others = np.flatnonzero(col)
        if others.size:
            if F.e == 1:
                R[others] = (R[others] - col[others, None] * R[r]) % F.p
            else:
                R[others] = F.vsub(R[others], F.vmul(col[others, None], R[r]))
        pivots.append(c)
        r += 1
    return R, r, pivots


def rank(F: FieldTable, M: np.ndarray) -> int:
    return rref(F, M)[1]


def det(F: FieldTable, M: np.ndarray) -> int:
    n, m = M.shape
    if n != m:
        raise DimensionError("determinant of a non-square matrix")
    R = np.array(M, dtype=np.int64, copy=True)
    d = 1
    for c in range(n):
        nz = np.flatnonzero(R[c:, c])
        if nz.size == 0:
            return 0
        piv = c + int(nz[0])
        if piv != c:
            R[[c, piv]] = R[[piv, c]]
            d = F.neg(d)
        lead = int(R[c, c])
        d = F.mul(d, lead)
        below = R[c + 1:, c]
        idx = np.flatnonzero(below)
        if idx.size:
            factors = F.vmul(below[idx], F.inv(lead))
            rows = c + 1 + idx
            R[rows] = F.vsub(R[rows], F.vmul(factors[:, None], R[c]))
    return d


def mat_inv(F: FieldTable, M: np.ndarray) -> np.ndarray:
    n, m = M.shape
    if n != m:
        raise DimensionError(f"cannot invert a {n}x{m} matrix")
    R, r, _ = rref(F, np.hstack([M, identity(F, n)]))
    if r < n or not np.array_equal(R[:, :n], identity(F, n)):
        raise SingularMatrixError("matrix is singular")
    return R[:, n:].copy()


def is_invertible(F: FieldTable, M: np.ndarray) -> bool:
    return M.shape[0] == M.shape[1] and rank(F, M) == M.shape[0]


def permutation_matrix(cycles: Iterable[Sequence[int]], n: int, F: FieldTable) -> np.ndarray:
    """0/1 matrix P with e_i P = e_{sigma(i)}; cycles use 1-based indices.

    With row vectors acting on the right, P(sigma) P(tau) = P(sigma then tau).
    """
    sigma = list(range(n))
    seen: set[int] = set()
    for cyc in cycles:
        cyc = [int(i) for i in cyc]
        for i in cyc:
            if not 1 <= i <= n:
                raise ValueError(f"cycle entry {i} out of range 1..{n}")
            if i in seen:
                raise ValueError(f"index {i} repeated across cycles")
            seen.add(i)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            sigma[a - 1] = b - 1
    P = np.zeros((n, n), dtype=np.int64)
    P[np.arange(n), sigma] = 1
    return P


def elementary(F: FieldTable, n: int, i: int, j: int, value: int) -> np.ndarray:
    """Transvection I + value * E_{i,j} (0-based, i != j)."""
    if i == j:
        raise ValueError("transvection needs i != j")
    M = identity(F, n)
    M[i, j] = value
    return M


def diagonal(F: FieldTable, entries: Sequence[int]) -> np.ndarray:
    return np.diag(np.array(entries, dtype=np.int64))


def random_matrix(F: FieldTable, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, F.q, size=(rows, cols), dtype=np.int64)


def random_invertible(F: FieldTable, n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        M = random_matrix(F, n, n, rng)
        if is_invertible(F, M):
            return M


def all_vectors(F: FieldTable, n: int) -> np.ndarray:
    """All q^n vectors; row index = sum v_i q^(n-1-i) (big-endian base q)."""
    return np.array(list(product(range(F.q), repeat=n)), dtype=np.int64).reshape(-1, n)


def format_matrix(M: np.ndarray) -> str:
    """Rows of comma-separated codes, one row per line."""
    return "\n".join(",".join(str(int(x)) for x in row) for row in M)
