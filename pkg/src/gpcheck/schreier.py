"""Deterministic Schreier-Sims for permutation groups on range(degree).

Permutations are int arrays ``p`` with ``p[i]`` the image of ``i``; products
read left to right, so ``a * b`` (``compose(a, b)``) applies ``a`` first.

The chain is built incrementally: :meth:`StabilizerChain.add_generator`
sifts the new element and only extends the chain when it is not already a
member, then re-establishes the strong generating property.  Feeding a
large redundant generating set therefore costs one sift per redundant
element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return b[a]


def inverse(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(a.size, dtype=a.dtype)
    return out


@dataclass
class _Level:
    base: int
    gens: list[np.ndarray] = field(default_factory=list)
    orbit: list[int] = field(default_factory=list)
    reps: dict[int, np.ndarray] = field(default_factory=dict)  # base -> point
    inv_reps: dict[int, np.ndarray] = field(default_factory=dict)
    tested: set[tuple[int, int]] = field(default_factory=set)


class StabilizerChain:
    """Base and strong generating set for a permutation group.

    ``base_hint`` lists preferred base points; when a new base point is
    needed the first hinted point moved by the element is used, falling
    back to the smallest moved point.
    """

    def __init__(self, degree: int, base_hint: Sequence[int] = ()):
        self.degree = degree
        self.base_hint = list(base_hint)
        self.identity = np.arange(degree, dtype=np.int32)
        self.levels: list[_Level] = []

    # -- queries ---------------------------------------------------------
    @property
    def base(self) -> list[int]:
        return [lvl.base for lvl in self.levels]

    @property
    def orbit_sizes(self) -> list[int]:
        return [len(lvl.orbit) for lvl in self.levels]

    def order(self) -> int:
        out = 1
        for size in self.orbit_sizes:
            out *= size
        return out

    def strong_generators(self) -> list[np.ndarray]:
        return list(self.levels[0].gens) if self.levels else []

    def sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        """Strip g through levels >= start; returns (residue, level reached)."""
        for i in range(start, len(self.levels)):
            lvl = self.levels[i]
            beta = int(g[lvl.base])
            u_inv = lvl.inv_reps.get(beta)
            if u_inv is None:
                return g, i
            g = u_inv[g]
        return g, len(self.levels)

    def contains(self, g: np.ndarray) -> bool:
        g = self._coerce(g)
        h, j = self.sift(g)
        return j == len(self.levels) and self._is_identity(h)

    # -- construction ----------------------------------------------------
    def add_generator(self, g) -> bool:
        """Add g to the group; returns False when g was already a member."""
        g = self._coerce(g)
        h, j = self.sift(g)
        if j == len(self.levels) and self._is_identity(h):
            return False
        if j == len(self.levels):
            self._new_level(h)
        for level in range(j + 1):
            self._add_strong(level, h)
        self._complete(j)
        return True

    def extend(self, gens: Iterable) -> int:
        """Add several generators; returns how many enlarged the group."""
        return sum(self.add_generator(g) for g in gens)

    def _coerce(self, g) -> np.ndarray:
        g = np.asarray(g, dtype=np.int32)
        if g.shape != (self.degree,):
            raise ValueError(f"permutation of degree {g.size}, expected {self.degree}")
        return g

    def _is_identity(self, g: np.ndarray) -> bool:
        return bool(np.array_equal(g, self.identity))

    def _new_level(self, g: np.ndarray) -> None:
        used = set(self.base)
        point = None
        for b in self.base_hint:
            if b not in used and g[b] != b:
                point = b
                break
        if point is None:
            moved = np.flatnonzero(g != self.identity)
            point = int(moved[0])
        lvl = _Level(base=point, orbit=[point])
        lvl.reps[point] = self.identity
        lvl.inv_reps[point] = self.identity
        self.levels.append(lvl)

    def _add_strong(self, level: int, g: np.ndarray) -> None:
        lvl = self.levels[level]
        lvl.gens.append(g)
        # extend the orbit, keeping existing transversal entries
        idx = 0
        while idx < len(lvl.orbit):
            pt = lvl.orbit[idx]
            u = lvl.reps[pt]
            for s in lvl.gens:
                img = int(s[pt])
                if img not in lvl.reps:
                    v = s[u]
                    lvl.reps[img] = v
                    lvl.inv_reps[img] = inverse(v)
                    lvl.orbit.append(img)
            idx += 1

    def _complete(self, i: int) -> None:
        while i >= 0:
            lvl = self.levels[i]
            jumped = False
            for beta in list(lvl.orbit):
                u = lvl.reps[beta]
                for gi, s in enumerate(lvl.gens):
                    key = (beta, gi)
                    if key in lvl.tested:
                        continue
                    lvl.tested.add(key)
                    gamma = int(s[beta])
                    h = lvl.inv_reps[gamma][s[u]]
                    if self._is_identity(h):
                        continue
                    y, j = self.sift(h, i + 1)
                    if j == len(self.levels) and self._is_identity(y):
                        continue
                    if j == len(self.levels):
                        self._new_level(y)
                    for level in range(i + 1, j + 1):
                        self._add_strong(level, y)
                    i = j
                    jumped = True
                    break
                if jumped:
                    break
            if not jumped:
                i -= 1


def group_order(degree: int, gens: Iterable, base_hint: Sequence[int] = ()) -> int:
    chain = StabilizerChain(degree, base_hint)
    chain.extend(gens)
    return chain.order()
