"""Transposition-type Markov chains on lattice paths.

Every kernel here walks on the paths between two fixed bounds and moves by
exchanging an up-step with a down-step, holding whenever the result would
leave the bounds:

* ``dyck-rt``: uniform unordered pair ``{i, j}``, ``i != j``, of ``[2n]``.
* ``dyck-adj``: uniform adjacent pair ``(i, i+1)``.
* ``basis-exchange``: uniform ``a`` in ``[m]`` and uniform up-step ``b``;
  move to the up-set ``B + a - b`` when that is a basis. Proposals with
  ``a`` already in ``B`` always hold.
* ``bernoulli-laplace``: uniform unordered pair on all paths with ``r``
  up-steps (no height constraint).

All four kernels are symmetric, so the uniform distribution is stationary.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterator

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .counting import make_rng
from .matroid import LatticePathMatroid, catalan_matroid, uniform_matroid
from .paths import UP, LatticePath, as_path, enumerate_between

DEFAULT_STATE_CAP = 20_000


class Variant(str, enum.Enum):
    DYCK_RT = "dyck-rt"
    DYCK_ADJ = "dyck-adj"
    BASIS_EXCHANGE = "basis-exchange"
    BERNOULLI_LAPLACE = "bernoulli-laplace"


@dataclass(frozen=True)
class ChainKernel:
    variant: Variant
    lower: LatticePath
    upper: LatticePath

    @property
    def m(self) -> int:
        return self.lower.m

    @property
    def r(self) -> int:
        return self.lower.r

    @property
    def n(self) -> int:
        """Half-length; the order of the Dyck paths for the Dyck variants."""
        return self.m // 2

    @property
    def is_dyck(self) -> bool:
        return self.variant in (Variant.DYCK_RT, Variant.DYCK_ADJ)

    @property
    def matroid(self) -> LatticePathMatroid:
        return LatticePathMatroid(self.lower, self.upper)

    @property
    def num_proposals(self) -> int:
        if self.variant is Variant.DYCK_ADJ:
            return self.m - 1
        if self.variant is Variant.BASIS_EXCHANGE:
            return self.m * self.r
        return comb(self.m, 2)

    @cached_property
    def states(self) -> list[LatticePath]:
        """State space in lexicographic order (U before D)."""
        return enumerate_between(self.lower, self.upper)

    def contains(self, s: LatticePath | str) -> bool:
        return self.matroid.contains(s)

    def proposals(self, s: LatticePath | str) -> Iterator[str]:
        """Resulting step string for each equally likely proposal from ``s``."""
        steps = as_path(s).steps
        lo, hi = self.lower.heights, self.upper.heights
        if self.variant is Variant.DYCK_ADJ:
            for i in range(1, self.m):
                yield _swap_if_valid(steps, i, i + 1, lo, hi)
        elif self.variant is Variant.BASIS_EXCHANGE:
            ups = [i for i, c in enumerate(steps, start=1) if c == UP]
            for a in range(1, self.m + 1):
                for b in ups:
                    yield steps if steps[a - 1] == UP else _swap_if_valid(steps, a, b, lo, hi)
        else:
            for i, j in itertools.combinations(range(1, self.m + 1), 2):
                yield _swap_if_valid(steps, i, j, lo, hi)

    def step(self, s: LatticePath | str, rng: random.Random) -> LatticePath:
        """One transition from ``s`` using ``rng``."""
        s = as_path(s)
        if not self.contains(s):
            raise ValueError(f"{s} is not a state of this chain")
        return LatticePath(self._step(s.steps, rng))

    def _step(self, steps: str, rng: random.Random) -> str:
        lo, hi = self.lower.heights, self.upper.heights
        if self.variant is Variant.DYCK_ADJ:
            i = rng.randrange(1, self.m)
            return _swap_if_valid(steps, i, i + 1, lo, hi)
        if self.variant is Variant.BASIS_EXCHANGE:
            a = rng.randrange(1, self.m + 1)
            ups = [i for i, c in enumerate(steps, start=1) if c == UP]
            b = ups[rng.randrange(len(ups))]
            return steps if steps[a - 1] == UP else _swap_if_valid(steps, a, b, lo, hi)
        i, j = rng.sample(range(1, self.m + 1), 2)
        return _swap_if_valid(steps, i, j, lo, hi)


def _swap_if_valid(steps: str, i: int, j: int, lo: tuple, hi: tuple) -> str:
    """Swap steps ``i`` and ``j`` if the result stays within ``[lo, hi]``.

    Only heights strictly between the two positions move (by 2), so only
    those are rechecked.
    """
    if i > j:
        i, j = j, i
    a, b = steps[i - 1], steps[j - 1]
    if a == b:
        return steps
    h = sum(1 if c == UP else -1 for c in steps[: i - 1])
    shift = -2 if a == UP else 2
    for k in range(i, j):
        h += 1 if steps[k - 1] == UP else -1
        g = h + shift
        if g < lo[k - 1] or g > hi[k - 1]:
            return steps
    return steps[: i - 1] + b + steps[i : j - 1] + a + steps[j:]


def dyck_random_transposition(n: int) -> ChainKernel:
    M = catalan_matroid(n)
    return ChainKernel(Variant.DYCK_RT, M.lower, M.upper)


def dyck_adjacent_transposition(n: int) -> ChainKernel:
    M = catalan_matroid(n)
    return ChainKernel(Variant.DYCK_ADJ, M.lower, M.upper)


def basis_exchange(M: LatticePathMatroid) -> ChainKernel:
    return ChainKernel(Variant.BASIS_EXCHANGE, M.lower, M.upper)


def bernoulli_laplace(m: int, r: int) -> ChainKernel:
    M = uniform_matroid(m, r)
    return ChainKernel(Variant.BERNOULLI_LAPLACE, M.lower, M.upper)


def simulate(k: ChainKernel, start: LatticePath | str, t: int, seed: int = 0) -> LatticePath:
    """State after ``t`` steps from ``start``; deterministic in ``seed``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    start = as_path(start)
    if not k.contains(start):
        raise ValueError(f"{start} is not a state of this chain")
    rng = make_rng(seed)
    s = start.steps
    for _ in range(t):
        s = k._step(s, rng)
    return LatticePath(s)


def trajectory(k: ChainKernel, start: LatticePath | str, t: int, seed: int = 0) -> list[LatticePath]:
    """States visited at times ``0..t`` (the dump format is one per line)."""
    rng = make_rng(seed)
    s = as_path(start).steps
    out = [LatticePath(s)]
    for _ in range(t):
        s = k._step(s, rng)
        out.append(LatticePath(s))
    return out


def simulate_many(k: ChainKernel, start: LatticePath | str, t: int, runs: int, seed: int = 0) -> np.ndarray:
    """Run ``runs`` independent copies for ``t`` steps, vectorized over runs.

    Returns an ``(runs, m)`` array of steps (+1 up, -1 down). Uses numpy's
    PCG64 generator, so its streams differ from :func:`simulate`.
    """
    rng = np.random.default_rng(seed)
    m = k.m
    lo = np.array(k.lower.heights)
    hi = np.array(k.upper.heights)
    x = np.tile(np.array([1 if c == UP else -1 for c in as_path(start).steps], dtype=np.int8), (runs, 1))
    rows = np.arange(runs)
    for _ in range(t):
        if k.variant is Variant.DYCK_ADJ:
            i = rng.integers(0, m - 1, size=runs)
            j = i + 1
        elif k.variant is Variant.BASIS_EXCHANGE:
            i = rng.integers(0, m, size=runs)
            nth = rng.integers(0, k.r, size=runs)
            j = np.argmax(np.cumsum(x == 1, axis=1) > nth[:, None], axis=1)
        else:
            i = rng.integers(0, m, size=runs)
            j = (i + rng.integers(1, m, size=runs)) % m
        y = x.copy()
        y[rows, i], y[rows, j] = x[rows, j], x[rows, i]
        h = np.cumsum(y, axis=1, dtype=np.int64)
        ok = ((h >= lo) & (h <= hi)).all(axis=1)
        if k.variant is Variant.BASIS_EXCHANGE:
            ok &= x[rows, i] == -1
        x[ok] = y[ok]
    return x


@dataclass(frozen=True)
class TransitionMatrix:
    """Exact transition matrix stored as integer proposal counts.

    Entry ``(x, y)`` is ``counts[x, y] / denominator``.
    """

    states: list[LatticePath]
    counts: sp.csr_matrix
    denominator: int

    @cached_property
    def index(self) -> dict[str, int]:
        return {str(s): i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def entry(self, x: int, y: int) -> Fraction:
        return Fraction(int(self.counts[x, y]), self.denominator)

    def to_fractions(self) -> list[list[Fraction]]:
        dense = self.counts.toarray()
        return [[Fraction(int(v), self.denominator) for v in row] for row in dense]

    def to_dense(self) -> np.ndarray:
        return self.counts.toarray() / self.denominator

    def is_symmetric(self) -> bool:
        return (self.counts != self.counts.T).nnz == 0

    def is_stochastic(self) -> bool:
        sums = np.asarray(self.counts.sum(axis=1)).ravel()
        return bool((sums == self.denominator).all()) and bool((self.counts.data >= 0).all())

    def is_irreducible(self) -> bool:
        n, _ = connected_components(self.counts, directed=True, connection="strong")
        return n == 1

    def is_aperiodic(self) -> bool:
        """For an irreducible symmetric chain: a self-loop or an odd cycle exists."""
        if (self.counts.diagonal() > 0).any():
            return True
        graph = self.counts.tolil().rows
        color = {0: 0}
        queue = [0]
        while queue:
            u = queue.pop()
            for v in graph[u]:
                if v not in color:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return True
        return False


def transition_matrix(k: ChainKernel, cap: int = DEFAULT_STATE_CAP) -> TransitionMatrix:
    """Build the exact matrix by enumerating every proposal from every state."""
    from .counting import count_between

    size = count_between(k.lower, k.upper)
    if size > cap:
        raise ValueError(f"{size} states exceeds the cap of {cap}")
    states = k.states
    index = {s.steps: i for i, s in enumerate(states)}
    rows, cols, vals = [], [], []
    for x, s in enumerate(states):
        tally: dict[int, int] = {}
        for t in k.proposals(s):
            y = index[t]
            tally[y] = tally.get(y, 0) + 1
        for y, c in tally.items():
            rows.append(x)
            cols.append(y)
            vals.append(c)
    counts = sp.csr_matrix((vals, (rows, cols)), shape=(len(states), len(states)), dtype=np.int64)
    return TransitionMatrix(states, counts, k.num_proposals)
