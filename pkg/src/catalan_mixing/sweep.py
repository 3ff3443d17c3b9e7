"""Exhaustive verification over every lattice path matroid of a given size.

Paths are packed into integers (bit ``i-1`` set iff step ``i`` is up) and the
injection is re-expressed on those bitmasks in numba-compiled loops; the
string implementation in :mod:`catalan_mixing.injection` stays the reference
and the two are cross-checked by the test suite.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .paths import LatticePath

# stats slots
DOMAIN, CASE1, CASE2, CASE3, IMAGE, CODOMAIN, CASE2_BELOW, VIOLATIONS = range(8)
VIOLATION_KINDS = ("no-case", "outside-codomain", "collision", "round-trip", "case2-after-case3")


def path_masks(m: int, r: int) -> np.ndarray:
    """All length-``m`` paths with ``r`` up-steps as sorted bitmasks."""
    out = [sum(1 << (i - 1) for i in ups) for ups in itertools.combinations(range(1, m + 1), r)]
    return np.array(sorted(out), dtype=np.int64)


def mask_heights(masks: np.ndarray, m: int) -> np.ndarray:
    bits = (masks[:, None] >> np.arange(m)) & 1
    return np.cumsum(2 * bits - 1, axis=1)


def mask_to_path(mask: int, m: int) -> LatticePath:
    return LatticePath("".join("U" if (int(mask) >> i) & 1 else "D" for i in range(m)))


def path_to_mask(p: LatticePath | str) -> int:
    s = str(p)
    return sum(1 << i for i, c in enumerate(s) if c == "U")


def iter_matroid_bases(m: int):
    """Yield ``(lower_mask, upper_mask, bases)`` for every comparable pair of bounds.

    ``bases`` is the sorted mask array of paths between the bounds.
    """
    for r in range(m + 1):
        masks = path_masks(m, r)
        H = mask_heights(masks, m)
        below = (H[:, None, :] <= H[None, :, :]).all(axis=2)
        for ia, ib in zip(*np.nonzero(below)):
            inside = (H >= H[ia]).all(axis=1) & (H <= H[ib]).all(axis=1)
            yield int(masks[ia]), int(masks[ib]), masks[inside]


@njit(cache=True)
def _within(mask, lo, hi, m):
    h = 0
    for i in range(m):
        if (mask >> i) & 1:
            h += 1
        else:
            h -= 1
        if h < lo[i] or h > hi[i]:
            return False
    return True


@njit(cache=True)
def _fill_diff(p, q, m, diff):
    diff[0] = 0
    for i in range(m):
        diff[i + 1] = diff[i] + 2 * (((p >> i) & 1) - ((q >> i) & 1))


@njit(cache=True)
def _case2_move(p, q, f, m, lo, hi, diff):
    # returns (ok, x, p2, q2); diff must already hold diff(p, q)
    d = diff[f - 1]
    for x in range(f, m + 1):
        if diff[x] == d:
            blk = ((1 << x) - 1) ^ ((1 << (f - 1)) - 1)
            p2 = (p & ~blk) | (q & blk)
            q2 = (q & ~blk) | (p & blk)
            if _within(p2, lo, hi, m) and _within(q2, lo, hi, m):
                return True, x, p2, q2
            return False, x, p2, q2
    return False, -1, p, q


@njit(cache=True)
def _forward(p, q, e, f, m, lo, hi, diff):
    _fill_diff(p, q, m, diff)
    for x in range(e, f):
        if diff[x] == 0:
            tail = ((1 << m) - 1) ^ ((1 << x) - 1)
            return 1, x, (p & ~tail) | (q & tail), (q & ~tail) | (p & tail)
    ok, x, p2, q2 = _case2_move(p, q, f, m, lo, hi, diff)
    if ok:
        return 2, x, p2, q2
    d = diff[e]
    for x in range(e - 1, -1, -1):
        if diff[x] == d:
            blk = ((1 << e) - 1) ^ ((1 << x) - 1)
            return 3, x, (q & ~blk) | (p & blk), (p & ~blk) | (q & blk)
    return 0, -1, p, q


@njit(cache=True)
def _verify_pair(bases, m, lo, hi, e, f, stats, witness):
    be = np.int64(1) << (e - 1)
    bf = np.int64(1) << (f - 1)
    has_e = (bases & be) != 0
    has_f = (bases & bf) != 0
    P = bases[has_e & has_f]
    Q = bases[~has_e & ~has_f]
    E = bases[has_e & ~has_f]
    F = bases[~has_e & has_f]
    nF = len(F)
    stats[CODOMAIN] += len(E) * nF
    if len(P) == 0 or len(Q) == 0:
        return
    mark = np.zeros(len(E) * nF, dtype=np.uint8)
    diff = np.empty(m + 1, dtype=np.int64)
    diff2 = np.empty(m + 1, dtype=np.int64)
    for p in P:
        for q in Q:
            stats[DOMAIN] += 1
            kind = -1
            c, x, p2, q2 = _forward(p, q, e, f, m, lo, hi, diff)
            if c == 0:
                kind = 0
            else:
                stats[c] += 1
                if c == 2 and diff[f - 1] < 0:
                    stats[CASE2_BELOW] += 1
                if not ((p2 & be) and not (p2 & bf) and not (q2 & be) and (q2 & bf)
                        and _within(p2, lo, hi, m) and _within(q2, lo, hi, m)):
                    kind = 1
                else:
                    i = np.searchsorted(E, p2)
                    j = np.searchsorted(F, q2)
                    k = i * nF + j
                    if mark[k]:
                        kind = 2
                    else:
                        mark[k] = 1
                        stats[IMAGE] += 1
                        # recovery: the same operation applied to the image
                        c2, _, a, b = _forward(p2, q2, e, f, m, lo, hi, diff2)
                        if c2 != c or a != p or b != q:
                            kind = 3
                        elif c == 3:
                            _fill_diff(p2, q2, m, diff2)
                            ok, _, _, _ = _case2_move(p2, q2, f, m, lo, hi, diff2)
                            if ok:
                                kind = 4
            if kind >= 0:
                stats[VIOLATIONS] += 1
                if witness[0] < 0:
                    witness[0] = kind
                    witness[1] = e
                    witness[2] = f
                    witness[3] = p
                    witness[4] = q


@njit(cache=True)
def _verify_all_pairs(bases, m, lo, hi, stats, witness):
    for e in range(1, m + 1):
        for f in range(e + 1, m + 1):
            _verify_pair(bases, m, lo, hi, e, f, stats, witness)


@dataclass
class InjectionSweep:
    """Aggregate outcome of the bitmask injection sweep."""

    matroids: int = 0
    domain: int = 0
    image: int = 0
    codomain: int = 0
    cases: dict[str, int] = field(default_factory=lambda: {"case1": 0, "case2": 0, "case3": 0})
    case2_below: int = 0
    violations: int = 0
    # (matroid lower, upper, kind, e, f, p, q) for the first violation per matroid
    witnesses: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.image == self.domain

    def add(self, other: InjectionSweep) -> None:
        self.matroids += other.matroids
        self.domain += other.domain
        self.image += other.image
        self.codomain += other.codomain
        for k in self.cases:
            self.cases[k] += other.cases[k]
        self.case2_below += other.case2_below
        self.violations += other.violations
        self.witnesses.extend(other.witnesses)


def verify_bases(lower: int, upper: int, bases: np.ndarray, m: int) -> InjectionSweep:
    lo = mask_heights(np.array([lower], dtype=np.int64), m)[0]
    hi = mask_heights(np.array([upper], dtype=np.int64), m)[0]
    stats = np.zeros(8, dtype=np.int64)
    witness = np.full(5, -1, dtype=np.int64)
    _verify_all_pairs(bases, m, lo, hi, stats, witness)
    out = InjectionSweep(
        matroids=1,
        domain=int(stats[DOMAIN]),
        image=int(stats[IMAGE]),
        codomain=int(stats[CODOMAIN]),
        cases={"case1": int(stats[CASE1]), "case2": int(stats[CASE2]), "case3": int(stats[CASE3])},
        case2_below=int(stats[CASE2_BELOW]),
        violations=int(stats[VIOLATIONS]),
    )
    if witness[0] >= 0:
        kind, e, f, p, q = (int(v) for v in witness)
        out.witnesses.append((
            str(mask_to_path(lower, m)), str(mask_to_path(upper, m)), VIOLATION_KINDS[kind],
            e, f, str(mask_to_path(p, m)), str(mask_to_path(q, m)),
        ))
    return out


def verify_matroid_fast(lower: LatticePath | str, upper: LatticePath | str) -> InjectionSweep:
    from .matroid import make_lpm

    M = make_lpm(lower, upper)
    masks = path_masks(M.m, M.rank)
    H = mask_heights(masks, M.m)
    inside = (H >= np.array(M.lower.heights)).all(axis=1) & (H <= np.array(M.upper.heights)).all(axis=1)
    return verify_bases(path_to_mask(M.lower), path_to_mask(M.upper), masks[inside], M.m)


def _sweep_shard(task: tuple[int, int, int]) -> InjectionSweep:
    m, shard, shards = task
    total = InjectionSweep()
    for lower, upper, bases in itertools.islice(iter_matroid_bases(m), shard, None, shards):
        total.add(verify_bases(lower, upper, bases, m))
    return total


def injection_sweep(m_max: int, m_min: int = 1, jobs: int | None = None) -> InjectionSweep:
    """Run the injection audit on every ``L[A, B]`` with ``m_min <= m <= m_max``."""
    jobs = jobs or int(os.environ.get("CATALAN_MIXING_JOBS", "1"))
    shards = max(jobs, 1)
    tasks = [(m, s, shards) for m in range(m_min, m_max + 1) for s in range(shards)]
    total = InjectionSweep()
    if shards > 1:
        with ProcessPoolExecutor(shards) as pool:
            results = list(pool.map(_sweep_shard, tasks))
    else:
        results = [_sweep_shard(t) for t in tasks]
    for rep in results:
        total.add(rep)
    return total


def brute_force_pair_counts(bases: np.ndarray, m: int) -> tuple[np.ndarray, ...]:
    """Pair counts by direct tallies over the materialized bases.

    Returns ``(both, neither, e_only, f_only)`` as ``m x m`` integer matrices
    indexed ``[e-1, f-1]``.
    """
    X = ((bases[:, None] >> np.arange(m)) & 1).astype(np.int64)
    Y = 1 - X
    both = X.T @ X
    neither = Y.T @ Y
    e_only = X.T @ Y
    return both, neither, e_only, e_only.T
