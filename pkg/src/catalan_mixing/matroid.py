"""Lattice path matroids, their minors and duals, and negative-correlation checks.

Minors keep the full ground set ``[m]``: contracting ``e`` keeps the bases
containing ``e`` and deleting ``e`` keeps those avoiding it. A minor is
therefore just a set of forced up-steps (contracted) and forced down-steps
(deleted) passed through to the counting routines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from . import counting
from .counting import StepConstraints
from .paths import (
    DOWN,
    UP,
    LatticePath,
    as_path,
    dominates,
    iter_between,
    path_from_up_set,
    sawtooth,
    staircase,
    up_step_indices,
)

MATERIALIZE_LIMIT = 16


@dataclass(frozen=True)
class LatticePathMatroid:
    """The matroid whose bases are the up-step sets of paths between two bounds."""

    lower: LatticePath
    upper: LatticePath

    def __post_init__(self):
        lower, upper = as_path(self.lower), as_path(self.upper)
        if not dominates(upper, lower):
            raise ValueError(f"bounds are not ordered: {lower} is not below {upper}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def m(self) -> int:
        return self.lower.m

    @property
    def rank(self) -> int:
        return self.lower.r

    @cached_property
    def num_bases(self) -> int:
        return counting.count_between(self.lower, self.upper)

    def contains(self, p: LatticePath | str) -> bool:
        """Whether ``p`` lies between the bounds (i.e. its up-set is a basis)."""
        p = as_path(p)
        if p.m != self.m or p.r != self.rank:
            return False
        return all(
            lo <= h <= hi for lo, h, hi in zip(self.lower.heights, p.heights, self.upper.heights)
        )

    def is_basis(self, s: Iterable[int]) -> bool:
        s = set(s)
        if len(s) != self.rank or not s <= set(range(1, self.m + 1)):
            return False
        return self.contains(path_from_up_set(self.m, s))

    def paths(self, minor: MinorSpec | None = None) -> list[LatticePath]:
        """Basis paths (optionally of a minor), lexicographic with U < D."""
        self._check_small()
        c = (minor or MinorSpec()).constraints()
        return [LatticePath(s) for s in iter_between(self.lower, self.upper, c.forced_up, c.forced_down)]

    def bases(self, minor: MinorSpec | None = None) -> list[frozenset[int]]:
        return [frozenset(up_step_indices(p)) for p in self.paths(minor)]

    def _check_small(self):
        if self.m > MATERIALIZE_LIMIT:
            raise ValueError(
                f"refusing to materialize bases for m = {self.m} > {MATERIALIZE_LIMIT}; use the counting routines"
            )


@dataclass(frozen=True)
class MinorSpec:
    """Contracted elements (kept in every basis) and deleted ones (kept out)."""

    contracted: frozenset[int] = frozenset()
    deleted: frozenset[int] = frozenset()

    def __post_init__(self):
        contracted, deleted = frozenset(self.contracted), frozenset(self.deleted)
        if contracted & deleted:
            raise ValueError(f"elements both contracted and deleted: {sorted(contracted & deleted)}")
        object.__setattr__(self, "contracted", contracted)
        object.__setattr__(self, "deleted", deleted)

    def constraints(self) -> StepConstraints:
        return StepConstraints(self.contracted, self.deleted)

    @property
    def elements(self) -> frozenset[int]:
        return self.contracted | self.deleted


@dataclass(frozen=True)
class CorrelationVerdict:
    """The four minor counts for a pair ``e, f`` and the sign of their cross difference.

    ``both`` counts bases containing e and f, ``neither`` those avoiding both,
    ``e_only`` and ``f_only`` those containing exactly one of them.
    """

    e: int
    f: int
    both: int
    neither: int
    e_only: int
    f_only: int

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (self.both, self.neither, self.e_only, self.f_only)

    @property
    def slack(self) -> int:
        return self.e_only * self.f_only - self.both * self.neither

    @property
    def holds(self) -> bool:
        return self.slack >= 0


def make_lpm(a: LatticePath | str, b: LatticePath | str) -> LatticePathMatroid:
    return LatticePathMatroid(as_path(a), as_path(b))


def catalan_matroid(n: int) -> LatticePathMatroid:
    if n < 1:
        raise ValueError("order must be at least 1")
    return LatticePathMatroid(sawtooth(n), staircase(n))


def cube_matroid(n: int) -> LatticePathMatroid:
    """``L[(DU)^n, (UD)^n]``: one element from each pair ``{2i-1, 2i}``."""
    return make_lpm("DU" * n, "UD" * n)


def uniform_matroid(m: int, r: int) -> LatticePathMatroid:
    """All ``r``-subsets of ``[m]``; its exchange walk is the Bernoulli-Laplace model."""
    return make_lpm(DOWN * (m - r) + UP * r, UP * r + DOWN * (m - r))


def read_lpm(text: str) -> LatticePathMatroid:
    """Parse the two-line matroid file format (lower bound, then upper bound)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise ValueError(f"matroid file needs exactly two path lines, got {len(lines)}")
    return make_lpm(lines[0], lines[1])


def format_lpm(M: LatticePathMatroid) -> str:
    return f"{M.lower}\n{M.upper}\n"


def all_lattice_path_matroids(m: int) -> Iterable[LatticePathMatroid]:
    """Every ``L[A, B]`` on ground set ``[m]``, over all ranks and comparable pairs."""
    for r in range(m + 1):
        paths = [LatticePath(s) for s in iter_between(
            LatticePath(DOWN * (m - r) + UP * r), LatticePath(UP * r + DOWN * (m - r)))]
        for a in paths:
            for b in paths:
                if all(x <= y for x, y in zip(a.heights, b.heights)):
                    yield LatticePathMatroid(a, b)


def transversal_system(M: LatticePathMatroid) -> list[tuple[int, int]]:
    """Intervals whose transversals are the bases of ``M``.

    The i-th interval runs from the i-th up-step of the upper bound to the
    i-th up-step of the lower bound (the upper path reaches each up-step
    no later than the lower one).
    """
    return list(zip(up_step_indices(M.upper), up_step_indices(M.lower)))


def has_transversal(sets: Sequence[Iterable[int]], s: Iterable[int]) -> bool:
    """Whether ``s`` is a system of distinct representatives of ``sets``.

    Requires ``|s| == len(sets)`` and a perfect matching between elements of
    ``s`` and the sets containing them (augmenting-path search).
    """
    s = sorted(s)
    sets = [frozenset(x) for x in sets]
    if len(s) != len(sets):
        return False
    owner: dict[int, int] = {}  # set index -> matched element

    def augment(x, seen):
        for k, members in enumerate(sets):
            if x in members and k not in seen:
                seen.add(k)
                if k not in owner or augment(owner[k], seen):
                    owner[k] = x
                    return True
        return False

    return all(augment(x, set()) for x in s)


def interval_sets(intervals: Iterable[tuple[int, int]]) -> list[range]:
    return [range(lo, hi + 1) for lo, hi in intervals]


def transversal_bases(sets: Sequence[Iterable[int]], m: int) -> set[frozenset[int]]:
    """Brute force: every ``r``-subset of ``[m]`` admitting distinct representatives."""
    r = len(sets)
    return {
        frozenset(s)
        for s in itertools.combinations(range(1, m + 1), r)
        if has_transversal(sets, s)
    }


def dual(M: LatticePathMatroid) -> LatticePathMatroid:
    """Matroid whose bases are the complements of the bases of ``M``.

    Exchanging U and D negates every height, so the order flips and the
    complemented upper bound becomes the new lower bound.
    """
    flip = str.maketrans({UP: DOWN, DOWN: UP})
    return LatticePathMatroid(
        LatticePath(M.upper.steps.translate(flip)), LatticePath(M.lower.steps.translate(flip))
    )


def verify_exchange_axiom(family: Iterable[Iterable[int]]) -> bool:
    """Brute-force check of the basis exchange axiom on an explicit family."""
    family = {frozenset(b) for b in family}
    if not family:
        raise ValueError("empty family")
    if len({len(b) for b in family}) != 1:
        raise ValueError("sets in the family have different sizes")
    for a, b in itertools.product(family, repeat=2):
        for e in a - b:
            if not any((a - {e}) | {f} in family for f in b - a):
                return False
    return True


def minor_pair_counts(
    M: LatticePathMatroid, minor: MinorSpec | None, e: int, f: int
) -> CorrelationVerdict:
    minor = minor or MinorSpec()
    if e == f:
        raise ValueError("e and f must be distinct")
    if {e, f} & minor.elements:
        raise ValueError(f"pair ({e}, {f}) overlaps the minor's elements")
    for x in (e, f):
        if not 1 <= x <= M.m:
            raise ValueError(f"element {x} outside [1, {M.m}]")
    c = minor.constraints()

    def count(up, down):
        return counting.count_between(M.lower, M.upper, c.with_steps(up, down))

    return CorrelationVerdict(
        e, f,
        both=count((e, f), ()),
        neither=count((), (e, f)),
        e_only=count((e,), (f,)),
        f_only=count((f,), (e,)),
    )


def pair_verdicts(M: LatticePathMatroid, minor: MinorSpec | None = None) -> list[CorrelationVerdict]:
    """Verdicts for every ``e < f`` outside the minor's elements.

    Uses one forward sweep per (e, step at e) against a shared backward
    completion table, instead of four separate counts per pair.
    """
    minor = minor or MinorSpec()
    c = minor.constraints()
    m = M.m
    lo, hi = M.lower.heights, M.upper.heights
    back = counting.completion_table(M.lower, M.upper, c)

    def moves(pos):
        return [s for s in (1, -1) if not (s == 1 and pos in c.forced_down or s == -1 and pos in c.forced_up)]

    def advance(dist, pos, steps):
        out: dict[int, int] = {}
        for h, v in dist.items():
            for s in steps:
                g = h + s
                if lo[pos - 1] <= g <= hi[pos - 1]:
                    out[g] = out.get(g, 0) + v
        return out

    free = [x for x in range(1, m + 1) if x not in minor.elements]
    prefix = [{0: 1}]  # prefix[i]: path counts reaching each height after i steps
    for pos in range(1, m + 1):
        prefix.append(advance(prefix[-1], pos, moves(pos)))

    verdicts = []
    for e in free:
        tallies = {}
        for s1 in (1, -1):
            dist = advance(prefix[e - 1], e, [s1])
            for f in range(e + 1, m + 1):
                if f in free:
                    for s2 in (1, -1):
                        nxt = back[f]
                        tallies[f, s1, s2] = sum(v * nxt.get(h + s2, 0) for h, v in dist.items())
                dist = advance(dist, f, moves(f))
        for f in free:
            if f > e:
                verdicts.append(CorrelationVerdict(
                    e, f,
                    both=tallies[f, 1, 1], neither=tallies[f, -1, -1],
                    e_only=tallies[f, 1, -1], f_only=tallies[f, -1, 1],
                ))
    return verdicts


def is_negatively_correlated(M: LatticePathMatroid, minor: MinorSpec | None = None) -> bool:
    return all(v.holds for v in pair_verdicts(M, minor))


@dataclass
class BalanceReport:
    minors_checked: int = 0
    pairs_checked: int = 0
    # (contracted, deleted, e, f, slack) for every failing pair
    violations: list[tuple[tuple[int, ...], tuple[int, ...], int, int, int]] = field(default_factory=list)

    @property
    def balanced(self) -> bool:
        return not self.violations


def _minors_up_to(m: int, size: int) -> Iterable[MinorSpec]:
    ground = range(1, m + 1)
    for k in range(size + 1):
        for chosen in itertools.combinations(ground, k):
            for signs in itertools.product((True, False), repeat=k):
                yield MinorSpec(
                    frozenset(x for x, s in zip(chosen, signs) if s),
                    frozenset(x for x, s in zip(chosen, signs) if not s),
                )


def random_minor(m: int, rng) -> MinorSpec:
    k = rng.randint(0, max(m - 2, 0))
    chosen = rng.sample(range(1, m + 1), k)
    split = rng.randint(0, k)
    return MinorSpec(frozenset(chosen[:split]), frozenset(chosen[split:]))


def check_balanced(
    M: LatticePathMatroid, minor_budget: int = 1000, seed: int = 0, exhaustive_size: int = 4
) -> BalanceReport:
    """Search for a negative-correlation violation among minors of ``M``.

    Every minor with at most ``exhaustive_size`` fixed elements is checked,
    then ``minor_budget`` random minors drawn from ``seed``. A clean report
    is evidence, not proof: balance quantifies over all ``3^m`` minors.
    """
    report = BalanceReport()
    rng = counting.make_rng(seed)
    exhaustive = _minors_up_to(M.m, min(exhaustive_size, M.m))
    sampled = (random_minor(M.m, rng) for _ in range(minor_budget))
    for minor in itertools.chain(exhaustive, sampled):
        report.minors_checked += 1
        for v in pair_verdicts(M, minor):
            report.pairs_checked += 1
            if not v.holds:
                report.violations.append(
                    (tuple(sorted(minor.contracted)), tuple(sorted(minor.deleted)), v.e, v.f, v.slack)
                )
    return report
