"""Lattice paths over up/down steps.

A path of length ``m`` is stored as a string over ``{"U", "D"}``. All
position arguments are 1-based; height profiles are indexed so that
``heights[i - 1]`` is the height after step ``i`` (the origin height 0 is
implicit).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import accumulate
from typing import Iterable, Iterator

UP = "U"
DOWN = "D"

_INPUT_SYNONYMS = str.maketrans({"+": UP, "-": DOWN})
_LEX_KEY = str.maketrans({UP: "0", DOWN: "1"})


@dataclass(frozen=True)
class LatticePath:
    """An immutable lattice path, e.g. ``LatticePath("UUDD")``.

    ``+``/``-`` are accepted on input and normalized to ``U``/``D``.
    """

    steps: str

    def __post_init__(self):
        steps = self.steps.translate(_INPUT_SYNONYMS)
        if not steps or set(steps) - {UP, DOWN}:
            raise ValueError(f"not a lattice path string: {self.steps!r}")
        object.__setattr__(self, "steps", steps)

    def __str__(self):
        return self.steps

    def __len__(self):
        return len(self.steps)

    @property
    def m(self) -> int:
        return len(self.steps)

    @cached_property
    def r(self) -> int:
        """Number of up-steps."""
        return self.steps.count(UP)

    @cached_property
    def heights(self) -> tuple[int, ...]:
        return heights(self)

    def step(self, i: int) -> str:
        if not 1 <= i <= self.m:
            raise IndexError(f"step index {i} outside [1, {self.m}]")
        return self.steps[i - 1]

    def swap(self, i: int, j: int) -> LatticePath:
        """Return the path with steps ``i`` and ``j`` exchanged."""
        s = list(self.steps)
        s[i - 1], s[j - 1] = s[j - 1], s[i - 1]
        return LatticePath("".join(s))

    def sort_key(self) -> str:
        """Key ordering paths lexicographically with U before D."""
        return self.steps.translate(_LEX_KEY)


def as_path(p: LatticePath | str) -> LatticePath:
    return p if isinstance(p, LatticePath) else LatticePath(p)


def heights(p: LatticePath | str) -> tuple[int, ...]:
    """Height after each step: ``(h_1, ..., h_m)``."""
    steps = p.steps if isinstance(p, LatticePath) else as_path(p).steps
    return tuple(accumulate(1 if c == UP else -1 for c in steps))


def is_dyck(p: LatticePath | str) -> bool:
    p = as_path(p)
    h = p.heights
    return p.m % 2 == 0 and h[-1] == 0 and min(h) >= 0


def _check_comparable(p: LatticePath, q: LatticePath) -> None:
    if p.m != q.m or p.r != q.r:
        raise ValueError(
            f"paths {p} and {q} do not share endpoints "
            f"(lengths {p.m}/{q.m}, up-counts {p.r}/{q.r})"
        )


def dominates(q: LatticePath | str, p: LatticePath | str) -> bool:
    """True iff ``p <= q`` in the height order."""
    p, q = as_path(p), as_path(q)
    _check_comparable(p, q)
    return all(hp <= hq for hp, hq in zip(p.heights, q.heights))


def dominates_by_up_steps(q: LatticePath | str, p: LatticePath | str) -> bool:
    """``p <= q`` decided from up-step positions: q's i-th up-step is no later than p's."""
    p, q = as_path(p), as_path(q)
    _check_comparable(p, q)
    return all(qi <= pi for pi, qi in zip(up_step_indices(p), up_step_indices(q)))


def up_step_indices(p: LatticePath | str) -> tuple[int, ...]:
    steps = as_path(p).steps
    return tuple(i for i, c in enumerate(steps, start=1) if c == UP)


def path_from_up_set(m: int, s: Iterable[int]) -> LatticePath:
    s = set(s)
    bad = [i for i in s if not 1 <= i <= m]
    if bad:
        raise ValueError(f"indices {sorted(bad)} outside [1, {m}]")
    return LatticePath("".join(UP if i in s else DOWN for i in range(1, m + 1)))


def narayana_statistic(p: LatticePath | str) -> int:
    """Number of down-steps at even positions."""
    steps = as_path(p).steps
    return steps[1::2].count(DOWN)


def sawtooth(n: int) -> LatticePath:
    """``(UD)^n``, the lowest Dyck path."""
    return LatticePath("UD" * n)


def staircase(n: int) -> LatticePath:
    """``U^n D^n``, the highest Dyck path."""
    return LatticePath(UP * n + DOWN * n)


def iter_between(
    a: LatticePath,
    b: LatticePath,
    forced_up: frozenset[int] = frozenset(),
    forced_down: frozenset[int] = frozenset(),
) -> Iterator[str]:
    """Yield step strings of all paths between ``a`` and ``b`` in U-before-D order.

    Optional forced positions prune the search; used by the exhaustive
    sweeps, which want raw strings rather than path objects.
    """
    m = a.m
    lo, hi = a.heights, b.heights
    buf = []

    def rec(i, h):
        if i == m:
            yield "".join(buf)
            return
        pos = i + 1
        if pos not in forced_down and h + 1 <= hi[i]:
            buf.append(UP)
            yield from rec(i + 1, h + 1)
            buf.pop()
        if pos not in forced_up and h - 1 >= lo[i]:
            buf.append(DOWN)
            yield from rec(i + 1, h - 1)
            buf.pop()

    yield from rec(0, 0)


def enumerate_between(a: LatticePath | str, b: LatticePath | str) -> list[LatticePath]:
    """All paths ``p`` with ``a <= p <= b``, lexicographic with U < D.

    Exponential in general; meant for small lengths.
    """
    a, b = as_path(a), as_path(b)
    if not dominates(b, a):
        raise ValueError(f"bounds are not ordered: {a} is not below {b}")
    return [LatticePath(s) for s in iter_between(a, b)]


def all_paths(m: int, r: int) -> list[LatticePath]:
    """Every path of length ``m`` with ``r`` up-steps, lexicographic."""
    if not 0 <= r <= m:
        raise ValueError(f"up-count {r} outside [0, {m}]")
    low = LatticePath(DOWN * (m - r) + UP * r)
    high = LatticePath(UP * r + DOWN * (m - r))
    return enumerate_between(low, high)
