"""The case-based injection behind negative correlation of lattice path matroids.

For ``e < f`` it maps a pair ``(p, q)``, with ``p`` up at both ``e`` and ``f``
and ``q`` down at both, to a pair whose first path is up at ``e`` / down at
``f`` and whose second is down at ``e`` / up at ``f``, all within the same
bounds. Existence of such an injection is exactly

    |both| * |neither| <= |e_only| * |f_only|.

Write ``diff(x) = h_x(p) - h_x(q)`` for lattice positions ``x = 0..m``. The
three cases, tried in order:

1. ``diff`` vanishes somewhere in ``[e, f-1]``: swap the tails after the
   first such ``x``.
2. Otherwise let ``d = diff(f-1)`` and ``x`` the first position in ``[f, m]``
   with ``diff(x) = d``; swap the step blocks ``f..x``. Accepted only if both
   results stay within the bounds.
3. Otherwise let ``d = diff(e)`` and ``x`` the last position in ``[0, e-1]``
   with ``diff(x) = d``; swap the step blocks ``x+1..e``.

Each operation is an involution on the relevant pairs, which is what makes
the inverse cheap.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from itertools import accumulate

from .matroid import LatticePathMatroid, MinorSpec
from .paths import DOWN, UP, LatticePath, as_path, iter_between


class Case(enum.Enum):
    CASE1 = 1
    CASE2 = 2
    CASE3 = 3


@dataclass(frozen=True)
class InjectionCase:
    tag: Case
    pivot: int


def _diff(p: str, q: str) -> list[int]:
    # diff[x] for lattice positions 0..m
    return [0, *accumulate((p[i] == UP) - (p[i] == DOWN) - (q[i] == UP) + (q[i] == DOWN) for i in range(len(p)))]


def _within(s: str, lo: tuple, hi: tuple) -> bool:
    h = 0
    for c, a, b in zip(s, lo, hi):
        h += 1 if c == UP else -1
        if h < a or h > b:
            return False
    return True


def _case1(p, q, e, f, diff):
    for x in range(e, f):
        if diff[x] == 0:
            return x, p[:x] + q[x:], q[:x] + p[x:]
    return None


def _case2(p, q, f, diff):
    # Caller checks the bounds. Returns None if the translated fragment never meets p.
    d = diff[f - 1]
    for x in range(f, len(diff)):
        if diff[x] == d:
            return x, p[: f - 1] + q[f - 1 : x] + p[x:], q[: f - 1] + p[f - 1 : x] + q[x:]
    return None


def _case3(p, q, e, diff):
    d = diff[e]
    for x in range(e - 1, -1, -1):
        if diff[x] == d:
            return x, q[:x] + p[x:e] + q[e:], p[:x] + q[x:e] + p[e:]
    return None


def _forward(p: str, q: str, e: int, f: int, lo: tuple, hi: tuple):
    """Return ``(case, pivot, p', q')`` or raise if no case applies."""
    diff = _diff(p, q)
    hit = _case1(p, q, e, f, diff)
    if hit is not None:
        return (Case.CASE1, *hit)
    hit = _case2(p, q, f, diff)
    if hit is not None and _within(hit[1], lo, hi) and _within(hit[2], lo, hi):
        return (Case.CASE2, *hit)
    hit = _case3(p, q, e, diff)
    if hit is None:
        raise InjectionFailure(f"no case applies to p={p}, q={q}, e={e}, f={f}")
    return (Case.CASE3, *hit)


def _recover(p2: str, q2: str, e: int, f: int, lo: tuple, hi: tuple):
    """Candidate preimage by the recovery recipe.

    Test for an intersection in ``[e, f-1]``, then try a valid Case 2 move,
    else undo Case 3. Each step is its own inverse, so the recipe is the
    forward map applied to the image.
    """
    try:
        return _forward(p2, q2, e, f, lo, hi)
    except InjectionFailure:
        return None


class InjectionFailure(RuntimeError):
    pass


def _in_domain(p: str, q: str, e: int, f: int, lo, hi, c: MinorSpec | None = None) -> bool:
    if not (p[e - 1] == UP and p[f - 1] == UP and q[e - 1] == DOWN and q[f - 1] == DOWN):
        return False
    if c is not None and not (_admits(p, c) and _admits(q, c)):
        return False
    return _within(p, lo, hi) and _within(q, lo, hi)


def _in_codomain(p2: str, q2: str, e: int, f: int, lo, hi, c: MinorSpec | None = None) -> bool:
    if not (p2[e - 1] == UP and p2[f - 1] == DOWN and q2[e - 1] == DOWN and q2[f - 1] == UP):
        return False
    if c is not None and not (_admits(p2, c) and _admits(q2, c)):
        return False
    return _within(p2, lo, hi) and _within(q2, lo, hi)


def _admits(s: str, c: MinorSpec) -> bool:
    return all(s[i - 1] == UP for i in c.contracted) and all(s[i - 1] == DOWN for i in c.deleted)


def _check_pair(M: LatticePathMatroid, e: int, f: int) -> None:
    if not 1 <= e < f <= M.m:
        raise ValueError(f"need 1 <= e < f <= {M.m}, got e={e}, f={f}")


def classify_and_apply(
    M: LatticePathMatroid, e: int, f: int, p: LatticePath | str, q: LatticePath | str
) -> tuple[InjectionCase, LatticePath, LatticePath]:
    """Apply the injection to ``(p, q)``; the first output is up at e, down at f."""
    _check_pair(M, e, f)
    p, q = as_path(p), as_path(q)
    lo, hi = M.lower.heights, M.upper.heights
    if not _in_domain(p.steps, q.steps, e, f, lo, hi):
        raise ValueError(f"({p}, {q}) is not a pair (up at e and f, down at e and f) between the bounds")
    case, x, p2, q2 = _forward(p.steps, q.steps, e, f, lo, hi)
    return InjectionCase(case, x), LatticePath(p2), LatticePath(q2)


def invert(
    M: LatticePathMatroid, e: int, f: int, p2: LatticePath | str, q2: LatticePath | str
) -> tuple[LatticePath, LatticePath] | None:
    """Preimage of ``(p2, q2)`` under the injection, or None outside its image."""
    _check_pair(M, e, f)
    p2, q2 = as_path(p2), as_path(q2)
    lo, hi = M.lower.heights, M.upper.heights
    if not _in_codomain(p2.steps, q2.steps, e, f, lo, hi):
        raise ValueError(f"({p2}, {q2}) is not a pair (up/down at e, down/up at f) between the bounds")
    found = _invert_raw(p2.steps, q2.steps, e, f, lo, hi)
    return None if found is None else (LatticePath(found[0]), LatticePath(found[1]))


def _invert_raw(p2, q2, e, f, lo, hi):
    rec = _recover(p2, q2, e, f, lo, hi)
    if rec is None:
        return None
    _, _, p, q = rec
    if not _in_domain(p, q, e, f, lo, hi):
        return None
    _, _, fp, fq = _forward(p, q, e, f, lo, hi)
    return (p, q) if (fp, fq) == (p2, q2) else None


@dataclass
class InjectionReport:
    domain_size: int = 0
    image_size: int = 0
    codomain_size: int = 0
    case_counts: dict[str, int] = field(default_factory=lambda: {"case1": 0, "case2": 0, "case3": 0})
    # Case 2 taken while p was strictly below q just before f
    case2_below: int = 0
    # (kind, p, q, detail) tuples; empty on success
    violations: list[tuple[str, str, str, str]] = field(default_factory=list)

    @property
    def injective(self) -> bool:
        return self.image_size == self.domain_size and not self.violations

    def merge(self, other: InjectionReport) -> None:
        self.domain_size += other.domain_size
        self.image_size += other.image_size
        self.codomain_size += other.codomain_size
        for k, v in other.case_counts.items():
            self.case_counts[k] += v
        self.case2_below += other.case2_below
        self.violations.extend(other.violations)


def verify_injection(
    M: LatticePathMatroid, e: int, f: int, minor: MinorSpec | None = None
) -> InjectionReport:
    """Exhaustively apply the injection on one pair ``e < f`` and audit it.

    Checks that some case applies to every domain pair, that outputs land
    in the right sets (and in the minor, when one is given), that no two
    pairs collide, that the recovery recipe returns the original pair, and
    that a Case 3 output never admits a valid Case 2 move.
    """
    _check_pair(M, e, f)
    minor = minor or MinorSpec()
    if {e, f} & minor.elements:
        raise ValueError("e and f must lie outside the minor's elements")
    lo, hi = M.lower.heights, M.upper.heights
    up, down = minor.contracted, minor.deleted
    both = list(iter_between(M.lower, M.upper, up | {e, f}, down))
    neither = list(iter_between(M.lower, M.upper, up, down | {e, f}))
    n_e_only = sum(1 for _ in iter_between(M.lower, M.upper, up | {e}, down | {f}))
    n_f_only = sum(1 for _ in iter_between(M.lower, M.upper, up | {f}, down | {e}))

    report = InjectionReport(codomain_size=n_e_only * n_f_only)
    seen: dict[tuple[str, str], tuple[str, str]] = {}
    for p, q in itertools.product(both, neither):
        report.domain_size += 1
        try:
            case, x, p2, q2 = _forward(p, q, e, f, lo, hi)
        except InjectionFailure as exc:
            report.violations.append(("no-case", p, q, str(exc)))
            continue
        report.case_counts[f"case{case.value}"] += 1
        if case is Case.CASE2 and _diff(p, q)[f - 1] < 0:
            report.case2_below += 1
        if not _in_codomain(p2, q2, e, f, lo, hi, minor):
            report.violations.append(("outside-codomain", p, q, f"{case.name} x={x} -> ({p2}, {q2})"))
            continue
        prior = seen.setdefault((p2, q2), (p, q))
        if prior != (p, q):
            report.violations.append(("collision", p, q, f"same image ({p2}, {q2}) as {prior}"))
            continue
        back = _invert_raw(p2, q2, e, f, lo, hi)
        if back != (p, q):
            report.violations.append(("round-trip", p, q, f"({p2}, {q2}) recovered as {back}"))
        if case is Case.CASE3:
            alt = _case2(p2, q2, f, _diff(p2, q2))
            if alt is not None and _within(alt[1], lo, hi) and _within(alt[2], lo, hi):
                report.violations.append(("case2-after-case3", p, q, f"({p2}, {q2})"))
    report.image_size = len(seen)
    if report.domain_size > report.codomain_size:
        report.violations.append(("counting", "", "", f"{report.domain_size} > {report.codomain_size}"))
    return report


def verify_matroid(M: LatticePathMatroid, minor: MinorSpec | None = None) -> InjectionReport:
    """Merged report over every pair ``e < f`` (outside the minor)."""
    minor = minor or MinorSpec()
    total = InjectionReport()
    free = [x for x in range(1, M.m + 1) if x not in minor.elements]
    for e, f in itertools.combinations(free, 2):
        total.merge(verify_injection(M, e, f, minor))
    return total
