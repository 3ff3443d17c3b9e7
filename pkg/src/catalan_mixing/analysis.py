"""Spectral gaps, Dirichlet forms and mixing times for the path chains.

With the uniform stationary distribution over ``N`` states,

    E(f, f) = 1/2 * sum_{x,y} (f(x) - f(y))^2 P(x, y) / N
    Var(f)  = mean(f^2) - mean(f)^2
    L(f)    = mean(f^2 * (log f^2 - log mean(f^2)))

and the spectral gap is ``1 - (second largest eigenvalue)``; these
symmetric kernels make it the infimum of ``E(f,f) / Var(f)``. Dirichlet
forms and variances are exact rationals. The gap, the entropy functional
and the mixing curves are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
import scipy.sparse.linalg as spla

from .chains import (
    ChainKernel,
    TransitionMatrix,
    Variant,
    basis_exchange,
    bernoulli_laplace,
    dyck_adjacent_transposition,
    dyck_random_transposition,
    transition_matrix,
)
from .counting import catalan
from .matroid import catalan_matroid, cube_matroid
from .paths import LatticePath, narayana_statistic

DENSE_EIGEN_LIMIT = 4000
DEFAULT_EPSILON = Fraction(1, 4)

StateFunction = Callable[[LatticePath], "int | Fraction"]


def _values(states: Sequence[LatticePath], f) -> list:
    if callable(f):
        return [f(s) for s in states]
    values = list(f)
    if len(values) != len(states):
        raise ValueError(f"{len(values)} function values for {len(states)} states")
    return values


def dirichlet_form(T: TransitionMatrix, f) -> Fraction:
    """Exact ``E(f, f)`` for ``f`` given as a callable on paths or a value list."""
    vals = [Fraction(v) for v in _values(T.states, f)]
    coo = T.counts.tocoo()
    total = Fraction(0)
    for x, y, c in zip(coo.row, coo.col, coo.data):
        if x != y:
            d = vals[x] - vals[y]
            total += d * d * int(c)
    return total / (2 * T.denominator * len(T))


def variance(states: Sequence[LatticePath], f) -> Fraction:
    vals = [Fraction(v) for v in _values(states, f)]
    n = len(vals)
    mean = sum(vals) / n
    return sum((v - mean) ** 2 for v in vals) / n


def log_sobolev_entropy(states: Sequence[LatticePath], f) -> float:
    vals = np.array([float(v) for v in _values(states, f)])
    sq = vals**2
    mean_sq = sq.mean()
    if mean_sq == 0:
        raise ValueError("entropy functional is undefined for the zero function")
    nz = sq > 0
    return float(np.sum(sq[nz] * (np.log(sq[nz]) - math.log(mean_sq))) / len(vals))


def jerrum_son_gap_bound(k: ChainKernel) -> Fraction | None:
    """Imported lower bound ``2/(m r)`` on the gap, where it is known to apply.

    It holds for basis exchange on a balanced matroid, and therefore also
    for Dyck random transpositions, whose off-diagonal entries are those of
    basis exchange on the Catalan matroid scaled up by ``2n/(2n-1)``.
    Adjacent transpositions are not covered.
    """
    if k.variant is Variant.DYCK_ADJ or k.r == 0 or k.r == k.m:
        return None
    return Fraction(2, k.m * k.r)


def log_sobolev_lower_bound(k: ChainKernel) -> Fraction | None:
    """Imported ``1/(2 m r)`` lower bound on the log-Sobolev constant."""
    bound = jerrum_son_gap_bound(k)
    return None if bound is None else bound / 4


@dataclass(frozen=True)
class SpectralReport:
    gap: float
    gap_exact: Fraction | None
    jerrum_son_lower: Fraction | None
    test_fn_upper: Fraction | None
    dyck_upper: Fraction | None
    num_states: int
    tolerance: float
    eigen_min: float

    @property
    def consistent(self) -> bool:
        tol = self.tolerance
        ok = True
        if self.jerrum_son_lower is not None:
            ok &= float(self.jerrum_son_lower) <= self.gap + tol
        if self.test_fn_upper is not None:
            ok &= self.gap <= float(self.test_fn_upper) + tol
        return ok


def eigenvalues(T: TransitionMatrix) -> np.ndarray:
    """All eigenvalues in ascending order (dense symmetric solver)."""
    return np.linalg.eigvalsh(T.to_dense())


def _second_eigenvalue(T: TransitionMatrix) -> tuple[float, float]:
    if len(T) <= DENSE_EIGEN_LIMIT:
        ev = eigenvalues(T)
        return float(ev[-2]), float(ev[0])
    A = T.counts.astype(float) / T.denominator
    top = spla.eigsh(A, k=2, which="LA", return_eigenvectors=False)
    bottom = spla.eigsh(A, k=1, which="SA", return_eigenvectors=False)
    return float(np.sort(top)[0]), float(bottom[0])


def narayana_ratio(T: TransitionMatrix) -> Fraction | None:
    """``E(f, f) / Var(f)`` for the Narayana statistic, when it is non-constant."""
    var = variance(T.states, narayana_statistic)
    if var == 0:
        return None
    return dirichlet_form(T, narayana_statistic) / var


def spectral_gap(
    T: TransitionMatrix, tolerance: float = 1e-10, kernel: ChainKernel | None = None
) -> SpectralReport:
    """Gap ``1 - lambda_2`` with the bound certificates attached.

    ``kernel`` supplies ``m``, ``r`` and the variant for the imported
    bounds; without it the bounds are left empty.
    """
    if len(T) < 2:
        raise ValueError("the spectral gap needs at least two states")
    if not T.is_irreducible():
        raise ValueError("transition matrix is reducible")
    gap_exact = None
    if len(T) == 2:
        p = T.entry(0, 1)
        gap_exact = 2 * p
        gap, low = float(gap_exact), float(1 - 2 * p)
    else:
        second, low = _second_eigenvalue(T)
        gap = 1.0 - second
    dyck_upper = Fraction(4, kernel.n) if kernel is not None and kernel.is_dyck else None
    return SpectralReport(
        gap=gap,
        gap_exact=gap_exact,
        jerrum_son_lower=jerrum_son_gap_bound(kernel) if kernel is not None else None,
        test_fn_upper=narayana_ratio(T),
        dyck_upper=dyck_upper,
        num_states=len(T),
        tolerance=tolerance,
        eigen_min=low,
    )


def certify_upper_bound(k: ChainKernel, T: TransitionMatrix | None = None) -> Fraction:
    """Upper bound on the gap of a Dyck chain from the Narayana test function."""
    if not k.is_dyck:
        raise ValueError("the Narayana certificate is defined for the Dyck chains")
    T = T or transition_matrix(k)
    ratio = narayana_ratio(T)
    if ratio is None:
        raise ValueError("Narayana statistic is constant on this state space")
    return ratio


def log_sobolev_upper_bound(T: TransitionMatrix, f=narayana_statistic) -> float:
    """``E(f, f) / L(f)``: an upper bound on the log-Sobolev constant."""
    return float(dirichlet_form(T, f)) / log_sobolev_entropy(T.states, f)


@dataclass
class MixingReport:
    epsilon: Fraction
    t_mix: int
    tv_curve: list[tuple[int, float]] = field(default_factory=list)
    # accumulated floating-point error allowance on each TV value
    error_budget: float = 0.0

    def to_csv(self) -> str:
        return "t,tv\n" + "".join(f"{t},{tv:.17g}\n" for t, tv in self.tv_curve)


def tv_from_starts(dist: np.ndarray) -> float:
    """Worst-start total variation distance of the rows of ``dist`` to uniform."""
    n = dist.shape[1]
    return float(0.5 * np.abs(dist - 1.0 / n).sum(axis=1).max())


def exact_mixing_time(
    T: TransitionMatrix, epsilon: Fraction | float = DEFAULT_EPSILON, t_max: int = 100_000
) -> MixingReport:
    """Iterate the distributions from every start until worst-case TV <= epsilon."""
    eps = Fraction(epsilon).limit_denominator(10**12)
    P = T.to_dense()
    n = len(T)
    dist = np.eye(n)
    report = MixingReport(epsilon=eps, t_mix=-1)
    unit = n * float(np.finfo(float).eps)
    for t in range(t_max + 1):
        tv = tv_from_starts(dist)
        report.tv_curve.append((t, tv))
        report.error_budget = float(unit * t)
        if tv <= float(eps):
            report.t_mix = t
            return report
        dist = dist @ P
    raise RuntimeError(f"TV still above {eps} after {t_max} steps (periodic or very slow chain?)")


def relaxation_lower_bound(gap: float, epsilon: float = 0.25) -> float:
    """``(1/gap - 1) * log(1 / (2 eps))``; equals ``(1/gap - 1) ln 2`` at eps = 1/4."""
    return (1.0 / gap - 1.0) * math.log(1.0 / (2.0 * epsilon))


SCALING_VARIANTS = ("dyck-rt", "dyck-adj", "basis-exchange", "cube", "bernoulli-laplace")


def kernel_for(variant: str, n: int) -> ChainKernel:
    """Kernel of order ``n``; ``basis-exchange`` uses the Catalan matroid and ``cube`` the pair matroid."""
    if variant == "dyck-rt":
        return dyck_random_transposition(n)
    if variant == "dyck-adj":
        return dyck_adjacent_transposition(n)
    if variant == "basis-exchange":
        return basis_exchange(catalan_matroid(n))
    if variant == "cube":
        return basis_exchange(cube_matroid(n))
    if variant == "bernoulli-laplace":
        return bernoulli_laplace(2 * n, n)
    raise ValueError(f"unknown chain {variant!r}; expected one of {', '.join(SCALING_VARIANTS)}")


@dataclass(frozen=True)
class ScalingRow:
    n: int
    states: int
    gap: float
    jerrum_son_lower: Fraction | None
    dyck_upper: Fraction
    t_mix: int


@dataclass
class ScalingTable:
    variant: str
    epsilon: Fraction
    rows: list[ScalingRow]
    # least-squares slope of log t_mix against log n; None with fewer than two usable rows
    exponent: float | None

    def to_csv(self) -> str:
        lines = ["n,states,gap,jerrum_son_lower,four_over_n,t_mix"]
        for r in self.rows:
            js = "" if r.jerrum_son_lower is None else str(r.jerrum_son_lower)
            lines.append(f"{r.n},{r.states},{r.gap:.17g},{js},{r.dyck_upper},{r.t_mix}")
        return "\n".join(lines) + "\n"


def scaling_experiment(
    variant: str, n_range: Sequence[int], epsilon: Fraction | float = DEFAULT_EPSILON
) -> ScalingTable:
    rows = []
    for n in n_range:
        k = kernel_for(variant, n)
        T = transition_matrix(k)
        rep = spectral_gap(T, kernel=k)
        mix = exact_mixing_time(T, epsilon)
        rows.append(ScalingRow(n, len(T), rep.gap, rep.jerrum_son_lower, Fraction(4, n), mix.t_mix))
    usable = [(r.n, r.t_mix) for r in rows if r.t_mix > 0]
    exponent = None
    if len(usable) >= 2:
        xs, ys = np.log([u[0] for u in usable]), np.log([u[1] for u in usable])
        exponent = float(np.polyfit(xs, ys, 1)[0])
    return ScalingTable(variant, Fraction(epsilon).limit_denominator(10**12), rows, exponent)


def narayana_variance_closed_form(n: int) -> Fraction:
    return Fraction((n + 1) * (n - 1), 4 * (2 * n - 1))


def expected_states(variant: str, n: int) -> int:
    """Closed-form state count for the named family (used as a sanity check)."""
    if variant in ("dyck-rt", "dyck-adj", "basis-exchange"):
        return catalan(n)
    if variant == "cube":
        return 2**n
    from math import comb

    return comb(2 * n, n)
