import math
from fractions import Fraction

import numpy as np
import pytest

from catalan_mixing.analysis import (
    certify_upper_bound,
    dirichlet_form,
    eigenvalues,
    exact_mixing_time,
    expected_states,
    jerrum_son_gap_bound,
    kernel_for,
    log_sobolev_entropy,
    log_sobolev_lower_bound,
    log_sobolev_upper_bound,
    narayana_variance_closed_form,
    relaxation_lower_bound,
    scaling_experiment,
    spectral_gap,
    variance,
)
from catalan_mixing.chains import (
    basis_exchange,
    bernoulli_laplace,
    dyck_adjacent_transposition,
    dyck_random_transposition,
    transition_matrix,
)
from catalan_mixing.matroid import catalan_matroid
from catalan_mixing.paths import narayana_statistic

F = Fraction


@pytest.fixture(scope="module")
def rt2():
    return transition_matrix(dyck_random_transposition(2))


def test_dirichlet_examples(rt2):
    assert dirichlet_form(rt2, lambda s: 7) == 0
    assert dirichlet_form(rt2, lambda s: int(str(s) == "UUDD")) == F(1, 12)
    T3 = transition_matrix(dyck_random_transposition(3))
    assert dirichlet_form(T3, narayana_statistic) <= F(1, 2)


def test_dirichlet_accepts_value_list(rt2):
    assert dirichlet_form(rt2, [1, 0]) == F(1, 12)
    with pytest.raises(ValueError):
        dirichlet_form(rt2, [1, 0, 0])


def test_variance_examples():
    states = transition_matrix(dyck_random_transposition(3)).states
    assert sorted(narayana_statistic(s) for s in states) == [1, 2, 2, 2, 3]
    assert variance(states, narayana_statistic) == F(2, 5)
    assert variance(states, lambda s: 3) == 0


@pytest.mark.parametrize("n", range(2, 10))
def test_variance_closed_form(n):
    states = dyck_random_transposition(n).states
    v = variance(states, narayana_statistic)
    assert v == narayana_variance_closed_form(n)
    assert v >= F(n, 8)


def test_log_sobolev_entropy():
    states = dyck_random_transposition(3).states
    assert log_sobolev_entropy(states, lambda s: 2) == pytest.approx(0.0, abs=1e-15)
    # direct evaluation for values 1, 2, 2, 2, 3
    vals = np.array([1, 2, 2, 2, 3], float) ** 2
    expected = np.mean(vals * (np.log(vals) - np.log(vals.mean())))
    assert log_sobolev_entropy(states, narayana_statistic) == pytest.approx(expected, rel=1e-12)
    assert log_sobolev_entropy(states, narayana_statistic) > 0
    with pytest.raises(ValueError):
        log_sobolev_entropy(states, lambda s: 0)


@pytest.mark.parametrize("n", range(2, 6))
def test_log_sobolev_bounds_consistent(n):
    k = dyck_random_transposition(n)
    T = transition_matrix(k)
    upper = log_sobolev_upper_bound(T)
    gap = spectral_gap(T, kernel=k).gap
    assert float(log_sobolev_lower_bound(k)) <= upper + 1e-12
    assert 2 * float(log_sobolev_lower_bound(k)) <= gap / 2 + 1e-12


def test_gap_examples(rt2):
    rep = spectral_gap(rt2, kernel=dyck_random_transposition(2))
    assert rep.gap_exact == F(1, 3) and rep.gap == pytest.approx(1 / 3, abs=1e-15)
    assert rep.jerrum_son_lower == F(1, 4) and rep.dyck_upper == 2
    assert rep.consistent
    k = basis_exchange(catalan_matroid(2))
    rep = spectral_gap(transition_matrix(k), kernel=k)
    assert rep.gap_exact == F(1, 4) == rep.jerrum_son_lower
    rep = spectral_gap(transition_matrix(bernoulli_laplace(2, 1)))
    assert rep.gap_exact == 2 and rep.eigen_min == -1


def test_gap_requires_two_states():
    with pytest.raises(ValueError):
        spectral_gap(transition_matrix(dyck_random_transposition(1)))


@pytest.mark.parametrize("n", range(3, 7))
def test_gap_matches_exact_eigenvalue_guess(n):
    # exact values observed: lambda_RT = 1/(2n-1), lambda_BE = 1/(2n)
    k_rt = dyck_random_transposition(n)
    k_be = basis_exchange(catalan_matroid(n))
    assert spectral_gap(transition_matrix(k_rt)).gap == pytest.approx(1 / (2 * n - 1), abs=1e-12)
    assert spectral_gap(transition_matrix(k_be)).gap == pytest.approx(1 / (2 * n), abs=1e-12)


@pytest.mark.parametrize("n", range(2, 7))
def test_eigenvalues_sane(n):
    for k in (dyck_random_transposition(n), dyck_adjacent_transposition(n), basis_exchange(catalan_matroid(n))):
        T = transition_matrix(k)
        ev = eigenvalues(T)
        assert ev.min() >= -1 - 1e-12 and ev.max() == pytest.approx(1.0, abs=1e-12)
        P = T.to_dense()
        assert np.allclose(P @ np.ones(len(T)), np.ones(len(T)))


def test_certificate_examples(rt2):
    assert certify_upper_bound(dyck_random_transposition(2)) == F(1, 3)
    c3 = certify_upper_bound(dyck_random_transposition(3))
    assert c3 <= F(4, 3)
    with pytest.raises(ValueError):
        certify_upper_bound(basis_exchange(catalan_matroid(3)))


@pytest.mark.parametrize("n", range(2, 8))
def test_certificate_never_below_gap(n):
    for k in (dyck_random_transposition(n), dyck_adjacent_transposition(n)):
        T = transition_matrix(k)
        c = certify_upper_bound(k, T)
        assert float(c) >= spectral_gap(T).gap - 1e-9
        assert c <= F(4, n)


@pytest.mark.parametrize("n", range(2, 8))
def test_narayana_is_one_lipschitz(n):
    for k in (dyck_random_transposition(n), dyck_adjacent_transposition(n)):
        T = transition_matrix(k)
        coo = T.counts.tocoo()
        for x, y in zip(coo.row, coo.col):
            assert abs(narayana_statistic(T.states[x]) - narayana_statistic(T.states[y])) <= 1


def test_jerrum_son_bound_scope():
    assert jerrum_son_gap_bound(dyck_adjacent_transposition(3)) is None
    assert jerrum_son_gap_bound(dyck_random_transposition(3)) == F(2, 18)
    assert jerrum_son_gap_bound(bernoulli_laplace(6, 3)) == F(2, 18)


def test_mixing_examples(rt2):
    rep = exact_mixing_time(rt2, F(1, 4))
    assert rep.t_mix == 2
    for t, tv in rep.tv_curve:
        assert tv == pytest.approx(0.5 * (2 / 3) ** t, abs=1e-15)
    assert rep.to_csv().startswith("t,tv\n0,0.5\n")
    assert isinstance(rep.error_budget, float)


def test_mixing_zero_when_epsilon_large():
    T = transition_matrix(dyck_random_transposition(3))
    initial = exact_mixing_time(T, F(1, 4)).tv_curve[0][1]
    assert exact_mixing_time(T, initial).t_mix == 0
    assert exact_mixing_time(T, 1).t_mix == 0


def test_mixing_periodic_chain_raises():
    with pytest.raises(RuntimeError):
        exact_mixing_time(transition_matrix(bernoulli_laplace(2, 1)), F(1, 4), t_max=50)


@pytest.mark.parametrize("n", range(2, 6))
def test_mixing_relaxation_lower_bound(n):
    T = transition_matrix(dyck_random_transposition(n))
    rep = exact_mixing_time(T)
    gap = spectral_gap(T).gap
    assert rep.t_mix >= math.ceil(relaxation_lower_bound(gap) - 1e-9)
    tvs = [tv for _, tv in rep.tv_curve]
    assert all(b <= a + rep.error_budget for a, b in zip(tvs, tvs[1:]))


def test_relaxation_bound_formula():
    assert relaxation_lower_bound(0.5) == pytest.approx(math.log(2))
    assert relaxation_lower_bound(0.5, epsilon=0.125) == pytest.approx(math.log(4))


def test_scaling_dyck_rt():
    table = scaling_experiment("dyck-rt", range(2, 6))
    t = [r.t_mix for r in table.rows]
    assert t == sorted(t)
    for r in table.rows:
        assert 1 / r.n**2 <= r.gap <= 4 / r.n
        assert r.states == expected_states("dyck-rt", r.n)
    assert table.exponent is not None
    assert table.to_csv().splitlines()[0] == "n,states,gap,jerrum_son_lower,four_over_n,t_mix"


def test_scaling_cube():
    table = scaling_experiment("cube", [3, 4, 5])
    scaled = [r.gap * r.n**2 for r in table.rows]
    assert max(scaled) / min(scaled) < 2
    assert [r.states for r in table.rows] == [8, 16, 32]


def test_bernoulli_laplace_gap_exceeds_dyck():
    for n in range(2, 6):
        bl = spectral_gap(transition_matrix(kernel_for("bernoulli-laplace", n))).gap
        rt = spectral_gap(transition_matrix(kernel_for("dyck-rt", n))).gap
        assert bl > rt


def test_kernel_for_unknown():
    with pytest.raises(ValueError):
        kernel_for("lazy", 3)
