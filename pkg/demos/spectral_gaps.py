"""Exact transition matrices, spectral gaps and mixing times of the walks."""
from fractions import Fraction

from catalan_mixing import (
    basis_exchange,
    catalan_matroid,
    certify_upper_bound,
    dirichlet_form,
    dyck_adjacent_transposition,
    dyck_random_transposition,
    exact_mixing_time,
    spectral_gap,
    transition_matrix,
    variance,
)
from catalan_mixing.analysis import narayana_variance_closed_form, relaxation_lower_bound
from catalan_mixing.paths import narayana_statistic

T = transition_matrix(dyck_random_transposition(2))
print(T.to_fractions())
print(spectral_gap(T))

# gap of the transposition walk vs the basis-exchange walk on the same paths
for n in range(2, 8):
    k_rt, k_be = dyck_random_transposition(n), basis_exchange(catalan_matroid(n))
    rt = spectral_gap(transition_matrix(k_rt), kernel=k_rt)
    be = spectral_gap(transition_matrix(k_be), kernel=k_be)
    print(n, rt.num_states, f"{rt.gap:.6f}", f"{be.gap:.6f}", rt.gap / be.gap, Fraction(2 * n, 2 * n - 1))

# the Narayana statistic as a test function: E/Var bounds the gap from above
for n in range(2, 9):
    k = dyck_random_transposition(n)
    T = transition_matrix(k)
    E = dirichlet_form(T, narayana_statistic)
    V = variance(T.states, narayana_statistic)
    print(n, E, V, V == narayana_variance_closed_form(n), certify_upper_bound(k, T), Fraction(4, n))

# adjacent transpositions: much smaller gap, not covered by the matroid bound
for n in range(2, 7):
    T = transition_matrix(dyck_adjacent_transposition(n))
    print(n, spectral_gap(T).gap)

# total variation from the worst start
T = transition_matrix(dyck_random_transposition(5))
rep = exact_mixing_time(T)
print(rep.t_mix, relaxation_lower_bound(spectral_gap(T).gap))
print(rep.to_csv())
