import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catalan_mixing.injection import (
    Case,
    InjectionCase,
    _diff,
    classify_and_apply,
    invert,
    verify_injection,
    verify_matroid,
)
from catalan_mixing.matroid import (
    MinorSpec,
    all_lattice_path_matroids,
    catalan_matroid,
    make_lpm,
    minor_pair_counts,
    random_minor,
)
from catalan_mixing.paths import heights
from catalan_mixing.sweep import injection_sweep, path_to_mask, verify_matroid_fast

EXAMPLES = [
    (3, 2, 4, "UUDUDD", "UDUDUD", Case.CASE1, 3, "UUDDUD", "UDUUDD"),
    (4, 2, 4, "UUUUDDDD", "UDUDUUDD", Case.CASE2, 5, "UUUDUDDD", "UDUUDUDD"),
    (4, 5, 6, "UUDDUUDD", "UUUUDDDD", Case.CASE3, 3, "UUUDUDDD", "UUDUDUDD"),
]


@pytest.mark.parametrize("n, e, f, p, q, case, x, p2, q2", EXAMPLES)
def test_worked_examples(n, e, f, p, q, case, x, p2, q2):
    M = catalan_matroid(n)
    got_case, got_p, got_q = classify_and_apply(M, e, f, p, q)
    assert got_case == InjectionCase(case, x)
    assert (str(got_p), str(got_q)) == (p2, q2)


@pytest.mark.parametrize("n, e, f, p, q, case, x, p2, q2", EXAMPLES)
def test_worked_examples_invert(n, e, f, p, q, case, x, p2, q2):
    back = invert(catalan_matroid(n), e, f, p2, q2)
    assert back is not None and tuple(map(str, back)) == (p, q)


def test_case2_example_heights():
    assert heights("UUUDUDDD") == (1, 2, 3, 2, 3, 2, 1, 0)
    assert heights("UDUUDUDD") == (1, 0, 1, 2, 1, 2, 1, 0)


def test_case3_example_no_case2():
    d = _diff("UUDDUUDD", "UUUUDDDD")
    assert d[5] == -2 and -2 not in d[6:]


def test_outside_image_returns_none():
    M = catalan_matroid(3)
    image = {tuple(map(str, classify_and_apply(M, 2, 4, "UUDUDD", "UDUDUD")[1:]))}
    codomain = [
        (p, q)
        for p in M.paths(MinorSpec({2}, {4}))
        for q in M.paths(MinorSpec({4}, {2}))
    ]
    assert len(codomain) == 2
    outside = [pq for pq in codomain if tuple(map(str, pq)) not in image]
    assert len(outside) == 1
    assert invert(M, 2, 4, *outside[0]) is None


def test_empty_domain():
    M = catalan_matroid(2)
    rep = verify_injection(M, 2, 3)
    assert rep.domain_size == 0 and rep.injective
    for p in M.paths(MinorSpec({2}, {3})):
        for q in M.paths(MinorSpec({3}, {2})):
            assert invert(M, 2, 3, p, q) is None


def test_precondition_errors():
    M = catalan_matroid(3)
    with pytest.raises(ValueError):
        classify_and_apply(M, 4, 2, "UUDUDD", "UDUDUD")
    with pytest.raises(ValueError):
        classify_and_apply(M, 2, 4, "UDUDUD", "UUDUDD")
    with pytest.raises(ValueError):
        invert(M, 2, 4, "UUDUDD", "UDUDUD")


def test_verify_catalan3_pair():
    rep = verify_injection(catalan_matroid(3), 2, 4)
    assert rep.domain_size == 1 and rep.image_size == 1 and rep.injective
    assert sum(rep.case_counts.values()) == 1
    assert rep.codomain_size == 2


@pytest.mark.parametrize("m", range(2, 8))
def test_reference_agrees_with_compiled_kernel(m):
    for M in all_lattice_path_matroids(m):
        ref = verify_matroid(M)
        fast = verify_matroid_fast(M.lower, M.upper)
        assert ref.injective and fast.ok
        assert (ref.domain_size, ref.image_size, ref.codomain_size) == (fast.domain, fast.image, fast.codomain)
        assert ref.case_counts == fast.cases
        assert ref.case2_below == fast.case2_below


@pytest.mark.parametrize("m", range(2, 8))
def test_domain_and_codomain_sizes_match_counts(m):
    for M in all_lattice_path_matroids(m):
        for e, f in itertools.combinations(range(1, m + 1), 2):
            rep = verify_injection(M, e, f)
            v = minor_pair_counts(M, None, e, f)
            assert rep.domain_size == v.both * v.neither
            assert rep.codomain_size == v.e_only * v.f_only


def test_case2_can_fire_below():
    # Case 2 is sometimes taken while p is below q just before f
    assert injection_sweep(6).case2_below > 0


@pytest.mark.parametrize("m", range(4, 9))
def test_minor_preservation(m):
    rng = random.Random(100 + m)
    matroids = list(all_lattice_path_matroids(m))
    for M in rng.sample(matroids, min(60, len(matroids))):
        minor = random_minor(m, rng)
        rep = verify_matroid(M, minor)
        assert rep.injective, rep.violations[:3]


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 6), st.data())
def test_block_swaps_preserve_endpoints(n, data):
    M = catalan_matroid(n)
    e, f = sorted(data.draw(st.lists(st.integers(2, 2 * n - 1), min_size=2, max_size=2, unique=True)))
    ps = M.paths(MinorSpec({e, f}))
    qs = M.paths(MinorSpec(frozenset(), {e, f}))
    if not ps or not qs:
        return
    p, q = data.draw(st.sampled_from(ps)), data.draw(st.sampled_from(qs))
    case, p2, q2 = classify_and_apply(M, e, f, p, q)
    d = _diff(str(p), str(q))
    if case.tag is Case.CASE2:
        assert d[case.pivot] == d[f - 1] and f <= case.pivot <= 2 * n
    elif case.tag is Case.CASE3:
        assert d[case.pivot] == d[e] and 0 <= case.pivot <= e - 1
    else:
        assert d[case.pivot] == 0 and e <= case.pivot <= f - 1
    assert p2.r == p.r and q2.r == q.r
    assert heights(p2)[-1] == 0 and heights(q2)[-1] == 0


def test_mask_encoding():
    assert path_to_mask("UDDU") == 0b1001


@pytest.mark.parametrize("n", [3, 4, 5])
def test_catalan_matroid_all_pairs(n):
    rep = verify_matroid(catalan_matroid(n))
    assert rep.injective and not rep.violations


def test_lower_bound_nontrivial_matroid():
    M = make_lpm("DUDUUD", "UUDUDD")
    assert verify_matroid(M).injective
