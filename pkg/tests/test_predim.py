from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradedlie.algebra import GradedSubalgebra, generated_subalgebra, quotient, random_presentation, whole
from gradedlie.amalgam import divisor_extend
from gradedlie.freelie import build_free_algebra
from gradedlie.instances import random_k2_algebra, random_subalgebra
from gradedlie.predim import (
    classify_extension,
    cl_member,
    css,
    delta,
    delta_rel,
    fast_delta,
    geometry_d,
    is_strong,
    is_strong_bruteforce,
    kc_membership,
)

P = 5


def zero_sub(m):
    return GradedSubalgebra(m, [m.zero_space(d) for d in range(1, m.c + 1)])


@pytest.fixture
def heis(free2):
    x, y = free2.generator("x"), free2.generator("y")
    return quotient(free2, [x.bracket(y).bracket(x), x.bracket(y).bracket(y)])


def test_delta_examples(free2, abelian2):
    assert delta(zero_sub(free2)).delta == 0
    assert delta(free2).delta == 2
    assert delta(free2).render() == "o=(2,0,0) ideal=(0,0) d2=2 d3=2"
    assert delta(abelian2).delta == 1
    assert delta(abelian2).ideal_dims == (1, 0)


@pytest.mark.parametrize("sig", [(1, 0, 0), (2, 1, 0), (1, 1, 1), (0, 2, 1), (3, 0, 0)])
def test_delta_of_free_algebra_counts_generators(sig):
    degrees = [d for d, n in enumerate(sig, 1) for _ in range(n)]
    f = build_free_algebra(P, 3, [(f"g{i}", d) for i, d in enumerate(degrees)])
    assert delta(f).delta == sum(sig)
    assert delta(f).delta_2 == sig[0] + sig[1]


def test_delta_rel_examples(free2, abelian2):
    x = free2.generator("x")
    a = generated_subalgebra(free2, [x])
    assert delta_rel(a, whole(free2)) == 0
    assert delta_rel(a, zero_sub(free2)) == 1
    ax = generated_subalgebra(abelian2, [abelian2.generator("x")])
    ay = generated_subalgebra(abelian2, [abelian2.generator("y")])
    assert delta_rel(ax, ay) == 0


def test_strong_examples(free2, heis):
    assert is_strong(whole(free2)).holds
    assert is_strong(zero_sub(free2)).holds
    assert delta(heis).delta == 0
    ax = generated_subalgebra(heis, [heis.generator("x")])
    rep = is_strong(ax)
    assert not rep.holds
    assert rep.witness_delta < rep.base_delta
    assert css(ax) == whole(heis)
    assert css(whole(free2)) == whole(free2)


def test_kc_examples(free2, abelian2, heis):
    assert kc_membership(free2).member
    rep = kc_membership(abelian2)
    assert not rep.member and not rep.condition1
    assert kc_membership(build_free_algebra(P, 3, [])).member
    assert not kc_membership(heis).member


def test_geometry_examples(free2):
    z = zero_sub(free2)
    x, y = free2.generator("x"), free2.generator("y")
    assert geometry_d(z) == 0
    hx = generated_subalgebra(free2, [x])
    assert cl_member(2 * x, hx)
    assert not cl_member(y, hx)
    with pytest.raises(ValueError):
        cl_member(x.bracket(y).bracket(x), hx)


def test_classify_examples(free2, heis):
    x = free2.generator("x")
    hx = generated_subalgebra(free2, [x])
    assert classify_extension(hx, whole(free2)) == "transcendental"
    assert classify_extension(zero_sub(free2), whole(free2)) == "composite"
    assert classify_extension(zero_sub(heis), whole(heis)) == "minimal_prealgebraic"
    fb = build_free_algebra(P, 3, [("b", 1), ("e", 3)])
    ext = divisor_extend(fb, fb.generator("b"), fb.generator("e"))
    d = ext.product
    assert classify_extension(ext.embed_left.image(), whole(d)) == "algebraic"
    with pytest.raises(ValueError):
        classify_extension(whole(free2), hx)


small_sigs = st.sampled_from([(2, 0, 0), (1, 1, 0), (2, 1, 0), (1, 0, 1), (0, 2, 1), (0, 1, 2)])


def small_algebra(sig, r2, r3, seed):
    rng = np.random.default_rng(seed)
    return random_presentation(rng, P, 3, sig, {2: r2, 3: r3}), rng


@given(small_sigs, st.integers(0, 1), st.integers(0, 2), st.integers(0, 10**6))
def test_strong_matches_bruteforce(sig, r2, r3, seed):
    m, rng = small_algebra(sig, r2, r3, seed)
    a = random_subalgebra(m, rng)
    for level in (2, 3):
        assert is_strong(a, level=level).holds == is_strong_bruteforce(a, level=level)


@given(small_sigs, st.integers(0, 1), st.integers(0, 2), st.integers(0, 10**6))
def test_css_is_a_closure(sig, r2, r3, seed):
    m, rng = small_algebra(sig, r2, r3, seed)
    a = random_subalgebra(m, rng)
    c = css(a)
    assert c.contains(a)
    assert is_strong(c).holds
    assert css(c) == c
    assert fast_delta(c)[1] <= fast_delta(a)[1]


@given(st.integers(0, 10**6))
def test_submodularity_delta2(seed):
    rng = np.random.default_rng(seed)
    m = random_k2_algebra(rng, max_total=7)
    a, c = random_subalgebra(m, rng), random_subalgebra(m, rng)
    lhs = delta(a.join(c)).delta_2 + delta(a & c).delta_2
    assert lhs <= delta(a).delta_2 + delta(c).delta_2


@given(small_sigs, st.integers(0, 1), st.integers(0, 2), st.integers(0, 10**6))
def test_kc_routes_agree_without_zero_divisors(sig, r2, r3, seed):
    m, _ = small_algebra(sig, r2, r3, seed)
    rep = kc_membership(m, method="both")
    if rep.condition1:
        assert rep.numeric == rep.definitional


@given(small_sigs, st.integers(0, 1), st.integers(0, 2), st.integers(0, 10**6))
def test_adding_a_point_raises_d_by_at_most_one(sig, r2, r3, seed):
    m, rng = small_algebra(sig, r2, r3, seed)
    if not kc_membership(m).member:
        return
    h = random_subalgebra(m, rng).low_part()
    x = generated_subalgebra(m, [m.homogeneous(1, rng.integers(0, P, size=m.dim(1)))])
    assert geometry_d(h.join(x)) <= geometry_d(h) + 1
