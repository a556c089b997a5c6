from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradedlie.algebra import GradedHom, generated_subalgebra, quotient, random_presentation, whole
from gradedlie.amalgam import (
    NotADivisorProblem,
    amalgam_dims_formula,
    decompose_amalgam_claim,
    divisor_extend,
    divisor_extend_via_amalgam,
    extend_pair,
    free_adjoin_point,
    free_amalgam,
    functor_F,
    gamma,
    is_free_join,
    strong_amalgam,
    zero_algebra,
)
from gradedlie.freelie import build_free_algebra
from gradedlie.instances import random_k3_algebra, unsolved_problems
from gradedlie.predim import delta, is_strong, kc_membership, zero_divisor_scan
from oracles import naive_ideal_dims

P = 5


def free(*gens, c=3):
    return build_free_algebra(P, c, list(gens))


def over_zero(a, c):
    z = zero_algebra(P, a.c)
    return GradedHom(z, a, {}), GradedHom(z, c, {})


def test_adjoin_point_examples():
    res = free_adjoin_point(zero_algebra(P, 3), 1)
    assert res.product.dims == (1, 0, 0) and delta(res.product).delta == 1
    res = free_adjoin_point(free(("y", 1)), 1)
    assert res.product.dims == (2, 1, 2)
    res = free_adjoin_point(free(("y", 1)), 3)
    assert res.product.dims == (1, 0, 1)
    assert res.solution.degree == 3


def test_divisor_extend_examples():
    fb = free(("b", 1), ("e", 3))
    b, e = fb.generator("b"), fb.generator("e")
    res = divisor_extend(fb, b, e)
    d, x = res.product, res.solution
    assert x.degree == 2
    assert d.bracket(res.embed_left.apply(b), x) == res.embed_left.apply(e)
    assert delta(d).delta == delta(fb).delta
    assert divisor_extend_via_amalgam(fb, b, e).product.dims == d.dims
    with pytest.raises(NotADivisorProblem):
        divisor_extend(d, res.embed_left.apply(b), res.embed_left.apply(e))
    with pytest.raises(NotADivisorProblem):
        divisor_extend(fb, b + e, e)


def test_free_amalgam_examples():
    fx, fy = free(("x", 1)), free(("y", 1))
    res = free_amalgam(fx, fy, *over_zero(fx, fy))
    assert res.product.dims == (2, 1, 2)
    f2 = free(("x", 1), ("y", 1))
    res = free_amalgam(f2, fx, GradedHom(fx, f2, {"x": f2.generator("x")}), GradedHom.identity(fx))
    assert res.product.dims == f2.dims
    cx, cy = free(("x", 1), c=2), free(("y", 1), c=2)
    res = free_amalgam(cx, cy, *over_zero(cx, cy))
    assert res.product.dims == (2, 1)
    x, y = res.embed_left.apply(cx.generator("x")), res.embed_right.apply(cy.generator("y"))
    assert not res.product.bracket(x, y).is_zero()


def test_strong_amalgam_absorbs_shared_problem():
    fb = free(("b", 1), ("e", 3))
    ext = divisor_extend(fb, fb.generator("b"), fb.generator("e"))
    a = ext.product
    res = strong_amalgam(a, a, ext.embed_left, ext.embed_left)
    assert len(res.absorbed) == 1
    assert delta(res.product).delta == delta(a).delta
    assert res.product.dims == a.dims


def test_strong_amalgam_without_conflicts_is_free():
    f2 = free(("x", 1), ("y", 1))
    fz = free(("z", 2))
    ba, bc = over_zero(f2, fz)
    s = strong_amalgam(f2, fz, ba, bc)
    f = free_amalgam(fz, f2, bc, ba)
    assert not s.absorbed
    assert s.product.dims == f.product.dims == amalgam_dims_formula((0, 0, 0), f2.dims, fz.dims)
    fx = free(("x", 1))
    inc = GradedHom(fx, f2, {"x": f2.generator("x")})
    assert strong_amalgam(f2, fx, inc, GradedHom.identity(fx)).product.dims == f2.dims


def test_functor_examples():
    f2 = free(("x", 1), ("y", 1), c=2)
    assert functor_F(f2).dims == (2, 1, 2)
    assert functor_F(free(("x", 1), c=2)).dims == (1, 0, 0)
    f4 = free(("x", 1), ("y", 1), ("z", 1), ("w", 1), c=2)
    g = {n: f4.generator(n) for n in "xyzw"}
    rel = g["x"].bracket(g["y"]) - g["z"].bracket(g["w"])
    a_star = quotient(f4, [rel])
    assert kc_membership(a_star).member
    f3 = free(("x", 1), ("y", 1), ("z", 1), ("w", 1))
    h = {n: f3.generator(n) for n in "xyzw"}
    rel3 = h["x"].bracket(h["y"]) - h["z"].bracket(h["w"])
    want = tuple(a - b for a, b in zip(f3.dims, naive_ideal_dims(f3, [rel3])))
    assert functor_F(a_star).dims == want


def test_gamma_examples():
    f2 = free(("x", 1), ("y", 1), c=2)
    _, kd = gamma(GradedHom.identity(f2))
    assert kd == (0, 0, 0)
    fx = free(("x", 1), c=2)
    _, kd = gamma(GradedHom(fx, f2, {"x": f2.generator("x")}))
    assert kd == (0, 0, 0)


def test_decompose_claim_examples(free2):
    x, y = free2.generator("x"), free2.generator("y")
    ax, ay = generated_subalgebra(free2, [x]), generated_subalgebra(free2, [y])
    assert decompose_amalgam_claim(ax, ay) == (True, True)
    assert decompose_amalgam_claim(ax, ax) == (True, True)
    m = quotient(free2, [x.bracket(y).bracket(x)])
    bx, by = generated_subalgebra(m, [m.generator("x")]), generated_subalgebra(m, [m.generator("y")])
    assert decompose_amalgam_claim(bx, by) == (False, False)
    assert is_free_join(ax, ay) and not is_free_join(bx, by)


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_basis_count_over_zero(a1, a2, c1, c2):
    ga = [(f"a{k}", 1) for k in range(a1)] + [(f"u{k}", 2) for k in range(a2)]
    gc = [(f"c{k}", 1) for k in range(c1)] + [(f"v{k}", 2) for k in range(c2)]
    a, c = free(*ga), free(*gc)
    d = free_amalgam(a, c, *over_zero(a, c)).product
    assert d.dims == amalgam_dims_formula((0, 0, 0), a.dims, c.dims)
    assert d.dims == free(*(ga + gc)).dims


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_point_adjunction_adds_one(seed, degree):
    b = random_k3_algebra(np.random.default_rng(seed), steps=2, max_dims=(2, 3, 5))
    res = free_adjoin_point(b, degree)
    assert delta(res.product).delta == delta(b).delta + 1
    assert is_strong(res.embed_left.image()).holds
    assert not zero_divisor_scan(res.product, limit=1)


@given(st.integers(0, 10**6))
def test_divisor_extension_keeps_delta(seed):
    rng = np.random.default_rng(seed)
    b = random_k3_algebra(rng, steps=2, max_dims=(2, 3, 5))
    probs = unsolved_problems(b, limit=20)
    if not probs:
        return
    bb, e = probs[int(rng.integers(0, len(probs)))]
    res = divisor_extend(b, bb, e)
    assert delta(res.product).delta == delta(b).delta
    assert is_strong(res.embed_left.image()).holds


@given(st.integers(0, 10**6))
def test_universal_property_over_zero(seed):
    rng = np.random.default_rng(seed)
    a, c = free(("x", 1)), free(("y", 1), ("u", 2))
    res = free_amalgam(a, c, *over_zero(a, c))
    e = random_presentation(rng, P, 3, (2, 1, 0), {2: int(rng.integers(0, 2)), 3: 1})
    f = GradedHom(a, e, {"x": e.homogeneous(1, rng.integers(0, P, size=2))})
    g = GradedHom(c, e, {"y": e.homogeneous(1, rng.integers(0, P, size=2)),
                         "u": e.homogeneous(2, rng.integers(0, P, size=e.dim(2)))})
    h = extend_pair(res, f, g)
    assert h.respects_brackets()
    assert h.compose(res.embed_left).agrees_with(f)
    assert h.compose(res.embed_right).agrees_with(g)


def test_free_join_of_whole_with_itself(free2):
    assert is_free_join(whole(free2), whole(free2))
