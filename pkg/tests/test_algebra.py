from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradedlie.algebra import (
    GradedHom,
    NotAHomomorphism,
    canonical_pair,
    extract_o_system,
    generated_subalgebra,
    isomorphism_search,
    materialize,
    o_dims,
    quotient,
    random_presentation,
    rebase,
    relations_of,
    star,
    whole,
)
from gradedlie.freelie import build_free_algebra
from oracles import naive_ideal_dims

P = 5


def test_quotient_examples(free2):
    x, y = free2.generator("x"), free2.generator("y")
    assert quotient(free2, [x.bracket(y)]).dims == (2, 0, 0)
    assert quotient(free2, []).dims == free2.dims
    fxu = build_free_algebra(P, 3, [("x", 1), ("u", 2)])
    assert quotient(fxu, [fxu.generator("x").bracket(fxu.generator("u"))]).dims == (1, 1, 0)


def test_relations_vanish_in_quotient(abelian2):
    for r in relations_of(abelian2):
        assert abelian2.from_free(r).is_zero()


def test_generated_subalgebra_examples(free2):
    x, y = free2.generator("x"), free2.generator("y")
    assert generated_subalgebra(free2, []).dims == (0, 0, 0)
    assert generated_subalgebra(free2, [x]).dims == (1, 0, 0)
    assert generated_subalgebra(free2, [x + y]).dims == (1, 0, 0)
    assert generated_subalgebra(free2, [x, y]).dims == (2, 1, 2)


def test_o_system_examples(free2):
    assert o_dims(free2) == (2, 0, 0)
    assert len(extract_o_system(free2)) == 2
    fu = build_free_algebra(P, 3, [("u", 2)])
    assert o_dims(fu) == (0, 1, 0)
    fxyu = build_free_algebra(P, 3, [("x", 1), ("u", 2)])
    assert o_dims(fxyu) == (1, 1, 0)


def test_canonical_pair_examples(free2):
    x, y = free2.generator("x"), free2.generator("y")
    assert canonical_pair(free2).ideal_dims == (0, 0)
    assert canonical_pair(quotient(free2, [x.bracket(y)])).ideal_dims == (1, 0)
    assert canonical_pair(quotient(free2, [x.bracket(y).bracket(x)])).ideal_dims == (0, 1)


def test_star_examples(free2):
    ms, tau = star(free2)
    assert ms.dims == (2, 1)
    assert tau.kernel_dims() == (0, 0, 2)
    x, y = free2.generator("x"), free2.generator("y")
    heis = quotient(free2, [x.bracket(y).bracket(x), x.bracket(y).bracket(y)])
    assert star(heis)[0].dims == (2, 1)
    zero = build_free_algebra(P, 3, [])
    assert star(zero)[0].dims == (0, 0)


def test_hom_examples(free2):
    assert GradedHom.identity(free2).is_embedding()
    fx = build_free_algebra(P, 3, [("x", 1)])
    h = GradedHom(free2, fx, {"x": fx.generator("x"), "y": fx.zero()})
    assert h.kernel_dims() == (1, 1, 2)
    x, y = free2.generator("x"), free2.generator("y")
    g = GradedHom(free2, free2, {"x": x, "y": x})
    assert g.apply(x - y).is_zero()


def test_hom_must_respect_relations(free2, abelian2):
    with pytest.raises(NotAHomomorphism):
        GradedHom(abelian2, free2, {"x": free2.generator("x"), "y": free2.generator("y")})


def test_materialize_and_isomorphism(free2):
    x, y = free2.generator("x"), free2.generator("y")
    sub = generated_subalgebra(free2, [x.bracket(y), x])
    mat = materialize(sub)
    assert mat.algebra.dims == sub.dims == (1, 1, 1)
    assert mat.embedding.is_embedding()
    assert mat.embedding.image() == sub
    fxu = build_free_algebra(P, 3, [("x", 1), ("u", 2)])
    assert isomorphism_search(mat.algebra, fxu) is not None
    assert isomorphism_search(free2, quotient(free2, [x.bracket(y)])) is None


signatures = st.sampled_from([(2, 0, 0), (1, 1, 0), (2, 1, 0), (3, 0, 0), (1, 1, 1)])


@given(signatures, st.integers(0, 2), st.integers(0, 2), st.integers(0, 10**6))
def test_quotient_dims_match_naive_closure(sig, r2, r3, seed):
    rng = np.random.default_rng(seed)
    m = random_presentation(rng, P, 3, sig, {2: r2, 3: r3})
    ideal = naive_ideal_dims(m.free, relations_of(m))
    assert m.dims == tuple(f - i for f, i in zip(m.free.dims, ideal))
    for r in relations_of(m):
        assert m.from_free(r).is_zero()


@given(signatures, st.integers(0, 2), st.integers(0, 10**6))
def test_canonical_pair_presents_the_algebra(sig, r2, seed):
    rng = np.random.default_rng(seed)
    m = random_presentation(rng, P, 3, sig, {2: r2, 3: 1})
    mat = materialize(whole(m))
    assert mat.algebra.dims == m.dims
    assert mat.embedding.is_embedding()
    assert sum(canonical_pair(m).o_dims) <= sum(sig)


@given(st.integers(0, 10**6))
def test_rebase_is_isomorphic(seed):
    rng = np.random.default_rng(seed)
    m = random_presentation(rng, P, 3, (2, 0, 0), {2: 0, 3: 1})
    r = rebase(m, rng)
    assert r.dims == m.dims
    assert isomorphism_search(r, m) is not None
