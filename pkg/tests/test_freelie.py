from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradedlie.checks import tensor_span_dims
from gradedlie.freelie import ParentMismatch, build_free_algebra, expand_to_hall, witt_dims

P = 5


def parse_label(s):
    """'[[y,x],y]' -> nested tuples of names."""
    pos = 0

    def walk():
        nonlocal pos
        if s[pos] == "[":
            pos += 1
            left = walk()
            pos += 1  # ','
            right = walk()
            pos += 1  # ']'
            return (left, right)
        start = pos
        while pos < len(s) and (s[pos].isalnum() or s[pos] == "_"):
            pos += 1
        return s[start:pos]

    return walk()


def tensor(tree, p):
    """Image in the free associative algebra: dict word -> coefficient."""
    if isinstance(tree, str):
        return {(tree,): 1}
    u, v = tensor(tree[0], p), tensor(tree[1], p)
    out = {}
    for wu, cu in u.items():
        for wv, cv in v.items():
            out[wu + wv] = (out.get(wu + wv, 0) + cu * cv) % p
            out[wv + wu] = (out.get(wv + wu, 0) - cu * cv) % p
    return {w: c for w, c in out.items() if c}


def tensor_of(f, a, degrees):
    """Tensor image of an element, weighting words by generator degrees."""
    out = {}
    for d in range(1, f.c + 1):
        for k, coef in enumerate(a.part(d)):
            if coef:
                for w, c in tensor(parse_label(f.labels(d)[k]), f.p).items():
                    out[w] = (out.get(w, 0) + int(coef) * c) % f.p
    return {w: c for w, c in out.items() if c}


def tensor_product_commutator(u, v, p, degrees, c):
    out = {}
    for wu, cu in u.items():
        for wv, cv in v.items():
            if sum(degrees[x] for x in wu + wv) > c:
                continue
            out[wu + wv] = (out.get(wu + wv, 0) + cu * cv) % p
            out[wv + wu] = (out.get(wv + wu, 0) - cu * cv) % p
    return {w: x for w, x in out.items() if x}


SIGS = [((1, 1), ()), ((1, 1, 1), ()), ((1, 1), (2,)), ((1,), (2,), (3,)), ((1, 1, 1, 1), ())]


def sig_algebra(sig, p=P, c=3):
    gens = []
    for d, block in enumerate(sig, start=1):
        for _ in block:
            gens.append((f"g{len(gens)}", d))
    return build_free_algebra(p, c, gens)


def test_free_two_generators(free2):
    assert free2.dims == (2, 1, 2)
    x, y = free2.generator("x"), free2.generator("y")
    assert x.bracket(x).is_zero()
    assert (x.bracket(y) + y.bracket(x)).is_zero()
    xy = x.bracket(y)
    assert xy.bracket(xy).is_zero()


def test_hall_coordinate_of_y_twice(free2):
    x, y = free2.generator("x"), free2.generator("y")
    v = y.bracket(y.bracket(x))
    nz = np.flatnonzero(v.part(3))
    assert len(nz) == 1 and int(v.part(3)[nz[0]]) in (1, P - 1)
    assert str(parse_label(free2.labels(3)[nz[0]])).count("y") == 2


def test_single_monomial_is_unit_vector(free2):
    for d in (1, 2, 3):
        for k, lab in enumerate(free2.labels(d)):
            v = free2.evaluate(parse_label(lab))
            assert v.part(d).tolist() == [int(i == k) for i in range(free2.dim(d))]


@pytest.mark.parametrize("n,m", [(n, m) for n in range(5) for m in range(5 - n)])
def test_witt_dims_against_tensor_oracle(n, m):
    gens = [(f"x{k}", 1) for k in range(n)] + [(f"z{k}", 2) for k in range(m)]
    f = build_free_algebra(P, 3, gens)
    assert f.dims == witt_dims(n, m) == tensor_span_dims([1] * n + [2] * m, 3, P)


def test_class_two_truncation():
    f = build_free_algebra(P, 2, [("x", 1), ("y", 1), ("z", 1)])
    assert f.dims == (3, 3)
    with pytest.raises(ValueError):
        build_free_algebra(P, 4, [("x", 1)])
    with pytest.raises(ValueError):
        build_free_algebra(P, 3, [("x", 4)])


def test_parent_mismatch(free2):
    other = build_free_algebra(7, 3, [("x", 1)])
    with pytest.raises(ParentMismatch):
        expand_to_hall((free2.generator("x"), other.generator("x")), free2)


def elements(f):
    return st.lists(st.integers(0, f.p - 1), min_size=f.total_dim, max_size=f.total_dim).map(
        lambda v: f.element(np.array(v, dtype=np.int64)))


def sig_and_triple():
    return st.sampled_from(SIGS).flatmap(
        lambda s: st.tuples(st.just(sig_algebra(s)), *(elements(sig_algebra(s)) for _ in range(3))))


@given(sig_and_triple())
def test_antisymmetry_and_jacobi(data):
    f, x, y, z = data
    assert x.bracket(x).is_zero()
    assert (x.bracket(y) + y.bracket(x)).is_zero()
    assert (x.bracket(y.bracket(z)) + y.bracket(z.bracket(x)) + z.bracket(x.bracket(y))).is_zero()


@given(sig_and_triple())
def test_bracket_matches_free_associative_commutator(data):
    f, x, y, _ = data
    degrees = {g.name: g.degree for g in f.generators}
    lhs = tensor_of(f, x.bracket(y), degrees)
    rhs = tensor_product_commutator(tensor_of(f, x, degrees), tensor_of(f, y, degrees), f.p, degrees, f.c)
    assert lhs == rhs


@given(sig_and_triple())
def test_bilinear(data):
    f, x, y, z = data
    assert (x + y).bracket(z) == x.bracket(z) + y.bracket(z)
    assert (x * 3).bracket(y) == x.bracket(y) * 3
