from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gradedlie.fplinalg import (
    EnumerationTooLarge,
    PrimeField,
    Subspace,
    enumerate_subspaces,
    gaussian_binomial,
    kernel_basis,
    projective_points,
    rank,
    rref,
    solve,
)

P = 5


def matrices(max_rows=4, max_cols=5, p=P):
    shape = st.tuples(st.integers(1, max_rows), st.integers(1, max_cols))
    return shape.flatmap(lambda s: arrays(np.int64, s, elements=st.integers(0, p - 1)))


def span_set(rows, p, n):
    """All vectors in the span, by enumerating coefficient tuples."""
    rows = [np.asarray(r) for r in rows]
    out = set()
    for coefs in itertools.product(range(p), repeat=len(rows)):
        v = np.zeros(n, dtype=np.int64)
        for k, r in zip(coefs, rows):
            v = (v + k * r) % p
        out.add(tuple(int(x) for x in v))
    return frozenset(out)


def test_rref_examples():
    r, k = rref(np.zeros((2, 2), dtype=np.int64), P)
    assert k == 0 and r.shape[0] == 0
    r, k = rref(np.eye(3, dtype=np.int64), P)
    assert k == 3 and (r == np.eye(3)).all()
    r, k = rref(np.array([[1, 2], [2, 4]]), P)
    assert k == 1 and r.tolist() == [[1, 2]]


def test_kernel_examples():
    assert kernel_basis(np.eye(2, dtype=np.int64), P).dim == 0
    assert kernel_basis(np.zeros((1, 3), dtype=np.int64), P).dim == 3
    k = kernel_basis(np.array([[1, 2]]), P)
    assert k == Subspace(2, [[3, 1]], P)


def test_subspace_examples():
    a = Subspace(2, [[1, 0]], P)
    b = Subspace(2, [[0, 1]], P)
    z = Subspace.zero(2, P)
    assert a.sum(z) == a
    assert a.intersection(a) == a
    assert a.sum(b) == Subspace.full(2, P)
    with pytest.raises(ValueError):
        a.sum(Subspace.zero(3, P))


def test_enumeration_counts():
    assert len(list(enumerate_subspaces(Subspace.full(2, P), 1))) == 6
    assert len(list(enumerate_subspaces(Subspace.full(3, P), 2))) == 31
    assert len(list(enumerate_subspaces(Subspace.full(3, P), 0))) == 1


@pytest.mark.parametrize("n,p", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (3, 3), (1, 5), (2, 5)])
def test_enumeration_against_brute_force(n, p):
    vectors = [np.array(v) for v in itertools.product(range(p), repeat=n)]
    for k in range(n + 1):
        spans = (span_set(rows, p, n) for rows in itertools.combinations(vectors, k))
        brute = {s for s in spans if len(s) == p**k}
        got = [span_set(s.basis, p, n) for s in enumerate_subspaces(Subspace.full(n, p), k)]
        assert len(got) == len(set(got)) == gaussian_binomial(n, k, p)
        assert set(got) == brute


def test_enumeration_cap():
    with pytest.raises(EnumerationTooLarge):
        list(enumerate_subspaces(Subspace.full(6, P), 3, cap=100))


def test_field():
    f = PrimeField(7)
    assert all(f.reduce(a * f.inv(a)) == 1 for a in range(1, 7))
    with pytest.raises(ValueError):
        PrimeField(6)


def test_projective_points_cover_lines():
    pts = list(projective_points(3, 3))
    assert len(pts) == (3**3 - 1) // 2
    lines = {span_set([v], 3, 3) for v in pts}
    assert len(lines) == len(pts)


@given(matrices())
def test_rref_idempotent(m):
    r, k = rref(m, P)
    r2, k2 = rref(r, P)
    assert k == k2 and (r == r2).all()


@given(matrices())
def test_rank_nullity(m):
    assert rank(m, P) + kernel_basis(m, P).dim == m.shape[1]
    ker = kernel_basis(m, P)
    if ker.dim:
        assert not ((m @ ker.basis.T) % P).any()


@given(matrices(3, 3), matrices(3, 3))
def test_modular_law(x, y):
    n = min(x.shape[1], y.shape[1])
    a = Subspace(n, x[:, :n], P)
    b = Subspace(n, y[:, :n], P)
    assert a.dim + b.dim == a.sum(b).dim + a.intersection(b).dim
    inter = span_set(a.basis, P, n) & span_set(b.basis, P, n)
    assert inter == span_set(a.intersection(b).basis, P, n)


@given(matrices(3, 4))
def test_solve(m):
    rng = np.random.default_rng(int(m.sum()))
    x = rng.integers(0, P, size=m.shape[0])
    b = (x @ m) % P
    sol = solve(m, b, P)
    assert sol is not None and ((sol @ m - b) % P == 0).all()
