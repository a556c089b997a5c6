"""Seeded random instances for property checks: class members, subalgebras, strong extensions."""
from __future__ import annotations

import numpy as np

from .algebra import (
    GradedHom,
    as_presented,
    generated_subalgebra,
    random_presentation,
    star,
    whole,
)
from .amalgam import divisor_extend, free_adjoin_point, zero_algebra
from .fplinalg import Subspace
from .predim import css, kc_membership


class NoInstance(RuntimeError):
    pass


def random_homogeneous(m, rng, degrees=(1, 2)):
    """A nonzero homogeneous element in one of the given degrees, or None."""
    ds = [d for d in degrees if d <= m.c and m.dim(d)]
    if not ds:
        return None
    for _ in range(20):
        d = int(rng.choice(ds))
        v = rng.integers(0, m.p, size=m.dim(d))
        if v.any():
            return m.homogeneous(d, v)
    return None


def random_subalgebra(m, rng, max_gens=2, degrees=(1, 2)):
    gens = []
    for _ in range(int(rng.integers(1, max_gens + 1))):
        g = random_homogeneous(m, rng, degrees)
        if g is not None:
            gens.append(g)
    return generated_subalgebra(m, gens)


def random_k2_algebra(rng, p=5, max_total=8, tries=400, min_n1=1):
    """A class-2 member of the amalgamation class with total dimension <= max_total."""
    for _ in range(tries):
        n1 = int(rng.integers(min_n1, 5))
        n2 = int(rng.integers(0, 3))
        rels = int(rng.integers(0, 3)) if n1 >= 2 else 0
        m = random_presentation(rng, p, 2, (n1, n2), {2: rels})
        if m.total_dim > max_total or m.total_dim == 0:
            continue
        if kc_membership(m).member:
            return m
    raise NoInstance("no class-2 member found")


def random_star_k2(rng, p=5, max_total=9, tries=400):
    """A class-3 algebra whose degree <= 2 truncation is a class-2 member."""
    for _ in range(tries):
        n1 = int(rng.integers(1, 4))
        n2 = int(rng.integers(0, 2))
        n3 = int(rng.integers(0, 2))
        rels = {2: int(rng.integers(0, 2)) if n1 >= 2 else 0, 3: int(rng.integers(0, 3))}
        m = random_presentation(rng, p, 3, (n1, n2, n3), rels)
        if m.total_dim > max_total or m.total_dim == 0:
            continue
        ms, _ = star(m)
        if kc_membership(ms).member:
            return m
    raise NoInstance("no class-3 algebra with a member truncation found")


def random_star_k2_wide(rng, p=5, top_relations=2):
    """F(A*) for a class-2 member A* with four degree-1 generators, cut down in degree 3."""
    from .amalgam import functor_F, quotient_by

    a_star = random_k2_algebra(rng, p, max_total=8, min_n1=4)
    f = functor_F(a_star)
    extra = [random_homogeneous(f, rng, (3,)) for _ in range(int(rng.integers(0, top_relations + 1)))]
    q, _ = quotient_by(f, [x for x in extra if x is not None])
    return q


def unsolved_problems(m, limit=None):
    """Divisor problems (b, e) with b a projective point and e a complement vector."""
    from .fplinalg import projective_point_array

    out = []
    for i in range(1, m.c):
        for j in range(i + 1, m.c + 1):
            k = j - i
            if m.dim(i) == 0 or m.dim(j) == 0:
                continue
            for bv in projective_point_array(m.dim(i), m.p):
                if m.dim(k):
                    span = Subspace(m.dim(j), m.bracket_rows(i, bv, k, np.eye(m.dim(k), dtype=np.int64)), m.p)
                else:
                    span = Subspace.zero(m.dim(j), m.p)
                if span.dim < m.dim(j):
                    for ev in Subspace.full(m.dim(j), m.p).quotient_complement(span):
                        out.append((m.homogeneous(i, bv), m.homogeneous(j, ev)))
                        if limit is not None and len(out) >= limit:
                            return out
    return out


def random_problem(m, rng):
    """A random divisor problem: random b, random e outside [b, M]."""
    for _ in range(30):
        b = random_homogeneous(m, rng, (1, 2))
        if b is None:
            return None
        i = b.degree
        js = [j for j in range(i + 1, m.c + 1) if m.dim(j)]
        if not js:
            continue
        j = int(rng.choice(js))
        k = j - i
        if m.dim(k):
            span = Subspace(m.dim(j), m.bracket_rows(i, b.part(i), k, np.eye(m.dim(k), dtype=np.int64)), m.p)
        else:
            span = Subspace.zero(m.dim(j), m.p)
        if span.dim == m.dim(j):
            continue
        for _ in range(20):
            ev = rng.integers(0, m.p, size=m.dim(j))
            if not span.contains(ev):
                return b, m.homogeneous(j, ev)
    return None


def random_strong_step(m, rng, max_dims=(3, 4, 8), kinds=("point", "divisor")):
    """One strong extension of m (a free point or a divisor extension) within max_dims.

    Returns (new algebra, embedding, description) or None.
    """
    m = as_presented(m)
    for _ in range(10):
        kind = str(rng.choice(list(kinds)))
        if kind == "point":
            d = int(rng.choice([1, 2, 3], p=[0.45, 0.35, 0.2]))
            res = free_adjoin_point(m, d)
            desc = f"point{d}"
        else:
            prob = random_problem(m, rng)
            if prob is None:
                continue
            res = divisor_extend(m, *prob)
            desc = f"divisor{prob[0].degree}{prob[1].degree}"
        new = res.product
        if all(new.dim(d) <= max_dims[d - 1] for d in range(1, m.c + 1)):
            return new, res.embed_left, desc
    return None


def random_k3_algebra(rng, p=5, steps=3, max_dims=(3, 4, 8)):
    """A class-3 member built from the zero algebra by random strong steps."""
    m = zero_algebra(p, 3)
    for _ in range(steps):
        out = random_strong_step(m, rng, max_dims)
        if out is None:
            break
        m = out[0]
    return m


def random_strong_extension(b, rng, steps=2, max_dims=(3, 4, 8)):
    """(A, B -> A) with B strong in A, by composing random strong steps."""
    b = as_presented(b)
    h = GradedHom.identity(b)
    a = b
    for _ in range(steps):
        out = random_strong_step(a, rng, max_dims)
        if out is None:
            break
        a, e, _ = out
        h = e.compose(h)
    return a, h


def css2_of_random(m, rng, cap=10**6):
    """A 2-strong subalgebra: the 2-closure of a random subalgebra."""
    return css(random_subalgebra(m, rng), level=2, cap=cap)


def whole_sub(m):
    return whole(m)
