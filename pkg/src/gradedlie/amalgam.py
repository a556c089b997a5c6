"""Free products with a point, divisor extensions, free and strong amalgams, and the functor F."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    GradedHom,
    Presentation,
    PresentedAlgebra,
    as_presented,
    canonical_pair,
    extract_o_system,
    generated_subalgebra,
    materialize,
    relations_of,
    star,
)
from .fplinalg import DEFAULT_CAP, Subspace, projective_point_array, solve
from .freelie import Generator, build_free_algebra
from .predim import is_strong, kc_membership


class NotADivisorProblem(ValueError):
    pass


class NotAnEmbedding(ValueError):
    pass


class PreconditionFailed(ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass
class AmalgamResult:
    product: PresentedAlgebra
    embed_left: GradedHom
    embed_right: GradedHom | None
    over: object
    absorbed: list = field(default_factory=list)
    solution: object = None
    sources: dict = field(default_factory=dict)


def zero_algebra(p, c):
    return build_free_algebra(p, c, [])


def fresh_names(taken, count, prefix):
    taken = set(taken)
    out = []
    k = 1
    while len(out) < count:
        name = f"{prefix}{k}"
        if name not in taken:
            out.append(name)
            taken.add(name)
        k += 1
    return out


def _embed_free(src_free, dst_free):
    """The inclusion of a free algebra into one with more generators."""
    return GradedHom(src_free, dst_free, {n: dst_free.generator(n) for n in src_free.names}, check=False)


def _preimage_in_free(cp, d, vec):
    """Coordinates in cp.free (degree d) of some element mapping to vec."""
    x = solve(cp.matrices[d], vec, cp.free.p)
    if x is None:
        raise ValueError("vector is not in the image of the canonical pair")
    return x


def _require_embedding(h, what):
    if not h.is_embedding():
        raise NotAnEmbedding(f"{what} is not an embedding (kernel dims {h.kernel_dims()})")


def free_amalgam(a, c, b_in_a, b_in_c, prefix="y"):
    """A (x)_B C, presented as F(X_A, Y)/<<I_A, sigma(K_C)>>.

    Y is an o-system of C over the image of B; K_C is an ideal basis of the
    kernel of F(X_B, Y) -> C where X_B is an o-system of the image of B; sigma
    sends X_B to lifts of the matching elements of A.
    """
    a, c = as_presented(a), as_presented(c)
    _require_embedding(b_in_a, "B -> A")
    _require_embedding(b_in_c, "B -> C")
    bsrc = b_in_a.source
    if b_in_c.source is not bsrc:
        raise ValueError("the two embeddings must share their source")
    p, cl = a.p, a.c
    b_img_c = b_in_c.image()
    ys = extract_o_system(c, b_img_c)
    cp = canonical_pair(c, b_img_c)
    # cp.free generators: g1..gN in degree order, those in cp.over_names come from xb
    new_names = fresh_names(a.names, len(ys), prefix)
    gens = list(a.generators)
    rename = {}
    sources = {n: ("left", a.generator(n)) for n in a.names}
    k = 0
    for g in cp.free.generators:
        if g.name not in cp.over_names:
            rename[g.name] = new_names[k]
            sources[new_names[k]] = ("right", c.homogeneous(g.degree, cp.images[g.name]))
            gens.append(Generator(new_names[k], g.degree))
            k += 1
    fd = build_free_algebra(p, cl, gens)
    inc_a = _embed_free(a.free, fd)
    sigma_images = {}
    for g in cp.free.generators:
        if g.name in cp.over_names:
            vec_c = cp.images[g.name]
            beta = b_in_c.preimage_element(c.homogeneous(g.degree, vec_c))
            a_elem = b_in_a.apply(beta)
            sigma_images[g.name] = inc_a.apply(a.lift(a_elem))
        else:
            sigma_images[g.name] = fd.generator(rename[g.name])
    sigma = GradedHom(cp.free, fd, sigma_images, check=False)
    rels = [inc_a.apply(r) for r in relations_of(a)]
    rels += [sigma.apply(r) for r in cp.relations]
    d = PresentedAlgebra(Presentation(fd, rels))
    left = GradedHom(a, d, {n: d.generator(n) for n in a.names})
    right_images = {}
    for g in c.generators:
        vec = c.generator(g.name).part(g.degree)
        x = _preimage_in_free(cp, g.degree, vec)
        right_images[g.name] = d.from_free(sigma.apply(cp.free.homogeneous(g.degree, x)))
    right = GradedHom(c, d, right_images)
    _require_embedding(left, "A -> D")
    _require_embedding(right, "C -> D")
    over = left.image(b_in_a.image())
    return AmalgamResult(d, left, right, over, sources=sources)


def extend_pair(res, f, g):
    """The map h: D -> E with h o left = f and h o right = g, built from generator images.

    Raises NotAHomomorphism when the generator images do not respect the
    relations of D, and ValueError when the composites disagree with f or g.
    """
    if f.target is not g.target:
        raise ValueError("f and g need a common target")
    maps = {"left": f, "right": g}
    images = {n: maps[side].apply(x) for n, (side, x) in res.sources.items()}
    h = GradedHom(res.product, f.target, images)
    if not (h.compose(res.embed_left).agrees_with(f) and h.compose(res.embed_right).agrees_with(g)):
        raise ValueError("h does not extend both maps")
    return h


def free_adjoin_point(b, degree, name="x"):
    """B (x) <x> for a fresh generator x of the given degree."""
    b = as_presented(b)
    z = zero_algebra(b.p, b.c)
    pt = build_free_algebra(b.p, b.c, [(name, degree)])
    res = free_amalgam(b, pt, GradedHom(z, b, {}), GradedHom(z, pt, {}), prefix=name)
    res.solution = res.embed_right.apply(pt.generator(name))
    return res


def solvable(m, b, e):
    """Some x with [b, x] = e in m, or None."""
    i, j = b.degree, e.degree
    k = j - i
    if k < 1 or m.dim(k) == 0:
        return None
    ad = m.bracket_rows(i, b.part(i), k, np.eye(m.dim(k), dtype=np.int64)).reshape(m.dim(k), m.dim(j))
    x = solve(ad, e.part(j), m.p)
    if x is None:
        return None
    return m.homogeneous(k, x)


def check_divisor_problem(m, b, e):
    if b.is_zero() or e.is_zero() or b.degree is None or e.degree is None:
        raise NotADivisorProblem("b and e must be nonzero and homogeneous")
    if not b.degree < e.degree <= m.c:
        raise NotADivisorProblem("need deg b < deg e <= c")
    if solvable(m, b, e) is not None:
        raise NotADivisorProblem("[b, x] = e already has a solution")


def divisor_extend(b_alg, b, e, name="x"):
    """B(e:b): adjoin x of degree deg e - deg b freely, subject to [b, x] = e."""
    m = as_presented(b_alg)
    check_divisor_problem(m, b, e)
    k = e.degree - b.degree
    new = fresh_names(m.names, 1, name)[0]
    fd = build_free_algebra(m.p, m.c, list(m.generators) + [Generator(new, k)])
    inc = _embed_free(m.free, fd)
    x = fd.generator(new)
    rel = inc.apply(m.lift(b)).bracket(x) - inc.apply(m.lift(e))
    rels = [inc.apply(r) for r in relations_of(m)] + [rel]
    d = PresentedAlgebra(Presentation(fd, rels))
    left = GradedHom(m, d, {n: d.generator(n) for n in m.names})
    _require_embedding(left, "B -> B(e:b)")
    return AmalgamResult(d, left, None, left.image(), solution=d.generator(new))


def divisor_extend_via_amalgam(b_alg, b, e):
    """The same extension built as B (x)_<b,e> <b, e, x> (an independent route)."""
    m = as_presented(b_alg)
    check_divisor_problem(m, b, e)
    i, j = b.degree, e.degree
    sub = generated_subalgebra(m, [b, e])
    mat = materialize(sub)
    small = build_free_algebra(m.p, m.c, [("b", i), ("x", j - i)])
    bb = small.generator("b")
    ee = bb.bracket(small.generator("x"))
    into_small = {}
    for g in mat.algebra.generators:
        img = mat.embedding.apply(mat.algebra.generator(g.name))
        # express img through b and e inside the subalgebra
        if np.array_equal(img.coords, b.coords):
            into_small[g.name] = bb
        elif np.array_equal(img.coords, e.coords):
            into_small[g.name] = ee
        else:
            coef = _coefficients(img, [b, e], m)
            into_small[g.name] = coef[0] * bb + coef[1] * ee
    h_small = GradedHom(mat.algebra, small, into_small)
    return free_amalgam(m, small, mat.embedding, h_small, prefix="x")


def _coefficients(v, basis, m):
    rows = np.array([w.coords for w in basis], dtype=np.int64)
    x = solve(rows, v.coords, m.p)
    if x is None:
        raise ValueError("not in span")
    return [int(t) for t in x]


def _pullback(h, d, space):
    """Coordinates in the source of h of target vectors lying in the image (degree d)."""
    rows = []
    for v in space.basis:
        x = solve(h.matrices[d], v, h.source.p)
        rows.append(x)
    return Subspace(h.source.dim(d), rows, h.source.p)


def shared_divisor_problems(b_alg, b_in_a, b_in_c, first_only=False):
    """Divisor problems of B solved both in A and in C, in canonical order.

    Each entry is (b, e): b runs over projective points of B_1 and B_2, e over a
    canonical complement of [b, B] inside [b, A] and [b, C] (pulled back to B).
    """
    m = as_presented(b_alg)
    out = []
    for i in range(1, m.c):
        if m.dim(i) == 0:
            continue
        for bv in projective_point_array(m.dim(i), m.p):
            b = m.homogeneous(i, bv)
            for j in range(i + 1, m.c + 1):
                k = j - i
                sb = Subspace(m.dim(j), m.bracket_rows(i, bv, k, np.eye(m.dim(k), dtype=np.int64)), m.p)
                spaces = []
                for h in (b_in_a, b_in_c):
                    t = h.target
                    ba = h.apply(b)
                    br = Subspace(t.dim(j), t.bracket_rows(i, ba.part(i), k, np.eye(t.dim(k), dtype=np.int64)), t.p)
                    inside = br & h.image_space(j)
                    spaces.append(_pullback(h, j, inside))
                both = spaces[0] & spaces[1]
                if both.dim > sb.dim:
                    for ev in both.quotient_complement(sb):
                        out.append((b, m.homogeneous(j, ev)))
                        if first_only:
                            return out
    return out


def _solution_in(h, b, e):
    t = h.target
    return solvable(t, h.apply(b), h.apply(e))


def strong_amalgam(a, c, b_in_a, b_in_c, n=3, cap=DEFAULT_CAP, check_a=True, check_c=True, prefix="y"):
    """Amalgam D of A and C over B with C <= D and A <=^n D.

    Shared divisor problems are absorbed one at a time (first in canonical
    order): B is replaced by B(e:b), mapped onto <B a> in A and <B c> in C.
    Then the free amalgam over the enlarged base is returned.  D keeps the
    presentation of C and adds generators for A over B.
    """
    a, c = as_presented(a), as_presented(c)
    if check_a:
        rep = is_strong(b_in_a.image(), level=a.c, cap=cap)
        if not rep.holds:
            raise PreconditionFailed("B is not strong in A", rep)
    if check_c:
        k = strong_amalgam_bound(a, b_in_a.source, n)
        rep = is_strong(b_in_c.image(), level=c.c, bound_k=k, cap=cap)
        if not rep.holds:
            raise PreconditionFailed(f"B is not {k}-strong in C", rep)
    absorbed = []
    b_alg = b_in_a.source
    while True:
        probs = shared_divisor_problems(b_alg, b_in_a, b_in_c, first_only=True)
        if not probs:
            break
        b, e = probs[0]
        xa = _solution_in(b_in_a, b, e)
        xc = _solution_in(b_in_c, b, e)
        ext = divisor_extend(b_alg, b, e)
        new = ext.product
        xname = _name_of(new, ext.solution)
        imgs_a = {nm: b_in_a.apply(b_alg.generator(nm)) for nm in b_alg.names}
        imgs_c = {nm: b_in_c.apply(b_alg.generator(nm)) for nm in b_alg.names}
        imgs_a[xname] = xa
        imgs_c[xname] = xc
        b_in_a = GradedHom(new, a, imgs_a)
        b_in_c = GradedHom(new, c, imgs_c)
        _require_embedding(b_in_a, "B(e:b) -> A")
        _require_embedding(b_in_c, "B(e:b) -> C")
        absorbed.append((b_alg.format(b), b_alg.format(e)))
        b_alg = new
    res = free_amalgam(c, a, b_in_c, b_in_a, prefix=prefix)
    flip = {"left": "right", "right": "left"}
    sources = {n: (flip[side], x) for n, (side, x) in res.sources.items()}
    return AmalgamResult(res.product, res.embed_right, res.embed_left, res.over, absorbed, sources=sources)


def strong_amalgam_bound(a, b, n):
    """The bounded-strongness level 2 ldim(A/B) + 2 + n required of B in C."""
    return 2 * (as_presented(a).total_dim - as_presented(b).total_dim) + 2 + n


def _name_of(m, gen_elem):
    for nm in m.names:
        if m.generator(nm) == gen_elem:
            return nm
    raise KeyError("not a generator")


# expected dimensions


def amalgam_dims_formula(b_dims, a_dims, c_dims):
    """Per-degree dimensions of A (x)_B C predicted by the explicit basis (class 2 or 3)."""
    cl = len(b_dims)
    al = [a_dims[i] - b_dims[i] for i in range(cl)]
    ga = [c_dims[i] - b_dims[i] for i in range(cl)]
    d1 = b_dims[0] + al[0] + ga[0]
    d2 = b_dims[1] + al[1] + ga[1] + al[0] * ga[0]
    if cl == 2:
        return (d1, d2)
    d3 = (b_dims[2] + al[2] + ga[2] + ga[1] * al[0] + al[1] * ga[0] + 2 * al[0] * ga[0]
          + ga[0] * (ga[0] - 1) // 2 * al[0] + al[0] * (al[0] - 1) // 2 * ga[0])
    return (d1, d2, d3)


def point_ideal_generators(b_dims, degree):
    """Sizes of the free generating set of the ideal H generated by an adjoined point.

    Returns the per-degree counts of free generators of H and of its
    vector-space basis, for B (x) <x> with x of the given degree.
    """
    z1, z2, z3 = b_dims
    if degree == 3:
        return (0, 0, 1), (0, 0, 1)
    if degree == 2:
        return (0, 1, z1), (0, 1, z1)
    gens = (1, z1, z2 + z1 * (z1 + 1) // 2)
    basis = (1, z1, z2 + z1 * (z1 + 1) // 2 + z1)
    return gens, basis


# the functor F and gamma


def functor_F(a_star, check=True):
    """Class-3 algebra on an o-system of A* modulo the ideal of the degree-2 kernel."""
    a_star = as_presented(a_star)
    if a_star.c != 2:
        raise ValueError("functor_F takes a class-2 algebra")
    if check:
        rep = kc_membership(a_star)
        if not rep.member:
            raise PreconditionFailed("input is not in the class-2 amalgamation class", rep)
    cp = canonical_pair(a_star)
    f3 = build_free_algebra(a_star.p, 3, list(cp.free.generators))
    lab = {l: k for k, l in enumerate(f3.labels(2))}
    rels = []
    for row in cp.ideal_basis.get(2, np.zeros((0, cp.free.dim(2)), dtype=np.int64)):
        v = np.zeros(f3.dim(2), dtype=np.int64)
        for k, l in enumerate(cp.free.labels(2)):
            v[lab[l]] = row[k]
        rels.append(f3.homogeneous(2, v))
    out = PresentedAlgebra(Presentation(f3, rels))
    tau = GradedHom(out, a_star, {g.name: a_star.homogeneous(g.degree, cp.images[g.name]) for g in f3.generators})
    out.__dict__["_tau"] = tau
    return out


def functor_tau(f_alg):
    return f_alg.__dict__["_tau"]


def gamma(h, check=True):
    """F(h): F(B*) -> F(A*) for an embedding h: B* -> A* of class-2 algebras.

    Returns (map, kernel dims per degree).
    """
    _require_embedding(h, "B* -> A*")
    fb = functor_F(h.source, check=check)
    fa = functor_F(h.target, check=check)
    tau_b, tau_a = functor_tau(fb), functor_tau(fa)
    images = {}
    for g in fb.generators:
        target_vec = h.apply(tau_b.apply(fb.generator(g.name)))
        lifted = tau_a.preimage_element(target_vec)
        if lifted is None:
            raise AssertionError("F(A*) does not cover A* in low degrees")
        images[g.name] = lifted.component(g.degree) if not lifted.is_zero() else fa.zero()
    gm = GradedHom(fb, fa, images)
    kd = gm.kernel_dims()
    if kd[0] or kd[1]:
        raise AssertionError(f"gamma has kernel below the top degree: {kd}")
    return gm, kd


def star_embedding(sub):
    """For a subalgebra B of a class-3 algebra A, the embedding B* -> A*."""
    mat = materialize(sub)
    bs, _ = star(mat.algebra)
    a_s, tau_a = star(sub.parent)
    images = {}
    for g in bs.generators:
        images[g.name] = tau_a.apply(mat.embedding.apply(mat.algebra.generator(g.name)))
    return GradedHom(bs, a_s, images)


def sub_star_embedding(sub):
    """For a subalgebra B* of a class-2 algebra A*, the embedding of its presentation."""
    return materialize(sub).embedding


# freeness of configurations inside one algebra


def is_free_join(a, c, b=None):
    """<A C> = A (x)_B C with B = A & C (or the given B, which must equal A & C)."""
    inter = a & c
    if b is not None and b != inter:
        return False
    b = inter
    ma, mc, mb = materialize(a), materialize(c), materialize(b)
    ba = _sub_hom(mb, ma)
    bc = _sub_hom(mb, mc)
    d = free_amalgam(ma.algebra, mc.algebra, ba, bc)
    return d.product.dims == a.join(c).dims


def _sub_hom(small, big):
    """Inclusion between materialized subalgebras small <= big of one algebra."""
    images = {}
    for g in small.algebra.generators:
        v = small.embedding.apply(small.algebra.generator(g.name))
        pre = big.embedding.preimage_element(v)
        if pre is None:
            raise ValueError("not a subalgebra")
        images[g.name] = pre.component(g.degree) if not pre.is_zero() else big.algebra.zero()
    return GradedHom(small.algebra, big.algebra, images)


def independent(a, b, c):
    """<A B C> = <A B> (x)_<B> <B C> for subalgebras of one algebra."""
    ab = a.join(b)
    bc = b.join(c)
    return is_free_join(ab, bc, b)


def decompose_amalgam_claim(a, c, cap=DEFAULT_CAP):
    """Both sides of: delta(A/C) = delta(A/A&C) iff <AC> = A (x)_{A&C} C.

    Returns (delta_side, freeness_side).  A and C must be 2-strong.
    """
    from .predim import delta_rel

    for s in (a, c):
        rep = is_strong(s, level=2, cap=cap)
        if not rep.holds:
            raise PreconditionFailed("subalgebra is not 2-strong", rep)
    b = a & c
    lhs = delta_rel(a, c) == delta_rel(a, b)
    rhs = is_free_join(a, c)
    return lhs, rhs


def quotient_by(m, extra):
    """m modulo the ideal generated by extra homogeneous elements; returns (algebra, projection)."""
    m = as_presented(m)
    rels = list(relations_of(m))
    for e in extra:
        if not e.is_zero():
            rels.append(m.lift(e))
    q = PresentedAlgebra(Presentation(m.free, rels))
    proj = GradedHom(m, q, {n: q.generator(n) for n in m.names})
    return q, proj
