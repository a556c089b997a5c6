"""Presented graded Lie algebras F(X)/J, subalgebras, o-systems and homomorphisms."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .fplinalg import EnumerationTooLarge, Subspace, as_rows, kernel_basis, solve
from .freelie import (
    FreeNilpotentAlgebra,
    Generator,
    GradedLieAlgebra,
    LieElement,
    ParentMismatch,
    build_free_algebra,
    standard_free,
)


class InhomogeneousRelation(ValueError):
    pass


class NotAHomomorphism(ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def ideal_closure(free, rows_by_degree):
    """Degreewise basis of the ideal of free generated by the given homogeneous rows."""
    parts = {}
    for d in range(1, free.c + 1):
        rows = [as_rows(rows_by_degree.get(d, ()), free.dim(d))]
        for e in range(1, d):
            if parts[e].dim and free.dim(d - e):
                rows.append(free.bracket_rows(e, parts[e].basis, d - e, np.eye(free.dim(d - e), dtype=np.int64)))
        parts[d] = Subspace(free.dim(d), np.concatenate(rows), free.p)
    return parts


class Presentation:
    """A free algebra together with homogeneous relations of degree >= 2."""

    def __init__(self, free, relations=()):
        self.free = free
        rels = []
        for r in relations:
            if not isinstance(r, LieElement) or r.parent is not free:
                raise ParentMismatch("relation is not an element of the free algebra")
            if r.is_zero():
                continue
            if not r.is_homogeneous():
                raise InhomogeneousRelation(f"relation {free.format(r)} is not homogeneous")
            if r.degree < 2:
                raise InhomogeneousRelation(f"relation {free.format(r)} has degree 1")
            rels.append(r)
        self.relations = tuple(rels)

    def rows_by_degree(self):
        out = {}
        for r in self.relations:
            out.setdefault(r.degree, []).append(r.part(r.degree))
        return {d: np.array(v, dtype=np.int64) for d, v in out.items()}

    @property
    def p(self):
        return self.free.p

    @property
    def c(self):
        return self.free.c


class PresentedAlgebra(GradedLieAlgebra):
    """The quotient F(X)/J with J the ideal generated by the relations.

    The quotient basis in degree d is the set of Hall monomials that are not
    pivots of the echelon basis of J_d.
    """

    def __init__(self, presentation, ideal=None):
        free = presentation.free
        self.presentation = presentation
        self.free = free
        self.ideal = ideal if ideal is not None else ideal_closure(free, presentation.rows_by_degree())
        p, c = free.p, free.c
        self._np = {}
        self._proj = {}
        for d in range(1, c + 1):
            j = self.ideal[d]
            piv = set(j.pivots)
            npv = [k for k in range(free.dim(d)) if k not in piv]
            self._np[d] = npv
            # proj_d maps free coordinates of degree d to quotient coordinates
            pr = np.zeros((free.dim(d), len(npv)), dtype=np.int64)
            for a, k in enumerate(npv):
                pr[k, a] = 1
            for row, pc in enumerate(j.pivots):
                pr[pc, :] = (-j.basis[row, npv]) % p
            self._proj[d] = pr
        dims = [len(self._np[d]) for d in range(1, c + 1)]
        table = {}
        for i in range(1, c + 1):
            for jj in range(1, c + 1 - i):
                t = free.table[(i, jj)][np.ix_(self._np[i], self._np[jj])]
                table[(i, jj)] = (t @ self._proj[i + jj]) % p if t.size else np.zeros(
                    (dims[i - 1], dims[jj - 1], dims[i + jj - 1]), dtype=np.int64)
        labels = [[free.labels(d)[k] for k in self._np[d]] for d in range(1, c + 1)]
        super().__init__(p, c, dims, table, labels)

    @property
    def generators(self):
        return self.free.generators

    @property
    def names(self):
        return self.free.names

    def quotient_indices(self, d):
        return list(self._np[d])

    def projection(self, d):
        return self._proj[d]

    def from_free(self, a):
        """Image of an element of the free algebra."""
        if a.parent is not self.free:
            raise ParentMismatch("element of another free algebra")
        v = np.zeros(self.total_dim, dtype=np.int64)
        for d in range(1, self.c + 1):
            v[self.degree_slice(d)] = a.part(d) @ self._proj[d]
        return LieElement(self, v)

    def lift(self, m):
        """The canonical preimage supported on quotient-basis monomials."""
        if m.parent is not self:
            raise ParentMismatch("element of another algebra")
        v = np.zeros(self.free.total_dim, dtype=np.int64)
        for d in range(1, self.c + 1):
            part = np.zeros(self.free.dim(d), dtype=np.int64)
            part[self._np[d]] = m.part(d)
            v[self.free.degree_slice(d)] = part
        return LieElement(self.free, v)

    def lift_rows(self, d, rows):
        rows = as_rows(rows, self.dim(d))
        out = np.zeros((rows.shape[0], self.free.dim(d)), dtype=np.int64)
        out[:, self._np[d]] = rows
        return out

    def generator(self, name):
        return self.from_free(self.free.generator(name))

    def generator_elements(self):
        return [self.generator(n) for n in self.names]

    def parse_word(self, word):
        return self.from_free(self.free.evaluate(word))

    def format(self, a):
        terms = []
        for i in range(1, self.c + 1):
            labs = self.labels(i)
            for k, coef in enumerate(a.part(i)):
                if coef:
                    terms.append(f"{int(coef)}*{labs[k]}")
        return " + ".join(terms) if terms else "0"


def quotient(presentation_or_free, relations=None):
    """Build F(X)/<<relations>>."""
    if isinstance(presentation_or_free, Presentation):
        pres = presentation_or_free
    else:
        pres = Presentation(presentation_or_free, relations or ())
    return PresentedAlgebra(pres)


def as_presented(m):
    """Accept free algebras (no relations) wherever presented algebras are expected."""
    if isinstance(m, (PresentedAlgebra, FreeNilpotentAlgebra)):
        return m
    raise TypeError(f"cannot present {type(m).__name__}")


def relations_of(m):
    return m.presentation.relations if isinstance(m, PresentedAlgebra) else ()


def free_presented(p, c, gens):
    return as_presented(build_free_algebra(p, c, gens))


class GradedSubalgebra:
    """A graded subspace A_1 + ... + A_c of an algebra, closed under brackets."""

    __slots__ = ("parent", "parts", "_key")

    def __init__(self, parent, parts, check=False):
        self.parent = parent
        parts = tuple(parts)
        if len(parts) != parent.c:
            raise ValueError("need one part per degree")
        for d, s in enumerate(parts, start=1):
            if s.ambient_dim != parent.dim(d):
                raise ValueError(f"degree {d} part has wrong ambient dimension")
        self.parts = parts
        self._key = None
        if check and not self.is_closed():
            raise ValueError("subspace is not closed under brackets")

    def part(self, d):
        return self.parts[d - 1]

    @property
    def dims(self):
        return tuple(s.dim for s in self.parts)

    @property
    def total_dim(self):
        return sum(self.dims)

    @property
    def key(self):
        if self._key is None:
            self._key = tuple(s.key for s in self.parts)
        return self._key

    def __eq__(self, other):
        return isinstance(other, GradedSubalgebra) and other.parent is self.parent and other.key == self.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return (self.total_dim, self.key) < (other.total_dim, other.key)

    def __repr__(self):
        return f"GradedSubalgebra(dims={self.dims})"

    def _same(self, other):
        if other.parent is not self.parent:
            raise ParentMismatch("subalgebras of different algebras")

    def contains(self, a):
        if isinstance(a, GradedSubalgebra):
            self._same(a)
            return all(s.contains_space(t) for s, t in zip(self.parts, a.parts))
        if a.parent is not self.parent:
            raise ParentMismatch("element of another algebra")
        return all(self.part(d).contains(a.part(d)) for d in range(1, self.parent.c + 1))

    def __le__(self, other):
        return other.contains(self)

    def is_closed(self):
        m = self.parent
        for i in range(1, m.c + 1):
            for j in range(i, m.c + 1 - i):
                br = m.bracket_spaces(i, self.part(i), j, self.part(j))
                if not self.part(i + j).contains_space(br):
                    return False
        return True

    def intersection(self, other):
        self._same(other)
        return GradedSubalgebra(self.parent, [s & t for s, t in zip(self.parts, other.parts)])

    __and__ = intersection

    def join(self, other):
        """The subalgebra generated by both."""
        self._same(other)
        return generate_from_parts(self.parent, [s + t for s, t in zip(self.parts, other.parts)])

    __or__ = join

    def elements(self, d):
        return [self.parent.homogeneous(d, v) for v in self.part(d).basis]

    def low_part(self):
        """The subalgebra generated by the degree 1 and 2 parts."""
        m = self.parent
        parts = [self.part(1), self.part(2) if m.c >= 2 else None]
        parts = [s if s is not None else m.zero_space(d) for d, s in enumerate(parts, 1)]
        parts += [m.zero_space(d) for d in range(3, m.c + 1)]
        return generate_from_parts(m, parts[: m.c])

    def in_h_class(self):
        """A is generated by A_1 and A_2."""
        return self.low_part() == self


def generate_from_parts(m, parts):
    """Least subalgebra containing the given homogeneous subspaces."""
    out = []
    for d in range(1, m.c + 1):
        s = parts[d - 1] if d - 1 < len(parts) and parts[d - 1] is not None else m.zero_space(d)
        rows = [s.basis]
        for i in range(1, d):
            j = d - i
            if i > j:
                break
            if out[i - 1].dim and out[j - 1].dim:
                rows.append(m.bracket_rows(i, out[i - 1].basis, j, out[j - 1].basis))
        out.append(Subspace(m.dim(d), np.concatenate(rows), m.p) if len(rows) > 1 else s)
    return GradedSubalgebra(m, out)


def generated_subalgebra(m, elems):
    """Least graded subalgebra containing every homogeneous component of elems."""
    rows = {d: [] for d in range(1, m.c + 1)}
    for a in elems:
        if a.parent is not m:
            raise ParentMismatch("element of another algebra")
        for d in a.degrees():
            rows[d].append(a.part(d))
    parts = [Subspace(m.dim(d), as_rows(rows[d], m.dim(d)), m.p) for d in range(1, m.c + 1)]
    return generate_from_parts(m, parts)


def subalgebra(m, parts):
    """Subalgebra generated by per-degree spans given as row arrays or Subspaces."""
    ps = []
    for d in range(1, m.c + 1):
        s = parts[d - 1] if d - 1 < len(parts) else None
        if s is None:
            ps.append(m.zero_space(d))
        elif isinstance(s, Subspace):
            ps.append(s)
        else:
            ps.append(Subspace(m.dim(d), s, m.p))
    return generate_from_parts(m, ps)


def whole(m):
    if isinstance(m, GradedSubalgebra):
        return m
    return GradedSubalgebra(m, [m.full(d) for d in range(1, m.c + 1)])


def extract_o_system(a, over=None):
    """Degree-ascending greedy o-system of the subalgebra a (relative to over).

    Returns a list of (degree, vector) pairs in parent coordinates.
    """
    a = whole(a)
    m = a.parent
    base = over if over is not None else GradedSubalgebra(m, [m.zero_space(d) for d in range(1, m.c + 1)])
    chosen = {d: [] for d in range(1, m.c + 1)}
    out = []
    for d in range(1, m.c + 1):
        parts = [base.part(e).span_with(as_rows(chosen[e], m.dim(e))) if e < d else base.part(e)
                 for e in range(1, m.c + 1)]
        lower = generate_from_parts(m, parts).part(d)
        reps = a.part(d).quotient_complement(lower)
        for v in reps:
            chosen[d].append(v)
            out.append((d, v))
    return out


def o_dims(a, over=None):
    sysm = extract_o_system(a, over)
    m = whole(a).parent
    return tuple(sum(1 for d, _ in sysm if d == e) for e in range(1, m.c + 1))


def _signature(system, c):
    return tuple(sum(1 for d, _ in system if d == e) for e in range(1, c + 1))


def hom_matrices(free, target, images):
    """Per-degree matrices of the homomorphism free -> target given generator images.

    images maps generator name -> homogeneous vector (coordinates of target in the
    generator's degree).
    """
    p = free.p
    vecs = {}
    for m in free.hall_order:
        d = m.degree
        if d > target.c:
            vecs[m.order] = np.zeros(0, dtype=np.int64)
            continue
        if m.is_letter:
            v = np.asarray(images[free.names[m.tree]], dtype=np.int64) % p
            if v.shape != (target.dim(d),):
                raise ValueError(f"image of {free.names[m.tree]} has wrong shape")
        else:
            v = target.bracket_vec(m.left.degree, vecs[m.left.order], m.right.degree, vecs[m.right.order])
        vecs[m.order] = v
    mats = {}
    for d in range(1, free.c + 1):
        mat = np.zeros((free.dim(d), target.dim(d)), dtype=np.int64)
        for m in free.hall[d]:
            if target.dim(d):
                mat[m.index] = vecs[m.order]
        mats[d] = mat
    return mats


@dataclass
class CanonicalPair:
    """Free algebra on an o-system, the kernel of the induced map, and an ideal basis."""

    free: FreeNilpotentAlgebra
    system: list
    images: dict
    matrices: dict
    kernel: dict
    ideal_basis: dict
    o_dims: tuple
    ideal_dims: tuple
    over_names: frozenset = frozenset()

    @property
    def relations(self):
        rels = []
        for d, rows in sorted(self.ideal_basis.items()):
            for r in rows:
                rels.append(self.free.homogeneous(d, r))
        return rels


def canonical_pair(a, over=None):
    """Canonical pair of a subalgebra (or whole algebra) a."""
    a = whole(a)
    m = a.parent
    key = ("cp", a.key, None if over is None else over.key)
    cache = getattr(m, "_cache", None)
    if cache is not None and key in cache:
        return cache[key]
    c = m.c
    if over is not None:
        tagged = [(d, 0, v) for d, v in extract_o_system(over)] + [(d, 1, v) for d, v in extract_o_system(a, over)]
        tagged.sort(key=lambda t: t[0])
        sysm = [(d, v) for d, _, v in tagged]
    else:
        tagged = [(d, 1, v) for d, v in extract_o_system(a)]
        sysm = extract_o_system(a)
    sig = _signature(sysm, c)
    free = standard_free(m.p, c, sig)
    images = {}
    over_names = set()
    for k, (d, tag, v) in enumerate(tagged, start=1):
        images[f"g{k}"] = v
        if tag == 0:
            over_names.add(f"g{k}")
    mats = hom_matrices(free, m, images)
    kernel = {}
    for d in range(1, c + 1):
        if m.dim(d):
            kernel[d] = kernel_basis(mats[d].T, m.p) if free.dim(d) else Subspace.zero(0, m.p)
        else:
            kernel[d] = Subspace.full(free.dim(d), m.p)
    ideal_basis = {}
    ideal_dims = []
    for d in range(1, c + 1):
        low = ideal_closure(free, {e: kernel[e].basis for e in range(1, d)})[d]
        reps = kernel[d].quotient_complement(low)
        ideal_basis[d] = reps
        if d >= 2:
            ideal_dims.append(reps.shape[0])
    cp = CanonicalPair(free, sysm, images, mats, kernel, ideal_basis, sig, tuple(ideal_dims), frozenset(over_names))
    if cache is not None:
        cache[key] = cp
    return cp


class GradedHom:
    """Homomorphism of graded algebras, determined by generator images and checked."""

    def __init__(self, source, target, images, check=True):
        source = as_presented(source)
        self.source = source
        self.target = target
        free = source.free
        vec_images = {}
        for name in free.names:
            img = images[name]
            g = next(g for g in free.generators if g.name == name)
            if isinstance(img, LieElement):
                if img.parent is not target:
                    raise ParentMismatch(f"image of {name} is not in the target")
                if img.is_zero():
                    v = np.zeros(target.dim(g.degree), dtype=np.int64)
                else:
                    if img.degree != g.degree:
                        raise ValueError(f"image of {name} is not homogeneous of degree {g.degree}")
                    v = img.part(g.degree)
            else:
                v = np.asarray(img, dtype=np.int64)
            vec_images[name] = v
        self.images = vec_images
        fm = hom_matrices(free, target, vec_images)
        if check:
            for r in relations_of(source):
                d = r.degree
                if d <= target.c and (r.part(d) @ fm[d] % target.p).any():
                    raise NotAHomomorphism(f"relation {free.format(r)} does not map to 0", witness=r)
        self.matrices = {d: fm[d][source.quotient_indices(d)] % target.p for d in range(1, source.c + 1)}

    @classmethod
    def identity(cls, m):
        m = as_presented(m)
        return cls(m, m, {n: m.generator(n) for n in m.names}, check=False)

    def matrix(self, d):
        return self.matrices[d]

    def apply(self, a):
        if a.parent is not self.source:
            raise ParentMismatch("element outside the source")
        t = self.target
        v = np.zeros(t.total_dim, dtype=np.int64)
        for d in range(1, min(self.source.c, t.c) + 1):
            v[t.degree_slice(d)] = a.part(d) @ self.matrices[d]
        return LieElement(t, v)

    __call__ = apply

    def apply_rows(self, d, rows):
        rows = as_rows(rows, self.source.dim(d))
        if d > self.target.c:
            return np.zeros((rows.shape[0], 0), dtype=np.int64)
        return (rows @ self.matrices[d]) % self.target.p

    def kernel(self, d):
        if d > self.target.c or self.target.dim(d) == 0:
            return self.source.full(d)
        return kernel_basis(self.matrices[d].T, self.source.p)

    def kernel_dims(self):
        return tuple(self.kernel(d).dim for d in range(1, self.source.c + 1))

    def is_embedding(self):
        return not any(self.kernel_dims())

    def image_space(self, d):
        if d > self.target.c:
            return Subspace.zero(0, self.target.p)
        return Subspace(self.target.dim(d), self.matrices[d], self.target.p)

    def image(self, sub=None):
        """Image of a subalgebra of the source (default: everything)."""
        t = self.target
        parts = []
        for d in range(1, t.c + 1):
            if d > self.source.c:
                parts.append(t.zero_space(d))
            elif sub is None:
                parts.append(self.image_space(d))
            else:
                parts.append(Subspace(t.dim(d), self.apply_rows(d, sub.part(d).basis), t.p))
        return GradedSubalgebra(t, parts)

    def preimage_element(self, b):
        """Some a with h(a) = b, or None."""
        s = self.source
        v = np.zeros(s.total_dim, dtype=np.int64)
        for d in range(1, s.c + 1):
            part = b.part(d) if d <= self.target.c else np.zeros(0, dtype=np.int64)
            if d > self.target.c:
                continue
            x = solve(self.matrices[d], part, s.p)
            if x is None:
                return None
            v[s.degree_slice(d)] = x
        if any(b.part(d).any() for d in range(s.c + 1, self.target.c + 1)):
            return None
        return LieElement(s, v)

    def compose(self, other):
        """self after other."""
        if other.target is not self.source:
            raise ParentMismatch("maps do not compose")
        src = other.source
        return GradedHom(src, self.target, {n: self.apply(other.apply(src.generator(n))) for n in src.names}, check=False)

    def agrees_with(self, other):
        return self.source is other.source and self.target is other.target and all(
            np.array_equal(self.matrices[d], other.matrices[d]) for d in self.matrices)

    def respects_brackets(self):
        """Exhaustive check of h([u, v]) = [h(u), h(v)] on basis pairs."""
        s, t = self.source, self.target
        for i in range(1, s.c + 1):
            for j in range(1, s.c + 1 - i):
                if i + j > t.c:
                    continue
                lhs = (s.bracket_rows(i, np.eye(s.dim(i), dtype=np.int64), j, np.eye(s.dim(j), dtype=np.int64)) @ self.matrices[i + j]) % t.p
                rhs = t.bracket_rows(i, self.matrices[i], j, self.matrices[j])
                if lhs.shape[0] and not np.array_equal(lhs, rhs):
                    return False
        return True


def hom_from_generators(src, tgt, images):
    return GradedHom(src, tgt, images)


class Materialized:
    """A subalgebra rebuilt as a presented algebra together with its inclusion."""

    def __init__(self, algebra, embedding, pair):
        self.algebra = algebra
        self.embedding = embedding
        self.pair = pair


def materialize(a, over=None):
    """Present a subalgebra from its canonical pair and embed it into the parent."""
    a = whole(a)
    m = a.parent
    key = ("mat", a.key, None if over is None else over.key)
    cache = getattr(m, "_cache", None)
    if cache is not None and key in cache:
        return cache[key]
    cp = canonical_pair(a, over)
    alg = PresentedAlgebra(Presentation(cp.free, cp.relations))
    emb = GradedHom(alg, m, {n: m.homogeneous(g.degree, cp.images[n]) for n, g in zip(cp.free.names, cp.free.generators)})
    if alg.dims != a.dims or not emb.is_embedding():
        raise AssertionError("materialized subalgebra does not match")
    out = Materialized(alg, emb, cp)
    if cache is not None:
        cache[key] = out
    return out


def star(m):
    """The class-2 truncation M* = M/M_3 and the canonical map tau."""
    m = as_presented(m)
    if m.c != 3:
        raise ValueError("star is defined here for class 3 algebras")
    gens = [g for g in m.generators if g.degree <= 2]
    f2 = build_free_algebra(m.p, 2, gens)
    rels = []
    for r in relations_of(m):
        if r.degree == 2:
            rels.append(f2.homogeneous(2, _transfer(m.free, f2, 2, r.part(2))))
    ms = PresentedAlgebra(Presentation(f2, rels))
    images = {}
    for g in m.generators:
        images[g.name] = ms.generator(g.name) if g.degree <= 2 else ms.zero()
    tau = GradedHom(m, ms, images)
    return ms, tau


def _transfer(src_free, dst_free, d, vec):
    """Move degree-d coordinates between free algebras sharing the same labels."""
    out = np.zeros(dst_free.dim(d), dtype=np.int64)
    dst_labels = {lab: k for k, lab in enumerate(dst_free.labels(d))}
    for k, lab in enumerate(src_free.labels(d)):
        if vec[k]:
            out[dst_labels[lab]] = vec[k]
    return out


def transfer_element(a, dst_free):
    """Move an element between free algebras whose Hall labels agree."""
    src = a.parent
    v = np.zeros(dst_free.total_dim, dtype=np.int64)
    for d in range(1, min(src.c, dst_free.c) + 1):
        v[dst_free.degree_slice(d)] = _transfer(src, dst_free, d, a.part(d))
    return LieElement(dst_free, v)


def isomorphism_search(a, b, cap=10**5):
    """Brute-force a graded isomorphism a -> b by trying generator images."""
    a, b = as_presented(a), as_presented(b)
    if a.dims != b.dims or a.p != b.p or a.c != b.c:
        return None
    gens = a.generators
    choices = [list(itertools.product(range(a.p), repeat=b.dim(g.degree))) for g in gens]
    total = 1
    for ch in choices:
        total *= len(ch)
    if total > cap:
        raise EnumerationTooLarge(total, cap, "generator assignments")
    for combo in itertools.product(*choices):
        imgs = {g.name: np.array(v, dtype=np.int64) for g, v in zip(gens, combo)}
        try:
            h = GradedHom(a, b, imgs)
        except NotAHomomorphism:
            continue
        if h.is_embedding():
            return h
    return None


def rebase(m, rng):
    """The same algebra presented through a random graded automorphism of F(X)."""
    m = as_presented(m)
    free = m.free
    gens = free.generators
    images = {}
    for gi, g in enumerate(gens):
        d = g.degree
        v = np.zeros(free.dim(d), dtype=np.int64)
        for mono in free.hall[d]:
            if mono.is_letter and mono.tree == gi:
                v[mono.index] = rng.integers(1, m.p)
            elif not mono.is_letter or mono.tree > gi:
                v[mono.index] = rng.integers(0, m.p)
        images[g.name] = v
    auto = GradedHom(free, free, images, check=False)
    rels = [auto.apply(r) for r in relations_of(m)]
    return PresentedAlgebra(Presentation(free, rels))


def random_element(m, rng, d=None):
    if d is None:
        return m.element(rng.integers(0, m.p, size=m.total_dim))
    return m.homogeneous(d, rng.integers(0, m.p, size=m.dim(d)))


def random_presentation(rng, p, c, signature, rel_counts, names=None):
    """Free algebra on a degree signature modulo random homogeneous relations."""
    gens = []
    k = 0
    for d, n in enumerate(signature, start=1):
        for _ in range(n):
            gens.append(Generator(names[k] if names else f"x{k + 1}", d))
            k += 1
    free = build_free_algebra(p, c, gens)
    rels = []
    for d, n in rel_counts.items():
        for _ in range(n):
            if free.dim(d):
                rels.append(free.homogeneous(d, rng.integers(0, p, size=free.dim(d))))
    return PresentedAlgebra(Presentation(free, rels))
