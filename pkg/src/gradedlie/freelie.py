"""Graded nilpotent Lie algebras over F_p and the free ones on a graded alphabet.

Every algebra here is stored the same way: a homogeneous basis per degree
1..c and dense structure-constant tensors T[(i, j)] with
[e_a, f_b] = sum_k T[(i, j)][a, b, k] g_k for e_a of degree i, f_b of degree j.
Pairs with i + j > c have no table entry at all.
"""
from __future__ import annotations

import functools

import numpy as np

from .fplinalg import PrimeField, Subspace, as_rows


class ParentMismatch(ValueError):
    pass


class GradedLieAlgebra:
    """Structure constants of a graded Lie algebra M_1 + ... + M_c."""

    def __init__(self, p, c, dims, table, labels=None):
        if c not in (1, 2, 3):
            raise ValueError(f"class must be 1, 2 or 3, got {c}")
        self.field = PrimeField(p)
        self.p = self.field.p
        self.c = c
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != c:
            raise ValueError("need one dimension per degree")
        self.offsets = tuple(sum(self.dims[:i]) for i in range(c + 1))
        self.total_dim = self.offsets[-1]
        self.table = {}
        for i in range(1, c + 1):
            for j in range(1, c + 1 - i):
                t = table.get((i, j))
                shape = (self.dim(i), self.dim(j), self.dim(i + j))
                if t is None:
                    t = np.zeros(shape, dtype=np.int64)
                t = np.asarray(t, dtype=np.int64) % self.p
                if t.shape != shape:
                    raise ValueError(f"table ({i},{j}) has shape {t.shape}, expected {shape}")
                t.setflags(write=False)
                self.table[(i, j)] = t
        self._labels = labels
        self._cache = {}

    def dim(self, i):
        if 1 <= i <= self.c:
            return self.dims[i - 1]
        return 0

    def labels(self, i):
        if self._labels is not None:
            return self._labels[i - 1]
        return [f"e{i}_{k}" for k in range(self.dim(i))]

    def degree_slice(self, i):
        return slice(self.offsets[i - 1], self.offsets[i])

    # elements

    def zero(self):
        return LieElement(self, np.zeros(self.total_dim, dtype=np.int64))

    def element(self, coords):
        return LieElement(self, coords)

    def homogeneous(self, i, coords):
        v = np.zeros(self.total_dim, dtype=np.int64)
        v[self.degree_slice(i)] = coords
        return LieElement(self, v)

    def basis_element(self, i, k):
        v = np.zeros(self.dim(i), dtype=np.int64)
        v[k] = 1
        return self.homogeneous(i, v)

    def basis(self, i):
        return [self.basis_element(i, k) for k in range(self.dim(i))]

    def full(self, i):
        return Subspace.full(self.dim(i), self.p)

    def zero_space(self, i):
        return Subspace.zero(self.dim(i), self.p)

    # brackets on coordinates

    def bracket_vec(self, i, u, j, v):
        """[u, v] for u in degree i, v in degree j as a degree i+j vector."""
        k = i + j
        if k > self.c:
            raise ValueError("degree exceeds class")
        t = self.table[(i, j)]
        if t.size == 0:
            return np.zeros(self.dim(k), dtype=np.int64)
        x = (np.asarray(u, dtype=np.int64) @ t.reshape(t.shape[0], -1)) % self.p
        return (np.asarray(v, dtype=np.int64) @ x.reshape(t.shape[1], t.shape[2])) % self.p

    def bracket_rows(self, i, us, j, vs):
        """All brackets [u, v] for rows u of us (degree i) and v of vs (degree j)."""
        k = i + j
        us = as_rows(us, self.dim(i))
        vs = as_rows(vs, self.dim(j))
        if k > self.c or us.shape[0] == 0 or vs.shape[0] == 0:
            return np.zeros((0, self.dim(k)), dtype=np.int64)
        t = self.table[(i, j)]
        x = np.tensordot(us, t, axes=([1], [0])) % self.p
        y = np.einsum("adk,bd->abk", x, vs) % self.p
        return y.reshape(us.shape[0] * vs.shape[0], self.dim(k))

    def bracket_spaces(self, i, s, j, t):
        """The span [S, T] in degree i+j of homogeneous subspaces S, T."""
        k = i + j
        if k > self.c:
            raise ValueError("degree exceeds class")
        return Subspace(self.dim(k), self.bracket_rows(i, s.basis, j, t.basis), self.p)

    def bracket(self, a, b):
        return a.bracket(b)

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def full_subalgebra(self):
        from .algebra import whole

        return whole(self)

    def zero_subalgebra(self):
        from .algebra import GradedSubalgebra

        return GradedSubalgebra(self, [self.zero_space(d) for d in range(1, self.c + 1)])

    def __repr__(self):
        return f"{type(self).__name__}(p={self.p}, c={self.c}, dims={self.dims})"


class LieElement:
    """An element of a graded Lie algebra, as a flat coordinate vector."""

    __slots__ = ("parent", "coords")

    def __init__(self, parent, coords):
        v = np.asarray(coords, dtype=np.int64).reshape(-1) % parent.p
        if v.shape[0] != parent.total_dim:
            raise ValueError(f"expected {parent.total_dim} coordinates, got {v.shape[0]}")
        v.setflags(write=False)
        self.parent = parent
        self.coords = v

    def part(self, i):
        return self.coords[self.parent.degree_slice(i)]

    def component(self, i):
        return self.parent.homogeneous(i, self.part(i))

    def degrees(self):
        return [i for i in range(1, self.parent.c + 1) if self.part(i).any()]

    @property
    def degree(self):
        """The degree if the element is nonzero and homogeneous, otherwise None."""
        d = self.degrees()
        return d[0] if len(d) == 1 else None

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def is_zero(self):
        return not self.coords.any()

    def __bool__(self):
        return not self.is_zero()

    def _same(self, other):
        if not isinstance(other, LieElement) or other.parent is not self.parent:
            raise ParentMismatch("elements live in different algebras")

    def __add__(self, other):
        self._same(other)
        return LieElement(self.parent, self.coords + other.coords)

    def __sub__(self, other):
        self._same(other)
        return LieElement(self.parent, self.coords - other.coords)

    def __neg__(self):
        return LieElement(self.parent, -self.coords)

    def __mul__(self, k):
        return LieElement(self.parent, self.coords * (int(k) % self.parent.p))

    __rmul__ = __mul__

    def bracket(self, other):
        self._same(other)
        m = self.parent
        out = np.zeros(m.total_dim, dtype=np.int64)
        for i in range(1, m.c):
            a = self.part(i)
            if not a.any():
                continue
            for j in range(1, m.c + 1 - i):
                b = other.part(j)
                if b.any():
                    out[m.degree_slice(i + j)] += m.bracket_vec(i, a, j, b)
        return LieElement(m, out)

    def __eq__(self, other):
        return (
            isinstance(other, LieElement)
            and other.parent is self.parent
            and np.array_equal(self.coords, other.coords)
        )

    def __hash__(self):
        return hash((id(self.parent), self.coords.tobytes()))

    def __repr__(self):
        return f"LieElement({self.parent.format(self) if hasattr(self.parent, 'format') else self.coords.tolist()})"


class Generator:
    __slots__ = ("name", "degree")

    def __init__(self, name, degree):
        self.name = str(name)
        self.degree = int(degree)

    def key(self):
        return (self.degree, self.name)

    def __eq__(self, other):
        return isinstance(other, Generator) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"{self.name}:{self.degree}"


class HallMonomial:
    """A Hall tree: a generator index or a pair (left, right) of Hall monomials."""

    __slots__ = ("tree", "degree", "order", "index", "left", "right")

    def __init__(self, tree, degree, order, index, left=None, right=None):
        self.tree = tree
        self.degree = degree
        self.order = order
        self.index = index
        self.left = left
        self.right = right

    @property
    def is_letter(self):
        return self.left is None

    def render(self, names):
        if self.is_letter:
            return names[self.tree]
        return f"[{self.left.render(names)},{self.right.render(names)}]"


def normalize_generators(gens):
    out = []
    for g in gens:
        if isinstance(g, Generator):
            out.append(g)
        else:
            name, deg = g
            out.append(Generator(name, deg))
    names = [g.name for g in out]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate generator names in {names}")
    return tuple(sorted(out, key=Generator.key))


class FreeNilpotentAlgebra(GradedLieAlgebra):
    """The free graded Lie algebra of class c on a graded generator list.

    Hall monomials are ordered by (degree, creation order); letters of a degree
    come before brackets of that degree and brackets [u, v] are created in order
    of (position of u, position of v). A bracket [u, v] is a Hall monomial iff
    u > v and u is a letter or u = [u', u''] with u'' <= v.
    """

    def __init__(self, p, c, gens):
        gens = normalize_generators(gens)
        for g in gens:
            if not 1 <= g.degree <= c:
                raise ValueError(f"generator {g} has degree outside 1..{c}")
        self.generators = gens
        self.names = [g.name for g in gens]
        hall = [[] for _ in range(c + 1)]
        order = []
        pair_index = {}
        for w in range(1, c + 1):
            for gi, g in enumerate(gens):
                if g.degree == w:
                    m = HallMonomial(gi, w, len(order), len(hall[w]))
                    hall[w].append(m)
                    order.append(m)
            cands = []
            for u in order:
                if u.degree >= w:
                    continue
                for v in order:
                    if u.degree + v.degree != w or not u.order > v.order:
                        continue
                    if u.is_letter or u.right.order <= v.order:
                        cands.append((u, v))
            cands.sort(key=lambda uv: (uv[0].order, uv[1].order))
            for u, v in cands:
                m = HallMonomial((u.tree, v.tree), w, len(order), len(hall[w]), u, v)
                hall[w].append(m)
                order.append(m)
                pair_index[(u.order, v.order)] = m
        self.hall = hall
        self.hall_order = order
        self._pair_index = pair_index
        dims = [len(hall[w]) for w in range(1, c + 1)]
        labels = [[m.render(self.names) for m in hall[w]] for w in range(1, c + 1)]
        self._memo = {}
        table = {}
        for i in range(1, c + 1):
            for j in range(1, c + 1 - i):
                t = np.zeros((dims[i - 1], dims[j - 1], dims[i + j - 1]), dtype=np.int64)
                for u in hall[i]:
                    for v in hall[j]:
                        for m, coef in self._bracket_hall(u, v).items():
                            t[u.index, v.index, m.index] = coef
                table[(i, j)] = t
        super().__init__(p, c, dims, table, labels)
        self._label_index = {lab: (w + 1, k) for w, labs in enumerate(labels) for k, lab in enumerate(labs)}

    def _bracket_hall(self, u, v):
        """[u, v] as {HallMonomial: coefficient} by Hall rewriting (coefficients over Z)."""
        key = (u.order, v.order)
        if key in self._memo:
            return self._memo[key]
        if u.degree + v.degree > len(self.hall) - 1:
            res = {}
        elif u.order == v.order:
            res = {}
        elif u.order < v.order:
            res = {m: -k for m, k in self._bracket_hall(v, u).items()}
        elif u.is_letter or u.right.order <= v.order:
            res = {self._pair_index[key]: 1}
        else:
            res = {}
            # [[u1,u2],v] = [[u1,v],u2] + [u1,[u2,v]]
            for m, k in self._bracket_hall(u.left, v).items():
                for m2, k2 in self._bracket_hall(m, u.right).items():
                    res[m2] = res.get(m2, 0) + k * k2
            for m, k in self._bracket_hall(u.right, v).items():
                for m2, k2 in self._bracket_hall(u.left, m).items():
                    res[m2] = res.get(m2, 0) + k * k2
            res = {m: k for m, k in res.items() if k != 0}
        self._memo[key] = res
        return res

    @property
    def free(self):
        return self

    def quotient_indices(self, d):
        return list(range(self.dim(d)))

    def from_free(self, a):
        return a

    def lift(self, a):
        return a

    def generator(self, name):
        for gi, g in enumerate(self.generators):
            if g.name == name:
                for m in self.hall[g.degree]:
                    if m.is_letter and m.tree == gi:
                        return self.basis_element(g.degree, m.index)
        raise KeyError(name)

    def generator_elements(self):
        return [self.generator(g.name) for g in self.generators]

    def monomial(self, label):
        """The basis element with the given rendered Hall label."""
        i, k = self._label_index[label]
        return self.basis_element(i, k)

    def evaluate(self, word):
        """Expand a bracket tree (nested pairs of names or LieElements) into Hall coordinates."""
        if isinstance(word, LieElement):
            if word.parent is not self:
                raise ParentMismatch("leaf from another algebra")
            return word
        if isinstance(word, str):
            return self.generator(word)
        left, right = word
        return self.evaluate(left).bracket(self.evaluate(right))

    def format(self, a):
        terms = []
        for i in range(1, self.c + 1):
            labs = self.labels(i)
            for k, coef in enumerate(a.part(i)):
                if coef:
                    terms.append(f"{int(coef)}*{labs[k]}")
        return " + ".join(terms) if terms else "0"

    def degree_signature(self):
        return tuple(sum(1 for g in self.generators if g.degree == d) for d in range(1, self.c + 1))


def expand_to_hall(word, algebra=None):
    """Evaluate a bracket tree whose leaves are LieElements of one algebra."""
    if isinstance(word, LieElement):
        if algebra is not None and word.parent is not algebra:
            raise ParentMismatch("leaf from another algebra")
        return word
    left, right = word
    a = expand_to_hall(left, algebra)
    b = expand_to_hall(right, a.parent if algebra is None else algebra)
    return a.bracket(b)


@functools.lru_cache(maxsize=256)
def _cached_free(p, c, gens):
    return FreeNilpotentAlgebra(p, c, gens)


def build_free_algebra(p, c, gens):
    """The free class-c algebra on gens (pairs (name, degree) or Generators), memoized."""
    if c not in (2, 3):
        raise ValueError(f"class must be 2 or 3, got {c}")
    p = PrimeField(p).p
    return _cached_free(p, c, normalize_generators(gens))


def standard_free(p, c, signature):
    """Free algebra with generators g1, g2, ... of degrees given by a per-degree count."""
    gens = []
    k = 0
    for d, n in enumerate(signature, start=1):
        for _ in range(n):
            k += 1
            gens.append(Generator(f"g{k}", d))
    return build_free_algebra(p, c, gens)


def witt_dims(n, m):
    """Per-degree dims of the free class-3 algebra on n degree-1 and m degree-2 generators."""
    return (n, m + n * (n - 1) // 2, (n**3 - n) // 3 + n * m)
