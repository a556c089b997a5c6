"""Exact linear algebra over a prime field F_p.

Vectors and matrices are numpy int64 arrays with entries reduced into [0, p).
Subspaces are stored by their reduced row echelon basis, which is unique, so
equality of subspaces is equality of representations.
"""
from __future__ import annotations

import itertools

import numpy as np

DEFAULT_CAP = 10**6
MAX_PRIME = 1 << 20


class EnumerationTooLarge(Exception):
    """Raised when an enumeration would exceed its configured cap."""

    def __init__(self, count, cap, what="subspaces"):
        super().__init__(f"enumeration of {count} {what} exceeds cap {cap}")
        self.count = count
        self.cap = cap


class AmbientMismatch(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """The field of residues mod a prime p."""

    __slots__ = ("p",)

    def __init__(self, p):
        p = int(p)
        if not is_prime(p):
            raise ValueError(f"p={p} is not prime")
        if p >= MAX_PRIME:
            raise ValueError(f"p={p} too large for int64 kernels (limit {MAX_PRIME})")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def reduce(self, a):
        return int(a) % self.p

    def inv(self, a):
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)

    def frac(self, num, den):
        """The residue of num/den."""
        return (int(num) % self.p) * self.inv(den) % self.p

    def elements(self):
        return range(self.p)


def as_rows(x, n):
    """x as a 2-d int64 array with n columns (empty input gives 0 rows)."""
    a = np.asarray(x, dtype=np.int64)
    if a.ndim == 2 and a.shape[1] == n:
        return a
    if a.size == 0:
        return np.zeros((0, n), dtype=np.int64)
    return a.reshape(-1, n)


def rref_pivots(m, p):
    """Return (R, pivots): the reduced row echelon form without zero rows."""
    a = np.array(m, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("matrix expected")
    rows, cols = a.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = (a[r] * pow(lead, p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


def rref(m, p):
    """Reduced row echelon form (zero rows dropped) and rank."""
    r, piv = rref_pivots(m, p)
    return r, len(piv)


def rank(m, p):
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref_pivots(m, p)[1])


def _null_from_rref(r, pivots, cols, p):
    free = [c for c in range(cols) if c not in set(pivots)]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for row, pc in enumerate(pivots):
            out[i, pc] = (-r[row, f]) % p
    return out


def kernel_basis(m, p):
    """Right null space {v : m v = 0} as a Subspace of F_p^cols."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    if m.shape[0] == 0:
        return Subspace.full(cols, p)
    r, piv = rref_pivots(m, p)
    return Subspace(cols, _null_from_rref(r, piv, cols, p), p)


def left_kernel(m, p):
    """Basis rows of {u : u m = 0}."""
    m = np.asarray(m, dtype=np.int64)
    return kernel_basis(m.T, p).basis


def solve(m, b, p):
    """One solution x of x m = b (row convention) or None."""
    m = np.asarray(m, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    n = m.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64) if not b.any() else None
    aug = np.concatenate([m.T, b.reshape(-1, 1)], axis=1)
    r, piv = rref_pivots(aug, p)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, pc in enumerate(piv):
        x[pc] = r[row, n]
    return x


class Subspace:
    """A subspace of F_p^n held as its reduced row echelon basis."""

    __slots__ = ("ambient_dim", "p", "basis", "pivots", "_key")

    def __init__(self, ambient_dim, rows, p, canonical=False):
        self.ambient_dim = int(ambient_dim)
        self.p = p
        rows = as_rows(rows, self.ambient_dim)
        if canonical:
            b, piv = rows % p, tuple(int(np.flatnonzero(r)[0]) for r in rows)
        else:
            b, piv = rref_pivots(rows, p) if rows.shape[0] else (rows[:0], ())
        b.setflags(write=False)
        self.basis = b
        self.pivots = piv
        self._key = None

    @classmethod
    def zero(cls, n, p):
        return cls(n, np.zeros((0, n), dtype=np.int64), p, canonical=True)

    @classmethod
    def full(cls, n, p):
        return cls(n, np.eye(n, dtype=np.int64), p, canonical=True)

    @property
    def dim(self):
        return len(self.pivots)

    def __len__(self):
        return self.dim

    @property
    def key(self):
        if self._key is None:
            self._key = (self.ambient_dim, self.dim, tuple(map(tuple, self.basis.tolist())))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        return f"Subspace(n={self.ambient_dim}, dim={self.dim}, p={self.p})"

    def _check(self, other):
        if self.ambient_dim != other.ambient_dim or self.p != other.p:
            raise AmbientMismatch(f"ambient {self.ambient_dim}/F_{self.p} vs {other.ambient_dim}/F_{other.p}")

    def reduce(self, v):
        """Canonical coset representative of v (or rows of v) modulo this space."""
        v = np.asarray(v, dtype=np.int64) % self.p
        if self.dim == 0:
            return v
        piv = list(self.pivots)
        if v.ndim == 1:
            return (v - v[piv] @ self.basis) % self.p
        return (v - v[:, piv] @ self.basis) % self.p

    def contains(self, v):
        return not self.reduce(v).any()

    def __contains__(self, v):
        return self.contains(v)

    def contains_space(self, other):
        self._check(other)
        if other.dim > self.dim:
            return False
        return other.dim == 0 or not self.reduce(other.basis).any()

    def __le__(self, other):
        return other.contains_space(self)

    def coordinates(self, v):
        """Coordinates of v in this basis (v must be a member)."""
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        if v.ndim == 1:
            return v[list(self.pivots)].copy()
        return v[:, list(self.pivots)].copy()

    def sum(self, other):
        self._check(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        return Subspace(self.ambient_dim, np.concatenate([self.basis, other.basis]), self.p)

    __add__ = sum

    def span_with(self, vectors):
        vectors = as_rows(vectors, self.ambient_dim)
        if vectors.shape[0] == 0:
            return self
        return Subspace(self.ambient_dim, np.concatenate([self.basis, vectors]), self.p)

    def intersection(self, other):
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        if self.contains_space(other):
            return other
        if other.contains_space(self):
            return self
        stacked = np.concatenate([self.basis, other.basis])
        lk = left_kernel(stacked, self.p)
        if lk.shape[0] == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        vecs = (lk[:, : self.dim] @ self.basis) % self.p
        return Subspace(self.ambient_dim, vecs, self.p)

    __and__ = intersection

    def quotient_complement(self, sub):
        """Canonical representatives in self extending a basis of sub (∩ self) to one of self."""
        self._check(sub)
        if self.dim == 0:
            return np.zeros((0, self.ambient_dim), dtype=np.int64)
        red = sub.reduce(self.basis)
        r, _ = rref_pivots(red, self.p)
        return r

    def complement_coordinates(self):
        """Unit-vector positions not used as pivots: a standard complement."""
        used = set(self.pivots)
        return [i for i in range(self.ambient_dim) if i not in used]

    def image(self, matrix):
        """Image of this space under v -> v @ matrix."""
        matrix = np.asarray(matrix, dtype=np.int64)
        if self.dim == 0:
            return Subspace.zero(matrix.shape[1], self.p)
        return Subspace(matrix.shape[1], (self.basis @ matrix) % self.p, self.p)


def gaussian_binomial(n, k, q):
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(n, q):
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def _echelon_forms(n, k, p):
    """All k x n reduced echelon matrices of rank k, in lexicographic pivot order."""
    if k == 0:
        yield np.zeros((0, n), dtype=np.int64)
        return
    for piv in itertools.combinations(range(n), k):
        pivset = set(piv)
        free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in pivset]
        base = np.zeros((k, n), dtype=np.int64)
        for r, c in enumerate(piv):
            base[r, c] = 1
        for vals in itertools.product(range(p), repeat=len(free)):
            m = base.copy()
            for (r, c), v in zip(free, vals):
                m[r, c] = v
            yield m


def enumerate_subspaces(ambient, dim, cap=DEFAULT_CAP, containing=None):
    """Yield every dim-dimensional subspace of ambient exactly once.

    With containing=L (L inside ambient) the subspaces of ambient/L of dimension
    dim - dim(L) are lifted, i.e. every dim-dimensional subspace above L.
    """
    p = ambient.p
    base = containing if containing is not None else Subspace.zero(ambient.ambient_dim, p)
    if not ambient.contains_space(base):
        raise ValueError("containing space is not inside ambient")
    reps = ambient.quotient_complement(base)
    r = reps.shape[0]
    k = dim - base.dim
    if k < 0 or k > r:
        return
    total = gaussian_binomial(r, k, p)
    if total > cap:
        raise EnumerationTooLarge(total, cap)
    for m in _echelon_forms(r, k, p):
        vecs = (m @ reps) % p if k else np.zeros((0, ambient.ambient_dim), dtype=np.int64)
        yield base.span_with(vecs)


def enumerate_all_subspaces(ambient, cap=DEFAULT_CAP, containing=None, max_extra=None):
    """Every subspace between containing (default 0) and ambient, by increasing dimension."""
    p = ambient.p
    base_dim = containing.dim if containing is not None else 0
    top = ambient.dim - base_dim
    if max_extra is not None:
        top = min(top, max_extra)
    total = sum(gaussian_binomial(ambient.dim - base_dim, k, p) for k in range(top + 1))
    if total > cap:
        raise EnumerationTooLarge(total, cap)
    for k in range(top + 1):
        yield from enumerate_subspaces(ambient, base_dim + k, cap=cap, containing=containing)


def projective_points(n, p):
    """One representative per line of F_p^n (leading nonzero entry 1)."""
    for lead in range(n):
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            v = np.zeros(n, dtype=np.int64)
            v[lead] = 1
            v[lead + 1:] = tail
            yield v


def projective_point_array(n, p):
    """All projective representatives stacked as a (count, n) array."""
    pts = list(projective_points(n, p))
    if not pts:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(pts, dtype=np.int64)
