"""A 3-nilpotent algebra over F_p (p > 3) seen as a group of exponent p.

The product is the truncated Campbell-Baker-Hausdorff series

    x o y = x + y + 1/2 [x,y] + 1/12 [x,[x,y]] + 1/12 [y,[y,x]]

and the Lie operations are recovered from o, powers and group commutators.
The coefficients used for the recovery are solved for in the free algebra on
two generators rather than taken on trust; see ``solve_recovery_coefficients``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import as_presented
from .fplinalg import EnumerationTooLarge, PrimeField, solve
from .freelie import LieElement, build_free_algebra


class ViewMismatch(ValueError):
    pass


class GroupView:
    def __init__(self, algebra):
        m = algebra
        if m.p < 5:
            raise ValueError("the group view needs p > 3")
        if m.c not in (2, 3):
            raise ValueError("class must be 2 or 3")
        self.algebra = m
        self.p = m.p
        f = PrimeField(m.p)
        self.inv2 = f.frac(1, 2)
        self.inv12 = f.frac(1, 12)
        self.inv4 = f.frac(1, 4)
        self._coef = None

    def __repr__(self):
        return f"GroupView(p={self.p}, dims={self.algebra.dims})"

    def element(self, value):
        if isinstance(value, LieElement):
            if value.parent is not self.algebra:
                raise ViewMismatch("element of another algebra")
            return GroupElement(self, value)
        return GroupElement(self, self.algebra.element(np.asarray(value, dtype=np.int64) % self.p))

    def batch(self, rows):
        """Many elements at once, one coordinate row each."""
        rows = np.asarray(rows, dtype=np.int64) % self.p
        if rows.ndim != 2 or rows.shape[1] != self.algebra.total_dim:
            raise ValueError("expected rows of algebra coordinates")
        return GroupBatch(self, rows)

    def identity(self):
        return GroupElement(self, self.algebra.zero())

    def _check(self, *xs):
        kind = type(xs[0])
        for x in xs:
            if not isinstance(x, (GroupElement, GroupBatch)) or x.view is not self:
                raise ViewMismatch("element of another group view")
            if type(x) is not kind:
                raise ViewMismatch("cannot mix single elements and batches")

    # Lie operations on values: LieElement for single elements, row arrays for batches

    def _br(self, a, b):
        if isinstance(a, LieElement):
            return a.bracket(b)
        return bracket_rows_pairwise(self.algebra, a, b)

    def _lin(self, *terms):
        out = None
        for k, v in terms:
            t = k * v if isinstance(v, LieElement) else (int(k) % self.p) * v
            out = t if out is None else out + t
        return out if isinstance(out, LieElement) else out % self.p

    def _wrap(self, like, value):
        return GroupElement(self, value) if isinstance(like, GroupElement) else GroupBatch(self, value)

    def native_bracket(self, x, y):
        """[x, y] computed in the algebra (for comparisons)."""
        self._check(x, y)
        return self._wrap(x, self._br(x.value, y.value))

    def native_sum(self, x, y):
        self._check(x, y)
        return self._wrap(x, self._lin((1, x.value), (1, y.value)))

    # group operations

    def mul(self, x, y):
        self._check(x, y)
        a, b = x.value, y.value
        ab = self._br(a, b)
        out = self._lin((1, a), (1, b), (self.inv2, ab), (self.inv12, self._br(a, ab)),
                        (self.inv12, self._br(b, self._br(b, a))))
        return self._wrap(x, out)

    def inv(self, x):
        self._check(x)
        return self._wrap(x, self._lin((-1, x.value)))

    def pow(self, x, n):
        """x o x o ... o x (n factors); negative n uses the inverse."""
        self._check(x)
        if n < 0:
            x, n = self.inv(x), -n
        out = self._wrap(x, self._lin((0, x.value)))
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def commutator(self, x, y):
        """x^-1 o y^-1 o x o y."""
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    group_commutator = commutator

    @property
    def coefficients(self):
        if self._coef is None:
            self._coef = solve_recovery_coefficients(self.p)
        return self._coef

    def recover_bracket(self, x, y):
        """[x, y] from o, powers and commutators only.

        With c = [x,y]^G = [x,y] + a[[x,y],x] + b[[x,y],y] and the central
        elements [c,x]^G = [[x,y],x], [c,y]^G = [[x,y],y]:
        [x,y] = c o ([c,x]^G)^(-a) o ([c,y]^G)^(-b).
        """
        a, b = self.coefficients.commutator[1:]
        c = self.commutator(x, y)
        cx = self.commutator(c, x)
        cy = self.commutator(c, y)
        return self.mul(self.mul(c, self.pow(cx, (-a) % self.p)), self.pow(cy, (-b) % self.p))

    def recover_sum(self, x, y):
        """x + y = x o y o [x,y]^s o [x,[x,y]]^t o [y,[x,y]]^u, brackets recovered as above."""
        s, t, u = self.coefficients.sum
        xy = self.recover_bracket(x, y)
        xxy = self.recover_bracket(x, xy)
        yxy = self.recover_bracket(y, xy)
        out = self.mul(x, y)
        for g, n in ((xy, s), (xxy, t), (yxy, u)):
            out = self.mul(out, self.pow(g, n))
        return out

    def printed_commutator(self, x, y):
        """The closed form [x,y] + [[x,y],x] + [[x,y],y] (a hypothesis under test)."""
        self._check(x, y)
        a, b = x.value, y.value
        ab = self._br(a, b)
        return self._wrap(x, self._lin((1, ab), (1, self._br(ab, a)), (1, self._br(ab, b))))

    def printed_recover_bracket(self, x, y):
        """[x,y]^G o -([[x,y]^G,x]^G o [[x,y]^G,y]^G) (a hypothesis under test)."""
        c = self.commutator(x, y)
        return self.mul(c, self.inv(self.mul(self.commutator(c, x), self.commutator(c, y))))

    def printed_recover_sum(self, x, y):
        """The seven-factor expression for x + y (a hypothesis under test); brackets via recovery."""
        f = PrimeField(self.p)
        xy = self.recover_bracket(x, y)
        xxy = self.recover_bracket(x, xy)
        yyx = self.recover_bracket(y, self.recover_bracket(y, x))
        yxy = self.recover_bracket(y, xy)
        out = self.mul(x, y)
        for g, n in ((xy, f.frac(-1, 2)), (xxy, f.frac(-1, 12)), (yyx, f.frac(-1, 12)), (xxy, f.frac(1, 4)), (yxy, f.frac(1, 4))):
            out = self.mul(out, self.pow(g, n))
        return out

    def table(self, cap=5**4):
        """Exhaustive multiplication table of element indices (order <= cap)."""
        return MultiplicationTable(self, cap)


def bracket_rows_pairwise(m, a, b):
    """Row-wise brackets [a_r, b_r] of two coordinate arrays."""
    out = np.zeros_like(a)
    for (i, j), t in m.table.items():
        if t.size == 0:
            continue
        ai, bj = a[:, m.degree_slice(i)], b[:, m.degree_slice(j)]
        outer = (ai[:, :, None] * bj[:, None, :]).reshape(len(a), -1)
        out[:, m.degree_slice(i + j)] += outer @ t.reshape(-1, t.shape[2])
    return out % m.p


@dataclass(frozen=True)
class GroupElement:
    view: GroupView
    value: LieElement

    def __mul__(self, other):
        return self.view.mul(self, other)

    def __invert__(self):
        return self.view.inv(self)

    def __pow__(self, n):
        return self.view.pow(self, n)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.view is other.view and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    @property
    def coords(self):
        return self.value.coords

    def is_identity(self):
        return self.value.is_zero()


@dataclass(frozen=True, eq=False)
class GroupBatch:
    """N group elements stored as an (N, dim) coordinate array."""

    view: GroupView
    value: np.ndarray

    def __mul__(self, other):
        return self.view.mul(self, other)

    def __invert__(self):
        return self.view.inv(self)

    def __pow__(self, n):
        return self.view.pow(self, n)

    def __len__(self):
        return self.value.shape[0]

    def __getitem__(self, k):
        return self.view.element(self.value[k])

    def equal_rows(self, other):
        """Boolean array: row k of self equals row k of other."""
        return (self.value == other.value).all(axis=1)

    def identity_rows(self):
        return ~self.value.any(axis=1)


class MultiplicationTable:
    """Elements indexed by their coordinate vectors read in base p."""

    def __init__(self, view, cap):
        m = view.algebra
        n = m.total_dim
        order = m.p**n
        if order > cap:
            raise EnumerationTooLarge(order, cap, "group elements")
        self.view = view
        self.order = order
        self.vectors = np.array(list(itertools.product(range(m.p), repeat=n)), dtype=np.int64).reshape(order, n)
        self._weights = m.p ** np.arange(n - 1, -1, -1, dtype=np.int64)
        t = np.zeros((order, order), dtype=np.int64)
        right = view.batch(self.vectors)
        for i in range(order):
            left = view.batch(np.repeat(self.vectors[i][None, :], order, axis=0))
            t[i] = (left * right).value @ self._weights
        self.mul = t
        self.inverse = ((-self.vectors) % m.p) @ self._weights

    def index(self, coords):
        return int(np.asarray(coords, dtype=np.int64) @ self._weights)

    def associativity_failures(self, triples=None):
        """Count of (a, b, c) with (ab)c != a(bc); all triples unless an index array is given."""
        t = self.mul
        if triples is None:
            idx = np.arange(self.order)
            bad = 0
            for a in idx:
                left = t[t[a][:, None], idx[None, :]]
                right = t[a][t]
                bad += int((left != right).sum())
            return bad
        a, b, c = triples.T
        return int((t[t[a, b], c] != t[a, t[b, c]]).sum())


@dataclass(frozen=True)
class RecoveryCoefficients:
    p: int
    commutator: tuple
    sum: tuple
    printed_commutator_holds: bool
    printed_recover_bracket_holds: bool
    printed_recover_sum_holds: bool

    def render(self):
        def fmt(t):
            return "(" + ",".join(str(v) for v in t) + ")"

        return (f"p={self.p} commutator={fmt(self.commutator)} sum={fmt(self.sum)} "
                f"printed_commutator={'ok' if self.printed_commutator_holds else 'FAILS'} "
                f"printed_recover_bracket={'ok' if self.printed_recover_bracket_holds else 'FAILS'} "
                f"printed_recover_sum={'ok' if self.printed_recover_sum_holds else 'FAILS'}")


@lru_cache(maxsize=None)
def solve_recovery_coefficients(p):
    """Solve for the recovery coefficients in the free class-3 algebra on x, y.

    commutator: (1, a, b) with [x,y]^G = [x,y] + a[[x,y],x] + b[[x,y],y].
    sum: (s, t, u) with x + y = x o y o s[x,y] o t[x,[x,y]] o u[y,[x,y]]; the
    left side minus x o y is linear in (s, t, u), so the system is linear.
    The printed formulas are then evaluated and compared.
    """
    free = build_free_algebra(p, 3, [("x", 1), ("y", 1)])
    view = GroupView(free)
    x, y = view.element(free.generator("x")), view.element(free.generator("y"))
    xv, yv = x.value, y.value
    xy = xv.bracket(yv)
    basis = [xy, xy.bracket(xv), xy.bracket(yv)]
    rows = np.array([b.coords for b in basis], dtype=np.int64)
    comm = view.commutator(x, y).value
    sol = solve(rows, comm.coords, p)
    if sol is None:
        raise AssertionError("commutator is not in the span of the expected brackets")
    commutator = tuple(int(v) for v in sol)
    target = (xv + yv).coords
    base = view.mul(x, y).value
    cols = []
    for g in (xy, xv.bracket(xy), yv.bracket(xy)):
        # effect of o g with unit coefficient on base, minus base: linear in the coefficient here
        cols.append((view.mul(view.element(base), view.element(g)).value - base).coords)
    rows2 = np.array(cols, dtype=np.int64)
    sol2 = solve(rows2, (target - base.coords) % p, p)
    if sol2 is None:
        raise AssertionError("no recovery coefficients for the sum")
    s, t, u = (int(v) for v in sol2)
    view._coef = RecoveryCoefficients(p, commutator, (s, t, u), False, False, False)
    check = view.recover_sum(x, y).value == xv + yv and view.recover_bracket(x, y).value == xy
    if not check:
        raise AssertionError("solved recovery coefficients do not reproduce the operations")
    printed_c = view.printed_commutator(x, y).value == comm
    printed_b = view.printed_recover_bracket(x, y).value == xy
    printed_s = view.printed_recover_sum(x, y).value == xv + yv
    return RecoveryCoefficients(p, commutator, (s, t, u), printed_c, printed_b, printed_s)


def group_view(m):
    return GroupView(as_presented(m))
