"""Predimension, strong subalgebras, self-sufficient closure and the induced geometry.

The enumerations below only visit intermediate subalgebras C whose top part is
as small as possible, C_3 = A_3 + [C_1, C_2] (and C_2 = A_2 + [C_1, C_1] when
only delta_2 matters).  Enlarging the top of C by t dimensions raises delta by
exactly t and raises o-dim(C/A) by t, so every minimum and every violation is
already attained on these candidates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    GradedSubalgebra,
    canonical_pair,
    extract_o_system,
    generate_from_parts,
    generated_subalgebra,
    ideal_closure,
    whole,
)
from .fplinalg import (
    DEFAULT_CAP,
    EnumerationTooLarge,
    Subspace,
    count_subspaces,
    enumerate_all_subspaces,
    gaussian_binomial,
    kernel_basis,
    projective_point_array,
)
from .freelie import standard_free


@dataclass(frozen=True)
class DeltaProfile:
    o_dims: tuple
    ideal_dims: tuple
    delta_2: int
    delta_3: int | None

    @property
    def delta(self):
        return self.delta_3 if self.delta_3 is not None else self.delta_2

    def render(self):
        o = ",".join(map(str, self.o_dims))
        ideal = ",".join(map(str, self.ideal_dims))
        s = f"o=({o}) ideal=({ideal}) d2={self.delta_2}"
        if self.delta_3 is not None:
            s += f" d3={self.delta_3}"
        return s


@dataclass
class StrongReport:
    holds: bool
    witness: GradedSubalgebra | None = None
    level: int | None = None
    witness_delta: int | None = None
    base_delta: int | None = None
    mode: str = "exact"
    checked: int = 0

    def __bool__(self):
        return self.holds


def profile_from_pair(cp, c):
    o = tuple(cp.o_dims)
    ideal = tuple(cp.ideal_dims)
    d2 = sum(o[:2]) - (ideal[0] if ideal else 0)
    d3 = sum(o[:3]) - sum(ideal[:2]) if c >= 3 else None
    return DeltaProfile(o, ideal, d2, d3)


def delta(a):
    """DeltaProfile of an algebra or subalgebra, from its canonical pair.

    For class 3 the value is cross-checked against the closed form through the
    degree-2 kernel (see fast_delta).
    """
    a = whole(a)
    cp = canonical_pair(a)
    prof = profile_from_pair(cp, a.parent.c)
    fd2, fd3 = fast_delta(a)
    if fd2 != prof.delta_2 or (prof.delta_3 is not None and fd3 != prof.delta_3):
        raise AssertionError(f"delta routes disagree: {prof} vs {(fd2, fd3)}")
    return prof


def relative_profile(n, m):
    """o-dims and ideal-dims of n over m, with the naive difference (diagnostic only)."""
    n = whole(n)
    cp = canonical_pair(n, m)
    alg = n.parent
    free = cp.free
    # H: subalgebra of the free algebra generated by the generators lifting m's o-system
    h_parts = []
    for d in range(1, alg.c + 1):
        rows = []
        for gi, g in enumerate(free.generators):
            if g.degree == d and g.name in cp.over_names:
                rows.append(free.generator(g.name).part(d))
        h_parts.append(Subspace(free.dim(d), rows, free.p))
    h = generate_from_parts(free, h_parts)
    rel_o = []
    for d in range(1, alg.c + 1):
        rel_o.append(sum(1 for dd, _ in extract_o_system(n, m) if dd == d))
    ideal = []
    ys = {}
    for d in range(2, alg.c + 1):
        seeds = {e: (cp.kernel[e] & h.part(e)).basis for e in range(1, d + 1)}
        for e, rows in ys.items():
            seeds[e] = np.concatenate([seeds[e], rows]) if rows.shape[0] else seeds[e]
        low = ideal_closure(free, seeds)[d]
        reps = cp.kernel[d].quotient_complement(low)
        ys[d] = reps
        ideal.append(reps.shape[0])
    return {"o_dims": tuple(rel_o), "ideal_dims": tuple(ideal), "naive": sum(rel_o) - sum(ideal)}


# fast evaluation


def _kappa(m, c1):
    """dim F(C_1)_3 - dim [K_2, F_1] for the degree-2 kernel K_2 of C_1."""
    def compute():
        k = c1.dim
        if k < 2:
            return 0
        free = standard_free(m.p, 3, (k, 0, 0))
        rows = m.bracket_rows(1, c1.basis, 1, c1.basis).reshape(k, k, m.dim(2))
        phi = np.zeros((free.dim(2), m.dim(2)), dtype=np.int64)
        for mono in free.hall[2]:
            a = int(mono.left.tree)
            b = int(mono.right.tree)
            phi[mono.index] = rows[_letter_pos(free, a), _letter_pos(free, b)]
        if m.dim(2):
            k2 = kernel_basis(phi.T, m.p)
        else:
            k2 = free.full(2)
        if k2.dim == 0:
            return free.dim(3)
        br = free.bracket_rows(2, k2.basis, 1, np.eye(k, dtype=np.int64))
        return free.dim(3) - Subspace(free.dim(3), br, m.p).dim

    return m.cached(("kappa", c1.key), compute)


def _letter_pos(free, gi):
    """Degree-1 coordinate index of generator number gi of the free algebra."""
    for mono in free.hall[1]:
        if mono.tree == gi:
            return mono.index
    raise KeyError(gi)


def fast_delta_parts(m, c1, c2, c3):
    """(delta_2, delta_3) of the subalgebra with the given parts, via closed forms."""
    k = c1.dim
    d2 = k + c2.dim - k * (k - 1) // 2
    if m.c < 3:
        return d2, None
    r = m.bracket_spaces(1, c1, 1, c1).dim if k >= 2 else 0
    d3 = d2 + c3.dim - _kappa(m, c1) - k * (c2.dim - r)
    return d2, d3


def fast_delta(a):
    a = whole(a)
    m = a.parent
    if m.c == 2:
        return fast_delta_parts(m, a.part(1), a.part(2), None)
    return fast_delta_parts(m, a.part(1), a.part(2), a.part(3))


# enumeration of intermediate subalgebras


def _scan(a, ambient, need_top, bound_k, cap):
    """Yield (C_1, C_2, C_3) for minimal-top subalgebras A <= C <= ambient."""
    m = a.parent
    c = m.c
    amb = whole(ambient) if ambient is not None else whole(m)
    rel1 = amb.part(1).dim - a.part(1).dim
    rel2 = amb.part(2).dim - a.part(2).dim if c >= 2 else 0
    k1 = rel1 if bound_k is None else min(rel1, bound_k)
    n1 = sum(gaussian_binomial(rel1, j, m.p) for j in range(k1 + 1))
    n2 = count_subspaces(rel2, m.p) if need_top else 1
    # with C_1 = 0 both deltas grow with C_2, so only the least C_2 is scanned
    total = (n1 - 1) * n2 + 1 if a.part(1).dim == 0 else n1 * n2
    if total > cap:
        raise EnumerationTooLarge(total, cap, "intermediate subalgebras")
    for c1 in enumerate_all_subspaces(amb.part(1), cap=cap, containing=a.part(1), max_extra=k1):
        low2 = a.part(2) + m.bracket_spaces(1, c1, 1, c1) if c >= 2 else None
        e1 = c1.dim - a.part(1).dim
        if not need_top or c < 3 or c1.dim == 0:
            c3 = (a.part(3) + m.bracket_spaces(1, c1, 2, low2)) if c >= 3 else None
            yield c1, low2, c3
            continue
        left = None if bound_k is None else bound_k - e1
        for c2 in enumerate_all_subspaces(amb.part(2), cap=cap, containing=low2, max_extra=left):
            c3 = a.part(3) + m.bracket_spaces(1, c1, 2, c2)
            yield c1, c2, c3


def _make(m, c1, c2, c3):
    parts = [c1, c2, c3][: m.c]
    return GradedSubalgebra(m, parts)


def is_strong(a, ambient=None, level=None, bound_k=None, cap=DEFAULT_CAP, only_top=False, best_witness=False):
    """Decide A <=_level ambient (exactly, or only over C with o-dim(C/A) <= bound_k).

    A <=_i M means delta_j(A) <= delta_j(C) for every intermediate C and every
    2 <= j <= i; only_top restricts to j = i.
    """
    m = a.parent
    c = m.c
    level = c if level is None else level
    if level not in (2, 3) or level > c:
        raise ValueError(f"level must be 2..{c}")
    js = [level] if only_top else list(range(2, level + 1))
    base = fast_delta(a)
    mode = "exact" if bound_k is None else f"bounded({bound_k})"
    need_top = 3 in js
    best = None
    count = 0
    for c1, c2, c3 in _scan(a, ambient, need_top, bound_k, cap):
        count += 1
        d2, d3 = fast_delta_parts(m, c1, c2, c3)
        vals = {2: d2, 3: d3}
        for j in js:
            if vals[j] < base[j - 2]:
                w = _make(m, c1, c2, c3)
                cand = (w.total_dim, w.key)
                if not best_witness:
                    return StrongReport(False, w, j, vals[j], base[j - 2], mode, count)
                if best is None or cand < best[0]:
                    best = (cand, w)
                break
    if best is not None:
        w = best[1]
        d2, d3 = fast_delta(w)
        vals = {2: d2, 3: d3}
        j = next(j for j in js if vals[j] < base[j - 2])
        val = vals[j]
        return StrongReport(False, w, j, val, base[j - 2], mode, count)
    return StrongReport(True, None, None, None, None, mode, count)


def is_strong_bruteforce(a, ambient=None, level=None):
    """Reference check over every intermediate subalgebra (tiny algebras only)."""
    m = a.parent
    level = m.c if level is None else level
    base = delta(a)
    for cand in all_subalgebras_between(a, ambient):
        prof = delta(cand)
        if prof.delta_2 < base.delta_2:
            return False
        if level == 3 and prof.delta_3 < base.delta_3:
            return False
    return True


def all_subalgebras_between(a, ambient=None, cap=DEFAULT_CAP):
    """Every graded subalgebra C with a <= C <= ambient (no minimal-top shortcut)."""
    m = a.parent
    amb = whole(ambient) if ambient is not None else whole(m)
    seen = set()
    for c1 in enumerate_all_subspaces(amb.part(1), cap=cap, containing=a.part(1)):
        low2 = a.part(2) + m.bracket_spaces(1, c1, 1, c1)
        for c2 in enumerate_all_subspaces(amb.part(2), cap=cap, containing=low2):
            if m.c < 3:
                out = GradedSubalgebra(m, [c1, c2])
                if out.key not in seen:
                    seen.add(out.key)
                    yield out
                continue
            low3 = a.part(3) + m.bracket_spaces(1, c1, 2, c2)
            for c3 in enumerate_all_subspaces(amb.part(3), cap=cap, containing=low3):
                out = GradedSubalgebra(m, [c1, c2, c3])
                if out.key not in seen:
                    seen.add(out.key)
                    yield out


def _delta_at(m, level, c1, c2, c3):
    d2, d3 = fast_delta_parts(m, c1, c2, c3)
    return d2 if level == 2 else d3


def css(a, ambient=None, level=None, bound_k=None, cap=DEFAULT_CAP, only_top=False):
    """Self-sufficient closure: the least level-strong subalgebra containing A.

    Each round takes the delta_level-minimal extension of the current candidate
    (ties: smaller total dimension, then smaller echelon key) and stops once it
    is strong; otherwise it continues from the best violating extension.
    With bound_k this is a bounded fixed point, an approximation.
    """
    m = a.parent
    level = m.c if level is None else level
    cur = a
    while True:
        need_top = level == 3
        best = None
        for c1, c2, c3 in _scan(cur, ambient, need_top, bound_k, cap):
            val = _delta_at(m, level, c1, c2, c3)
            w = _make(m, c1, c2, c3)
            cand = (val, w.total_dim, w.key)
            if best is None or cand < best[0]:
                best = (cand, w)
        cand = best[1]
        rep = is_strong(cand, ambient, level, bound_k, cap, only_top, best_witness=True)
        if rep.holds:
            return cand
        cur = rep.witness


def css2(a, ambient=None, bound_k=None, cap=DEFAULT_CAP):
    return css(a, ambient, level=2, bound_k=bound_k, cap=cap)


# class membership


@dataclass
class KcReport:
    member: bool
    condition1: bool
    condition2: bool | None
    method: str
    violations: list = field(default_factory=list)
    numeric: bool | None = None
    definitional: bool | None = None

    def __bool__(self):
        return self.member


def zero_divisor_scan(m, limit=None):
    """Homogeneous zero divisors [x, y] = 0 with y not a multiple of x.

    Returns a list of (i, x, j, y) witnesses (coordinates), at most limit of them.
    """
    out = []
    if m.dim(1) == 0:
        return out
    pts = projective_point_array(m.dim(1), m.p)
    pairs = [(1, 1)] + ([(1, 2)] if m.c >= 3 else [])
    for x in pts:
        for i, j in pairs:
            if m.dim(j) == 0:
                continue
            t = m.table[(i, j)]
            ad = (x @ t.reshape(t.shape[0], -1)).reshape(t.shape[1], t.shape[2]) % m.p
            if ad.shape[1] == 0:
                ker = Subspace.full(m.dim(j), m.p)
            else:
                ker = kernel_basis(ad.T, m.p)
            allowed = 1 if j == 1 else 0
            if ker.dim > allowed:
                witness = next(v for v in ker.basis if not (j == 1 and _proportional(v, x, m.p)))
                out.append((i, x.copy(), j, witness.copy()))
                if limit is not None and len(out) >= limit:
                    return out
    return out


def _proportional(v, x, p):
    return Subspace(len(x), [x], p).contains(v)


def _numeric_condition(m, skip_rank_one, cap):
    """delta(E) >= min(2, o-dim(E)) and delta_2(E) >= min(2, o_1 + o_2) for every E.

    For fixed E_1 of dimension k >= 2 write E_2 = R + W with R = [E_1, E_1]
    and W inside a complement V of R.  With mu: E_1 (x) V -> M_3/[E_1, R] the
    bracket, delta_3(E) = base + dim W - dim(ker mu & E_1 (x) W).  The minimum
    over W equals the minimum over subspaces S of ker mu of
    dim supp(S) - dim S, where supp(S) is the span of the V-components; the
    scan runs over whichever of the two families is smaller.
    """
    c = m.c
    violations = []
    full1, full2 = whole(m).part(1), whole(m).part(2)
    total = 0
    for e1 in enumerate_all_subspaces(full1, cap=cap):
        k = e1.dim
        if k == 0 or (k == 1 and skip_rank_one):
            continue
        rr = m.bracket_spaces(1, e1, 1, e1)
        r = rr.dim
        d2 = k + r - k * (k - 1) // 2
        if d2 < min(2, k):
            top = [m.bracket_spaces(1, e1, 2, rr)] if c >= 3 else []
            violations.append(("delta2", GradedSubalgebra(m, [e1, rr] + top)))
            return violations
        if c < 3:
            continue
        y = m.bracket_spaces(1, e1, 2, rr)
        base = d2 + y.dim - _kappa(m, e1)
        vb = full2.quotient_complement(rr)
        n = vb.shape[0]
        if base < min(2, k):
            violations.append(("delta3", GradedSubalgebra(m, [e1, rr, y])))
            return violations
        if n == 0:
            continue
        if m.dim(3):
            mu = y.reduce(m.bracket_rows(1, e1.basis, 2, vb))
            ker = kernel_basis(mu.T, m.p)
        else:
            ker = Subspace.full(k * n, m.p)
        if base - ker.dim >= 2:
            continue
        count_s = count_subspaces(ker.dim, m.p)
        count_w = count_subspaces(n, m.p)
        total += min(count_s, count_w)
        if total > cap:
            raise EnumerationTooLarge(total, cap, "numeric membership candidates")
        w = None
        if count_s <= count_w:
            for s in enumerate_all_subspaces(Subspace.full(ker.dim, m.p), cap=cap):
                if s.dim == 0:
                    continue
                tens = (s.basis @ ker.basis) % m.p
                supp = Subspace(n, tens.reshape(-1, n), m.p)
                if base + supp.dim - s.dim < 2:
                    w = supp
                    break
        else:
            for cand in enumerate_all_subspaces(Subspace.full(n, m.p), cap=cap):
                if cand.dim == 0:
                    continue
                rows = y.reduce(m.bracket_rows(1, e1.basis, 2, (cand.basis @ vb) % m.p))
                img = Subspace(m.dim(3), rows, m.p).dim
                if base + img - (k - 1) * cand.dim < 2:
                    w = cand
                    break
        if w is not None:
            e2 = rr + Subspace(m.dim(2), (w.basis @ vb) % m.p, m.p)
            violations.append(("delta3", GradedSubalgebra(m, [e1, e2, m.bracket_spaces(1, e1, 2, e2)])))
            return violations
    return violations


def small_subalgebras(m, cap=DEFAULT_CAP):
    """All subalgebras generated by one or two homogeneous elements."""
    pts = []
    for d in range(1, m.c + 1):
        n = m.dim(d)
        count = (m.p**n - 1) // (m.p - 1)
        if count > cap:
            raise EnumerationTooLarge(count, cap, "projective points")
        pts.extend((d, v) for v in projective_point_array(n, m.p))
    if len(pts) * (len(pts) + 1) // 2 > cap:
        raise EnumerationTooLarge(len(pts) * (len(pts) + 1) // 2, cap, "generator pairs")
    seen = set()
    out = []
    for (d, v) in pts:
        s = generated_subalgebra(m, [m.homogeneous(d, v)])
        if s.key not in seen:
            seen.add(s.key)
            out.append(s)
    for (d, v), (e, w) in itertools.combinations(pts, 2):
        s = generated_subalgebra(m, [m.homogeneous(d, v), m.homogeneous(e, w)])
        if s.key not in seen:
            seen.add(s.key)
            out.append(s)
    return out


def kc_membership(m, method="auto", cap=DEFAULT_CAP, definitional_cap=20000):
    """Membership in the amalgamation class of the algebra's class.

    Condition (1) is the zero-divisor scan.  Condition (2) is checked either by
    testing strongness of every subalgebra with o-dim <= 2 ("definitional"),
    by the numeric criterion delta(E) >= min(2, o-dim E) ("numeric"), or both.
    "auto" runs both when the definitional route is small enough.
    """
    zd = zero_divisor_scan(m, limit=1)
    cond1 = not zd
    violations = [("zero-divisor", w) for w in zd]
    numeric = None
    definitional = None
    if method in ("auto", "both", "numeric"):
        nv = _numeric_condition(m, skip_rank_one=cond1, cap=cap)
        numeric = not nv
        violations.extend(("numeric", w) for w in nv[:1])
    run_def = method in ("both", "definitional")
    if method == "auto":
        try:
            est = _definitional_estimate(m)
        except EnumerationTooLarge:
            est = definitional_cap + 1
        run_def = est <= definitional_cap
    if run_def:
        definitional = True
        for s in small_subalgebras(m, cap=cap):
            if s.total_dim == 0:
                continue
            rep = is_strong(s, level=m.c, cap=cap)
            if not rep.holds:
                definitional = False
                violations.append(("not-strong", s, rep.witness))
                break
    cond2 = definitional if definitional is not None else numeric
    used = "+".join(x for x, v in (("definitional", definitional), ("numeric", numeric)) if v is not None)
    return KcReport(cond1 and bool(cond2), cond1, cond2, used, violations, numeric, definitional)


def _definitional_estimate(m):
    n = sum((m.p ** m.dim(d) - 1) // (m.p - 1) for d in range(1, m.c + 1))
    inter = count_subspaces(m.dim(1), m.p) * (count_subspaces(m.dim(2), m.p) if m.c >= 3 else 1)
    return n * (n + 1) // 2 * inter


# geometry


def geometry_d(h, ambient=None, cap=DEFAULT_CAP):
    """d(H) = delta(CSS(H)) inside the ambient algebra."""
    cl = css(h, ambient, level=h.parent.c, cap=cap)
    return fast_delta(cl)[1 if h.parent.c >= 3 else 0]


def cl_member(a, h, ambient=None, cap=DEFAULT_CAP):
    """a is in cl(H) iff d(<H a>) = d(H)."""
    deg = a.degree
    if a.is_zero():
        return True
    if deg not in (1, 2):
        raise ValueError("closure is defined on degree-1 and degree-2 elements")
    if h.contains(a):
        return True
    ha = h.join(generated_subalgebra(h.parent, [a]))
    return geometry_d(ha, ambient, cap) == geometry_d(h, ambient, cap)


def delta_rel(a, c):
    """delta(A/C) = delta(<A C>) - delta(C)."""
    ac = a.join(c)
    return fast_delta(ac)[-1 if a.parent.c >= 3 else 0] - fast_delta(c)[-1 if a.parent.c >= 3 else 0]


def delta2_rel(a, c):
    ac = a.join(c)
    return fast_delta(ac)[0] - fast_delta(c)[0]


def _d(a):
    v = fast_delta(a)
    return v[1] if a.parent.c >= 3 else v[0]


def single_generator(u, v):
    """An element a of degree 1 or 2 with V = <U a>, or None."""
    m = u.parent
    sysm = extract_o_system(v, u)
    if len(sysm) != 1:
        return None
    d, vec = sysm[0]
    if d not in (1, 2):
        return None
    return m.homogeneous(d, vec)


def has_equation(u, a):
    """Some nonzero u1 in U with [u1, a] in U."""
    m = u.parent
    d = a.degree
    for i in range(1, m.c - d + 1):
        ui = u.part(i)
        if ui.dim == 0:
            continue
        br = m.bracket_rows(i, ui.basis, d, a.part(d))
        red = u.part(i + d).reduce(br)
        if Subspace(m.dim(i + d), red, m.p).dim < ui.dim:
            return True
    return False


def classify_extension(u, v, ambient=None, cap=DEFAULT_CAP):
    """transcendental | algebraic | minimal_prealgebraic | composite for U < V."""
    if not v.contains(u):
        raise ValueError("U is not contained in V")
    if v == u:
        raise ValueError("V equals U")
    a = single_generator(u, v)
    if a is not None:
        gain = geometry_d(v, ambient, cap) - geometry_d(u, ambient, cap)
        if gain == 1:
            return "transcendental"
        if gain == 0 and has_equation(u, a):
            return "algebraic"
        return "composite"
    if _d(v) - _d(u) != 0:
        return "composite"
    for w in h3_between(u, v, cap):
        if w == u or w == v:
            continue
        if _d(w) - _d(u) <= 0:
            return "composite"
    return "minimal_prealgebraic"


def h3_between(u, v, cap=DEFAULT_CAP):
    """Subalgebras W = <W_1 W_2> with U <= W <= V."""
    m = u.parent
    seen = set()
    for w1 in enumerate_all_subspaces(v.part(1), cap=cap, containing=u.part(1)):
        low2 = u.part(2) + m.bracket_spaces(1, w1, 1, w1)
        for w2 in enumerate_all_subspaces(v.part(2), cap=cap, containing=low2):
            w = generate_from_parts(m, [w1, w2] + [m.zero_space(3)] * (m.c - 2))
            if not w.contains(u) or w.key in seen:
                continue
            seen.add(w.key)
            yield w
