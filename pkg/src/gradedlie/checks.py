"""Executable property suites.

Every suite returns a list of CheckResult lines.  Randomized suites take a
numpy Generator and a trial count and are deterministic in both.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import (
    GradedHom,
    GradedSubalgebra,
    NotAHomomorphism,
    PresentedAlgebra,
    as_presented,
    generate_from_parts,
    generated_subalgebra,
    isomorphism_search,
    materialize,
    random_element,
    relations_of,
    star,
    whole,
)
from .amalgam import (
    _sub_hom,
    amalgam_dims_formula,
    decompose_amalgam_claim,
    divisor_extend,
    divisor_extend_via_amalgam,
    extend_pair,
    free_adjoin_point,
    free_amalgam,
    functor_F,
    gamma,
    is_free_join,
    quotient_by,
    shared_divisor_problems,
    strong_amalgam,
)
from .bch import GroupView, solve_recovery_coefficients
from .fplinalg import (
    EnumerationTooLarge,
    Subspace,
    count_subspaces,
    enumerate_all_subspaces,
    gaussian_binomial,
    kernel_basis,
    projective_point_array,
    rank,
    rref,
)
from .freelie import build_free_algebra
from .generic import build_generic, chain_embedding, replay, standard_catalog
from .glaformat import fingerprint, parse_algebra, print_algebra
from .instances import (
    NoInstance,
    css2_of_random,
    random_homogeneous,
    random_k2_algebra,
    random_k3_algebra,
    random_star_k2,
    random_star_k2_wide,
    random_strong_extension,
    random_subalgebra,
    unsolved_problems,
)
from .predim import (
    all_subalgebras_between,
    css,
    delta,
    fast_delta,
    geometry_d,
    h3_between,
    is_strong,
    kc_membership,
    zero_divisor_scan,
)


@dataclass
class CheckResult:
    name: str
    trials: int
    failures: int
    wanted: int | None = None
    witness: str = ""
    note: str = ""

    @property
    def ok(self):
        return self.failures == 0 and (self.wanted is None or self.trials >= self.wanted)

    def render(self):
        s = f"{self.name}: {'PASS' if self.ok else 'FAIL'} trials={self.trials} failures={self.failures}"
        if self.wanted is not None and self.trials < self.wanted:
            s += f" wanted={self.wanted}"
        if self.note:
            s += f" {self.note}"
        if self.witness:
            s += f" witness={self.witness}"
        return s


class _Tally:
    def __init__(self, name, wanted=None):
        self.name = name
        self.wanted = wanted
        self.trials = 0
        self.failures = 0
        self.witness = ""
        self.notes = []

    def record(self, ok, witness=""):
        self.trials += 1
        if not ok:
            self.failures += 1
            if not self.witness:
                self.witness = witness
        return ok

    def add(self, trials, failures, witness=""):
        self.trials += trials
        self.failures += failures
        if failures and not self.witness:
            self.witness = witness

    def result(self):
        return CheckResult(self.name, self.trials, self.failures, self.wanted, self.witness, " ".join(self.notes))


def _d3(s):
    return fast_delta(s)[1]


def _d2(s):
    return fast_delta(s)[0]


# fp-linalg


def tensor_span_dims(degrees, c, p):
    """Dimensions of the Lie subalgebra generated by letters in the free associative algebra.

    Independent of the Hall basis: elements are dicts word -> coefficient and
    brackets are uv - vu.
    """
    n = len(degrees)

    def comm(u, v):
        out = {}
        for wu, cu in u.items():
            for wv, cv in v.items():
                out[wu + wv] = (out.get(wu + wv, 0) + cu * cv) % p
                out[wv + wu] = (out.get(wv + wu, 0) - cu * cv) % p
        return {w: x for w, x in out.items() if x}

    def basis(elems):
        words = sorted({w for e in elems for w in e})
        if not words or not elems:
            return []
        col = {w: k for k, w in enumerate(words)}
        mat = np.zeros((len(elems), len(words)), dtype=np.int64)
        for r, e in enumerate(elems):
            for w, x in e.items():
                mat[r, col[w]] = x
        red, rk = rref(mat, p)
        return [{words[k]: int(v) for k, v in enumerate(row) if v} for row in red[:rk]]

    layers = {}
    for d in range(1, c + 1):
        elems = [{(k,): 1} for k in range(n) if degrees[k] == d]
        for i in range(1, d):
            j = d - i
            if i > j:
                break
            for u in layers[i]:
                for v in layers[j]:
                    w = comm(u, v)
                    if w:
                        elems.append(w)
        layers[d] = basis(elems)
    return tuple(len(layers[d]) for d in range(1, c + 1))


def check_linear_algebra(rng, trials):
    t = _Tally("fp-linalg:subspace-counts")
    for n in range(0, 4):
        for p in (2, 3):
            brute = sum(1 for _ in enumerate_all_subspaces(Subspace.full(n, p), cap=10**6))
            t.record(brute == count_subspaces(n, p), f"n={n} p={p}")
            for k in range(n + 1):
                ks = sum(1 for s in enumerate_all_subspaces(Subspace.full(n, p), cap=10**6) if s.dim == k)
                t.record(ks == gaussian_binomial(n, k, p), f"n={n} k={k} p={p}")
    u = _Tally("fp-linalg:rank-nullity")
    for _ in range(trials):
        p = int(rng.choice([2, 3, 5, 7]))
        r, c = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        a = rng.integers(0, p, size=(r, c))
        k = kernel_basis(a.T, p) if r else None
        rk = rank(a, p)
        ok = k.dim == r - rk
        ok = ok and not ((k.basis @ a) % p).any()
        red, rk2 = rref(a, p)
        ok = ok and rk2 == rk and np.array_equal(rref(red, p)[0], red)
        u.record(ok, f"p={p} shape={a.shape}")
    return [t.result(), u.result()]


# free-lie


def check_witt_dims(max_total=4, p=5, c=3):
    """Per-degree dims of F(n x deg 1, m x deg 2) against the formula and the tensor-algebra oracle."""
    t = _Tally("free-lie:witt-dims")
    for n in range(0, max_total + 1):
        for m in range(0, max_total + 1 - n):
            gens = [(f"x{k}", 1) for k in range(n)] + [(f"z{k}", 2) for k in range(m)]
            free = build_free_algebra(p, c, gens)
            formula = (n, m + n * (n - 1) // 2, (n**3 - n) // 3 + n * m)
            oracle = tensor_span_dims([1] * n + [2] * m, c, p)
            t.record(free.dims == formula == oracle, f"n={n} m={m} got={free.dims} formula={formula} oracle={oracle}")
    return [t.result()]


def check_lie_identities(rng, trials):
    t = _Tally("free-lie:antisymmetry-jacobi")
    for _ in range(trials):
        p = int(rng.choice([2, 3, 5]))
        sig = [int(rng.integers(1, 4)), int(rng.integers(0, 2)), int(rng.integers(0, 2))]
        gens = [(f"g{k}", d) for d, cnt in enumerate(sig, 1) for k in range(cnt)]
        gens = [(f"g{k}", d) for k, (_, d) in enumerate(gens)]
        f = build_free_algebra(p, 3, gens)
        x, y, z = (random_element(f, rng) for _ in range(3))
        ok = x.bracket(x).is_zero() and (x.bracket(y) + y.bracket(x)).is_zero()
        jac = x.bracket(y.bracket(z)) + y.bracket(z.bracket(x)) + z.bracket(x.bracket(y))
        ok = ok and jac.is_zero()
        t.record(ok, f"p={p} sig={sig}")
    return [t.result()]


# algebra


def check_presentations(rng, trials):
    rel = _Tally("algebra:relations-vanish")
    mat = _Tally("algebra:materialize")
    st = _Tally("algebra:star")
    fmt = _Tally("cli:format-roundtrip")
    for _ in range(trials):
        m = random_star_k2_or_any(rng)
        ok = all(m.from_free(r).is_zero() for r in relations_of(m))
        ok = ok and GradedHom(m, m, {n: m.generator(n) for n in m.names}).is_embedding()
        rel.record(ok, f"dims={m.dims}")
        sub = random_subalgebra(m, rng, max_gens=3, degrees=(1, 2, 3))
        mm = materialize(sub)
        ok = mm.algebra.dims == sub.dims and mm.embedding.image() == sub and mm.embedding.respects_brackets()
        mat.record(ok, f"dims={m.dims} sub={sub.dims}")
        ms, tau = star(m)
        st.record(ms.dims == m.dims[:2] and tau.respects_brackets(), f"dims={m.dims}")
        text = print_algebra(m)
        again = print_algebra(parse_algebra(text))
        fmt.record(text == again and PresentedAlgebra(parse_algebra(text)).dims == m.dims, f"dims={m.dims}")
    return [rel.result(), mat.result(), st.result(), fmt.result()]


def random_star_k2_or_any(rng, p=None):
    from .algebra import random_presentation

    p = int(rng.choice([2, 3, 5])) if p is None else p
    sig = [int(rng.integers(1, 4)), int(rng.integers(0, 2)), int(rng.integers(0, 2))]
    rc = {2: int(rng.integers(0, 3)), 3: int(rng.integers(0, 3))}
    return random_presentation(rng, p, 3, sig, rc)


# predim


def check_delta_routes(rng, trials):
    """delta from canonical pairs against the closed forms (delta() raises on disagreement)."""
    t = _Tally("predim:delta-routes")
    for _ in range(trials):
        m = random_star_k2_or_any(rng)
        sub = random_subalgebra(m, rng, max_gens=3, degrees=(1, 2, 3))
        try:
            delta(sub)
            delta(m)
            t.record(True)
        except AssertionError as exc:
            t.record(False, f"dims={m.dims} sub={sub.dims} {exc}")
    return [t.result()]


def check_submodularity2(rng, trials, max_total=8):
    t = _Tally("predim:submodularity-delta2", wanted=trials)
    for _ in range(trials):
        m = random_k2_algebra(rng, max_total=max_total)
        a = random_subalgebra(m, rng)
        c = random_subalgebra(m, rng)
        lhs = delta(a.join(c)).delta_2
        rhs = delta(a).delta_2 + delta(c).delta_2 - delta(a & c).delta_2
        t.record(lhs <= rhs, f"dims={m.dims} A={a.dims} C={c.dims} {lhs}>{rhs}")
    return [t.result()]


def check_submodularity3(rng, trials, max_total=9):
    t = _Tally("predim:submodularity-delta-2strong", wanted=trials)
    for _ in range(trials):
        m = random_star_k2(rng, max_total=max_total)
        a = css2_of_random(m, rng)
        c = css2_of_random(m, rng)
        if not (is_strong(a, level=2) and is_strong(c, level=2)):
            t.record(False, "closure not 2-strong")
            continue
        lhs = delta(a.join(c)).delta_3
        rhs = delta(a).delta_3 + delta(c).delta_3 - delta(a & c).delta_3
        t.record(lhs <= rhs, f"dims={m.dims} A={a.dims} C={c.dims} {lhs}>{rhs}")
    return [t.result()]


def check_kc_routes(rng, trials):
    """Numeric and definitional forms of the small-subalgebra condition agree."""
    t = _Tally("predim:kc-numeric-vs-definitional")
    for _ in range(trials):
        m = random_star_k2_or_any(rng)
        if m.total_dim > 7:
            m = random_k3_algebra(rng, p=int(rng.choice([3, 5])), steps=2, max_dims=(2, 2, 3))
        try:
            r = kc_membership(m, method="both", cap=10**6)
        except EnumerationTooLarge:
            continue
        if r.condition1:
            t.record(r.numeric == r.definitional, f"dims={m.dims} numeric={r.numeric} definitional={r.definitional}")
    return [t.result()]


def _small_member(rng, max_total=5):
    for _ in range(50):
        m = random_k3_algebra(rng, p=int(rng.choice([3, 5])), steps=int(rng.integers(1, 4)), max_dims=(2, 2, 3))
        if 0 < m.total_dim <= max_total:
            return m
    raise NoInstance("no small member")


def check_strong_laws(rng, trials):
    """Transitivity and intersection of strong subalgebras, exhaustive per instance."""
    tr = _Tally("predim:strong-transitive")
    it = _Tally("predim:strong-intersection")
    mx = _Tally("predim:strong-meets-2strong")
    im = _Tally("predim:3strong-implies-2strong")
    for _ in range(trials):
        m = _small_member(rng)
        z = GradedSubalgebra(m, [m.zero_space(d) for d in (1, 2, 3)])
        subs = list(all_subalgebras_between(z, m, cap=10**5))
        strong = {s.key: bool(is_strong(s)) for s in subs}
        strong2 = {s.key: bool(is_strong(s, level=2)) for s in subs}
        ok_t = ok_i = ok_m = True
        for a, c in itertools.product(subs, repeat=2):
            if c.contains(a) and strong[c.key] and bool(is_strong(a, c)):
                ok_t &= strong[a.key]
            if strong[a.key] and strong[c.key]:
                ok_i &= strong[(a & c).key]
            if strong[c.key] and strong2[a.key]:
                ok_m &= bool(is_strong(a & c, a))
        tr.record(ok_t, f"dims={m.dims}")
        it.record(ok_i, f"dims={m.dims}")
        mx.record(ok_m, f"dims={m.dims}")
        # tested, not assumed
        im.record(all(strong2[k] for k, v in strong.items() if v), f"dims={m.dims}")
    return [tr.result(), it.result(), mx.result(), im.result()]


def check_css(rng, trials):
    idem = _Tally("predim:css-idempotent-extensive-monotone")
    drop = _Tally("predim:css2-drops-delta", wanted=trials)
    low = _Tally("predim:css2-of-low-part")
    for _ in range(trials):
        m = random_star_k2(rng, max_total=8)
        b = random_subalgebra(m, rng)
        bigger = b.join(random_subalgebra(m, rng))
        for level in (2, 3):
            cb = css(b, level=level)
            ok = cb.contains(b) and css(cb, level=level) == cb and css(bigger, level=level).contains(cb)
            ok = ok and bool(is_strong(cb, level=level))
            idem.record(ok, f"dims={m.dims} B={b.dims} level={level}")
        b1 = generated_subalgebra(m, b.elements(1))
        target = css(b1, level=2).join(b)
        low.record(css(b, level=2) == target, f"dims={m.dims} B={b.dims}")
    attempts = 0
    while drop.trials < trials and attempts < 50 * trials:
        attempts += 1
        m = random_star_k2_wide(rng)
        b = random_subalgebra(m, rng, max_gens=4)
        a = css(b, level=2)
        if a != b:
            drop.record(_d3(a) < _d3(b), f"dims={m.dims} B={b.dims} A={a.dims}")
    return [idem.result(), drop.result(), low.result()]


def check_top_generators(rng, trials):
    """<B_1 B_2> <=^n A whenever B = <B_1 B_2 b_1..b_k> <=^(n+k) A with the b_j independent."""
    t = _Tally("predim:drop-top-generators")
    for _ in range(trials):
        m = random_k3_algebra(rng, p=5, steps=3, max_dims=(2, 3, 6))
        b = random_subalgebra(m, rng, max_gens=2, degrees=(1, 2))
        lowb = b
        tops = [random_homogeneous(m, rng, (3,)) for _ in range(2)]
        tops = [x for x in tops if x is not None]
        extra = Subspace(m.dim(3), [x.part(3) for x in tops], m.p) if tops else m.zero_space(3)
        k = (lowb.part(3) + extra).dim - lowb.part(3).dim
        bb = GradedSubalgebra(m, [lowb.part(1), lowb.part(2), lowb.part(3) + extra])
        n = int(rng.integers(0, 3))
        if is_strong(bb, m, bound_k=n + k):
            t.record(bool(is_strong(lowb, m, bound_k=n)), f"dims={m.dims} B={bb.dims} n={n} k={k}")
    return [t.result()]


# key3


def _key3_instance(rng, want_strong):
    for _ in range(400):
        a_star = random_k2_algebra(rng, max_total=8, min_n1=int(rng.choice([1, 4])))
        if want_strong:
            b = css(random_subalgebra(a_star, rng, max_gens=4), level=2)
            if b == whole(a_star) and rng.random() < 0.7:
                continue
            return a_star, b, whole(a_star)
        b = random_subalgebra(a_star, rng, max_gens=4)
        a = css(b, level=2)
        if a != b:
            return a_star, b, a
    raise NoInstance("no instance for the kernel bound")


def check_key3(rng, trials_a, trials_b):
    ta = _Tally("amalgam:gamma-embedding-for-2strong", wanted=trials_a)
    tb = _Tally("amalgam:gamma-kernel-bound", wanted=trials_b)
    for _ in range(trials_a):
        a_star, b, a = _key3_instance(rng, True)
        h = materialize(b).embedding
        _, kd = gamma(h)
        ta.record(not any(kd), f"A*={a_star.dims} B*={b.dims} ker={kd}")
    for _ in range(trials_b):
        a_star, b, a = _key3_instance(rng, False)
        mb, ma = materialize(b), materialize(a)
        h = _sub_hom(mb, ma)
        _, kd = gamma(h)
        bound = delta(b).delta_2 - delta(a).delta_2
        tb.record(kd[2] < bound, f"A*={a_star.dims} B*={b.dims} A={a.dims} ker={kd[2]} bound={bound}")
    return [ta.result(), tb.result()]


def check_functor(rng, trials):
    t = _Tally("amalgam:functor-star-identity")
    for _ in range(trials):
        a_star = random_k2_algebra(rng, max_total=7)
        f = functor_F(a_star)
        fs, _ = star(f)
        t.record(fs.dims == a_star.dims and f.dims[:2] == a_star.dims, f"A*={a_star.dims} F={f.dims}")
    return [t.result()]


# amalgam


def _small_base(rng, max_dims=(2, 2, 4)):
    return random_k3_algebra(rng, p=5, steps=int(rng.integers(1, 4)), max_dims=max_dims)


def check_amalgam_additivity(rng, trials, max_attempts=None):
    t = _Tally("amalgam:delta-additive", wanted=trials)
    skipped = 0
    attempts = 0
    max_attempts = max_attempts or 20 * trials
    while t.trials < trials and attempts < max_attempts:
        attempts += 1
        b = _small_base(rng)
        a, ba = random_strong_extension(b, rng, steps=int(rng.integers(1, 3)), max_dims=(4, 4, 10))
        c, bc = random_strong_extension(b, rng, steps=int(rng.integers(1, 3)), max_dims=(4, 4, 10))
        if shared_divisor_problems(as_presented(b), ba, bc, first_only=True):
            skipped += 1
            continue
        d = free_amalgam(a, c, ba, bc).product
        lhs = delta(d).delta
        rhs = delta(a).delta + delta(c).delta - delta(as_presented(b)).delta
        t.record(lhs == rhs, f"B={b.dims} A={a.dims} C={c.dims} D={d.dims} {lhs}!={rhs}")
    t.notes.append(f"skipped_shared={skipped}")
    return [t.result()]


def _ambient_pair(rng):
    """Subalgebras A, C of one algebra with B = A & C; f, g are the inclusions."""
    m = random_k3_algebra(rng, p=5, steps=int(rng.integers(2, 4)), max_dims=(3, 3, 6))
    a = random_subalgebra(m, rng, max_gens=3)
    c = random_subalgebra(m, rng, max_gens=3)
    b = a & c
    ma, mc, mb = materialize(a), materialize(c), materialize(b)
    return m, ma.algebra, mc.algebra, _sub_hom(mb, ma), _sub_hom(mb, mc), ma.embedding, mc.embedding


def _factored_pair(rng):
    """f, g through a quotient of an amalgam of random extensions."""
    b = _small_base(rng)
    a, ba = random_strong_extension(b, rng, steps=1, max_dims=(3, 3, 6))
    c, bc = random_strong_extension(b, rng, steps=1, max_dims=(3, 3, 6))
    d = free_amalgam(a, c, ba, bc)
    extra = [random_homogeneous(d.product, rng, (2, 3)) for _ in range(int(rng.integers(0, 3)))]
    q, proj = quotient_by(d.product, [x for x in extra if x is not None])
    return q, a, c, ba, bc, proj.compose(d.embed_left), proj.compose(d.embed_right)


def check_universal_property(rng, trials):
    t = _Tally("amalgam:universal-property", wanted=trials)
    for k in range(trials):
        if k % 2 == 0:
            e, a, c, ba, bc, f, g = _ambient_pair(rng)
        else:
            e, a, c, ba, bc, f, g = _factored_pair(rng)
        res = free_amalgam(a, c, ba, bc)
        try:
            h = extend_pair(res, f, g)
            gen = res.embed_left.image().join(res.embed_right.image())
            ok = gen == whole(res.product) and h.respects_brackets()
            t.record(ok, f"A={a.dims} C={c.dims} D={res.product.dims} not generated")
        except (NotAHomomorphism, ValueError) as exc:
            t.record(False, f"A={a.dims} C={c.dims} E={e.dims} {exc}")
    return [t.result()]


def check_basis_count(p=5, c=3, max_x1=2):
    """Free amalgam dims against the explicit basis count, over all small free-generator signatures."""
    t = _Tally("amalgam:basis-count")
    for b_sig in itertools.product((0, 1), repeat=3):
        for a1, c1 in itertools.product(range(max_x1 + 1), repeat=2):
            for a2, c2, a3, c3 in itertools.product((0, 1), repeat=4):
                bg = [(f"b{d}{k}", d) for d in (1, 2, 3) for k in range(b_sig[d - 1])]
                ag = [(f"a{d}{k}", d) for d, n in ((1, a1), (2, a2), (3, a3)) for k in range(n)]
                cg = [(f"c{d}{k}", d) for d, n in ((1, c1), (2, c2), (3, c3)) for k in range(n)]
                b = build_free_algebra(p, c, bg)
                a = build_free_algebra(p, c, bg + ag)
                cc = build_free_algebra(p, c, bg + cg)
                ba = GradedHom(b, a, {n: a.generator(n) for n in b.names})
                bc = GradedHom(b, cc, {n: cc.generator(n) for n in b.names})
                d = free_amalgam(a, cc, ba, bc).product
                want = amalgam_dims_formula(b.dims, a.dims, cc.dims)
                t.record(d.dims == want, f"B={b.dims} A={a.dims} C={cc.dims} D={d.dims} formula={want}")
    return [t.result()]


def check_point_adjunction(rng, trials):
    t = _Tally("amalgam:point-adds-one", wanted=trials)
    for _ in range(trials):
        b = _small_base(rng, (3, 3, 6))
        deg = int(rng.integers(1, 4))
        res = free_adjoin_point(b, deg)
        d = res.product
        ok = delta(d).delta == delta(as_presented(b)).delta + 1
        ok = ok and bool(is_strong(res.embed_left.image(), cap=10**6)) if d.total_dim <= 12 else ok
        ok = ok and kc_membership(d).member
        t.record(ok, f"B={b.dims} degree={deg} D={d.dims}")
    return [t.result()]


def _random_problem_list(m, rng, limit=40):
    probs = unsolved_problems(m, limit=limit)
    if not probs:
        return None
    return probs[int(rng.integers(0, len(probs)))]


def check_divisor_extension(rng, trials):
    t = _Tally("amalgam:divisor-keeps-delta", wanted=trials)
    alt = _Tally("amalgam:divisor-two-routes")
    attempts = 0
    while t.trials < trials and attempts < 20 * trials:
        attempts += 1
        b = _small_base(rng, (3, 3, 6))
        prob = _random_problem_list(b, rng)
        if prob is None:
            continue
        bb, e = prob
        res = divisor_extend(b, bb, e)
        d = res.product
        sol = res.solution
        ok = d.bracket(res.embed_left.apply(bb), sol) == res.embed_left.apply(e)
        ok = ok and delta(d).delta == delta(as_presented(b)).delta
        ok = ok and bool(is_strong(res.embed_left.image(), cap=10**6))
        ok = ok and kc_membership(d).member
        t.record(ok, f"B={b.dims} b_deg={bb.degree} e_deg={e.degree} D={d.dims}")
        other = divisor_extend_via_amalgam(b, bb, e).product
        alt.record(other.dims == d.dims and print_algebra(other) != "", f"B={b.dims} {other.dims}!={d.dims}")
    return [t.result(), alt.result()]


def check_no_zero_divisors(rng, trials):
    t = _Tally("amalgam:no-zero-divisors", wanted=trials)
    attempts = 0
    skipped = 0
    while t.trials < trials and attempts < 20 * trials:
        attempts += 1
        b = _small_base(rng)
        a, ba = random_strong_extension(b, rng, steps=int(rng.integers(1, 3)), max_dims=(4, 4, 10))
        c, bc = random_strong_extension(b, rng, steps=int(rng.integers(1, 3)), max_dims=(4, 4, 10))
        if shared_divisor_problems(as_presented(b), ba, bc, first_only=True):
            skipped += 1
            continue
        k = a.total_dim - as_presented(b).total_dim + 2
        if not is_strong(ba.image(), cap=10**6) or not is_strong(bc.image(), bound_k=k, cap=10**6):
            skipped += 1
            continue
        d = free_amalgam(a, c, ba, bc).product
        zd = zero_divisor_scan(d, limit=1)
        t.record(not zd, f"B={b.dims} A={a.dims} C={c.dims} D={d.dims}")
    t.notes.append(f"skipped={skipped}")
    return [t.result()]


def check_strong_amalgam(rng, trials):
    t = _Tally("amalgam:strong-amalgam")
    for _ in range(trials):
        b = _small_base(rng)
        a, ba = random_strong_extension(b, rng, steps=1, max_dims=(3, 3, 6))
        c, bc = random_strong_extension(b, rng, steps=1, max_dims=(3, 3, 6))
        try:
            res = strong_amalgam(a, c, ba, bc, n=3, cap=10**6)
        except EnumerationTooLarge:
            continue
        d = res.product
        ok = bool(is_strong(res.embed_right.image(), cap=10**6)) and bool(is_strong(res.embed_left.image(), bound_k=3, cap=10**6))
        ok = ok and kc_membership(d).member
        if not res.absorbed:
            ok = ok and delta(d).delta == delta(a).delta + delta(c).delta - delta(as_presented(b)).delta
        t.record(ok, f"B={b.dims} A={a.dims} C={c.dims} D={d.dims} absorbed={len(res.absorbed)}")
    return [t.result()]


def check_free_join_claim(rng, trials):
    """delta(A/C) = delta(A/A&C) exactly when <AC> is the free amalgam, for 2-strong A, C."""
    t = _Tally("amalgam:free-join-criterion")
    for _ in range(trials):
        m = random_star_k2(rng, max_total=8)
        a = css2_of_random(m, rng)
        c = css2_of_random(m, rng)
        lhs, rhs = decompose_amalgam_claim(a, c)
        t.record(lhs == rhs, f"M={m.dims} A={a.dims} C={c.dims} delta_side={lhs} free_side={rhs}")
    return [t.result()]


def check_independence_axioms(rng, trials):
    """Monotonicity, transitivity and symmetry of free-amalgam independence inside one algebra."""
    mon = _Tally("amalgam:independence-monotone")
    tra = _Tally("amalgam:independence-transitive")
    sym = _Tally("amalgam:independence-symmetric")
    for _ in range(trials):
        m = random_k3_algebra(rng, p=5, steps=3, max_dims=(3, 3, 6))
        a, b, c = (random_subalgebra(m, rng) for _ in range(3))
        d = random_subalgebra(m, rng)
        from .amalgam import independent

        abc = independent(a, b, c)
        sym.record(abc == independent(c, b, a), f"M={m.dims}")
        cd = c.join(d)
        if independent(a, b, cd):
            mon.record(independent(a, b, c) and independent(a, b.join(c), d), f"M={m.dims}")
        bc = b.join(c)
        if independent(a, b, c) and independent(a, bc, d):
            tra.record(independent(a, b, c.join(d)), f"M={m.dims}")
    return [mon.result(), tra.result(), sym.result()]


def _enlargement_instance(rng):
    """(A, C, c) in one algebra: the two sides of a free amalgam, of a quotient of one, or random."""
    kind = rng.random()
    if kind < 0.7:
        b0 = _small_base(rng)
        a0, ba = random_strong_extension(b0, rng, steps=1, max_dims=(3, 3, 6))
        c0, bc = random_strong_extension(b0, rng, steps=1, max_dims=(3, 3, 6))
        res = free_amalgam(a0, c0, ba, bc)
        f, g = res.embed_left, res.embed_right
        if kind < 0.4:
            extra = [random_homogeneous(res.product, rng, (2, 3)) for _ in range(int(rng.integers(1, 3)))]
            _, proj = quotient_by(res.product, [x for x in extra if x is not None])
            f, g = proj.compose(f), proj.compose(g)
        a, c = f.image(), g.image()
    else:
        m = random_k3_algebra(rng, p=5, steps=3, max_dims=(3, 3, 6))
        a = random_subalgebra(m, rng, max_gens=3)
        c = random_subalgebra(m, rng, max_gens=3)
    x = random_homogeneous(c.parent, rng, (1, 2, 3))
    if x is None or not c.contains(x):
        gens = [c.parent.homogeneous(d, row) for d in (1, 2, 3) for row in c.part(d).basis]
        if not gens:
            return None
        x = gens[int(rng.integers(0, len(gens)))]
    return a, c, x


def check_one_point_enlargement(rng, trials):
    """With A+ = <A c> free over <B c>: <AC> is free over B iff <A+ C> is free over <B c>."""
    t = _Tally("amalgam:one-point-enlargement", wanted=trials)
    attempts = free_count = 0
    while t.trials < trials and attempts < 50 * trials:
        attempts += 1
        inst = _enlargement_instance(rng)
        if inst is None:
            continue
        a, c, x = inst
        m = a.parent
        b = a & c
        bx = b.join(generated_subalgebra(m, [x]))
        ax = a.join(bx)
        if not is_free_join(a, bx, b):
            continue
        lhs = is_free_join(a, c, b)
        rhs = a.join(c) == ax.join(c) and is_free_join(ax, c, bx)
        free_count += lhs
        t.record(lhs == rhs, f"M={m.dims} A={a.dims} C={c.dims} c_deg={x.degree} free={lhs} enlarged={rhs}")
    t.notes.append(f"attempts={attempts} free={free_count} not_free={t.trials - free_count}")
    return [t.result()]


def _gamma_pair(mb, mx):
    h = _sub_hom(mb, mx)
    g, _ = gamma(h, check=False)
    return g


def check_functor_factorization(rng, trials):
    """F(<CA>*) has the dims of F(C*)/g(ker a) (x) F(A*)/a(ker g) over F(B*)/<ker a, ker g>.

    with_kernel counts instances where a kernel is nonzero; these need B with at
    least four generators and are rare at this size.
    """
    t = _Tally("amalgam:functor-factorization", wanted=trials)
    attempts = with_kernel = 0
    while t.trials < trials and attempts < 50 * trials:
        attempts += 1
        m = random_star_k2(rng, max_total=9)
        a = random_subalgebra(m, rng, max_gens=3)
        c = random_subalgebra(m, rng, max_gens=3)
        _, tau = star(m)
        sa, sc, sb = tau.image(a), tau.image(c), tau.image(a & c)
        if not is_free_join(sa, sc, sb):
            continue
        ma, mc, mb, md = (materialize(s) for s in (sa, sc, sb, sa.join(sc)))
        al = _gamma_pair(mb, ma)
        ga = _gamma_pair(mb, mc)
        fb = al.source
        if ga.source.dims != fb.dims:
            raise AssertionError("two constructions of F(B*) differ")
        ka = al.kernel(3).basis
        kg = ga.kernel(3).basis
        with_kernel += bool(len(ka) or len(kg))
        qa, pa = quotient_by(al.target, [al.apply(fb.homogeneous(3, r)) for r in kg])
        qc, pc = quotient_by(ga.target, [ga.apply(ga.source.homogeneous(3, r)) for r in ka])
        qb, _ = quotient_by(fb, [fb.homogeneous(3, r) for r in np.vstack([ka, kg])] if len(ka) + len(kg) else [])
        try:
            f = GradedHom(qb, qa, {n: pa.apply(al.apply(fb.generator(n))) for n in fb.names})
            g = GradedHom(qb, qc, {n: pc.apply(ga.apply(ga.source.generator(n))) for n in fb.names})
        except NotAHomomorphism as exc:
            t.record(False, f"M={m.dims} quotient map: {exc}")
            continue
        if not (f.is_embedding() and g.is_embedding()):
            t.record(False, f"M={m.dims} base does not embed")
            continue
        rhs = free_amalgam(qa, qc, f, g).product.dims
        lhs = functor_F(md.algebra, check=False).dims
        t.record(lhs == rhs, f"M={m.dims} A*={sa.dims} C*={sc.dims} F(<CA>*)={lhs} amalgam={rhs}")
    t.notes.append(f"attempts={attempts} with_kernel={with_kernel}")
    return [t.result()]


# generic


def check_generic_chain(seed, steps, catalog=None):
    t = _Tally("generic:chain", wanted=steps)
    book = _Tally("generic:delta-bookkeeping")
    state = build_generic(seed, catalog or standard_catalog(), steps, check=True)
    prev = None
    for rec, m in zip(state.chain_log, state.chain):
        ok = rec.status == "skipped" or (rec.strong_mode != "-" and rec.kc_method != "-")
        t.record(ok, f"step {rec.index}")
        cur = rec.profile.delta
        if prev is not None and rec.status == "applied":
            kind = (rec.resolved or rec.task).kind
            if kind == "free_point":
                book.record(cur == prev + 1, f"step {rec.index} {prev}->{cur}")
            elif kind == "divisor":
                book.record(cur == prev, f"step {rec.index} {prev}->{cur}")
        prev = cur
    modes = sorted({rec.strong_mode for rec in state.chain_log})
    t.notes.append(f"final_dims={state.current.dims} strong_modes={','.join(modes)}")
    return [t.result(), book.result()], state


def check_chain_transitivity(state, cap=10**5, consecutive=False):
    """Recheck strongness of M_i in M_j through the composed embeddings."""
    t = _Tally("generic:chain-steps" if consecutive else "generic:chain-pairs")
    n = len(state.chain)
    for i in range(n):
        for j in range(i + 1, min(n, i + 2) if consecutive else n):
            h = chain_embedding(state, i, j)
            try:
                rep = is_strong(h.image(), cap=cap)
            except EnumerationTooLarge:
                continue
            t.record(rep.holds, f"M_{i} -> M_{j}")
    return [t.result()]


def check_replay(seed, steps, catalog=None):
    t = _Tally("generic:replay")
    state = build_generic(seed, catalog or standard_catalog(), steps, check=False)
    again = replay(seed, state.chain_log)
    t.record(fingerprint(again.current) == fingerprint(state.current), f"seed={seed}")
    twice = build_generic(seed, catalog or standard_catalog(), steps, check=False)
    t.record(print_algebra(twice.current) == print_algebra(state.current), f"seed={seed}")
    return [t.result()]


# pregeometry


def _same_container(a, b, cap=10**5):
    """Isomorphism test through the subalgebras generated in degrees 1 and 2.

    A complement of <M_1 M_2>_3 in M_3 is central, so two algebras with the
    same dims are isomorphic iff their low parts are.
    """
    la, lb = whole(a).low_part(), whole(b).low_part()
    if la.dims != lb.dims:
        return False
    if la.dims[0] == 0:
        # only degree-2 and degree-3 generators: abelian
        return True
    try:
        return isomorphism_search(materialize(la).algebra, materialize(lb).algebra, cap=cap) is not None
    except EnumerationTooLarge:
        return False


def small_containers(p=5, max_total=6, problems_per_algebra=3):
    """Members of the class with total dimension <= max_total, grown from the zero algebra
    by free points and divisor extensions, one representative per isomorphism type."""
    from .amalgam import zero_algebra

    reps = {}
    frontier = [zero_algebra(p, 3)]
    while frontier:
        nxt = []
        for m in frontier:
            cands = [free_adjoin_point(m, d).product for d in (1, 2, 3)]
            for b, e in unsolved_problems(m, limit=problems_per_algebra):
                cands.append(divisor_extend(m, b, e).product)
            for x in cands:
                if x.total_dim > max_total:
                    continue
                bucket = reps.setdefault(x.dims, [])
                if any(_same_container(x, y) for y in bucket):
                    continue
                bucket.append(x)
                nxt.append(x)
        frontier = nxt
    return [x for dims in sorted(reps, key=lambda d: (sum(d), d)) for x in reps[dims]]


def _flag_configurations(m):
    """Orbit representatives of (H, a, b) for an abelian container with M_1 = 0.

    Every graded linear automorphism is an algebra automorphism here and d is
    invariant, so H = span(e_1..e_k) in degree 2 with a few points covers all
    configurations.
    """
    n = m.dim(2)

    def e(*ks):
        v = np.zeros(n, dtype=np.int64)
        for k in ks:
            v[k] = 1
        return m.homogeneous(2, v)

    def span(k):
        rows = np.eye(n, dtype=np.int64)[:k]
        return generate_from_parts(m, [m.zero_space(1), Subspace(n, rows, m.p), m.zero_space(3)])

    flags, steps, exch = [], [], []
    for k in range(n + 1):
        h = span(k)
        inside = [e(0)] if k else []
        outside = [e(k)] if k < n else []
        steps += [(h, x) for x in inside + outside]
        for k2 in range(k + 1, n + 1):
            pts = inside + [e(k)] + ([e(k2)] if k2 < n else [])
            flags.append((h, span(k2), pts))
        for a in outside:
            bs = inside + ([e(k + 1)] if k + 1 < n else []) + ([e(k, 0)] if k else [])
            exch += [(h, a, b) for b in bs]
    return flags, steps, exch


def check_pregeometry(p=5, max_total=6, containers=None, literal_limit=20000):
    """Pregeometry laws of cl on R = M_1 u M_2 over small containers.

    H runs over subalgebras generated in degrees 1 and 2. A container is
    checked literally when (#H)(#points) <= literal_limit; larger ones are
    abelian and are checked on automorphism orbit representatives.
    """
    ref = _Tally("geometry:reflexive")
    mono = _Tally("geometry:monotone")
    step = _Tally("geometry:adding-a-point")
    exch = _Tally("geometry:exchange")
    cont = _Tally("geometry:container-in-class")
    containers = containers if containers is not None else small_containers(p, max_total)
    n_literal = n_orbit = 0
    for m in containers:
        cont.record(kc_membership(m).member, f"dims={m.dims}")
        z = GradedSubalgebra(m, [m.zero_space(d) for d in (1, 2, 3)])
        dcache = {}

        def d(h):
            if h.key not in dcache:
                dcache[h.key] = geometry_d(h, m)
            return dcache[h.key]

        def plus(h, x):
            return h.join(generated_subalgebra(m, [x]))

        def cl(h, x):
            return h.contains(x) or d(plus(h, x)) == d(h)

        npts = sum((m.p ** m.dim(e) - 1) // (m.p - 1) for e in (1, 2))
        hs = None
        if m.dim(1) > 0 or count_subspaces(m.dim(2), m.p) * npts <= literal_limit:
            hs = list(h3_between(z, whole(m)))
        if hs is not None and len(hs) * npts <= literal_limit:
            n_literal += 1
            pts = [m.homogeneous(e, v) for e in (1, 2) for v in projective_point_array(m.dim(e), m.p)]
            index = {h.key: i for i, h in enumerate(hs)}
            nxt = np.array([[index[plus(h, x).key] for x in pts] for h in hs], dtype=np.int64).reshape(len(hs), len(pts))
            dv = np.array([d(h) for h in hs], dtype=np.int64)
            inside = np.array([[h.contains(x) for x in pts] for h in hs], dtype=bool).reshape(len(hs), len(pts))
            closed = inside | (dv[nxt] == dv[:, None])
            for i, h in enumerate(hs):
                ref.record(bool(closed[i][inside[i]].all()), f"dims={m.dims} H={h.dims}")
                for j in range(len(pts)):
                    step.record(bool(dv[nxt[i, j]] <= dv[i] + 1), f"dims={m.dims} H={h.dims}")
            for (i, h), (j, k) in itertools.product(enumerate(hs), repeat=2):
                if i != j and k.contains(h):
                    ok = dv[i] <= dv[j] and bool((closed[j] | ~closed[i]).all())
                    mono.record(ok, f"dims={m.dims} H={h.dims} K={k.dims}")
            for i, h in enumerate(hs):
                # a not in cl(H), a in cl(Hb) must give b in cl(Ha); rows b, columns a
                hb_a = closed[nxt[i]]
                bad = (~closed[i])[None, :] & hb_a & ~hb_a.T & ~np.eye(len(pts), dtype=bool)
                cases = int(((~closed[i])[None, :] & hb_a & ~np.eye(len(pts), dtype=bool)).sum())
                witness = ""
                if bad.any():
                    b, a = np.argwhere(bad)[0]
                    witness = f"dims={m.dims} H={h.dims} a={pts[a]} b={pts[b]}"
                exch.add(cases, int(bad.sum()), witness)
        else:
            if m.dim(1):
                raise EnumerationTooLarge(len(hs) * npts, literal_limit, "pregeometry configurations")
            n_orbit += 1
            flags, steps, exch_cases = _flag_configurations(m)
            for h, x in steps:
                if h.contains(x):
                    ref.record(cl(h, x), f"dims={m.dims} H={h.dims}")
                step.record(d(plus(h, x)) <= d(h) + 1, f"dims={m.dims} H={h.dims}")
            for h, k, xs in flags:
                ok = d(h) <= d(k) and all(cl(k, x) for x in xs if cl(h, x))
                mono.record(ok, f"dims={m.dims} H={h.dims} K={k.dims}")
            for h, a, b in exch_cases:
                if not cl(h, a) and cl(plus(h, b), a):
                    exch.record(cl(plus(h, a), b), f"dims={m.dims} H={h.dims} a={a} b={b}")
    out = [cont.result(), ref.result(), mono.result(), step.result(), exch.result()]
    out[0].note = f"containers={len(containers)} literal={n_literal} orbit-representatives={n_orbit}"
    return out


# bch


def _bch_small_algebras(p=5):
    from .algebra import quotient

    f2 = build_free_algebra(p, 3, [("x", 1), ("y", 1)])
    x, y = f2.generator("x"), f2.generator("y")
    heis = quotient(f2, [x.bracket(y).bracket(x), x.bracket(y).bracket(y)])
    f3 = build_free_algebra(p, 3, [("x", 1), ("y", 1), ("z", 1)])
    g3 = f3.generator_elements()
    fxu = build_free_algebra(p, 3, [("x", 1), ("u", 2)])
    return [
        ("heisenberg", as_presented(heis)),
        ("x1z2", as_presented(build_free_algebra(p, 3, [("x", 1), ("z", 2)]))),
        ("class2-free", as_presented(build_free_algebra(p, 2, [("x", 1), ("y", 1)]))),
        ("x1y3", as_presented(build_free_algebra(p, 3, [("x", 1), ("y", 3)]))),
        ("line", as_presented(build_free_algebra(p, 3, [("x", 1)]))),
        ("abelian3", as_presented(quotient(f3, [u.bracket(v) for u, v in itertools.combinations(g3, 2)]))),
        ("x1u2-abelian", as_presented(quotient(fxu, [fxu.generator("x").bracket(fxu.generator("u"))]))),
    ]


def _bch_large_algebras(p=5):
    return [
        ("free2", as_presented(build_free_algebra(p, 3, [("x", 1), ("y", 1)]))),
        ("free3", as_presented(build_free_algebra(p, 3, [("x", 1), ("y", 1), ("z", 1)]))),
    ]


def check_bch(rng, samples, p=5, exhaustive=True, triples=None, scalar_samples=50):
    coef = solve_recovery_coefficients(p)
    out = [CheckResult("bch:coefficient-oracle", 1, 0, note=coef.render())]
    if exhaustive:
        ex = _Tally("bch:associativity-exhaustive")
        for name, m in _bch_small_algebras(p):
            table = GroupView(m).table()
            if triples is None or table.order**3 <= triples:
                bad = table.associativity_failures()
                count = table.order**3
            else:
                idx = rng.integers(0, table.order, size=(triples, 3))
                bad = table.associativity_failures(idx)
                count = triples
            ex.record(bad == 0, f"{name} failures={bad}")
            ex.notes.append(f"{name}={count}")
        out.append(ex.result())
    names = ["associativity-random", "identity-inverse", "exponent-p", "class-at-most-3",
             "commutator-identity", "round-trips", "top-degree-additive", "batch-vs-single"]
    tallies = {n: _Tally(f"bch:{n}") for n in names}
    printed = {"commutator": 0, "recover_bracket": 0, "recover_sum": 0}
    witness = {}
    for name, m in _bch_large_algebras(p):
        g = GroupView(m)
        n = m.total_dim
        x, y, z, w = (g.batch(rng.integers(0, p, size=(samples, n))) for _ in range(4))

        def tally(key, ok):
            t = tallies[key]
            t.trials += len(ok)
            bad = int((~ok).sum())
            t.failures += bad
            if bad and not t.witness:
                t.witness = f"{name} row={int(np.argmin(ok))}"

        tally("associativity-random", ((x * y) * z).equal_rows(x * (y * z)))
        e = g.batch(np.zeros((samples, n), dtype=np.int64))
        tally("identity-inverse", (x * e).equal_rows(x) & (e * x).equal_rows(x) & (x * ~x).identity_rows())
        tally("exponent-p", (x ** p).identity_rows())
        tally("class-at-most-3", g.commutator(g.commutator(g.commutator(x, y), z), w).identity_rows())
        lhs = g.commutator(g.commutator(x, y), z)
        tally("commutator-identity", lhs.equal_rows(g.native_bracket(g.native_bracket(x, y), z)))
        ok = g.recover_bracket(x, y).equal_rows(g.native_bracket(x, y))
        ok &= g.recover_sum(x, y).equal_rows(g.native_sum(x, y))
        tally("round-trips", ok)
        top_rows = np.zeros((samples, n), dtype=np.int64)
        top_rows[:, m.degree_slice(m.c)] = rng.integers(0, p, size=(samples, m.dim(m.c)))
        t3 = g.batch(top_rows)
        tally("top-degree-additive", (t3 * x).equal_rows(g.native_sum(t3, x)))
        k = min(scalar_samples, samples)
        prod, rsum = (x * y).value, g.recover_sum(x, y).value
        agree = []
        for r in range(k):
            a, b = x[r], y[r]
            agree.append((a * b).coords.tolist() == prod[r].tolist()
                         and g.recover_sum(a, b).coords.tolist() == rsum[r].tolist())
        tally("batch-vs-single", np.array(agree, dtype=bool))
        gx = g.element(m.generator("x"))
        gy = g.element(m.generator("y"))
        for key, fn, native in (
            ("commutator", g.printed_commutator, g.commutator),
            ("recover_bracket", g.printed_recover_bracket, g.native_bracket),
            ("recover_sum", g.printed_recover_sum, g.native_sum),
        ):
            mism = ~fn(x, y).equal_rows(native(x, y))
            printed[key] += int(mism.sum())
            if key not in witness:
                if fn(gx, gy) != native(gx, gy):
                    witness[key] = f"{name} x=gen(x) y=gen(y)"
                elif mism.any():
                    r = int(np.argmax(mism))
                    witness[key] = f"{name} x={x.value[r].tolist()} y={y.value[r].tolist()}"
    out += [tallies[n].result() for n in names]
    note = " ".join(f"printed_{k}_mismatches={v}" for k, v in printed.items())
    wit = "; ".join(f"{k}: {v}" for k, v in sorted(witness.items()))
    out.append(CheckResult("bch:printed-formulas-report", 1, 0, note=note, witness=wit))
    return out
