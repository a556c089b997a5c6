"""Finite prefixes of the generic structure: chains M_0 <= M_1 <= ... built by strong amalgamation.

Only finite prefixes exist here.  Nothing in this module certifies richness,
saturation or back-and-forth properties of the countable limit; the builder
guarantees the chain invariants it checks (class membership and strongness
of each step) and nothing more.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import GradedHom, as_presented, generated_subalgebra, o_dims, whole
from .amalgam import (
    PreconditionFailed,
    divisor_extend,
    free_adjoin_point,
    strong_amalgam,
    strong_amalgam_bound,
    zero_algebra,
)
from .fplinalg import DEFAULT_CAP, EnumerationTooLarge, Subspace, projective_point_array
from .glaformat import fingerprint
from .predim import delta, is_strong, kc_membership


class BuildError(RuntimeError):
    def __init__(self, message, log):
        super().__init__(message)
        self.log = log


@dataclass(frozen=True)
class Template:
    """A verified strong pair B <= A with A in the class."""

    name: str
    base: object
    ext: object
    base_in_ext: GradedHom
    n: int = 3

    @classmethod
    def register(cls, name, base, ext, base_in_ext, n=3, cap=DEFAULT_CAP):
        rep = is_strong(base_in_ext.image(), level=as_presented(ext).c, cap=cap)
        if not rep.holds:
            raise PreconditionFailed(f"template {name}: base is not strong", rep)
        kc = kc_membership(ext, cap=cap)
        if not kc.member:
            raise PreconditionFailed(f"template {name}: extension is not in the class", kc)
        return cls(name, as_presented(base), as_presented(ext), base_in_ext, n)


@dataclass(frozen=True)
class ExtensionTask:
    """kind is "free_point", "divisor" or "template".

    free_point uses degree.  divisor either fixes (b, e) as coordinate pairs
    ((i, vec), (j, vec)) or, with b and e unset, services the first unsolved
    problem with the given degrees (i, j) (any degrees if degrees is None).
    template carries a Template and optionally fixed generator images.
    """

    kind: str
    degree: int | None = None
    b: tuple | None = None
    e: tuple | None = None
    degrees: tuple | None = None
    template: Template | None = None
    images: tuple | None = None

    def describe(self):
        if self.kind == "free_point":
            return f"free_point({self.degree})"
        if self.kind == "divisor":
            if self.b is not None:
                return f"divisor(b={_vec(self.b)}, e={_vec(self.e)})"
            return "divisor" + (f"{self.degrees}" if self.degrees else "(any)")
        return f"template({self.template.name})"


def _vec(t):
    d, v = t
    return f"{d}:" + ",".join(str(int(x)) for x in v)


def free_point(degree):
    return ExtensionTask("free_point", degree=degree)


def divisor_task(b=None, e=None, degrees=None):
    if b is not None:
        b = (b.degree, tuple(int(x) for x in b.part(b.degree)))
        e = (e.degree, tuple(int(x) for x in e.part(e.degree)))
    return ExtensionTask("divisor", b=b, e=e, degrees=degrees)


def template_task(template, images=None):
    return ExtensionTask("template", template=template, images=images)


@dataclass
class StepRecord:
    index: int
    task: ExtensionTask
    resolved: ExtensionTask | None
    status: str
    embedding: GradedHom | None
    profile: object
    strong_mode: str
    kc_method: str
    base_check: str = ""
    absorbed: tuple = ()
    profile_dims: tuple = ()
    fingerprint: str = ""

    def render(self):
        parts = [f"step {self.index}", self.task.describe(), self.status]
        if self.resolved is not None and self.resolved is not self.task:
            parts.append("as " + self.resolved.describe())
        parts += [f"dims={self.profile_dims}", self.profile.render(), f"strong={self.strong_mode}", f"kc={self.kc_method}"]
        if self.base_check:
            parts.append(f"base={self.base_check}")
        if self.absorbed:
            parts.append(f"absorbed={len(self.absorbed)}")
        return " | ".join(parts)


@dataclass
class BuilderState:
    current: object
    seed: int
    chain_log: list = field(default_factory=list)
    chain: list = field(default_factory=list)
    cap: int = DEFAULT_CAP

    @classmethod
    def start(cls, seed, p=5, c=3, cap=DEFAULT_CAP):
        z = zero_algebra(p, c)
        return cls(z, seed, [], [z], cap)

    def rng_for(self, index):
        return np.random.default_rng([self.seed, index])


def _first_unsolved(m, degrees=None):
    """First divisor problem of m in canonical order, or None."""
    for i in range(1, m.c):
        if m.dim(i) == 0:
            continue
        for j in range(i + 1, m.c + 1):
            if degrees is not None and (i, j) != tuple(degrees):
                continue
            if m.dim(j) == 0:
                continue
            k = j - i
            for bv in projective_point_array(m.dim(i), m.p):
                if m.dim(k):
                    span = Subspace(m.dim(j), m.bracket_rows(i, bv, k, np.eye(m.dim(k), dtype=np.int64)), m.p)
                else:
                    span = Subspace.zero(m.dim(j), m.p)
                if span.dim < m.dim(j):
                    full = Subspace.full(m.dim(j), m.p)
                    ev = full.quotient_complement(span)[0]
                    return m.homogeneous(i, bv), m.homogeneous(j, ev)
    return None


def _choose_images(template, m, rng, tries=50):
    """Seeded generator images embedding the template base into m with o-dim-preserving image."""
    base = template.base
    want = o_dims(whole(base))
    for _ in range(tries):
        imgs = {}
        for g in base.generators:
            if m.dim(g.degree) == 0:
                return None
            imgs[g.name] = tuple(int(x) for x in rng.integers(0, m.p, size=m.dim(g.degree)))
        try:
            h = GradedHom(base, m, {k: np.array(v, dtype=np.int64) for k, v in imgs.items()})
        except ValueError:
            continue
        if h.is_embedding() and o_dims(h.image()) == want:
            return tuple(sorted(imgs.items()))
    return None


def _base_check(template, h, m, cap):
    """Bounded strongness of the base image in m, or the class condition when enumeration is too large."""
    k = strong_amalgam_bound(template.ext, template.base, template.n)
    img = h.image()
    try:
        rep = is_strong(img, level=m.c, bound_k=k, cap=cap)
    except EnumerationTooLarge:
        if sum(o_dims(img)) <= 2:
            return "class-condition(o-dim<=2)"
        raise
    if not rep.holds:
        raise PreconditionFailed(f"template base is not {k}-strong in the current algebra", rep)
    return f"bounded({k})"


def _apply(state, task, index):
    """Returns (new algebra, embedding old -> new, resolved task, base check, absorbed)."""
    m = state.current
    if task.kind == "free_point":
        res = free_adjoin_point(m, task.degree, name="x")
        return res.product, res.embed_left, task, "", ()
    if task.kind == "divisor":
        if task.b is None:
            found = _first_unsolved(m, task.degrees)
            if found is None:
                return None
            b, e = found
            resolved = divisor_task(b, e)
        else:
            b = m.homogeneous(task.b[0], np.array(task.b[1], dtype=np.int64))
            e = m.homogeneous(task.e[0], np.array(task.e[1], dtype=np.int64))
            resolved = task
        res = divisor_extend(m, b, e, name="s")
        return res.product, res.embed_left, resolved, "", ()
    if task.kind == "template":
        t = task.template
        images = task.images
        if images is None:
            images = _choose_images(t, m, state.rng_for(index))
            if images is None:
                return None
        h = GradedHom(t.base, m, {k: np.array(v, dtype=np.int64) for k, v in images})
        if not h.is_embedding():
            raise PreconditionFailed("template base does not embed")
        check = _base_check(t, h, m, state.cap)
        res = strong_amalgam(t.ext, m, t.base_in_ext, h, n=t.n, cap=state.cap, check_a=False, check_c=False, prefix="t")
        return res.product, res.embed_right, template_task(t, images), check, tuple(res.absorbed)
    raise ValueError(f"unknown task kind {task.kind!r}")


def richness_step(state, task, check=True):
    """Service one task by strong amalgamation and verify the chain invariants."""
    index = len(state.chain_log)
    old = state.current
    try:
        out = _apply(state, task, index)
    except (PreconditionFailed, EnumerationTooLarge) as exc:
        raise BuildError(f"step {index}: {exc}", state.chain_log) from exc
    if out is None:
        prof = delta(old)
        rec = StepRecord(index, task, None, "skipped", None, prof, "-", "-", profile_dims=old.dims,
                         fingerprint=fingerprint(old))
        state.chain_log.append(rec)
        state.chain.append(old)
        return state
    new, emb, resolved, base_check, absorbed = out
    strong_mode, kc_method = "-", "-"
    if check:
        strong_mode = _chain_strong(emb, state.cap)
        kc = kc_membership(new, cap=state.cap)
        if not kc.member:
            raise BuildError(f"step {index}: result left the class ({kc.violations[:1]})", state.chain_log)
        kc_method = kc.method
    prof = delta(new)
    rec = StepRecord(index, task, resolved, "applied", emb, prof, strong_mode, kc_method, base_check, absorbed,
                     profile_dims=new.dims, fingerprint=fingerprint(new))
    state.chain_log.append(rec)
    state.chain.append(new)
    state.current = new
    return state


def _chain_strong(emb, cap):
    img = emb.image()
    try:
        rep = is_strong(img, level=emb.target.c, cap=cap)
        mode = "exact"
    except EnumerationTooLarge:
        k = 4
        rep = is_strong(img, level=emb.target.c, bound_k=k, cap=cap)
        mode = f"bounded({k})"
    if not rep.holds:
        raise BuildError(f"chain step is not strong: {rep}", [])
    return mode


def divisor_saturate(state, budget, degrees=None, check=True):
    """Service up to budget unsolved divisor problems in canonical order."""
    for _ in range(budget):
        if _first_unsolved(state.current, degrees) is None:
            break
        richness_step(state, divisor_task(degrees=degrees), check=check)
    return state


def schedule(seed, catalog, steps):
    """Seeded round-robin: every round visits each catalog entry once in a shuffled order."""
    order = []
    r = 0
    while len(order) < steps:
        perm = np.random.default_rng([seed, 1 << 20, r]).permutation(len(catalog))
        order.extend(int(i) for i in perm)
        r += 1
    return [catalog[i] for i in order[:steps]]


def build_generic(seed, catalog, steps, p=5, c=3, cap=DEFAULT_CAP, check=True):
    state = BuilderState.start(seed, p, c, cap)
    if steps and not catalog:
        raise ValueError("empty catalog")
    for task in schedule(seed, catalog, steps):
        richness_step(state, task, check=check)
    return state


def replay(seed, log, p=5, c=3, cap=DEFAULT_CAP, check=False):
    """Rebuild a chain from the resolved tasks of a log."""
    state = BuilderState.start(seed, p, c, cap)
    for rec in log:
        task = rec.resolved if rec.resolved is not None else rec.task
        richness_step(state, task, check=check)
    return state


def chain_embedding(state, i, j):
    """The composite embedding M_i -> M_j."""
    log = state.chain_log
    h = GradedHom.identity(state.chain[i])
    for k in range(i, j):
        e = log[k].embedding
        if e is None:
            continue
        h = e.compose(h)
    return h


def degree_one_span(m):
    return generated_subalgebra(m, [m.homogeneous(1, v) for v in np.eye(m.dim(1), dtype=np.int64)])


# a small default catalog


def standard_templates(p=5, c=3):
    from .freelie import build_free_algebra

    b1 = build_free_algebra(p, c, [("b", 1)])
    a1 = build_free_algebra(p, c, [("b", 1), ("y", 3)])
    t1 = Template.register("point3-over-line", b1, a1, GradedHom(b1, a1, {"b": a1.generator("b")}))
    b2 = build_free_algebra(p, c, [("b", 1), ("d", 1)])
    bb, dd = b2.generator("b"), b2.generator("d")
    res = divisor_extend(b2, bb, bb.bracket(dd).bracket(dd), name="z")
    t2 = Template.register("divisor-over-plane", b2, res.product, res.embed_left)
    return [t1, t2]


def standard_catalog(p=5, c=3):
    """Mixed catalog used by the acceptance run; keeps degrees 1 and 2 small."""
    t1, t2 = standard_templates(p, c)
    return [
        free_point(1),
        free_point(3),
        template_task(t1),
        divisor_task(degrees=(1, 3)),
        free_point(3),
        template_task(t1),
        template_task(t2),
        free_point(3),
        template_task(t1),
        free_point(1),
        template_task(t2),
        free_point(3),
        divisor_task(degrees=(1, 3)),
        free_point(3),
        template_task(t1),
    ]
