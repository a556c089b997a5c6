"""Command-line front end.

Every command prints a line-oriented report to standard output.  The first
line echoes the command; each later line is ``key: value`` or a check verdict
``name: PASS|FAIL ...``.  The exit status is 0 iff every check passed.
Randomized commands require ``--seed``.
"""
from __future__ import annotations

import argparse
import sys
import zlib
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import checks as C
from .algebra import GradedHom, as_presented, generated_subalgebra, whole
from .amalgam import (
    divisor_extend,
    free_adjoin_point,
    free_amalgam,
    functor_F,
    gamma,
    strong_amalgam,
    sub_star_embedding,
)
from .bch import GroupView, solve_recovery_coefficients
from .fplinalg import DEFAULT_CAP
from .generic import build_generic, replay, standard_catalog
from .glaformat import fingerprint, load_algebra, parse_element, print_algebra
from .predim import classify_extension, css, delta, is_strong, kc_membership


class Report:
    def __init__(self, echo):
        self.lines = [echo]
        self.failed = False

    def add(self, key, value):
        self.lines.append(f"{key}: {value}")

    def check(self, result):
        self.lines.append(result.render())
        if not result.ok:
            self.failed = True

    def text(self):
        return "\n".join(self.lines) + "\n"


def _load(path):
    return load_algebra(Path(path).read_text())


def _sub(m, exprs):
    if not exprs:
        return whole(m)
    return generated_subalgebra(m, [parse_element(m, e) for e in exprs])


def _describe_sub(s):
    m = s.parent
    gens = []
    for d in range(1, m.c + 1):
        for row in s.part(d).basis:
            gens.append(m.format(m.homogeneous(d, row)))
    return f"dims={s.dims} basis=[{'; '.join(gens)}]"


def _emit_algebra(rep, m, out):
    text = print_algebra(m)
    if out:
        Path(out).write_text(text)
        rep.add("written", out)
    else:
        rep.lines.extend(text.rstrip("\n").split("\n"))
    rep.add("dims", m.dims)
    rep.add("fingerprint", fingerprint(m))


def _maps(m_src, m_dst, pairs):
    images = {}
    for item in pairs or []:
        name, _, expr = item.partition("=")
        images[name.strip()] = parse_element(m_dst, expr)
    return GradedHom(m_src, m_dst, images)


# commands


def cmd_delta(args, rep):
    m = _load(args.file)
    rep.add("delta", delta(_sub(m, args.sub)).render())


def cmd_strong(args, rep):
    m = _load(args.file)
    s = _sub(m, args.sub)
    r = is_strong(s, level=args.level, bound_k=args.bound_k, cap=args.cap, best_witness=True)
    rep.add("subalgebra", _describe_sub(s))
    rep.add("strong", f"{'yes' if r.holds else 'no'} level={args.level or m.c} mode={r.mode} checked={r.checked}")
    if not r.holds:
        rep.add("witness", f"{_describe_sub(r.witness)} delta_{r.level}={r.witness_delta} base={r.base_delta}")
        rep.failed = True


def cmd_css(args, rep):
    m = _load(args.file)
    s = _sub(m, args.sub)
    cl = css(s, level=args.level, bound_k=args.bound_k, cap=args.cap)
    rep.add("closure", _describe_sub(cl))
    rep.add("delta", delta(cl).render())
    rep.add("mode", "exact" if args.bound_k is None else f"bounded({args.bound_k})")


def cmd_classify(args, rep):
    m = _load(args.file)
    u = _sub(m, args.inner)
    v = u.join(_sub(m, args.outer))
    rep.add("inner", _describe_sub(u))
    rep.add("outer", _describe_sub(v))
    rep.add("kind", classify_extension(u, v, cap=args.cap))


def cmd_kc(args, rep):
    m = _load(args.file)
    r = kc_membership(m, method=args.method, cap=args.cap)
    rep.add("member", "yes" if r.member else "no")
    rep.add("no-zero-divisors", "yes" if r.condition1 else "no")
    rep.add("small-subalgebras-strong", {True: "yes", False: "no", None: "-"}[r.condition2])
    rep.add("method", r.method)
    if r.violations:
        kind, w, *_ = r.violations[0]
        if kind == "zero-divisor":
            i, x, j, y = w
            shown = f"[{m.format(m.homogeneous(i, x))}, {m.format(m.homogeneous(j, y))}] = 0"
        elif kind == "numeric":
            shown = f"{w[0]} {_describe_sub(w[1])}"
        else:
            shown = _describe_sub(w)
        rep.add("violation", f"{kind} {shown}")
    rep.failed = not r.member


def cmd_amalgam(args, rep):
    a, c, b = _load(args.left), _load(args.right), _load(args.base)
    f = _maps(b, a, args.map_left)
    g = _maps(b, c, args.map_right)
    if args.strong:
        res = strong_amalgam(a, c, f, g, n=args.n, cap=args.cap)
        rep.add("absorbed", len(res.absorbed))
    else:
        res = free_amalgam(a, c, f, g)
    d = res.product
    da, dc, db, dd = (delta(x).delta for x in (a, c, b, d))
    rep.add("delta", f"A={da} C={dc} B={db} D={dd} A+C-B={da + dc - db}")
    _emit_algebra(rep, d, args.out)


def cmd_adjoin(args, rep):
    m = _load(args.file)
    res = free_adjoin_point(m, args.degree, name=args.name)
    rep.add("delta", f"before={delta(m).delta} after={delta(res.product).delta}")
    _emit_algebra(rep, res.product, args.out)


def cmd_divisor(args, rep):
    m = _load(args.file)
    res = divisor_extend(m, parse_element(m, args.b), parse_element(m, args.e), name=args.name)
    rep.add("solution", res.product.format(res.solution))
    rep.add("delta", f"before={delta(m).delta} after={delta(res.product).delta}")
    _emit_algebra(rep, res.product, args.out)


def cmd_functor(args, rep):
    m = _load(args.file)
    f = functor_F(m)
    rep.add("delta", delta(f).render())
    _emit_algebra(rep, f, args.out)


def cmd_gamma(args, rep):
    m = _load(args.file)
    s = _sub(m, args.sub)
    h = sub_star_embedding(s)
    g, kd = gamma(h)
    rep.add("subalgebra", _describe_sub(s))
    rep.add("kernel-dims", tuple(int(x) for x in kd))
    d2b, d2a = delta(h.source).delta_2, delta(m).delta_2
    rep.add("delta2", f"B={d2b} A={d2a}")


def cmd_generic(args, rep):
    state = build_generic(args.seed, standard_catalog(), args.steps, cap=args.cap, check=True)
    journal = [r.render() for r in state.chain_log]
    for line in journal:
        rep.lines.append(line)
    again = replay(args.seed, state.chain_log, cap=args.cap)
    same = fingerprint(again.current) == fingerprint(state.current)
    rep.check(C.CheckResult("replay", 1, 0 if same else 1))
    rep.add("final-dims", state.current.dims)
    rep.add("final-delta", delta(state.current).render())
    rep.add("fingerprint", fingerprint(state.current))
    if args.out:
        Path(args.out).write_text(print_algebra(state.current) + "".join(f"# {x}\n" for x in journal))
        rep.add("written", args.out)


def cmd_bch(args, rep):
    m = as_presented(_load(args.file))
    g = GroupView(m)
    rep.add("order", f"{m.p}^{m.total_dim}")
    coef = solve_recovery_coefficients(m.p)
    rep.add("recovery-oracle", coef.render())
    if args.check_roundtrip:
        n, p = m.total_dim, m.p
        if args.seed is not None:
            rng = np.random.default_rng(args.seed)
            xs = rng.integers(0, p, size=(args.trials, n))
            ys = rng.integers(0, p, size=(args.trials, n))
            rep.add("pairs", f"random seed={args.seed} count={args.trials}")
        else:
            pts = _deterministic_points(n, p)
            xs = np.repeat(pts, len(pts), axis=0)
            ys = np.tile(pts, (len(pts), 1))
            rep.add("pairs", f"{'all' if len(pts) == p ** n else 'basis-and-sums'} count={len(xs)}")
        x, y = g.batch(xs), g.batch(ys)
        for name, fn, native in (("recover-bracket", g.recover_bracket, g.native_bracket),
                                 ("recover-sum", g.recover_sum, g.native_sum)):
            ok = fn(x, y).equal_rows(native(x, y))
            bad = int((~ok).sum())
            wit = "" if not bad else f"x={xs[int(np.argmin(ok))].tolist()} y={ys[int(np.argmin(ok))].tolist()}"
            rep.check(C.CheckResult(f"bch:{name}", len(xs), bad, witness=wit))


def _deterministic_points(n, p, limit=4):
    """Every vector when p^n is small, else the basis vectors and their pairwise sums."""
    if n <= limit:
        return np.array(list(np.ndindex(*([p] * n))), dtype=np.int64).reshape(-1, n)
    eye = np.eye(n, dtype=np.int64)
    sums = [eye[i] + eye[j] for i in range(n) for j in range(i + 1, n)]
    return np.vstack([np.zeros((1, n), dtype=np.int64), eye] + ([np.array(sums)] if sums else []))


# verify


def _suites(trials):
    t = trials
    small = max(1, t // 10)
    tiny = max(1, t // 50)
    return [
        ("fp-linalg", lambda r: C.check_linear_algebra(r, t)),
        ("free-lie:dims", lambda r: C.check_witt_dims()),
        ("free-lie:identities", lambda r: C.check_lie_identities(r, t)),
        ("algebra:presentations", lambda r: C.check_presentations(r, small)),
        ("predim:delta-routes", lambda r: C.check_delta_routes(r, t)),
        ("predim:submodularity2", lambda r: C.check_submodularity2(r, t)),
        ("predim:submodularity3", lambda r: C.check_submodularity3(r, small)),
        ("predim:class-routes", lambda r: C.check_kc_routes(r, small)),
        ("predim:strong-laws", lambda r: C.check_strong_laws(r, tiny)),
        ("predim:closure", lambda r: C.check_css(r, tiny)),
        ("predim:top-generators", lambda r: C.check_top_generators(r, small)),
        ("amalgam:functor", lambda r: C.check_key3(r, small, tiny) + C.check_functor(r, small)),
        ("amalgam:additivity", lambda r: C.check_amalgam_additivity(r, small)),
        ("amalgam:universal", lambda r: C.check_universal_property(r, small)),
        ("amalgam:basis-count", lambda r: C.check_basis_count()),
        ("amalgam:points", lambda r: C.check_point_adjunction(r, small)),
        ("amalgam:divisors", lambda r: C.check_divisor_extension(r, small)),
        ("amalgam:zero-divisors", lambda r: C.check_no_zero_divisors(r, small)),
        ("amalgam:strong", lambda r: C.check_strong_amalgam(r, tiny)),
        ("amalgam:free-join", lambda r: C.check_free_join_claim(r, tiny)),
        ("amalgam:independence", lambda r: C.check_independence_axioms(r, small)),
        ("amalgam:enlargement", lambda r: C.check_one_point_enlargement(r, small)),
        ("amalgam:factorization", lambda r: C.check_functor_factorization(r, small)),
        ("generic", None),
        ("geometry", lambda r: C.check_pregeometry()),
        ("bch", lambda r: C.check_bch(r, max(t, 1), triples=10**4)),
    ]


def _run_suite(job):
    name, seed, trials = job
    fn = dict(_suites(trials))[name]
    if fn is None:
        steps = max(1, trials // 10)

        def fn(_):
            res, state = C.check_generic_chain(seed, steps)
            return res + C.check_chain_transitivity(state) + C.check_replay(seed, steps)
    rng = np.random.default_rng([seed, zlib.crc32(name.encode())])
    try:
        out = fn(rng)
    except Exception as exc:  # reported as a failed check, not a crash
        return name, [f"{name}: FAIL trials=0 failures=1 error={type(exc).__name__}: {exc}"], False
    return name, [r.render() for r in out], all(r.ok for r in out)


def run_verify(seed, trials, jobs=1, only=None):
    """Returns (lines, all_passed); lines are in suite order whatever the job count."""
    names = [n for n, _ in _suites(trials) if only is None or n in only]
    work = [(n, seed, trials) for n in names]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            done = list(ex.map(_run_suite, work))
    else:
        done = [_run_suite(w) for w in work]
    done.sort(key=lambda x: names.index(x[0]))
    lines = []
    ok = True
    for name, rendered, passed in done:
        lines.extend(rendered)
        ok &= passed and all(": PASS " in x for x in rendered)
    return lines, ok


def cmd_verify(args, rep):
    lines, ok = run_verify(args.seed, args.trials, args.jobs, args.suite)
    rep.lines.extend(lines)
    failed = sum(": FAIL " in x for x in lines)
    rep.add("summary", f"checks={len(lines)} failed={failed}")
    rep.failed = not ok


# parser


def build_parser():
    ap = argparse.ArgumentParser(prog="gla", description="Graded nilpotent Lie algebras over F_p.")
    sub = ap.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
        return sp

    def sub_args(sp, flag="--sub", dest="sub"):
        sp.add_argument(flag, dest=dest, action="append", metavar="EXPR",
                        help="generator of the subalgebra, e.g. 'x' or '2*[x,y]' (repeatable; default: everything)")

    sp = cmd("delta", cmd_delta, "o-dims, ideal dims and predimensions")
    sp.add_argument("file")
    sub_args(sp)

    for name, fn, help_ in (("strong", cmd_strong, "is the subalgebra strong"),
                            ("css", cmd_css, "self-sufficient closure")):
        sp = cmd(name, fn, help_)
        sp.add_argument("file")
        sub_args(sp)
        sp.add_argument("--level", type=int, choices=(2, 3))
        sp.add_argument("--bound-k", type=int, help="only test extensions of o-dim <= k")

    sp = cmd("classify", cmd_classify, "kind of the extension U < <U V>")
    sp.add_argument("file")
    sub_args(sp, "--inner", "inner")
    sub_args(sp, "--outer", "outer")

    sp = cmd("kc-check", cmd_kc, "membership in the amalgamation class")
    sp.add_argument("file")
    sp.add_argument("--method", default="auto", choices=("auto", "numeric", "definitional", "both"))

    sp = cmd("amalgam", cmd_amalgam, "free (or strong) amalgam of A and C over B")
    sp.add_argument("left", help="A")
    sp.add_argument("right", help="C")
    sp.add_argument("--base", required=True, help="B")
    sp.add_argument("--map-left", action="append", metavar="NAME=EXPR", help="image of a B generator in A")
    sp.add_argument("--map-right", action="append", metavar="NAME=EXPR", help="image of a B generator in C")
    sp.add_argument("--strong", action="store_true", help="absorb shared divisor problems first")
    sp.add_argument("--n", type=int, default=3, help="bounded strongness level for --strong")
    sp.add_argument("--out")

    sp = cmd("adjoin", cmd_adjoin, "adjoin a free generator")
    sp.add_argument("file")
    sp.add_argument("--degree", type=int, required=True)
    sp.add_argument("--name", default="x")
    sp.add_argument("--out")

    sp = cmd("divisor", cmd_divisor, "adjoin a solution of [b, x] = e")
    sp.add_argument("file")
    sp.add_argument("--b", required=True, metavar="EXPR")
    sp.add_argument("--e", required=True, metavar="EXPR")
    sp.add_argument("--name", default="x")
    sp.add_argument("--out")

    sp = cmd("functor-f", cmd_functor, "class-3 algebra of a class-2 member")
    sp.add_argument("file")
    sp.add_argument("--out")

    sp = cmd("gamma", cmd_gamma, "kernel of the induced map for a subalgebra of a class-2 member")
    sp.add_argument("file")
    sub_args(sp)

    sp = cmd("generic-build", cmd_generic, "seeded chain of strong extensions")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--steps", type=int, default=30)
    sp.add_argument("--out", help="final algebra followed by the step journal")

    sp = cmd("bch", cmd_bch, "group of an algebra via the BCH formula")
    sp.add_argument("file")
    sp.add_argument("--check-roundtrip", action="store_true")
    sp.add_argument("--seed", type=int, help="random pairs instead of the fixed pair set")
    sp.add_argument("--trials", type=int, default=1000)

    sp = cmd("verify", cmd_verify, "run the invariant suites")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    sp.add_argument("--out", help="also write the report here")
    return ap


def _echo(argv):
    return "# gla " + " ".join(argv)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    rep = Report(_echo(argv))
    try:
        args.func(args, rep)
    except (ValueError, RuntimeError, OSError) as exc:
        rep.add("error", f"{type(exc).__name__}: {exc}")
        sys.stdout.write(rep.text())
        return 2
    text = rep.text()
    sys.stdout.write(text)
    out = getattr(args, "out", None)
    if args.command == "verify" and out:
        Path(out).write_text(text)
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
