"""The ten acceptance criteria, one test each.

Every test prints a single ``criterion N <name>: PASS|FAIL`` line with the
check totals and the elapsed time against the budget, then asserts.
"""
from __future__ import annotations

import io
import time
from contextlib import redirect_stdout

import numpy as np
import pytest

from gradedlie import checks as C
from gradedlie.cli import main
from gradedlie.generic import build_generic, replay, standard_catalog
from gradedlie.glaformat import print_algebra

SEED = 20240601


def rng_for(k):
    return np.random.default_rng([SEED, k])


def verdict(capsys, number, name, results, elapsed, budget, extra=""):
    ok = all(r.ok for r in results) and elapsed < budget
    trials = sum(r.trials for r in results)
    failures = sum(r.failures for r in results)
    line = (f"criterion {number} {name}: {'PASS' if ok else 'FAIL'} checks={len(results)} "
            f"trials={trials} failures={failures} time={elapsed:.1f}s budget={budget}s")
    if extra:
        line += f" {extra}"
    with capsys.disabled():
        print("\n" + line)
        for r in results:
            if not r.ok:
                print("    " + r.render())
    return ok


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


@pytest.fixture(scope="module")
def chain30():
    def run():
        res, state = C.check_generic_chain(SEED, 30)
        return res + C.check_chain_transitivity(state, consecutive=True), state
    return timed(run)


def test_criterion_01_free_algebra_dims(capsys):
    res, dt = timed(lambda: C.check_witt_dims(max_total=4))
    assert res[0].trials == 15
    assert verdict(capsys, 1, "free-algebra-dims", res, dt, 10)


def test_criterion_02_submodularity_delta2(capsys):
    res, dt = timed(lambda: C.check_submodularity2(rng_for(2), 500, max_total=8))
    assert verdict(capsys, 2, "submodularity-delta2", res, dt, 120)


def test_criterion_03_submodularity_2strong(capsys):
    res, dt = timed(lambda: C.check_submodularity3(rng_for(3), 200))
    assert verdict(capsys, 3, "submodularity-2strong", res, dt, 300)


def test_criterion_04_gamma_kernel(capsys):
    res, dt = timed(lambda: C.check_key3(rng_for(4), 100, 50))
    assert verdict(capsys, 4, "gamma-kernel", res, dt, 300)


def test_criterion_05_free_amalgam(capsys):
    def run():
        r = rng_for(5)
        return C.check_amalgam_additivity(r, 200) + C.check_universal_property(r, 100) + C.check_basis_count(max_x1=2)
    res, dt = timed(run)
    assert verdict(capsys, 5, "free-amalgam-contract", res, dt, 300)


def test_criterion_06_extension_constructors(capsys):
    def run():
        r = rng_for(6)
        return C.check_point_adjunction(r, 200) + C.check_divisor_extension(r, 200) + C.check_no_zero_divisors(r, 100)
    res, dt = timed(run)
    assert verdict(capsys, 6, "extension-constructors", res, dt, 300)


def test_criterion_07_chain_preservation(capsys, chain30):
    (res, state), dt = chain30
    assert res[0].trials == 30 and len(state.chain_log) == 30
    applied = sum(rec.status == "applied" for rec in state.chain_log)
    assert verdict(capsys, 7, "chain-preservation", res, dt, 600, extra=f"applied={applied}")


def test_criterion_08_pregeometry(capsys):
    res, dt = timed(lambda: C.check_pregeometry(p=5, max_total=6))
    assert verdict(capsys, 8, "pregeometry", res, dt, 600, extra=res[0].note)


def test_criterion_09_bch(capsys):
    res, dt = timed(lambda: C.check_bch(rng_for(9), 10**4, triples=None))
    oracle = res[0].note
    assert oracle.startswith("p=5 commutator=")
    assert all(r.trials >= 10**4 for r in res if r.name in ("bch:exponent-p", "bch:class-at-most-3",
                                                              "bch:commutator-identity", "bch:round-trips"))
    assert verdict(capsys, 9, "bch-group", res, dt, 300, extra=f"oracle[{oracle}]")


def test_criterion_10_determinism(capsys, chain30):
    def verify_text():
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(["verify", "--seed", "42"])
        return code, buf.getvalue()

    t = time.perf_counter()
    (c1, first), (c2, second) = verify_text(), verify_text()
    (_, state), _ = chain30
    again = replay(SEED, state.chain_log)
    fresh = build_generic(SEED, standard_catalog(), 30, check=False)
    dt = time.perf_counter() - t
    same_report = first == second
    same_algebra = print_algebra(again.current) == print_algebra(state.current) == print_algebra(fresh.current)
    results = [C.CheckResult("verify-byte-identical", 1, 0 if same_report else 1),
               C.CheckResult("verify-all-pass", 2, int(c1 != 0) + int(c2 != 0)),
               C.CheckResult("replay-bit-identical", 1, 0 if same_algebra else 1)]
    assert verdict(capsys, 10, "determinism", results, dt, 600,
                   extra=f"report_lines={first.count(chr(10))}")
