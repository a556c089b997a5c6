from __future__ import annotations

import numpy as np

from gradedlie import checks as C
from gradedlie.predim import kc_membership


def test_render_and_shortfall():
    r = C.CheckResult("x:y", 3, 0, wanted=5, note="n=1")
    assert not r.ok
    assert r.render() == "x:y: FAIL trials=3 failures=0 wanted=5 n=1"
    assert C.CheckResult("x:y", 5, 0, wanted=5).render() == "x:y: PASS trials=5 failures=0"
    assert not C.CheckResult("x:y", 5, 1, witness="w").ok


def test_tensor_span_oracle_small_cases():
    assert C.tensor_span_dims([1, 1], 3, 5) == (2, 1, 2)
    assert C.tensor_span_dims([1, 2], 3, 5) == (1, 1, 1)
    assert C.tensor_span_dims([1], 2, 5) == (1, 0)


def test_small_containers_are_distinct_members():
    cs = C.small_containers(max_total=3)
    dims = [m.dims for m in cs]
    assert (1, 0, 0) in dims and (0, 0, 3) in dims and (1, 1, 1) in dims
    assert all(kc_membership(m).member for m in cs)
    for i, a in enumerate(cs):
        for b in cs[i + 1:]:
            if a.dims == b.dims:
                assert not C._same_container(a, b)


def test_orbit_representatives_agree_with_literal_run():
    cs = [m for m in C.small_containers(max_total=5) if m.dims in ((0, 3, 0), (0, 3, 1), (0, 2, 2))]
    literal = C.check_pregeometry(containers=cs, literal_limit=10**6)
    orbit = C.check_pregeometry(containers=cs, literal_limit=0)
    assert "orbit-representatives=0" in literal[0].note
    assert f"orbit-representatives={len(cs)}" in orbit[0].note
    assert all(r.ok for r in literal + orbit)
    assert all(r.trials > 0 for r in literal[1:] + orbit[1:4])


def test_fast_checks_pass():
    rng = np.random.default_rng(0)
    results = (C.check_linear_algebra(rng, 10) + C.check_witt_dims(max_total=3) + C.check_basis_count(max_x1=1)
               + C.check_point_adjunction(rng, 5) + C.check_divisor_extension(rng, 5)
               + C.check_one_point_enlargement(rng, 5) + C.check_functor_factorization(rng, 5))
    for r in results:
        assert r.ok, r.render()


def test_chain_checks_pass():
    res, state = C.check_generic_chain(3, 6)
    res += C.check_chain_transitivity(state) + C.check_replay(3, 6)
    for r in res:
        assert r.ok, r.render()
