from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from gradedlie.amalgam import solvable
from gradedlie.freelie import build_free_algebra
from gradedlie.generic import (
    BuilderState,
    build_generic,
    chain_embedding,
    divisor_saturate,
    divisor_task,
    free_point,
    replay,
    richness_step,
    schedule,
    standard_catalog,
)
from gradedlie.glaformat import fingerprint, print_algebra
from gradedlie.predim import delta, is_strong, kc_membership


def test_zero_steps_is_zero_algebra():
    s = build_generic(1, [free_point(1)], 0)
    assert s.current.dims == (0, 0, 0)
    assert len(s.chain) == 1


def test_three_free_points():
    s = build_generic(7, [free_point(1)], 3)
    assert s.current.dims == build_free_algebra(5, 3, [("a", 1), ("b", 1), ("c", 1)]).dims
    assert delta(s.current).delta == 3
    assert [r.profile.delta for r in s.chain_log] == [1, 2, 3]


def test_single_point_step():
    s = richness_step(BuilderState.start(0), free_point(1))
    assert s.current.dims == (1, 0, 0)
    assert delta(s.current).delta == 1


def test_divisor_step_solves_problem():
    s = BuilderState.start(0)
    richness_step(s, free_point(1))
    richness_step(s, free_point(3))
    m = s.current
    b, e = m.homogeneous(1, [1]), m.homogeneous(3, [1])
    assert solvable(m, b, e) is None
    richness_step(s, divisor_task(b, e))
    new, emb = s.current, s.chain_log[-1].embedding
    assert new.dims == (1, 1, 1)
    assert solvable(new, emb.apply(b), emb.apply(e)) is not None
    assert delta(new).delta == delta(m).delta


def test_divisor_saturate():
    s = build_generic(0, [free_point(1)], 1)
    before = fingerprint(s.current)
    divisor_saturate(s, 3)
    assert fingerprint(s.current) == before
    divisor_saturate(s, 0)
    assert fingerprint(s.current) == before
    s = BuilderState.start(0)
    richness_step(s, free_point(1))
    richness_step(s, free_point(3))
    d0 = delta(s.current).delta
    divisor_saturate(s, 1)
    assert s.current.dims == (1, 1, 1)
    assert delta(s.current).delta == d0


def test_schedule_is_round_robin():
    cat = standard_catalog()
    order = schedule(3, cat, 2 * len(cat))
    first, second = order[: len(cat)], order[len(cat):]
    assert sorted(map(id, first)) == sorted(map(id, cat)) == sorted(map(id, second))
    assert schedule(3, cat, 5) == order[:5]


@settings(max_examples=5)
@given(st.integers(0, 2**32 - 1))
def test_replay_is_bit_identical(seed):
    s = build_generic(seed, standard_catalog(), 8)
    again = replay(seed, s.chain_log)
    assert print_algebra(again.current) == print_algebra(s.current)
    assert [r.fingerprint for r in again.chain_log] == [r.fingerprint for r in s.chain_log]


@settings(max_examples=5)
@given(st.integers(0, 2**32 - 1))
def test_chain_is_strong_and_in_class(seed):
    s = build_generic(seed, standard_catalog(), 8)
    assert kc_membership(s.current).member
    for i in range(len(s.chain) - 1):
        assert is_strong(chain_embedding(s, i, len(s.chain) - 1).image()).holds
