"""Routing engine tests: guards, per-pair budgets, potential accounting, case
transitions, the bounded-degree engines, and trace serialization."""

import math
import random

import pytest

from spannerkit import (
    ROUTING_FACTORS,
    AlreadyArrived,
    InvalidParameter,
    build_g9,
    build_g12,
    build_half_theta6,
    build_theta,
    classify_case,
    gen_random,
    potential,
    route_g9,
    route_g12,
    route_stateful,
    route_stateless,
    trace_from_json,
)
from spannerkit.routing import base_bound

from oracles import oracle_pair_bound

PAY_EPS = 1e-9


@pytest.fixture(scope="module")
def world():
    ps = gen_random(48, 301)
    h = build_half_theta6(ps)
    return h, build_g12(h), build_g9(h)


@pytest.fixture(scope="module")
def pairs(world):
    h, _, _ = world
    ids = sorted(p.id for p in h.points)
    rng = random.Random(99)
    return [tuple(rng.sample(ids, 2)) for _ in range(60)]


class TestGuards:
    def test_wrong_graph_kind(self, world):
        h, g12, g9 = world
        t6 = build_theta(h.points, 6)
        with pytest.raises(InvalidParameter):
            route_stateless(t6, 0, 1)
        with pytest.raises(InvalidParameter):
            route_g12(h, 0, 1)
        with pytest.raises(InvalidParameter):
            route_g9(g12, 0, 1)

    def test_unknown_ids(self, world):
        h, _, _ = world
        with pytest.raises(InvalidParameter):
            route_stateless(h, 0, 999)
        with pytest.raises(InvalidParameter):
            route_stateful(h, -5, 1)

    def test_source_equals_target(self, world):
        h, g12, g9 = world
        for router, g in (
            (route_stateless, h),
            (route_stateful, h),
            (route_g12, g12),
            (route_g9, g9),
        ):
            with pytest.raises(AlreadyArrived):
                router(g, 7, 7)

    def test_factor_table(self):
        assert ROUTING_FACTORS == {
            "stateless": 1.0,
            "stateful": 1.0,
            "g12": 19.0,
            "g9": 3.0,
        }


class TestBaseBound:
    def test_matches_alpha_formula_oracle(self, world, pairs):
        h, _, _ = world
        for s, t in pairs:
            value, started_negative = base_bound(h, s, t)
            ref, ref_positive = oracle_pair_bound(h, s, t)
            assert value == pytest.approx(ref, rel=1e-12)
            assert started_negative == (not ref_positive)

    def test_bound_brackets(self, world, pairs):
        # Positive pairs pay in [sqrt(3), 2]; negative pairs in [2, 5/sqrt(3)]
        # times the direct distance.
        h, _, _ = world
        for s, t in pairs:
            ps_, pt_ = h.points[s], h.points[t]
            d = math.hypot(pt_.x - ps_.x, pt_.y - ps_.y)
            value, started_negative = base_bound(h, s, t)
            if started_negative:
                assert 2.0 * d - 1e-9 <= value <= 5.0 / math.sqrt(3.0) * d + 1e-9
            else:
                assert math.sqrt(3.0) * d - 1e-9 <= value <= 2.0 * d + 1e-9


class TestPotential:
    def test_arrival_is_zero(self, world):
        h, _, _ = world
        pv = potential(h, 5, 5)
        assert pv.case == "arrived" and pv.value == 0.0

    def test_positive_away_from_arrival(self, world, pairs):
        h, _, _ = world
        for s, t in pairs:
            for algorithm in ("stateless", "stateful"):
                assert potential(h, s, t, algorithm=algorithm).value > 0.0

    def test_case_matches_classification(self, world, pairs):
        h, _, _ = world
        for s, t in pairs:
            assert potential(h, s, t).case == classify_case(h, s, t)["case"]

    def test_classification_shape(self, world, pairs):
        h, _, _ = world
        for s, t in pairs:
            cc = classify_case(h, s, t)
            if cc["positive"]:
                assert cc["case"] == "A" and cc["cone"] % 2 == 0
            else:
                assert cc["cone"] % 2 == 1
                both = cc["x1_nonempty"] and cc["x2_nonempty"]
                neither = not (cc["x1_nonempty"] or cc["x2_nonempty"])
                expected = "D" if both else ("B" if neither else "C")
                assert cc["case"] == expected

    def test_rejects_bad_arguments(self, world):
        h, g12, _ = world
        with pytest.raises(InvalidParameter):
            potential(h, 0, 1, algorithm="psychic")
        with pytest.raises(InvalidParameter):
            potential(g12, 0, 1)
        with pytest.raises(InvalidParameter):
            potential(h, 0, 999)


class TestFullEngines:
    @pytest.mark.parametrize("router", [route_stateless, route_stateful])
    def test_steps_pay_their_way(self, world, pairs, router):
        h, _, _ = world
        for s, t in pairs:
            tr = router(h, s, t)
            assert tr.passed
            assert tr.path()[0] == s and tr.path()[-1] == t
            assert len(set(tr.path())) == len(tr.path())
            total = 0.0
            for step in tr.steps:
                assert h.has_edge(step.source, step.target)
                assert step.phi_before - step.phi_after >= step.length - PAY_EPS
                assert step.phi_after >= 0.0
                total += step.length
            assert total == pytest.approx(tr.total_path_length, abs=1e-12)
            assert tr.steps[-1].phi_after == 0.0
            assert tr.total_path_length <= tr.bound + PAY_EPS

    @pytest.mark.parametrize("router", [route_stateless, route_stateful])
    def test_case_transitions(self, world, pairs, router):
        h, _, _ = world
        for s, t in pairs:
            tr = router(h, s, t)
            _, started_negative = base_bound(h, s, t)
            labels = [step.case for step in tr.steps]
            if not started_negative:
                assert "D" not in labels
            for prev, nxt in zip(labels, labels[1:]):
                if prev in ("A", "B", "C"):
                    assert nxt != "D"

    def test_deterministic(self, world):
        h, _, _ = world
        a = route_stateless(h, 3, 41)
        b = route_stateless(h, 3, 41)
        assert a == b
        assert a.to_json() == b.to_json()


class TestSubgraphEngines:
    @pytest.mark.parametrize("flavor", ["g12", "g9"])
    def test_terminates_within_budget(self, world, pairs, flavor):
        h, g12, g9 = world
        router, g = (route_g12, g12) if flavor == "g12" else (route_g9, g9)
        for s, t in pairs:
            tr = router(g, s, t)
            assert tr.passed
            assert tr.path()[0] == s and tr.path()[-1] == t
            assert tr.exploration_travel >= 0.0
            assert tr.probe_slack >= 0.0
            base, _ = base_bound(h, s, t)
            assert tr.bound == pytest.approx(
                ROUTING_FACTORS[flavor] * base + tr.probe_slack, rel=1e-12
            )
            spent = tr.total_path_length + tr.exploration_travel
            assert spent <= tr.bound + PAY_EPS
            assert spent == pytest.approx(
                sum(s_.length + s_.exploration for s_ in tr.steps), abs=1e-12
            )

    def test_deterministic(self, world):
        _, _, g9 = world
        a = route_g9(g9, 2, 30)
        b = route_g9(g9, 2, 30)
        assert a == b


class TestTraceSerialization:
    def test_round_trip(self, world):
        h, g12, g9 = world
        for tr in (
            route_stateless(h, 0, 40),
            route_stateful(h, 11, 23),
            route_g12(g12, 5, 44),
            route_g9(g9, 17, 8),
        ):
            text = tr.to_json()
            back = trace_from_json(text)
            assert back == tr
            assert back.to_json() == text

    def test_malformed_rejected(self):
        for text in ("{}", '{"steps": "no"}', '{"algorithm":"x","steps":[{}]}'):
            with pytest.raises(InvalidParameter):
                trace_from_json(text)
