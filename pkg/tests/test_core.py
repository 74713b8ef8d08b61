"""Value objects: validation, normalization, serialization round trips."""
from __future__ import annotations

import json
import math

import numpy as np
import pytest

from tiebreak import (
    ContestSpec,
    CostKind,
    EffortProfile,
    OutcomeDistribution,
    RandomTieRule,
    TieRule,
    ValidationError,
    Valuations,
    eventual_win_prob,
    make_contest,
    outcome_distribution,
    payoff,
)


class TestCostKind:
    def test_linear_cost_is_identity(self):
        assert CostKind.LINEAR.cost(0.7) == 0.7
        assert CostKind.LINEAR.cost(0.0) == 0.0

    def test_quadratic_cost_is_half_square(self):
        assert CostKind.QUADRATIC_HALF.cost(3.0) == 4.5
        assert CostKind.QUADRATIC_HALF.cost(0.2) == pytest.approx(0.02)

    def test_cost_accepts_arrays(self):
        x = np.array([0.0, 1.0, 2.0])
        np.testing.assert_allclose(CostKind.QUADRATIC_HALF.cost(x), [0.0, 0.5, 2.0])

    def test_coerce_from_string(self):
        assert CostKind.coerce("linear") is CostKind.LINEAR
        assert CostKind.coerce("quadratic_half") is CostKind.QUADRATIC_HALF
        assert CostKind.coerce(CostKind.LINEAR) is CostKind.LINEAR

    def test_coerce_rejects_unknown(self):
        with pytest.raises(ValidationError):
            CostKind.coerce("cubic")


class TestValuations:
    def test_orders_strongest_first(self):
        vals = Valuations(1.0, 2.0)
        assert (vals.v1, vals.v2, vals.swapped) == (2.0, 1.0, True)

    def test_keeps_order_when_already_sorted(self):
        vals = Valuations(2.0, 1.0)
        assert (vals.v1, vals.v2, vals.swapped) == (2.0, 1.0, False)

    def test_equal_prizes_not_marked_swapped(self):
        assert Valuations(1.5, 1.5).swapped is False

    def test_beta_is_prize_ratio(self):
        assert Valuations(3.0, 1.5).beta == 2.0

    @pytest.mark.parametrize("pair", [(0.0, 1.0), (1.0, -2.0), (math.nan, 1.0)])
    def test_rejects_nonpositive_or_nan(self, pair):
        with pytest.raises(ValidationError):
            Valuations(*pair)


class TestTieRule:
    def test_accepts_unit_interval(self):
        assert TieRule(0.0).q == 0.0
        assert TieRule(1.0).q == 1.0

    @pytest.mark.parametrize("q", [-0.1, 1.1, math.nan])
    def test_rejects_outside_unit_interval(self, q):
        with pytest.raises(ValidationError):
            TieRule(q)

    def test_coerce_accepts_rule_and_number(self):
        assert TieRule.coerce(TieRule(0.25)).q == 0.25
        assert TieRule.coerce(0.25).q == 0.25


class TestRandomTieRule:
    def test_from_pairs_and_mean(self):
        rule = RandomTieRule.from_pairs([(0.0, 0.5), (1.0, 0.5)])
        assert rule.mean_q == pytest.approx(0.5)
        assert rule.is_unbiased

    def test_point_mass(self):
        rule = RandomTieRule.from_pairs([(0.3, 1.0)])
        assert rule.mean_q == pytest.approx(0.3)
        assert not rule.is_unbiased

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            RandomTieRule.from_pairs([(0.0, 0.4), (1.0, 0.4)])

    def test_weights_must_be_positive(self):
        with pytest.raises(ValidationError):
            RandomTieRule.from_pairs([(0.0, -0.5), (1.0, 1.5)])

    def test_atom_rules_are_validated(self):
        with pytest.raises(ValidationError):
            RandomTieRule.from_pairs([(1.5, 1.0)])


class TestEffortProfile:
    def test_accessors(self):
        prof = EffortProfile(0.4, 0.1)
        assert prof.as_tuple() == (0.4, 0.1)
        assert prof.gap == pytest.approx(0.3)
        assert prof.ratio == pytest.approx(4.0)

    def test_rejects_negative_effort(self):
        with pytest.raises(ValidationError):
            EffortProfile(-0.1, 0.5)

    def test_ratio_undefined_at_zero_denominator(self):
        with pytest.raises(ValidationError):
            _ = EffortProfile(0.4, 0.0).ratio


class TestOutcomeDistribution:
    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            OutcomeDistribution(0.5, 0.4, 0.2)

    def test_probabilities_must_be_nonnegative(self):
        with pytest.raises(ValidationError):
            OutcomeDistribution(1.1, -0.1, 0.0)

    def test_valid_triple(self):
        dist = OutcomeDistribution(0.5, 0.3, 0.2)
        assert (dist.p1, dist.p2, dist.p0) == (0.5, 0.3, 0.2)


class TestContestSpec:
    def make(self, **overrides):
        kwargs = dict(family="jia-ratio", v1=2.0, v2=1.0, q=0.5, r=1.0, k=2)
        kwargs.update(overrides)
        return make_contest(**kwargs)

    def test_stores_caller_values_verbatim(self):
        spec = self.make(v1=2, v2=1)
        assert spec.v1 == 2 and spec.v2 == 1
        assert spec.q == 0.5

    def test_default_cost_by_family_class(self):
        assert self.make().cost is CostKind.LINEAR
        diff = make_contest(family="jia-diff", v1=1.0, v2=1.0, q=0.5, k=2)
        assert diff.cost is CostKind.QUADRATIC_HALF
        concave = make_contest(family="blavatskyy-power", v1=1.0, v2=1.0, q=0.5, r=1.0)
        assert concave.cost is CostKind.LINEAR

    def test_with_q_replaces_only_q(self):
        spec = self.make()
        other = spec.with_q(0.25)
        assert other.q == 0.25
        assert other.csf is spec.csf
        assert (other.v1, other.v2, other.cost) == (spec.v1, spec.v2, spec.cost)

    def test_json_round_trip_preserves_fields(self):
        spec = self.make()
        clone = ContestSpec.from_json(spec.to_json())
        assert clone.to_json() == spec.to_json()
        assert clone.family == "jia-ratio"
        assert clone.csf.k == 2

    def test_json_dict_shape(self):
        doc = self.make().to_json_dict()
        assert set(doc) == {"family", "params", "v1", "v2", "q", "cost"}
        assert doc["params"] == {"r": 1.0, "k": 2}

    def test_from_json_rejects_unknown_field(self):
        doc = self.make().to_json_dict()
        doc["extra"] = 1
        with pytest.raises(ValidationError):
            ContestSpec.from_json_dict(doc)

    def test_from_json_rejects_missing_field(self):
        doc = self.make().to_json_dict()
        del doc["v1"]
        with pytest.raises(ValidationError):
            ContestSpec.from_json_dict(doc)

    def test_from_json_rejects_malformed_text(self):
        with pytest.raises(ValidationError):
            ContestSpec.from_json("{not json")

    def test_to_json_is_indented_with_trailing_newline(self):
        text = self.make().to_json()
        assert text.endswith("\n")
        assert json.loads(text)["family"] == "jia-ratio"

    def test_valuations_and_tie_accessors(self):
        spec = make_contest(family="jia-ratio", v1=1.0, v2=3.0, q=0.25, r=1.0, k=2)
        assert spec.valuations.swapped is True
        assert spec.tie.q == 0.25


class TestPayoffs:
    def test_outcome_probabilities_sum_to_one(self):
        spec = make_contest(family="jia-ratio", v1=2.0, v2=1.0, q=0.5, r=1.0, k=2)
        dist = outcome_distribution(spec, (0.4, 0.1))
        assert dist.p1 + dist.p2 + dist.p0 == pytest.approx(1.0, abs=1e-12)

    def test_payoff_matches_manual_composition(self):
        spec = make_contest(family="jia-ratio", v1=2.0, v2=1.0, q=0.25, r=1.0, k=2)
        prof = EffortProfile(0.4, 0.1)
        dist = outcome_distribution(spec, prof)
        want1 = 2.0 * (dist.p1 + 0.25 * dist.p0) - 0.4
        want2 = 1.0 * (dist.p2 + 0.75 * dist.p0) - 0.1
        assert payoff(spec, prof, 1) == pytest.approx(want1, abs=1e-14)
        assert payoff(spec, prof, 2) == pytest.approx(want2, abs=1e-14)

    def test_quadratic_cost_enters_payoff(self):
        spec = make_contest(family="jia-diff", v1=2.0, v2=1.0, q=0.5, k=2)
        prof = EffortProfile(0.4, 0.1)
        dist = outcome_distribution(spec, prof)
        want = 2.0 * (dist.p1 + 0.5 * dist.p0) - 0.5 * 0.4**2
        assert payoff(spec, prof, 1) == pytest.approx(want, abs=1e-14)

    def test_eventual_win_probs_sum_to_one(self):
        spec = make_contest(family="vesperoni-diff", v1=1.0, v2=1.0, q=0.3, k=2)
        w1, w2 = eventual_win_prob(spec, (0.2, 0.5))
        assert w1 + w2 == pytest.approx(1.0, abs=1e-12)
        assert w2 > w1

    def test_player_index_validated(self):
        spec = make_contest(family="jia-ratio", v1=2.0, v2=1.0, q=0.5, r=1.0, k=2)
        with pytest.raises(ValidationError):
            payoff(spec, (0.1, 0.1), 3)
