import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from wordle_rollout.adaptive import (
    TERMINAL,
    BeliefVector,
    DPResult,
    HypothesisModel,
    InconsistentObservationError,
    InformationVector,
    belief_update,
    exact_information_dp,
    hypothesis_rollout_step,
    load_instance,
    lowest_probe_policy,
    number_search_model,
    policy_cost_under_hypothesis,
    value_space_step,
    wordle_model,
)
from wordle_rollout.game import GameError, filter_mysteries, initial_state
from wordle_rollout.heuristics import BaseHeuristicPolicy, base_policy_step
from wordle_rollout.oracle import (
    InstanceTooLargeError,
    make_sub_instance,
    optimal_expected_guesses,
    sub_config,
)
from wordle_rollout.rollout import RolloutConfig, select_rollout_guess


def brute_force_number_search(n):
    """Enumerate every depth-limited probing strategy for tiny n."""

    def solve(lo, hi):
        size = hi - lo + 1
        if size == 1:
            return Fraction(1)
        best = None
        for probe in range(lo, hi + 1):
            cost = Fraction(1)
            if probe > lo:
                cost += Fraction(probe - lo, size) * solve(lo, probe - 1)
            if probe < hi:
                cost += Fraction(hi - probe, size) * solve(probe + 1, hi)
            if best is None or cost < best:
                best = cost
        return best

    return solve(1, n)


@pytest.fixture(scope="module")
def wordle_sub(request):
    full_config = request.getfixturevalue("full_config")
    inst = make_sub_instance(full_config, seed=11, n_mysteries=18, n_guesses=90, mode="easy")
    sub = sub_config(inst, full_config)
    model, x0 = wordle_model(sub)
    return sub, model, x0


class TestBeliefVector:
    def test_validation(self):
        with pytest.raises(GameError):
            BeliefVector([0.5, 0.6])
        with pytest.raises(GameError):
            BeliefVector([-0.1, 1.1])

    def test_support_and_uniformity(self):
        b = BeliefVector.uniform_over([0, 2], 4)
        assert list(b.support()) == [0, 2]
        assert b.is_uniform_over_support()
        assert not BeliefVector([0.7, 0.3]).is_uniform_over_support()


class TestBeliefUpdate:
    def test_two_hypotheses_kill_one(self):
        model, x0 = number_search_model(2)
        b = BeliefVector.uniform(2)
        x1 = model.dynamics(x0, 2, 1)  # hidden=2, probe 1 -> greater
        nxt = belief_update(b, x0, 1, x1, model)
        assert list(nxt.probabilities) == [0.0, 1.0]

    def test_renormalization_example(self):
        model, x0 = number_search_model(3)
        b = BeliefVector([0.5, 0.25, 0.25])
        x1 = model.dynamics(x0, 2, 1)  # probe 1, observe "greater"
        nxt = belief_update(b, x0, 1, x1, model)
        assert nxt.probabilities == pytest.approx([0.0, 0.5, 0.5])

    def test_zeroed_hypothesis_stays_zero(self):
        model, x0 = number_search_model(3)
        b = BeliefVector([0.0, 0.5, 0.5])
        x1 = model.dynamics(x0, 3, 1)
        nxt = belief_update(b, x0, 1, x1, model)
        assert nxt.probabilities[0] == 0.0

    def test_inconsistent_observation_raises(self):
        model, x0 = number_search_model(3)
        b = BeliefVector.point_mass(0, 3)  # believe hidden == 1
        x1 = model.dynamics(x0, 3, 2)  # but observe "greater" after probing 2
        with pytest.raises(InconsistentObservationError):
            belief_update(b, x0, 2, x1, model)

    def test_wordle_stays_uniform_over_filtered(self, wordle_sub):
        sub, model, x0 = wordle_sub
        b = BeliefVector.uniform(len(sub.mysteries))
        gid, mid = 5, 7
        code = int(sub.core.matrix.table[gid, mid])
        if code == sub.core.all_green:
            mid = 8
            code = int(sub.core.matrix.table[gid, mid])
        x1 = filter_mysteries(x0, gid, code, sub)
        nxt = belief_update(b, x0, gid, x1, model)
        assert nxt.is_uniform_over_support()
        assert set(nxt.support()) == {int(m) for m in x1.eligible}


class TestInformationVector:
    def test_length_validation(self):
        with pytest.raises(GameError):
            InformationVector(states=[(1, 3)], controls=[2])

    def test_consistency_check(self):
        model, x0 = number_search_model(3)
        x1 = model.dynamics(x0, 3, 2)
        info = InformationVector(states=[x0, x1], controls=[2])
        assert info.consistent_hypotheses(model) == [2]  # only theta=3
        info.validate(model)


class TestValueSpaceStep:
    def test_point_mass_recovers_known_parameter_optimum(self):
        model, x0 = number_search_model(3)

        def exact_j(x):
            # knowing theta, one probe of theta finishes from any state
            return 1.0

        for theta_idx in range(3):
            b = BeliefVector.point_mass(theta_idx, 3)
            u = value_space_step(x0, b, lambda x: 1.0, model)
            # with J == 1 everywhere except terminal, probing theta itself is
            # the unique cost-1 control
            assert u == theta_idx + 1

    def test_flat_approximation_ties_resolved_deterministically(self):
        model, x0 = number_search_model(4)
        b = BeliefVector.uniform(4)
        u = value_space_step(x0, b, lambda x: 0.0, model)
        assert u == 1  # every control ties at cost 1; min control wins

    def test_entropy_approximation_reproduces_mig(self, wordle_sub):
        sub, model, x0 = wordle_sub
        state = x0
        gid, mid = 3, 2
        code = int(sub.core.matrix.table[gid, mid])
        if code != sub.core.all_green:
            state = filter_mysteries(x0, gid, code, sub)
        b = BeliefVector.uniform_over([int(m) for m in state.eligible], len(sub.mysteries))
        u = value_space_step(state, b, lambda x: math.log2(len(x.eligible)), model)
        assert u == base_policy_step(state, sub, "mig")


class TestHypothesisRolloutStep:
    def test_number_search_demo_probes_middle(self):
        model, x0 = number_search_model(3)
        b = BeliefVector.uniform(3)
        assert hypothesis_rollout_step(x0, b, lowest_probe_policy, model) == 2

    def test_point_mass_costs_match_single_hypothesis(self):
        model, x0 = number_search_model(5)
        theta = 4
        cost = policy_cost_under_hypothesis(x0, theta, lowest_probe_policy, model)
        assert cost == 4.0  # probes 1,2,3,4

    def test_matches_specialized_rollout(self, wordle_sub):
        sub, model, x0 = wordle_sub
        base = BaseHeuristicPolicy(sub, "mig")
        rcfg = RolloutConfig(base="mig", shortlist_size=len(sub.guesses))
        decision = select_rollout_guess(x0, sub, rcfg, base)
        scores = {e.guess: e.base_score for e in decision.table.entries}
        b = BeliefVector.uniform(len(sub.mysteries))

        def tie_break(x, ties):
            return min(ties, key=lambda u: (-scores[u], u))

        u = hypothesis_rollout_step(x0, b, base.select, model, tie_break=tie_break)
        assert u == decision.guess

    def test_divergent_base_policy_raises(self):
        from wordle_rollout.game import DivergenceError

        loop_model = HypothesisModel(
            hypotheses=(1,),
            dynamics=lambda x, t, u: x,  # no progress ever
            stage_cost=lambda x, t, u: 1.0,
            control_set=lambda x: [0],
            sim_cap=25,
        )
        with pytest.raises(DivergenceError):
            policy_cost_under_hypothesis((1, 1), 1, lambda x: 0, loop_model)


class TestExactInformationDP:
    def test_number_search_one(self):
        model, x0 = number_search_model(1)
        assert exact_information_dp(model, x0).cost == Fraction(1)

    def test_number_search_three_exact(self):
        model, x0 = number_search_model(3)
        result = exact_information_dp(model, x0)
        assert result.cost == Fraction(5, 3)
        assert result.control == 2
        assert result.cost == brute_force_number_search(3)

    def test_number_search_five_matches_enumeration(self):
        model, x0 = number_search_model(5)
        assert exact_information_dp(model, x0).cost == brute_force_number_search(5)

    def test_wordle_pair_is_three_halves(self, full_config):
        inst = make_sub_instance(full_config, seed=2, n_mysteries=2, n_guesses=12)
        sub = sub_config(inst, full_config)
        model, x0 = wordle_model(sub)
        assert exact_information_dp(model, x0).cost == Fraction(3, 2)

    def test_agrees_with_oracle_module(self, wordle_sub):
        sub, model, x0 = wordle_sub
        dp = exact_information_dp(model, x0, node_budget=500_000)
        oracle_value, _ = optimal_expected_guesses(sub)
        assert dp.cost == oracle_value

    def test_node_budget_enforced(self, wordle_sub):
        sub, model, x0 = wordle_sub
        with pytest.raises(InstanceTooLargeError):
            exact_information_dp(model, x0, node_budget=3)

    def test_horizon_zero_uses_terminal_cost(self):
        model, x0 = number_search_model(3)
        result = exact_information_dp(model, x0, horizon=0)
        assert result.cost == Fraction(0)

    def test_tree_text(self):
        model, x0 = number_search_model(3)
        text = exact_information_dp(model, x0).tree_text()
        assert "play 2" in text and "solved" in text


class TestLoadInstance:
    def test_number_search(self):
        model, x0 = load_instance({"type": "number-search", "n": 3})
        assert exact_information_dp(model, x0).cost == Fraction(5, 3)

    def test_wordle_sub(self, full_config):
        model, x0 = load_instance(
            {"type": "wordle-sub", "seed": 2, "mysteries": 2, "guesses": 12},
            parent=full_config,
        )
        assert exact_information_dp(model, x0).cost == Fraction(3, 2)

    def test_unknown_type(self):
        with pytest.raises(GameError):
            load_instance({"type": "bandit"})
