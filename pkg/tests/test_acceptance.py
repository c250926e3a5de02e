"""Acceptance suite: one test per release criterion, each printing a
pass/fail line with the measured numbers.

The benchmark sweeps share policy banks (decision memos reused across
openers), which is what keeps a 104-sweep improvement matrix tractable on
one core.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from wordle_rollout import lexicon
from wordle_rollout.bench import TABLE1_OPENERS, _PolicyBank, _sweep_counts
from wordle_rollout.game import initial_state, filter_mysteries
from wordle_rollout.heuristics import base_policy_step, BaseHeuristicPolicy
from wordle_rollout.lexicon import compute_feedback, pattern_to_trits, trits_to_pattern
from wordle_rollout.oracle import make_sub_instance, sub_config, verify_ordering
from wordle_rollout.rollout import RolloutConfig, select_rollout_guess

from tests.test_lexicon import reference_feedback

SIX_LETTER_OPENERS = ("raised", "crates", "earths")


def report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def sweeps(full_config):
    """All Table 1/2 sweep means: (opener, mode, policy) -> mean, plus the
    wall time of the cold salet easy rollout sweep."""
    config = full_config
    means: dict[tuple[str, str, str], float] = {}
    timings: dict[str, float] = {}
    n = len(config.core.mysteries)

    def run_group(mode: str, tag: str, policies: tuple[str, ...]):
        bank = _PolicyBank(config)
        for policy in policies:
            for opener in TABLE1_OPENERS:
                gid = config.guess_id(opener)
                started = time.perf_counter()
                counts = _sweep_counts(bank, gid, mode, policy, 10, workers=1)
                elapsed = time.perf_counter() - started
                means[(opener, mode, policy)] = sum(counts) / n
                if (opener, mode, policy) == ("salet", "easy", "rollout-mig"):
                    timings["salet_easy_rollout"] = elapsed

    run_group("easy", "mig", ("mig", "rollout-mig"))
    run_group("hard", "mig", ("mig", "rollout-mig"))
    run_group("hard", "mrd", ("mrd", "rollout-mrd"))
    run_group("hard", "gep", ("gep", "rollout-gep"))
    return means, timings


class TestTableRegressions:
    def test_table1_easy_mig(self, sweeps):
        means, timings = sweeps
        base = means[("salet", "easy", "mig")]
        roll = means[("salet", "easy", "rollout-mig")]
        ok = abs(base - 3.6108) <= 0.03 and abs(roll - 3.4345) <= 0.03
        runtime = timings["salet_easy_rollout"]
        ok = ok and runtime <= 600.0
        report(
            "table1-easy-mig",
            ok,
            f"base {base:.4f} (target 3.6108±0.03), rollout {roll:.4f} "
            f"(target 3.4345±0.03), rollout sweep {runtime:.1f}s (limit 600s)",
        )

    def test_table1_hard_mig(self, sweeps):
        means, _ = sweeps
        base = means[("salet", "hard", "mig")]
        roll = means[("salet", "hard", "rollout-mig")]
        within = roll <= 3.5084 * 1.01
        ok = abs(base - 3.6078) <= 0.03 and abs(roll - 3.5231) <= 0.03 and within
        report(
            "table1-hard-mig",
            ok,
            f"base {base:.4f} (target 3.6078±0.03), rollout {roll:.4f} "
            f"(target 3.5231±0.03), {100 * (roll / 3.5084 - 1):+.2f}% vs optimal "
            f"3.5084 (limit +1.0%)",
        )

    def test_improvement_sweep(self, sweeps):
        means, _ = sweeps
        pairings = [("mig", "easy", True), ("mig", "hard", True),
                    ("mrd", "hard", False), ("gep", "hard", True)]
        worst = None
        for tag, mode, strict in pairings:
            for opener in TABLE1_OPENERS:
                base = means[(opener, mode, tag)]
                roll = means[(opener, mode, f"rollout-{tag}")]
                gap = base - roll
                if worst is None or gap < worst[0]:
                    worst = (gap, opener, mode, tag)
                if strict:
                    assert roll < base, (
                        f"{opener}/{mode}/{tag}: rollout {roll:.4f} not strictly "
                        f"below base {base:.4f}"
                    )
                else:
                    assert roll <= base, (
                        f"{opener}/{mode}/{tag}: rollout {roll:.4f} above base {base:.4f}"
                    )
        report(
            "improvement-sweep",
            True,
            f"rollout <= base across {len(pairings) * len(TABLE1_OPENERS)} pairings; "
            f"smallest gap {worst[0]:+.4f} at {worst[1]}/{worst[2]}/{worst[3]}",
        )

    def test_gep_rescue(self, sweeps):
        means, _ = sweeps
        base = means[("salet", "hard", "gep")]
        roll = means[("salet", "hard", "rollout-gep")]
        within_band = abs(roll - 3.5352) <= 0.05
        within_optimal = roll <= 3.5084 * 1.015
        ok = within_band and within_optimal and roll < base
        report(
            "gep-rescue",
            ok,
            f"rollout-gep {roll:.4f} (target 3.5352±0.05, "
            f"{100 * (roll / 3.5084 - 1):+.2f}% vs optimal, limit +1.5%); "
            f"base gep {base:.4f} (paper's own implementation landed near 5.87; "
            f"ours is the spec's fixed cell-count formula)",
        )


class TestOracleOrdering:
    def test_ordering_suite(self, full_config):
        started = time.perf_counter()
        checked = 0
        for seed in range(10):
            for mode, n_mys, n_guess in (("easy", 25, 150), ("hard", 20, 120)):
                inst = make_sub_instance(
                    full_config, seed=3000 + seed, n_mysteries=n_mys,
                    n_guesses=n_guess, mode=mode,
                )
                sub = sub_config(inst, full_config)
                rep = verify_ordering(sub, instance=inst)
                assert rep.violations == [], f"seed {seed} {mode}: {rep.violations}"
                for row in rep.rows:
                    assert isinstance(row.optimal, Fraction)
                    assert row.optimal <= row.rollout_cost <= row.base_cost
                checked += 1
        elapsed = time.perf_counter() - started
        ok = checked >= 20 and elapsed <= 60.0
        report(
            "oracle-ordering",
            ok,
            f"{checked} instances x 3 heuristics, exact rational ordering, "
            f"{elapsed:.1f}s (limit 60s)",
        )


class TestFeedbackSemantics:
    def test_feedback_suite(self, full_config, rng):
        core = full_config.core
        started = time.perf_counter()
        # 200 x 200 exhaustive cross against the independent reference
        words = [core.guess_texts[i] for i in rng.choice(len(core.guesses), 200, replace=False)]
        for g in words:
            for m in words:
                assert compute_feedback(g, m) == reference_feedback(g, m)
        # 1e5 random full-list pairs, matrix vs reference
        gs = rng.integers(0, len(core.guesses), 100_000)
        ms = rng.integers(0, len(core.mysteries), 100_000)
        table = core.matrix.table
        for g, m in zip(gs, ms):
            assert table[g, m] == reference_feedback(
                core.guess_texts[g], core.mystery_texts[m]
            )
        # partition cells sum to |M| for sampled guesses
        state = initial_state(full_config)
        for g in rng.choice(len(core.guesses), 50, replace=False):
            column = table[int(g), state.eligible]
            _, counts = np.unique(column, return_counts=True)
            assert counts.sum() == 2315
        # encoding round-trip, exhaustive
        for code in range(3**5):
            assert trits_to_pattern(pattern_to_trits(code, 5)) == code
        report(
            "feedback-semantics",
            True,
            f"200x200 cross + 100k random pairs vs independent reference, "
            f"partition sums, exhaustive round-trip ({time.perf_counter() - started:.1f}s)",
        )


class TestGenericEquivalence:
    def test_equivalence_suite(self, full_config, rng):
        import math

        from wordle_rollout.adaptive import (
            BeliefVector,
            exact_information_dp,
            hypothesis_rollout_step,
            number_search_model,
            value_space_step,
            wordle_model,
        )

        checked = 0
        seeds = (401, 402, 403, 404, 405)
        for seed in seeds:
            inst = make_sub_instance(
                full_config, seed=seed, n_mysteries=14, n_guesses=70, mode="easy"
            )
            sub = sub_config(inst, full_config)
            model, x0 = wordle_model(sub)
            base = BaseHeuristicPolicy(sub, "mig")
            local = np.random.default_rng(seed)
            states = []
            while len(states) < 10:
                st = x0
                for _ in range(int(local.integers(0, 3))):
                    g = int(local.integers(len(sub.guesses)))
                    m = int(local.choice(st.eligible))
                    code = int(sub.core.matrix.table[g, m])
                    if code == sub.core.all_green:
                        continue
                    st = filter_mysteries(st, g, code, sub)
                if len(st.eligible) >= 2:
                    states.append(st)
            for st in states:
                belief = BeliefVector.uniform_over(
                    [int(i) for i in st.eligible], len(sub.mysteries)
                )
                u_value = value_space_step(
                    st, belief, lambda x: math.log2(len(x.eligible)), model
                )
                assert u_value == base_policy_step(st, sub, "mig")
                decision = select_rollout_guess(
                    st, sub, RolloutConfig(base="mig", shortlist_size=len(sub.guesses)), base
                )
                scores = {e.guess: e.base_score for e in decision.table.entries}

                def tie_break(x, ties, scores=scores):
                    return min(ties, key=lambda u: (-scores[u], u))

                u_roll = hypothesis_rollout_step(
                    st, belief, base.select, model, tie_break=tie_break
                )
                assert u_roll == decision.guess
                checked += 1
        model3, x03 = number_search_model(3)
        dp = exact_information_dp(model3, x03)
        assert dp.cost == Fraction(5, 3) and dp.control == 2
        report(
            "generic-equivalence",
            checked >= 50,
            f"{checked} states decision-identical for value-space=MIG and "
            f"hypothesis-rollout=rollout; number-search DP(3) = 5/3 exactly",
        )


class TestSixLetterTrend:
    def test_trend(self, six_config):
        config = six_config
        n = len(config.core.mysteries)
        gaps = []
        for mode in ("easy", "hard"):
            bank = _PolicyBank(config)
            for opener in SIX_LETTER_OPENERS:
                gid = config.guess_id(opener)
                base = sum(_sweep_counts(bank, gid, mode, "mig", 10, 1)) / n
                roll = sum(_sweep_counts(bank, gid, mode, "rollout-mig", 10, 1)) / n
                gaps.append((opener, mode, base, roll, base - roll))
        ok = all(g[4] >= 0.07 for g in gaps)
        detail = "; ".join(
            f"{o}/{m}: base {b:.4f} rollout {r:.4f} gap {d:+.4f}" for o, m, b, r, d in gaps
        )
        report("six-letter-trend", ok, detail + " (gate: gap >= 0.07 each)")


class TestDeterminism:
    def test_parallel_rerun_byte_identical(self, full_config):
        from wordle_rollout.bench import BenchmarkSpec, rows_to_csv, run_benchmark

        spec = BenchmarkSpec(
            openers=["salet"], modes=["easy"], policies=["mig", "rollout-mig"]
        )
        rows1 = run_benchmark(spec, full_config, workers=1)
        rows2 = run_benchmark(spec, full_config, workers=2)
        csv1 = rows_to_csv(rows1, include_timing=False)
        csv2 = rows_to_csv(rows2, include_timing=False)
        ok = csv1 == csv2
        report(
            "determinism",
            ok,
            "salet/easy rows byte-identical at worker counts 1 and 2 "
            "(timing column excluded; wall time is inherently variable)",
        )
