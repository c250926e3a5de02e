"""Exact expected-guess-count solver for reduced instances.

The full game is far too large for exact dynamic programming, so ground
truth comes from seeded sub-instances: a sampled mystery subset plus a
guess subset that contains it.  Costs are exact rationals, which makes the
optimal <= rollout <= base ordering checks tolerance-free.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .game import (
    GameConfig,
    GameError,
    GameState,
    HARD,
    allowable_guesses,
    filter_mysteries,
    initial_state,
    make_config,
    play_episode,
)
from .heuristics import HEURISTIC_TAGS, BaseHeuristicPolicy
from .lexicon import FeedbackMatrix, Word
from .rollout import RolloutConfig, RolloutPolicy

DEFAULT_MYSTERY_CAP = 30
DEFAULT_GUESS_CAP = 200


class InstanceTooLargeError(GameError):
    pass


@dataclass(frozen=True)
class SubInstance:
    """A reduced game: ids index the parent lists; every mystery word is in
    the guess subset so the answer is always guessable."""

    mystery_ids: tuple[int, ...]
    guess_ids: tuple[int, ...]
    mode: str
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "mystery_ids": list(self.mystery_ids),
            "guess_ids": list(self.guess_ids),
            "mode": self.mode,
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(d: dict) -> "SubInstance":
        return SubInstance(
            mystery_ids=tuple(d["mystery_ids"]),
            guess_ids=tuple(d["guess_ids"]),
            mode=d["mode"],
            seed=d.get("seed"),
        )


def make_sub_instance(
    parent: GameConfig,
    seed: int,
    n_mysteries: int = 20,
    n_guesses: int = 100,
    mode: str = "easy",
) -> SubInstance:
    """Seeded reproducible sample: mysteries drawn from the parent mystery
    list, guesses = their guess-list ids plus extra sampled filler."""
    core = parent.core
    rng = random.Random(seed)
    mids = sorted(rng.sample(range(len(core.mysteries)), n_mysteries))
    mystery_gids = {int(core.mys_to_guess[m]) for m in mids}
    if n_guesses < len(mystery_gids):
        raise GameError("guess subset smaller than mystery subset")
    pool = sorted(set(range(len(core.guesses))) - mystery_gids)
    extra = rng.sample(pool, n_guesses - len(mystery_gids))
    gids = sorted(mystery_gids | set(extra))
    return SubInstance(tuple(mids), tuple(gids), mode, seed)


def sub_config(instance: SubInstance, parent: GameConfig) -> GameConfig:
    """Materialize a SubInstance as a self-contained GameConfig whose
    feedback table is the corresponding slice of the parent's."""
    core = parent.core
    gtexts = [core.guess_texts[g] for g in instance.guess_ids]
    mtexts = [core.mystery_texts[m] for m in instance.mystery_ids]
    guesses = [Word(t, i) for i, t in enumerate(gtexts)]
    mysteries = [Word(t, i) for i, t in enumerate(mtexts)]
    table = core.matrix.table[np.ix_(list(instance.guess_ids), list(instance.mystery_ids))]
    matrix = FeedbackMatrix(np.ascontiguousarray(table), core.word_length)
    return make_config(guesses, mysteries, matrix, mode=instance.mode)


def optimal_expected_guesses(
    config: GameConfig,
    eligible: np.ndarray | None = None,
    mystery_cap: int = DEFAULT_MYSTERY_CAP,
    guess_cap: int = DEFAULT_GUESS_CAP,
    use_memo: bool = True,
) -> tuple[Fraction, int]:
    """Exact minimal expected guess count and the optimal opening guess.

    Memoized over (eligible set, allowed set in hard mode); exact Fraction
    arithmetic throughout.  Guesses that leave the eligible set whole are
    skipped: any eligible guess costs strictly less.
    """
    core = config.core
    if len(core.mysteries) > mystery_cap or len(core.guesses) > guess_cap:
        raise InstanceTooLargeError(
            f"instance {len(core.mysteries)}x{len(core.guesses)} exceeds caps "
            f"{mystery_cap}x{guess_cap}"
        )
    table = core.matrix.table
    all_green = core.all_green
    hard = config.mode == HARD
    memo: dict | None = {} if use_memo else None

    def solve(state: GameState) -> tuple[Fraction, int]:
        n = len(state.eligible)
        if n == 1:
            return Fraction(1), int(core.mys_to_guess[state.eligible[0]])
        key = state.memo_key(hard) if memo is not None else None
        if memo is not None and key in memo:
            return memo[key]
        best_cost, best_gid = None, None
        for u in allowable_guesses(state, config):
            u = int(u)
            codes = table[u, state.eligible]
            values, counts = np.unique(codes, return_counts=True)
            if len(values) == 1 and int(values[0]) != all_green:
                continue  # no progress; dominated
            cost = Fraction(1)
            for code, cells in zip(values, counts):
                code = int(code)
                if code == all_green:
                    continue
                child = filter_mysteries(state, u, code, config)
                cost += Fraction(int(cells), n) * solve(child)[0]
            if best_cost is None or cost < best_cost or (cost == best_cost and u < best_gid):
                best_cost, best_gid = cost, u
        result = (best_cost, best_gid)
        if memo is not None:
            memo[key] = result
        return result

    return solve(initial_state(config, eligible))


@dataclass
class OrderingRow:
    heuristic: str
    optimal: Fraction
    rollout_cost: Fraction
    base_cost: Fraction

    @property
    def rollout_gap(self) -> Fraction:
        return self.rollout_cost - self.optimal

    @property
    def base_gap(self) -> Fraction:
        return self.base_cost - self.optimal


@dataclass
class OrderingReport:
    instance: SubInstance | None
    rows: list[OrderingRow]
    violations: list[str]

    def to_text(self) -> str:
        lines = [f"{'heuristic':<10} {'optimal':>10} {'rollout':>10} {'base':>10}"]
        for r in self.rows:
            lines.append(
                f"{r.heuristic:<10} {float(r.optimal):>10.4f} "
                f"{float(r.rollout_cost):>10.4f} {float(r.base_cost):>10.4f}"
            )
        lines += [f"VIOLATION: {v}" for v in self.violations]
        return "\n".join(lines)


def policy_expected_cost(config: GameConfig, policy) -> Fraction:
    """Exact mean guess count of a policy over every mystery word."""
    total = 0
    for mid in range(len(config.core.mysteries)):
        total += play_episode(mid, policy, config).guess_count
    return Fraction(total, len(config.core.mysteries))


def verify_ordering(
    config: GameConfig,
    heuristics: tuple[str, ...] = HEURISTIC_TAGS,
    shortlist_size: int = 10,
    instance: SubInstance | None = None,
) -> OrderingReport:
    """Exact per-policy expected costs with the optimal <= rollout <= base
    ordering checked; violations are reported, not raised."""
    optimal, _ = optimal_expected_guesses(config)
    rows, violations = [], []
    for tag in heuristics:
        base = BaseHeuristicPolicy(config, tag)
        base_cost = policy_expected_cost(config, base)
        roll = RolloutPolicy(
            config, RolloutConfig(base=tag, shortlist_size=shortlist_size), base
        )
        rollout_cost = policy_expected_cost(config, roll)
        rows.append(OrderingRow(tag, optimal, rollout_cost, base_cost))
        if not optimal <= rollout_cost:
            violations.append(
                f"{tag}: rollout cost {rollout_cost} below optimal {optimal}"
            )
        if not rollout_cost <= base_cost:
            violations.append(
                f"{tag}: rollout cost {rollout_cost} above base cost {base_cost}"
            )
    return OrderingReport(instance, rows, violations)
