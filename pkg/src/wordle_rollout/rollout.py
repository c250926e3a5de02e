"""One-step lookahead over a base-heuristic shortlist.

At each turn the base heuristic ranks the allowable guesses by its
single-stage score and the best few become the shortlist.  For every
shortlisted candidate u and every still-eligible mystery word m, the
candidate's Q-factor is the number of guesses the base heuristic needs to
finish the game after u has been played, assuming m is the answer; it is
found by simulating the base heuristic forward against the feedback matrix.
The candidate with the lowest average Q-factor is played.

Counting starts after the candidate (a uniform +1 cannot change which
average is smallest), so a candidate equal to the mystery word scores 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .game import (
    DivergenceError,
    EASY,
    GameConfig,
    GameState,
    allowable_guesses,
    filter_mysteries,
)
from .heuristics import (
    BaseHeuristicPolicy,
    heuristic_maximizes,
    normalize_tag,
    partition,
    select_best,
    stage_scores,
)


@dataclass(frozen=True)
class RolloutConfig:
    base: str = "mig"
    shortlist_size: int = 10
    tie_break: str = "score-then-id"

    def __post_init__(self):
        if self.shortlist_size < 1:
            raise ValueError("shortlist_size must be >= 1")
        normalize_tag(self.base)


@dataclass
class QFactorEntry:
    guess: int
    word: str
    base_score: float
    q_values: np.ndarray  # per eligible mystery, in eligible order
    q_sum: int
    q_hat: float
    cells: dict[int, int] = field(default_factory=dict)

    def cell_summary(self) -> str:
        sizes = sorted(self.cells.values(), reverse=True)
        counts: dict[int, int] = {}
        for s in sizes:
            counts[s] = counts.get(s, 0) + 1
        return " ".join(f"{k}x{s}" for s, k in sorted(counts.items(), reverse=True))


@dataclass
class QFactorTable:
    entries: list[QFactorEntry]
    base: str = "mig"

    def sorted_by_quality(self) -> list[QFactorEntry]:
        sign = -1.0 if heuristic_maximizes(self.base) else 1.0
        return sorted(self.entries, key=lambda e: (e.q_hat, sign * e.base_score, e.guess))

    def to_text_table(self) -> str:
        lines = [f"{'word':<8} {'score':>9} {'qhat':>8}  cells"]
        for e in self.sorted_by_quality():
            lines.append(
                f"{e.word:<8} {e.base_score:>9.4f} {e.q_hat:>8.4f}  {e.cell_summary()}"
            )
        return "\n".join(lines)


@dataclass
class RolloutDecision:
    guess: int
    table: QFactorTable


def format_suggestion(word: str, qhat: float, score: float) -> str:
    return f"{word}  qhat={qhat:.4f}  score={score:.4f}"


def format_opener_suggestion(word: str, score: float) -> str:
    return f"{word}  score={score:.4f}"


def ranked_suggestions(
    state: GameState,
    config: GameConfig,
    rollout_config: RolloutConfig = RolloutConfig(),
    base_policy: BaseHeuristicPolicy | None = None,
    limit: int | None = None,
) -> list[dict]:
    """Suggestion rows for interactive surfaces, best average Q-factor
    first.  The CLI and the HTTP service both render the `display` string,
    so the two can never disagree."""
    core = config.core
    if len(state.eligible) == 1:
        word = core.guess_texts[core.mys_to_guess[state.eligible[0]]]
        return [
            {
                "word": word,
                "score": None,
                "qhat": 0.0,
                "display": f"{word}  qhat=0.0000  (only word left)",
            }
        ]
    decision = select_rollout_guess(state, config, rollout_config, base_policy)
    rows = []
    for entry in decision.table.sorted_by_quality()[: limit or rollout_config.shortlist_size]:
        rows.append(
            {
                "word": entry.word,
                "score": entry.base_score,
                "qhat": entry.q_hat,
                "display": format_suggestion(entry.word, entry.q_hat, entry.base_score),
            }
        )
    return rows


def q_factor(
    state: GameState,
    candidate: int,
    mystery: int,
    config: GameConfig,
    base_policy: BaseHeuristicPolicy | None = None,
    base: str = "mig",
) -> int:
    """Guesses the base heuristic needs after `candidate`, if `mystery` is
    the answer.  0 when the candidate is the mystery word itself."""
    if base_policy is None:
        base_policy = BaseHeuristicPolicy(config, base)
    core = config.core
    table = core.matrix.table
    code = int(table[candidate, mystery])
    if code == core.all_green:
        return 0
    cap = len(state.eligible) + 2
    cur = filter_mysteries(state, candidate, code, config)
    count = 0
    while True:
        gid = base_policy.select(cur)
        count += 1
        if count > cap:
            raise DivergenceError(
                f"base heuristic {base_policy.tag!r} exceeded {cap} simulated guesses"
            )
        code = int(table[gid, mystery])
        if code == core.all_green:
            return count
        cur = filter_mysteries(cur, gid, code, config)


def _shortlist(
    state: GameState,
    config: GameConfig,
    rollout_config: RolloutConfig,
    tag: str,
    eligible_gids: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Top candidates by single-stage score; score ties rank eligible words
    first (they can win outright, and pricing them is what lets the average
    Q-factor separate a 50/50 endgame guess from a probe), then lower id.

    The base heuristic's own pick is guaranteed a slot: exact sort order and
    its tie-window rule can disagree at the margin, and the improvement
    property needs the base pick priced.
    """
    candidates = allowable_guesses(state, config)
    scores = stage_scores(tag, candidates, state.eligible, config)
    maximize = heuristic_maximizes(tag)
    primary = -scores if maximize else scores
    outside = ~np.isin(candidates, eligible_gids)
    order = np.lexsort((candidates, outside, primary))
    k = min(rollout_config.shortlist_size, len(candidates))
    top = order[:k]
    short, short_scores = candidates[top], scores[top]
    base_pick = select_best(scores, candidates, maximize)
    if base_pick not in short:
        pos = int(np.where(candidates == base_pick)[0][0])
        short[-1], short_scores[-1] = base_pick, scores[pos]
    return short, short_scores


def select_rollout_guess(
    state: GameState,
    config: GameConfig,
    rollout_config: RolloutConfig = RolloutConfig(),
    base_policy: BaseHeuristicPolicy | None = None,
) -> RolloutDecision:
    """Pick the shortlisted candidate with minimal average Q-factor.

    Ties on the average go to the better single-stage score, then to the
    lower guess id.  Returns the decision plus the full Q-factor table for
    diagnostics.
    """
    core = config.core
    eligible = state.eligible
    n = len(eligible)
    eligible_gids = core.mys_to_guess[eligible]
    if n == 1:
        return RolloutDecision(int(eligible_gids[0]), QFactorTable([], rollout_config.base))
    tag = normalize_tag(rollout_config.base)
    if base_policy is None:
        base_policy = BaseHeuristicPolicy(config, tag)
    short, short_scores = _shortlist(state, config, rollout_config, tag, eligible_gids)
    entries = []
    for gid, score in zip(short, short_scores):
        q_values = np.array(
            [q_factor(state, int(gid), int(m), config, base_policy) for m in eligible],
            dtype=np.int64,
        )
        q_sum = int(q_values.sum())
        entries.append(
            QFactorEntry(
                guess=int(gid),
                word=core.guess_texts[gid],
                base_score=float(score),
                q_values=q_values,
                q_sum=q_sum,
                q_hat=q_sum / n,
                cells=partition(int(gid), eligible, config).cells,
            )
        )
    maximize = heuristic_maximizes(tag)
    sign = -1.0 if maximize else 1.0
    best = min(entries, key=lambda e: (e.q_sum, sign * e.base_score, e.guess))
    return RolloutDecision(best.guess, QFactorTable(entries, tag))


class RolloutPolicy:
    """Rollout as a reusable policy with a decision memo shared across
    episodes; the embedded base policy memo is shared with the simulations."""

    def __init__(
        self,
        config: GameConfig,
        rollout_config: RolloutConfig = RolloutConfig(),
        base_policy: BaseHeuristicPolicy | None = None,
    ):
        self.config = config
        self.rollout_config = rollout_config
        self.base_policy = base_policy or BaseHeuristicPolicy(config, rollout_config.base)
        self.hard = config.mode != EASY
        self._memo: dict = {}

    def select(self, state: GameState) -> int:
        eligible = state.eligible
        core = self.config.core
        if len(eligible) == 1:
            return int(core.mys_to_guess[eligible[0]])
        if len(eligible) == 2:
            # both eligible words tie at Q-hat 1/2, unbeatable by a probe
            return int(core.mys_to_guess[eligible].min())
        key = state.memo_key(self.hard)
        gid = self._memo.get(key)
        if gid is None:
            gid = select_rollout_guess(
                state, self.config, self.rollout_config, self.base_policy
            ).guess
            self._memo[key] = gid
        return gid

    __call__ = select


def rollout_policy(
    config: GameConfig,
    rollout_config: RolloutConfig = RolloutConfig(),
    opener: str | int | None = None,
) -> "OpenedPolicy":
    """Policy for play_episode: fixed opener on turn one, rollout after."""
    core = RolloutPolicy(config, rollout_config)
    gid = None
    if opener is not None:
        gid = opener if isinstance(opener, int) else config.guess_id(opener)
    return OpenedPolicy(core, gid)


class OpenedPolicy:
    """Wrap a policy with a fixed first guess."""

    def __init__(self, policy, opener_gid: int | None):
        self.policy = policy
        self.opener_gid = opener_gid

    def __call__(self, state: GameState) -> int:
        if self.opener_gid is not None and not state.history:
            return self.opener_gid
        return self.policy.select(state)
