"""Single-stage guess scoring and the three base policies.

Scores measure what one guess does to the eligible set, via the partition of
that set by feedback pattern:

* mig  - information gain in bits: entropy of the feedback distribution.
* mrd  - expected size of the next eligible set (minimized).
* gep  - probability that a uniform draw from the next eligible set is the
         mystery word, which reduces to cell count over set size.

The scan over a candidate guess list is vectorized: one row-sorted view of
the feedback submatrix yields run lengths, and per-row reductions over runs
produce whichever statistic the heuristic needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .game import EASY, GameConfig, GameState, allowable_guesses
from .lexicon import LexiconError

HEURISTIC_TAGS = ("mig", "mrd", "gep")
TIE_EPS = 1e-9


def normalize_tag(tag: str) -> str:
    t = tag.strip().lower()
    if t not in HEURISTIC_TAGS:
        raise LexiconError(f"unknown heuristic {tag!r}; use one of {HEURISTIC_TAGS}")
    return t


@dataclass(frozen=True)
class PartitionProfile:
    """Cell sizes of one (guess, eligible set) partition, keyed by pattern."""

    cells: dict[int, int]
    total: int


@dataclass(frozen=True)
class HeuristicScore:
    guess: int
    value: float
    heuristic: str


def partition(guess: int, eligible: np.ndarray, config: GameConfig) -> PartitionProfile:
    codes = config.core.matrix.table[guess, eligible]
    values, counts = np.unique(codes, return_counts=True)
    return PartitionProfile(
        cells={int(v): int(c) for v, c in zip(values, counts)},
        total=int(len(eligible)),
    )


def information_gain(profile: PartitionProfile) -> float:
    n = profile.total
    acc = sum(c * math.log2(c) for c in profile.cells.values())
    return math.log2(n) - acc / n


def expected_residual_size(profile: PartitionProfile) -> float:
    n = profile.total
    return sum(c * c for c in profile.cells.values()) / n


def expected_pick_probability(
    profile: PartitionProfile, guess_in_eligible: bool = False
) -> float:
    return len(profile.cells) / profile.total


def _run_lengths(sub: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise partition cells of a (K, n) code matrix.

    Returns (row index of each run, run length), rows ascending.
    """
    k, n = sub.shape
    srt = np.sort(sub, axis=1)
    starts = np.empty((k, n), dtype=bool)
    starts[:, 0] = True
    np.not_equal(srt[:, 1:], srt[:, :-1], out=starts[:, 1:])
    idx = np.flatnonzero(starts.ravel())
    lengths = np.diff(idx, append=k * n)
    return idx // n, lengths


def stage_scores(
    tag: str, candidates: np.ndarray, eligible: np.ndarray, config: GameConfig
) -> np.ndarray:
    """Vector of single-stage scores for `candidates` against `eligible`.

    mig is in bits (higher better), mrd in expected words (lower better),
    gep a probability (higher better).
    """
    core = config.core
    sub = core.matrix.table[candidates[:, None], eligible[None, :]]
    n = len(eligible)
    rows, lengths = _run_lengths(sub)
    if tag == "mig":
        sums = np.bincount(rows, weights=core.c_log2_c[lengths], minlength=len(candidates))
        return math.log2(n) - sums / n
    if tag == "mrd":
        sums = np.bincount(rows, weights=core.c_squared[lengths], minlength=len(candidates))
        return sums / n
    if tag == "gep":
        cells = np.bincount(rows, minlength=len(candidates))
        return cells / n
    raise LexiconError(f"unknown heuristic tag {tag!r}")


def heuristic_maximizes(tag: str) -> bool:
    return tag != "mrd"


def select_best(scores: np.ndarray, candidates: np.ndarray, maximize: bool) -> int:
    """Best-scoring guess id: scores within TIE_EPS of the optimum tie, and
    the lowest word id wins the tie."""
    if maximize:
        best = scores.max()
        tie = scores >= best - TIE_EPS
    else:
        best = scores.min()
        tie = scores <= best + TIE_EPS
    return int(candidates[tie].min())


def base_policy_step(state: GameState, config: GameConfig, heuristic: str) -> int:
    """One decision of the tagged base heuristic from `state`.

    A lone eligible word is guessed outright; otherwise every allowable
    guess is scored and the best one (ties to the lowest id) is returned.
    """
    tag = normalize_tag(heuristic)
    core = config.core
    eligible = state.eligible
    if len(eligible) == 0:
        raise AssertionError("eligible set empty; filtering should have failed first")
    if len(eligible) == 1:
        return int(core.mys_to_guess[eligible[0]])
    candidates = allowable_guesses(state, config)
    scores = stage_scores(tag, candidates, eligible, config)
    return select_best(scores, candidates, heuristic_maximizes(tag))


class BaseHeuristicPolicy:
    """A base heuristic as a reusable policy with a decision memo.

    Decisions depend only on the eligible set (plus constraints in hard
    mode), so the memo is shared across episodes, openers, and rollout
    simulations.
    """

    def __init__(self, config: GameConfig, tag: str):
        self.config = config
        self.tag = normalize_tag(tag)
        self.hard = config.mode != EASY
        self._memo: dict = {}

    def select(self, state: GameState) -> int:
        key = state.memo_key(self.hard)
        gid = self._memo.get(key)
        if gid is None:
            gid = base_policy_step(state, self.config, self.tag)
            self._memo[key] = gid
        return gid

    __call__ = select
