"""Episode state and transitions.

A game state is the pair every policy needs: the set of mystery ids still
consistent with the observed feedback, plus (in hard mode) the set of guess
words still playable.  Filtering a state by one (guess, feedback) pair is a
row lookup in the feedback matrix.

Hard mode restricts each guess to words that are themselves consistent with
every feedback received so far, i.e. words that could still be the answer
were they on the mystery list.  This subsumes the green-stays-put /
yellow-reappears rule and reproduces the restriction the benchmark scores
were measured under.  A constraint summary (green pins, required letters) is
maintained alongside for error messages and UI display.

States are values: filtering returns a new state and never mutates, so
episodes and rollout simulations can share states freely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lexicon import (
    FeedbackMatrix,
    LexiconError,
    Word,
    GREEN,
    YELLOW,
    build_feedback_matrix,
    load_or_build_matrix,
    pattern_to_string,
    pattern_to_trits,
    words_to_letter_indices,
)

EASY, HARD = "easy", "hard"


class GameError(Exception):
    pass


class InconsistentFeedbackError(GameError):
    """Observed feedback eliminates every remaining mystery word."""


class ProtocolError(GameError):
    """A policy returned a guess the current mode does not allow."""


class DivergenceError(GameError):
    """A policy failed to finish within the safety cap."""


@dataclass(frozen=True)
class Constraints:
    """Human-readable hard-mode summary: accumulated green pins and the
    letter counts revealed by the most recent feedback."""

    pins: tuple[tuple[int, int], ...] = ()  # (position, letter index)
    required: tuple[tuple[int, int], ...] = ()  # (letter index, min count)

    def updated(self, guess_letters, code: int, length: int) -> "Constraints":
        trits = pattern_to_trits(code, length)
        pins = dict(self.pins)
        counts: dict[int, int] = {}
        for pos, trit in enumerate(trits):
            if trit == GREEN:
                pins[pos] = int(guess_letters[pos])
                counts[int(guess_letters[pos])] = counts.get(int(guess_letters[pos]), 0) + 1
            elif trit == YELLOW:
                counts[int(guess_letters[pos])] = counts.get(int(guess_letters[pos]), 0) + 1
        return Constraints(
            pins=tuple(sorted(pins.items())),
            required=tuple(sorted(counts.items())),
        )

    def describe(self, length: int) -> str:
        parts = []
        for pos, letter in self.pins:
            parts.append(f"position {pos + 1} must be '{chr(letter + ord('a'))}'")
        for letter, count in self.required:
            need = f"{count}x " if count > 1 else ""
            parts.append(f"must use {need}'{chr(letter + ord('a'))}'")
        return "; ".join(parts) if parts else "no constraints yet"


EMPTY_CONSTRAINTS = Constraints()


class _EngineCore:
    """Arrays derived from one (guess list, mystery list, matrix) triple,
    shared by every GameConfig view onto it."""

    def __init__(self, guesses: list[Word], mysteries: list[Word], matrix: FeedbackMatrix):
        self.guesses = guesses
        self.mysteries = mysteries
        self.matrix = matrix
        self.word_length = matrix.word_length
        self.guess_texts = [w.text for w in guesses]
        self.mystery_texts = [w.text for w in mysteries]
        self.guess_index = {w.text: w.id for w in guesses}
        self.mystery_index = {w.text: w.id for w in mysteries}
        missing = [w.text for w in mysteries if w.text not in self.guess_index]
        if missing:
            raise LexiconError(
                f"{len(missing)} mystery words not guessable, e.g. {missing[0]!r}"
            )
        self.mys_to_guess = np.array(
            [self.guess_index[w.text] for w in mysteries], dtype=np.int32
        )
        self.guess_letters = words_to_letter_indices(self.guess_texts)
        self.guess_letter_counts = np.zeros((len(guesses), 26), dtype=np.int16)
        for i in range(len(guesses)):
            self.guess_letter_counts[i] = np.bincount(
                self.guess_letters[i], minlength=26
            )
        self.all_guess_ids = np.arange(len(guesses), dtype=np.int32)
        self.all_mystery_ids = np.arange(len(mysteries), dtype=np.int32)
        self.all_green = matrix.all_green
        self._pow3 = (3 ** np.arange(self.word_length)).astype(np.int64)
        n = len(mysteries)
        counts = np.arange(n + 1, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            self.c_log2_c = counts * np.log2(np.maximum(counts, 1.0))
        self.c_squared = counts * counts
        self._gg_rows: dict[int, np.ndarray] = {}

    def gg_row(self, gid: int) -> np.ndarray:
        """Feedback of guess `gid` against every guess word as the answer.

        Rows are built lazily and cached; hard-mode consistency filtering is
        the only consumer.
        """
        row = self._gg_rows.get(gid)
        if row is not None:
            return row
        length = self.word_length
        q = self.guess_letters[gid]
        al = self.guess_letters  # answers
        green = al == q[None, :]  # (G, L)
        trits = green.astype(np.int64) << 1
        rem = self.guess_letter_counts.astype(np.int16, copy=True)
        for p in range(length):
            c = int(q[p])
            rem[green[:, p], c] -= 1
        for p in range(length):
            c = int(q[p])
            avail = rem[:, c]
            yellow = (~green[:, p]) & (avail > 0)
            trits[yellow, p] = 1
            rem[yellow, c] -= 1
        row = (trits @ self._pow3).astype(self.matrix.table.dtype)
        self._gg_rows[gid] = row
        return row


class GameConfig:
    """Game parameters plus the shared word lists and feedback table."""

    def __init__(self, core: _EngineCore, mode: str = EASY, max_guesses: int = 6):
        if mode not in (EASY, HARD):
            raise GameError(f"mode must be {EASY!r} or {HARD!r}, got {mode!r}")
        if max_guesses < 1:
            raise GameError("max_guesses must be >= 1")
        self.core = core
        self.mode = mode
        self.max_guesses = max_guesses

    @property
    def word_length(self) -> int:
        return self.core.word_length

    @property
    def guesses(self) -> list[Word]:
        return self.core.guesses

    @property
    def mysteries(self) -> list[Word]:
        return self.core.mysteries

    @property
    def matrix(self) -> FeedbackMatrix:
        return self.core.matrix

    def with_mode(self, mode: str) -> "GameConfig":
        if mode == self.mode:
            return self
        return GameConfig(self.core, mode, self.max_guesses)

    def guess_id(self, text: str) -> int:
        gid = self.core.guess_index.get(text.strip().lower())
        if gid is None:
            raise GameError(f"{text!r} is not in the guess list")
        return gid

    def mystery_id(self, text: str) -> int:
        mid = self.core.mystery_index.get(text.strip().lower())
        if mid is None:
            raise GameError(f"{text!r} is not in the mystery list")
        return mid


def make_config(
    guesses: list[Word],
    mysteries: list[Word],
    matrix: FeedbackMatrix | None = None,
    mode: str = EASY,
    max_guesses: int = 6,
    use_cache: bool = False,
) -> GameConfig:
    if matrix is None:
        if use_cache:
            matrix = load_or_build_matrix(guesses, mysteries)
        else:
            matrix = build_feedback_matrix(guesses, mysteries)
    return GameConfig(_EngineCore(guesses, mysteries, matrix), mode, max_guesses)


@dataclass(frozen=True)
class GameState:
    """Eligible mystery ids (sorted), guess history, hard-mode allowable
    guess ids (None in easy mode), and the constraint summary."""

    eligible: np.ndarray
    history: tuple[tuple[int, int], ...] = ()
    allowed: np.ndarray | None = None
    constraints: Constraints = EMPTY_CONSTRAINTS

    def __post_init__(self):
        object.__setattr__(self, "_ekey", self.eligible.tobytes())

    @property
    def eligible_count(self) -> int:
        return len(self.eligible)

    def memo_key(self, hard: bool):
        if hard and self.allowed is not None:
            return (self._ekey, self.allowed.tobytes())
        return self._ekey


def state_solved(state: GameState, config: GameConfig) -> bool:
    return bool(state.history) and state.history[-1][1] == config.core.all_green


def initial_state(config: GameConfig, eligible: np.ndarray | None = None) -> GameState:
    if eligible is None:
        eligible = config.core.all_mystery_ids
    else:
        eligible = np.unique(np.asarray(eligible, dtype=np.int32))
    allowed = config.core.all_guess_ids if config.mode == HARD else None
    return GameState(eligible=eligible, allowed=allowed)


def filter_mysteries(
    state: GameState, guess: int, observed: int, config: GameConfig
) -> GameState:
    """Keep the eligible words whose feedback row matches `observed`; in
    hard mode also narrow the allowable guesses to consistent words."""
    core = config.core
    if not 0 <= observed <= core.all_green:
        raise GameError(f"pattern code {observed} out of range")
    row = core.matrix.table[guess, state.eligible]
    new_eligible = state.eligible[row == observed]
    if len(new_eligible) == 0:
        raise InconsistentFeedbackError(
            f"feedback {pattern_to_string(observed, core.word_length)} for "
            f"{core.guess_texts[guess]!r} rules out every remaining mystery word"
        )
    allowed = state.allowed
    if config.mode == HARD:
        if allowed is None:
            allowed = core.all_guess_ids
        allowed = allowed[core.gg_row(guess)[allowed] == observed]
    elif allowed is not None:
        allowed = None
    constraints = state.constraints.updated(
        core.guess_letters[guess], observed, core.word_length
    )
    return GameState(
        eligible=new_eligible,
        history=state.history + ((guess, observed),),
        allowed=allowed,
        constraints=constraints,
    )


def allowable_guesses(state: GameState, config: GameConfig) -> np.ndarray:
    """Guess ids playable from this state: the whole list in easy mode, the
    feedback-consistent subset in hard mode."""
    if config.mode == EASY or state.allowed is None:
        return config.core.all_guess_ids
    return state.allowed


def guess_allowed(gid: int, state: GameState, config: GameConfig) -> bool:
    if config.mode == EASY or state.allowed is None:
        return 0 <= gid < len(config.core.guesses)
    pos = int(np.searchsorted(state.allowed, gid))
    return pos < len(state.allowed) and state.allowed[pos] == gid


@dataclass
class EpisodeRecord:
    mystery: str
    history: tuple[tuple[int, int], ...]
    guess_count: int
    solved: bool

    def to_log_lines(self, config: GameConfig) -> list[str]:
        core = config.core
        lines = [self.mystery]
        lines += [
            f"{core.guess_texts[gid]} {pattern_to_string(code, core.word_length)}"
            for gid, code in self.history
        ]
        return lines


def play_episode(
    mystery: str | int,
    policy,
    config: GameConfig,
) -> EpisodeRecord:
    """Run one game to completion, querying `policy` for each guess.

    The game continues past max_guesses so the true count is recorded; the
    solved flag reports whether the count stayed within the limit.
    """
    core = config.core
    mid = mystery if isinstance(mystery, int) else config.mystery_id(mystery)
    state = initial_state(config)
    hard = config.mode == HARD
    cap = len(core.mysteries) + 2
    for _ in range(cap):
        gid = policy(state)
        if hard and not guess_allowed(gid, state, config):
            raise ProtocolError(
                f"policy guessed {core.guess_texts[gid]!r}, disallowed in hard "
                f"mode ({state.constraints.describe(core.word_length)})"
            )
        code = int(core.matrix.table[gid, mid])
        state = filter_mysteries(state, gid, code, config)
        if code == core.all_green:
            count = len(state.history)
            return EpisodeRecord(
                mystery=core.mystery_texts[mid],
                history=state.history,
                guess_count=count,
                solved=count <= config.max_guesses,
            )
    raise DivergenceError(
        f"policy failed to find {core.mystery_texts[mid]!r} within {cap} guesses"
    )
