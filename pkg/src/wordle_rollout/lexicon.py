"""Word lists and feedback semantics.

A feedback pattern for a guess against a mystery word is a sequence of
per-position marks: gray (letter unused), yellow (letter present elsewhere),
green (letter in place).  Patterns are stored as base-3 integers with
position 0 in the least significant trit, so a 5-letter game has codes in
[0, 243) and the all-green code is 242.

The duplicate-letter rule is the two-pass one used by the NYT game: greens
claim letters of the mystery word first, then yellows are awarded left to
right while un-claimed copies of the letter remain.

`build_feedback_matrix` precomputes the full guess x mystery code table once;
everything downstream (filtering, scoring, rollout simulation) is a lookup
into that table.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path
from typing import BinaryIO, Iterable, NamedTuple, TextIO, Union

import numpy as np

GRAY, YELLOW, GREEN = 0, 1, 2
_MARK_CHARS = "BYG"  # B=gray for I/O; position 0 leftmost in string form

DEFAULT_MEMORY_BUDGET = 512 * 1024 * 1024  # bytes, for the feedback table


class LexiconError(ValueError):
    """Malformed word-list input or infeasible matrix request."""


class Word(NamedTuple):
    text: str
    id: int


WordSource = Union[str, Path, TextIO, BinaryIO, Iterable[str]]


def _iter_lines(source: WordSource) -> Iterable[str]:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from fh
        return
    if hasattr(source, "read"):
        for line in source:
            if isinstance(line, bytes):
                yield line.decode("utf-8")
            else:
                yield line
        return
    yield from source


def load_word_list(source: WordSource, expected_length: int = 5) -> list[Word]:
    """Parse one word per line into `Word`s with dense ids.

    Words are lowercased; duplicates are dropped keeping first occurrence.
    Raises LexiconError (with the 1-based line number) on a word of the wrong
    length or with non-letter characters, and on an empty result.
    """
    words: list[Word] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        text = raw.strip().lower()
        if not text:
            continue
        if len(text) != expected_length or not text.isascii() or not text.isalpha():
            raise LexiconError(
                f"line {lineno}: {text!r} is not a {expected_length}-letter a-z word"
            )
        if text in seen:
            continue
        seen.add(text)
        words.append(Word(text, len(words)))
    if not words:
        raise LexiconError("word list is empty")
    return words


def packaged_list_path(kind: str, length: int) -> Path:
    """Path of a shipped word list; kind is 'mystery' or 'guesses'."""
    name = f"{kind}_{length}.txt"
    path = Path(__file__).parent / "data" / name
    if not path.exists():
        raise LexiconError(f"no packaged word list {name}")
    return path


def load_packaged_lists(length: int = 5) -> tuple[list[Word], list[Word]]:
    """(guesses, mysteries) for the shipped lists of the given word length."""
    guesses = load_word_list(packaged_list_path("guesses", length), length)
    mysteries = load_word_list(packaged_list_path("mystery", length), length)
    return guesses, mysteries


# --- pattern codes -----------------------------------------------------------


def all_green_code(length: int) -> int:
    return 3**length - 1


def pattern_to_trits(code: int, length: int) -> tuple[int, ...]:
    if not 0 <= code < 3**length:
        raise LexiconError(f"pattern code {code} out of range for length {length}")
    trits = []
    for _ in range(length):
        trits.append(code % 3)
        code //= 3
    return tuple(trits)


def trits_to_pattern(trits: Iterable[int]) -> int:
    code = 0
    for i, t in enumerate(trits):
        if t not in (GRAY, YELLOW, GREEN):
            raise LexiconError(f"trit {t} not in {{0,1,2}}")
        code += t * 3**i
    return code


def pattern_to_string(code: int, length: int) -> str:
    return "".join(_MARK_CHARS[t] for t in pattern_to_trits(code, length))


def string_to_pattern(marks: str) -> int:
    """Parse a B/Y/G string (position 0 leftmost) into a pattern code."""
    cleaned = marks.strip().upper()
    try:
        return trits_to_pattern(_MARK_CHARS.index(ch) for ch in cleaned)
    except ValueError:
        raise LexiconError(f"pattern {marks!r} must use only B, Y, G") from None


def parse_pattern(text: str, length: int) -> int:
    """Accept either the B/Y/G string form or a base-3 integer code."""
    stripped = text.strip()
    if stripped.isdigit():
        code = int(stripped)
        if not 0 <= code < 3**length:
            raise LexiconError(f"pattern code {code} out of range for length {length}")
        return code
    if len(stripped) != length:
        raise LexiconError(f"pattern {text!r} must have {length} marks")
    return string_to_pattern(stripped)


# --- feedback ---------------------------------------------------------------


def compute_feedback(guess: str, mystery: str) -> int:
    """Two-pass feedback rule; returns the base-3 pattern code."""
    if len(guess) != len(mystery):
        raise LexiconError(
            f"length mismatch: guess {guess!r} vs mystery {mystery!r}"
        )
    length = len(guess)
    trits = [GRAY] * length
    remaining: dict[str, int] = {}
    for i in range(length):
        if guess[i] == mystery[i]:
            trits[i] = GREEN
        else:
            remaining[mystery[i]] = remaining.get(mystery[i], 0) + 1
    for i in range(length):
        if trits[i] == GREEN:
            continue
        ch = guess[i]
        if remaining.get(ch, 0) > 0:
            trits[i] = YELLOW
            remaining[ch] -= 1
    return trits_to_pattern(trits)


def words_to_letter_indices(texts: list[str]) -> np.ndarray:
    """(N, L) uint8 array of 0-25 letter indices."""
    joined = "".join(texts)
    flat = np.frombuffer(joined.encode("ascii"), dtype=np.uint8) - ord("a")
    return flat.reshape(len(texts), -1)


class FeedbackMatrix:
    """Dense table of pattern codes indexed [guess id][mystery id]."""

    def __init__(self, table: np.ndarray, word_length: int):
        self.table = table
        self.word_length = word_length
        self.guess_count, self.mystery_count = table.shape
        self.all_green = all_green_code(word_length)

    def __getitem__(self, idx) -> int:
        return self.table[idx]


def estimate_matrix_bytes(n_guesses: int, n_mysteries: int, length: int) -> int:
    cell = 1 if 3**length <= 256 else 2
    return n_guesses * n_mysteries * cell


def build_feedback_matrix(
    guesses: list[Word],
    mysteries: list[Word],
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> FeedbackMatrix:
    """Compute the full feedback table, one column per mystery word.

    Vectorized over the guess list: for each mystery the greens are marked,
    per-letter unclaimed counts are formed, and yellows are awarded position
    by position against those counts.
    """
    length = len(guesses[0].text)
    if any(len(w.text) != length for w in guesses) or any(
        len(w.text) != length for w in mysteries
    ):
        raise LexiconError("all words must share one length")
    needed = estimate_matrix_bytes(len(guesses), len(mysteries), length)
    if needed > memory_budget:
        raise LexiconError(
            f"feedback table needs {needed} bytes, over the {memory_budget} budget"
        )
    dtype = np.uint8 if 3**length <= 256 else np.uint16
    gl = words_to_letter_indices([w.text for w in guesses])  # (G, L)
    ml = words_to_letter_indices([w.text for w in mysteries])  # (M, L)
    n_guesses = len(guesses)
    pow3 = (3 ** np.arange(length)).astype(np.int64)
    table = np.empty((n_guesses, len(mysteries)), dtype=dtype)
    rows = np.arange(n_guesses)
    mys_counts = np.zeros((len(mysteries), 26), dtype=np.int16)
    for j in range(len(mysteries)):
        mys_counts[j] = np.bincount(ml[j], minlength=26)
    for j in range(len(mysteries)):
        green = gl == ml[j][None, :]  # (G, L)
        trits = green.astype(np.int64) * 2
        # unclaimed copies of each letter after greens, per guess row
        claimed = np.zeros((n_guesses, 26), dtype=np.int16)
        for p in range(length):
            gp = green[:, p]
            claimed[rows[gp], gl[gp, p]] += 1
        rem = mys_counts[j][None, :] - claimed  # (G, 26)
        for p in range(length):
            letters = gl[:, p]
            avail = rem[rows, letters]
            yellow = (~green[:, p]) & (avail > 0)
            trits[yellow, p] = 1
            rem[rows[yellow], letters[yellow]] -= 1
        table[:, j] = trits @ pow3
    return FeedbackMatrix(table, length)


def _lists_digest(guesses: list[Word], mysteries: list[Word]) -> str:
    h = hashlib.sha256()
    h.update("\n".join(w.text for w in guesses).encode())
    h.update(b"|")
    h.update("\n".join(w.text for w in mysteries).encode())
    return h.hexdigest()[:16]


def default_cache_dir() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(
        os.path.expanduser("~"), ".cache"
    )
    return Path(base) / "wordle_rollout"


def load_or_build_matrix(
    guesses: list[Word],
    mysteries: list[Word],
    cache_dir: Path | None = None,
) -> FeedbackMatrix:
    """build_feedback_matrix with an on-disk cache keyed by the list contents."""
    if cache_dir is None:
        cache_dir = default_cache_dir()
    length = len(guesses[0].text)
    path = Path(cache_dir) / f"feedback_{length}_{_lists_digest(guesses, mysteries)}.npy"
    if path.exists():
        table = np.load(path)
        if table.shape == (len(guesses), len(mysteries)):
            return FeedbackMatrix(table, length)
    matrix = build_feedback_matrix(guesses, mysteries)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.npy")
        np.save(tmp, matrix.table)
        os.replace(tmp, path)
    except OSError:
        pass  # cache is best-effort
    return matrix
