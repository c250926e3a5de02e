#!/usr/bin/env python3
"""Generate the 6-letter guess and mystery lists shipped in the package data.

Protocol: from a public corpus of 6-letter words (scripts/six_letter_corpus.txt,
extracted from the npm `word-list` package, BSD-licensed), draw 12,972 guess
words uniformly at random, then draw 2,315 mystery words uniformly from those
guesses.  The seed below is fixed so the shipped lists are reproducible.
"""

import random
from pathlib import Path

SEED = 1729
GUESS_COUNT = 12_972
MYSTERY_COUNT = 2_315

HERE = Path(__file__).resolve().parent
DATA = HERE.parent / "src" / "wordle_rollout" / "data"


def main() -> None:
    corpus = [w for w in (HERE / "six_letter_corpus.txt").read_text().split() if w]
    assert len(corpus) >= GUESS_COUNT, f"corpus too small: {len(corpus)}"
    rng = random.Random(SEED)
    guesses = sorted(rng.sample(corpus, GUESS_COUNT))
    mysteries = sorted(rng.sample(guesses, MYSTERY_COUNT))
    (DATA / "guesses_6.txt").write_text("\n".join(guesses) + "\n")
    (DATA / "mystery_6.txt").write_text("\n".join(mysteries) + "\n")
    print(f"wrote {len(guesses)} guesses, {len(mysteries)} mysteries (seed={SEED})")


if __name__ == "__main__":
    main()
