import numpy as np
import pytest

from wordle_rollout import lexicon
from wordle_rollout.game import make_config


@pytest.fixture(scope="session")
def full_lists():
    return lexicon.load_packaged_lists(5)


@pytest.fixture(scope="session")
def full_config(full_lists):
    guesses, mysteries = full_lists
    matrix = lexicon.load_or_build_matrix(guesses, mysteries)
    return make_config(guesses, mysteries, matrix)


@pytest.fixture(scope="session")
def six_config():
    guesses, mysteries = lexicon.load_packaged_lists(6)
    matrix = lexicon.load_or_build_matrix(guesses, mysteries)
    return make_config(guesses, mysteries, matrix)


def tiny_words(texts):
    return [lexicon.Word(t, i) for i, t in enumerate(texts)]


@pytest.fixture
def pair_config():
    """Two-mystery toy game over a handful of guess words."""
    guesses = tiny_words(["aahed", "crate", "trace", "salet", "speed"])
    mysteries = tiny_words(["crate", "trace"])
    return make_config(guesses, mysteries)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240612)
