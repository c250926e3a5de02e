"""Rollout-improved heuristic play for Wordle-class hidden-object search."""

from .lexicon import (
    FeedbackMatrix,
    LexiconError,
    Word,
    build_feedback_matrix,
    compute_feedback,
    load_packaged_lists,
    load_word_list,
    parse_pattern,
    pattern_to_string,
    string_to_pattern,
)
from .game import (
    Constraints,
    DivergenceError,
    GameConfig,
    GameError,
    GameState,
    InconsistentFeedbackError,
    ProtocolError,
    allowable_guesses,
    filter_mysteries,
    initial_state,
    make_config,
    play_episode,
)
from .heuristics import (
    BaseHeuristicPolicy,
    HeuristicScore,
    PartitionProfile,
    base_policy_step,
    expected_pick_probability,
    expected_residual_size,
    information_gain,
    partition,
)
from .rollout import (
    OpenedPolicy,
    QFactorTable,
    RolloutConfig,
    RolloutPolicy,
    q_factor,
    ranked_suggestions,
    rollout_policy,
    select_rollout_guess,
)

__version__ = "0.1.0"
