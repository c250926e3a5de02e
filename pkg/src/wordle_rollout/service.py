"""Session-based HTTP API for assisted live play.

The human plays the real puzzle elsewhere and mirrors it here: each submitted
(guess, colors) pair narrows the session's eligible list and returns ranked
next-guess suggestions with their average Q-factors.  The service never
knows the mystery word; suggestions are a pure function of the submitted
history, so a session can always be rebuilt by replay (which is exactly how
undo works).
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import rollout as rollout_mod
from .bench import parse_policy
from .game import (
    GameConfig,
    GameState,
    InconsistentFeedbackError,
    filter_mysteries,
    guess_allowed,
    initial_state,
    make_config,
    state_solved,
)
from .heuristics import normalize_tag, partition, information_gain, expected_residual_size, expected_pick_probability
from .lexicon import LexiconError, load_packaged_lists, parse_pattern, pattern_to_string
from .rollout import RolloutConfig

DEFAULT_TTL_SECONDS = 24 * 3600
SUPPORTED_LENGTHS = (5, 6)


class CreateSessionRequest(BaseModel):
    mode: str = "easy"
    length: int = 5
    policy: str = "rollout-mig"
    shortlist_size: int = Field(default=10, ge=1, le=100)
    opener: str | None = None


class FeedbackRequest(BaseModel):
    guess: str
    pattern: str


@dataclass
class Session:
    id: str
    length: int
    mode: str
    base: str
    shortlist_size: int
    opener: str
    state: GameState
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def _opener_score(config: GameConfig, gid: int, tag: str) -> float:
    profile = partition(gid, config.core.all_mystery_ids, config)
    if tag == "mig":
        return information_gain(profile)
    if tag == "mrd":
        return expected_residual_size(profile)
    return expected_pick_probability(profile)


def create_app(
    engines: dict[int, GameConfig] | None = None,
    session_ttl: float = DEFAULT_TTL_SECONDS,
    default_opener: str = "salet",
) -> FastAPI:
    """The assistant API.  `engines` injects prebuilt configs per word
    length (tests use tiny ones); missing lengths load the packaged lists
    on first use."""
    app = FastAPI(title="wordle-rollout assistant")
    injected = dict(engines or {})
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()
    engine_lock = threading.Lock()

    def engine_for(length: int) -> GameConfig:
        with engine_lock:
            cfg = injected.get(length)
            if cfg is None:
                if length not in SUPPORTED_LENGTHS:
                    raise HTTPException(422, detail=f"length must be one of {SUPPORTED_LENGTHS}")
                guesses, mysteries = load_packaged_lists(length)
                cfg = make_config(guesses, mysteries, use_cache=True)
                injected[length] = cfg
            return cfg

    def evict_idle(now: float) -> None:
        with store_lock:
            dead = [sid for sid, s in sessions.items() if now - s.updated > session_ttl]
            for sid in dead:
                del sessions[sid]

    def get_session(sid: str) -> Session:
        evict_idle(time.time())
        with store_lock:
            session = sessions.get(sid)
        if session is None:
            raise HTTPException(404, detail=f"no session {sid!r}")
        return session

    def config_of(session: Session) -> GameConfig:
        return engine_for(session.length).with_mode(session.mode)

    def summary(session: Session, config: GameConfig) -> dict:
        core = config.core
        return {
            "session_id": session.id,
            "mode": session.mode,
            "length": session.length,
            "policy": f"rollout-{session.base}",
            "shortlist_size": session.shortlist_size,
            "opener": session.opener,
            "history": [
                {
                    "guess": core.guess_texts[gid],
                    "pattern": pattern_to_string(code, core.word_length),
                }
                for gid, code in session.state.history
            ],
            "eligible_count": int(session.state.eligible_count),
            "solved": state_solved(session.state, config),
        }

    def suggestions_payload(session: Session, config: GameConfig) -> list[dict]:
        if state_solved(session.state, config):
            return []
        if not session.state.history:
            gid = config.guess_id(session.opener)
            score = _opener_score(config, gid, session.base)
            word = config.core.guess_texts[gid]
            return [
                {
                    "word": word,
                    "score": score,
                    "qhat": None,
                    "display": rollout_mod.format_opener_suggestion(word, score),
                }
            ]
        return rollout_mod.ranked_suggestions(
            session.state,
            config,
            RolloutConfig(base=session.base, shortlist_size=session.shortlist_size),
        )

    def respond(session: Session, config: GameConfig) -> dict:
        body = summary(session, config)
        body["suggestions"] = suggestions_payload(session, config)
        return body

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        if req.mode not in ("easy", "hard"):
            raise HTTPException(422, detail="mode: must be 'easy' or 'hard'")
        try:
            _, base = parse_policy(req.policy)
        except LexiconError as exc:
            raise HTTPException(422, detail=f"policy: {exc}") from exc
        config = engine_for(req.length).with_mode(req.mode)
        opener = (req.opener or default_opener).strip().lower()
        if opener not in config.core.guess_index:
            raise HTTPException(422, detail=f"opener: {opener!r} not in the guess list")
        session = Session(
            id=secrets.token_urlsafe(12),
            length=req.length,
            mode=req.mode,
            base=base,
            shortlist_size=req.shortlist_size,
            opener=opener,
            state=initial_state(config),
        )
        with store_lock:
            sessions[session.id] = session
        return respond(session, config)

    @app.get("/sessions/{sid}")
    def get_state(sid: str):
        session = get_session(sid)
        with session.lock:
            return respond(session, config_of(session))

    @app.post("/sessions/{sid}/feedback")
    def submit_feedback(sid: str, req: FeedbackRequest):
        session = get_session(sid)
        with session.lock:
            config = config_of(session)
            core = config.core
            word = req.guess.strip().lower()
            gid = core.guess_index.get(word)
            if gid is None:
                raise HTTPException(422, detail=f"guess: {word!r} not in the guess list")
            try:
                code = parse_pattern(req.pattern, core.word_length)
            except LexiconError as exc:
                raise HTTPException(422, detail=f"pattern: {exc}") from exc
            if not guess_allowed(gid, session.state, config):
                raise HTTPException(
                    422,
                    detail=(
                        f"guess: {word!r} violates hard-mode constraints "
                        f"({session.state.constraints.describe(core.word_length)})"
                    ),
                )
            try:
                new_state = filter_mysteries(session.state, gid, code, config)
            except InconsistentFeedbackError as exc:
                raise HTTPException(
                    409,
                    detail=(
                        f"{exc} -- re-check the entered colors; the session "
                        "is unchanged"
                    ),
                ) from exc
            session.state = new_state
            session.updated = time.time()
            return respond(session, config)

    @app.post("/sessions/{sid}/undo")
    def undo_last(sid: str):
        session = get_session(sid)
        with session.lock:
            if not session.state.history:
                raise HTTPException(422, detail="history: nothing to undo")
            config = config_of(session)
            state = initial_state(config)
            for gid, code in session.state.history[:-1]:
                state = filter_mysteries(state, gid, code, config)
            session.state = state
            session.updated = time.time()
            return respond(session, config)

    @app.delete("/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        get_session(sid)
        with store_lock:
            sessions.pop(sid, None)

    return app
