"""Command-line front door.

Subcommands: solve one mystery word, print suggestions for a transcript,
run benchmark sweeps, solve seeded sub-instances exactly, and serve the
assistant API.  Exit codes: 0 ok, 1 usage, 2 data error, 3 inconsistent
transcript.
"""

from __future__ import annotations

import argparse
import difflib
import sys
from pathlib import Path

from . import bench as bench_mod
from . import oracle as oracle_mod
from .game import (
    GameConfig,
    GameError,
    InconsistentFeedbackError,
    filter_mysteries,
    initial_state,
    make_config,
    play_episode,
    state_solved,
)
from .heuristics import BaseHeuristicPolicy
from .lexicon import (
    LexiconError,
    load_packaged_lists,
    load_word_list,
    parse_pattern,
    pattern_to_string,
)
from .rollout import (
    OpenedPolicy,
    RolloutConfig,
    RolloutPolicy,
    ranked_suggestions,
    select_rollout_guess,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INCONSISTENT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise SystemExit_(EXIT_USAGE, f"{self.prog}: error: {message}")


class SystemExit_(Exception):
    def __init__(self, code: int, message: str | None = None):
        super().__init__(message or "")
        self.code = code
        self.message = message


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--length", type=int, default=5, choices=(5, 6))
    p.add_argument("--mode", default="easy", choices=("easy", "hard"))
    p.add_argument("--guess-list", type=Path, default=None)
    p.add_argument("--mystery-list", type=Path, default=None)
    p.add_argument("--no-cache", action="store_true", help="skip the on-disk feedback-table cache")


def _add_policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--policy", default="rollout-mig")
    p.add_argument("--opener", default="salet")
    p.add_argument("--shortlist", type=int, default=10)


def build_parser() -> _Parser:
    parser = _Parser(prog="wordle-rollout", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="play one mystery word and print the transcript")
    p_solve.add_argument("mystery")
    _add_engine_flags(p_solve)
    _add_policy_flags(p_solve)

    p_sug = sub.add_parser("suggest", help="suggestions for a played transcript")
    p_sug.add_argument(
        "history", nargs="*", metavar="GUESS PATTERN",
        help="alternating guess words and B/Y/G patterns",
    )
    p_sug.add_argument("--opener-only", action="store_true")
    p_sug.add_argument("--sublist", default=None, help="comma-separated mystery sub-list")
    _add_engine_flags(p_sug)
    _add_policy_flags(p_sug)

    p_bench = sub.add_parser("bench", help="full-sweep benchmark rows")
    p_bench.add_argument("--openers", default="salet")
    p_bench.add_argument("--modes", default="easy")
    p_bench.add_argument("--policies", default="mig,rollout-mig")
    p_bench.add_argument("--out", type=Path, default=None)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--shortlist", type=int, default=10)
    _add_engine_flags(p_bench)

    p_oracle = sub.add_parser("oracle", help="exact DP value of a seeded sub-instance")
    p_oracle.add_argument("--seed", type=int, required=True)
    p_oracle.add_argument("--mysteries", type=int, default=20)
    p_oracle.add_argument("--guesses", type=int, default=100)
    _add_engine_flags(p_oracle)

    p_serve = sub.add_parser("serve", help="run the assistant HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


def _load_config(args) -> GameConfig:
    if args.guess_list or args.mystery_list:
        if not (args.guess_list and args.mystery_list):
            raise SystemExit_(EXIT_USAGE, "--guess-list and --mystery-list go together")
        guesses = load_word_list(args.guess_list, args.length)
        mysteries = load_word_list(args.mystery_list, args.length)
    else:
        guesses, mysteries = load_packaged_lists(args.length)
    return make_config(
        guesses, mysteries, mode=args.mode, use_cache=not args.no_cache
    )


def _guess_id_or_hint(config: GameConfig, word: str, what: str = "word") -> int:
    w = word.strip().lower()
    gid = config.core.guess_index.get(w)
    if gid is None:
        close = difflib.get_close_matches(w, config.core.guess_texts, n=3)
        hint = f"; did you mean {', '.join(close)}?" if close else ""
        raise SystemExit_(EXIT_DATA, f"{what} {w!r} is not in the guess list{hint}")
    return gid


def _make_policy(config: GameConfig, policy_tag: str, shortlist: int, opener_gid: int):
    kind, tag = bench_mod.parse_policy(policy_tag)
    if kind == "base":
        core = BaseHeuristicPolicy(config, tag)
    else:
        core = RolloutPolicy(config, RolloutConfig(base=tag, shortlist_size=shortlist))
    return OpenedPolicy(core, opener_gid)


def cmd_solve(args, out) -> int:
    config = _load_config(args)
    mid = config.core.mystery_index.get(args.mystery.strip().lower())
    if mid is None:
        close = difflib.get_close_matches(
            args.mystery.strip().lower(), config.core.mystery_texts, n=3
        )
        hint = f"; did you mean {', '.join(close)}?" if close else ""
        raise SystemExit_(EXIT_DATA, f"mystery {args.mystery!r} is not in the mystery list{hint}")
    opener_gid = _guess_id_or_hint(config, args.opener, "opener")
    policy = _make_policy(config, args.policy, args.shortlist, opener_gid)
    record = play_episode(mid, policy, config)
    state = initial_state(config)
    for turn, (gid, code) in enumerate(record.history, start=1):
        state = filter_mysteries(state, gid, code, config)
        out.write(
            f"{turn}. {config.core.guess_texts[gid]}  "
            f"{pattern_to_string(code, config.word_length)}  "
            f"(remaining {state.eligible_count})\n"
        )
    verdict = "solved" if record.solved else f"over the {config.max_guesses}-guess limit"
    out.write(f"{record.mystery} in {record.guess_count} guesses ({verdict})\n")
    return EXIT_OK


def cmd_suggest(args, out) -> int:
    config = _load_config(args)
    if args.opener_only:
        _guess_id_or_hint(config, args.opener, "opener")
        out.write(f"opener: {args.opener.strip().lower()}\n")
        return EXIT_OK
    if len(args.history) % 2 != 0:
        raise SystemExit_(EXIT_USAGE, "history must be GUESS PATTERN pairs")
    eligible = None
    if args.sublist:
        ids = [
            config.mystery_id(w) if w.strip().lower() in config.core.mystery_index
            else _raise_data(f"sublist word {w!r} is not in the mystery list")
            for w in args.sublist.split(",")
        ]
        eligible = ids
    state = initial_state(config, eligible)
    pairs = list(zip(args.history[::2], args.history[1::2]))
    for word, pattern in pairs:
        gid = _guess_id_or_hint(config, word)
        code = parse_pattern(pattern, config.word_length)
        state = filter_mysteries(state, gid, code, config)
    out.write(f"remaining: {state.eligible_count}\n")
    if state_solved(state, config):
        out.write("solved!\n")
        return EXIT_OK
    _, base = bench_mod.parse_policy(args.policy)
    rcfg = RolloutConfig(base=base, shortlist_size=args.shortlist)
    if not pairs:
        out.write(f"suggestion: {args.opener.strip().lower()}\n")
        return EXIT_OK
    rows = ranked_suggestions(state, config, rcfg)
    for row in rows:
        out.write(row["display"] + "\n")
    out.write(f"suggestion: {rows[0]['word']}\n")
    return EXIT_OK


def _raise_data(message: str):
    raise SystemExit_(EXIT_DATA, message)


def cmd_bench(args, out) -> int:
    config = _load_config(args)
    spec = bench_mod.BenchmarkSpec(
        openers=[w.strip().lower() for w in args.openers.split(",") if w.strip()],
        modes=[m.strip() for m in args.modes.split(",") if m.strip()],
        policies=[p.strip().lower() for p in args.policies.split(",") if p.strip()],
        shortlist_size=args.shortlist,
        output=str(args.out) if args.out else None,
    )
    def progress(row):
        out.write(
            f"{row.opener} {row.mode} {row.policy}: mean={row.mean:.4f} "
            f"failures={row.failures} ({row.seconds:.1f}s)\n"
        )
        out.flush()
    rows = bench_mod.run_benchmark(spec, config, workers=args.workers, progress=progress)
    out.write("\n" + bench_mod.compare_report(rows) + "\n")
    if args.out:
        out.write(f"csv written to {args.out}\n")
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    config = _load_config(args)
    instance = oracle_mod.make_sub_instance(
        config, seed=args.seed, n_mysteries=args.mysteries,
        n_guesses=args.guesses, mode=args.mode,
    )
    sub = oracle_mod.sub_config(instance, config)
    value, opener_gid = oracle_mod.optimal_expected_guesses(sub)
    out.write(
        f"instance: seed={args.seed} mysteries={args.mysteries} "
        f"guesses={args.guesses} mode={args.mode}\n"
    )
    out.write(f"optimal expected guesses: {value} = {float(value):.6f}\n")
    out.write(f"optimal opener: {sub.core.guess_texts[opener_gid]}\n")
    return EXIT_OK


def cmd_serve(args, out) -> int:
    import uvicorn

    from .service import create_app

    out.write(f"serving on http://{args.host}:{args.port}\n")
    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = {
            "solve": cmd_solve,
            "suggest": cmd_suggest,
            "bench": cmd_bench,
            "oracle": cmd_oracle,
            "serve": cmd_serve,
        }[args.command]
        return handler(args, sys.stdout)
    except SystemExit_ as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code
    except InconsistentFeedbackError as exc:
        print(f"inconsistent transcript: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (LexiconError, GameError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
