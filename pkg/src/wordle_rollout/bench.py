"""Full-sweep benchmarks: one row per (opener, mode, policy).

Every mystery word is played exactly once per row; the mean, histogram and
failure count are exact aggregates, so reruns are deterministic and
independent of the worker count (episodes are chunked by mystery id and
reassembled in id order).

Published optimal scores, where the benchmark openers have them, feed the
percent-of-optimal column in the comparison report.
"""

from __future__ import annotations

import io
import time
from dataclasses import dataclass, field
from multiprocessing import get_context

import numpy as np

from .game import GameConfig, play_episode
from .heuristics import HEURISTIC_TAGS, BaseHeuristicPolicy, normalize_tag
from .lexicon import LexiconError
from .rollout import OpenedPolicy, RolloutConfig, RolloutPolicy

CSV_VERSION = "bench-csv v1"
CSV_COLUMNS = ("opener", "mode", "policy", "mean", "p50", "max", "failures", "seconds")

TABLE1_OPENERS = (
    "salet", "reast", "crate", "trace", "slate", "trape", "slane",
    "prate", "crane", "carle", "train", "raise", "clout",
)

# (opener, mode) -> published optimal mean guess count; None where the
# sources did not report one.
PUBLISHED_OPTIMAL: dict[tuple[str, str], float | None] = {
    ("salet", "easy"): 3.4212, ("salet", "hard"): 3.5084,
    ("reast", "easy"): 3.4225, ("reast", "hard"): 3.5136,
    ("crate", "easy"): 3.4238, ("crate", "hard"): 3.5175,
    ("trace", "easy"): 3.4238, ("trace", "hard"): None,
    ("slate", "easy"): 3.4246, ("slate", "hard"): None,
    ("trape", "easy"): 3.4454, ("trape", "hard"): 3.5179,
    ("slane", "easy"): 3.4311, ("slane", "hard"): 3.5201,
    ("prate", "easy"): 3.4376, ("prate", "hard"): 3.5210,
    ("crane", "easy"): 3.4255, ("crane", "hard"): 3.5227,
    ("carle", "easy"): 3.4285, ("carle", "hard"): 3.5261,
    ("train", "easy"): 3.4436, ("train", "hard"): 3.5248,
    ("raise", "easy"): 3.4618, ("raise", "hard"): None,
    ("clout", "easy"): None, ("clout", "hard"): None,
}


def parse_policy(tag: str) -> tuple[str, str]:
    """'mig' -> ('base', 'mig'); 'rollout-mig' -> ('rollout', 'mig')."""
    t = tag.strip().lower()
    if t.startswith("rollout-"):
        return "rollout", normalize_tag(t[len("rollout-"):])
    return "base", normalize_tag(t)


@dataclass
class BenchmarkSpec:
    openers: list[str]
    modes: list[str] = field(default_factory=lambda: ["easy"])
    policies: list[str] = field(default_factory=lambda: ["mig", "rollout-mig"])
    shortlist_size: int = 10
    repetitions: int = 1  # sweeps are exhaustive and deterministic
    output: str | None = None


@dataclass
class BenchmarkRow:
    opener: str
    mode: str
    policy: str
    mean: float
    histogram: dict[int, int]
    failures: int
    p50: float
    max_guesses: int
    seconds: float

    def result_fields(self) -> tuple:
        p50 = int(self.p50) if float(self.p50).is_integer() else self.p50
        return (
            self.opener,
            self.mode,
            self.policy,
            f"{self.mean:.4f}",
            str(p50),
            str(self.max_guesses),
            str(self.failures),
        )


def _aggregate(
    opener: str, mode: str, policy: str, counts: list[int], seconds: float,
    max_guesses: int,
) -> BenchmarkRow:
    arr = np.array(counts)
    hist: dict[int, int] = {}
    for c in counts:
        hist[c] = hist.get(c, 0) + 1
    return BenchmarkRow(
        opener=opener,
        mode=mode,
        policy=policy,
        mean=float(arr.sum()) / len(arr),
        histogram=dict(sorted(hist.items())),
        failures=int((arr > max_guesses).sum()),
        p50=float(np.median(arr)),
        max_guesses=int(arr.max()),
        seconds=seconds,
    )


class _PolicyBank:
    """Per-process cache of policy cores keyed by (mode, kind, tag); base
    heuristic memos are shared between base rows, rollout rows and rollout
    simulations, which is what makes multi-opener sweeps cheap."""

    def __init__(self, config: GameConfig):
        self.config = config
        self._bases: dict = {}
        self._rollouts: dict = {}

    def base(self, mode: str, tag: str) -> BaseHeuristicPolicy:
        key = (mode, tag)
        if key not in self._bases:
            self._bases[key] = BaseHeuristicPolicy(self.config.with_mode(mode), tag)
        return self._bases[key]

    def policy(self, mode: str, policy_tag: str, shortlist_size: int):
        kind, tag = parse_policy(policy_tag)
        base = self.base(mode, tag)
        if kind == "base":
            return base
        key = (mode, tag, shortlist_size)
        if key not in self._rollouts:
            self._rollouts[key] = RolloutPolicy(
                self.config.with_mode(mode),
                RolloutConfig(base=tag, shortlist_size=shortlist_size),
                base,
            )
        return self._rollouts[key]

    def drop(self, mode: str | None = None) -> None:
        if mode is None:
            self._bases.clear()
            self._rollouts.clear()


_FORK_STATE: dict = {}


def _sweep_range(args) -> list[int]:
    opener_gid, mode, policy_tag, shortlist, lo, hi = args
    bank: _PolicyBank = _FORK_STATE["bank"]
    config = bank.config.with_mode(mode)
    core = bank.policy(mode, policy_tag, shortlist)
    policy = OpenedPolicy(core, opener_gid)
    return [
        play_episode(mid, policy, config).guess_count for mid in range(lo, hi)
    ]


def _sweep_counts(
    bank: _PolicyBank,
    opener_gid: int,
    mode: str,
    policy_tag: str,
    shortlist: int,
    workers: int,
) -> list[int]:
    n = len(bank.config.core.mysteries)
    if workers <= 1:
        return _sweep_range((opener_gid, mode, policy_tag, shortlist, 0, n))
    chunk = (n + workers - 1) // workers
    tasks = [
        (opener_gid, mode, policy_tag, shortlist, lo, min(lo + chunk, n))
        for lo in range(0, n, chunk)
    ]
    _FORK_STATE["bank"] = bank
    ctx = get_context("fork")
    with ctx.Pool(workers) as pool:
        parts = pool.map(_sweep_range, tasks)
    counts: list[int] = []
    for part in parts:
        counts.extend(part)
    return counts


def run_benchmark(
    spec: BenchmarkSpec,
    config: GameConfig,
    workers: int = 1,
    progress=None,
) -> list[BenchmarkRow]:
    """One row per (opener, mode, policy), openers played over the full
    mystery list.  Output is independent of `workers`."""
    core = config.core
    for opener in spec.openers:
        if opener.strip().lower() not in core.guess_index:
            raise LexiconError(f"opener {opener!r} is not in the guess list")
    bank = _PolicyBank(config)
    _FORK_STATE["bank"] = bank
    rows: list[BenchmarkRow] = []
    for mode in spec.modes:
        for policy_tag in spec.policies:
            parse_policy(policy_tag)
            for opener in spec.openers:
                gid = config.guess_id(opener)
                started = time.perf_counter()
                counts = _sweep_counts(
                    bank, gid, mode, policy_tag, spec.shortlist_size, workers
                )
                row = _aggregate(
                    opener.strip().lower(),
                    mode,
                    policy_tag.strip().lower(),
                    counts,
                    time.perf_counter() - started,
                    config.max_guesses,
                )
                rows.append(row)
                if progress is not None:
                    progress(row)
    if spec.output:
        write_csv(rows, spec.output)
    return rows


def rows_to_csv(rows: list[BenchmarkRow], include_timing: bool = True) -> str:
    """Fixed, versioned schema; timing can be excluded since wall time is
    the one non-deterministic column."""
    out = io.StringIO()
    columns = CSV_COLUMNS if include_timing else CSV_COLUMNS[:-1]
    out.write(f"# {CSV_VERSION}\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        fields = row.result_fields()
        if include_timing:
            fields = fields + (f"{row.seconds:.3f}",)
        out.write(",".join(fields) + "\n")
    return out.getvalue()


def write_csv(rows: list[BenchmarkRow], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rows_to_csv(rows))


def compare_report(rows: list[BenchmarkRow]) -> str:
    """Base-vs-rollout deltas per (opener, mode, heuristic), with percent
    over the published optimal where one exists."""
    if not rows:
        raise LexiconError("no benchmark rows to compare")
    by_key = {(r.opener, r.mode, r.policy): r for r in rows}
    lines = [
        f"{'opener':<8} {'mode':<5} {'heur':<5} {'base':>8} {'rollout':>8} "
        f"{'delta':>8} {'optimal':>8} {'% over':>7}"
    ]
    seen = set()
    for row in rows:
        kind, tag = parse_policy(row.policy)
        key = (row.opener, row.mode, tag)
        if key in seen:
            continue
        seen.add(key)
        base = by_key.get((row.opener, row.mode, tag))
        roll = by_key.get((row.opener, row.mode, f"rollout-{tag}"))
        base_s = f"{base.mean:.4f}" if base else "-"
        roll_s = f"{roll.mean:.4f}" if roll else "-"
        delta_s = f"{roll.mean - base.mean:+.4f}" if base and roll else "-"
        optimal = PUBLISHED_OPTIMAL.get((row.opener, row.mode))
        shown = roll or base
        if optimal is None:
            opt_s, pct_s = "-", "(no published optimum)"
        else:
            opt_s = f"{optimal:.4f}"
            pct_s = f"{100.0 * (shown.mean - optimal) / optimal:+.2f}%"
        lines.append(
            f"{row.opener:<8} {row.mode:<5} {tag:<5} {base_s:>8} {roll_s:>8} "
            f"{delta_s:>8} {opt_s:>8} {pct_s:>7}"
        )
    return "\n".join(lines)
