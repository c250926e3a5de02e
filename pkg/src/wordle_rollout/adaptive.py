"""Generic planning for systems with one unknown parameter.

A hypothesis model is a deterministic controlled system x' = f(x, theta, u)
whose parameter theta is fixed but unknown, drawn from a finite hypothesis
list.  The controller sees states and controls, maintains a belief over the
hypotheses, and picks controls by one-step lookahead against per-hypothesis
cost-to-go estimates:

* `belief_update`       - Bayes step: hypotheses inconsistent with the
                          observed transition are zeroed, the rest renormalized.
* `value_space_step`    - argmin_u sum_i b_i [g(x,theta_i,u) + J_i(f(x,theta_i,u))]
                          for supplied cost approximations J_i.
* `hypothesis_rollout_step` - same lookahead with J_i taken as the cost of a
                          base policy propagated forward under theta_i.
* `exact_information_dp`- exact optimal cost by recursion over (state,
                          hypothesis support), valid for uniform priors over
                          elimination-style dynamics.

The hidden-word game is one instance (hypotheses = mystery words, state =
eligible list); a number-search demo with ternary compare feedback gives an
independently checkable second instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Sequence

import numpy as np

from .game import (
    DivergenceError,
    GameConfig,
    GameError,
    GameState,
    HARD,
    allowable_guesses,
    filter_mysteries,
    initial_state,
)


class _Terminal:
    def __repr__(self):
        return "TERMINAL"


TERMINAL = _Terminal()


class InconsistentObservationError(GameError):
    """An observed transition eliminated every hypothesis."""


@dataclass
class HypothesisModel:
    """Deterministic system with an unknown parameter from a finite set.

    `dynamics` may return TERMINAL to end the episode under that hypothesis;
    `terminal_cost` is the end-of-horizon cost (zero for every shipped
    instance).  `state_key` must give a hashable identity for memoization
    and transition comparison.
    """

    hypotheses: tuple
    dynamics: Callable[[Any, Any, Any], Any]
    stage_cost: Callable[[Any, Any, Any], float]
    control_set: Callable[[Any], Sequence]
    state_key: Callable[[Any], Hashable] = lambda x: x
    terminal_cost: Callable[[Any], float] = lambda x: 0.0
    tie_break: Callable[[Any, list], Any] = lambda x, controls: min(controls)
    sim_cap: int = 100_000

    def key_of(self, x) -> Hashable:
        return TERMINAL if x is TERMINAL else self.state_key(x)


TIE_EPS = 1e-9


class BeliefVector:
    """Probabilities over the hypothesis list."""

    def __init__(self, probabilities):
        probs = np.asarray(probabilities, dtype=np.float64)
        if probs.ndim != 1:
            raise GameError("belief must be a vector")
        if (probs < 0).any():
            raise GameError("belief probabilities must be nonnegative")
        total = probs.sum()
        if not math.isclose(total, 1.0, abs_tol=1e-12):
            raise GameError(f"belief must sum to 1 (got {total!r})")
        self.probabilities = probs

    @staticmethod
    def uniform(m: int) -> "BeliefVector":
        return BeliefVector(np.full(m, 1.0 / m))

    @staticmethod
    def uniform_over(indices: Sequence[int], m: int) -> "BeliefVector":
        probs = np.zeros(m)
        probs[list(indices)] = 1.0 / len(indices)
        return BeliefVector(probs)

    @staticmethod
    def point_mass(index: int, m: int) -> "BeliefVector":
        probs = np.zeros(m)
        probs[index] = 1.0
        return BeliefVector(probs)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.probabilities > 0.0)

    def is_uniform_over_support(self, rel_tol: float = 1e-9) -> bool:
        sup = self.support()
        if len(sup) == 0:
            return False
        expected = 1.0 / len(sup)
        return bool(
            np.allclose(self.probabilities[sup], expected, rtol=rel_tol, atol=1e-15)
        )

    def __len__(self) -> int:
        return len(self.probabilities)


@dataclass
class InformationVector:
    """The raw history: states x_0..x_k and controls u_0..u_{k-1}."""

    states: list
    controls: list

    def __post_init__(self):
        if len(self.states) != len(self.controls) + 1:
            raise GameError(
                f"information vector needs k+1 states and k controls, got "
                f"{len(self.states)} and {len(self.controls)}"
            )

    def consistent_hypotheses(self, model: HypothesisModel) -> list[int]:
        alive = list(range(len(model.hypotheses)))
        for x, u, x_next in zip(self.states, self.controls, self.states[1:]):
            key_next = model.key_of(x_next)
            alive = [
                i
                for i in alive
                if model.key_of(model.dynamics(x, model.hypotheses[i], u)) == key_next
            ]
        return alive

    def validate(self, model: HypothesisModel) -> None:
        if not self.consistent_hypotheses(model):
            raise InconsistentObservationError(
                "no hypothesis is consistent with the recorded trajectory"
            )


def belief_update(
    belief: BeliefVector, x, u, x_next, model: HypothesisModel
) -> BeliefVector:
    """Bayes step for deterministic dynamics: zero out hypotheses whose
    predicted successor differs from the observed one, renormalize."""
    key_next = model.key_of(x_next)
    probs = belief.probabilities.copy()
    for i in np.flatnonzero(probs > 0.0):
        predicted = model.dynamics(x, model.hypotheses[i], u)
        if model.key_of(predicted) != key_next:
            probs[i] = 0.0
    total = probs.sum()
    if total <= 0.0:
        raise InconsistentObservationError(
            "observed transition is inconsistent with every hypothesis"
        )
    return BeliefVector(probs / total)


def _as_per_hypothesis(obj, m: int) -> list:
    if callable(obj):
        return [obj] * m
    seq = list(obj)
    if len(seq) != m:
        raise GameError(f"need one entry per hypothesis ({m}), got {len(seq)}")
    return seq


def _lookahead_argmin(x, belief, term_fn, model, tie_break):
    controls = list(model.control_set(x))
    if not controls:
        raise GameError("control set is empty")
    support = belief.support()
    probs = belief.probabilities
    best = None
    values = []
    for u in controls:
        q = 0.0
        for i in support:
            theta = model.hypotheses[i]
            q += probs[i] * (model.stage_cost(x, theta, u) + term_fn(i, theta, x, u))
        values.append(q)
        if best is None or q < best:
            best = q
    ties = [u for u, q in zip(controls, values) if q <= best + TIE_EPS]
    if len(ties) == 1:
        return ties[0]
    chosen = (tie_break or model.tie_break)(x, ties)
    return chosen


def value_space_step(
    x,
    belief: BeliefVector,
    approximations,
    model: HypothesisModel,
    tie_break: Callable[[Any, list], Any] | None = None,
):
    """One-step lookahead against supplied cost-to-go approximations.

    `approximations` is either one shared callable J(x') or a sequence of
    per-hypothesis callables J_i(x'); TERMINAL successors cost 0.
    """
    js = _as_per_hypothesis(approximations, len(model.hypotheses))

    def term(i, theta, x_, u):
        nxt = model.dynamics(x_, theta, u)
        return 0.0 if nxt is TERMINAL else js[i](nxt)

    return _lookahead_argmin(x, belief, term, model, tie_break)


def policy_cost_under_hypothesis(
    x, theta, policy, model: HypothesisModel
) -> float:
    """Total cost of running `policy` from x with the parameter fixed at
    theta (the oracle assumption), propagated until termination."""
    cost = 0.0
    for _ in range(model.sim_cap):
        if x is TERMINAL:
            return cost
        u = policy(x)
        cost += model.stage_cost(x, theta, u)
        x = model.dynamics(x, theta, u)
    raise DivergenceError(
        f"base policy failed to terminate within {model.sim_cap} steps"
    )


def hypothesis_rollout_step(
    x,
    belief: BeliefVector,
    base_policies,
    model: HypothesisModel,
    tie_break: Callable[[Any, list], Any] | None = None,
):
    """One-step lookahead whose cost-to-go is a base policy's cost simulated
    forward under each hypothesis."""
    pis = _as_per_hypothesis(base_policies, len(model.hypotheses))

    def term(i, theta, x_, u):
        nxt = model.dynamics(x_, theta, u)
        if nxt is TERMINAL:
            return 0.0
        return policy_cost_under_hypothesis(nxt, theta, pis[i], model)

    return _lookahead_argmin(x, belief, term, model, tie_break)


@dataclass
class DPResult:
    cost: Fraction
    control: Any
    tree: dict
    nodes: int

    def tree_text(self, indent: str = "  ") -> str:
        lines: list[str] = []

        def walk(node: dict, depth: int, label: str):
            lines.append(
                f"{indent * depth}{label}cost={node['cost']} play {node['control']}"
            )
            for sub_label, child in node.get("children", {}).items():
                if child is None:
                    lines.append(f"{indent * (depth + 1)}[{sub_label}] solved")
                else:
                    walk(child, depth + 1, f"[{sub_label}] ")

        walk(self.tree, 0, "")
        return "\n".join(lines)


def exact_information_dp(
    model: HypothesisModel,
    x0,
    support: Sequence[int] | None = None,
    horizon: int | None = None,
    node_budget: int = 200_000,
) -> DPResult:
    """Optimal expected cost by recursion over (state, hypothesis support).

    Valid when the prior is uniform and the dynamics only ever eliminate
    hypotheses (the belief then stays uniform over its support, so the
    support is a sufficient statistic).  Costs are exact Fractions.
    Controls that change nothing (same state, same support, nothing solved)
    are skipped; exceeding `node_budget` distinct nodes raises
    InstanceTooLargeError from the oracle module.
    """
    from .oracle import InstanceTooLargeError  # local import to avoid cycle

    if support is None:
        support = tuple(range(len(model.hypotheses)))
    memo: dict = {}

    def solve(x, sup: tuple[int, ...], depth: int) -> tuple[Fraction, Any, dict]:
        if horizon is not None and depth >= horizon:
            cost = Fraction(model.terminal_cost(x))
            return cost, None, {"cost": cost, "control": None, "children": {}}
        key = (model.key_of(x), sup)
        if key in memo:
            return memo[key]
        if len(memo) >= node_budget:
            raise InstanceTooLargeError(
                f"exact DP exceeded the {node_budget}-node budget"
            )
        n = len(sup)
        x_key = model.key_of(x)
        best = None
        for u in model.control_set(x):
            cells: dict[Hashable, tuple[list[int], Any]] = {}
            for i in sup:
                nxt = model.dynamics(x, model.hypotheses[i], u)
                k = model.key_of(nxt)
                cells.setdefault(k, ([], nxt))[0].append(i)
            if len(cells) == 1:
                (k, (ids, nxt)), = cells.items()
                if k == x_key and len(ids) == n:
                    continue  # no progress under any hypothesis
            stage = Fraction(0)
            for i in sup:
                stage += Fraction(model.stage_cost(x, model.hypotheses[i], u)) / n
            cost = stage
            children: dict[str, dict | None] = {}
            for k, (ids, nxt) in sorted(cells.items(), key=lambda kv: str(kv[0])):
                label = ",".join(str(model.hypotheses[i]) for i in ids)
                if nxt is TERMINAL:
                    children[label] = None
                    continue
                sub_cost, _, sub_tree = solve(nxt, tuple(ids), depth + 1)
                cost += Fraction(len(ids), n) * sub_cost
                children[label] = sub_tree
            if best is None or cost < best[0]:
                best = (cost, u, children)
        if best is None:
            raise GameError("every control was a no-op; the instance cannot progress")
        result = (
            best[0],
            best[1],
            {"cost": best[0], "control": best[1], "children": best[2]},
        )
        memo[key] = result
        return result

    cost, control, tree = solve(x0, tuple(support), 0)
    return DPResult(cost=cost, control=control, tree=tree, nodes=len(memo))


# --- instances ---------------------------------------------------------------


def number_search_model(n: int) -> tuple[HypothesisModel, tuple[int, int]]:
    """Find a hidden number in {1..n}; each probe answers less/equal/greater.

    State is the candidate interval (lo, hi); probing the hidden number
    terminates.  The exact optimum is independently computable, which makes
    this the non-game validation instance.
    """
    if n < 1:
        raise GameError("need n >= 1")

    def dynamics(x, theta, u):
        lo, hi = x
        if theta == u:
            return TERMINAL
        return (lo, u - 1) if theta < u else (u + 1, hi)

    model = HypothesisModel(
        hypotheses=tuple(range(1, n + 1)),
        dynamics=dynamics,
        stage_cost=lambda x, theta, u: 1.0,
        control_set=lambda x: range(x[0], x[1] + 1),
        state_key=lambda x: x,
    )
    return model, (1, n)


def lowest_probe_policy(x) -> int:
    return x[0]


def wordle_model(config: GameConfig) -> tuple[HypothesisModel, GameState]:
    """The hidden-word game as a hypothesis model: hypotheses are mystery
    ids, the state is the eligible-list GameState, controls are guess ids,
    and a correct guess terminates."""
    core = config.core
    table = core.matrix.table
    all_green = core.all_green
    hard = config.mode == HARD

    def dynamics(state: GameState, mystery: int, gid: int):
        code = int(table[gid, mystery])
        if code == all_green:
            return TERMINAL
        return filter_mysteries(state, gid, code, config)

    model = HypothesisModel(
        hypotheses=tuple(range(len(core.mysteries))),
        dynamics=dynamics,
        stage_cost=lambda x, theta, u: 1.0,
        control_set=lambda x: [int(g) for g in allowable_guesses(x, config)],
        state_key=lambda x: x.memo_key(hard),
    )
    return model, initial_state(config)


def load_instance(spec: dict, parent: GameConfig | None = None):
    """Declarative instance loading: {'type': 'number-search', 'n': 3} or
    {'type': 'wordle-sub', 'seed': .., 'mysteries': .., 'guesses': ..,
    'mode': ..} (the latter needs the parent config for its word lists)."""
    kind = spec.get("type")
    if kind == "number-search":
        return number_search_model(int(spec["n"]))
    if kind == "wordle-sub":
        if parent is None:
            raise GameError("wordle-sub instances need the parent config")
        from .oracle import make_sub_instance, sub_config

        instance = make_sub_instance(
            parent,
            seed=int(spec["seed"]),
            n_mysteries=int(spec.get("mysteries", 20)),
            n_guesses=int(spec.get("guesses", 100)),
            mode=spec.get("mode", "easy"),
        )
        return wordle_model(sub_config(instance, parent))
    raise GameError(f"unknown instance type {kind!r}")
