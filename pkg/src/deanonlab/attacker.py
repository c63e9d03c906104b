"""The information threshold attack and a naive identity-scan baseline.

The threshold attack keeps one running score per candidate user j:

    score(j) = sum of information densities i(u_t(j); y_t) over the group
               queries issued so far, minus the prior surprisal
               log2(1 / P(victim = j)),

where u_t(j) is candidate j's scanned-graph bit for the queried group and
y_t the received response. Group queries walk a shared cursor through fresh
groups; the walk stops as soon as some candidate's score reaches the
threshold log2(1/epsilon). The top-scoring candidate is then verified with a
single noiseless identity query. On failure the candidate is struck from all
later consideration, scores reset, and the walk resumes on the next groups.
After ``steps_l - 1`` failed verifications (or if the graph runs out of
groups), the attack falls back to exhaustive identity queries over the users
not yet struck, so it always terminates with the victim found.

A candidate whose expected bit makes the received response impossible
(density -inf) drops out of the running step but is revived by the next
reset; only failed identity checks eliminate permanently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import BigraphPair
from .oracle import VictimInstance, expected_response_column
from .stochastics import InfoMeasures, VictimPrior

FINAL_PHASE_ORDERS = ("by_info_value_desc", "random", "by_prior_desc")


@dataclass(frozen=True)
class ITSConfig:
    """Tuning knobs of the information threshold attack.

    epsilon sets the stopping threshold log2(1/epsilon); steps_l caps the
    number of verify-and-retry rounds before the exhaustive fallback. Groups
    are always consumed in increasing index order. ``final_phase_order``
    picks the order of fallback identity queries.
    """

    epsilon: float
    steps_l: int
    group_order: str = "sequential"
    final_phase_order: str = "by_info_value_desc"

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie strictly inside (0, 1)")
        if self.steps_l < 1:
            raise ValueError("steps_l must be at least 1")
        if self.group_order != "sequential":
            raise ValueError("only sequential group order is supported")
        if self.final_phase_order not in FINAL_PHASE_ORDERS:
            raise ValueError(f"final_phase_order must be one of {FINAL_PHASE_ORDERS}")

    @property
    def threshold_bits(self) -> float:
        return math.log2(1.0 / self.epsilon)


def auto_epsilon_steps(m: int) -> tuple[float, int]:
    """Default (epsilon, steps_l) schedule as a function of the user count.

    Tracks the asymptotic schedule epsilon = log2 log2 m / log2 m with steps
    log2 m / (log2 log2 m - log2 log2 log2 m), clamped to usable values:
    epsilon at most 0.5, at least 2 steps, and fixed (0.25, 3) for m <= 16
    where the iterated logs are not meaningful.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if m <= 16:
        return 0.25, 3
    lm = math.log2(m)
    llm = math.log2(lm)
    lllm = math.log2(llm)
    eps = min(llm / lm, 0.5)
    steps = max(2, math.ceil(lm / (llm - lllm)))
    return eps, steps


@dataclass
class ITSState:
    """Mutable per-run attacker state.

    ``info`` accumulates the density sums; a -inf entry means the candidate
    is out of the current step. ``eliminated`` marks candidates struck by a
    failed identity check; they stay struck across resets.
    """

    info: np.ndarray
    prior_surprisal: np.ndarray
    group_cursor: int
    step: int
    eliminated: np.ndarray

    def scores(self) -> np.ndarray:
        """Candidate scores: accumulated density minus prior surprisal."""
        out = self.info - self.prior_surprisal
        out[self.eliminated] = -np.inf
        return out


def init_state(prior: VictimPrior, config: ITSConfig) -> ITSState:
    """Fresh state: zero accumulators, surprisal log2(1/P(j)), cursor at group 1."""
    m = prior.m
    return ITSState(
        info=np.zeros(m),
        prior_surprisal=-np.log2(prior.probs),
        group_cursor=1,
        step=1,
        eliminated=np.zeros(m, dtype=bool),
    )


def gm_update(state: ITSState, column: np.ndarray, y: int, measures: InfoMeasures) -> ITSState:
    """Fold one group-membership response into every candidate's accumulator.

    ``column`` holds each candidate's expected bit for the queried group.
    Candidates whose expected bit makes ``y`` impossible pick up the -inf
    sentinel and thereby leave the current step. Struck candidates already
    sit at -inf relative to any threshold, so the blanket add is harmless.
    """
    state.info += measures.density[column, y]
    return state


def threshold_check(state: ITSState, epsilon: float) -> tuple[bool, np.ndarray]:
    """Stop decision: does any live candidate's score reach log2(1/epsilon)?

    Returns the decision plus the 1-based indices of all candidates at or
    above the threshold (the comparison is inclusive).
    """
    crossed = state.scores() >= math.log2(1.0 / epsilon)
    return bool(crossed.any()), np.flatnonzero(crossed) + 1


def select_candidate(state: ITSState) -> int:
    """The top-scoring live candidate, ties broken toward the lowest index."""
    return int(np.argmax(state.scores())) + 1


def _final_phase_order(state: ITSState, prior: VictimPrior, config: ITSConfig, inst: VictimInstance) -> np.ndarray:
    """Order of fallback identity queries over the not-yet-struck users."""
    remaining = np.flatnonzero(~state.eliminated)
    if config.final_phase_order == "by_info_value_desc":
        keys = state.scores()[remaining]
    elif config.final_phase_order == "by_prior_desc":
        keys = prior.probs[remaining]
    else:
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=inst.noise_seed, spawn_key=(0xF1A1,))
        )
        return remaining[rng.permutation(remaining.size)] + 1
    # Stable sort on the negated key: descending value, ascending index on ties.
    return remaining[np.argsort(-keys, kind="stable")] + 1


def run_its(
    pair: BigraphPair,
    inst: VictimInstance,
    prior: VictimPrior,
    measures: InfoMeasures,
    config: ITSConfig,
) -> "AttackTranscript":
    """Run the full threshold attack until the victim is identified.

    ``measures`` must be derived from the same model parameters that
    generated ``pair`` and drive ``inst``; the attack consumes the scanned
    graph through per-group candidate columns and the victim only through
    oracle responses.
    """
    if inst.pair is not pair:
        raise ValueError("oracle instance is bound to a different graph pair")
    if prior.m != pair.m:
        raise ValueError("prior length disagrees with the pair's user count")
    n = pair.n
    state = init_state(prior, config)
    queries: list[tuple[str, int, int]] = []
    tau_star_per_step: list[int] = []
    ordinal = 0

    for step in range(1, config.steps_l):
        state.step = step
        state.info[:] = 0.0
        stop, _ = threshold_check(state, config.epsilon)  # the zero-query clause
        gm_count = 0
        while not stop and state.group_cursor <= n:
            group = state.group_cursor
            column = expected_response_column(pair, group)
            ordinal += 1
            y = inst.noisy_gm_response(group, ordinal)
            queries.append(("GM", group, y))
            gm_update(state, column, y, measures)
            state.group_cursor += 1
            gm_count += 1
            stop, _ = threshold_check(state, config.epsilon)
        if not stop:
            break  # groups exhausted; fall through to exhaustive identity queries
        tau_star_per_step.append(gm_count)
        guess = select_candidate(state)
        response = inst.uid_response(guess)
        queries.append(("UID", guess, response))
        if response == 1:
            return AttackTranscript(
                queries=queries,
                success=True,
                identified=guess,
                steps_used=step,
                tau_star_per_step=tau_star_per_step,
            )
        state.eliminated[guess - 1] = True

    for candidate in _final_phase_order(state, prior, config, inst):
        response = inst.uid_response(int(candidate))
        queries.append(("UID", int(candidate), response))
        if response == 1:
            return AttackTranscript(
                queries=queries,
                success=True,
                identified=int(candidate),
                steps_used=len(tau_star_per_step) + 1,
                tau_star_per_step=tau_star_per_step,
            )
    raise AssertionError("unreachable: exhaustive identity phase covers the victim")


def run_uid_scan(inst: VictimInstance, order="random", seed=None) -> "AttackTranscript":
    """Baseline attack: identity queries only, in the given order.

    ``order`` is ``"random"`` (seeded shuffle), ``"sequential"`` (1..m), or
    an explicit permutation of 1-based user indices.
    """
    m = inst.pair.m
    if isinstance(order, str):
        if order == "sequential":
            sequence = range(1, m + 1)
        elif order == "random":
            rng = np.random.default_rng(seed)
            sequence = (rng.permutation(m) + 1).tolist()
        else:
            raise ValueError(f"unknown scan order {order!r}")
    else:
        sequence = [int(j) for j in order]
        if sorted(sequence) != list(range(1, m + 1)):
            raise ValueError("explicit order must be a permutation of 1..m")
    queries: list[tuple[str, int, int]] = []
    for candidate in sequence:
        response = inst.uid_response(candidate)
        queries.append(("UID", candidate, response))
        if response == 1:
            return AttackTranscript(
                queries=queries,
                success=True,
                identified=candidate,
                steps_used=1,
                tau_star_per_step=[],
            )
    raise AssertionError("unreachable: a full permutation covers the victim")


@dataclass
class AttackTranscript:
    """Ordered record of one attack run.

    ``queries`` holds (kind, target, response) triples with kind "GM" or
    "UID"; ``tau_star_per_step`` the number of group queries in each
    completed threshold step. A successful transcript ends with the
    identifying ("UID", victim, 1) entry.
    """

    queries: list[tuple[str, int, int]]
    success: bool
    identified: int | None
    steps_used: int
    tau_star_per_step: list[int] = field(default_factory=list)

    @property
    def q_count(self) -> int:
        return len(self.queries)

    def gm_count(self) -> int:
        return sum(1 for kind, _, _ in self.queries if kind == "GM")

    def uid_count(self) -> int:
        return sum(1 for kind, _, _ in self.queries if kind == "UID")

    def step_uid_responses(self) -> list[int]:
        """Responses of the per-step verification queries, in step order.

        The first ``len(tau_star_per_step)`` identity queries are the
        threshold-step verifications; later ones belong to the exhaustive
        fallback.
        """
        uid_responses = [r for kind, _, r in self.queries if kind == "UID"]
        return uid_responses[: len(self.tau_star_per_step)]

    def to_json(self) -> dict:
        return {
            "victim": self.identified,
            "queries": [
                {"kind": kind, "target": target, "response": response}
                for kind, target, response in self.queries
            ],
            "q_count": self.q_count,
            "success": self.success,
            "steps_used": self.steps_used,
        }
