"""Reproducible Monte Carlo campaigns: config, trial driver, statistics, output.

Each trial gets its own (graph, victim, noise) seeds derived from
(master_seed, trial_index) through a splittable seed sequence, so results do
not depend on execution order or on how trials are distributed over worker
processes. Aggregation is a single pass over the per-trial arrays in trial
order, which keeps repeated runs byte-identical.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bounds_mod
from .attacker import (
    FINAL_PHASE_ORDERS,
    ITSConfig,
    auto_epsilon_steps,
    run_its,
    run_uid_scan,
)
from .graph import generate_cprb
from .oracle import VictimInstance
from .stochastics import (
    EdgeJointDistribution,
    InfoMeasures,
    QueryChannel,
    VictimPrior,
    build_joint_uyz,
    entropy,
    make_prior,
    sample_victim,
)

STRATEGIES = ("its", "uid_scan")
OUTPUT_FORMATS = ("csv", "json")

CSV_COLUMNS = [
    "m", "n", "p0", "edge_flip", "gm_flip", "prior", "epsilon", "l", "trials",
    "mean_Q", "std_Q", "ci95_lo", "ci95_hi", "lower_bound",
    "upper_bound_stated", "upper_bound_certified", "cond_eq3", "cond_eq4",
]


class ConfigError(ValueError):
    """Invalid experiment configuration; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    """Everything that determines a campaign's output.

    ``epsilon`` and ``steps`` accept the string "auto" to use the
    size-dependent defaults. ``prior`` is "uniform", "zipf:S", or an explicit
    probability vector.
    """

    users: int
    groups: int
    p0: float = 0.5
    edge_flip: float = 0.0
    gm_flip: float = 0.0
    prior: object = "uniform"
    epsilon: object = "auto"
    steps: object = "auto"
    trials: int = 2000
    master_seed: int = 0
    strategy: str = "its"
    final_phase_order: str = "by_info_value_desc"
    workers: int = 1
    allow_degenerate: bool = False
    out: str | None = None
    format: str = "csv"

    _FIELDS = None  # populated below

    def validate(self):
        if not isinstance(self.users, int) or self.users < 1:
            raise ConfigError("users", "must be a positive integer")
        if not isinstance(self.groups, int) or self.groups < 1:
            raise ConfigError("groups", "must be a positive integer")
        if not 0.0 < self.p0 < 1.0:
            raise ConfigError("p0", "must lie strictly inside (0, 1)")
        for name in ("edge_flip", "gm_flip"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(name, "must lie in [0, 1]")
        if isinstance(self.prior, str):
            if self.prior != "uniform" and not self.prior.startswith("zipf:"):
                raise ConfigError("prior", "must be 'uniform', 'zipf:S', or a vector")
        if self.epsilon != "auto" and not (
            isinstance(self.epsilon, float) and 0.0 < self.epsilon < 1.0
        ):
            raise ConfigError("epsilon", "must be 'auto' or a float in (0, 1)")
        if self.steps != "auto" and not (
            isinstance(self.steps, int) and self.steps >= 1
        ):
            raise ConfigError("steps", "must be 'auto' or an integer >= 1")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError("trials", "must be a positive integer")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ConfigError("master_seed", "must be a nonnegative integer")
        if self.strategy not in STRATEGIES:
            raise ConfigError("strategy", f"must be one of {STRATEGIES}")
        if self.final_phase_order not in FINAL_PHASE_ORDERS:
            raise ConfigError(
                "final_phase_order", f"must be one of {FINAL_PHASE_ORDERS}"
            )
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError("workers", "must be a positive integer")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError("format", f"must be one of {OUTPUT_FORMATS}")
        try:
            self.make_prior_object()
        except ValueError as exc:
            raise ConfigError("prior", str(exc)) from exc

    def make_prior_object(self) -> VictimPrior:
        return make_prior(self.prior, self.users)

    def prior_label(self) -> str:
        return self.prior if isinstance(self.prior, str) else "explicit"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(key, "unknown configuration field")
        if "users" not in data or "groups" not in data:
            missing = "users" if "users" not in data else "groups"
            raise ConfigError(missing, "required field is missing")
        return cls(**data)


@dataclass(frozen=True)
class _ResolvedModel:
    """Config turned into concrete model objects plus resolved (epsilon, steps)."""

    edge_joint: EdgeJointDistribution
    gm: QueryChannel
    prior: VictimPrior
    measures: InfoMeasures
    epsilon: float
    steps: int

    def its_config(self, final_phase_order: str) -> ITSConfig:
        return ITSConfig(
            epsilon=self.epsilon,
            steps_l=self.steps,
            final_phase_order=final_phase_order,
        )


def resolve_model(config: ExperimentConfig) -> _ResolvedModel:
    edge_joint = EdgeJointDistribution.from_marginal_flip(config.p0, config.edge_flip)
    gm = QueryChannel.bsc(config.gm_flip)
    prior = config.make_prior_object()
    joint = build_joint_uyz(edge_joint, gm)
    measures = InfoMeasures.from_joint(joint)
    if config.epsilon == "auto" or config.steps == "auto":
        auto_eps, auto_steps = auto_epsilon_steps(config.users)
    eps = auto_eps if config.epsilon == "auto" else float(config.epsilon)
    steps = auto_steps if config.steps == "auto" else int(config.steps)
    if (
        config.strategy == "its"
        and measures.mutual_info <= 0.0
        and not config.allow_degenerate
    ):
        raise ConfigError(
            "strategy",
            "its needs a model with positive mutual information; "
            "set allow_degenerate to run it anyway",
        )
    return _ResolvedModel(edge_joint, gm, prior, measures, eps, steps)


def trial_seeds(master_seed: int, trial_index: int) -> tuple[int, int, int]:
    """(graph, victim, noise) seeds for one trial, independent across trials."""
    ss = np.random.SeedSequence([master_seed, trial_index])
    state = ss.generate_state(3, np.uint64)
    return int(state[0]), int(state[1]), int(state[2])


def _run_one_trial(config: ExperimentConfig, model: _ResolvedModel, k: int):
    graph_seed, victim_seed, noise_seed = trial_seeds(config.master_seed, k)
    pair = generate_cprb(config.groups, config.users, model.edge_joint, graph_seed)
    victim = sample_victim(model.prior, victim_seed)
    inst = VictimInstance(pair, victim, model.gm, noise_seed)
    if config.strategy == "its":
        transcript = run_its(
            pair, inst, model.prior, model.measures,
            model.its_config(config.final_phase_order),
        )
    else:
        transcript = run_uid_scan(inst, order="random", seed=noise_seed)
    return transcript


def _trial_block(config: ExperimentConfig, start: int, count: int):
    """Run trials [start, start + count) and return compact per-trial arrays."""
    model = resolve_model(config)
    verify_slots = max(model.steps - 1, 0)
    qs = np.empty(count, dtype=np.int64)
    steps_used = np.empty(count, dtype=np.int32)
    successes = np.empty(count, dtype=bool)
    verify = np.full((count, verify_slots), -1, dtype=np.int8)
    for i in range(count):
        transcript = _run_one_trial(config, model, start + i)
        qs[i] = transcript.q_count
        steps_used[i] = transcript.steps_used
        successes[i] = transcript.success
        for s, response in enumerate(transcript.step_uid_responses()):
            verify[i, s] = response
    return qs, steps_used, successes, verify


@dataclass
class ExperimentSummary:
    """Aggregated campaign result plus the matching bound report."""

    config: ExperimentConfig
    epsilon: float
    steps: int
    trials: int
    mean_q: float
    std_q: float
    ci95_lo: float
    ci95_hi: float
    success_rate: float
    per_step_failure_rates: list
    q_histogram: list
    bound_report: bounds_mod.BoundReport

    def csv_row(self) -> list[str]:
        report = self.bound_report
        cond = report.conditions_met
        values = [
            self.config.users, self.config.groups, self.config.p0,
            self.config.edge_flip, self.config.gm_flip,
            self.config.prior_label(), self.epsilon, self.steps, self.trials,
            self.mean_q, self.std_q, self.ci95_lo, self.ci95_hi,
            report.lower_converse, report.upper_finite_stated,
            report.upper_finite, cond["finite_groups"], cond["asymptotic_groups"],
        ]
        return [_format_cell(v) for v in values]

    def to_json(self) -> dict:
        report = self.bound_report
        cond = report.conditions_met
        return {
            "m": self.config.users,
            "n": self.config.groups,
            "p0": self.config.p0,
            "edge_flip": self.config.edge_flip,
            "gm_flip": self.config.gm_flip,
            "prior": self.config.prior_label(),
            "epsilon": self.epsilon,
            "l": self.steps,
            "trials": self.trials,
            "mean_Q": self.mean_q,
            "std_Q": self.std_q,
            "ci95_lo": self.ci95_lo,
            "ci95_hi": self.ci95_hi,
            "lower_bound": report.lower_converse,
            "upper_bound_stated": report.upper_finite_stated,
            "upper_bound_certified": report.upper_finite,
            "cond_eq3": cond["finite_groups"],
            "cond_eq4": cond["asymptotic_groups"],
            "strategy": self.config.strategy,
            "master_seed": self.config.master_seed,
            "success_rate": self.success_rate,
            "per_step_failure_rates": list(self.per_step_failure_rates),
            "q_histogram": [list(pair) for pair in self.q_histogram],
            "bound_report": report.to_json(),
        }


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def run_experiment(config: ExperimentConfig) -> ExperimentSummary:
    """Run one campaign and aggregate it into a summary.

    Trial k is fully determined by (master_seed, k); the worker count only
    changes scheduling, never the numbers.
    """
    config.validate()
    model = resolve_model(config)
    trials = config.trials
    if config.workers == 1 or trials == 1:
        blocks = [_trial_block(config, 0, trials)]
    else:
        chunk = max(1, math.ceil(trials / (config.workers * 4)))
        starts = list(range(0, trials, chunk))
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            blocks = list(
                pool.map(
                    _trial_block,
                    [config] * len(starts),
                    starts,
                    [min(chunk, trials - s) for s in starts],
                )
            )
    qs = np.concatenate([b[0] for b in blocks])
    successes = np.concatenate([b[2] for b in blocks])
    verify = np.vstack([b[3] for b in blocks])

    mean_q = float(qs.mean())
    std_q = float(qs.std(ddof=1)) if trials > 1 else 0.0
    half = 1.959963984540054 * std_q / math.sqrt(trials)
    rates = []
    for s in range(verify.shape[1]):
        attempts = int((verify[:, s] >= 0).sum())
        failures = int((verify[:, s] == 0).sum())
        rates.append(failures / attempts if attempts else None)
    values, counts = np.unique(qs, return_counts=True)
    histogram = [[int(v), int(c)] for v, c in zip(values, counts)]
    prior = model.prior
    report = bounds_mod.build_report(
        n=config.groups,
        m=config.users,
        entropy_bits=entropy(prior),
        mutual_info_bits=model.measures.mutual_info,
        i_max_bits=model.measures.i_max,
        epsilon=model.epsilon,
        steps=model.steps,
    )
    return ExperimentSummary(
        config=config,
        epsilon=model.epsilon,
        steps=model.steps,
        trials=trials,
        mean_q=mean_q,
        std_q=std_q,
        ci95_lo=mean_q - half,
        ci95_hi=mean_q + half,
        success_rate=float(successes.mean()),
        per_step_failure_rates=rates,
        q_histogram=histogram,
        bound_report=report,
    )


SWEEP_AXES = ("m", "noise", "zipf")


def run_sweep(
    base: ExperimentConfig,
    axis: str,
    points,
    common_random_numbers: bool = False,
) -> list[ExperimentSummary]:
    """One experiment per axis point.

    Axis "m" varies the user count, "noise" the response flip probability,
    "zipf" the prior exponent. Each point gets its own master seed offset
    unless common random numbers are requested, in which case all points
    share the base seed (and thereby graphs, victims and noise draws, up to
    the model differences themselves).
    """
    if axis not in SWEEP_AXES:
        raise ConfigError("axis", f"must be one of {SWEEP_AXES}")
    if not points:
        raise ConfigError("points", "need at least one sweep point")
    summaries = []
    for index, point in enumerate(points):
        if axis == "m":
            override = {"users": int(point)}
        elif axis == "noise":
            override = {"gm_flip": float(point)}
        else:
            override = {"prior": f"zipf:{float(point)}"}
        seed = base.master_seed if common_random_numbers else base.master_seed + index
        config = dataclasses.replace(base, master_seed=seed, **override)
        summaries.append(run_experiment(config))
    return summaries


def emit_results(summaries, format: str, path: str):
    """Write summaries as a CSV table or a JSON list with the same fields."""
    if not summaries:
        raise ValueError("no summaries to emit")
    if format not in OUTPUT_FORMATS:
        raise ValueError(f"format must be one of {OUTPUT_FORMATS}")
    if format == "csv":
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(CSV_COLUMNS)
            for summary in summaries:
                writer.writerow(summary.csv_row())
    else:
        with open(path, "w") as handle:
            json.dump([s.to_json() for s in summaries], handle, indent=2)
            handle.write("\n")
