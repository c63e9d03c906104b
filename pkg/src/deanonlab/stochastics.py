"""Probability laws of the de-anonymization model and derived information measures.

Three elementary laws parameterize a model instance:

* ``EdgeJointDistribution`` couples the true and scanned edge indicator at a
  single (user, group) position.
* ``QueryChannel`` is the row-stochastic noise on group-membership responses.
* ``VictimPrior`` weights which user index shows up as the victim.

From the first two, ``build_joint_uyz`` assembles the joint law of
(expected response U, received response Y, correct response Z) for a single
group-membership query, and ``InfoMeasures`` derives the per-query evidence
table: the information density i(u; y) = log2 P(y|u) / P(y), its expectation
I(U; Y), and its maximum entry.

Every logarithm in this package is base 2, so entropies, densities, mutual
information and decision thresholds all share the same unit (bits).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Tolerance for "sums to one" checks on distribution tables.
SUM_TOL = 1e-12

#: Sentinel for an observation that is impossible under the candidate's
#: hypothesis. Consumers treat a candidate carrying this value as eliminated
#: for the current attack step rather than raising.
NEG_INF = float("-inf")


def _as_table(values, shape, name: str) -> np.ndarray:
    table = np.array(values, dtype=np.float64)
    if table.shape != shape:
        raise ValueError(f"{name} must have shape {shape}, got {table.shape}")
    if np.any(table < 0.0) or np.any(table > 1.0):
        raise ValueError(f"{name} entries must lie in [0, 1]")
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class EdgeJointDistribution:
    """Joint law of the (true, scanned) edge bits at one graph position.

    ``table[a, b]`` is the probability that the true graph has edge bit ``a``
    and the scanned graph has edge bit ``b`` at the same position. Distinct
    positions are drawn independently.
    """

    table: np.ndarray

    def __post_init__(self):
        table = _as_table(self.table, (2, 2), "edge joint table")
        if abs(float(table.sum()) - 1.0) > SUM_TOL:
            raise ValueError("edge joint table must sum to 1")
        object.__setattr__(self, "table", table)

    @property
    def p0(self) -> float:
        """Marginal edge probability of the true graph."""
        return float(self.table[1, 0] + self.table[1, 1])

    @property
    def p1(self) -> float:
        """Marginal edge probability of the scanned graph."""
        return float(self.table[0, 1] + self.table[1, 1])

    def scanned_given_true(self) -> np.ndarray:
        """Conditional P(scanned bit = u | true bit = z) as a (z, u) table."""
        marg = self.table.sum(axis=1)
        if np.any(marg <= 0.0):
            raise ValueError(
                "conditional undefined: true-edge marginal has a zero-mass value"
            )
        return self.table / marg[:, None]

    @classmethod
    def from_marginal_flip(cls, p0: float, flip: float) -> "EdgeJointDistribution":
        """True bit ~ Bernoulli(p0); scanned bit flips it with probability ``flip``."""
        if not 0.0 <= p0 <= 1.0:
            raise ValueError("p0 must lie in [0, 1]")
        if not 0.0 <= flip <= 1.0:
            raise ValueError("flip must lie in [0, 1]")
        table = np.array(
            [
                [(1.0 - p0) * (1.0 - flip), (1.0 - p0) * flip],
                [p0 * flip, p0 * (1.0 - flip)],
            ]
        )
        return cls(table)

    @classmethod
    def product(cls, p0: float, p1: float) -> "EdgeJointDistribution":
        """Independent true and scanned bits (zero coupling)."""
        e0 = np.array([1.0 - p0, p0])
        e1 = np.array([1.0 - p1, p1])
        return cls(np.outer(e0, e1))


@dataclass(frozen=True)
class QueryChannel:
    """Row-stochastic response noise: ``table[z, y]`` = P(received y | correct z)."""

    table: np.ndarray

    def __post_init__(self):
        table = _as_table(self.table, (2, 2), "query channel table")
        if np.any(np.abs(table.sum(axis=1) - 1.0) > SUM_TOL):
            raise ValueError("query channel rows must each sum to 1")
        object.__setattr__(self, "table", table)

    @classmethod
    def bsc(cls, flip: float) -> "QueryChannel":
        """Binary symmetric noise with the given flip probability."""
        if not 0.0 <= flip <= 1.0:
            raise ValueError("flip must lie in [0, 1]")
        return cls(np.array([[1.0 - flip, flip], [flip, 1.0 - flip]]))

    @classmethod
    def identity(cls) -> "QueryChannel":
        return cls(np.eye(2))

    def compose(self, other: "QueryChannel") -> "QueryChannel":
        """Channel obtained by feeding this channel's output through ``other``."""
        return QueryChannel(self.table @ other.table)


# User-identity queries are answered noiselessly. This is a fixed property of
# the model, not a configuration knob, so it lives here as a constant.
UID_CHANNEL = QueryChannel.identity()


@dataclass(frozen=True)
class VictimPrior:
    """Distribution of the victim's user index over [1, m].

    Entries must be strictly positive: a zero-probability user would carry an
    infinite prior surprisal and can simply be dropped from the index set.
    """

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size < 1:
            raise ValueError("prior must be a nonempty 1-D vector")
        if np.any(probs <= 0.0):
            raise ValueError("prior entries must be strictly positive")
        if abs(float(probs.sum()) - 1.0) > SUM_TOL:
            raise ValueError("prior must sum to 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def m(self) -> int:
        return int(self.probs.size)


def make_prior(kind, m: int | None = None) -> VictimPrior:
    """Build a victim prior.

    ``kind`` is either an explicit probability vector (normalized here), the
    string ``"uniform"``, or ``"zipf:S"`` for weights proportional to
    rank**(-S). String forms require ``m``.
    """
    if isinstance(kind, str):
        if m is None or m < 1:
            raise ValueError("string prior kinds require a positive user count m")
        if kind == "uniform":
            return VictimPrior(np.full(m, 1.0 / m))
        if kind.startswith("zipf:"):
            s = float(kind.split(":", 1)[1])
            if s < 0.0:
                raise ValueError("zipf exponent must be nonnegative")
            weights = np.arange(1, m + 1, dtype=np.float64) ** (-s)
            return VictimPrior(weights / weights.sum())
        raise ValueError(f"unknown prior kind {kind!r}")
    probs = np.asarray(kind, dtype=np.float64)
    if m is not None and probs.size != m:
        raise ValueError("explicit prior length disagrees with m")
    if np.any(probs <= 0.0):
        raise ValueError("prior entries must be strictly positive")
    return VictimPrior(probs / probs.sum())


def entropy(prior: VictimPrior) -> float:
    """Shannon entropy of the victim index, in bits."""
    p = prior.probs
    return float(-(p * np.log2(p)).sum())


def sample_victim(prior: VictimPrior, seed) -> int:
    """Draw a 1-based victim index, deterministic given ``seed``.

    Inverse-CDF sampling on a single uniform, so runs that share a seed but
    vary the prior produce positively coupled draws (useful for
    common-random-number sweeps).
    """
    u = np.random.default_rng(seed).random()
    cdf = np.cumsum(prior.probs)
    idx = int(np.searchsorted(cdf, u, side="right"))
    return min(idx, prior.m - 1) + 1


@dataclass(frozen=True)
class JointUYZ:
    """Joint law P(u, y, z) of one group-membership query.

    z is the correct response (the true-graph edge bit), u the response the
    attacker's scanned graph predicts, y the noisy response actually received.
    u and y are conditionally independent given z.
    """

    table: np.ndarray

    def __post_init__(self):
        table = _as_table(self.table, (2, 2, 2), "joint u,y,z table")
        if abs(float(table.sum()) - 1.0) > SUM_TOL:
            raise ValueError("joint u,y,z table must sum to 1")
        object.__setattr__(self, "table", table)

    def p_uy(self) -> np.ndarray:
        return self.table.sum(axis=2)

    def p_u(self) -> np.ndarray:
        return self.table.sum(axis=(1, 2))

    def p_y(self) -> np.ndarray:
        return self.table.sum(axis=(0, 2))

    def p_z(self) -> np.ndarray:
        return self.table.sum(axis=(0, 1))


def build_joint_uyz(edge_joint: EdgeJointDistribution, gm: QueryChannel) -> JointUYZ:
    """Assemble P(u, y, z) = P(z) P(u|z) P(y|z) for one group query.

    P(z) is the true-graph edge marginal Bernoulli(p0): the correct answer to
    "is the victim in this group" is exactly the victim's true-graph edge bit.
    Degenerate p0 in {0, 1} is rejected; such a model yields uninformative
    queries and leaves the scanned-bit conditional undefined on one branch.
    """
    p0 = edge_joint.p0
    if not 0.0 < p0 < 1.0:
        raise ValueError("degenerate model: true-edge marginal p0 must lie in (0, 1)")
    p_z = np.array([1.0 - p0, p0])
    u_given_z = edge_joint.scanned_given_true()
    table = np.einsum("z,zu,zy->uyz", p_z, u_given_z, gm.table)
    return JointUYZ(table)


@dataclass(frozen=True)
class InfoMeasures:
    """Per-query evidence table derived from a JointUYZ.

    ``density[u, y]`` is the information density i(u; y) in bits, with
    impossible (u, y) pairs carried as the -inf sentinel. ``mutual_info`` is
    its expectation under P(u, y); ``i_max`` the largest finite entry.
    """

    density: np.ndarray
    mutual_info: float
    i_max: float

    @classmethod
    def from_joint(cls, joint: JointUYZ) -> "InfoMeasures":
        p_uy = joint.p_uy()
        p_u = p_uy.sum(axis=1)
        p_y = p_uy.sum(axis=0)
        density = np.full((2, 2), NEG_INF)
        mask = p_uy > 0.0
        density[mask] = np.log2(p_uy[mask]) - np.log2(
            (p_u[:, None] * p_y[None, :])[mask]
        )
        mutual = float((p_uy[mask] * density[mask]).sum())
        # Exact arithmetic gives a nonnegative value; guard rounding residue.
        mutual = max(mutual, 0.0)
        density.setflags(write=False)
        return cls(density=density, mutual_info=mutual, i_max=float(density[mask].max()))


def info_density(joint: JointUYZ, u: int, y: int) -> float:
    """Information density i(u; y) = log2 P(y|u) / P(y), in bits.

    Returns the -inf sentinel when the received value y is impossible given
    the expected value u. Requires P(y) > 0 and P(u) > 0; conditioning on a
    zero-mass symbol has no meaning in this model.
    """
    p_uy = joint.p_uy()
    p_u = p_uy.sum(axis=1)
    p_y = p_uy.sum(axis=0)
    if p_y[y] <= 0.0:
        raise ValueError("received symbol has zero probability")
    if p_u[u] <= 0.0:
        raise ValueError("expected symbol has zero probability")
    cond = p_uy[u, y] / p_u[u]
    if cond == 0.0:
        return NEG_INF
    return float(np.log2(cond) - np.log2(p_y[y]))


def mutual_information(joint: JointUYZ) -> float:
    """I(U; Y) in bits, the average per-query evidence for the true candidate."""
    return InfoMeasures.from_joint(joint).mutual_info
