"""Victim-side query answering.

A ``VictimInstance`` binds one trial together: the graph pair, the victim's
index, the group-membership noise channel, and a private noise stream. It
answers the two query kinds the attacker may issue:

* group membership, noisy: the correct answer is the victim's true-graph bit
  for the group, passed through the channel;
* user identity, noiseless: exact equality with the victim index.

Channel noise is indexed by query ordinal, not by group, so re-asking the
same group later draws fresh noise (the channel is memoryless). Replaying an
ordinal reproduces the identical response bit.
"""

from __future__ import annotations

import numpy as np

from .graph import BigraphPair
from .stochastics import QueryChannel


class VictimInstance:
    """One victim realization plus its response noise stream."""

    def __init__(self, pair: BigraphPair, victim: int, gm_channel: QueryChannel, noise_seed):
        if not 1 <= victim <= pair.m:
            raise ValueError(f"victim index {victim} outside [1, {pair.m}]")
        self.pair = pair
        self.victim = victim
        self.gm_channel = gm_channel
        self.noise_seed = noise_seed
        self._gen = np.random.default_rng(noise_seed)
        self._uniforms = np.empty(0, dtype=np.float64)

    def _uniform(self, ordinal: int) -> float:
        """The ordinal-th uniform of the noise stream (1-based), cached."""
        if ordinal < 1:
            raise ValueError("query ordinal must be at least 1")
        if ordinal > self._uniforms.size:
            # Grow geometrically so long transcripts stay linear overall.
            count = max(256, self._uniforms.size, ordinal - self._uniforms.size)
            self._uniforms = np.concatenate([self._uniforms, self._gen.random(count)])
        return float(self._uniforms[ordinal - 1])

    def true_gm_response(self, group: int) -> int:
        """Correct (pre-noise) answer: the victim's true-graph bit for the group."""
        return self.pair.bit("true", self.victim, group)

    def noisy_gm_response(self, group: int, query_ordinal: int) -> int:
        """Received answer for the group-membership query with this ordinal."""
        z = self.true_gm_response(group)
        return int(self._uniform(query_ordinal) < self.gm_channel.table[z, 1])

    def uid_response(self, candidate: int) -> int:
        """Noiseless identity check; never touches the noise stream."""
        if not 1 <= candidate <= self.pair.m:
            raise ValueError(f"candidate index {candidate} outside [1, {self.pair.m}]")
        return int(candidate == self.victim)


def expected_response_column(pair: BigraphPair, group: int) -> np.ndarray:
    """Scanned-graph bits of one group for every candidate (length m).

    Entry j-1 is the response the attacker would expect if candidate j were
    the victim, i.e. candidate j's scanned-graph membership bit.
    """
    return pair.column_bits("scanned", group)
