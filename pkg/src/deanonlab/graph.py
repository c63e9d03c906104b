"""Correlated pairs of random bipartite membership graphs.

A pair holds two m x n binary membership matrices: the true graph and the
scanned (attacker-side) copy. Row i is user i's group signature. Rows are
stored user-major as packed bit words (big-endian within a byte, so group 1
is the most significant bit of the first byte), because the attack's hot
loop reads one group column across all m candidates per query.

Generation draws the (true, scanned) bit pair of every position i.i.d. from
an ``EdgeJointDistribution``. Each user row has its own child random stream
derived from (seed, row), consumed in group order with two uniforms per
position: one against the true-edge marginal, one against the conditional of
the scanned bit given the realized true bit. Rows are therefore individually
re-derivable, and columns can be materialized left to right on demand; an
attack that touches only the first few hundred groups never pays for the
rest of a wide graph. Materialized bits are identical whichever access
pattern triggered them.
"""

from __future__ import annotations

import numpy as np

from .stochastics import EdgeJointDistribution

# Columns materialized per extension; a multiple of 8 keeps packing aligned.
_BLOCK = 64

_SELECTORS = {"true": 0, "scanned": 1}


def _row_rng(seed, row0: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(row0,)))


class BigraphPair:
    """True and scanned membership graphs over m users and n groups.

    Construct through :func:`generate_cprb` or :meth:`from_matrices`. The
    pair is logically immutable: every read of the same position yields the
    same bit. Lazy generation fills the internal cache left to right, which
    is safe for the intended one-trial-per-instance usage; share an instance
    across threads only after it is fully materialized.
    """

    __slots__ = ("n", "m", "_packed0", "_packed1", "_ready", "_seed", "_rowgens", "_t0", "_t10", "_t11")

    def __init__(self, n: int, m: int, packed0: np.ndarray, packed1: np.ndarray, ready: int, seed=None, thresholds=None):
        self.n = n
        self.m = m
        self._packed0 = packed0
        self._packed1 = packed1
        self._ready = ready
        self._seed = seed
        self._rowgens = None
        if thresholds is None:
            self._t0 = self._t10 = self._t11 = 0.0
        else:
            self._t0, self._t10, self._t11 = thresholds

    @classmethod
    def from_matrices(cls, sig0, sig1) -> "BigraphPair":
        """Wrap two explicit m x n 0/1 matrices (fully materialized)."""
        a0 = np.asarray(sig0)
        a1 = np.asarray(sig1)
        if a0.ndim != 2 or a0.shape != a1.shape:
            raise ValueError("sig0 and sig1 must be 2-D with identical shapes")
        m, n = a0.shape
        if m < 1 or n < 1:
            raise ValueError("user and group counts must be positive")
        for name, a in (("sig0", a0), ("sig1", a1)):
            if not np.isin(a, (0, 1)).all():
                raise ValueError(f"{name} entries must be 0 or 1")
        packed0 = np.packbits(a0.astype(np.uint8), axis=1)
        packed1 = np.packbits(a1.astype(np.uint8), axis=1)
        return cls(n, m, packed0, packed1, ready=n)

    # -- generation ------------------------------------------------------

    def _ensure_columns(self, upto: int):
        """Materialize group columns [1, upto]; no-op if already present."""
        upto = min(upto, self.n)
        if upto <= self._ready:
            return
        if self._rowgens is None:
            self._rowgens = [_row_rng(self._seed, i) for i in range(self.m)]
        while self._ready < upto:
            width = min(_BLOCK, self.n - self._ready)
            bits0 = np.empty((self.m, width), dtype=bool)
            bits1 = np.empty((self.m, width), dtype=bool)
            for i, gen in enumerate(self._rowgens):
                u = gen.random(2 * width)
                e0 = u[0::2] < self._t0
                e1 = u[1::2] < np.where(e0, self._t11, self._t10)
                bits0[i] = e0
                bits1[i] = e1
            byte0 = self._ready // 8
            chunk0 = np.packbits(bits0, axis=1)
            chunk1 = np.packbits(bits1, axis=1)
            self._packed0[:, byte0 : byte0 + chunk0.shape[1]] = chunk0
            self._packed1[:, byte0 : byte0 + chunk1.shape[1]] = chunk1
            self._ready += width

    # -- raw access ------------------------------------------------------

    def _packed(self, which: str) -> np.ndarray:
        if which not in _SELECTORS:
            raise ValueError(f"graph selector must be 'true' or 'scanned', got {which!r}")
        return self._packed0 if which == "true" else self._packed1

    def column_bits(self, which: str, group: int) -> np.ndarray:
        """The length-m 0/1 column of one group (1-based group index)."""
        if not 1 <= group <= self.n:
            raise IndexError(f"group index {group} outside [1, {self.n}]")
        packed = self._packed(which)
        self._ensure_columns(group)
        g0 = group - 1
        return (packed[:, g0 >> 3] >> (7 - (g0 & 7))) & 1

    def row_bits(self, which: str, user: int, upto: int | None = None) -> np.ndarray:
        """The first ``upto`` signature bits of one user (defaults to all n)."""
        if not 1 <= user <= self.m:
            raise IndexError(f"user index {user} outside [1, {self.m}]")
        count = self.n if upto is None else upto
        packed = self._packed(which)
        self._ensure_columns(count)
        return np.unpackbits(packed[user - 1], count=count)

    def bit(self, which: str, user: int, group: int) -> int:
        """Single membership bit at (user, group), both 1-based."""
        if not 1 <= user <= self.m:
            raise IndexError(f"user index {user} outside [1, {self.m}]")
        if not 1 <= group <= self.n:
            raise IndexError(f"group index {group} outside [1, {self.n}]")
        packed = self._packed(which)
        self._ensure_columns(group)
        g0 = group - 1
        return int((packed[user - 1, g0 >> 3] >> (7 - (g0 & 7))) & 1)

    @property
    def sig0(self) -> np.ndarray:
        """True-graph signatures as an unpacked m x n 0/1 matrix (copy)."""
        self._ensure_columns(self.n)
        return np.unpackbits(self._packed0, axis=1, count=self.n)

    @property
    def sig1(self) -> np.ndarray:
        """Scanned-graph signatures as an unpacked m x n 0/1 matrix (copy)."""
        self._ensure_columns(self.n)
        return np.unpackbits(self._packed1, axis=1, count=self.n)

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        """Plain dict {n, m, sig0, sig1} with hex-encoded packed rows.

        The most significant bit of the first hex byte is group 1; unused
        low bits of the final byte are zero.
        """
        self._ensure_columns(self.n)
        return {
            "n": self.n,
            "m": self.m,
            "sig0": [bytes(row).hex() for row in self._packed0],
            "sig1": [bytes(row).hex() for row in self._packed1],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BigraphPair":
        n = int(obj["n"])
        m = int(obj["m"])
        if n < 1 or m < 1:
            raise ValueError("user and group counts must be positive")
        nbytes = (n + 7) // 8
        tail_mask = 0xFF if n % 8 == 0 else (0xFF << (8 - n % 8)) & 0xFF
        packed = []
        for key in ("sig0", "sig1"):
            rows = obj[key]
            if len(rows) != m:
                raise ValueError(f"{key} must have m={m} rows")
            arr = np.empty((m, nbytes), dtype=np.uint8)
            for i, hexrow in enumerate(rows):
                raw = bytes.fromhex(hexrow)
                if len(raw) != nbytes:
                    raise ValueError(f"{key} row {i + 1} must encode {nbytes} bytes")
                arr[i] = np.frombuffer(raw, dtype=np.uint8)
            arr[:, -1] &= tail_mask
            packed.append(arr)
        return cls(n, m, packed[0], packed[1], ready=n)


def generate_cprb(n: int, m: int, edge_joint: EdgeJointDistribution, seed) -> BigraphPair:
    """Draw a correlated pair of random bigraphs, deterministic given ``seed``.

    Parameters
    ----------
    n, m : int
        Group and user counts, both at least 1.
    edge_joint : EdgeJointDistribution
        Joint law of the (true, scanned) bit at every position.
    seed : int
        64-bit seed for the generation stream.
    """
    if n < 1:
        raise ValueError("group count n must be at least 1")
    if m < 1:
        raise ValueError("user count m must be at least 1")
    if not isinstance(edge_joint, EdgeJointDistribution):
        raise TypeError("edge_joint must be an EdgeJointDistribution")
    t = edge_joint.table
    p0 = edge_joint.p0
    # Conditional P(scanned=1 | true bit); a zero-mass true value never
    # realizes, so its branch threshold is arbitrary.
    marg = t.sum(axis=1)
    t10 = t[0, 1] / marg[0] if marg[0] > 0.0 else 0.0
    t11 = t[1, 1] / marg[1] if marg[1] > 0.0 else 0.0
    nbytes = (n + 7) // 8
    packed0 = np.zeros((m, nbytes), dtype=np.uint8)
    packed1 = np.zeros((m, nbytes), dtype=np.uint8)
    return BigraphPair(n, m, packed0, packed1, ready=0, seed=seed, thresholds=(p0, t10, t11))


def group_signature(pair: BigraphPair, which: str, user: int) -> np.ndarray:
    """Full length-n signature row of one user in the selected graph."""
    return pair.row_bits(which, user)


def partial_signature(pair: BigraphPair, which: str, user: int, n1: int, n2: int) -> np.ndarray:
    """Contiguous signature slice for groups n1..n2 inclusive (1-based)."""
    if not 1 <= n1 <= n2 <= pair.n:
        raise IndexError(f"need 1 <= n1 <= n2 <= {pair.n}, got ({n1}, {n2})")
    return pair.row_bits(which, user, upto=n2)[n1 - 1 :]


def members(pair: BigraphPair, which: str, group: int) -> set[int]:
    """Set of 1-based user indices belonging to the group."""
    col = pair.column_bits(which, group)
    return set((np.flatnonzero(col) + 1).tolist())
