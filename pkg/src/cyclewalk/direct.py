"""
Direct (brute-force) evolution engine.

Shift and walk operators are assembled explicitly and states are evolved one
step at a time. This engine is the reference the spectral and limiting
computations are checked against, so it stays deliberately plain.

A walk operator is stored as a basis permutation (the shift) plus the 2x2
coin acting on the leading register. For ``d <= DENSE_MAX_D`` the dense
matrix is materialized and used for stepping; above that the permutation and
coin are applied directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from .errors import DimensionMismatch, ModeMismatch
from .state import Distribution, StateVector, WalkConfig

__all__ = [
    "DENSE_MAX_D",
    "WalkUnitary",
    "shift_memoryless_permutation",
    "shift_memory_permutation",
    "shift_memory_four_terms",
    "build_shift_memoryless",
    "build_shift_memory",
    "build_walk_operator",
    "step",
    "evolve",
    "position_distribution",
    "running_time_average",
    "probability_history",
]

DENSE_MAX_D = 64


@dataclass(frozen=True, eq=False)
class WalkUnitary:
    """U = P (C x 1), with P the basis permutation ``target[i]`` <- ``i``.

    ``coin`` is None for a bare shift.
    """

    config: WalkConfig = field(repr=False)
    target: NDArray[np.intp]
    coin: NDArray[np.complex128] | None = None

    def __post_init__(self):
        tgt = np.array(self.target, dtype=np.intp)
        tgt.setflags(write=False)
        object.__setattr__(self, "target", tgt)
        if self.coin is not None:
            c = np.array(self.coin, dtype=np.complex128)
            c.setflags(write=False)
            object.__setattr__(self, "coin", c)

    @property
    def dim(self) -> int:
        return self.target.shape[0]

    @property
    def use_dense(self) -> bool:
        return self.config.d <= DENSE_MAX_D

    @cached_property
    def matrix(self) -> NDArray[np.complex128]:
        """Dense matrix of the operator (built on first access)."""
        n = self.dim
        perm = np.zeros((n, n), dtype=np.complex128)
        perm[self.target, np.arange(n)] = 1.0
        if self.coin is None:
            perm.setflags(write=False)
            return perm
        mat = perm @ np.kron(self.coin, np.eye(n // 2))
        mat.setflags(write=False)
        return mat

    def apply_fast(self, vec: NDArray[np.complex128]) -> NDArray[np.complex128]:
        """Apply via permutation and coin, without a dense matrix."""
        v = np.asarray(vec, dtype=np.complex128)
        if self.coin is not None:
            v = (self.coin @ v.reshape(2, -1)).ravel()
        out = np.empty_like(v)
        out[self.target] = v
        return out

    def apply(self, vec: NDArray[np.complex128]) -> NDArray[np.complex128]:
        if self.use_dense:
            return self.matrix @ vec
        return self.apply_fast(vec)

    def unitarity_defect(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(self.dim))))


def shift_memoryless_permutation(d: int) -> NDArray[np.intp]:
    """|c, v> -> |c, v + 2c - 1 mod d>."""
    c, v = np.divmod(np.arange(2 * d), d)
    return c * d + (v + 2 * c - 1) % d


def shift_memory_permutation(d: int) -> NDArray[np.intp]:
    """|c, m, n> -> |c, h, n + 2h - 1 mod d> with h = m + c mod 2."""
    cm, n = np.divmod(np.arange(4 * d), d)
    c, m = np.divmod(cm, 2)
    h = (m + c) % 2
    return (2 * c + h) * d + (n + 2 * h - 1) % d


def shift_memory_four_terms(d: int) -> NDArray[np.complex128]:
    """Dense memory shift assembled term by term from the four transitions.

    Kept independent of :func:`shift_memory_permutation` so the two
    constructions can be checked against each other.
    """
    s = np.zeros((4 * d, 4 * d), dtype=np.complex128)

    def idx(c, m, n):
        return (2 * c + m) * d + n % d

    for n in range(d):
        s[idx(0, 0, n - 1), idx(0, 0, n)] += 1  # transmission, came from n+1
        s[idx(0, 1, n + 1), idx(0, 1, n)] += 1  # transmission, came from n-1
        s[idx(1, 1, n + 1), idx(1, 0, n)] += 1  # reflection
        s[idx(1, 0, n - 1), idx(1, 1, n)] += 1  # reflection
    return s


def build_shift_memoryless(config: WalkConfig) -> WalkUnitary:
    if config.memory:
        raise ModeMismatch("memoryless shift requested for a memory walk")
    return WalkUnitary(config, shift_memoryless_permutation(config.d))


def build_shift_memory(config: WalkConfig) -> WalkUnitary:
    if not config.memory:
        raise ModeMismatch("memory shift requested for a memoryless walk")
    return WalkUnitary(config, shift_memory_permutation(config.d))


def build_walk_operator(config: WalkConfig) -> WalkUnitary:
    """Coin toss on the first register followed by the conditional shift."""
    shift = build_shift_memory(config) if config.memory else build_shift_memoryless(config)
    return WalkUnitary(config, shift.target, config.coin.entries)


def _check_dims(state: StateVector, w: WalkUnitary):
    if state.amplitudes.shape[0] != w.dim or state.config.memory != w.config.memory:
        raise DimensionMismatch(
            f"state of length {state.amplitudes.shape[0]} does not match operator of size {w.dim}"
        )


def step(state: StateVector, w: WalkUnitary) -> StateVector:
    _check_dims(state, w)
    return StateVector(w.apply(state.amplitudes), state.config)


def evolve(state: StateVector, w: WalkUnitary, t: int) -> StateVector:
    if t < 0:
        raise ValueError(f"step count must be >= 0, got {t}")
    _check_dims(state, w)
    if t == 0:
        return state
    v = state.amplitudes
    for _ in range(t):
        v = w.apply(v)
    return StateVector(v, state.config)


def _node_probs(amps: NDArray[np.complex128], registers: int, d: int) -> NDArray[np.float64]:
    return (amps.real**2 + amps.imag**2).reshape(registers, d).sum(axis=0)


def position_distribution(state: StateVector) -> Distribution:
    """Born-rule probability of each node, summed over coin (and memory)."""
    cfg = state.config
    return Distribution(_node_probs(state.amplitudes, cfg.registers, cfg.d))


def running_time_average(
    state0: StateVector, w: WalkUnitary, t: int, include_step_zero: bool = False
) -> Distribution:
    """Mean of the position distribution over steps 1..t (0..t-1 with
    ``include_step_zero``)."""
    if t < 1:
        raise ValueError(f"averaging horizon must be >= 1, got {t}")
    _check_dims(state0, w)
    cfg = state0.config
    v = state0.amplitudes
    acc = np.zeros(cfg.d)
    if include_step_zero:
        acc += _node_probs(v, cfg.registers, cfg.d)
        steps = t - 1
    else:
        steps = t
    for _ in range(steps):
        v = w.apply(v)
        acc += _node_probs(v, cfg.registers, cfg.d)
    return Distribution(acc / t)


def probability_history(state0: StateVector, w: WalkUnitary, t: int) -> NDArray[np.float64]:
    """Array of shape (t + 1, d): position distributions for steps 0..t."""
    if t < 0:
        raise ValueError(f"step count must be >= 0, got {t}")
    _check_dims(state0, w)
    cfg = state0.config
    out = np.empty((t + 1, cfg.d))
    v = state0.amplitudes
    out[0] = _node_probs(v, cfg.registers, cfg.d)
    for s in range(1, t + 1):
        v = w.apply(v)
        out[s] = _node_probs(v, cfg.registers, cfg.d)
    return out
