"""
Walk configuration, state vectors and basis-index conventions.

Basis layout
------------
Memory walk: the Hilbert space is coin (2) x memory (2) x position (d) and
the flat index of ``|c, m, n>`` is ``(2c + m) * d + n``. Reshaping an
amplitude vector to ``(4, d)`` therefore gives, in column ``n``, the four
amplitudes ordered (c=0,m=0), (c=0,m=1), (c=1,m=0), (c=1,m=1).

Memoryless walk: coin (2) x position (d), flat index ``c * d + n``.

All objects here are immutable; their numpy buffers are marked read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import (
    DimensionTooSmall,
    LengthMismatch,
    MemoryRequired,
    NodeOutOfRange,
    NonUnitaryCoin,
    ZeroVector,
)

__all__ = [
    "CoinMatrix",
    "WalkConfig",
    "StateVector",
    "Distribution",
    "HADAMARD",
    "hadamard_coin",
    "make_config",
    "flat_index",
    "paper_initial_state",
    "localized_state",
    "general_state",
]

NORM_TOL = 1e-12


def _frozen(a: ArrayLike, dtype=np.complex128) -> NDArray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CoinMatrix:
    """A 2x2 complex matrix acting on the coin register."""

    entries: NDArray[np.complex128]

    def __post_init__(self):
        arr = _frozen(self.entries)
        if arr.shape != (2, 2):
            raise NonUnitaryCoin(f"coin must be 2x2, got shape {arr.shape}")
        object.__setattr__(self, "entries", arr)

    def unitarity_defect(self) -> float:
        """Max entrywise deviation of C^dagger C from the identity."""
        c = self.entries
        return float(np.max(np.abs(c.conj().T @ c - np.eye(2))))

    def is_unitary(self, tol: float = 1e-10) -> bool:
        return self.unitarity_defect() <= tol

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, CoinMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self):
        return hash(self.entries.tobytes())


def hadamard_coin() -> CoinMatrix:
    return CoinMatrix(np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0))


HADAMARD = hadamard_coin()


@dataclass(frozen=True)
class WalkConfig:
    """One walk instance: cycle size, memory flag, coin and tolerances."""

    d: int
    memory: bool
    coin: CoinMatrix = HADAMARD
    unitarity_tol: float = 1e-10
    eig_group_tol: float = 1e-9

    def __post_init__(self):
        if not isinstance(self.coin, CoinMatrix):
            object.__setattr__(self, "coin", CoinMatrix(self.coin))
        if isinstance(self.d, bool) or int(self.d) != self.d:
            raise DimensionTooSmall(f"d must be an integer, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "memory", bool(self.memory))
        # d = 2 aliases n+1 and n-1, d = 1 is degenerate
        if self.d < 3:
            raise DimensionTooSmall(f"cycle size must be >= 3, got d={self.d}")
        defect = self.coin.unitarity_defect()
        if defect > self.unitarity_tol:
            raise NonUnitaryCoin(
                f"coin is not unitary: max|C^+C - 1| = {defect:.3e} > {self.unitarity_tol:g}"
            )

    @property
    def registers(self) -> int:
        """Number of internal (coin x memory) basis states per node."""
        return 4 if self.memory else 2

    @property
    def dim(self) -> int:
        return self.registers * self.d

    @property
    def is_hadamard(self) -> bool:
        return bool(np.allclose(self.coin.entries, HADAMARD.entries, atol=1e-14, rtol=0))


def make_config(d: int, memory: bool, coin: CoinMatrix | ArrayLike = HADAMARD, **tols) -> WalkConfig:
    """Build a validated :class:`WalkConfig`.

    Raises DimensionTooSmall for d < 3 and NonUnitaryCoin when the coin fails
    the unitarity check.
    """
    if not isinstance(coin, CoinMatrix):
        coin = CoinMatrix(coin)
    return WalkConfig(d=d, memory=memory, coin=coin, **tols)


def flat_index(config: WalkConfig, c: int, m: int | None, n: int) -> int:
    """Flat basis index of |c, m, n> (memory) or |c, n> (memoryless, m ignored)."""
    if not 0 <= n < config.d:
        raise NodeOutOfRange(f"node {n} outside 0..{config.d - 1}")
    if c not in (0, 1):
        raise NodeOutOfRange(f"coin bit must be 0 or 1, got {c}")
    if config.memory:
        if m not in (0, 1):
            raise NodeOutOfRange(f"memory bit must be 0 or 1, got {m}")
        return (2 * c + m) * config.d + n
    return c * config.d + n


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit-norm amplitude vector tied to a :class:`WalkConfig`."""

    amplitudes: NDArray[np.complex128]
    config: WalkConfig = field(repr=False)

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.shape != (self.config.dim,):
            raise LengthMismatch(
                f"expected {self.config.dim} amplitudes for d={self.config.d}, "
                f"memory={self.config.memory}; got shape {amps.shape}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def by_register(self) -> NDArray[np.complex128]:
        """Amplitudes reshaped to (registers, d); column n is the quad at node n."""
        return self.amplitudes.reshape(self.config.registers, self.config.d)

    def quad(self, n: int) -> NDArray[np.complex128]:
        """The four amplitudes at node ``n`` in (00, 01, 10, 11) order."""
        if not self.config.memory:
            raise MemoryRequired("amplitude quads exist only for the memory walk")
        if not 0 <= n < self.config.d:
            raise NodeOutOfRange(f"node {n} outside 0..{self.config.d - 1}")
        return self.by_register()[:, n].copy()

    def __len__(self):
        return self.amplitudes.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probabilities over the d cycle nodes.

    ``imag_residue`` records the largest imaginary part seen before the
    values were made real (zero for distributions built from moduli).
    """

    probs: NDArray[np.float64]
    imag_residue: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "probs", _frozen(self.probs, dtype=np.float64))

    @property
    def d(self) -> int:
        return self.probs.shape[0]

    def total(self) -> float:
        return float(self.probs.sum())

    def __len__(self):
        return self.d

    def __getitem__(self, n):
        return self.probs[n]

    def __iter__(self):
        return iter(self.probs)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)


def paper_initial_state(config: WalkConfig) -> StateVector:
    """Coin |0>, memory (|0> + |1>)/sqrt(2), walker at node 0."""
    if not config.memory:
        raise MemoryRequired("the superposed-memory initial state needs a memory walk")
    amps = np.zeros(config.dim, dtype=np.complex128)
    amps[flat_index(config, 0, 0, 0)] = 1 / np.sqrt(2)
    amps[flat_index(config, 0, 1, 0)] = 1 / np.sqrt(2)
    return StateVector(amps, config)


def localized_state(config: WalkConfig, c: int, m: int, n: int) -> StateVector:
    """A single basis state |c, m, n> (m is ignored for memoryless walks)."""
    amps = np.zeros(config.dim, dtype=np.complex128)
    amps[flat_index(config, c, m, n)] = 1.0
    return StateVector(amps, config)


def general_state(config: WalkConfig, amplitudes: Sequence[complex] | ArrayLike) -> StateVector:
    """Normalize arbitrary amplitudes (flat-index order) into a state."""
    amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
    if amps.shape[0] != config.dim:
        raise LengthMismatch(f"expected {config.dim} amplitudes, got {amps.shape[0]}")
    norm = np.linalg.norm(amps)
    if norm == 0.0 or not np.isfinite(norm):
        raise ZeroVector("cannot normalize a zero (or non-finite) amplitude vector")
    return StateVector(amps / norm, config)
