"""
Fourier-spectral engine for the memory walk.

Translation invariance of the walk decouples the spatial Fourier modes: with
``F(k) = sum_n exp(+2 pi i k n / d) Phi(n)`` one step acts on each mode by a
4x4 unitary ``M_k = A M_ret + conj(A) M_adv`` where ``A = exp(-2 pi i k / d)``.
Eigendecomposing every ``M_k`` gives amplitudes at any time t without stepping.

Eigenvectors come from a complex Schur factorization, which for a normal
matrix is a unitary diagonalization. Eigenvalues closer than
``config.eig_group_tol`` are merged into one spectral projector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
import scipy.optimize
from numpy.typing import NDArray

from ._parallel import ordered_map
from .errors import EigensolverFailure, MemoryRequired, ModeOutOfRange
from .state import StateVector, WalkConfig

__all__ = [
    "ModeMatrix",
    "ModeSpectrum",
    "FourierState",
    "SpectralWalk",
    "retarding_matrix",
    "advancing_matrix",
    "build_mode_matrix",
    "paper_mode_matrix",
    "paper_eigenvalues",
    "mode_spectrum",
    "all_spectra",
    "forward_fourier",
    "inverse_fourier",
    "alpha_coefficients",
    "amplitudes_at",
    "probability_at",
]

# Quad slot of (c, m) is 2c + m.


def retarding_matrix(coin: NDArray) -> NDArray[np.complex128]:
    """Couples Phi(n + 1, t) into Phi(n, t + 1): rows with memory bit 0."""
    c = np.asarray(coin, dtype=np.complex128)
    m = np.zeros((4, 4), dtype=np.complex128)
    for out_c in (0, 1):
        for in_c in (0, 1):
            # new memory 0 requires old memory = out_c
            m[2 * out_c, 2 * in_c + out_c] = c[out_c, in_c]
    return m


def advancing_matrix(coin: NDArray) -> NDArray[np.complex128]:
    """Couples Phi(n - 1, t) into Phi(n, t + 1): rows with memory bit 1."""
    c = np.asarray(coin, dtype=np.complex128)
    m = np.zeros((4, 4), dtype=np.complex128)
    for out_c in (0, 1):
        for in_c in (0, 1):
            m[2 * out_c + 1, 2 * in_c + (1 - out_c)] = c[out_c, in_c]
    return m


@dataclass(frozen=True, eq=False)
class ModeMatrix:
    k: int
    matrix: NDArray[np.complex128]

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


def _phase(k: int, d: int) -> complex:
    """A = exp(-2 pi i k / d)."""
    return np.exp(-2j * np.pi * k / d)


def build_mode_matrix(config: WalkConfig, k: int) -> ModeMatrix:
    if not config.memory:
        raise MemoryRequired("mode matrices are defined for the memory walk only")
    if not 0 <= k < config.d:
        raise ModeOutOfRange(f"mode {k} outside 0..{config.d - 1}")
    a = _phase(k, config.d)
    coin = config.coin.entries
    return ModeMatrix(k, a * retarding_matrix(coin) + np.conj(a) * advancing_matrix(coin))


def paper_mode_matrix(k: int, d: int) -> NDArray[np.complex128]:
    """Closed-form Hadamard mode matrix, written out entry by entry."""
    em = np.exp(-2j * k * np.pi / d)
    ep = np.exp(2j * k * np.pi / d)
    return np.array(
        [
            [em, 0, em, 0],
            [0, ep, 0, ep],
            [0, em, 0, -em],
            [ep, 0, -ep, 0],
        ],
        dtype=np.complex128,
    ) / np.sqrt(2)


def paper_eigenvalues(k: int, d: int) -> NDArray[np.complex128]:
    """Hadamard mode eigenvalues (-1, 1, lam3, lam4) from their closed forms."""
    a = _phase(k, d)
    root = np.sqrt(a**4 - 6 * a**2 + 1)
    lam3 = (1 + a**2 + root) / (2 * np.sqrt(2) * a)
    lam4 = (1 + a**2 - root) / (2 * np.sqrt(2) * a)
    return np.array([-1.0, 1.0, lam3, lam4], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class ModeSpectrum:
    """Eigen-data of one mode matrix.

    ``eigenvectors`` is unitary with unit eigenvectors as columns.
    ``groups`` partitions the column indices into merged eigenspaces and
    ``projectors[j]`` is the projector onto the eigenspace containing
    eigenvalue j (indices in one group share the same projector).
    """

    k: int
    eigenvalues: NDArray[np.complex128]
    eigenvectors: NDArray[np.complex128]
    groups: tuple[tuple[int, ...], ...]
    projectors: tuple[NDArray[np.complex128], ...] = field(repr=False)

    def distinct_projectors(self) -> list[NDArray[np.complex128]]:
        return [self.projectors[g[0]] for g in self.groups]


def _group(values: NDArray, tol: float) -> tuple[tuple[int, ...], ...]:
    # single-linkage clustering; n = 4 so quadratic is fine
    n = len(values)
    label = list(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if abs(values[i] - values[j]) <= tol:
                old, new = label[j], label[i]
                label = [new if x == old else x for x in label]
    groups: dict[int, list[int]] = {}
    for i, lab in enumerate(label):
        groups.setdefault(lab, []).append(i)
    return tuple(tuple(g) for g in groups.values())


def _paper_order(eigs: NDArray, k: int, d: int) -> NDArray[np.intp]:
    """Permutation putting numerical eigenvalues in closed-form order."""
    target = paper_eigenvalues(k, d)
    cost = np.abs(target[:, None] - eigs[None, :])
    _, cols = scipy.optimize.linear_sum_assignment(cost)
    return cols


def mode_spectrum(mode: ModeMatrix, config: WalkConfig) -> ModeSpectrum:
    m = mode.matrix
    try:
        t, z = scipy.linalg.schur(m, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(f"Schur factorization failed for mode {mode.k}: {exc}") from exc
    off = np.max(np.abs(np.triu(t, 1))) if t.size else 0.0
    if not np.all(np.isfinite(t)) or off > 1e-8:
        raise EigensolverFailure(
            f"mode {mode.k}: matrix is not normal to working precision (off-diagonal {off:.2e})"
        )
    eigs = np.diag(t).copy()
    if config.is_hadamard:
        order = _paper_order(eigs, mode.k, config.d)
    else:
        order = np.lexsort((np.abs(eigs), np.angle(eigs)))
    eigs = eigs[order]
    z = z[:, order]
    groups = _group(eigs, config.eig_group_tol)
    projectors: list = [None] * len(eigs)
    for g in groups:
        zg = z[:, list(g)]
        p = zg @ zg.conj().T
        p.setflags(write=False)
        for j in g:
            projectors[j] = p
    eigs.setflags(write=False)
    z.setflags(write=False)
    return ModeSpectrum(mode.k, eigs, z, groups, tuple(projectors))


def all_spectra(
    config: WalkConfig,
    mode_hook: Callable[[ModeMatrix], ModeMatrix] | None = None,
) -> list[ModeSpectrum]:
    """Spectra for k = 0..d-1, in k order.

    ``mode_hook`` may replace each mode matrix before decomposition (used to
    self-test the engine comparison harness).
    """

    def one(k):
        mm = build_mode_matrix(config, k)
        if mode_hook is not None:
            mm = mode_hook(mm)
        return mode_spectrum(mm, config)

    return ordered_map(one, range(config.d))


@dataclass(frozen=True, eq=False)
class FourierState:
    """Mode amplitudes, shape (d, 4): row k is the transformed quad at mode k."""

    modes: NDArray[np.complex128]
    config: WalkConfig = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.modes, dtype=np.complex128)
        arr.setflags(write=False)
        object.__setattr__(self, "modes", arr)

    def __getitem__(self, k):
        return self.modes[k]


def forward_fourier(state: StateVector) -> FourierState:
    """F(k) = sum_n exp(+2 pi i k n / d) Phi(n)."""
    cfg = state.config
    if not cfg.memory:
        raise MemoryRequired("the Fourier pipeline handles memory-walk states only")
    quads = state.by_register()  # (4, d)
    # numpy's ifft carries the + sign and a 1/d factor
    modes = np.fft.ifft(quads, axis=1) * cfg.d
    return FourierState(modes.T, cfg)


def inverse_fourier(fstate: FourierState) -> StateVector:
    """Phi(n) = (1/d) sum_k exp(-2 pi i k n / d) F(k).

    Returned as a StateVector without renormalization, so a zero or
    non-normalized input is reproduced faithfully.
    """
    cfg = fstate.config
    quads = np.fft.fft(fstate.modes.T, axis=1) / cfg.d
    return StateVector(quads.ravel(), cfg)


def alpha_coefficients(spectrum: ModeSpectrum, fvec: Sequence[complex]) -> NDArray[np.complex128]:
    """Components of a mode vector in the unit eigenbasis of its mode matrix."""
    return spectrum.eigenvectors.conj().T @ np.asarray(fvec, dtype=np.complex128)


class SpectralWalk:
    """Closed-form evolution of one memory-walk initial state.

    Precomputes all mode spectra and the eigen-components of the initial
    Fourier state; amplitudes at any t then cost O(d^2) without stepping.
    """

    def __init__(
        self,
        state0: StateVector,
        spectra: Sequence[ModeSpectrum] | None = None,
    ):
        cfg = state0.config
        if not cfg.memory:
            raise MemoryRequired("the spectral engine handles memory walks only")
        self.config = cfg
        self.spectra = list(spectra) if spectra is not None else all_spectra(cfg)
        self.fstate0 = forward_fourier(state0)
        d = cfg.d
        self.eigenvalues = np.array([s.eigenvalues for s in self.spectra])  # (d, 4)
        alphas = np.array(
            [alpha_coefficients(s, self.fstate0[k]) for k, s in enumerate(self.spectra)]
        )
        vecs = np.array([s.eigenvectors for s in self.spectra])  # (d, 4 comp, 4 eig)
        # components[k, j] = alpha_j(k) * v_j(k): the eigen-pieces of F(k, 0)
        self.components = np.einsum("kj,kij->kji", alphas, vecs)
        self.alphas = alphas
        ks = np.arange(d)
        self._kernel = np.exp(-2j * np.pi * np.outer(ks, ks) / d) / d  # [n, k]

    def fourier_at(self, t: int) -> NDArray[np.complex128]:
        """Mode amplitudes F(k, t), shape (d, 4)."""
        if t < 0:
            raise ValueError(f"t must be >= 0, got {t}")
        powers = self.eigenvalues**t
        return np.einsum("kj,kji->ki", powers, self.components)

    def quads_at(self, t: int) -> NDArray[np.complex128]:
        """Amplitude quads Phi(n, t) for all n, shape (d, 4)."""
        return self._kernel @ self.fourier_at(t)

    def probabilities_at(self, t: int) -> NDArray[np.float64]:
        q = self.quads_at(t)
        return np.sum(q.real**2 + q.imag**2, axis=1)

    def state_at(self, t: int) -> StateVector:
        return StateVector(self.quads_at(t).T.ravel(), self.config)


def amplitudes_at(
    config: WalkConfig,
    spectra: Sequence[ModeSpectrum],
    fstate0: FourierState,
    n: int,
    t: int,
) -> NDArray[np.complex128]:
    """Amplitude quad at node n after t steps, from the spectral expansion."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    d = config.d
    total = np.zeros(4, dtype=np.complex128)
    for k, spec in enumerate(spectra):
        alpha = alpha_coefficients(spec, fstate0[k])
        evolved = spec.eigenvectors @ (alpha * spec.eigenvalues**t)
        total += np.exp(-2j * np.pi * k * n / d) * evolved
    return total / d


def probability_at(
    config: WalkConfig,
    spectra: Sequence[ModeSpectrum],
    fstate0: FourierState,
    n: int,
    t: int,
) -> float:
    q = amplitudes_at(config, spectra, fstate0, n, t)
    return float(np.vdot(q, q).real)
