"""
Time-averaged (Cesaro) limiting distribution of the memory walk.

Expanding p(n, t) over the eigen-pieces of every Fourier mode gives a double
sum whose terms oscillate as ``(conj(lam_j(k)) lam_l(m))**t``. Averaging over
t kills every term except those with equal eigenvalues (the resonant pairs),
so the limit is a finite sum over the resonance set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np
from numpy.typing import NDArray

from .direct import build_walk_operator, running_time_average
from .errors import ModeMismatch, NonConvergentResidue
from .spectral import FourierState, ModeSpectrum, alpha_coefficients
from .state import Distribution, StateVector, WalkConfig

__all__ = [
    "RESONANCE_TOL",
    "ResonanceSet",
    "resonance_selector",
    "limiting_probability",
    "limiting_distribution",
    "symmetry_defect",
    "memoryless_limiting_empirical",
]

RESONANCE_TOL = 1e-9
IMAG_TOL = 1e-9
NEGATIVE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ResonanceSet:
    """Resonant (k, j, m, l) tuples, stored as a boolean mask of shape (d, 4, d, 4)."""

    mask: NDArray[np.bool_]

    def __iter__(self) -> Iterator[tuple[int, int, int, int]]:
        # lexicographic in (k, j, m, l)
        for idx in np.argwhere(self.mask):
            yield tuple(int(x) for x in idx)

    def __contains__(self, item) -> bool:
        k, j, m, l = item
        return bool(self.mask[k, j, m, l])

    def __len__(self) -> int:
        return int(self.mask.sum())

    def as_set(self) -> set[tuple[int, int, int, int]]:
        return set(iter(self))


def _eigenvalue_table(spectra: Sequence[ModeSpectrum]) -> NDArray[np.complex128]:
    return np.array([s.eigenvalues for s in spectra])


def resonance_selector(spectra: Sequence[ModeSpectrum], tol: float = RESONANCE_TOL) -> ResonanceSet:
    """Tuples with |conj(lam_j(k)) lam_l(m) - 1| <= tol."""
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    lam = _eigenvalue_table(spectra)
    prod = np.conj(lam)[:, :, None, None] * lam[None, None, :, :]
    return ResonanceSet(np.abs(prod - 1.0) <= tol)


def _eigen_pieces(spectra: Sequence[ModeSpectrum], fstate0: FourierState) -> NDArray[np.complex128]:
    """pieces[k, j] = alpha_j(k) v_j(k), i.e. P_j(k) F(k, 0) split per eigenvector."""
    out = np.empty((len(spectra), 4, 4), dtype=np.complex128)
    for k, spec in enumerate(spectra):
        alpha = alpha_coefficients(spec, fstate0[k])
        out[k] = (spec.eigenvectors * alpha[None, :]).T
    return out


def limiting_probability(
    config: WalkConfig,
    spectra: Sequence[ModeSpectrum],
    fstate0: FourierState,
    tol: float = RESONANCE_TOL,
    resonances: ResonanceSet | None = None,
) -> Distribution:
    """Analytic time-averaged distribution over the d nodes.

    Raises NonConvergentResidue if any entry keeps an imaginary part above
    1e-9, which would mean the eigen-decomposition is inconsistent.
    """
    d = config.d
    res = resonances if resonances is not None else resonance_selector(spectra, tol)
    pieces = _eigen_pieces(spectra, fstate0).reshape(4 * d, 4)
    gram = pieces.conj() @ pieces.T  # inner products of every pair of pieces
    weighted = np.where(res.mask.reshape(4 * d, 4 * d), gram, 0.0)
    # collapse eigen indices: coupling[k, m] = sum over resonant (j, l)
    coupling = weighted.reshape(d, 4, d, 4).sum(axis=(1, 3))
    ks = np.arange(d)
    # with the inverse transform exp(-2 pi i k n / d), |Phi(n)|^2 picks up
    # exp(+2 pi i (k - m) n / d) on the (k, m) term
    phase = np.exp(2j * np.pi * np.outer(ks, ks) / d)  # [n, k]
    raw = np.einsum("nk,km,nm->n", phase, coupling, phase.conj()) / d**2
    residue = float(np.max(np.abs(raw.imag)))
    if residue > IMAG_TOL:
        raise NonConvergentResidue(
            f"limiting probability has imaginary residue {residue:.3e} > {IMAG_TOL:g}"
        )
    probs = raw.real
    if probs.min() < -NEGATIVE_TOL:
        raise NonConvergentResidue(f"negative limiting probability {probs.min():.3e}")
    return Distribution(np.clip(probs, 0.0, None), imag_residue=residue)


def limiting_distribution(state0: StateVector, spectra: Sequence[ModeSpectrum] | None = None,
                          tol: float = RESONANCE_TOL) -> Distribution:
    """Convenience wrapper: spectra and Fourier transform built from ``state0``."""
    from .spectral import all_spectra, forward_fourier

    cfg = state0.config
    if spectra is None:
        spectra = all_spectra(cfg)
    return limiting_probability(cfg, spectra, forward_fourier(state0), tol=tol)


def symmetry_defect(dist: Distribution | NDArray, center: int = 0) -> float:
    """max_n |p(center + n) - p(center - n)|, indices mod d."""
    p = np.asarray(dist, dtype=float)
    d = p.shape[0]
    n = np.arange(d)
    return float(np.max(np.abs(p[(center + n) % d] - p[(center - n) % d])))


def memoryless_limiting_empirical(
    config: WalkConfig, state0: StateVector, t: int, include_step_zero: bool = False
) -> Distribution:
    """Running time average of the memoryless walk at horizon t."""
    if config.memory:
        raise ModeMismatch("memoryless_limiting_empirical needs a memoryless configuration")
    if state0.config.memory:
        raise ModeMismatch("initial state belongs to a memory walk")
    return running_time_average(state0, build_walk_operator(config), t, include_step_zero)
