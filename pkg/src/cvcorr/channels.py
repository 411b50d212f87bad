"""Gaussian unitaries and channels acting on :class:`GaussianState`.

Beam-splitter convention: mode ``j`` is first rotated in phase by ``phi``,
then ``x_i -> sqrt(t) x_i + sqrt(1-t) x_j`` and
``x_j -> -sqrt(1-t) x_i + sqrt(t) x_j`` (momenta alike). Any relative phase
between the inputs is carried by ``phi`` or by the orientation of the input
squeezing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import GaussianState, symplectic_form

SYMPLECTIC_ATOL = 1e-10


def rotation(phi: float) -> np.ndarray:
    """Phase-space rotation for ``a -> exp(-i phi) a``."""
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[c, s], [-s, c]])


def embed(local: np.ndarray, modes, n_modes: int) -> np.ndarray:
    """Lift a ``2k x 2k`` matrix on ``modes`` to the full ``2n x 2n`` space."""
    idx = []
    for m in modes:
        idx.extend((2 * m, 2 * m + 1))
    full = np.eye(2 * n_modes)
    full[np.ix_(idx, idx)] = local
    return full


@dataclass(frozen=True, eq=False)
class SymplecticOp:
    matrix: np.ndarray

    def __post_init__(self):
        s = np.array(self.matrix, dtype=float)
        n = s.shape[0] // 2
        if s.shape != (2 * n, 2 * n):
            raise ValueError("symplectic matrix must be 2n x 2n")
        om = symplectic_form(n)
        if np.max(np.abs(s @ om @ s.T - om)) > SYMPLECTIC_ATOL * max(1.0, np.max(np.abs(s)) ** 2):
            raise ValueError("matrix is not symplectic")
        s.setflags(write=False)
        object.__setattr__(self, "matrix", s)

    def apply(self, state: GaussianState) -> GaussianState:
        s = self.matrix
        return GaussianState(s @ state.mean, s @ state.cov @ s.T)

    def __matmul__(self, other: "SymplecticOp") -> "SymplecticOp":
        return SymplecticOp(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class NoiseInjection:
    """Ensemble covariance of random classical displacements."""

    matrix: np.ndarray

    def __post_init__(self):
        n = np.array(self.matrix, dtype=float)
        if n.ndim != 2 or n.shape[0] != n.shape[1]:
            raise ValueError("noise matrix must be square")
        if np.max(np.abs(n - n.T), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(n), initial=0.0)):
            raise ValueError("noise matrix must be symmetric")
        n = 0.5 * (n + n.T)
        lam = np.linalg.eigvalsh(n)[0] if n.size else 0.0
        if lam < -1e-12:
            raise ValueError(f"noise matrix is not positive semidefinite (eigenvalue {lam:.3e})")
        n.setflags(write=False)
        object.__setattr__(self, "matrix", n)

    @classmethod
    def from_displacement_map(cls, coupling: np.ndarray, variances) -> "NoiseInjection":
        """Noise of ``d = coupling @ xi`` for independent zero-mean ``xi``."""
        coupling = np.asarray(coupling, dtype=float)
        return cls(coupling @ np.diag(np.atleast_1d(variances)) @ coupling.T)


def _check_mode(state: GaussianState, mode: int) -> None:
    if not 0 <= mode < state.n_modes:
        raise ValueError(f"mode {mode} out of range for {state.n_modes}-mode state")


def beam_splitter_matrix(t: float, phi: float = 0.0) -> np.ndarray:
    """4x4 symplectic of a beam splitter with transmittance ``t``."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"transmittance {t} outside [0, 1]")
    c, s = np.sqrt(t), np.sqrt(1.0 - t)
    mix = np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]])
    phase = np.eye(4)
    phase[2:, 2:] = rotation(phi)
    return mix @ phase


def beam_splitter(state: GaussianState, mode_i: int, mode_j: int, t: float = 0.5, phi: float = 0.0) -> GaussianState:
    _check_mode(state, mode_i)
    _check_mode(state, mode_j)
    if mode_i == mode_j:
        raise ValueError("beam splitter needs two distinct modes")
    s = embed(beam_splitter_matrix(t, phi), (mode_i, mode_j), state.n_modes)
    return GaussianState(s @ state.mean, s @ state.cov @ s.T)


def squeeze_matrix(r: float, angle: float = 0.0) -> np.ndarray:
    """Squeezes the quadrature at ``angle`` by ``exp(-r)``."""
    rot = rotation(angle)
    return rot.T @ np.diag([np.exp(-r), np.exp(r)]) @ rot


def squeeze(state: GaussianState, mode: int, r: float, angle: float = 0.0) -> GaussianState:
    _check_mode(state, mode)
    if not np.isfinite(r):
        raise ValueError("squeezing must be finite")
    s = embed(squeeze_matrix(r, angle), (mode,), state.n_modes)
    return GaussianState(s @ state.mean, s @ state.cov @ s.T)


def phase_shift(state: GaussianState, mode: int, phi: float) -> GaussianState:
    _check_mode(state, mode)
    s = embed(rotation(phi), (mode,), state.n_modes)
    return GaussianState(s @ state.mean, s @ state.cov @ s.T)


def attenuate(state: GaussianState, mode: int, eta: float) -> GaussianState:
    """Pure-loss channel of transmissivity ``eta`` mixing in vacuum."""
    _check_mode(state, mode)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmissivity {eta} outside [0, 1]")
    n = state.n_modes
    x = np.ones(2 * n)
    x[2 * mode : 2 * mode + 2] = np.sqrt(eta)
    y = np.zeros(2 * n)
    y[2 * mode : 2 * mode + 2] = 1.0 - eta
    cov = x[:, None] * state.cov * x[None, :] + np.diag(y)
    return GaussianState(x * state.mean, cov)


def add_classical_noise(state: GaussianState, noise) -> GaussianState:
    """Average over Gaussian random displacements with covariance ``noise``."""
    if not isinstance(noise, NoiseInjection):
        noise = NoiseInjection(noise)
    if noise.matrix.shape != state.cov.shape:
        raise ValueError(f"noise shape {noise.matrix.shape} does not match state {state.cov.shape}")
    return GaussianState(state.mean, state.cov + noise.matrix)


def displace(state: GaussianState, vector) -> GaussianState:
    vector = np.asarray(vector, dtype=float).reshape(-1)
    if vector.shape != state.mean.shape:
        raise ValueError(f"displacement has length {vector.shape[0]}, expected {state.mean.shape[0]}")
    return GaussianState(state.mean + vector, state.cov)
