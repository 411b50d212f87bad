"""Joint photon-number statistics of two-mode Gaussian states and the MID.

Two independent routes to ``p(n, m) = <n, m| rho |n, m>``:

* ``"quadrature"``: overlap of the state's Wigner function with the Fock
  Wigner functions (Laguerre-Gaussian kernels), done on a tensor
  Gauss-Hermite grid. Works for any mean.
* ``"recursion"``: exact power-series expansion of the generating function
  ``sum p(n,m) s^n t^m = 4 / sqrt(det(D(s,t) cov + E(s,t)))`` with
  ``D = diag(1-s, 1-s, 1-t, 1-t)`` and ``E = diag(1+s, 1+s, 1+t, 1+t)``.
  Zero-mean states only, but cheap enough for cutoffs in the thousands.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.hermite_e import hermegauss
from scipy.signal import lfilter

from .gaussian import GaussianState

MASS_TOL = 1e-6
MAX_CUTOFF = 4096
_QUADRATURE_CHUNK = 256


class TruncationError(RuntimeError):
    """The distribution up to ``n_max`` misses more than ``MASS_TOL`` of the mass."""

    def __init__(self, message: str, mass: float, n_max: int):
        super().__init__(message)
        self.mass = mass
        self.n_max = n_max


def _check_two_mode(state: GaussianState) -> None:
    if state.n_modes != 2:
        raise ValueError("photon-number statistics are implemented for two-mode states")


# -- generating-function recursion -------------------------------------------


def _generating_coefficients(cov: np.ndarray) -> np.ndarray:
    """Coefficients ``c[i, j]`` of ``s^i t^j`` in ``det(D cov + E)``."""
    roots = np.exp(2j * np.pi * np.arange(3) / 3)
    vals = np.empty((3, 3), dtype=complex)
    for a, s in enumerate(roots):
        for b, t in enumerate(roots):
            d = np.array([1 - s, 1 - s, 1 - t, 1 - t])
            e = np.array([1 + s, 1 + s, 1 + t, 1 + t])
            vals[a, b] = np.linalg.det(d[:, None] * cov + np.diag(e))
    # degree <= 2 in each variable, so a 3x3 DFT recovers the polynomial
    return (np.fft.fft2(vals) / 9).real


def _recursion(cov: np.ndarray, n_max: int) -> np.ndarray:
    c = _generating_coefficients(cov)
    size = n_max + 1
    f = np.zeros((size, size))
    a = c[0]
    if a[0] <= 0:
        raise ValueError("generating polynomial has non-positive constant term")
    # row 0: power series of (c00 + c01 t + c02 t^2)^(-1/2)
    row = f[0]
    row[0] = a[0] ** -0.5
    for m in range(n_max):
        prev = row[m - 1] if m >= 1 else 0.0
        row[m + 1] = -(a[1] * (2 * m + 1) * row[m] + a[2] * (2 * m) * prev) / (2 * (m + 1) * a[0])
    for n in range(n_max):
        rhs = (2 * n + 1) * np.convolve(c[1], f[n])[:size]
        if n >= 1:
            rhs += (2 * n) * np.convolve(c[2], f[n - 1])[:size]
        rhs *= -1.0 / (2 * (n + 1))
        f[n + 1] = lfilter([1.0], a, rhs)
    return 4.0 * f


# -- Gauss-Hermite quadrature -----------------------------------------------


def _laguerre_table(y: np.ndarray, n_max: int) -> np.ndarray:
    """``L_k(y)`` for ``k = 0..n_max``, stacked along the first axis."""
    out = np.empty((n_max + 1,) + y.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 - y
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 - y) * out[k] - k * out[k - 1]) / (k + 1)
    return out


def _gauss_nodes_2d(order: int):
    z, w = hermegauss(order)
    w = w / math.sqrt(2 * math.pi)
    zz = np.stack(np.meshgrid(z, z, indexing="ij"), axis=-1).reshape(-1, 2)
    ww = np.outer(w, w).reshape(-1)
    return zz, ww


def _quadrature(state: GaussianState, n_max: int) -> np.ndarray:
    cov, mu = state.cov, state.mean
    eye = np.eye(4)
    shifted = cov + eye
    prefactor = 4.0 * math.exp(-0.5 * mu @ np.linalg.solve(shifted, mu)) / math.sqrt(np.linalg.det(shifted))
    # tilt of the Gaussian weight after multiplying by the Fock kernels' exp(-|r|^2/2)
    sig = np.linalg.inv(np.linalg.inv(cov) + eye)
    sig = 0.5 * (sig + sig.T)
    mean = sig @ np.linalg.solve(cov, mu)

    s11, s12, s22 = sig[:2, :2], sig[:2, 2:], sig[2:, 2:]
    gain = np.linalg.solve(s11, s12).T  # S21 S11^-1
    cond_cov = s22 - gain @ s12
    chol_outer = np.linalg.cholesky(s11)
    chol_inner = np.linalg.cholesky(0.5 * (cond_cov + cond_cov.T))

    z_out, w_out = _gauss_nodes_2d(2 * n_max + 1)
    z_in, w_in = _gauss_nodes_2d(n_max + 1)
    r1 = mean[:2] + z_out @ chol_outer.T
    lag_a = _laguerre_table(np.sum(r1**2, axis=1), n_max)  # (n, outer)
    inner_offsets = z_in @ chol_inner.T  # (inner, 2)

    marg_b = np.empty((r1.shape[0], n_max + 1))
    for start in range(0, r1.shape[0], _QUADRATURE_CHUNK):
        block = r1[start : start + _QUADRATURE_CHUNK]
        centre = mean[2:] + (block - mean[:2]) @ gain.T  # (chunk, 2)
        r2 = centre[:, None, :] + inner_offsets[None, :, :]
        lag_b = _laguerre_table(np.sum(r2**2, axis=2), n_max)  # (m, chunk, inner)
        marg_b[start : start + block.shape[0]] = (lag_b @ w_in).T
    expect = (lag_a * w_out) @ marg_b
    sign = (-1.0) ** np.arange(n_max + 1)
    return prefactor * sign[:, None] * sign[None, :] * expect


# -- public API -------------------------------------------------------------


def photon_distribution(state: GaussianState, n_max: int, method: str = "quadrature", check_mass: bool = True) -> np.ndarray:
    """Joint photon-number probabilities ``p[n, m]`` for ``n, m <= n_max``.

    Raises :class:`TruncationError` if the returned table holds less than
    ``1 - MASS_TOL`` of the probability and ``check_mass`` is set.
    """
    _check_two_mode(state)
    if n_max < 0 or int(n_max) != n_max:
        raise ValueError("n_max must be a non-negative integer")
    n_max = int(n_max)
    if method == "quadrature":
        p = _quadrature(state, n_max)
    elif method == "recursion":
        if np.any(state.mean != 0):
            raise ValueError("the recursion handles zero-mean states only")
        p = _recursion(state.cov, n_max)
    else:
        raise ValueError(f"unknown method {method!r}")
    if check_mass:
        mass = float(p.sum())
        if mass < 1 - MASS_TOL:
            raise TruncationError(f"mass {mass:.9f} up to n_max={n_max}; raise n_max", mass, n_max)
    return p


def _entropy(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def shannon_mutual_information(p: np.ndarray) -> float:
    p = np.clip(p, 0.0, None)
    p = p / p.sum()
    return _entropy(p.sum(axis=1)) + _entropy(p.sum(axis=0)) - _entropy(p.ravel())


def _adaptive_distribution(state: GaussianState, method: str) -> np.ndarray:
    # start near the mean photon number and double until the tail is captured
    nbar = 0.25 * (np.trace(state.cov) + state.mean @ state.mean) - 1.0
    n_max = int(min(MAX_CUTOFF, max(32, 2 ** math.ceil(math.log2(max(nbar, 1.0) * 16)))))
    while True:
        try:
            return photon_distribution(state, n_max, method)
        except TruncationError:
            if n_max >= MAX_CUTOFF:
                raise
            n_max = min(MAX_CUTOFF, 2 * n_max)


def mid(state: GaussianState, n_max: int | None = None, method: str | None = None) -> float:
    """Measurement-induced disturbance under local photon counting.

    ``n_max=None`` grows the cutoff until the mass criterion holds. The
    default method is the recursion for zero-mean states and the quadrature
    otherwise.
    """
    from .measures import CLAMP_ATOL, mutual_information

    _check_two_mode(state)
    if method is None:
        method = "recursion" if not np.any(state.mean != 0) else "quadrature"
    if n_max is None:
        p = _adaptive_distribution(state, method)
    else:
        if n_max < 10:
            raise ValueError("n_max must be at least 10")
        p = photon_distribution(state, n_max, method)
    value = mutual_information(state) - shannon_mutual_information(p)
    if value > -CLAMP_ATOL:
        value = max(value, 0.0)
    return value
