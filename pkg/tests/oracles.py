"""Reference computations that avoid the package's own code paths."""

import math

import numpy as np


def geometric_probs(nbar, n_terms=4000):
    n = np.arange(n_terms)
    return (nbar / (nbar + 1)) ** n / (nbar + 1)


def shannon(p):
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def tmsv_schmidt_probs(r, n_terms=4000):
    n = np.arange(n_terms)
    return np.tanh(r) ** (2 * n) / np.cosh(r) ** 2


def omega(n):
    w = np.zeros((2 * n, 2 * n))
    for k in range(n):
        w[2 * k, 2 * k + 1] = 1.0
        w[2 * k + 1, 2 * k] = -1.0
    return w


def brute_symplectic_eigenvalues(cov):
    """Moduli of the eigenvalues of ``i Omega cov`` from a general eigensolver."""
    n = cov.shape[0] // 2
    ev = np.sort(np.abs(np.linalg.eigvals(1j * omega(n) @ cov)))
    return ev[::2]


def tmsv_cov(r):
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    return np.array([[c, 0, s, 0], [0, c, 0, -s], [s, 0, c, 0], [0, -s, 0, c]])


def thermal_photon_table(nbar_a, nbar_b, n_max):
    return np.outer(geometric_probs(nbar_a, n_max + 1), geometric_probs(nbar_b, n_max + 1))


def total_variation(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())
