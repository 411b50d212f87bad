"""Gaussian states of n bosonic modes and their symplectic linear algebra.

Quadratures are ordered ``x1, p1, ..., xn, pn`` and scaled so that the vacuum
covariance matrix is the identity (``x = a + a^dagger``, ``[x, p] = 2i``).
Quantities quoted in the ``x = (a^dagger + a)/2`` convention convert by
multiplying every variance by 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

SYMMETRY_RTOL = 1e-12
PHYSICALITY_ATOL = 1e-9
SEPARABILITY_ATOL = 1e-9


class PhysicalityError(ValueError):
    """Raised when a covariance matrix violates the uncertainty principle."""

    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


def symplectic_form(n_modes: int) -> np.ndarray:
    """Direct sum of ``n_modes`` blocks ``[[0, 1], [-1, 0]]``."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def uncertainty_min_eigenvalue(cov: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian matrix ``cov + i*Omega``."""
    n = cov.shape[0] // 2
    return float(np.linalg.eigvalsh(cov + 1j * symplectic_form(n))[0])


def _quadrature_indices(modes: Iterable[int]) -> list[int]:
    idx = []
    for m in modes:
        idx.extend((2 * m, 2 * m + 1))
    return idx


@dataclass(frozen=True, eq=False)
class GaussianState:
    """First and second moments of an n-mode Gaussian state.

    Construction checks shapes, symmetry of ``cov`` and the uncertainty
    relation ``cov + i*Omega >= 0``; a violation raises
    :class:`PhysicalityError`.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        mean = np.array(self.mean, dtype=float).reshape(-1)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValueError(f"covariance must be 2n x 2n, got shape {cov.shape}")
        if mean.shape[0] != cov.shape[0]:
            raise ValueError(f"mean has length {mean.shape[0]}, expected {cov.shape[0]}")
        if not np.all(np.isfinite(cov)) or not np.all(np.isfinite(mean)):
            raise ValueError("moments must be finite")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_RTOL * scale:
            raise ValueError("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        lam = uncertainty_min_eigenvalue(cov)
        if lam < -PHYSICALITY_ATOL:
            raise PhysicalityError(
                f"cov + i*Omega has eigenvalue {lam:.3e} < 0", min_eigenvalue=lam
            )
        cov.setflags(write=False)
        mean.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "mean", mean)

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2

    def block(self, i: int, j: int | None = None) -> np.ndarray:
        """2x2 block of ``cov`` coupling modes ``i`` and ``j``."""
        j = i if j is None else j
        return self.cov[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]

    def to_dict(self) -> dict:
        return {
            "n_modes": self.n_modes,
            "mean": self.mean.tolist(),
            "cov": self.cov.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianState":
        """Inverse of :meth:`to_dict`; ``ValueError`` on schema problems."""
        if not isinstance(data, dict):
            raise ValueError("state must be a JSON object")
        missing = {"n_modes", "mean", "cov"} - set(data)
        if missing:
            raise ValueError(f"state is missing keys {sorted(missing)}")
        n = data["n_modes"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError("n_modes must be a positive integer")
        try:
            cov = np.asarray(data["cov"], dtype=float)
            mean = np.asarray(data["mean"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"moments are not numeric: {exc}") from None
        if cov.shape != (2 * n, 2 * n) or mean.shape != (2 * n,):
            raise ValueError(f"moment shapes {mean.shape}, {cov.shape} do not match n_modes={n}")
        return cls(mean, cov)


@dataclass(frozen=True)
class ModeBipartition:
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(int(m) for m in self.left))
        object.__setattr__(self, "right", tuple(int(m) for m in self.right))
        if not self.left or not self.right:
            raise ValueError("both sides of a bipartition must be nonempty")
        if set(self.left) & set(self.right):
            raise ValueError("bipartition sides overlap")
        if len(set(self.left)) != len(self.left) or len(set(self.right)) != len(self.right):
            raise ValueError("repeated mode index in bipartition")

    @classmethod
    def split(cls, n_modes: int, left: Iterable[int]) -> "ModeBipartition":
        """Bipartition with ``left`` on one side and every other mode on the other."""
        left = tuple(sorted(set(left)))
        return cls(left, tuple(m for m in range(n_modes) if m not in left))

    def check(self, n_modes: int) -> None:
        modes = set(self.left) | set(self.right)
        if modes != set(range(n_modes)):
            raise ValueError(f"bipartition {self} does not cover modes 0..{n_modes - 1}")

    def __str__(self):
        side = lambda s: "".join(str(m) for m in s)  # noqa: E731
        return f"{side(self.left)}|{side(self.right)}"


# -- constructors -----------------------------------------------------------


def vacuum(n_modes: int = 1) -> GaussianState:
    return GaussianState(np.zeros(2 * n_modes), np.eye(2 * n_modes))


def thermal(nbar: float) -> GaussianState:
    """Single-mode thermal state with mean photon number ``nbar``."""
    if nbar < 0:
        raise ValueError("nbar must be non-negative")
    return GaussianState(np.zeros(2), (2 * nbar + 1) * np.eye(2))


def squeezed_vacuum(r: float, angle: float = 0.0) -> GaussianState:
    """Single-mode squeezed vacuum; ``angle=0`` squeezes the x quadrature."""
    c, s = np.cos(angle), np.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return GaussianState(np.zeros(2), rot @ np.diag([np.exp(-2 * r), np.exp(2 * r)]) @ rot.T)


def two_mode_squeezed_vacuum(r: float) -> GaussianState:
    r"""TMSV with ``cosh(2r)`` diagonal blocks and ``sinh(2r) diag(1, -1)`` coupling.

    Negative ``r`` flips the sign of the coupling block, i.e. a phase of pi on
    one mode.
    """
    ch, sh = np.cosh(2 * r), np.sinh(2 * r)
    z = np.diag([1.0, -1.0])
    cov = np.block([[ch * np.eye(2), sh * z], [sh * z, ch * np.eye(2)]])
    return GaussianState(np.zeros(4), cov)


def tensor(*states: GaussianState) -> GaussianState:
    """Product state; the factors' modes are concatenated in order."""
    mean = np.concatenate([s.mean for s in states])
    n = mean.shape[0]
    cov = np.zeros((n, n))
    k = 0
    for s in states:
        d = s.cov.shape[0]
        cov[k : k + d, k : k + d] = s.cov
        k += d
    return GaussianState(mean, cov)


# -- operations -------------------------------------------------------------


def symplectic_eigenvalues_of(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a positive-definite real symmetric matrix.

    Uses the Hermitian form ``i * sqrt(cov) @ Omega @ sqrt(cov)``, whose
    eigenvalues are ``+-nu_k``; works for partially transposed matrices too.
    """
    cov = np.asarray(cov, dtype=float)
    n = cov.shape[0] // 2
    w, v = np.linalg.eigh(cov)
    if w[0] <= 0:
        raise PhysicalityError("matrix is not positive definite", min_eigenvalue=float(w[0]))
    root = (v * np.sqrt(w)) @ v.T
    herm = 1j * (root @ symplectic_form(n) @ root)
    ev = np.linalg.eigvalsh(0.5 * (herm + herm.conj().T))
    return np.sort(ev[n:])


def symplectic_eigenvalues(state: GaussianState) -> np.ndarray:
    """Sorted symplectic eigenvalues; every entry is >= 1 for a physical state."""
    return symplectic_eigenvalues_of(state.cov)


def reduce(state: GaussianState, modes: Sequence[int]) -> GaussianState:
    """Marginal on ``modes``, kept in the order given."""
    modes = list(modes)
    if not modes:
        raise ValueError("cannot reduce to an empty set of modes")
    if len(set(modes)) != len(modes):
        raise ValueError("repeated mode index")
    for m in modes:
        if not 0 <= m < state.n_modes:
            raise ValueError(f"mode {m} out of range for {state.n_modes}-mode state")
    idx = _quadrature_indices(modes)
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def partial_transpose(state: GaussianState, bipartition: ModeBipartition) -> np.ndarray:
    """Covariance matrix with the momenta of the right-hand modes sign-flipped.

    The result need not satisfy the uncertainty relation, so a bare array is
    returned rather than a :class:`GaussianState`.
    """
    bipartition.check(state.n_modes)
    flip = np.ones(2 * state.n_modes)
    for m in bipartition.right:
        flip[2 * m + 1] = -1.0
    return flip[:, None] * state.cov * flip[None, :]


class PPTResult(NamedTuple):
    min_nu: float
    separable: bool
    conclusive: bool


def ppt_separable(state: GaussianState, bipartition: ModeBipartition) -> PPTResult:
    """Simon/Werner-Wolf PPT test across ``bipartition``.

    ``conclusive`` is true for 1 x N cuts, where PPT is necessary and
    sufficient for Gaussian separability; otherwise a separable verdict is
    only a necessary condition.
    """
    nu = symplectic_eigenvalues_of(partial_transpose(state, bipartition))
    min_nu = float(nu[0])
    conclusive = min(len(bipartition.left), len(bipartition.right)) == 1
    return PPTResult(min_nu, min_nu >= 1 - SEPARABILITY_ATOL, conclusive)


def is_p_classical(state: GaussianState, atol: float = 1e-9) -> bool:
    """True iff ``cov - I`` is positive semidefinite (a regular P function exists)."""
    return bool(np.linalg.eigvalsh(state.cov - np.eye(state.cov.shape[0]))[0] >= -atol)


def purity(state: GaussianState) -> float:
    return float(1.0 / np.sqrt(np.linalg.det(state.cov)))
