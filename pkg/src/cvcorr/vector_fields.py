"""Two-degree-of-freedom (spatial x polarization) optical fields.

A field is four complex amplitudes ``eps[2*s + p]`` with spatial index ``s``
(two points ``x1, x2`` or the modes ``HG10, HG01``) and polarization index
``p`` (0 = H, 1 = V); polarization varies fastest. The 4x4 coherence matrix
uses the same ordering, i.e. ``kron(spatial, polarization)``.

Stokes conventions: polarization uses ``(I, Z, X, Y)`` so that
``S1 = |H|^2 - |V|^2``, ``S2 = 2 Re(E_H E_V*)``, ``S3 = -2 Im(E_H E_V*)``.
The spatial cebit uses ``(I, Z, -X, -Y)``. With these, a radially polarized
beam has the two-DoF Stokes table ``diag(1, 1, -1, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
)
POL_BASIS = PAULI
SPATIAL_BASIS = (PAULI[0], PAULI[1], -PAULI[2], -PAULI[3])
HERMITIAN_ATOL = 1e-12
PSD_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class TDoFField:
    amplitudes: np.ndarray
    basis: str = "hg"

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amp.shape != (4,):
            raise ValueError("a two-DoF field has exactly four amplitudes")
        if not np.all(np.isfinite(amp)):
            raise ValueError("amplitudes must be finite")
        if np.linalg.norm(amp) == 0:
            raise ValueError("field is identically zero")
        if self.basis not in ("points", "hg"):
            raise ValueError("basis must be 'points' or 'hg'")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def product(cls, spatial: Sequence[complex], polarization: Sequence[complex], basis: str = "hg") -> "TDoFField":
        return cls(np.kron(np.asarray(spatial, dtype=complex), np.asarray(polarization, dtype=complex)), basis)

    @classmethod
    def radial(cls) -> "TDoFField":
        """HG10 with H plus HG01 with V."""
        return cls(np.array([1, 0, 0, 1]) / np.sqrt(2), "hg")

    @classmethod
    def class_bell(cls) -> "TDoFField":
        """V-polarized beam at x1 and H-polarized beam at x2, equal power."""
        return cls(np.array([0, 1, 1, 0]) / np.sqrt(2), "points")

    @classmethod
    def random(cls, rng: np.random.Generator, basis: str = "hg") -> "TDoFField":
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        return cls(z / np.linalg.norm(z), basis)

    @property
    def intensity(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def normalized(self) -> "TDoFField":
        return TDoFField(self.amplitudes / np.sqrt(self.intensity), self.basis)

    def matrix(self) -> np.ndarray:
        """Amplitudes as a 2x2 array ``[spatial, polarization]``."""
        return self.amplitudes.reshape(2, 2)

    def coherence(self) -> "CoherenceMatrix4":
        return CoherenceMatrix4(np.outer(self.amplitudes, self.amplitudes.conj()))

    def to_dict(self) -> dict:
        return {"basis": self.basis, "amplitudes": [[a.real, a.imag] for a in self.amplitudes]}

    @classmethod
    def from_dict(cls, data: dict) -> "TDoFField":
        if not isinstance(data, dict) or "amplitudes" not in data:
            raise ValueError("field JSON needs an 'amplitudes' entry")
        try:
            pairs = np.asarray(data["amplitudes"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"amplitudes are not numeric: {exc}") from None
        if pairs.shape != (4, 2):
            raise ValueError("amplitudes must be four [re, im] pairs")
        return cls(pairs[:, 0] + 1j * pairs[:, 1], data.get("basis", "hg"))


@dataclass(frozen=True, eq=False)
class CoherenceMatrix4:
    matrix: np.ndarray

    def __post_init__(self):
        g = np.array(self.matrix, dtype=complex)
        if g.shape != (4, 4):
            raise ValueError("coherence matrix must be 4x4")
        scale = max(1.0, float(np.max(np.abs(g))))
        if np.max(np.abs(g - g.conj().T)) > HERMITIAN_ATOL * scale:
            raise ValueError("coherence matrix is not Hermitian")
        g = 0.5 * (g + g.conj().T)
        lam = np.linalg.eigvalsh(g)
        if lam[0] < -PSD_ATOL * scale:
            raise ValueError(f"coherence matrix has negative eigenvalue {lam[0]:.3e}")
        if np.trace(g).real <= 0:
            raise ValueError("coherence matrix has zero trace")
        g.setflags(write=False)
        object.__setattr__(self, "matrix", g)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def normalized(self) -> "CoherenceMatrix4":
        return CoherenceMatrix4(self.matrix / self.trace)

    def reduced(self, keep: str) -> np.ndarray:
        """2x2 matrix of ``"polarization"`` or ``"spatial"`` after tracing out the other."""
        t = self.matrix.reshape(2, 2, 2, 2)
        if keep == "polarization":
            return np.einsum("ipiq->pq", t)
        if keep == "spatial":
            return np.einsum("piqi->pq", t)
        raise ValueError("keep must be 'polarization' or 'spatial'")


def _as_coherence(gamma) -> CoherenceMatrix4:
    if isinstance(gamma, CoherenceMatrix4):
        return gamma
    if isinstance(gamma, TDoFField):
        return gamma.coherence()
    return CoherenceMatrix4(gamma)


def coherence_matrix(fields: Sequence[TDoFField], weights: Sequence[float] | None = None) -> CoherenceMatrix4:
    """Incoherent mixture ``sum_k w_k |psi_k)(psi_k|`` of the given fields."""
    fields = list(fields)
    if not fields:
        raise ValueError("at least one field is required")
    if weights is None:
        weights = np.full(len(fields), 1.0 / len(fields))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(fields),) or np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise ValueError("weights must be non-negative, one per field, and sum to 1")
    g = sum(w * np.outer(f.amplitudes, f.amplitudes.conj()) for w, f in zip(weights, fields))
    return CoherenceMatrix4(g)


# -- Stokes parameters ----------------------------------------------------------


@dataclass(frozen=True)
class StokesVector:
    s0: float
    s1: float
    s2: float
    s3: float

    def __post_init__(self):
        if self.s0 < np.sqrt(self.s1**2 + self.s2**2 + self.s3**2) - 1e-9 * max(1.0, abs(self.s0)):
            raise ValueError("Stokes vector violates S0 >= |S|")

    @classmethod
    def from_matrix(cls, rho: np.ndarray, basis=POL_BASIS) -> "StokesVector":
        return cls(*(float(np.trace(rho @ s).real) for s in basis))

    def as_array(self) -> np.ndarray:
        return np.array([self.s0, self.s1, self.s2, self.s3])

    @property
    def degree(self) -> float:
        return float(np.linalg.norm(self.as_array()[1:]) / self.s0)


def polarization_stokes(gamma) -> StokesVector:
    return StokesVector.from_matrix(_as_coherence(gamma).reduced("polarization"))


def tdof_stokes(gamma) -> np.ndarray:
    """Table ``S[j, k] = tr[Gamma (sigma_j polarization, tau_k spatial)]``; ``S[0, 0] = tr Gamma``."""
    g = _as_coherence(gamma).matrix
    out = np.empty((4, 4))
    for j, s in enumerate(POL_BASIS):
        for k, t in enumerate(SPATIAL_BASIS):
            out[j, k] = np.trace(g @ np.kron(t, s)).real
    return out


def coherence_from_stokes(table: np.ndarray) -> np.ndarray:
    """Inverse of :func:`tdof_stokes`."""
    table = np.asarray(table, dtype=float)
    if table.shape != (4, 4):
        raise ValueError("Stokes table must be 4x4")
    return sum(table[j, k] * np.kron(t, s) for j, s in enumerate(POL_BASIS) for k, t in enumerate(SPATIAL_BASIS)) / 4


# -- coherence and entanglement measures -----------------------------------------


def _linear_entropy_measure(rho: np.ndarray) -> float:
    tr = np.trace(rho).real
    return 2.0 * (1.0 - np.trace(rho @ rho).real / tr**2)


def entanglement_degree(gamma, which_dof: str = "polarization") -> float:
    """``E`` with ``E^2 = 2 [1 - tr(G_j^2) / (tr G_j)^2]`` for the reduced matrix ``G_j``."""
    e2 = _linear_entropy_measure(_as_coherence(gamma).reduced(which_dof))
    return float(np.sqrt(min(max(e2, 0.0), 1.0)))


def polarization_degree(gamma) -> float:
    return polarization_stokes(gamma).degree


def coherence_and_predictability(gamma, which_dof: str = "spatial") -> tuple[complex, float]:
    """Trace coherence ``mu`` and predictability ``delta`` between the two
    basis states of ``which_dof``."""
    t = _as_coherence(gamma).matrix.reshape(2, 2, 2, 2)
    if which_dof == "spatial":
        block = lambda a, b: t[a, :, b, :]  # noqa: E731
    elif which_dof == "polarization":
        block = lambda a, b: t[:, a, :, b]  # noqa: E731
    else:
        raise ValueError("which_dof must be 'spatial' or 'polarization'")
    i1 = np.trace(block(0, 0)).real
    i2 = np.trace(block(1, 1)).real
    if i1 <= 0 or i2 <= 0:
        raise ValueError("coherence is undefined when one basis state carries no intensity")
    mu = complex(np.trace(block(0, 1)) / np.sqrt(i1 * i2))
    return mu, float((i1 - i2) / (i1 + i2))


def verify_entanglement_identity(gamma, which_dof: str = "spatial") -> float:
    """``|E^2 - (1 - delta^2)(1 - |mu|^2)|`` for a pure field."""
    g = _as_coherence(gamma)
    e2 = _linear_entropy_measure(g.reduced("polarization" if which_dof == "spatial" else "spatial"))
    i = g.matrix.reshape(2, 2, 2, 2)
    if which_dof == "spatial":
        i1, i2 = np.trace(i[0, :, 0, :]).real, np.trace(i[1, :, 1, :]).real
    else:
        i1, i2 = np.trace(i[:, 0, :, 0]).real, np.trace(i[:, 1, :, 1]).real
    if i1 <= 0 or i2 <= 0:
        # one basis state is dark: delta = +-1 and the right side vanishes
        return float(abs(e2))
    mu, delta = coherence_and_predictability(g, which_dof)
    return float(abs(e2 - (1 - delta**2) * (1 - abs(mu) ** 2)))


def schmidt_probabilities(field: TDoFField) -> np.ndarray:
    s = np.linalg.svd(field.matrix(), compute_uv=False) ** 2
    return s / s.sum()


def schmidt_weight(field: TDoFField) -> float:
    return float(1.0 / np.sum(schmidt_probabilities(field) ** 2))


def concurrence(field: TDoFField) -> float:
    e = field.normalized().matrix()
    return float(2 * abs(e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]))
