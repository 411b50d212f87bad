"""Mueller matrices acting on two-DoF fields, single-shot and four-probe
polarimetry, and knife-edge position sensing with a radially polarized beam."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator

from .vector_fields import POL_BASIS, CoherenceMatrix4, StokesVector, TDoFField, _as_coherence, tdof_stokes

PHYSICAL_ATOL = 1e-9
RADIAL_SIGNS = np.array([1.0, 1.0, -1.0, 1.0])
DEFAULT_PROBES = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],  # unpolarized
        [1.0, 1.0, 0.0, 0.0],  # H
        [1.0, 0.0, 1.0, 0.0],  # +45
        [1.0, 0.0, 0.0, 1.0],  # circular
    ]
)


class UnphysicalMuellerError(ValueError):
    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


def jones_to_mueller(jones: np.ndarray) -> np.ndarray:
    """``M[j, k] = tr(sigma_j J sigma_k J^dagger) / 2``."""
    j = np.asarray(jones, dtype=complex)
    return np.array([[0.5 * np.trace(sj @ j @ sk @ j.conj().T).real for sk in POL_BASIS] for sj in POL_BASIS])


@dataclass(frozen=True, eq=False)
class MuellerMatrix:
    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (4, 4) or not np.all(np.isfinite(m)):
            raise ValueError("Mueller matrix must be a finite 4x4 real array")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls) -> "MuellerMatrix":
        return cls(np.eye(4))

    @classmethod
    def from_jones(cls, jones: np.ndarray) -> "MuellerMatrix":
        return cls(jones_to_mueller(jones))

    @classmethod
    def random_physical(cls, rng: np.random.Generator, rank: int | None = None) -> "MuellerMatrix":
        """Mixture of up to four random Jones operators, rescaled to ``M00 <= 1``."""
        rank = int(rng.integers(1, 5)) if rank is None else rank
        ops = [rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(rank)]
        w = rng.dirichlet(np.ones(rank))
        m = sum(wi * jones_to_mueller(j) for wi, j in zip(w, ops))
        return cls(m / (m[0, 0] + np.abs(m[0, 1:]).sum()))

    def choi(self) -> np.ndarray:
        """Choi matrix of the induced map on 2x2 polarization matrices.

        Equivalent to the Cloude coherency matrix up to a unitary change of
        basis; index ``2*c + a`` for output ``c`` and input ``a``.
        """
        m = self.m
        out = np.zeros((4, 4), dtype=complex)
        for a in range(2):
            for b in range(2):
                unit = np.zeros((2, 2))
                unit[a, b] = 1.0
                s_in = np.array([np.trace(unit @ s) for s in POL_BASIS])
                s_out = m @ s_in
                image = 0.5 * sum(c * s for c, s in zip(s_out, POL_BASIS))
                out[a::2, b::2] = image
        return 0.5 * (out + out.conj().T)

    def min_choi_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.choi())[0])

    @property
    def is_physical(self) -> bool:
        return self.min_choi_eigenvalue() >= -PHYSICAL_ATOL * max(1.0, abs(self.m[0, 0]))

    def kraus(self) -> list[tuple[float, np.ndarray]]:
        """Cloude decomposition: ``(weight, J)`` pairs with unit-norm ``vec(J)``."""
        lam, vec = np.linalg.eigh(self.choi())
        if lam[0] < -PHYSICAL_ATOL * max(1.0, abs(self.m[0, 0])):
            raise UnphysicalMuellerError(f"coherency matrix eigenvalue {lam[0]:.3e} < 0", float(lam[0]))
        return [(float(l), vec[:, i].reshape(2, 2)) for i, l in enumerate(lam) if l > 0]

    def to_dict(self) -> dict:
        return {"m": self.m.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "MuellerMatrix":
        if not isinstance(data, dict) or "m" not in data:
            raise ValueError("Mueller JSON needs an 'm' entry")
        try:
            return cls(np.asarray(data["m"], dtype=float))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"bad Mueller matrix: {exc}") from None


def _as_mueller(m) -> MuellerMatrix:
    return m if isinstance(m, MuellerMatrix) else MuellerMatrix(m)


def apply_mueller(gamma, mueller) -> CoherenceMatrix4:
    """Act with the polarization map on a two-DoF coherence matrix."""
    g = _as_coherence(gamma).matrix
    out = np.zeros((4, 4), dtype=complex)
    for w, j in _as_mueller(mueller).kraus():
        op = np.kron(np.eye(2), j)
        out += w * op @ g @ op.conj().T
    out = 0.5 * (out + out.conj().T)
    # clip roundoff-level negative eigenvalues so the result validates
    lam, vec = np.linalg.eigh(out)
    out = (vec * np.clip(lam, 0.0, None)) @ vec.conj().T
    return CoherenceMatrix4(out)


def radial_probe() -> CoherenceMatrix4:
    return TDoFField.radial().coherence()


def recover_mueller_single_shot(gamma_out, probe_intensity: float = 1.0) -> MuellerMatrix:
    """Read ``M[j, k] = S_out[j, k] * lambda_k`` from a radial probe's output."""
    return MuellerMatrix(tdof_stokes(gamma_out) * RADIAL_SIGNS[None, :] / probe_intensity)


def solve_mueller(probes: np.ndarray, outputs: np.ndarray) -> MuellerMatrix:
    """Solve ``outputs[a] = M @ probes[a]`` for ``M`` as a 16-unknown linear system."""
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    outputs = np.atleast_2d(np.asarray(outputs, dtype=float))
    if probes.shape[1] != 4 or outputs.shape != probes.shape:
        raise ValueError("probes and outputs must be matching arrays of Stokes 4-vectors")
    system = np.kron(np.eye(4), probes)  # rows (j, a), unknowns M[j, k] row-major
    rank = np.linalg.matrix_rank(system)
    if rank < 16:
        raise ValueError("probe Stokes vectors span fewer than four dimensions; M is not determined")
    rhs = outputs.T.reshape(-1)
    sol, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    return MuellerMatrix(sol.reshape(4, 4))


def conventional_polarimetry(mueller, probes: np.ndarray = DEFAULT_PROBES) -> MuellerMatrix:
    """Probe ``mueller`` with one Stokes vector at a time and reconstruct it."""
    m = _as_mueller(mueller).m
    probes = np.atleast_2d(np.asarray(probes, dtype=float))
    return solve_mueller(probes, probes @ m.T)


# -- knife-edge sensing ----------------------------------------------------------


def hg_profiles(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Normalized 1-D Hermite-Gauss orders 0 and 1 for unit waist."""
    u0 = (2 / np.pi) ** 0.25 * np.exp(-(x**2))
    return u0, 2 * x * u0


@dataclass(frozen=True)
class KinematicSensor:
    """Radially structured beam ``lambda1 HG10 H + lambda2 HG01 V`` partly
    blocked by a knife edge covering ``x < x0``."""

    lambda1: float = 2**-0.5
    lambda2: float = 2**-0.5
    half_width: float = 6.0
    nodes: int = 201
    x_range: float = 3.0
    calibration_points: int = 401

    def __post_init__(self):
        if self.nodes < 201:
            raise ValueError("at least 201 quadrature nodes per axis are required")
        if self.lambda1 == 0 and self.lambda2 == 0:
            raise ValueError("beam has no power")

    @cached_property
    def _y_rule(self):
        y, w = np.polynomial.legendre.leggauss(self.nodes)
        return y * self.half_width, w * self.half_width

    def stokes(self, x0: float) -> StokesVector:
        """Global Stokes vector of the transmitted part, by 2-D quadrature."""
        if np.isnan(x0):
            raise ValueError("x0 is NaN")
        lo = -self.half_width if x0 == -np.inf else max(float(x0), -self.half_width)
        if lo >= self.half_width:
            return StokesVector(0.0, 0.0, 0.0, 0.0)
        t, wt = np.polynomial.legendre.leggauss(self.nodes)
        x = lo + (t + 1) * (self.half_width - lo) / 2
        wx = wt * (self.half_width - lo) / 2
        y, wy = self._y_rule
        ux0, ux1 = hg_profiles(x)
        uy0, uy1 = hg_profiles(y)
        e_h = self.lambda1 * np.outer(ux1, uy0)
        e_v = self.lambda2 * np.outer(ux0, uy1)
        w = np.outer(wx, wy)
        cross = np.sum(w * e_h * np.conj(e_v))
        return StokesVector(
            float(np.sum(w * (abs(e_h) ** 2 + abs(e_v) ** 2))),
            float(np.sum(w * (abs(e_h) ** 2 - abs(e_v) ** 2))),
            float(2 * cross.real),
            float(-2 * cross.imag) + 0.0,
        )

    @cached_property
    def total_intensity(self) -> float:
        return self.stokes(-np.inf).s0

    @cached_property
    def calibration(self) -> tuple[np.ndarray, np.ndarray]:
        """``(x0 grid, transmitted fraction)``; the fraction decreases with ``x0``."""
        grid = np.linspace(-self.x_range, self.x_range, self.calibration_points)
        frac = np.array([self.stokes(x).s0 for x in grid]) / self.total_intensity
        if np.any(np.diff(frac) >= 0):
            raise RuntimeError("calibration curve is not strictly monotone")
        return grid, frac

    @cached_property
    def _inverse(self) -> PchipInterpolator:
        grid, frac = self.calibration
        return PchipInterpolator(frac[::-1], grid[::-1])

    def estimate(self, stokes: StokesVector) -> float:
        grid, frac = self.calibration
        f = float(np.clip(stokes.s0 / self.total_intensity, frac[-1], frac[0]))
        return float(self._inverse(f))

    def sense(self, x0: float) -> tuple[StokesVector, float]:
        if np.isfinite(x0) and abs(x0) > self.x_range:
            raise ValueError(f"x0 = {x0} is outside the calibrated range +-{self.x_range}")
        if x0 == np.inf:
            raise ValueError("the beam is fully blocked")
        s = self.stokes(x0)
        return s, self.estimate(s)


def kinematic_sense(x0: float, sensor: KinematicSensor | None = None) -> tuple[StokesVector, float]:
    return (sensor or KinematicSensor()).sense(x0)
