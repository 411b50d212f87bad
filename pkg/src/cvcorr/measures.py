"""Entropies and correlation quantifiers of Gaussian states.

All entropies are in nats. Discord and Gaussian AMID are optimised over pure
single-mode general-dyne measurements, parametrised by a seed covariance
``R(phi) diag(lam, 1/lam) R(phi)^T`` with ``ln(lam)`` in ``[-15, 15]``;
the interval ends stand in for homodyne detection.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .gaussian import GaussianState, ModeBipartition, reduce, symplectic_eigenvalues_of
from .optimize import multistart_nelder_mead

LOG_LAMBDA_BOUND = 15.0
ZERO_DISCORD_ATOL = 1e-6
CLAMP_ATOL = 1e-6
_OPT_SEED = 20160901


def entropy_function(nu):
    r"""Entropy of a single mode with symplectic eigenvalue ``nu``.

    ``f(nu) = (nu+1)/2 ln((nu+1)/2) - (nu-1)/2 ln((nu-1)/2)``, with ``nu``
    clamped to 1 so roundoff below the pure-state value gives 0.
    """
    nu = np.maximum(np.asarray(nu, dtype=float), 1.0)
    a = (nu + 1) / 2
    b = (nu - 1) / 2
    with np.errstate(divide="ignore", invalid="ignore"):
        blogb = np.where(b > 0, b * np.log(np.where(b > 0, b, 1.0)), 0.0)
    out = a * np.log(a) - blogb
    return float(out) if out.ndim == 0 else out


def _entropy_of_cov(cov: np.ndarray) -> float:
    if cov.shape == (2, 2):
        return entropy_function(math.sqrt(max(cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0], 1.0)))
    return float(np.sum(entropy_function(symplectic_eigenvalues_of(cov))))


def von_neumann_entropy(state: GaussianState) -> float:
    return _entropy_of_cov(state.cov)


def renyi_entropy(state: GaussianState, alpha: float) -> float:
    """Renyi-``alpha`` entropy; ``alpha == 1`` falls back to von Neumann."""
    if alpha <= 0:
        raise ValueError("Renyi order must be positive")
    if alpha == 1:
        return von_neumann_entropy(state)
    nu = symplectic_eigenvalues_of(state.cov)
    nu = np.maximum(nu, 1.0)
    if alpha == 2:
        return float(np.sum(np.log(nu)))
    if np.isinf(alpha):
        return float(np.sum(np.log((nu + 1) / 2)))
    # ((nu+1)^a - (nu-1)^a) / 2^a, written to stay finite for large nu
    terms = alpha * np.log((nu + 1) / 2) + np.log1p(-((nu - 1) / (nu + 1)) ** alpha)
    return float(np.sum(terms) / (alpha - 1))


def _default_cut(state: GaussianState, bipartition: Optional[ModeBipartition]) -> ModeBipartition:
    if bipartition is None:
        if state.n_modes != 2:
            raise ValueError("a bipartition is required for states with more than two modes")
        bipartition = ModeBipartition((0,), (1,))
    bipartition.check(state.n_modes)
    return bipartition


def mutual_information(state: GaussianState, bipartition: Optional[ModeBipartition] = None) -> float:
    cut = _default_cut(state, bipartition)
    return (
        von_neumann_entropy(reduce(state, cut.left))
        + von_neumann_entropy(reduce(state, cut.right))
        - von_neumann_entropy(state)
    )


def renyi2_mutual_information(state: GaussianState, bipartition: Optional[ModeBipartition] = None) -> float:
    cut = _default_cut(state, bipartition)
    s2 = lambda s: 0.5 * math.log(np.linalg.det(s.cov))  # noqa: E731
    return s2(reduce(state, cut.left)) + s2(reduce(state, cut.right)) - s2(state)


# -- general-dyne measurements ------------------------------------------------


def _seed_entries(log_lam: float, phi: float) -> tuple[float, float, float]:
    a, b = math.exp(log_lam), math.exp(-log_lam)
    c, s = math.cos(phi), math.sin(phi)
    return a * c * c + b * s * s, (a - b) * c * s, a * s * s + b * c * c


def _seed_cov(log_lam: float, phi: float) -> np.ndarray:
    g00, g01, g11 = _seed_entries(log_lam, phi)
    return np.array([[g00, g01], [g01, g11]])


@dataclass(frozen=True)
class GaussianMeasurement:
    """Pure general-dyne POVM on one mode, given by its seed covariance."""

    lam: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.lam > 0 or not np.isfinite(self.lam):
            raise ValueError("seed squeezing lam must be positive and finite")
        object.__setattr__(self, "phi", float(self.phi) % math.pi)

    @classmethod
    def heterodyne(cls) -> "GaussianMeasurement":
        return cls(1.0, 0.0)

    @classmethod
    def homodyne(cls, phi: float = 0.0) -> "GaussianMeasurement":
        """Sharp measurement of the quadrature at angle ``phi`` (boundary of the range)."""
        return cls(math.exp(-LOG_LAMBDA_BOUND), phi)

    @property
    def seed_cov(self) -> np.ndarray:
        return _seed_cov(math.log(self.lam), self.phi)


def _split(cov: np.ndarray, measured: int):
    n = cov.shape[0] // 2
    keep = [q for m in range(n) if m != measured for q in (2 * m, 2 * m + 1)]
    meas = [2 * measured, 2 * measured + 1]
    return cov[np.ix_(keep, keep)], cov[np.ix_(keep, meas)], cov[np.ix_(meas, meas)]


def _schur(a: np.ndarray, c: np.ndarray, b: np.ndarray, seed: np.ndarray) -> np.ndarray:
    m = b + seed
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    assert det > 0, "measured block plus seed must be positive definite"
    inv = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det
    return a - c @ inv @ c.T


def conditional_cm(state: GaussianState, measured_mode: int, meas: GaussianMeasurement) -> np.ndarray:
    """Outcome-independent covariance of the unmeasured modes after ``meas``."""
    if not 0 <= measured_mode < state.n_modes or state.n_modes < 2:
        raise ValueError("measured mode out of range")
    a, c, b = _split(state.cov, measured_mode)
    return _schur(a, c, b, meas.seed_cov)


def _measurement_starts(rng: np.random.Generator, n_random: int = 2) -> np.ndarray:
    # (ln lam, phi) and (-ln lam, phi + pi/2) describe the same POVM, so
    # non-negative ln lam already covers every orientation
    grid = [(0.0, 0.0)]
    for u in (3.0, 10.0):
        for phi in (0.0, 0.25 * math.pi, 0.5 * math.pi, 0.75 * math.pi):
            grid.append((u, phi))
    rand = np.column_stack(
        [rng.uniform(-LOG_LAMBDA_BOUND / 2, LOG_LAMBDA_BOUND / 2, n_random), rng.uniform(0, math.pi, n_random)]
    )
    return np.vstack([np.array(grid), rand])


@dataclass(frozen=True)
class DiscordResult:
    value: float
    measurement: GaussianMeasurement
    conditional_entropy: float
    nfev: int


def discord_measuring(state: GaussianState, measured_mode: int) -> DiscordResult:
    """Gaussian discord when the single mode ``measured_mode`` is measured.

    The unmeasured side may hold several modes.
    """
    if state.n_modes < 2:
        raise ValueError("discord needs at least two modes")
    a, c, b = _split(state.cov, measured_mode)
    s_meas = _entropy_of_cov(b)
    s_total = _entropy_of_cov(state.cov)

    if a.shape == (2, 2):
        a00, a01, a11 = a[0, 0], a[0, 1], a[1, 1]
        c00, c01, c10, c11 = c[0, 0], c[0, 1], c[1, 0], c[1, 1]
        b00, b01, b11 = b[0, 0], b[0, 1], b[1, 1]

        def objective(x):
            # det of the 2x2 Schur complement, written out for speed
            u, phi = x
            ea, eb = math.exp(u), math.exp(-u)
            co, si = math.cos(phi), math.sin(phi)
            m00 = b00 + ea * co * co + eb * si * si
            m11 = b11 + ea * si * si + eb * co * co
            m01 = b01 + (ea - eb) * co * si
            det = m00 * m11 - m01 * m01
            i00, i01, i11 = m11 / det, -m01 / det, m00 / det
            # c @ inv
            t00 = c00 * i00 + c01 * i01
            t01 = c00 * i01 + c01 * i11
            t10 = c10 * i00 + c11 * i01
            t11 = c10 * i01 + c11 * i11
            g00 = a00 - (t00 * c00 + t01 * c01)
            g01 = a01 - (t00 * c10 + t01 * c11)
            g11 = a11 - (t10 * c10 + t11 * c11)
            return g00 * g11 - g01 * g01

        to_entropy = lambda d: entropy_function(math.sqrt(max(d, 1.0)))  # noqa: E731
    else:

        def objective(x):
            return _entropy_of_cov(_schur(a, c, b, _seed_cov(*x)))

        to_entropy = lambda v: v  # noqa: E731

    rng = np.random.default_rng(_OPT_SEED)
    bounds = [(-LOG_LAMBDA_BOUND, LOG_LAMBDA_BOUND), (None, None)]
    res = multistart_nelder_mead(objective, _measurement_starts(rng), bounds=bounds)
    cond = to_entropy(res.fun)
    value = s_meas - s_total + cond
    if value > -CLAMP_ATOL:
        value = max(value, 0.0)
    u, phi = res.x
    return DiscordResult(value, GaussianMeasurement(math.exp(u), phi), cond, int(res.nfev))


def gaussian_discord(state: GaussianState, direction: str = "left") -> float:
    """Two-mode Gaussian discord.

    ``"left"`` is D<- (mode 1 is measured, information about mode 0 is
    inferred); ``"right"`` is D-> (mode 0 measured).
    """
    if state.n_modes != 2:
        raise ValueError("gaussian_discord supports two-mode states only")
    if direction not in ("left", "right"):
        raise ValueError("direction must be 'left' or 'right'")
    return discord_measuring(state, 1 if direction == "left" else 0).value


def gaussian_classical_mutual_information(cov: np.ndarray, meas_a: GaussianMeasurement, meas_b: GaussianMeasurement) -> float:
    """Shannon mutual information of joint general-dyne outcomes on two modes."""
    sigma = np.array(cov, dtype=float)
    sigma[:2, :2] += meas_a.seed_cov
    sigma[2:, 2:] += meas_b.seed_cov
    return 0.5 * math.log(np.linalg.det(sigma[:2, :2]) * np.linalg.det(sigma[2:, 2:]) / np.linalg.det(sigma))


@dataclass(frozen=True)
class AmidResult:
    value: float
    classical_information: float
    measurements: tuple[GaussianMeasurement, GaussianMeasurement]
    nfev: int


def amid_result(state: GaussianState) -> AmidResult:
    if state.n_modes != 2:
        raise ValueError("Gaussian AMID supports two-mode states only")
    g = state.cov
    a00, a01, a11 = g[0, 0], g[0, 1], g[1, 1]
    b00, b01, b11 = g[2, 2], g[2, 3], g[3, 3]
    c00, c01, c10, c11 = g[0, 2], g[0, 3], g[1, 2], g[1, 3]

    def neg_info(x):
        ua, pa, ub, pb = x
        m00, m01, m11 = _seed_entries(ua, pa)
        n00, n01, n11 = _seed_entries(ub, pb)
        m00, m01, m11 = a00 + m00, a01 + m01, a11 + m11
        n00, n01, n11 = b00 + n00, b01 + n01, b11 + n11
        det_a = m00 * m11 - m01 * m01
        det_b = n00 * n11 - n01 * n01
        i00, i01, i11 = m11 / det_a, -m01 / det_a, m00 / det_a
        # schur = N - C^T M^{-1} C
        t00 = i00 * c00 + i01 * c10
        t01 = i00 * c01 + i01 * c11
        t10 = i01 * c00 + i11 * c10
        t11 = i01 * c01 + i11 * c11
        s00 = n00 - (c00 * t00 + c10 * t10)
        s01 = n01 - (c00 * t01 + c10 * t11)
        s11 = n11 - (c01 * t01 + c11 * t11)
        return -0.5 * math.log(det_b / (s00 * s11 - s01 * s01))

    single = [(0.0, 0.0), (10.0, 0.0), (10.0, 0.5 * math.pi)]
    grid = [(*sa, *sb) for sa in single for sb in single]
    rng = np.random.default_rng(_OPT_SEED)
    rand = np.column_stack(
        [
            rng.uniform(-LOG_LAMBDA_BOUND / 2, LOG_LAMBDA_BOUND / 2, 3),
            rng.uniform(0, math.pi, 3),
            rng.uniform(-LOG_LAMBDA_BOUND / 2, LOG_LAMBDA_BOUND / 2, 3),
            rng.uniform(0, math.pi, 3),
        ]
    )
    bounds = [(-LOG_LAMBDA_BOUND, LOG_LAMBDA_BOUND), (None, None)] * 2
    res = multistart_nelder_mead(neg_info, np.vstack([np.array(grid), rand]), bounds=bounds)
    info_c = -res.fun
    value = mutual_information(state) - info_c
    if value > -CLAMP_ATOL:
        value = max(value, 0.0)
    ua, pa, ub, pb = res.x
    meas = (GaussianMeasurement(math.exp(ua), pa), GaussianMeasurement(math.exp(ub), pb))
    return AmidResult(value, info_c, meas, int(res.nfev))


def amid(state: GaussianState) -> float:
    """Gaussian ameliorated measurement-induced disturbance."""
    return amid_result(state).value


def classify(state: GaussianState, discords: Optional[tuple[float, float]] = None) -> str:
    """``"Product"``, ``"QC"`` or ``"QQ"`` from the two one-way discords."""
    if discords is None:
        discords = (gaussian_discord(state, "left"), gaussian_discord(state, "right"))
    zero = sum(d < ZERO_DISCORD_ATOL for d in discords)
    return {2: "Product", 1: "QC", 0: "QQ"}[zero]


@dataclass(frozen=True)
class CorrelationReport:
    mutual_info: float
    discord_left: float
    discord_right: float
    discord_two_way: float
    mid: Optional[float]
    amid: float
    p_classical: bool
    classification: str

    def to_dict(self) -> dict:
        return asdict(self)


def correlation_report(state: GaussianState, n_max: Optional[int] = None, with_mid: bool = True) -> CorrelationReport:
    """Every two-mode quantifier for one state.

    ``mid`` is ``None`` when it is skipped or the photon-number distribution
    cannot be resolved within the truncation limit.
    """
    from .gaussian import is_p_classical
    from .photon import TruncationError, mid

    if state.n_modes != 2:
        raise ValueError("correlation reports are defined for two-mode states")
    d_left = gaussian_discord(state, "left")
    d_right = gaussian_discord(state, "right")
    m = None
    if with_mid:
        try:
            m = mid(state, n_max=n_max)
        except TruncationError:
            m = None
    return CorrelationReport(
        mutual_info=max(mutual_information(state), 0.0),
        discord_left=d_left,
        discord_right=d_right,
        discord_two_way=max(d_left, d_right),
        mid=m,
        amid=amid(state),
        p_classical=is_p_classical(state),
        classification=classify(state, (d_left, d_right)),
    )
