"""Random mixed two-mode Gaussian states and the measure-comparison scatter.

States are built in Williamson form, ``cov = S diag(nu1, nu1, nu2, nu2) S^T``,
with ``S = O1 Z(r1, r2) O2`` made of two Haar-random passive transformations
around a pair of single-mode squeezers.

Every state index draws from its own counter-based stream seeded by
``(seed, index)``, so results do not depend on how the work is split across
processes.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np
from scipy.stats import unitary_group

from .gaussian import GaussianState, is_p_classical
from .measures import amid, gaussian_discord, mutual_information
from .photon import TruncationError, mid

THREADS_ENV = "CVCORR_THREADS"
CSV_COLUMNS = ("index", "nu1", "nu2", "I", "D_left", "D_right", "D_two_way", "MID", "AMID", "p_classical")
_XXPP_TO_XPXP = [0, 2, 1, 3]


@dataclass(frozen=True)
class SamplerSpec:
    count: int
    seed: int = 0
    nu_max: float = 5.0
    squeeze_max: float = 1.5
    nu_power: float = 3.0
    compute_mid: bool = True
    compute_amid: bool = True
    n_max: Optional[int] = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be positive")
        if self.nu_max < 1:
            raise ValueError("nu_max must be at least 1")
        if self.squeeze_max < 0:
            raise ValueError("squeeze_max must be non-negative")
        if self.nu_power <= 0:
            raise ValueError("nu_power must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


def stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def passive_symplectic(u: np.ndarray) -> np.ndarray:
    """Orthogonal symplectic (``x1, p1, x2, p2`` order) of a 2x2 unitary acting on ``a``."""
    re, im = u.real, u.imag
    xxpp = np.block([[re, -im], [im, re]])
    return xxpp[np.ix_(_XXPP_TO_XPXP, _XXPP_TO_XPXP)]


def williamson_state(nu1: float, nu2: float, r1: float, r2: float, u1: np.ndarray, u2: np.ndarray) -> GaussianState:
    z = np.diag([math.exp(-r1), math.exp(r1), math.exp(-r2), math.exp(r2)])
    s = passive_symplectic(u1) @ z @ passive_symplectic(u2)
    cov = s @ np.diag([nu1, nu1, nu2, nu2]) @ s.T
    return GaussianState(np.zeros(4), 0.5 * (cov + cov.T))


def draw(rng: np.random.Generator, nu_max: float = 5.0, squeeze_max: float = 1.5, nu_power: float = 3.0):
    """Williamson parameters ``(nu1, nu2, r1, r2, u1, u2)`` for one state.

    ``nu = 1 + (nu_max - 1) u**nu_power`` with ``u`` uniform, so powers above
    one put more weight on nearly pure states.
    """
    nu1, nu2 = 1.0 + (nu_max - 1.0) * rng.uniform(0.0, 1.0, size=2) ** nu_power
    r1, r2 = rng.uniform(0.0, squeeze_max, size=2)
    u1 = unitary_group.rvs(2, random_state=rng)
    u2 = unitary_group.rvs(2, random_state=rng)
    return float(nu1), float(nu2), float(r1), float(r2), u1, u2


def random_state(
    rng: np.random.Generator, nu_max: float = 5.0, squeeze_max: float = 1.5, nu_power: float = 3.0
) -> GaussianState:
    return williamson_state(*draw(rng, nu_max, squeeze_max, nu_power))


@dataclass(frozen=True)
class ScatterRecord:
    index: int
    nu1: float
    nu2: float
    I: float  # noqa: E741
    D_left: float
    D_right: float
    D_two_way: float
    MID: Optional[float]
    AMID: Optional[float]
    p_classical: bool


def evaluate(spec: SamplerSpec, index: int) -> ScatterRecord:
    nu1, nu2, r1, r2, u1, u2 = draw(stream(spec.seed, index), spec.nu_max, spec.squeeze_max, spec.nu_power)
    state = williamson_state(nu1, nu2, r1, r2, u1, u2)
    d_left = gaussian_discord(state, "left")
    d_right = gaussian_discord(state, "right")
    m = None
    if spec.compute_mid:
        try:
            m = mid(state, n_max=spec.n_max)
        except TruncationError:
            m = None
    return ScatterRecord(
        index=index,
        nu1=nu1,
        nu2=nu2,
        I=max(mutual_information(state), 0.0),
        D_left=d_left,
        D_right=d_right,
        D_two_way=max(d_left, d_right),
        MID=m,
        AMID=amid(state) if spec.compute_amid else None,
        p_classical=is_p_classical(state),
    )


def thread_count(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def scatter(spec: SamplerSpec, threads: Optional[int] = None) -> list[ScatterRecord]:
    """One record per state, ordered by index whatever the worker count."""
    workers = min(thread_count(threads), spec.count)
    indices = range(spec.count)
    if workers == 1:
        return [evaluate(spec, i) for i in indices]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate, [spec] * spec.count, indices, chunksize=max(1, spec.count // (8 * workers))))


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def records_to_csv(records: list[ScatterRecord], header_lines: tuple[str, ...] = ()) -> str:
    buf = io.StringIO()
    for line in header_lines:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = asdict(rec)
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


assert tuple(f.name for f in fields(ScatterRecord)) == CSV_COLUMNS
