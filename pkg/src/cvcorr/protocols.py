"""Entanglement distribution with a separable carrier, and entanglement
extracted at a beam splitter from classically correlated inputs.

Mode labels: A = 0, B = 1, C = 2. Variances are in vacuum units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channels import NoiseInjection, add_classical_noise, attenuate, beam_splitter
from .gaussian import GaussianState, ModeBipartition, PPTResult, is_p_classical, ppt_separable, reduce
from .measures import discord_measuring
from .optimize import golden_section

MODE_NAMES = "ABC"
ONE_VS_TWO_CUTS = {name: ModeBipartition.split(3, (k,)) for k, name in enumerate(MODE_NAMES)}
_GAIN_GRID = 401


# -- Duan criterion -----------------------------------------------------------


def duan_value(state: GaussianState, g: float, modes: tuple[int, int] = (0, 1)) -> float:
    """``Var(g x_a + x_b) Var(g p_a - p_b) / (g^2 + 1)^2``; below 1 certifies entanglement."""
    a, b = modes
    n = 2 * state.n_modes
    u = np.zeros(n)
    v = np.zeros(n)
    u[2 * a], u[2 * b] = g, 1.0
    v[2 * a + 1], v[2 * b + 1] = g, -1.0
    return float((u @ state.cov @ u) * (v @ state.cov @ v) / (g * g + 1.0) ** 2)


@dataclass(frozen=True)
class GainResult:
    g: float
    value: float
    bracketed: bool


def optimize_gain(
    state: GaussianState, modes: tuple[int, int] = (0, 1), gain_min: float = 0.0, gain_max: float = 3.0, tol: float = 1e-8
) -> GainResult:
    """Minimise :func:`duan_value` over ``g``.

    A grid scan brackets the minimum, golden-section search refines it. If
    the grid minimum sits on an end of the range, that end is returned with
    ``bracketed=False``.
    """
    if not gain_max > gain_min:
        raise ValueError("gain range is empty")
    fun = lambda g: duan_value(state, g, modes)  # noqa: E731
    grid = np.linspace(gain_min, gain_max, _GAIN_GRID)
    vals = np.array([fun(g) for g in grid])
    k = int(np.argmin(vals))
    if k == 0 or k == len(grid) - 1:
        return GainResult(float(grid[k]), float(vals[k]), False)
    g, val = golden_section(fun, grid[k - 1], grid[k + 1], tol=tol)
    if vals[k] < val:
        g, val = grid[k], vals[k]
    return GainResult(float(g), float(val), True)


# -- traces -----------------------------------------------------------------


@dataclass(frozen=True)
class Stage:
    name: str
    state: GaussianState
    cuts: dict[str, PPTResult]
    discord_c: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "state": self.state.to_dict(),
            "cuts": {k: {"min_nu": v.min_nu, "separable": v.separable, "conclusive": v.conclusive} for k, v in self.cuts.items()},
            "discord_c_measured": self.discord_c,
        }


@dataclass(frozen=True)
class ProtocolTrace:
    protocol: str
    parameters: dict
    stages: tuple[Stage, ...]
    g_opt: Optional[float] = None
    duan_value: Optional[float] = None
    gain_bracketed: Optional[bool] = None
    extra: dict = field(default_factory=dict)

    def stage(self, name: str) -> Stage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def final(self) -> Stage:
        return self.stages[-1]

    def entangled_cuts(self, stage: Optional[str] = None) -> list[str]:
        s = self.final if stage is None else self.stage(stage)
        return [k for k, v in s.cuts.items() if not v.separable]

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "parameters": self.parameters,
            "stages": [s.to_dict() for s in self.stages],
            "g_opt": self.g_opt,
            "duan_value": self.duan_value,
            "gain_bracketed": self.gain_bracketed,
            **self.extra,
        }


def _cut_label(cut: ModeBipartition) -> str:
    side = lambda s: "".join(MODE_NAMES[m] for m in s)  # noqa: E731
    return f"{side(cut.left)}|{side(cut.right)}"


def _stage(name: str, state: GaussianState, with_discord: bool = True) -> Stage:
    cuts = {_cut_label(c): ppt_separable(state, c) for c in ONE_VS_TWO_CUTS.values()}
    disc = discord_measuring(state, 2).value if with_discord else None
    return Stage(name, state, cuts, disc)


# -- distribution by a separable carrier ---------------------------------------


@dataclass(frozen=True)
class DistributionConfig:
    """``V_d`` defaults to ``2 (exp(2r) - 1)``, the displacement variance used
    in both the x and p noise variables."""

    r: float
    V_d: Optional[float] = None
    eta_b: float = 0.5
    gain_min: float = 0.0
    gain_max: float = 3.0

    def __post_init__(self):
        if not (np.isfinite(self.r) and self.r >= 0):
            raise ValueError("r must be finite and non-negative")
        if self.V_d is None:
            object.__setattr__(self, "V_d", 2.0 * math.expm1(2 * self.r))
        if not (np.isfinite(self.V_d) and self.V_d >= 0):
            raise ValueError("V_d must be finite and non-negative")
        if not 0.0 <= self.eta_b <= 1.0:
            raise ValueError("eta_b must lie in [0, 1]")
        if not self.gain_max > self.gain_min:
            raise ValueError("gain range is empty")


def distribution_noise(V_d: float) -> NoiseInjection:
    """Covariance of the correlated displacements on (A, B, C).

    Two independent variables ``x, p`` of variance ``V_d`` act as
    ``p_A -= p``, ``x_B -= sqrt(2) x``, ``p_B -= sqrt(2) p``, ``x_C += x``.
    """
    coupling = np.zeros((6, 2))
    coupling[1, 1] = -1.0
    coupling[2, 0] = -math.sqrt(2.0)
    coupling[3, 1] = -math.sqrt(2.0)
    coupling[4, 0] = 1.0
    return NoiseInjection.from_displacement_map(coupling, [V_d, V_d])


def prepared_state(config: DistributionConfig) -> GaussianState:
    """A momentum-squeezed, B vacuum, C position-squeezed, plus correlated noise."""
    e = math.exp(2 * config.r)
    cov = np.diag([e, 1 / e, 1.0, 1.0, 1 / e, e])
    return add_classical_noise(GaussianState(np.zeros(6), cov), distribution_noise(config.V_d))


def run_distribution(config: DistributionConfig) -> ProtocolTrace:
    """A and C meet on a balanced beam splitter, C travels to B, B and C meet
    on a second one, then B suffers loss ``eta_b``."""
    s0 = prepared_state(config)
    s1 = beam_splitter(s0, 0, 2)
    s2 = attenuate(beam_splitter(s1, 1, 2), 1, config.eta_b)
    gain = optimize_gain(reduce(s2, (0, 1)), gain_min=config.gain_min, gain_max=config.gain_max)
    return ProtocolTrace(
        protocol="distribute",
        parameters={"r": config.r, "V_d": config.V_d, "eta_b": config.eta_b, "gain_min": config.gain_min, "gain_max": config.gain_max},
        stages=(_stage("prepared", s0), _stage("after_bs1", s1), _stage("after_bs2", s2)),
        g_opt=gain.g,
        duan_value=gain.value,
        gain_bracketed=gain.bracketed,
    )


# -- entanglement from discord at a beam splitter ------------------------------


def bs_discord_prepared(nbar: float, noise_correlation: float) -> GaussianState:
    """Vacuum A, and squeezed B and C whose squeezed quadratures carry
    correlated classical noise that brings each mode back to thermal.

    B is x-squeezed with noise on ``x_B``, C is p-squeezed with noise on
    ``p_C``. Both noises have variance ``exp(2r) - exp(-2r)`` where
    ``exp(2r) = 2 nbar + 1``, so each of B and C is locally thermal with
    mean photon number ``nbar``.
    """
    if not (np.isfinite(nbar) and nbar > 0):
        raise ValueError("nbar must be positive")
    if not -1.0 <= noise_correlation <= 1.0:
        raise ValueError("noise correlation must lie in [-1, 1]")
    e = 2 * nbar + 1
    cov = np.diag([1.0, 1.0, 1 / e, e, e, 1 / e])
    v = e - 1 / e
    noise = np.zeros((6, 6))
    noise[2, 2] = noise[5, 5] = v
    noise[2, 5] = noise[5, 2] = noise_correlation * v
    return add_classical_noise(GaussianState(np.zeros(6), cov), noise)


def run_bs_discord_entanglement(nbar: float, noise_correlation: float) -> ProtocolTrace:
    s0 = bs_discord_prepared(nbar, noise_correlation)
    s1 = beam_splitter(s0, 0, 1)
    inputs = {}
    for name, mode in (("A_in", 0), ("B_in", 1)):
        local = reduce(s0, (mode,))
        inputs[name] = {
            "p_classical": is_p_classical(local),
            "min_quadrature_variance": float(np.linalg.eigvalsh(local.cov)[0]),
        }
    ab = ppt_separable(reduce(s1, (0, 1)), ModeBipartition((0,), (1,)))
    trace = ProtocolTrace(
        protocol="bs",
        parameters={"nbar": nbar, "noise_correlation": noise_correlation},
        stages=(_stage("prepared", s0), _stage("after_bs", s1)),
        extra={
            "inputs": inputs,
            "reduced_AB": {"min_nu": ab.min_nu, "separable": ab.separable},
        },
    )
    return trace
