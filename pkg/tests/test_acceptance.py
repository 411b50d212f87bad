"""Acceptance criteria, one test each, with tolerances and time limits.

Each test records a ``[PASS]``/``[FAIL]`` line that is also repeated in the
terminal summary.
"""

import math
import time

import numpy as np
import pytest

from cvcorr.cli import main
from cvcorr.gaussian import GaussianState, ModeBipartition, is_p_classical, ppt_separable, reduce, tensor, thermal
from cvcorr.gaussian import squeezed_vacuum, two_mode_squeezed_vacuum
from cvcorr.measures import amid, entropy_function, gaussian_discord, renyi_entropy, von_neumann_entropy
from cvcorr.photon import mid, photon_distribution
from cvcorr.polarimetry import (
    KinematicSensor,
    MuellerMatrix,
    apply_mueller,
    conventional_polarimetry,
    radial_probe,
    recover_mueller_single_shot,
)
from cvcorr.protocols import DistributionConfig, run_bs_discord_entanglement, run_distribution
from cvcorr.random_states import SamplerSpec, records_to_csv, scatter
from cvcorr.vector_fields import (
    TDoFField,
    concurrence,
    entanglement_degree,
    polarization_degree,
    schmidt_weight,
    verify_entanglement_identity,
)

from conftest import SCATTER_SPEC
from oracles import geometric_probs, shannon, thermal_photon_table, tmsv_schmidt_probs, total_variation

R_GRID = [round(0.1 * k, 1) for k in range(1, 16)]


def test_c01_entropy_oracles(acceptance):
    t0 = time.perf_counter()
    p = geometric_probs(1.0)
    s_ref = shannon(p)
    r2_ref = -math.log(float(np.sum(p**2)))
    s = von_neumann_entropy(thermal(1.0))
    r2 = renyi_entropy(thermal(1.0), 2)
    dt = time.perf_counter() - t0
    err = max(abs(s - s_ref), abs(s - 2 * math.log(2)), abs(r2 - r2_ref), abs(r2 - math.log(3)))
    acceptance("1 entropy oracles", err < 1e-8 and dt < 1.0, f"max error {err:.2e}, {dt:.3f} s")


def test_c02_pure_state_discord(acceptance):
    t0 = time.perf_counter()
    errs = []
    for r in (0.2, 0.5, 1.0):
        d = gaussian_discord(two_mode_squeezed_vacuum(r), "left")
        # pure state: discord equals the entanglement entropy from the Schmidt spectrum
        errs.append(abs(d - entropy_function(math.cosh(2 * r))))
        errs.append(abs(d - shannon(tmsv_schmidt_probs(r))))
    products = [
        tensor(thermal(0.7), thermal(2.0)),
        tensor(squeezed_vacuum(0.8), thermal(1.3)),
        tensor(squeezed_vacuum(0.4, 0.3), squeezed_vacuum(1.0)),
    ]
    prod = max(max(gaussian_discord(s, "left"), gaussian_discord(s, "right")) for s in products)
    dt = time.perf_counter() - t0
    ok = max(errs) < 1e-5 and prod < 1e-6 and dt < 10
    acceptance("2 pure-state discord", ok, f"max |D - f| {max(errs):.2e}, product-state D {prod:.2e}, {dt:.2f} s")


def test_c03_photon_distribution_oracle(acceptance):
    t0 = time.perf_counter()
    n_max = 30
    tvs = []
    # both tables are truncated at n_max, so the tail mass is left out of the comparison
    for na, nb in ((1.0, 1.0), (0.5, 2.0)):
        p = photon_distribution(tensor(thermal(na), thermal(nb)), n_max, method="quadrature", check_mass=False)
        tvs.append(total_variation(p, thermal_photon_table(na, nb, n_max)))
    for r in (0.5, 0.8):
        p = photon_distribution(two_mode_squeezed_vacuum(r), n_max, method="quadrature", check_mass=False)
        tvs.append(total_variation(p, np.diag(tmsv_schmidt_probs(r, n_max + 1))))
    dt = time.perf_counter() - t0
    acceptance("3 photon-number oracle", max(tvs) < 1e-6 and dt < 60, f"max total variation {max(tvs):.2e}, {dt:.2f} s")


def test_c04_random_state_scatter(acceptance, scatter_run):
    records, dt = scatter_run
    assert len(records) == SCATTER_SPEC.count
    worst = min(r.AMID - r.D_two_way for r in records)
    a_ok = worst >= -1e-3
    resolved = [r for r in records if r.MID is not None]
    m_above = sum(r.MID > r.AMID for r in resolved)
    a_above = sum(r.AMID > r.MID for r in resolved)
    tmsv = {r: (amid(two_mode_squeezed_vacuum(r)), mid(two_mode_squeezed_vacuum(r))) for r in (0.5, 1.0)}
    b_ok = m_above > 0 and a_above > 0 and all(a > m for a, m in tmsv.values())
    frac = sum(r.MID >= r.D_two_way for r in resolved) / len(resolved)
    c_ok = frac > 0.9
    detail = (
        f"(a) min AMID - D {worst:.2e}; (b) MID > AMID in {m_above}, AMID > MID in {a_above}, "
        f"TMSV AMID/MID {', '.join(f'r={r}: {a:.3f}/{m:.3f}' for r, (a, m) in tmsv.items())}; "
        f"(c) MID >= D fraction {frac:.3f} over {len(resolved)} resolved; {dt:.0f} s"
    )
    acceptance("4 random-state scatter", a_ok and b_ok and c_ok and dt < 900, detail)


def test_c05_distribution_protocol(acceptance):
    t0 = time.perf_counter()
    ideal = [run_distribution(DistributionConfig(r, eta_b=1.0)) for r in R_GRID]
    lossy = [run_distribution(DistributionConfig(r, eta_b=0.5)) for r in R_GRID]
    ideal_ok = all(t.duan_value < 1 for t in ideal)
    lossy_ok = all(t.duan_value < 1 for t in lossy)
    mid_run = lossy[R_GRID.index(0.5)]
    window_ok = 0.35 <= mid_run.g_opt <= 0.65
    c_nu = min(s.cuts["C|AB"].min_nu for t in ideal + lossy for s in t.stages)
    c_ok = c_nu >= 1 - 1e-9
    dt = time.perf_counter() - t0
    g_range = (min(t.g_opt for t in lossy), max(t.g_opt for t in lossy))
    detail = (
        f"max ideal Duan {max(t.duan_value for t in ideal):.4f}, max lossy Duan {max(t.duan_value for t in lossy):.4f}, "
        f"lossy g_opt(r=0.5) {mid_run.g_opt:.4f} (grid range {g_range[0]:.3f}-{g_range[1]:.3f}), "
        f"min C|AB nu {c_nu:.6f}, {dt:.1f} s"
    )
    acceptance("5 distribution protocol", ideal_ok and lossy_ok and window_ok and c_ok and dt < 30, detail)


def test_c06_bs_discord_protocol(acceptance):
    t0 = time.perf_counter()
    tr = run_bs_discord_entanglement(2.0, -1.0)
    inputs_ok = all(v["p_classical"] and v["min_quadrature_variance"] >= 1 - 1e-12 for v in tr.extra["inputs"].values())
    ab_sep = tr.extra["reduced_AB"]["separable"]
    ent = tr.entangled_cuts()
    control = run_bs_discord_entanglement(2.0, 0.0)
    control_ent = control.entangled_cuts() + ([] if control.extra["reduced_AB"]["separable"] else ["A|B"])
    dt = time.perf_counter() - t0
    ok = inputs_ok and ab_sep and bool(ent) and not control_ent and dt < 10
    detail = f"inputs classical {inputs_ok}, AB separable {ab_sep}, entangled cuts {ent}, control entangled {control_ent}, {dt:.2f} s"
    acceptance("6 beam-splitter protocol", ok, detail)


def test_c07_vector_field_identities(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        f = TDoFField.random(rng)
        g = f.coherence()
        p = polarization_degree(g)
        e = entanglement_degree(g)
        k = schmidt_weight(f)
        c = concurrence(f)
        worst = max(
            worst,
            abs(p**2 + c**2 - 1),
            abs(p - math.sqrt(1 - e**2)),
            verify_entanglement_identity(g),
            abs(p**2 - (1 - 2 * (1 - 1 / k))),
        )
    dt = time.perf_counter() - t0
    acceptance("7 vector-field identities", worst < 1e-10 and dt < 5, f"max residual {worst:.2e} over 1000 fields, {dt:.2f} s")


def test_c08_mueller_round_trip(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    err_obj = err_conv = 0.0
    for _ in range(20):
        m = MuellerMatrix.random_physical(rng)
        single = recover_mueller_single_shot(apply_mueller(radial_probe(), m))
        conv = conventional_polarimetry(m)
        err_obj = max(err_obj, float(np.max(np.abs(single.m - m.m))))
        err_conv = max(err_conv, float(np.max(np.abs(single.m - conv.m))))
    dt = time.perf_counter() - t0
    ok = err_obj < 1e-8 and err_conv < 1e-8 and dt < 10
    acceptance("8 Mueller round trip", ok, f"max error vs object {err_obj:.2e}, vs four-probe {err_conv:.2e}, {dt:.2f} s")


def test_c09_kinematic_sensing(acceptance):
    t0 = time.perf_counter()
    sensor = KinematicSensor()
    errs = {x0: abs(sensor.sense(x0)[1] - x0) for x0 in (-1.0, -0.5, 0.0, 0.3, 1.0)}
    dt = time.perf_counter() - t0
    worst = max(errs.values())
    acceptance("9 kinematic sensing", worst < 0.01 and dt < 30, f"max |x0_hat - x0| {worst:.2e} waist, {dt:.2f} s")


def test_c10_reproducibility(acceptance, tmp_path, monkeypatch):
    spec = SamplerSpec(count=6, seed=11)
    one = records_to_csv(scatter(spec, threads=1)).encode()
    again = records_to_csv(scatter(spec, threads=1)).encode()
    two = records_to_csv(scatter(spec, threads=2)).encode()
    out = tmp_path / "scatter.csv"
    files = []
    for threads in ("1", "2"):
        monkeypatch.setenv("CVCORR_THREADS", threads)
        assert main(["scatter", "--n", "6", "--seed", "11", "--out", str(out)]) == 0
        files.append(out.read_bytes())
    ok = one == again == two and files[0] == files[1]
    acceptance("10 reproducibility", ok, f"CSV identical across runs and 1 vs 2 workers: {ok} ({len(one)} bytes)")
