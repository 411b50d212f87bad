import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvcorr.gaussian import symplectic_eigenvalues, uncertainty_min_eigenvalue
from cvcorr.random_states import (
    CSV_COLUMNS,
    SamplerSpec,
    draw,
    evaluate,
    passive_symplectic,
    random_state,
    records_to_csv,
    scatter,
    stream,
    thread_count,
    williamson_state,
)
from scipy.stats import unitary_group

from conftest import state_from_seed


def test_passive_symplectic_is_orthogonal_symplectic(rng):
    om = np.kron(np.eye(2), [[0, 1], [-1, 0]])
    for _ in range(10):
        o = passive_symplectic(unitary_group.rvs(2, random_state=rng))
        assert np.allclose(o @ o.T, np.eye(4), atol=1e-12)
        assert np.allclose(o @ om @ o.T, om, atol=1e-12)


def test_vacuum_parameters_give_vacuum():
    u = np.eye(2)
    s = williamson_state(1.0, 1.0, 0.0, 0.0, u, u)
    assert np.allclose(s.cov, np.eye(4))
    rec = evaluate(SamplerSpec(1, nu_max=1.0, squeeze_max=0.0), 0)
    for v in (rec.I, rec.D_left, rec.D_right, rec.MID, rec.AMID):
        assert abs(v) < 1e-6
    assert rec.p_classical


@settings(max_examples=40)
@given(st.integers(0, 10**6))
def test_williamson_round_trip(seed):
    nu1, nu2, r1, r2, u1, u2 = draw(stream(seed, 0))
    s = williamson_state(nu1, nu2, r1, r2, u1, u2)
    assert np.allclose(symplectic_eigenvalues(s), sorted([nu1, nu2]), rtol=1e-8)
    assert uncertainty_min_eigenvalue(s.cov) >= -1e-9
    assert 1.0 <= nu1 <= 5.0 and 1.0 <= nu2 <= 5.0


def test_streams_are_deterministic_and_independent():
    a = random_state(stream(3, 7)).cov
    assert np.array_equal(a, random_state(stream(3, 7)).cov)
    assert not np.allclose(a, random_state(stream(3, 8)).cov)
    assert not np.allclose(a, random_state(stream(4, 7)).cov)


def test_spec_validation():
    for kwargs in ({"count": 0}, {"count": 1, "nu_max": 0.5}, {"count": 1, "nu_power": 0}, {"count": 1, "seed": -1}):
        with pytest.raises(ValueError):
            SamplerSpec(**kwargs)


def test_thread_count_env(monkeypatch):
    monkeypatch.setenv("CVCORR_THREADS", "3")
    assert thread_count() == 3
    assert thread_count(0) == 1


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_record_inequalities(seed):
    rec = evaluate(SamplerSpec(1, seed=seed, compute_mid=False), 0)
    assert rec.D_left <= rec.I + 1e-9 and rec.D_right <= rec.I + 1e-9
    assert rec.D_left >= -1e-9 and rec.D_right >= -1e-9
    assert rec.AMID >= rec.D_two_way - 1e-3
    assert rec.AMID <= rec.I + 1e-9


def test_csv_layout():
    recs = scatter(SamplerSpec(3, seed=1, compute_mid=False), threads=1)
    text = records_to_csv(recs, ("# hello",))
    lines = text.splitlines()
    assert lines[0] == "# hello"
    assert lines[1] == ",".join(CSV_COLUMNS)
    assert len(lines) == 5
    assert lines[2].split(",")[7] == ""  # MID not computed
    assert [r.index for r in recs] == [0, 1, 2]


def test_classical_states_can_carry_discord(scatter_run):
    records, _ = scatter_run
    hits = [r for r in records if r.p_classical and r.D_two_way > 0.01]
    assert hits


def test_helper_state_is_physical():
    assert uncertainty_min_eigenvalue(state_from_seed(5).cov) >= -1e-9
