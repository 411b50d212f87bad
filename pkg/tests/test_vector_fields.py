import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import unitary_group

from cvcorr.vector_fields import (
    CoherenceMatrix4,
    TDoFField,
    coherence_and_predictability,
    coherence_from_stokes,
    coherence_matrix,
    concurrence,
    entanglement_degree,
    polarization_degree,
    polarization_stokes,
    schmidt_probabilities,
    schmidt_weight,
    tdof_stokes,
    verify_entanglement_identity,
)

seeds = st.integers(0, 2**32 - 1)


def field_from_seed(seed):
    return TDoFField.random(np.random.default_rng(seed))


def test_product_field_is_separable_and_polarized():
    f = TDoFField.product([0.6, 0.8j], [1, 1j])
    g = f.normalized().coherence()
    assert entanglement_degree(g) == pytest.approx(0.0, abs=1e-12)
    assert polarization_degree(g) == pytest.approx(1.0)
    assert schmidt_weight(f) == pytest.approx(1.0)
    assert concurrence(f) == pytest.approx(0.0, abs=1e-12)


def test_radial_beam():
    f = TDoFField.radial()
    g = f.coherence()
    assert np.allclose(tdof_stokes(g), np.diag([1.0, 1.0, -1.0, 1.0]), atol=1e-14)
    assert entanglement_degree(g) == pytest.approx(1.0)
    assert polarization_degree(g) == pytest.approx(0.0, abs=1e-14)
    assert schmidt_weight(f) == pytest.approx(2.0)
    assert concurrence(f) == pytest.approx(1.0)


def test_class_bell_state():
    f = TDoFField.class_bell()
    g = f.coherence()
    mu, delta = coherence_and_predictability(g, "spatial")
    assert abs(mu) == pytest.approx(0.0, abs=1e-14) and delta == pytest.approx(0.0, abs=1e-14)
    assert entanglement_degree(g) == pytest.approx(1.0)
    s = polarization_stokes(g)
    assert s.as_array() == pytest.approx([1.0, 0.0, 0.0, 0.0], abs=1e-14)


def test_stokes_conventions_for_simple_polarizations():
    cases = {
        (1, 0): [1, 1, 0, 0],
        (0, 1): [1, -1, 0, 0],
        (2**-0.5, 2**-0.5): [1, 0, 1, 0],
        (2**-0.5, 1j * 2**-0.5): [1, 0, 0, 1],
    }
    for pol, expected in cases.items():
        g = TDoFField.product([1, 0], pol).coherence()
        assert polarization_stokes(g).as_array() == pytest.approx(expected, abs=1e-14)


@given(seeds)
def test_stokes_table_is_invertible(seed):
    rng = np.random.default_rng(seed)
    fields = [TDoFField.random(rng) for _ in range(3)]
    g = coherence_matrix(fields, rng.dirichlet(np.ones(3)))
    assert np.allclose(coherence_from_stokes(tdof_stokes(g)), g.matrix, atol=1e-12)


@given(seeds)
def test_pure_field_identities(seed):
    f = field_from_seed(seed)
    g = f.coherence()
    e = entanglement_degree(g)
    p = polarization_degree(g)
    k = schmidt_weight(f)
    c = concurrence(f)
    assert abs(p**2 + c**2 - 1) < 1e-10
    assert abs(p - np.sqrt(1 - e**2)) < 1e-10
    assert verify_entanglement_identity(g) < 1e-10
    assert verify_entanglement_identity(g, "polarization") < 1e-10
    assert abs(p**2 - (1 - 2 * (1 - 1 / k))) < 1e-10
    assert 1 - 1e-12 <= k <= 2 + 1e-12


@given(seeds)
def test_local_unitaries_preserve_entanglement(seed):
    rng = np.random.default_rng(seed)
    f = TDoFField.random(rng)
    us = unitary_group.rvs(2, random_state=rng)
    up = unitary_group.rvs(2, random_state=rng)
    g = TDoFField(np.kron(us, up) @ f.amplitudes)
    assert entanglement_degree(g.coherence()) == pytest.approx(entanglement_degree(f.coherence()), abs=1e-10)
    assert schmidt_weight(g) == pytest.approx(schmidt_weight(f), rel=1e-10)


@given(seeds)
def test_mixtures_are_less_polarized(seed):
    rng = np.random.default_rng(seed)
    fields = [TDoFField.random(rng) for _ in range(2)]
    g = coherence_matrix(fields, [0.5, 0.5])
    assert 0.0 <= polarization_degree(g) <= 1.0 + 1e-12
    assert 0.0 <= entanglement_degree(g) <= 1.0


def test_schmidt_probabilities_sum_to_one(rng):
    p = schmidt_probabilities(TDoFField.random(rng))
    assert p.sum() == pytest.approx(1.0) and np.all(p >= 0)


def test_validation():
    with pytest.raises(ValueError):
        TDoFField([0, 0, 0, 0])
    with pytest.raises(ValueError):
        TDoFField([1, 0, 0])
    with pytest.raises(ValueError):
        TDoFField([1, 0, 0, 0], basis="lg")
    with pytest.raises(ValueError):
        CoherenceMatrix4(np.diag([1.0, -1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        CoherenceMatrix4(np.triu(np.ones((4, 4))))
    with pytest.raises(ValueError):
        coherence_and_predictability(TDoFField([1, 0, 0, 0]).coherence())
    with pytest.raises(ValueError):
        coherence_matrix([TDoFField.radial()], [0.5])


def test_dark_basis_state_identity():
    g = TDoFField.product([1, 0], [0.6, 0.8]).coherence()
    assert verify_entanglement_identity(g) < 1e-14


def test_json_round_trip():
    f = TDoFField([1, 1j, -0.5, 0.25 + 0.5j], "points")
    back = TDoFField.from_dict(f.to_dict())
    assert np.array_equal(back.amplitudes, f.amplitudes) and back.basis == "points"
    with pytest.raises(ValueError):
        TDoFField.from_dict({"amplitudes": [[1, 0]]})
    with pytest.raises(ValueError):
        TDoFField.from_dict({"amplitudes": "x"})
