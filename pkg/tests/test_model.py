import json

import numpy as np
import pytest

from nhskin.errors import ModelFormatError
from nhskin.model import (
    CharPoly,
    HoppingTerm,
    LatticeModel,
    bloch,
    bloch_samples,
    builtin_2d,
    builtin_hatano_nelson,
    builtin_nh_ssh,
    char_poly,
    load_model,
    model_from_dict,
    model_to_dict,
    nonbloch,
    save_model,
)


def test_hn_bloch_values():
    m = builtin_hatano_nelson(0.5, 1.0)
    assert bloch(m, 0.0)[0, 0] == pytest.approx(1.5)
    assert bloch(m, np.pi / 2)[0, 0] == pytest.approx(-0.5j)


def test_hn_dispersion_formula():
    jl, jr = 0.7, 1.3
    m = builtin_hatano_nelson(jl, jr)
    ks = np.linspace(-np.pi, np.pi, 257)
    e = np.array([bloch(m, k)[0, 0] for k in ks])
    ref = (jl + jr) * np.cos(ks) + 1j * (jl - jr) * np.sin(ks)
    np.testing.assert_allclose(e, ref, atol=1e-14)


def test_hermitian_hn_is_cosine_band():
    m = builtin_hatano_nelson(1.0, 1.0)
    for k in (0.0, 0.3, 2.0):
        assert bloch(m, k)[0, 0] == pytest.approx(2 * np.cos(k))


def test_nh_ssh_bloch_entries():
    m = builtin_nh_ssh(1.0, 1.0, 0.5)
    for k in (0.0, 0.7, -1.9):
        h = bloch(m, k)
        assert h[0, 1] == pytest.approx(1.5 + np.exp(-1j * k))
        assert h[1, 0] == pytest.approx(0.5 + np.exp(1j * k))
        assert h[0, 0] == h[1, 1] == 0
        # determinant of an off-diagonal 2x2 is minus the factor product
        assert np.linalg.det(h) == pytest.approx(-(1.5 + np.exp(-1j * k)) * (0.5 + np.exp(1j * k)))


def test_nh_ssh_hermitian_at_gamma_zero():
    m = builtin_nh_ssh(1.0, 1.0, 0.0)
    for k in (0.1, 1.2):
        h = bloch(m, k)
        np.testing.assert_allclose(h, h.conj().T, atol=1e-15)


def test_builtin_2d_offsets():
    m = builtin_2d(0.5, 1.0, 0.2)
    amps = {t.offset: t.amplitude[0, 0] for t in m.terms}
    assert amps[(1, 0)] == 0.5 and amps[(0, -1)] == 0.5
    assert amps[(-1, 0)] == 1.0 and amps[(0, 1)] == 1.0
    for off in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        assert amps[off] == 0.2
    assert len(amps) == 8


def test_duplicate_offsets_merge():
    t = [
        HoppingTerm(offset=(1,), amplitude=np.array([[0.25]])),
        HoppingTerm(offset=(1,), amplitude=np.array([[0.25]])),
        HoppingTerm(offset=(-1,), amplitude=np.array([[1.0]])),
    ]
    m = LatticeModel(dimension=1, bands=1, terms=t)
    assert len(m.terms) == 2
    assert bloch(m, 0.0)[0, 0] == pytest.approx(1.5)


def test_all_zero_model_rejected():
    t = [HoppingTerm(offset=(1,), amplitude=np.array([[0.0]]))]
    with pytest.raises(ModelFormatError):
        LatticeModel(dimension=1, bands=1, terms=t)


def test_amplitude_shape_must_match_bands():
    with pytest.raises(ModelFormatError):
        LatticeModel(
            dimension=1,
            bands=2,
            terms=[HoppingTerm(offset=(1,), amplitude=np.array([[1.0]]))],
        )


def test_nonbloch_at_unit_beta_matches_bloch():
    m = builtin_nh_ssh(0.6, 1.0, 0.3)
    for k in (0.0, 0.9):
        np.testing.assert_allclose(nonbloch(m, [np.exp(1j * k)]), bloch(m, k), atol=1e-14)


def test_nonbloch_rejects_zero_beta():
    m = builtin_hatano_nelson(0.5, 1.0)
    with pytest.raises(ValueError):
        nonbloch(m, [0.0])


def test_bloch_samples_batches_match_single():
    m = builtin_nh_ssh(0.6, 1.0, 0.3)
    ks = np.linspace(0, 2 * np.pi, 17, endpoint=False)
    batch = bloch_samples(m, ks)
    for i, k in enumerate(ks):
        np.testing.assert_allclose(batch[i], bloch(m, k), atol=1e-14)


def test_char_poly_hn_coefficients():
    m = builtin_hatano_nelson(0.5, 1.0)
    cp = char_poly(m, 2.0 + 1.0j)
    assert cp.coeffs[(1,)] == pytest.approx(-0.5)
    assert cp.coeffs[(-1,)] == pytest.approx(-1.0)
    assert cp.coeffs[(0,)] == pytest.approx(2.0 + 1.0j)
    q, c = cp.univariate_coeffs()
    assert q == 1
    np.testing.assert_allclose(c, [-1.0, 2.0 + 1.0j, -0.5], atol=1e-15)


@pytest.mark.parametrize(
    "model",
    [
        builtin_hatano_nelson(0.5, 1.0),
        builtin_nh_ssh(0.6, 1.0, 0.3),
        builtin_2d(0.5, 1.0, 0.2),
    ],
)
def test_char_poly_evaluates_to_determinant(model):
    rng = np.random.default_rng(7)
    E = 0.37 - 0.21j
    cp = char_poly(model, E)
    for _ in range(5):
        beta = np.exp(rng.normal(size=model.dimension) + 1j * rng.uniform(0, 2 * np.pi, model.dimension))
        direct = np.linalg.det(E * np.eye(model.bands) - nonbloch(model, beta))
        assert cp.evaluate(beta) == pytest.approx(direct, abs=1e-10)


def test_char_poly_is_a_charpoly_instance():
    cp = char_poly(builtin_2d(0.5, 1.0, 0.2), 0.1)
    assert isinstance(cp, CharPoly)
    assert cp.nvars == 2
    lo, hi = cp.exponent_range(1)
    assert lo == -1 and hi == 1


def test_json_round_trip(tmp_path):
    m = builtin_nh_ssh(0.6, 1.0, 0.3)
    path = tmp_path / "model.json"
    save_model(m, path)
    m2 = load_model(path)
    assert m2.dimension == m.dimension and m2.bands == m.bands
    assert len(m2.terms) == len(m.terms)
    for a, b in zip(m.terms, m2.terms):
        assert a.offset == b.offset
        np.testing.assert_allclose(a.amplitude, b.amplitude, atol=0)


def test_json_schema_shape(tmp_path):
    m = builtin_hatano_nelson(0.5, 1.0)
    doc = model_to_dict(m)
    assert set(doc) >= {"dimension", "bands", "terms"}
    amp = doc["terms"][0]["amplitude"]
    assert isinstance(amp[0][0], dict) and set(amp[0][0]) == {"re", "im"}
    # and the dict form feeds back in
    assert model_from_dict(json.loads(json.dumps(doc))).terms == m.terms


def test_loader_reports_term_index():
    doc = model_to_dict(builtin_hatano_nelson(0.5, 1.0))
    doc["terms"][1]["offset"] = [1, 2]
    with pytest.raises(ModelFormatError, match=r"terms\[1\]"):
        model_from_dict(doc)


def test_loader_rejects_bad_dimension():
    doc = model_to_dict(builtin_hatano_nelson(0.5, 1.0))
    doc["dimension"] = 3
    with pytest.raises(ModelFormatError):
        model_from_dict(doc)


def test_loader_rejects_ragged_amplitude():
    doc = model_to_dict(builtin_nh_ssh(0.6, 1.0, 0.3))
    doc["terms"][0]["amplitude"][0] = doc["terms"][0]["amplitude"][0][:1]
    with pytest.raises(ModelFormatError, match=r"terms\[0\]"):
        model_from_dict(doc)
