import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ladderq.encoding import Binary, encode_hamiltonian
from ladderq.errors import ConfigError, NumericalAssertionError
from ladderq.ladder import LadderPoly, XPPoly, ladder_from_xp
from ladderq.matrices import AssemblyMode, assemble
from ladderq.models import ModelSpec, Ordering, make_model
from ladderq.spectral import (
    convergence_sweep,
    eig,
    jacobi_eigh,
    norm_scaling_fit,
    spectrum,
    weights,
    weights_csv,
)


def test_eig_exact_harmonic():
    h = ladder_from_xp(XPPoly({"pp": 0.5, "xx": 0.5}))
    w, _ = eig(assemble(h, 4, AssemblyMode.EXACT_PROJECTION))
    assert np.allclose(w, [0.5, 1.5, 2.5, 3.5])


def test_eig_truncated_harmonic_degenerate_pair():
    h = LadderPoly({"b+b": 0.5, "bb+": 0.5})
    w, _ = eig(assemble(h, 4))
    assert np.allclose(w, [0.5, 1.5, 1.5, 2.5])


def test_eig_one_by_one():
    w, v = eig(np.array([[3.25]]))
    assert w.tolist() == [3.25] and v.tolist() == [[1.0]]


def test_eig_rejects_bad_input():
    with pytest.raises(NumericalAssertionError):
        eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ConfigError):
        eig(np.zeros((2, 3)))
    with pytest.raises(ConfigError):
        eig(np.eye(2), method="qr")


def test_eig_complex_hermitian():
    h = assemble(ladder_from_xp(XPPoly({"pp": 0.5, "xx": 0.5, "xp": 0.1, "px": 0.1})), 6)
    w, v = eig(h)
    assert np.allclose(h @ v, v * w, atol=1e-10)
    assert np.allclose(w, np.linalg.eigvalsh(h))


def test_jacobi_matches_lapack_random():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(37, 37))
    a = a + a.T
    w, v = jacobi_eigh(a)
    assert np.allclose(w, np.linalg.eigvalsh(a), atol=1e-10)
    assert np.allclose(v.T @ v, np.eye(37), atol=1e-10)


symmetric = arrays(np.float64, (6, 6), elements=st.floats(-10, 10)).map(lambda a: a + a.T)


@settings(max_examples=40, deadline=None)
@given(symmetric)
def test_eig_postconditions(h):
    w, v = eig(h)
    norm = max(1.0, np.linalg.norm(h))
    assert np.all(np.diff(w) >= -1e-12)
    assert np.max(np.abs(h @ v - v * w)) <= 1e-10 * norm
    assert np.allclose(v.T @ v, np.eye(6), atol=1e-10)
    pivots = v[np.argmax(np.abs(v), axis=0), np.arange(6)]
    assert np.all(pivots > 0)


def test_h0_spectrum_in_wavenumbers():
    rep = spectrum(make_model("h0", omega=2000), 8)
    assert np.allclose(rep.energies, 2000 * (np.arange(8) + 0.5))
    assert rep.splitting_01 == pytest.approx(2000)


def test_unit_toggle():
    model = make_model("dwell-left")
    cm = spectrum(model, 20).energies
    dimless = spectrum(model, 20, unit="dimensionless").energies
    assert np.allclose(dimless * model.omega, cm, rtol=1e-12, atol=0)
    with pytest.raises(ConfigError):
        spectrum(model, 4, unit="eV")


def test_h0_sweep_is_flat():
    table = convergence_sweep(make_model("h0", omega=2000), "normal", [1, 2, 5, 9])
    assert all(abs(e - 1000) < 1e-9 for e in table.ground_energies().values())
    assert table.reference.M == 9


def test_sweep_rejects_unsorted_sizes():
    with pytest.raises(ConfigError):
        convergence_sweep(make_model("h0"), "normal", [4, 2])


def test_sweep_workers_match_serial():
    model = make_model("dwell-left")
    a = convergence_sweep(model, "unordered", range(2, 20, 3))
    b = convergence_sweep(model, "unordered", range(2, 20, 3), workers=3)
    assert a.to_csv(8) == b.to_csv(8)


def test_sweep_csv_layout():
    table = convergence_sweep(make_model("h0", omega=2000), "normal", [2, 6])
    lines = table.to_csv().splitlines()
    assert lines[0] == "M,E0,E1,E2,E3,E4,splitting01"
    assert lines[1] == "2,1000.0000,3000.0000,,,,2000.0000"
    assert lines[2].startswith("6,1000.0000,3000.0000,5000.0000")


def test_weights_of_h0_are_identity():
    rep = spectrum(make_model("h0"), 6)
    assert np.allclose(weights(rep), np.eye(6))
    text = weights_csv(weights(rep), 1)
    assert text.splitlines()[0] == "n,i,w"
    assert len(text.splitlines()) == 7


def test_weights_need_vectors():
    rep = spectrum(make_model("h0"), 3, with_vectors=False)
    with pytest.raises(ConfigError):
        weights(rep)


def test_left_ground_state_mostly_gaussian():
    w = weights(spectrum(make_model("dwell-left"), 128))
    assert w[0, 0] == pytest.approx(0.5, abs=0.1)


def test_center_ground_state_is_even():
    w = weights(spectrum(make_model("dwell-center"), 32))
    assert np.max(w[0, 1::2]) < 1e-16


def test_norm_fit_constant_is_flat():
    model = ModelSpec(XPPoly({"": 3}))
    fit = norm_scaling_fit(model, [2, 4, 8])
    assert abs(fit.slope) < 1e-12


def test_norm_fit_needs_three_points():
    with pytest.raises(ConfigError):
        norm_scaling_fit(make_model("h0"), [4, 8])
    with pytest.raises(ConfigError):
        norm_scaling_fit(make_model("h0"), [4, 6, 8])


@pytest.mark.parametrize("preset", ["dwell-left", "dwell-center"])
@pytest.mark.parametrize("ordering", list(Ordering))
def test_encoder_and_engine_spectra_agree(preset, ordering):
    model = make_model(preset)
    for K in range(1, 6):
        lad = model.ladder(ordering)
        enc = encode_hamiltonian(lad, Binary(K)).to_matrix()
        w_enc = np.linalg.eigvalsh(enc) * model.omega
        w_eng = spectrum(model, 1 << K, ordering).energies
        assert np.max(np.abs(w_enc - w_eng)) < 1e-8


def test_left_splitting_slow_at_32():
    rep = spectrum(make_model("dwell-left"), 32)
    assert abs(rep.splitting_01 - 0.3791) > 0.01
