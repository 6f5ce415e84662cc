import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ladderq.errors import ConfigError
from ladderq.pauli import (
    QUBITK_FIRST,
    PauliSum,
    label_to_masks,
    masks_to_label,
    multiply,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)


def pauli_sums(num_qubits=3, max_terms=5):
    label = st.text("IXYZ", min_size=num_qubits, max_size=num_qubits)
    coeff = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
    return st.dictionaries(label, coeff, max_size=max_terms).map(
        lambda d: PauliSum.from_terms(d, num_qubits=num_qubits)
    )


def test_single_qubit_products():
    x, y, z = (PauliSum.from_label(s) for s in "XYZ")
    assert x * y == PauliSum.from_label("Z", 1j)
    assert y * x == PauliSum.from_label("Z", -1j)
    assert z * x == PauliSum.from_label("Y", 1j)
    assert y * y == PauliSum.identity(1)


def test_masks_round_trip_and_orders():
    x, z = label_to_masks("XYZI")
    assert (x, z) == (0b0011, 0b0110)
    assert masks_to_label(x, z, 4) == "XYZI"
    assert masks_to_label(x, z, 4, QUBITK_FIRST) == "IZYX"
    with pytest.raises(ConfigError):
        label_to_masks("XQ")


def test_to_matrix_qubit_one_is_least_significant():
    # qubit 1 carries X: flips the lowest bit of the basis index
    m = PauliSum.from_label("XI").to_matrix()
    assert np.allclose(m, np.kron(np.eye(2), X))
    m = PauliSum.from_label("ZX", order=QUBITK_FIRST).to_matrix()
    assert np.allclose(m, np.kron(Z, X))


def test_cancellation_and_collection():
    s = PauliSum.from_terms({"XX": 1.0, "ZZ": 2.0}) - PauliSum.from_terms({"XX": 1.0})
    assert len(s) == 1 and s.coeff("ZZ") == 2.0
    tiny = PauliSum.from_terms({"XX": 1e-12})
    assert tiny.is_zero()


def test_from_matrix_round_trip():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    s = PauliSum.from_matrix(a)
    assert np.allclose(s.to_matrix(), a)
    with pytest.raises(ConfigError):
        PauliSum.from_matrix(np.eye(3))


def test_text_and_json_round_trip():
    s = PauliSum.from_terms({"XYZ": 0.5 - 0.25j, "III": 3.0, "ZZI": -1.0})
    assert PauliSum.from_text(s.to_text()) == s
    assert PauliSum.from_json_obj(s.to_json_obj(QUBITK_FIRST, 2.0), QUBITK_FIRST, 2.0).isclose(s)
    lines = s.to_text(precision=2).splitlines()
    assert lines[0] == "3.00 0.00 III"


def test_extend_and_mismatch():
    s = PauliSum.from_label("X")
    assert s.extend(3) == PauliSum.from_label("XII")
    with pytest.raises(ConfigError):
        s + PauliSum.from_label("XX")


def test_power_and_division():
    s = PauliSum.from_terms({"X": 1.0, "Z": 1.0})
    assert (s**2).isclose(PauliSum.identity(1, 2.0))
    assert (s / 2).coeff("X") == 0.5


def test_large_product_is_chunked(monkeypatch):
    import ladderq.pauli as pm

    monkeypatch.setattr(pm, "_CHUNK", 7)
    rng = np.random.default_rng(0)
    labels = ["".join(rng.choice(list("IXYZ"), 4)) for _ in range(12)]
    a = PauliSum.from_terms({lab: rng.normal() for lab in labels})
    b = PauliSum.from_terms({lab[::-1]: rng.normal() for lab in labels})
    assert np.allclose(multiply(a, b).to_matrix(), a.to_matrix() @ b.to_matrix())


@settings(max_examples=50, deadline=None)
@given(pauli_sums(), pauli_sums())
def test_multiplication_is_a_homomorphism(a, b):
    assert np.allclose((a * b).to_matrix(), a.to_matrix() @ b.to_matrix(), atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(pauli_sums(2, 4), pauli_sums(2, 4), pauli_sums(2, 4))
def test_multiplication_is_associative(a, b, c):
    assert ((a * b) * c).isclose(a * (b * c), tol=1e-9)


@given(pauli_sums(), st.permutations([0, 1, 2]))
def test_one_norm_invariant_under_relabeling(s, perm):
    assert s.permute_qubits(list(perm)).one_norm() == pytest.approx(s.one_norm())


@given(pauli_sums())
def test_adjoint_matches_matrix(s):
    assert np.allclose(s.adjoint().to_matrix(), s.to_matrix().conj().T)
