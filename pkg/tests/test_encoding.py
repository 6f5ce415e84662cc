import numpy as np
import pytest

from ladderq.encoding import (
    Binary,
    Unary,
    a_binary,
    a_dagger_binary,
    binary_creation,
    binary_d_operator,
    encode_hamiltonian,
    flip_pattern_census,
    jump_operators,
    local_operator,
    naive_string_count,
    one_hot_indices,
    redundant_string_count,
    transition_operator,
    unary_creation,
    vacuum_projector,
)
from ladderq.errors import ConfigError
from ladderq.ladder import LadderPoly, XPPoly, ladder_from_xp, normal_order
from ladderq.matrices import assemble, ladder_matrix
from ladderq.pauli import QUBITK_FIRST


def ket_bra(k, h, dim):
    m = np.zeros((dim, dim))
    m[k, h] = 1
    return m


def test_sigma_minus_raises_qubit():
    m = local_operator(1, {1: "sigma-"}).to_matrix()
    assert np.allclose(m, ket_bra(1, 0, 2))


def test_binary_k1_is_sigma_minus():
    assert binary_creation(1).terms() == {"X": 0.5, "Y": -0.5j}


@pytest.mark.parametrize("K", [1, 2, 3, 4])
def test_jumps_are_first_neighbour(K):
    dim = 1 << K
    for i, c in enumerate(jump_operators(K), start=1):
        assert np.allclose(c.to_matrix(), ket_bra(i, i - 1, dim))


def test_d_operator_is_shift():
    dim = 16
    assert np.allclose(binary_d_operator(4).to_matrix(), np.eye(dim, k=-1))


@pytest.mark.parametrize("k", range(8))
def test_a_dagger_creates_from_vacuum(k):
    assert np.allclose(a_dagger_binary(k, 3).to_matrix(), ket_bra(k, 0, 8))
    assert np.allclose(a_binary(k, 3).to_matrix(), ket_bra(0, k, 8))


def test_vacuum_projector():
    assert np.allclose(vacuum_projector(3).to_matrix(), ket_bra(0, 0, 8))


def test_ladder_route_transitions():
    enc = Binary(2)
    for k in range(4):
        for h in range(4):
            m = transition_operator(k, h, enc, route="ladder").to_matrix()
            assert np.allclose(m, ket_bra(k, h, 4), atol=1e-12)
    with pytest.raises(ConfigError):
        transition_operator(4, 0, enc)
    with pytest.raises(ConfigError):
        transition_operator(0, 0, enc, route="other")


@pytest.mark.parametrize("M", [2, 3, 5])
def test_unary_on_one_hot_subspace(M):
    full = unary_creation(M).to_matrix()
    idx = one_hot_indices(M)
    assert np.allclose(full[np.ix_(idx, idx)], ladder_matrix(M))
    for k in range(M):
        for h in range(M):
            t = transition_operator(k, h, Unary(M)).to_matrix()[np.ix_(idx, idx)]
            assert np.allclose(t, ket_bra(k, h, M))


def test_unary_needs_two_modes():
    with pytest.raises(ConfigError):
        unary_creation(1)


def test_binary_for_basis_size_rounds_up():
    assert Binary.for_basis_size(8).K == 3
    assert Binary.for_basis_size(9).K == 4
    with pytest.raises(ConfigError):
        Binary(0)


@pytest.mark.parametrize("K", [2, 3, 4])
def test_encoded_hamiltonian_matches_assembly(K):
    poly = XPPoly({"pp": 0.5, "xx": 0.5, "xxx": -0.125, "xxxx": 1 / 128})
    for lad in (ladder_from_xp(poly), normal_order(ladder_from_xp(poly))):
        enc = encode_hamiltonian(lad, Binary(K))
        assert enc.max_imag() < 1e-12
        assert np.allclose(enc.to_matrix(), assemble(lad, 1 << K), atol=1e-10)


def test_unary_encoded_hamiltonian_on_subspace():
    lad = normal_order(ladder_from_xp(XPPoly({"pp": 0.5, "xx": 0.5, "xxxx": 0.1})))
    M = 4
    full = encode_hamiltonian(lad, Unary(M)).to_matrix()
    idx = one_hot_indices(M)
    assert np.allclose(full[np.ix_(idx, idx)], assemble(lad, M), atol=1e-12)


def test_harmonic_k2_is_diagonal():
    h = normal_order(ladder_from_xp(XPPoly({"pp": 0.5, "xx": 0.5})))
    terms = encode_hamiltonian(h, Binary(2)).terms(QUBITK_FIRST)
    # diag(0.5, 1.5, 2.5, 3.5) = 2 I - Z_2 - 0.5 Z_1
    assert set(terms) == {"II", "ZI", "IZ"}
    assert terms["II"] == pytest.approx(2.0)
    assert terms["ZI"] == pytest.approx(-1.0)
    assert terms["IZ"] == pytest.approx(-0.5)


def test_census_k3():
    groups = flip_pattern_census(3)
    assert [g.projector_count for g in groups] == [4, 2, 1]
    assert [g.flip_mask for g in groups] == [0b001, 0b011, 0b111]
    assert all(g.string_budget == 8 for g in groups)
    assert naive_string_count(3) == 56
    assert redundant_string_count(3) == 32


@pytest.mark.parametrize("K", range(1, 7))
def test_creation_string_count(K):
    n = len(binary_creation(K))
    assert n <= K * (1 << K)
    assert n == naive_string_count(K) - redundant_string_count(K)


def test_empty_polynomial_encodes_to_zero():
    assert encode_hamiltonian(LadderPoly(), Binary(2)).is_zero()
