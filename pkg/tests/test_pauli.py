import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabdec import pauli


def random_pauli(rng, n):
    return pauli.PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n)),
                             int(rng.integers(4)))


letters3 = st.text(alphabet="IXYZ", min_size=1, max_size=3)


def test_identity_round_trip():
    p = pauli.pauli_from_string("IXYZ")
    assert pauli.to_string(p) == "IXYZ"
    assert p.phase == 1
    assert p.weight == 3


def test_single_letters_match_dense():
    for letter, mat in pauli.SINGLE_QUBIT.items():
        p = pauli.pauli_from_string(letter)
        assert np.allclose(pauli.to_dense(p), mat)


@given(letters3, letters3)
@settings(max_examples=60, deadline=None)
def test_multiply_matches_dense(a, b):
    if len(a) != len(b):
        a = b = (a + b)[: min(len(a), len(b))] or "I"
    pa, pb = pauli.pauli_from_string(a), pauli.pauli_from_string(b)
    prod = pauli.multiply(pa, pb)
    assert np.allclose(pauli.to_dense(prod), pauli.to_dense(pa) @ pauli.to_dense(pb),
                       atol=1e-12)


@given(letters3, letters3)
@settings(max_examples=60, deadline=None)
def test_commutes_matches_dense(a, b):
    if len(a) != len(b):
        a = b = (a + b)[: min(len(a), len(b))] or "I"
    pa, pb = pauli.pauli_from_string(a), pauli.pauli_from_string(b)
    da, db = pauli.to_dense(pa), pauli.to_dense(pb)
    assert pauli.commutes(pa, pb) == bool(np.allclose(da @ db, db @ da))


def test_apply_matches_dense():
    rng = np.random.default_rng(0)
    for _ in range(25):
        n = int(rng.integers(1, 7))
        p = random_pauli(rng, n)
        vec = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
        assert np.allclose(pauli.apply_pauli(p, vec), pauli.to_dense(p) @ vec, atol=1e-12)


def test_apply_batch_matches_columns():
    rng = np.random.default_rng(1)
    p = random_pauli(rng, 4)
    mat = rng.standard_normal((16, 3)) + 1j * rng.standard_normal((16, 3))
    out = pauli.apply_pauli(p, mat)
    for k in range(3):
        assert np.allclose(out[:, k], pauli.apply_pauli(p, mat[:, k]))


def test_scale_and_hermiticity():
    p = pauli.pauli_from_string("XY")
    assert p.is_hermitian()
    q = pauli.scale(p, 1j)
    assert not q.is_hermitian()
    assert np.allclose(pauli.to_dense(q), 1j * pauli.to_dense(p))


def test_y_phase_convention():
    y = pauli.pauli_from_string("Y")
    assert np.allclose(pauli.to_dense(y), np.array([[0, -1j], [1j, 0]]))
    xz = pauli.multiply(pauli.pauli_from_string("X"), pauli.pauli_from_string("Z"))
    assert np.allclose(1j * pauli.to_dense(xz), pauli.to_dense(y))


def test_enumerate_counts():
    assert len(list(pauli.enumerate_paulis(5, 0))) == 1
    assert len(list(pauli.enumerate_paulis(5, 1))) == 15
    assert len(list(pauli.enumerate_paulis(5, 2))) == 90
    assert len(pauli.paulis_up_to_weight(5, 1)) == 16


def test_enumerate_weights_and_order():
    ones = list(pauli.enumerate_paulis(3, 1))
    assert all(p.weight == 1 for p in ones)
    assert [pauli.to_string(p) for p in ones[:3]] == ["XII", "YII", "ZII"]


def test_ordering_msb_is_qubit_zero():
    # X on qubit 0 of two qubits flips the most significant index bit
    p = pauli.pauli_from_string("XI")
    vec = np.zeros(4)
    vec[0] = 1.0
    out = pauli.apply_pauli(p, vec)
    assert out[0b10] == 1.0


def test_errors():
    with pytest.raises(pauli.PauliError):
        pauli.pauli_from_string("XQ")
    with pytest.raises(pauli.PauliError):
        pauli.multiply(pauli.pauli_from_string("X"), pauli.pauli_from_string("XX"))
    with pytest.raises(pauli.PauliError):
        pauli.to_dense(pauli.identity(13))
