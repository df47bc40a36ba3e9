import numpy as np
import pytest
import scipy.linalg

from driventls import algebra
from driventls.algebra import Basis, Operator2, SuperOp
from driventls.errors import BasisMismatchError


def random_matrix(rng):
    return rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))


def random_state(rng):
    x = random_matrix(rng)
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def test_operator_is_write_locked():
    op = Operator2(np.eye(2))
    with pytest.raises(ValueError):
        op.m[0, 0] = 5.0


def test_operator_rejects_wrong_shape():
    with pytest.raises(ValueError):
        Operator2(np.eye(3))


def test_mixed_basis_arithmetic_rejected():
    a = Operator2(np.eye(2), Basis.LAB)
    b = Operator2(np.eye(2), Basis.DRESSED)
    with pytest.raises(BasisMismatchError):
        a + b
    with pytest.raises(BasisMismatchError):
        a @ b
    with pytest.raises(BasisMismatchError):
        SuperOp.zero(Basis.DRESSED).apply(a)


def test_pauli_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(50):
        op = Operator2(random_matrix(rng))
        coeffs = algebra.pauli_decompose(op)
        back = algebra.pauli_reconstruct(coeffs, op.basis)
        assert np.linalg.norm(back.m - op.m) < 1e-14


def test_expm_hermitian_matches_scipy():
    rng = np.random.default_rng(12)
    for _ in range(50):
        m = random_matrix(rng)
        h = Operator2(0.5 * (m + m.conj().T))
        t = rng.uniform(-10, 10)
        expected = scipy.linalg.expm(-1j * t * h.m)
        assert np.linalg.norm(algebra.expm_hermitian(h, t).m - expected) < 1e-12


def test_expm_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError):
        algebra.expm_hermitian(Operator2(np.array([[0, 1], [0, 0]])), 1.0)


def test_vectorization_is_column_stacking():
    op = Operator2(np.array([[1, 2], [3, 4]], dtype=complex))
    assert np.array_equal(algebra.vectorize(op), np.array([1, 3, 2, 4], dtype=complex))
    back = algebra.devectorize(algebra.vectorize(op), op.basis)
    assert np.array_equal(back.m, op.m)


def test_kron_identity_for_two_sided_products():
    rng = np.random.default_rng(13)
    for _ in range(20):
        a, b, rho = (random_matrix(rng) for _ in range(3))
        direct = (a @ rho @ b).flatten(order="F")
        via_kron = np.kron(b.T, a) @ rho.flatten(order="F")
        assert np.linalg.norm(direct - via_kron) < 1e-12


def test_commutator_superop():
    rng = np.random.default_rng(14)
    h = Operator2(np.array([[0.3, 0.1], [0.1, -0.3]], dtype=complex), Basis.DRESSED)
    sup = algebra.commutator_superop(h)
    rho = random_state(rng)
    expected = -1j * (h.m @ rho - rho @ h.m)
    got = sup.apply(Operator2(rho, Basis.DRESSED)).m
    assert np.linalg.norm(got - expected) < 1e-14


def test_conjugation_superop_preserves_spectrum():
    rng = np.random.default_rng(15)
    theta = rng.uniform(0, 2 * np.pi)
    u = Operator2(scipy.linalg.expm(-1j * theta * algebra.SIGMA2), Basis.DRESSED)
    rho = random_state(rng)
    out = algebra.conjugation_superop(u).apply(Operator2(rho, Basis.DRESSED)).m
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho))


def test_lindblad_superop_trace_and_hermiticity():
    rng = np.random.default_rng(16)
    for _ in range(30):
        s = Operator2(random_matrix(rng), Basis.DRESSED)
        sup = algebra.lindblad_superop(s, rng.uniform(0, 3))
        out = sup.apply(Operator2(random_state(rng), Basis.DRESSED))
        assert abs(out.trace()) < 1e-13
        assert np.linalg.norm(out.m - out.m.conj().T) < 1e-13


def test_lindblad_superop_rejects_negative_rate():
    with pytest.raises(ValueError):
        algebra.lindblad_superop(Operator2(np.eye(2), Basis.DRESSED), -0.1)
