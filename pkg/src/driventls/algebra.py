"""Dense complex linear algebra for 2x2 operators and 4x4 superoperators.

Vectorization is column-stacking throughout: vec(rho) = (rho11, rho21,
rho12, rho22), so vec(A rho B) = (B^T kron A) vec(rho).  Every operator
carries a basis tag and mixed-basis arithmetic is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BasisMismatchError

HERMITIAN_TOL = 1e-12


class Basis(Enum):
    LAB = "lab"
    DRESSED = "dressed"


def _lock(a):
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Operator2:
    """A 2x2 complex matrix tagged with the basis it is written in."""

    m: np.ndarray
    basis: Basis = Basis.LAB

    def __post_init__(self):
        a = _lock(self.m)
        if a.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {a.shape}")
        object.__setattr__(self, "m", a)

    def _check(self, other):
        if self.basis is not other.basis:
            raise BasisMismatchError(
                f"mixed-basis arithmetic: {self.basis.value} vs {other.basis.value}"
            )

    def __add__(self, other):
        self._check(other)
        return Operator2(self.m + other.m, self.basis)

    def __sub__(self, other):
        self._check(other)
        return Operator2(self.m - other.m, self.basis)

    def __mul__(self, scalar):
        return Operator2(self.m * scalar, self.basis)

    __rmul__ = __mul__

    def __neg__(self):
        return Operator2(-self.m, self.basis)

    def __matmul__(self, other):
        self._check(other)
        return Operator2(self.m @ other.m, self.basis)

    def dag(self):
        return Operator2(self.m.conj().T, self.basis)

    def trace(self):
        return complex(np.trace(self.m))

    def norm(self):
        return float(np.linalg.norm(self.m))

    def is_hermitian(self, tol=HERMITIAN_TOL):
        return np.linalg.norm(self.m - self.m.conj().T) <= tol * max(1.0, self.norm())


@dataclass(frozen=True)
class SuperOp:
    """A 4x4 matrix acting on column-vectorized 2x2 matrices."""

    m: np.ndarray
    basis: Basis = Basis.DRESSED

    def __post_init__(self):
        a = _lock(self.m)
        if a.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {a.shape}")
        object.__setattr__(self, "m", a)

    def __add__(self, other):
        if self.basis is not other.basis:
            raise BasisMismatchError(
                f"mixed-basis arithmetic: {self.basis.value} vs {other.basis.value}"
            )
        return SuperOp(self.m + other.m, self.basis)

    def __mul__(self, scalar):
        return SuperOp(self.m * scalar, self.basis)

    __rmul__ = __mul__

    def apply(self, op: Operator2) -> Operator2:
        if op.basis is not self.basis:
            raise BasisMismatchError(
                f"superoperator in {self.basis.value} basis applied to "
                f"{op.basis.value}-basis operator"
            )
        return devectorize(self.m @ vectorize(op), self.basis)

    @staticmethod
    def zero(basis=Basis.DRESSED):
        return SuperOp(np.zeros((4, 4), dtype=complex), basis)


IDENTITY = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)

_PAULIS = (IDENTITY, SIGMA1, SIGMA2, SIGMA3)


def operator(matrix, basis=Basis.LAB):
    return Operator2(matrix, basis)


def pauli_decompose(op: Operator2):
    """Coefficients (c0, c1, c2, c3) with M = c0 I + c1 s1 + c2 s2 + c3 s3."""
    return tuple(complex(np.trace(p @ op.m)) / 2.0 for p in _PAULIS)


def pauli_reconstruct(coeffs, basis=Basis.LAB) -> Operator2:
    m = sum(c * p for c, p in zip(coeffs, _PAULIS))
    return Operator2(m, basis)


def expm_hermitian(h: Operator2, t: float) -> Operator2:
    """exp(-i h t) for Hermitian h, in closed form via the Pauli expansion.

    With h = c0 I + a.sigma and r = |a|:
        exp(-i h t) = e^{-i c0 t} (cos(r t) I - i sin(r t) (a/r).sigma)
    """
    if not h.is_hermitian():
        raise ValueError("expm_hermitian requires a Hermitian input")
    c0, c1, c2, c3 = (c.real for c in pauli_decompose(h))
    a = np.array([c1, c2, c3])
    r = float(np.linalg.norm(a))
    phase = np.exp(-1j * c0 * t)
    if r == 0.0:
        return Operator2(phase * IDENTITY, h.basis)
    n = a / r
    m = np.cos(r * t) * IDENTITY - 1j * np.sin(r * t) * (
        n[0] * SIGMA1 + n[1] * SIGMA2 + n[2] * SIGMA3
    )
    return Operator2(phase * m, h.basis)


def vectorize(op: Operator2) -> np.ndarray:
    """Column-stacked 4-vector (rho11, rho21, rho12, rho22)."""
    return op.m.flatten(order="F")


def devectorize(v, basis=Basis.DRESSED) -> Operator2:
    v = np.asarray(v, dtype=complex)
    if v.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {v.shape}")
    return Operator2(v.reshape(2, 2, order="F"), basis)


def commutator_superop(h: Operator2) -> SuperOp:
    """Superoperator of rho -> -i [h, rho]."""
    m = -1j * (np.kron(IDENTITY, h.m) - np.kron(h.m.T, IDENTITY))
    return SuperOp(m, h.basis)


def conjugation_superop(u: Operator2) -> SuperOp:
    """Superoperator of rho -> u rho u^dag."""
    return SuperOp(np.kron(u.m.conj(), u.m), u.basis)


def lindblad_superop(s: Operator2, rate: float) -> SuperOp:
    """rate * (S rho S^dag - 1/2 {S^dag S, rho}) as a 4x4 matrix."""
    if rate < 0:
        raise ValueError(f"negative rate {rate} breaks complete positivity")
    sds = s.m.conj().T @ s.m
    m = rate * (
        np.kron(s.m.conj(), s.m)
        - 0.5 * np.kron(IDENTITY, sds)
        - 0.5 * np.kron(sds.T, IDENTITY)
    )
    return SuperOp(m, s.basis)
