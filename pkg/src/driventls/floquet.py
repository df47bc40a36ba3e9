"""Drive parameters, exact propagator, averaged Hamiltonian, dressed basis.

The lab-frame Hamiltonian is H(t) = omega0/2 s3 + g (s- e^{i Omega t} +
s+ e^{-i Omega t}).  Its propagator factorizes exactly as
U(t) = exp(-i t Omega s3 / 2) exp(-i t (Delta s3 / 2 + g s1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    Basis,
    IDENTITY,
    Operator2,
    SIGMA1,
    SIGMA3,
    SIGMA_MINUS,
    SIGMA_PLUS,
    expm_hermitian,
)


@dataclass(frozen=True)
class SystemParams:
    """Drive and two-level-system parameters (angular frequencies, hbar=1)."""

    omega0: float
    Omega: float
    g: float
    delta: float
    omega_r: float
    tau: float


def make_params(omega0: float, Omega: float, g: float) -> SystemParams:
    if Omega <= 0:
        raise ValueError(f"drive frequency must be positive, got Omega={Omega}")
    if g < 0:
        raise ValueError(f"coupling amplitude must be nonnegative, got g={g}")
    delta = omega0 - Omega
    omega_r = math.sqrt(4.0 * g * g + delta * delta)
    if omega_r > Omega:
        raise ValueError(
            f"Rabi frequency {omega_r} exceeds drive frequency {Omega}; "
            "the construction assumes Omega_R <= Omega"
        )
    return SystemParams(omega0, Omega, g, delta, omega_r, 2.0 * math.pi / Omega)


@dataclass(frozen=True)
class DressedBasis:
    """Quasienergies and eigenvectors of the averaged Hamiltonian.

    phi1 carries quasienergy eps1 = -(Omega - Omega_R)/2, phi2 carries
    eps2 = -(Omega + Omega_R)/2, so eps1 - eps2 = Omega_R.
    """

    eps1: float
    eps2: float
    phi1: np.ndarray
    phi2: np.ndarray

    @property
    def v(self) -> np.ndarray:
        """Column matrix [phi1 phi2]: lab components of the dressed vectors."""
        return np.column_stack([self.phi1, self.phi2])


def hamiltonian(p: SystemParams, t: float) -> Operator2:
    """Lab-frame H(t) including the harmonic drive."""
    drive = p.g * (SIGMA_MINUS * np.exp(1j * p.Omega * t) + SIGMA_PLUS * np.exp(-1j * p.Omega * t))
    return Operator2(0.5 * p.omega0 * SIGMA3 + drive, Basis.LAB)


def mean_hamiltonian(p: SystemParams) -> Operator2:
    """Averaged Hamiltonian Delta s3 / 2 + g s1 (traceless form)."""
    return Operator2(0.5 * p.delta * SIGMA3 + p.g * SIGMA1, Basis.LAB)


def propagator(p: SystemParams, t: float) -> Operator2:
    """Closed-form U(t) as a product of two one-parameter unitary groups."""
    u1 = expm_hermitian(Operator2(0.5 * p.Omega * SIGMA3, Basis.LAB), t)
    u2 = expm_hermitian(mean_hamiltonian(p), t)
    return u1 @ u2


def dressed_basis(p: SystemParams) -> DressedBasis:
    if p.g == 0.0 and p.delta == 0.0:
        raise ValueError(
            "g = Delta = 0 makes the averaged Hamiltonian vanish; "
            "the dressed basis is undefined"
        )
    eps1 = -0.5 * (p.Omega - p.omega_r)
    eps2 = -0.5 * (p.Omega + p.omega_r)
    phi1 = np.array([p.delta + p.omega_r, 2.0 * p.g], dtype=complex)
    phi2 = np.array([p.delta - p.omega_r, 2.0 * p.g], dtype=complex)
    if p.g == 0.0:
        # Delta != 0: the closed forms degenerate to the lab basis vectors.
        if p.delta > 0:
            phi1 = np.array([1.0, 0.0], dtype=complex)
            phi2 = np.array([0.0, 1.0], dtype=complex)
        else:
            phi1 = np.array([0.0, 1.0], dtype=complex)
            phi2 = np.array([1.0, 0.0], dtype=complex)
    return DressedBasis(
        eps1,
        eps2,
        phi1 / np.linalg.norm(phi1),
        phi2 / np.linalg.norm(phi2),
    )


def to_dressed(op: Operator2, db: DressedBasis) -> Operator2:
    if op.basis is not Basis.LAB:
        raise ValueError("to_dressed expects a lab-basis operator")
    return Operator2(db.v.conj().T @ op.m @ db.v, Basis.DRESSED)


def to_lab(op: Operator2, db: DressedBasis) -> Operator2:
    if op.basis is not Basis.DRESSED:
        raise ValueError("to_lab expects a dressed-basis operator")
    return Operator2(db.v @ op.m @ db.v.conj().T, Basis.LAB)


def dressed_propagator(p: SystemParams, db: DressedBasis, t: float) -> Operator2:
    return to_dressed(propagator(p, t), db)


def propagator_oracle(p: SystemParams, t: float, steps: int) -> Operator2:
    """Fixed-step 4th-order integration of dU/ds = -i H(s) U on [0, t].

    Independent numeric check of the factorized closed form; converges at
    4th order in the step size.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    h = t / steps
    u = IDENTITY.copy()
    half_w0 = 0.5 * p.omega0
    g = p.g

    def hmat(s):
        c = np.exp(1j * p.Omega * s)
        return np.array([[half_w0, g * c.conjugate()], [g * c, -half_w0]])

    for n in range(steps):
        s = n * h
        h1 = hmat(s)
        h2 = hmat(s + 0.5 * h)
        h3 = hmat(s + h)
        k1 = -1j * (h1 @ u)
        k2 = -1j * (h2 @ (u + 0.5 * h * k1))
        k3 = -1j * (h2 @ (u + 0.5 * h * k2))
        k4 = -1j * (h3 @ (u + h * k3))
        u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return Operator2(u, Basis.LAB)
