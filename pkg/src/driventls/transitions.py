"""Floquet-Fourier decomposition of the s1 and s3 couplings.

Closed-form transition operators in the dressed basis, keyed by the pair
(q, omega_bar) so the combined frequency omega_bar + q Omega and the heat
current weight stay recoverable, plus a least-squares numeric oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import Basis, Operator2
from .errors import FrequencyCollisionError
from .floquet import SystemParams, dressed_basis, dressed_propagator

COLLISION_TOL = 1e-9


@dataclass(frozen=True)
class TransitionOperator:
    """One Fourier component S_q(omega_bar) of a coupling operator."""

    op: Operator2
    omega_bar: float
    q: int
    bath: str

    def combined(self, p: SystemParams) -> float:
        return self.omega_bar + self.q * p.Omega

    def conjugate(self) -> "TransitionOperator":
        return TransitionOperator(self.op.dag(), -self.omega_bar, -self.q, self.bath)


def _check_collisions(ops, p: SystemParams):
    freqs = [(t.q, t.omega_bar, t.combined(p)) for t in ops]
    for i in range(len(freqs)):
        for j in range(i + 1, len(freqs)):
            if (freqs[i][0], freqs[i][1]) == (freqs[j][0], freqs[j][1]):
                continue
            if abs(freqs[i][2] - freqs[j][2]) < COLLISION_TOL:
                raise FrequencyCollisionError(
                    f"channels (q={freqs[i][0]}, wbar={freqs[i][1]}) and "
                    f"(q={freqs[j][0]}, wbar={freqs[j][1]}) share the combined "
                    f"frequency {freqs[i][2]}; the secular construction assumes "
                    "nondegenerate quasifrequencies"
                )
    return ops


def sigma1_transition_ops(p: SystemParams, bath: str = "e"):
    """Transition operators of the s1 coupling: q = +/-1, wbar in {0, +/-Wr}."""
    wr = p.omega_r
    e12 = np.array([[0, 1], [0, 0]], dtype=complex)
    e21 = e12.T
    s_minus = Operator2((p.delta - wr) / (2 * wr) * e12, Basis.DRESSED)
    s_zero = Operator2(p.g / wr * np.diag([1.0, -1.0]).astype(complex), Basis.DRESSED)
    s_plus = Operator2((p.delta + wr) / (2 * wr) * e21, Basis.DRESSED)
    positive = [
        TransitionOperator(s_minus, -wr, 1, bath),
        TransitionOperator(s_zero, 0.0, 1, bath),
        TransitionOperator(s_plus, wr, 1, bath),
    ]
    ops = positive + [t.conjugate() for t in positive]
    return _check_collisions(ops, p)


def sigma3_transition_ops(p: SystemParams, bath: str = "d"):
    """Transition operators of the s3 coupling: q = 0, wbar in {0, +/-Wr}."""
    wr = p.omega_r
    s_zero = Operator2(
        p.delta / wr * np.diag([1.0, -1.0]).astype(complex), Basis.DRESSED
    )
    s_rabi = Operator2(
        2 * p.g / wr * np.array([[0, 0], [-1, 0]], dtype=complex), Basis.DRESSED
    )
    ops = [
        TransitionOperator(s_zero, 0.0, 0, bath),
        TransitionOperator(s_rabi, wr, 0, bath),
        TransitionOperator(s_rabi, wr, 0, bath).conjugate(),
    ]
    return _check_collisions(ops, p)


def generator_channels(ops):
    """Representatives of each conjugate channel pair for the LGKS sum.

    Keeps wbar > 0 for any q, and wbar = 0 only for q >= 0, so every
    {(q, wbar), (-q, -wbar)} pair is counted exactly once.
    """
    return [
        t
        for t in ops
        if t.omega_bar > 0.0 or (t.omega_bar == 0.0 and t.q >= 0)
    ]


def heisenberg_coupling(p: SystemParams, s: Operator2, t: float) -> Operator2:
    """S(t) = U(t)^dag S U(t), exact via the closed-form propagator."""
    if s.basis is not Basis.DRESSED:
        raise ValueError("heisenberg_coupling expects a dressed-basis operator")
    u = dressed_propagator(p, dressed_basis(p), t)
    return u.dag() @ s @ u


def reconstruct_coupling(ops, p: SystemParams, t: float) -> Operator2:
    """Sum of S_q(wbar) exp(-i (wbar + q Omega) t) over the stored set."""
    m = np.zeros((2, 2), dtype=complex)
    for trans in ops:
        m += trans.op.m * np.exp(-1j * trans.combined(p) * t)
    return Operator2(m, Basis.DRESSED)


def numeric_decomposition_oracle(
    p: SystemParams,
    s: Operator2,
    n_periods: int = 200,
    samples_per_period: int = 16,
    threshold: float = 1e-8,
):
    """Recover the Fourier components of S(t) by discrete least squares.

    Projects samples of U(t)^dag S U(t) onto exp(-i (q Omega + k Wr) t) for
    all |q| <= 2, |k| <= 2.  Because S(t) lies exactly in that span the fit
    is limited only by the conditioning of the design matrix, so the window
    just needs to separate the candidate frequencies.  Returns a list of
    (q, k, matrix) with matrix norm above ``threshold``.
    """
    candidates = []
    for q in range(-2, 3):
        for k in range(-2, 3):
            f = q * p.Omega + k * p.omega_r
            for fq, fk, fv in candidates:
                if (fq, fk) != (q, k) and abs(fv - f) < COLLISION_TOL:
                    warnings.warn(
                        f"candidate frequencies for (q={q}, k={k}) and "
                        f"(q={fq}, k={fk}) collide at {f}; amplitudes may merge",
                        stacklevel=2,
                    )
            candidates.append((q, k, f))

    db = dressed_basis(p)
    n_samples = n_periods * samples_per_period
    times = np.linspace(0.0, n_periods * p.tau, n_samples, endpoint=False)
    samples = np.empty((n_samples, 4), dtype=complex)
    for i, t in enumerate(times):
        u = dressed_propagator(p, db, t)
        samples[i] = (u.m.conj().T @ s.m @ u.m).flatten()
    design = np.exp(-1j * np.outer(times, [f for _, _, f in candidates]))
    coeffs, *_ = np.linalg.lstsq(design, samples, rcond=None)

    found = []
    for (q, k, _), row in zip(candidates, coeffs):
        mat = row.reshape(2, 2)
        if np.linalg.norm(mat) > threshold:
            found.append((q, k, Operator2(mat, Basis.DRESSED)))
    return found
