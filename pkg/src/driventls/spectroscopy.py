"""Fluorescence spectrum of the driven TLS in vacuum.

Closed-form Mollow triplet with detuning (three Lorentzians plus an
elastic delta at the drive frequency) and an independent regression-based
numeric oracle built from the two-time correlation of the dipole.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Basis, Operator2, SIGMA_MINUS, SIGMA_PLUS
from .dissipator import Generator, fluorescence_rates, stationary_state
from .floquet import SystemParams, dressed_basis, dressed_propagator, to_dressed

ELASTIC = "elastic"
CENTRAL = "central"
SIDE_MINUS = "side_minus"
SIDE_PLUS = "side_plus"


@dataclass(frozen=True)
class SpectralLine:
    kind: str
    center: float
    width: float
    weight: float


@dataclass(frozen=True)
class Spectrum:
    """Elastic delta weight plus three Lorentzian lines, optionally sampled."""

    elastic_weight: float
    elastic_frequency: float
    lines: tuple
    grid_omega: np.ndarray | None = None
    grid_intensity: np.ndarray | None = None

    def line(self, kind: str) -> SpectralLine:
        for ln in self.lines:
            if ln.kind == kind:
                return ln
        raise KeyError(kind)

    def total_weight(self) -> float:
        return self.elastic_weight + sum(ln.weight for ln in self.lines)


def _lorentzian(width, center, omega):
    return (1.0 / np.pi) * width / (width**2 + (omega - center) ** 2)


def lorentzian_sum(lines, omega):
    """Continuous part of the spectrum (the elastic delta is excluded)."""
    omega = np.asarray(omega, dtype=float)
    total = np.zeros_like(omega)
    for ln in lines:
        total += ln.weight * _lorentzian(ln.width, ln.center, omega)
    return total


def mollow_spectrum(
    p: SystemParams, a: float, omega_grid=None, normalize: bool = False
) -> Spectrum:
    """Closed-form fluorescence spectrum for the vacuum s1 bath, G(w) = a w^3.

    Weights are emitted exactly as printed; ``normalize`` rescales the four
    weights (elastic plus three Lorentzians) to unit sum.
    """
    if p.g == 0.0:
        raise ValueError("no fluorescence problem exists at g = 0")
    r = fluorescence_rates(p, a)
    wr, d = p.omega_r, p.delta
    g1, g2 = r.gamma1, r.gamma2
    fourg2 = 4.0 * p.g**2

    elastic = ((r.delta_minus - r.delta_plus) / g1) ** 2
    central = 4.0 * (
        fourg2 * r.delta_plus / ((wr - d) ** 2 * g1)
    ) * (fourg2 * r.delta_minus / ((wr + d) ** 2 * g1))
    side_minus = fourg2 * r.delta_plus / ((wr + d) ** 2 * g1)
    side_plus = fourg2 * r.delta_minus / ((wr - d) ** 2 * g1)

    scale = 1.0
    if normalize:
        scale = 1.0 / (elastic + central + side_minus + side_plus)

    lines = (
        SpectralLine(CENTRAL, p.Omega, g1, scale * central),
        SpectralLine(SIDE_MINUS, p.Omega - wr, g2, scale * side_minus),
        SpectralLine(SIDE_PLUS, p.Omega + wr, g2, scale * side_plus),
    )
    grid_omega = grid_intensity = None
    if omega_grid is not None:
        grid_omega = np.asarray(omega_grid, dtype=float)
        grid_intensity = lorentzian_sum(lines, grid_omega)
    return Spectrum(scale * elastic, p.Omega, lines, grid_omega, grid_intensity)


@dataclass(frozen=True)
class RegressionSpectrum:
    """Numeric spectrum: sampled inelastic part plus extracted elastic weight."""

    grid_omega: np.ndarray
    grid_intensity: np.ndarray
    elastic_weight: float


def regression_spectrum_oracle(
    p: SystemParams,
    gen: Generator,
    omega_grid,
    t_max: float,
    dt: float,
) -> RegressionSpectrum:
    """I(w) from the dipole correlation C(t) = tr{s+ U(t)[e^{tL}(s- rs)]U^dag(t)}.

    The non-decaying part of C(t) (the kernel projection tr(s- rs) rho~,
    conjugated back to the Schroedinger picture) is subtracted and its
    Fourier coefficient at the drive frequency yields the elastic weight as
    pi * Re(a); the decaying remainder is transformed by trapezoidal
    quadrature.  Agrees with the closed form up to one global scale.
    """
    db = dressed_basis(p)
    sp = to_dressed(Operator2(SIGMA_PLUS, Basis.LAB), db).m
    sm = to_dressed(Operator2(SIGMA_MINUS, Basis.LAB), db).m
    rho_stat = stationary_state(gen).m

    evals, right = np.linalg.eig(gen.superop.m)
    right_inv = np.linalg.inv(right)
    x0 = right_inv @ (sm @ rho_stat).flatten(order="F")
    elastic_amplitude = np.trace(sm @ rho_stat)

    times = np.arange(0.0, t_max + 0.5 * dt, dt)
    corr = np.empty(times.size, dtype=complex)
    for i, t in enumerate(times):
        u = dressed_propagator(p, db, t).m
        xt = (right @ (np.exp(evals * t) * x0)).reshape(2, 2, order="F")
        decaying = xt - np.trace(xt) * rho_stat
        corr[i] = np.trace(sp @ (u @ decaying @ u.conj().T))

    if abs(corr[-1]) > 1e-8 * max(abs(corr[0]), 1e-300):
        raise ValueError(
            f"correlation has not decayed below 1e-8 of its initial value "
            f"within t_max={t_max}; increase the horizon"
        )

    omega_grid = np.asarray(omega_grid, dtype=float)
    weights = np.full(times.size, dt)
    weights[0] *= 0.5
    weights[-1] *= 0.5
    weighted = corr * weights
    intensity = np.empty(omega_grid.size)
    chunk = 256
    for start in range(0, omega_grid.size, chunk):
        ws = omega_grid[start : start + chunk]
        phases = np.exp(-1j * np.outer(ws, times))
        intensity[start : start + chunk] = (phases @ weighted).real

    # persistent part: tr(s- rho~) tr{s+ U rho~ U^dag}, tau-periodic; its
    # e^{+i Omega t} Fourier coefficient carries the delta at omega = Omega.
    tp = np.linspace(0.0, p.tau, 2048, endpoint=False)
    persistent = np.empty(tp.size, dtype=complex)
    for i, t in enumerate(tp):
        u = dressed_propagator(p, db, t).m
        persistent[i] = elastic_amplitude * np.trace(sp @ (u @ rho_stat @ u.conj().T))
    coeff = (persistent * np.exp(-1j * p.Omega * tp)).mean()
    elastic_weight = np.pi * coeff.real

    return RegressionSpectrum(omega_grid, intensity, elastic_weight)


def fit_scale(oracle_intensity, closed_intensity) -> float:
    """Least-squares global scale s with oracle ~ s * closed."""
    closed = np.asarray(closed_intensity, dtype=float)
    oracle = np.asarray(oracle_intensity, dtype=float)
    return float(oracle @ closed / (closed @ closed))
