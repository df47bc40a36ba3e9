"""Heat currents, power, entropy production, and the two-bath heat pump.

Channel-resolved currents carry the weight (wbar + q Omega) / wbar; the
wbar = 0 channels move no energy between the averaged levels (their trace
factor vanishes identically), so their weight singularity is resolved to a
zero current.  All stationary quantities are evaluated in the interaction
picture where the generator is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import Basis, Operator2, devectorize, vectorize
from .dissipator import (
    BathSpec,
    CHANNEL_SIGMA1,
    CHANNEL_SIGMA3,
    DensityMatrix,
    Generator,
    LocalTerm,
    density_matrix,
    stationary_state,
    superop_expm,
)
from .floquet import SystemParams, dressed_basis, dressed_propagator, mean_hamiltonian, to_dressed

EIG_CLIP = 1e-14

COOLING = "cooling"
HEATING = "heating"
OTHER = "other"


@dataclass(frozen=True)
class HeatPumpRates:
    """Two-bath rates: delta0 from the dephasing bath, delta+- electromagnetic."""

    delta0: float
    delta_minus: float
    delta_plus: float
    omega_plus: float
    omega_minus: float


def heatpump_rates(p: SystemParams, ge, gd) -> HeatPumpRates:
    """Rates from the electromagnetic (ge) and dephasing (gd) densities."""
    wr = p.omega_r
    return HeatPumpRates(
        delta0=(2 * p.g / wr) ** 2 * gd(wr),
        delta_minus=((wr - p.delta) / (2 * wr)) ** 2 * ge(p.Omega - wr),
        delta_plus=((wr + p.delta) / (2 * wr)) ** 2 * ge(p.Omega + wr),
        omega_plus=p.Omega + wr,
        omega_minus=p.Omega - wr,
    )


def _dressed_mean_hamiltonian(p: SystemParams) -> np.ndarray:
    db = dressed_basis(p)
    return to_dressed(mean_hamiltonian(p), db).m


def _interaction_state(p: SystemParams, rho: DensityMatrix, t: float) -> np.ndarray:
    u = dressed_propagator(p, dressed_basis(p), t).m
    return u.conj().T @ rho.m @ u


def _term_current(term: LocalTerm, rho_i: np.ndarray, hbar_d: np.ndarray) -> float:
    if term.omega_bar == 0.0:
        return 0.0
    out = devectorize(term.superop.m @ rho_i.flatten(order="F")).m
    return (term.combined / term.omega_bar) * np.trace(out @ hbar_d).real


def local_heat_current(
    p: SystemParams, term: LocalTerm, rho_t: DensityMatrix, t: float
) -> float:
    """Heat current of one channel at Schroedinger-picture state rho(t)."""
    return _term_current(term, _interaction_state(p, rho_t, t), _dressed_mean_hamiltonian(p))


def gibbs_like_state(p: SystemParams, term: LocalTerm) -> DensityMatrix:
    """The channel's local stationary state exp{-(wbar+qW) Hbar / (wbar T)}/Z."""
    if term.omega_bar == 0.0:
        raise ValueError("the Gibbs-like state is undefined at omega_bar = 0")
    if term.temperature == 0.0:
        raise ValueError("the Gibbs-like state is undefined at T = 0")
    hbar_d = _dressed_mean_hamiltonian(p)
    exponent = -term.combined / (term.omega_bar * term.temperature)
    w, v = np.linalg.eigh(hbar_d)
    pops = np.exp(exponent * w)
    pops /= pops.sum()
    return density_matrix(v @ np.diag(pops) @ v.conj().T, Basis.DRESSED)


def stationary_current(p: SystemParams, gen: Generator, bath_label: str) -> float:
    """Stationary heat current flowing from the labelled bath."""
    rho = stationary_state(gen)
    hbar_d = _dressed_mean_hamiltonian(p)
    return sum(
        _term_current(term, rho.m, hbar_d)
        for term in gen.terms
        if term.bath_label == bath_label
    )


def stationary_power(currents) -> float:
    """Power supplied by the drive: minus the sum of all bath currents."""
    return -sum(currents.values())


def _safe_log(rho: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, EIG_CLIP, None)
    return v @ np.diag(np.log(w)) @ v.conj().T


def spohn_functional(gen_m: np.ndarray, rho: np.ndarray, rho_stat: np.ndarray) -> float:
    """Tr[(L rho)(ln rho - ln rho~)]; nonpositive for any LGKS generator."""
    lrho = devectorize(gen_m @ rho.flatten(order="F")).m
    return np.trace(lrho @ (_safe_log(rho) - _safe_log(rho_stat))).real


@dataclass(frozen=True)
class EntropyTrace:
    times: np.ndarray
    sigma: np.ndarray
    vacuum_flagged: bool


def entropy_production(
    p: SystemParams, gen: Generator, rho0: DensityMatrix, time_grid
) -> EntropyTrace:
    """sigma(t) = dS/dt - sum_j J_j(t)/T_j along the interaction-picture path.

    dS/dt is evaluated analytically as -Tr[(L rho) ln rho] (the Hamiltonian
    part commutes with ln rho and drops out).  Currents of zero-temperature
    baths are excluded and flagged: their entropy flow diverges formally and
    the second law is then certified through the Spohn inequality only.
    """
    hbar_d = _dressed_mean_hamiltonian(p)
    lm = gen.superop.m
    vacuum = any(term.temperature == 0.0 for term in gen.terms)
    times = np.asarray(time_grid, dtype=float)
    sigma = np.empty(times.size)
    for i, t in enumerate(times):
        rho_i = devectorize(
            superop_expm(gen.superop, t) @ vectorize(rho0.op)
        ).m
        rho_i = 0.5 * (rho_i + rho_i.conj().T)
        ds_dt = -np.trace(devectorize(lm @ rho_i.flatten(order="F")).m @ _safe_log(rho_i)).real
        flow = 0.0
        for term in gen.terms:
            if term.temperature == 0.0:
                continue
            flow += _term_current(term, rho_i, hbar_d) / term.temperature
        sigma[i] = ds_dt - flow
    return EntropyTrace(times, sigma, vacuum)


def heatpump_steady_ratio(r: HeatPumpRates, te: float, td: float) -> float:
    """Stationary population ratio rho~11 / rho~22 of the two-bath model."""
    if te <= 0 or td <= 0:
        raise ValueError("both bath temperatures must be positive")
    wr = 0.5 * (r.omega_plus - r.omega_minus)
    num = (
        math.exp(-wr / td) * r.delta0
        + r.delta_minus
        + math.exp(-r.omega_plus / te) * r.delta_plus
    )
    den = r.delta0 + math.exp(-r.omega_minus / te) * r.delta_minus + r.delta_plus
    return num / den


def heatpump_currents(r: HeatPumpRates, te: float, td: float):
    """Closed-form stationary currents (J_d, J_e, K) of the two-bath model."""
    if te <= 0 or td <= 0:
        raise ValueError("both bath temperatures must be positive")
    wr = 0.5 * (r.omega_plus - r.omega_minus)
    omega = 0.5 * (r.omega_plus + r.omega_minus)
    e_m = math.exp(-r.omega_minus / te)
    e_p = math.exp(-r.omega_plus / te)
    e_d = math.exp(-wr / td)
    kappa = (
        (1 + e_m) * r.delta_minus + (1 + e_p) * r.delta_plus + (1 + e_d) * r.delta0
    ) / wr
    j_d = (
        -(r.delta0 / kappa)
        * (
            r.delta_minus * (1 - e_d * e_m)
            + r.delta_plus * (e_p - e_d)
        )
    )
    j_e = (
        2 * (math.exp(-2 * omega / te) - 1) * omega * r.delta_minus * r.delta_plus
        + (e_m * e_d - 1) * r.omega_minus * r.delta0 * r.delta_minus
        + (e_p - e_d) * r.omega_plus * r.delta0 * r.delta_plus
    ) / (wr * kappa)
    return j_d, j_e, kappa


@dataclass(frozen=True)
class SmallDetuningResult:
    j_d_approx: float
    j_e_approx: float
    slope: float


def small_detuning_currents(
    p: SystemParams, baths, margin: float = 10.0
) -> SmallDetuningResult:
    """Leading small-detuning currents: J_d ~ D Delta, J_e < 0.

    Valid when Omega >> T_e, T_d, Omega_R << Omega, and Omega_R << T_d;
    each condition is checked with the given ratio margin.
    """
    em = _find_bath(baths, CHANNEL_SIGMA1)
    dep = _find_bath(baths, CHANNEL_SIGMA3)
    failures = []
    for name, big, small in (
        ("Omega >> T_e", p.Omega, em.temperature),
        ("Omega >> T_d", p.Omega, dep.temperature),
        ("Omega >> Omega_R", p.Omega, p.omega_r),
        ("T_d >> Omega_R", dep.temperature, p.omega_r),
    ):
        if big < margin * small:
            failures.append(f"{name} fails: {big} < {margin} * {small}")
    if failures:
        raise ValueError("small-detuning conditions violated: " + "; ".join(failures))
    r = heatpump_rates(p, em.density, dep.density)
    denom = 2 * r.delta0 + r.delta_minus + r.delta_plus
    slope = r.delta0 * em.density(p.Omega) / denom
    j_e = (
        -p.Omega
        * (2 * r.delta_minus * r.delta_plus + r.delta0 * (r.delta_minus + r.delta_plus))
        / denom
    )
    return SmallDetuningResult(slope * p.delta, j_e, slope)


def classify_regime(j_d: float, j_e: float) -> str:
    if j_d > 0 and j_e < 0:
        return COOLING
    if j_d < 0 and j_e < 0:
        return HEATING
    return OTHER


def _find_bath(baths, channel: str) -> BathSpec:
    found = [b for b in baths if b.channel == channel]
    if len(found) != 1:
        raise ValueError(f"expected exactly one {channel} bath, found {len(found)}")
    return found[0]


@dataclass(frozen=True)
class ThermoReport:
    """Stationary state, per-bath currents, power, entropy rate, regime."""

    stationary: DensityMatrix
    currents: dict
    power: float
    entropy_rate: float | None
    regime: str
    vacuum_flagged: bool


def thermo_report(p: SystemParams, baths) -> ThermoReport:
    """Full stationary thermodynamics of the two-bath (or any-bath) setup."""
    from .dissipator import total_generator

    gen = total_generator(p, baths)
    rho = stationary_state(gen)
    currents = {b.label: stationary_current(p, gen, b.label) for b in baths}
    power = stationary_power(currents)
    vacuum = any(b.temperature == 0.0 for b in baths)
    entropy_rate = None
    if not vacuum:
        entropy_rate = -sum(
            currents[b.label] / b.temperature for b in baths
        )
    by_channel = {b.channel: b.label for b in baths}
    j_d = currents.get(by_channel.get(CHANNEL_SIGMA3, ""), 0.0)
    j_e = currents.get(by_channel.get(CHANNEL_SIGMA1, ""), 0.0)
    return ThermoReport(rho, currents, power, entropy_rate, classify_regime(j_d, j_e), vacuum)
