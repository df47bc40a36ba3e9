"""Bath spectral densities, LGKS generators, and master-equation evolution.

Each bath couples through either s1 or s3 and contributes one local LGKS
generator per transition channel; the total generator is the sum.  All
generators act in the dressed basis and in the interaction picture; the
Schroedinger-picture solution is recovered by conjugating with U(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import (
    Basis,
    Operator2,
    SIGMA3,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SuperOp,
    devectorize,
    lindblad_superop,
    vectorize,
)
from .errors import DegenerateStateError
from .floquet import (
    SystemParams,
    dressed_basis,
    dressed_propagator,
    hamiltonian,
    to_dressed,
)
from .transitions import (
    TransitionOperator,
    generator_channels,
    sigma1_transition_ops,
    sigma3_transition_ops,
)

KERNEL_TOL = 1e-10
EXPM_COND_LIMIT = 1e12

CHANNEL_SIGMA1 = "sigma1"
CHANNEL_SIGMA3 = "sigma3"


@dataclass(frozen=True)
class SpectralDensity:
    """Spectral density on the positive half-line; KMS supplies omega < 0."""

    kind: str
    params: tuple

    def __call__(self, omega: float) -> float:
        if omega < 0:
            raise ValueError("SpectralDensity is defined for omega >= 0 only")
        if self.kind == "cubic":
            return self.params[0] * omega**3
        if self.kind == "flat":
            return self.params[0]
        if self.kind == "tabulated":
            grid, values = self.params
            return float(np.interp(omega, grid, values))
        raise ValueError(f"unknown spectral density kind {self.kind!r}")


def cubic_density(a: float) -> SpectralDensity:
    if a < 0:
        raise ValueError("cubic density constant must be nonnegative")
    return SpectralDensity("cubic", (a,))


def flat_density(value: float) -> SpectralDensity:
    if value < 0:
        raise ValueError("flat density value must be nonnegative")
    return SpectralDensity("flat", (value,))


def tabulated_density(grid, values) -> SpectralDensity:
    grid = tuple(float(x) for x in grid)
    values = tuple(float(x) for x in values)
    if any(v < 0 for v in values):
        raise ValueError("tabulated density values must be nonnegative")
    return SpectralDensity("tabulated", (grid, values))


@dataclass(frozen=True)
class BathSpec:
    """A heat bath: coupling channel, temperature (0 = vacuum), density."""

    label: str
    channel: str
    temperature: float
    density: SpectralDensity

    def __post_init__(self):
        if self.channel not in (CHANNEL_SIGMA1, CHANNEL_SIGMA3):
            raise ValueError(f"unknown coupling channel {self.channel!r}")
        if self.temperature < 0:
            raise ValueError("bath temperature must be >= 0")


def kms_density(bath: BathSpec, omega: float) -> float:
    """G(omega) extended to negative frequencies by the KMS condition.

    G(-w) = exp(-w/T) G(w) for w > 0; zero at T = 0.  At omega = 0 the
    positive-side limit G(0+) is used.
    """
    if omega >= 0:
        return bath.density(omega)
    if bath.temperature == 0.0:
        return 0.0
    return math.exp(omega / bath.temperature) * bath.density(-omega)


@dataclass(frozen=True)
class RateSet:
    """Fluorescence-case rates: delta0/delta+- transitions, gamma1/gamma2 decays."""

    delta0: float
    delta_minus: float
    delta_plus: float
    gamma1: float
    gamma2: float


def fluorescence_rates(p: SystemParams, a: float) -> RateSet:
    """Rates for the vacuum s1 bath with G(w) = a w^3."""
    if a <= 0:
        raise ValueError("density constant must be positive")
    g_of = cubic_density(a)
    wr = p.omega_r
    delta0 = (2 * p.g / wr) ** 2 * g_of(p.Omega)
    delta_minus = ((wr - p.delta) / (2 * wr)) ** 2 * g_of(p.Omega - wr)
    delta_plus = ((wr + p.delta) / (2 * wr)) ** 2 * g_of(p.Omega + wr)
    gamma1 = delta_minus + delta_plus
    gamma2 = 0.5 * (delta_minus + delta_plus + delta0)
    return RateSet(delta0, delta_minus, delta_plus, gamma1, gamma2)


@dataclass(frozen=True)
class DensityMatrix:
    """A valid state: Hermitian, unit trace, nonnegative spectrum."""

    op: Operator2

    def __post_init__(self):
        m = self.op.m
        if np.linalg.norm(m - m.conj().T) > 1e-12 * max(1.0, np.linalg.norm(m)):
            raise ValueError("density matrix must be Hermitian")
        if abs(np.trace(m) - 1.0) > 1e-12:
            raise ValueError(f"density matrix trace {np.trace(m)} != 1")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")

    @property
    def m(self):
        return self.op.m

    @property
    def basis(self):
        return self.op.basis


def density_matrix(matrix, basis=Basis.DRESSED) -> DensityMatrix:
    return DensityMatrix(Operator2(matrix, basis))


@dataclass(frozen=True)
class LocalTerm:
    """One local LGKS generator with its channel provenance."""

    bath_label: str
    channel: str
    temperature: float
    q: int
    omega_bar: float
    combined: float
    superop: SuperOp


@dataclass(frozen=True)
class Generator:
    """Interaction-picture generator: total superoperator plus local terms."""

    superop: SuperOp
    terms: tuple

    def bath_labels(self):
        seen = []
        for term in self.terms:
            if term.bath_label not in seen:
                seen.append(term.bath_label)
        return seen


def local_generator(s: TransitionOperator, bath: BathSpec, p: SystemParams) -> SuperOp:
    """G(w+) D[S] + G(-w+) D[S^dag] for the channel's combined frequency w+."""
    if s.omega_bar < 0:
        raise ValueError("choose the omega_bar >= 0 representative of the channel")
    combined = s.combined(p)
    down = kms_density(bath, combined)
    up = kms_density(bath, -combined)
    if down < 0 or up < 0:
        raise ValueError("spectral density returned a negative rate")
    return lindblad_superop(s.op, down) + lindblad_superop(s.op.dag(), up)


def total_generator(p: SystemParams, baths) -> Generator:
    total = SuperOp.zero(Basis.DRESSED)
    terms = []
    for bath in baths:
        if bath.channel == CHANNEL_SIGMA1:
            ops = sigma1_transition_ops(p, bath.label)
        else:
            ops = sigma3_transition_ops(p, bath.label)
        for rep in generator_channels(ops):
            sup = local_generator(rep, bath, p)
            terms.append(
                LocalTerm(
                    bath.label,
                    bath.channel,
                    bath.temperature,
                    rep.q,
                    rep.omega_bar,
                    rep.combined(p),
                    sup,
                )
            )
            total = total + sup
    return Generator(total, tuple(terms))


def superop_expm(sup: SuperOp, t: float) -> np.ndarray:
    """exp(t L) by eigendecomposition, scaling-and-squaring if ill-conditioned."""
    try:
        evals, right = np.linalg.eig(sup.m)
        if np.linalg.cond(right) > EXPM_COND_LIMIT:
            raise np.linalg.LinAlgError("eigenvector matrix ill-conditioned")
        return right @ (np.exp(evals * t)[:, None] * np.linalg.inv(right))
    except np.linalg.LinAlgError:
        return scipy.linalg.expm(sup.m * t)


def evolve_interaction(gen: Generator, rho0: DensityMatrix, t: float) -> DensityMatrix:
    """exp(t L) rho0 in the interaction picture."""
    if t < 0:
        raise ValueError("evolution time must be >= 0")
    v = superop_expm(gen.superop, t) @ vectorize(rho0.op)
    out = devectorize(v, rho0.basis).m
    return density_matrix(0.5 * (out + out.conj().T), rho0.basis)


def evolve_schrodinger(
    p: SystemParams, gen: Generator, rho0: DensityMatrix, t: float
) -> DensityMatrix:
    """U(t) [exp(t L) rho0] U(t)^dag, the factorized Schroedinger solution."""
    inner = evolve_interaction(gen, rho0, t)
    u = dressed_propagator(p, dressed_basis(p), t)
    return density_matrix((u @ inner.op @ u.dag()).m, Basis.DRESSED)


def evolve_ode_oracle(
    p: SystemParams,
    gen: Generator,
    rho0: DensityMatrix,
    t: float,
    steps: int,
    picture: str = "interaction",
) -> DensityMatrix:
    """Fixed-step 4th-order integration of the master equation.

    ``interaction`` integrates drho/dt = L rho with the constant generator;
    ``schrodinger`` integrates the time-inhomogeneous equation with
    -i[H(t), rho] + U(t) L (U(t)^dag rho U(t)) U(t)^dag, all in the dressed
    basis.  Independent of the exponential/factorized route it checks.
    """
    db = dressed_basis(p)
    if picture == "interaction":
        lm = gen.superop.m

        def rhs(s, v):
            return lm @ v

    elif picture == "schrodinger":
        lm = gen.superop.m

        def rhs(s, v):
            rho = devectorize(v).m
            u = dressed_propagator(p, db, s).m
            h = to_dressed(hamiltonian(p, s), db).m
            rot = (u.conj().T @ rho @ u).flatten(order="F")
            diss = devectorize(lm @ rot).m
            out = -1j * (h @ rho - rho @ h) + u @ diss @ u.conj().T
            return out.flatten(order="F")

    else:
        raise ValueError(f"unknown picture {picture!r}")

    v = vectorize(rho0.op)
    h_step = t / steps
    for n in range(steps):
        s = n * h_step
        k1 = rhs(s, v)
        k2 = rhs(s + 0.5 * h_step, v + 0.5 * h_step * k1)
        k3 = rhs(s + 0.5 * h_step, v + 0.5 * h_step * k2)
        k4 = rhs(s + h_step, v + h_step * k3)
        v = v + (h_step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    out = devectorize(v).m
    return density_matrix(0.5 * (out + out.conj().T), Basis.DRESSED)


def stationary_state(gen: Generator) -> DensityMatrix:
    """The unique trace-one kernel element of the generator."""
    _, s, vh = np.linalg.svd(gen.superop.m)
    small = s < KERNEL_TOL * max(1.0, s[0])
    if not small.any():
        raise DegenerateStateError("generator has no stationary state")
    if small.sum() > 1:
        raise DegenerateStateError(
            f"generator kernel is {small.sum()}-dimensional; "
            "stationary state is not unique"
        )
    rho = devectorize(vh[-1].conj()).m
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    return density_matrix(rho, Basis.DRESSED)


def phenomenological_generator(
    gamma_down: float, gamma_up: float, delta: float
) -> SuperOp:
    """Lab-basis comparison generator with damping, pumping, dephasing rates."""
    for name, rate in (("gamma_down", gamma_down), ("gamma_up", gamma_up), ("delta", delta)):
        if rate < 0:
            raise ValueError(f"{name} must be >= 0, got {rate}")
    return (
        lindblad_superop(Operator2(SIGMA_MINUS, Basis.LAB), gamma_down)
        + lindblad_superop(Operator2(SIGMA_PLUS, Basis.LAB), gamma_up)
        + lindblad_superop(Operator2(SIGMA3, Basis.LAB), delta)
    )
