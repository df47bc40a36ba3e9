"""Self-contained invariant suites backing the ``verify`` CLI command.

Every check draws from a seeded RNG, records the worst violation it saw,
and compares against a pinned tolerance, so a fixed seed gives a
byte-identical report.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra, dissipator, floquet, spectroscopy, thermo, transitions
from .algebra import Basis, Operator2


@dataclass(frozen=True)
class CheckResult:
    name: str
    cases: int
    tolerance: float
    max_violation: float
    passed: bool
    detail: str = ""


def _random_matrix(rng):
    return rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))


def _random_state(rng):
    x = _random_matrix(rng)
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def sample_params(rng) -> floquet.SystemParams:
    """Random parameters away from frequency collisions of the channel set."""
    while True:
        omega = rng.uniform(0.5, 10.0)
        g = rng.uniform(0.005, 0.1) * omega
        delta = rng.uniform(-0.2, 0.2) * omega
        p = floquet.make_params(omega + delta, omega, g)
        freqs = sorted(
            q * omega + k * p.omega_r for q in range(-2, 3) for k in range(-2, 3)
        )
        gaps = [b - a for a, b in zip(freqs, freqs[1:])]
        if p.omega_r < 0.45 * omega and min(gaps) > 0.02 * omega:
            return p


def check_algebra(rng, cases=100, tol=1e-12) -> CheckResult:
    worst = 0.0
    for _ in range(cases):
        m = Operator2(_random_matrix(rng))
        rec = algebra.pauli_reconstruct(algebra.pauli_decompose(m))
        worst = max(worst, np.linalg.norm(rec.m - m.m))
        worst = max(worst, np.linalg.norm(algebra.devectorize(algebra.vectorize(m), m.basis).m - m.m))
        h = Operator2(0.5 * (m.m + m.m.conj().T))
        t, s = rng.uniform(-5, 5, size=2)
        grp = algebra.expm_hermitian(h, t).m @ algebra.expm_hermitian(h, s).m
        worst = max(worst, np.linalg.norm(grp - algebra.expm_hermitian(h, t + s).m))
        sup = algebra.lindblad_superop(Operator2(_random_matrix(rng), Basis.DRESSED), rng.uniform(0, 2))
        out = sup.apply(Operator2(_random_state(rng), Basis.DRESSED))
        worst = max(worst, abs(out.trace()))
        worst = max(worst, np.linalg.norm(out.m - out.m.conj().T))
    return CheckResult("algebra_identities", cases, tol, worst, worst < tol)


def check_propagator(rng, cases=30, tol=1e-10) -> CheckResult:
    worst = 0.0
    for _ in range(cases):
        p = sample_params(rng)
        t = rng.uniform(0, 3 * p.tau)
        u = floquet.propagator(p, t)
        worst = max(worst, np.linalg.norm(u.m.conj().T @ u.m - np.eye(2)))
        ut = floquet.propagator(p, p.tau)
        worst = max(
            worst,
            np.linalg.norm(floquet.propagator(p, t + p.tau).m - u.m @ ut.m),
        )
        db = floquet.dressed_basis(p)
        worst = max(worst, abs((db.eps1 - db.eps2) - p.omega_r))
        worst = max(worst, abs(np.vdot(db.phi1, db.phi2)))
    return CheckResult("propagator_floquet_structure", cases, tol, worst, worst < tol)


def check_propagator_oracle(rng, cases=1, tol=1e-5) -> CheckResult:
    p = floquet.make_params(0.86, 0.85, 0.075)
    worst = 0.0
    for t in (p.tau / 7, p.tau / 3, p.tau):
        diff = floquet.propagator(p, t).m - floquet.propagator_oracle(p, t, 4000).m
        worst = max(worst, np.linalg.norm(diff))
    orders = convergence_order(p, p.tau, (250, 500, 1000))
    detail = f"convergence orders {orders}"
    passed = worst < tol and min(orders) >= 3.8
    return CheckResult("propagator_oracle", 3, tol, worst, passed, detail)


def convergence_order(p, t, step_counts):
    errors = []
    exact = floquet.propagator(p, t).m
    for n in step_counts:
        errors.append(np.linalg.norm(floquet.propagator_oracle(p, t, n).m - exact))
    return [
        round(float(np.log2(errors[i] / errors[i + 1])), 3)
        for i in range(len(errors) - 1)
    ]


def check_transitions(rng, cases=20, tol=1e-10) -> CheckResult:
    worst = 0.0
    for _ in range(cases):
        p = sample_params(rng)
        db = floquet.dressed_basis(p)
        hbar_d = floquet.to_dressed(floquet.mean_hamiltonian(p), db).m
        for maker, sigma in (
            (transitions.sigma1_transition_ops, algebra.SIGMA1),
            (transitions.sigma3_transition_ops, algebra.SIGMA3),
        ):
            ops = maker(p)
            by_key = {(t.q, round(t.omega_bar, 12)): t.op.m for t in ops}
            for trans in ops:
                comm = hbar_d @ trans.op.m - trans.op.m @ hbar_d + trans.omega_bar * trans.op.m
                worst = max(worst, np.linalg.norm(comm))
                mate = by_key[(-trans.q, round(-trans.omega_bar, 12))]
                worst = max(worst, np.linalg.norm(mate - trans.op.m.conj().T))
            s_d = Operator2(db.v.conj().T @ sigma @ db.v, Basis.DRESSED)
            for t in np.linspace(0.0, p.tau, 10):
                diff = (
                    transitions.reconstruct_coupling(ops, p, t).m
                    - transitions.heisenberg_coupling(p, s_d, t).m
                )
                worst = max(worst, np.linalg.norm(diff))
    return CheckResult("transition_operators", cases, tol, worst, worst < tol)


def check_decomposition_oracle(rng, cases=5, tol=1e-7) -> CheckResult:
    worst = 0.0
    for _ in range(cases):
        p = sample_params(rng)
        db = floquet.dressed_basis(p)
        for maker, sigma, qsel in (
            (transitions.sigma1_transition_ops, algebra.SIGMA1, 1),
            (transitions.sigma3_transition_ops, algebra.SIGMA3, 0),
        ):
            s_d = Operator2(db.v.conj().T @ sigma @ db.v, Basis.DRESSED)
            found = {
                (q, k): mat.m
                for q, k, mat in transitions.numeric_decomposition_oracle(p, s_d, 100, 16)
            }
            for trans in maker(p):
                k = int(round(trans.omega_bar / p.omega_r))
                worst = max(
                    worst, np.linalg.norm(found[(trans.q, k)] - trans.op.m)
                )
    return CheckResult("decomposition_oracle", cases, tol, worst, worst < tol)


def _fig1_generator():
    p = floquet.make_params(0.86, 0.85, 0.075)
    baths = [dissipator.BathSpec("e", "sigma1", 0.0, dissipator.cubic_density(1.0))]
    return p, baths, dissipator.total_generator(p, baths)


def check_master_equation(rng, cases=25, tol=1e-10) -> CheckResult:
    p, _, gen = _fig1_generator()
    rates = dissipator.fluorescence_rates(p, 1.0)
    worst = 0.0
    for _ in range(cases):
        rho0 = dissipator.density_matrix(_random_state(rng))
        t = rng.uniform(0, 10 / rates.gamma1)
        rho_t = dissipator.evolve_interaction(gen, rho0, t)
        worst = max(worst, abs(np.trace(rho_t.m) - 1.0))
        worst = max(worst, np.linalg.norm(rho_t.m - rho_t.m.conj().T))
        worst = max(worst, max(0.0, -np.linalg.eigvalsh(rho_t.m).min()))
        decay = np.exp(-rates.gamma1 * t)
        expected_11 = decay * rho0.m[0, 0].real + rates.delta_minus / rates.gamma1 * (1 - decay)
        worst = max(worst, abs(rho_t.m[0, 0].real - expected_11))
        worst = max(
            worst,
            abs(rho_t.m[0, 1] - np.exp(-rates.gamma2 * t) * rho0.m[0, 1]),
        )
    return CheckResult("master_equation_contracts", cases, tol, worst, worst < tol)


def check_detailed_balance(rng, cases=20, tol=1e-12) -> CheckResult:
    worst = 0.0
    for _ in range(cases):
        p = sample_params(rng)
        baths = [
            dissipator.BathSpec("e", "sigma1", rng.uniform(0.2, 5), dissipator.flat_density(rng.uniform(0.1, 2))),
            dissipator.BathSpec("d", "sigma3", rng.uniform(0.2, 5), dissipator.flat_density(rng.uniform(0.1, 2))),
        ]
        gen = dissipator.total_generator(p, baths)
        for term in gen.terms:
            if term.omega_bar == 0.0:
                continue
            gibbs = thermo.gibbs_like_state(p, term)
            worst = max(
                worst, np.linalg.norm(term.superop.m @ gibbs.m.flatten(order="F"))
            )
    return CheckResult("local_detailed_balance", cases, tol, worst, worst < tol)


def check_spectrum_oracle(rng, cases=1, tol=1e-3) -> CheckResult:
    p, _, gen = _fig1_generator()
    grid = np.linspace(p.Omega - 4 * p.omega_r, p.Omega + 4 * p.omega_r, 400)
    closed = spectroscopy.mollow_spectrum(p, 1.0, omega_grid=grid)
    oracle = spectroscopy.regression_spectrum_oracle(p, gen, grid, t_max=90.0, dt=0.02)
    scale = spectroscopy.fit_scale(oracle.grid_intensity, closed.grid_intensity)
    rel = np.linalg.norm(oracle.grid_intensity / scale - closed.grid_intensity) / np.linalg.norm(
        closed.grid_intensity
    )
    elastic_rel = abs(oracle.elastic_weight / scale - closed.elastic_weight) / closed.elastic_weight
    worst = max(rel, elastic_rel)
    return CheckResult("spectrum_oracle", 1, tol, worst, worst < tol)


def check_thermo(rng, cases=40, tol=1e-10) -> CheckResult:
    worst = 0.0
    for _ in range(cases):
        p = sample_params(rng)
        te, td = rng.uniform(0.2, 5, size=2)
        ge = dissipator.flat_density(rng.uniform(0.1, 2))
        gd = dissipator.cubic_density(rng.uniform(0.01, 0.5))
        baths = [
            dissipator.BathSpec("e", "sigma1", te, ge),
            dissipator.BathSpec("d", "sigma3", td, gd),
        ]
        gen = dissipator.total_generator(p, baths)
        rates = thermo.heatpump_rates(p, ge, gd)
        j_d, j_e, _ = thermo.heatpump_currents(rates, te, td)
        scale = max(1.0, abs(j_d), abs(j_e))
        worst = max(worst, abs(j_d - thermo.stationary_current(p, gen, "d")) / scale)
        worst = max(worst, abs(j_e - thermo.stationary_current(p, gen, "e")) / scale)
        worst = max(worst, j_d / td + j_e / te)
        rho_stat = dissipator.stationary_state(gen)
        for _ in range(10):
            worst = max(
                worst,
                thermo.spohn_functional(gen.superop.m, _random_state(rng), rho_stat.m),
            )
    return CheckResult("thermo_consistency", cases, tol, worst, worst < tol)


def check_regime_switch(rng, cases=1, tol=0.05) -> CheckResult:
    te, td = 2.0, 5.0
    ge = dissipator.flat_density(1.0)
    gd = dissipator.flat_density(0.5)
    worst = 0.0
    ok = True
    for delta in np.linspace(-0.05, 0.05, 20):
        p = floquet.make_params(100.0 + delta, 100.0, 0.01)
        baths = [
            dissipator.BathSpec("e", "sigma1", te, ge),
            dissipator.BathSpec("d", "sigma3", td, gd),
        ]
        rates = thermo.heatpump_rates(p, ge, gd)
        j_d, j_e, _ = thermo.heatpump_currents(rates, te, td)
        regime = thermo.classify_regime(j_d, j_e)
        ok = ok and j_e < 0
        ok = ok and regime == (thermo.COOLING if delta > 0 else thermo.HEATING)
        approx = thermo.small_detuning_currents(p, baths)
        if abs(delta) > 0.02:  # midpoints and beyond
            worst = max(worst, abs(j_d - approx.j_d_approx) / abs(approx.j_d_approx))
    return CheckResult("regime_switch", 20, tol, worst, ok and worst < tol)


ALL_CHECKS = (
    check_algebra,
    check_propagator,
    check_propagator_oracle,
    check_transitions,
    check_decomposition_oracle,
    check_master_equation,
    check_detailed_balance,
    check_spectrum_oracle,
    check_thermo,
    check_regime_switch,
)


def run_all(seed: int = 0, cases: int | None = None, tolerances: dict | None = None):
    """Run every suite with one seeded RNG; returns a list of CheckResult."""
    tolerances = tolerances or {}
    results = []
    for index, check in enumerate(ALL_CHECKS):
        rng = np.random.default_rng([seed, index])
        kwargs = {}
        if cases is not None:
            kwargs["cases"] = cases
        result = check(rng, **kwargs)
        if result.name in tolerances:
            tol = float(tolerances[result.name])
            result = CheckResult(
                result.name,
                result.cases,
                tol,
                result.max_violation,
                result.max_violation < tol,
                result.detail,
            )
        results.append(result)
    return results
