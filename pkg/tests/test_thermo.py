import numpy as np
import pytest

from driventls import dissipator, floquet, thermo


def random_params(rng):
    while True:
        omega = rng.uniform(0.5, 10.0)
        g = rng.uniform(0.005, 0.1) * omega
        delta = rng.uniform(-0.2, 0.2) * omega
        p = floquet.make_params(omega + delta, omega, g)
        if p.omega_r < 0.45 * omega:
            return p


def random_state(rng):
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def two_bath_setup(rng):
    p = random_params(rng)
    te, td = rng.uniform(0.2, 5.0, size=2)
    ge = dissipator.flat_density(rng.uniform(0.1, 2.0))
    gd = dissipator.cubic_density(rng.uniform(0.01, 0.5))
    baths = [
        dissipator.BathSpec("e", "sigma1", te, ge),
        dissipator.BathSpec("d", "sigma3", td, gd),
    ]
    return p, te, td, ge, gd, baths


def test_closed_form_currents_match_generator():
    rng = np.random.default_rng(51)
    for _ in range(200):
        p, te, td, ge, gd, baths = two_bath_setup(rng)
        gen = dissipator.total_generator(p, baths)
        r = thermo.heatpump_rates(p, ge, gd)
        j_d, j_e, _ = thermo.heatpump_currents(r, te, td)
        scale = max(1.0, abs(j_d), abs(j_e))
        assert abs(j_d - thermo.stationary_current(p, gen, "d")) / scale < 1e-12
        assert abs(j_e - thermo.stationary_current(p, gen, "e")) / scale < 1e-12


def test_second_law_in_steady_state():
    rng = np.random.default_rng(52)
    for _ in range(200):
        p, te, td, ge, gd, baths = two_bath_setup(rng)
        r = thermo.heatpump_rates(p, ge, gd)
        j_d, j_e, _ = thermo.heatpump_currents(r, te, td)
        assert j_d / td + j_e / te <= 1e-10


def test_spohn_inequality():
    rng = np.random.default_rng(53)
    for _ in range(5):
        p, _, _, _, _, baths = two_bath_setup(rng)
        gen = dissipator.total_generator(p, baths)
        rho_stat = dissipator.stationary_state(gen).m
        for _ in range(1000):
            value = thermo.spohn_functional(gen.superop.m, random_state(rng), rho_stat)
            assert value <= 1e-10


def test_gibbs_like_states_are_local_fixed_points():
    rng = np.random.default_rng(54)
    for _ in range(20):
        p, _, _, _, _, baths = two_bath_setup(rng)
        gen = dissipator.total_generator(p, baths)
        for term in gen.terms:
            if term.omega_bar == 0.0:
                continue
            gibbs = thermo.gibbs_like_state(p, term)
            residual = term.superop.m @ gibbs.m.flatten(order="F")
            assert np.linalg.norm(residual) < 1e-12


def test_steady_ratio_matches_stationary_populations():
    rng = np.random.default_rng(55)
    for _ in range(50):
        p, te, td, ge, gd, baths = two_bath_setup(rng)
        gen = dissipator.total_generator(p, baths)
        rho = dissipator.stationary_state(gen)
        r = thermo.heatpump_rates(p, ge, gd)
        ratio = thermo.heatpump_steady_ratio(r, te, td)
        assert rho.m[0, 0].real / rho.m[1, 1].real == pytest.approx(ratio, rel=1e-10)


def test_power_is_minus_total_current():
    currents = {"e": -1.5, "d": 0.25}
    assert thermo.stationary_power(currents) == pytest.approx(1.25)


def test_entropy_production_nonnegative():
    rng = np.random.default_rng(56)
    p, te, td, ge, gd, baths = two_bath_setup(rng)
    gen = dissipator.total_generator(p, baths)
    rho0 = dissipator.density_matrix(random_state(rng))
    trace = thermo.entropy_production(p, gen, rho0, np.linspace(0.0, 20.0, 30))
    assert not trace.vacuum_flagged
    assert (trace.sigma >= -1e-10).all()


def test_entropy_production_flags_vacuum_bath():
    p = floquet.make_params(0.86, 0.85, 0.075)
    baths = [dissipator.BathSpec("e", "sigma1", 0.0, dissipator.cubic_density(1.0))]
    gen = dissipator.total_generator(p, baths)
    rho0 = dissipator.density_matrix(np.diag([1.0, 0.0]).astype(complex))
    trace = thermo.entropy_production(p, gen, rho0, [0.0, 1.0])
    assert trace.vacuum_flagged


def test_small_detuning_regimes_and_slope():
    te, td = 2.0, 5.0
    ge = dissipator.flat_density(1.0)
    gd = dissipator.flat_density(0.5)
    baths = [
        dissipator.BathSpec("e", "sigma1", te, ge),
        dissipator.BathSpec("d", "sigma3", td, gd),
    ]
    for delta in np.linspace(-0.05, 0.05, 21):
        if delta == 0.0:
            continue
        p = floquet.make_params(100.0 + delta, 100.0, 0.01)
        r = thermo.heatpump_rates(p, ge, gd)
        j_d, j_e, _ = thermo.heatpump_currents(r, te, td)
        assert j_e < 0
        expected = thermo.COOLING if delta > 0 else thermo.HEATING
        assert thermo.classify_regime(j_d, j_e) == expected
        approx = thermo.small_detuning_currents(p, baths)
        if abs(delta) >= 0.02:
            assert abs(j_d - approx.j_d_approx) / abs(approx.j_d_approx) < 0.05
            assert abs(j_e - approx.j_e_approx) / abs(approx.j_e_approx) < 0.05
        assert approx.j_e_approx < 0


def test_small_detuning_condition_margin_enforced():
    baths = [
        dissipator.BathSpec("e", "sigma1", 2.0, dissipator.flat_density(1.0)),
        dissipator.BathSpec("d", "sigma3", 5.0, dissipator.flat_density(0.5)),
    ]
    p = floquet.make_params(1.01, 1.0, 0.01)  # Omega not >> temperatures
    with pytest.raises(ValueError):
        thermo.small_detuning_currents(p, baths)


def test_thermo_report_heat_pump():
    te, td = 2.0, 5.0
    baths = [
        dissipator.BathSpec("e", "sigma1", te, dissipator.flat_density(1.0)),
        dissipator.BathSpec("d", "sigma3", td, dissipator.flat_density(0.5)),
    ]
    p = floquet.make_params(100.025, 100.0, 0.01)
    report = thermo.thermo_report(p, baths)
    assert report.regime == thermo.COOLING
    assert not report.vacuum_flagged
    total = sum(report.currents.values()) + report.power
    assert abs(total) < 1e-12
    assert report.entropy_rate >= -1e-12
