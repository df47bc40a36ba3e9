import math

import numpy as np
import pytest

from driventls import dissipator, floquet
from driventls.algebra import Basis, Operator2
from driventls.errors import DegenerateStateError


FIG1 = floquet.make_params(0.86, 0.85, 0.075)

# Values computed once from the rate formulas at the Fig. 1 parameters
# (Omega=0.85, Delta=0.01, g=0.075, vacuum density w^3) and frozen.
FIG1_RATES = {
    "delta0": 0.61140763274336285,
    "delta_minus": 0.07461483864890385,
    "delta_plus": 0.28464984497941481,
    "gamma1": 0.35926468362831865,
    "gamma2": 0.48533615818584075,
}


def random_state(rng):
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def vacuum_bath():
    return dissipator.BathSpec("e", "sigma1", 0.0, dissipator.cubic_density(1.0))


def test_spectral_density_kinds():
    assert dissipator.cubic_density(2.0)(3.0) == pytest.approx(54.0)
    assert dissipator.flat_density(0.7)(5.0) == pytest.approx(0.7)
    tab = dissipator.tabulated_density([0.0, 1.0, 2.0], [0.0, 2.0, 2.0])
    assert tab(0.5) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        dissipator.cubic_density(-1.0)
    with pytest.raises(ValueError):
        dissipator.cubic_density(1.0)(-0.1)


def test_kms_extension():
    bath = dissipator.BathSpec("e", "sigma1", 2.0, dissipator.flat_density(1.5))
    w = 0.8
    assert dissipator.kms_density(bath, -w) == pytest.approx(
        math.exp(-w / 2.0) * dissipator.kms_density(bath, w)
    )
    assert dissipator.kms_density(vacuum_bath(), -0.3) == 0.0
    assert dissipator.kms_density(vacuum_bath(), 0.3) == pytest.approx(0.3**3)


def test_bath_spec_validation():
    with pytest.raises(ValueError):
        dissipator.BathSpec("x", "sigma2", 1.0, dissipator.flat_density(1.0))
    with pytest.raises(ValueError):
        dissipator.BathSpec("x", "sigma1", -1.0, dissipator.flat_density(1.0))


def test_fluorescence_rates_frozen_values():
    r = dissipator.fluorescence_rates(FIG1, 1.0)
    for name, value in FIG1_RATES.items():
        assert getattr(r, name) == pytest.approx(value, rel=1e-14)
    assert r.gamma1 == pytest.approx(r.delta_minus + r.delta_plus)
    assert r.gamma2 == pytest.approx(0.5 * (r.delta_minus + r.delta_plus + r.delta0))


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        dissipator.density_matrix(np.array([[0.5, 0.9], [0.1, 0.5]]))
    with pytest.raises(ValueError):
        dissipator.density_matrix(np.diag([0.7, 0.7]))
    with pytest.raises(ValueError):
        dissipator.density_matrix(np.diag([1.5, -0.5]))


def test_generator_term_bookkeeping():
    gen = dissipator.total_generator(FIG1, [vacuum_bath()])
    assert gen.bath_labels() == ["e"]
    assert len(gen.terms) == 3
    assert sorted((t.q, np.sign(t.omega_bar)) for t in gen.terms) == [
        (-1, 1.0),
        (1, 0.0),
        (1, 1.0),
    ]


def test_evolution_preserves_state_contracts():
    rng = np.random.default_rng(41)
    gen = dissipator.total_generator(FIG1, [vacuum_bath()])
    for _ in range(100):
        rho0 = dissipator.density_matrix(random_state(rng))
        t = rng.uniform(0, 30.0)
        rho_t = dissipator.evolve_interaction(gen, rho0, t)
        assert abs(np.trace(rho_t.m) - 1.0) < 1e-12
        assert np.linalg.norm(rho_t.m - rho_t.m.conj().T) < 1e-12
        assert np.linalg.eigvalsh(rho_t.m).min() >= -1e-10


def test_closed_form_interaction_solution():
    # diag relaxes at gamma1 toward delta_-/gamma1, coherence decays at gamma2
    rng = np.random.default_rng(42)
    gen = dissipator.total_generator(FIG1, [vacuum_bath()])
    r = dissipator.fluorescence_rates(FIG1, 1.0)
    for _ in range(50):
        rho0 = dissipator.density_matrix(random_state(rng))
        t = rng.uniform(0, 20.0)
        rho_t = dissipator.evolve_interaction(gen, rho0, t)
        decay = math.exp(-r.gamma1 * t)
        p11 = decay * rho0.m[0, 0].real + (r.delta_minus / r.gamma1) * (1 - decay)
        assert abs(rho_t.m[0, 0].real - p11) < 1e-10
        assert abs(rho_t.m[0, 1] - math.exp(-r.gamma2 * t) * rho0.m[0, 1]) < 1e-10


def test_factorized_solution_matches_ode_oracle_both_pictures():
    rng = np.random.default_rng(43)
    gen = dissipator.total_generator(FIG1, [vacuum_bath()])
    rho0 = dissipator.density_matrix(random_state(rng))
    t = 3.0
    inter = dissipator.evolve_interaction(gen, rho0, t)
    inter_ode = dissipator.evolve_ode_oracle(FIG1, gen, rho0, t, 3000, "interaction")
    assert np.linalg.norm(inter.m - inter_ode.m) < 1e-9
    schro = dissipator.evolve_schrodinger(FIG1, gen, rho0, t)
    schro_ode = dissipator.evolve_ode_oracle(FIG1, gen, rho0, t, 3000, "schrodinger")
    assert np.linalg.norm(schro.m - schro_ode.m) < 1e-9


def test_stationary_state_populations():
    gen = dissipator.total_generator(FIG1, [vacuum_bath()])
    rho = dissipator.stationary_state(gen)
    r = dissipator.fluorescence_rates(FIG1, 1.0)
    assert rho.m[0, 0].real == pytest.approx(r.delta_minus / r.gamma1, abs=1e-12)
    assert rho.m[0, 0].real == pytest.approx(0.20768765216593757, abs=1e-12)
    assert abs(rho.m[0, 1]) < 1e-12
    # the stationary state is a fixed point of the evolution
    later = dissipator.evolve_interaction(gen, rho, 5.0)
    assert np.linalg.norm(later.m - rho.m) < 1e-12


def test_degenerate_kernel_detected():
    gen = dissipator.Generator(dissipator.SuperOp.zero(Basis.DRESSED), ())
    with pytest.raises(DegenerateStateError):
        dissipator.stationary_state(gen)


def test_phenomenological_generator_relaxation():
    sup = dissipator.phenomenological_generator(0.4, 0.1, 0.05)
    rho = Operator2(np.diag([0.9, 0.1]).astype(complex), Basis.LAB)
    out = sup.apply(rho)
    # population decay gamma_down * 0.9 - gamma_up * 0.1 out of the excited level
    assert out.m[0, 0].real == pytest.approx(-0.4 * 0.9 + 0.1 * 0.1)
    with pytest.raises(ValueError):
        dissipator.phenomenological_generator(-0.1, 0.0, 0.0)
