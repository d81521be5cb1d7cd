import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudorotor.analysis import local_maxima
from pseudorotor.checks import Window, c1_factorization_error, c2_square_error
from pseudorotor.model import (
    Wavefunction,
    WindowError,
    branch_spec,
    coherent_state,
    make_params,
    momentum_eigenstate,
)
from pseudorotor.pseudo import BranchEnsemble, step_ensemble
from pseudorotor.quantum import (
    PropagatorPlan,
    apply_floquet,
    commutator_norm,
    dense_operators,
    evolve,
    free_rotation_residual,
    husimi_field,
    momentum_moments,
)

FIG1 = make_params(1, 4, 1, k=0.5, delta=0.04)


def random_state(rng, n_min, size):
    a = rng.normal(size=size) + 1j * rng.normal(size=size)
    return Wavefunction(n_min, a / np.linalg.norm(a))


# ---------------------------------------------------------------- single steps


def test_no_kick_leaves_zero_mode_unchanged():
    params = make_params(1, 4, 1, k=0.0, delta=0.04)
    plan = PropagatorPlan.around(params, -40, 40)
    out, _ = apply_floquet(momentum_eigenstate(0), plan)
    dense = out.embedded(plan.n_min, plan.size).amps
    expected = np.zeros(plan.size, dtype=complex)
    expected[plan.n == 0] = 1.0
    assert np.allclose(dense, expected, atol=1e-14)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.floats(0.0, 3.0), omega=st.integers(1, 4))
def test_step_is_unitary(seed, k, omega):
    params = make_params(1, 4, omega, k=k, delta=0.05)
    plan = PropagatorPlan.around(params, -300, 300)
    psi = random_state(np.random.default_rng(seed), -20, 41)
    out, report = apply_floquet(psi, plan)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    assert report.norm_after == pytest.approx(1.0, abs=1e-12)


def test_step_matches_dense_toeplitz_oracle():
    params = make_params(1, 3, 3, k=0.7, delta=0.03)
    u_f, u_delta, n = dense_operators(params, 301)
    psi = random_state(np.random.default_rng(1), -20, 41)
    vec = psi.embedded(int(n[0]), n.size).amps
    expected = u_f @ (u_delta @ vec)
    plan = PropagatorPlan.around(params, int(n[0]), int(n[-1]))
    out, _ = apply_floquet(psi, plan)
    got = out.embedded(plan.n_min, plan.size).amps
    lo = int(n[0]) - plan.n_min
    assert np.allclose(got[lo : lo + n.size], expected, atol=1e-12)


@pytest.mark.parametrize("omega", [1, 2, 3])
def test_kick_selection_rule(omega):
    params = make_params(1, 4, omega, k=0.8, delta=0.05)
    _, u_delta, n = dense_operators(params, 60)
    d = n[:, None] - n[None, :]
    if omega > 1:
        assert np.max(np.abs(u_delta[d % omega != 0])) < 1e-13
    assert np.max(np.abs(u_delta[d % omega == 0])) > 0.1


def test_window_leak_raises():
    plan = PropagatorPlan.around(FIG1, -30, 30)
    psi = Wavefunction(plan.n_min + 1, np.ones(1))
    with pytest.raises(WindowError):
        apply_floquet(psi, plan)


def test_antiresonance_limit():
    # r=1, s=2 with odd omega: U^2 -> 1 as delta -> 0 at fixed bare kick K
    residuals = []
    for delta in (1e-3, 1e-4, 1e-5):
        params = make_params(1, 2, 1, K=1.0, delta=delta, kick_mode="K")
        w = Window(params, -128, 256)
        psi = random_state(np.random.default_rng(3), -10, 21).embedded(-128, 256).amps
        out = w.floquet(w.floquet(psi))
        residuals.append(np.linalg.norm(out - psi))
    assert residuals[0] > residuals[1] > residuals[2]
    assert residuals[2] < 1e-3


# ---------------------------------------------------------------- evolution


def test_evolve_zero_steps():
    series, states = evolve(coherent_state(0.5, 0.5, 0.04), FIG1, 0, record_states=True)
    assert len(series) == 1 and list(states) == [0]


def test_evolve_without_kick_conserves_momentum():
    params = make_params(1, 4, 1, k=0.0, delta=0.04)
    series, _ = evolve(momentum_eigenstate(0), params, 20, p0=0.0)
    assert np.all(series.var_p < 1e-28)


def test_unitarity_drift_long_run():
    series, _ = evolve(coherent_state(0.5, 0.5, 0.04), FIG1, 1000)
    assert np.max(np.abs(series.norm_factor - 1.0)) < 1e-9


def test_adaptive_matches_fixed_large_window():
    psi0 = coherent_state(0.5, 0.5, 0.04)
    a, sa = evolve(psi0, FIG1, 40, record_states=True)
    plan = PropagatorPlan.around(FIG1, -2000, 2000)
    b, sb = evolve(psi0, FIG1, 40, plan=plan, adaptive=False, record_states=True)
    assert np.allclose(a.var_p, b.var_p, rtol=1e-10)
    assert abs(abs(sa[40].inner(sb[40])) - 1.0) < 1e-10


def test_sublattice_matches_full_lattice():
    params = make_params(1, 3, 3, k=2.0, delta=0.01)
    a, _ = evolve(momentum_eigenstate(0), params, 60, p0=0.0, use_sublattice=True)
    b, _ = evolve(momentum_eigenstate(0), params, 60, p0=0.0, use_sublattice=False)
    assert np.allclose(a.var_p, b.var_p, rtol=1e-10, atol=1e-14)


def test_fixed_window_overflow():
    plan = PropagatorPlan.around(FIG1, -40, 60)
    with pytest.raises(WindowError):
        evolve(coherent_state(0.5, 0.5, 0.04), FIG1, 50, plan=plan, adaptive=False)


def test_stop_predicate_ends_run():
    series, _ = evolve(coherent_state(0.5, 0.5, 0.04), FIG1, 100, stop=lambda t, m, v: t == 7)
    assert series.times[-1] == 7


def test_pt_norm_bounds():
    params = make_params(1, 4, 1, k=0.5, delta=0.04, lam=0.2)
    series, states = evolve(coherent_state(0.0, 0.0, 0.04), params, 15, record_states=True)
    gain = math.exp(params.k * params.lam / (params.delta * params.omega))
    assert np.all(series.norm_factor[1:] <= gain * (1 + 1e-12))
    assert np.all(series.norm_factor[1:] >= (1 - 1e-12) / gain)
    for psi in states.values():
        assert psi.norm() == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- moments


def test_moments_eigenstate():
    mean, var = momentum_moments(momentum_eigenstate(3), 0.1, 0.0)
    assert mean == pytest.approx(0.3)
    assert var == pytest.approx(0.09)


def test_moments_symmetric_superposition():
    amps = np.zeros(11, dtype=complex)
    amps[[2, 8]] = 1 / math.sqrt(2)
    mean, _ = momentum_moments(Wavefunction(-5, amps), 0.1, 0.0)
    assert mean == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("theta", [0.0, 0.5, 3.0])
def test_coherent_variance_is_half_delta(theta):
    _, var = momentum_moments(coherent_state(0.5, theta, 0.04), 0.04, 0.5)
    assert var == pytest.approx(0.02, rel=0.02)


# ---------------------------------------------------------------- free rotation and commutators


def test_free_rotation_residual_trivial_and_s3():
    assert free_rotation_residual(0.5, 0.5, 1, 1, 0.04, branch_spec(1, 1)) == 0.0
    assert free_rotation_residual(0.5, 0.5, 1, 3, 0.04, branch_spec(1, 3)) < 1e-8


def test_free_rotation_residual_fixes_assignment():
    direct = free_rotation_residual(0.5, 0.5, 1, 4, 0.04, branch_spec(1, 4, "direct"))
    swapped = free_rotation_residual(0.5, 0.5, 1, 4, 0.04, branch_spec(1, 4, "swapped"))
    assert direct < 1e-8
    assert swapped > 0.5


@settings(max_examples=15, deadline=None)
@given(p=st.floats(-3, 3), theta=st.floats(0, 2 * math.pi))
def test_free_rotation_residual_random_points(p, theta):
    for r, s in ((1, 5), (2, 5), (1, 6)):
        assert free_rotation_residual(p, theta, r, s, 0.01, branch_spec(r, s)) < 1e-8


def test_commutators():
    assert commutator_norm(make_params(1, 3, 3, k=0.5, delta=0.04)) < 1e-10
    assert commutator_norm(make_params(1, 4, 2, k=0.5, delta=0.04), primed=True) < 1e-10
    assert commutator_norm(make_params(1, 4, 1, k=0.5, delta=0.04)) > 0.1
    # with no kick every pair commutes
    assert commutator_norm(make_params(1, 4, 2, k=0.0, delta=0.04)) < 1e-10


def test_commutator_window_too_small():
    with pytest.raises(WindowError):
        commutator_norm(make_params(1, 3, 3, k=0.5, delta=0.04), size=12)


def test_c1_factorization():
    assert c1_factorization_error(make_params(1, 3, 3, k=0.5, delta=0.04), 0.5, 0.5) < 1e-9


def test_c2_square_keeps_pi_translation():
    params = make_params(1, 4, 2, k=0.5, delta=0.04)
    assert c2_square_error(params, 0.5, 0.5, with_free_square=True) < 1e-9
    # dropping U_f^2 leaves a pi shift in theta, so the states are orthogonal
    assert c2_square_error(params, 0.5, 0.5, with_free_square=False) == pytest.approx(math.sqrt(2), abs=1e-6)


# ---------------------------------------------------------------- Husimi


def _grid(delta, p_lo, p_hi):
    h = math.sqrt(delta / 2) / 6
    n_th = int(math.ceil(2 * math.pi / h))
    return np.arange(p_lo, p_hi, h), 2 * math.pi * np.arange(n_th) / n_th


def test_husimi_single_peak():
    psi = coherent_state(0.5, 2.0, 0.04)
    pg, tg = _grid(0.04, 0.0, 1.0)
    field = husimi_field(psi, pg, tg, 0.04)
    i, j = np.unravel_index(np.argmax(field), field.shape)
    assert abs(pg[i] - 0.5) <= pg[1] - pg[0]
    assert abs(tg[j] - 2.0) <= tg[1] - tg[0]
    assert field.max() == pytest.approx(1.0, abs=1e-3)


def test_husimi_superposition_two_equal_maxima():
    delta = 0.01
    a = coherent_state(0.3, 1.0, delta)
    b = coherent_state(0.3, 1.0 + math.pi, delta)
    psi = Wavefunction(a.n_min, (a.amps + b.amps) / math.sqrt(2)).normalized()
    pg = np.linspace(0.1, 0.5, 41)
    tg = 2 * math.pi * np.arange(360) / 360
    field = husimi_field(psi, pg, tg, delta)
    peaks = local_maxima(field, 0.5)
    assert len(peaks) == 2
    h = field[peaks[:, 0], peaks[:, 1]]
    assert h[0] == pytest.approx(h[1], rel=1e-6)
    assert sorted(tg[peaks[:, 1]]) == pytest.approx([1.0, 1.0 + math.pi], abs=0.02)


def test_husimi_one_step_matches_branches():
    _, states = evolve(coherent_state(0.5, 0.5, 0.04), FIG1, 1, record_states=True)
    ens = step_ensemble(BranchEnsemble.single(0.5, 0.5), FIG1)
    pg, tg = _grid(0.04, 0.2, 1.3)
    field = husimi_field(states[1], pg, tg, 0.04)
    peaks = local_maxima(field, 0.1)
    assert len(peaks) == 2
    for p, th in zip(ens.p, ens.theta):
        d = np.hypot(pg[peaks[:, 0]] - p, np.angle(np.exp(1j * (tg[peaks[:, 1]] - th))))
        assert d.min() < FIG1.sigma
