import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pseudorotor.model import (
    Case,
    ParameterError,
    PhasePoint,
    Wavefunction,
    WindowError,
    branch_spec,
    classify_case,
    coherent_state,
    gauss_sum,
    gauss_sum_zero_positions,
    gauss_sums,
    make_params,
    momentum_eigenstate,
)


@st.composite
def coprime_pairs(draw, s_max=50):
    s = draw(st.integers(1, s_max))
    r = draw(st.integers(1, max(1, s - 1)).filter(lambda r: math.gcd(r, s) == 1))
    return r, s


# ---------------------------------------------------------------- parameters


def test_fig1_parameters():
    p = make_params(1, 4, 1, k=0.5, delta=0.04)
    assert p.alpha == pytest.approx(math.pi + 0.04, abs=1e-15)
    assert p.k == 0.5
    assert p.hermitian
    assert p.sigma == pytest.approx(math.sqrt(0.02))


def test_bare_kick_zero():
    assert make_params(1, 1, 1, K=0.0, delta=0.1, kick_mode="K").k == 0.0


def test_bare_kick_conversion_round_trips():
    p = make_params(1, 3, 3, K=7.0, delta=0.01, kick_mode="K")
    assert p.k == pytest.approx(7.0 * 0.01 / (4 * math.pi / 3 + 0.01))
    assert p.K == pytest.approx(7.0)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(r=2, s=4, omega=1, k=0.5, delta=0.04),
        dict(r=1, s=4, omega=0, k=0.5, delta=0.04),
        dict(r=1, s=4, omega=1, k=0.5, delta=0.0),
        dict(r=1, s=4, omega=1, k=0.5, delta=-0.1),
        dict(r=1, s=4, omega=1, k=0.5, delta=math.pi),
        dict(r=1, s=4, omega=1, k=-1.0, delta=0.04),
        dict(r=1, s=4, omega=1, k=0.5, delta=0.04, lam=-0.1),
        dict(r=1, s=4, omega=1, k=0.5, delta=0.04, kick_mode="x"),
        dict(r=1.5, s=4, omega=1, k=0.5, delta=0.04),
    ],
)
def test_invalid_parameters(kwargs):
    with pytest.raises(ParameterError):
        make_params(**kwargs)


def test_replace_revalidates():
    p = make_params(1, 4, 1, k=0.5, delta=0.04)
    assert p.replace(delta=0.01).delta == 0.01
    with pytest.raises(ParameterError):
        p.replace(s=2, r=2)


@pytest.mark.parametrize(
    "s, omega, case",
    [(3, 3, Case.C1), (4, 2, Case.C2), (4, 1, Case.GENERAL), (5, 5, Case.C1), (6, 3, Case.C2), (3, 1, Case.GENERAL)],
)
def test_classify_case(s, omega, case):
    assert classify_case(s, omega) is case


def test_phase_point_wraps():
    assert PhasePoint(0.1, 2 * math.pi + 0.3).theta == pytest.approx(0.3)
    assert PhasePoint(0.1, -0.3).theta == pytest.approx(2 * math.pi - 0.3)


# ---------------------------------------------------------------- states


def test_coherent_origin_is_real_symmetric():
    psi = coherent_state(0.0, 0.0, 0.04)
    assert np.allclose(psi.amps.imag, 0.0)
    assert np.all(psi.amps.real > 0)
    assert np.allclose(psi.amps, psi.amps[::-1])
    w = np.abs(psi.amps) ** 2
    assert math.sqrt(np.dot(w, psi.n**2)) == pytest.approx(math.sqrt(12.5), rel=1e-9)


def test_coherent_peak_at_half_integer():
    psi = coherent_state(0.5, 0.5, 0.04)
    mag = np.abs(psi.amps)
    top = psi.n[np.argsort(mag)[-2:]]
    assert sorted(top) == [12, 13]
    assert mag[psi.n == 12][0] == pytest.approx(mag[psi.n == 13][0], rel=1e-12)


def test_coherent_window_too_small():
    with pytest.raises(WindowError):
        coherent_state(0.0, 0.0, 0.04, window=(-3, 7))


@settings(max_examples=40, deadline=None)
@given(
    p=st.floats(-5, 5),
    theta=st.floats(0, 2 * math.pi),
    delta=st.floats(1e-3, 0.5),
)
def test_coherent_state_unit_norm(p, theta, delta):
    assert coherent_state(p, theta, delta).norm() == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(dth=st.floats(-1.0, 1.0), delta=st.floats(0.01, 0.2))
def test_coherent_overlap_matches_gaussian_decay(dth, delta):
    a = coherent_state(0.3, 1.0, delta)
    b = coherent_state(0.3, 1.0 + dth, delta)
    # |<p,t|p,t+d>| = |sum |g_n|^2 exp(-i n d)|, a Gaussian of width 1/(2 delta) in n
    assert abs(a.inner(b)) == pytest.approx(math.exp(-(dth**2) / (4 * delta)), abs=1e-10)


def test_wavefunction_embed_and_sublattice():
    psi = Wavefunction(-3, np.array([1, 0, 0, 2, 0, 0, 3], dtype=complex))
    sub = psi.on_sublattice(3)
    assert sub.stride == 3 and list(sub.n) == [-3, 0, 3]
    assert np.array_equal(sub.dense().amps, psi.amps)
    big = sub.embedded(-9, 6)
    assert list(big.n) == [-9, -6, -3, 0, 3, 6]
    with pytest.raises(ValueError):
        sub.embedded(-8, 6)
    assert psi.on_sublattice(2) is psi


def test_momentum_eigenstate():
    psi = momentum_eigenstate(5)
    assert psi.amps[psi.n == 5][0] == 1.0
    assert psi.norm() == 1.0


# ---------------------------------------------------------------- Gaussian sums


def test_gauss_s3_values():
    g = gauss_sums(1, 3)
    assert g[0] == pytest.approx(-1j * math.sqrt(3) / 3, abs=1e-14)
    assert g[1] == pytest.approx((3 + math.sqrt(3) * 1j) / 6, abs=1e-14)
    assert g[2] == pytest.approx((3 + math.sqrt(3) * 1j) / 6, abs=1e-14)


def test_gauss_s2_values():
    assert gauss_sum(1, 2, 0) == pytest.approx(0, abs=1e-15)
    assert gauss_sum(1, 2, 1) == pytest.approx(1, abs=1e-15)


def test_gauss_sum_range():
    with pytest.raises(ValueError):
        gauss_sum(1, 3, 3)


@settings(max_examples=80, deadline=None)
@given(coprime_pairs())
def test_gauss_sum_norm(rs):
    r, s = rs
    g = gauss_sums(r, s)
    assert abs(np.sum(np.abs(g) ** 2) - 1.0) < 1e-12
    if s % 2:
        assert np.allclose(np.abs(g), 1 / math.sqrt(s), atol=1e-12)
    else:
        zeros = [l for l in range(s) if abs(g[l]) < 1e-10]
        assert zeros == gauss_sum_zero_positions(s)
        assert len(zeros) == s // 2


def test_parity_rule_positions():
    assert gauss_sum_zero_positions(6) == [0, 2, 4]
    assert gauss_sum_zero_positions(8) == [1, 3, 5, 7]
    assert gauss_sum_zero_positions(7) == []


# ---------------------------------------------------------------- branch specs


def test_branch_spec_s4():
    spec = branch_spec(1, 4)
    assert spec.offsets == pytest.approx((0.0, math.pi))
    # direct summation: (1-i)/2 stays at offset 0, (1+i)/2 at offset pi
    assert spec.amplitudes[0] == pytest.approx((1 - 1j) / 2)
    assert spec.amplitudes[1] == pytest.approx((1 + 1j) / 2)
    swapped = branch_spec(1, 4, "swapped")
    assert swapped.amplitudes == spec.amplitudes[::-1]


def test_branch_spec_s3_and_s6():
    assert branch_spec(1, 3).offsets == pytest.approx((0, 2 * math.pi / 3, 4 * math.pi / 3))
    spec6 = branch_spec(1, 6)
    assert spec6.n_branches == 3
    # nonzero sums sit at odd l, i.e. offsets pi/3 * odd
    assert spec6.offsets == pytest.approx((math.pi / 3, math.pi, 5 * math.pi / 3))


def test_branch_spec_s1_identity():
    spec = branch_spec(1, 1)
    assert spec.n_branches == 1
    assert spec.entries[0] == (0.0, pytest.approx(1.0))


def test_branch_spec_rejects_non_coprime():
    with pytest.raises(ParameterError):
        branch_spec(2, 4)
    with pytest.raises(ValueError):
        branch_spec(1, 4, "other")
