"""Structural checks aggregated by the ``verify`` command."""

from __future__ import annotations

import math

import numpy as np
import scipy.fft as sfft

from .model import (
    ModelParams,
    branch_spec,
    coherent_state,
    gauss_sum_zero_positions,
    gauss_sums,
    make_params,
)
from .pseudo import BranchEnsemble, evolve_ensemble
from .quantum import (
    commutator_norm,
    detuned_phases,
    evolve,
    free_rotation_phases,
    free_rotation_residual,
    kick_field,
)

RESIDUAL_CASES = ((1, 3), (1, 4), (1, 5), (2, 5), (1, 6))


# ---------------------------------------------------------------- operators on a periodic window


class Window:
    """Lattice window ``n_min .. n_min + size - 1`` with FFT-applied operators.

    The kick is applied as a circular convolution, so states must stay well
    inside the window. ``size`` must be a multiple of omega.
    """

    def __init__(self, params: ModelParams, n_min: int, size: int):
        if size % params.omega:
            raise ValueError("window size must be a multiple of omega")
        self.params = params
        self.n = np.arange(n_min, n_min + size)
        theta = 2.0 * np.pi * np.arange(size) / size
        # psi(theta) = sum_n psi_n exp(+i n theta); shifting n by n_min is a phase on the grid
        self._kick = kick_field(theta, params)
        self._free = free_rotation_phases(self.n, params.r, params.s)
        self._detuned = detuned_phases(self.n, params.delta)
        self._nu_sign = np.exp(-1j * np.pi * ((params.r * self.n) % 2))

    def state(self, p: float, theta: float) -> np.ndarray:
        return coherent_state(p, theta, self.params.delta, (int(self.n[0]), self.n.size)).amps

    def kick(self, a: np.ndarray) -> np.ndarray:
        return sfft.fft(sfft.ifft(a) * self._kick)

    def u_f(self, a: np.ndarray) -> np.ndarray:
        return self._free * a

    def u_delta(self, a: np.ndarray) -> np.ndarray:
        return self._detuned * self.kick(a)

    def u_delta_primed(self, a: np.ndarray) -> np.ndarray:
        return self._nu_sign * self.u_delta(a)

    def floquet(self, a: np.ndarray) -> np.ndarray:
        return self.u_f(self.u_delta(a))


def _window_for(params: ModelParams, p: float, steps: int) -> Window:
    reach = int(math.ceil(steps * params.k / params.delta)) + 64
    size = 2 * reach + 2 * int(math.ceil(abs(p) / params.delta)) + 256
    size += (-size) % math.lcm(params.omega, 2)
    return Window(params, int(round(p / params.delta)) - size // 2, size)


def c1_factorization_error(params: ModelParams, p: float, theta: float, t_max: int = 10) -> float:
    """``max_t || (U_f U_delta)^t psi - U_f^t U_delta^t psi ||`` for a coherent state."""
    w = _window_for(params, p, t_max)
    psi = w.state(p, theta)
    lhs = psi.copy()
    rhs = psi.copy()
    worst = 0.0
    for t in range(1, t_max + 1):
        lhs = w.floquet(lhs)
        rhs = w.u_delta(rhs)
        fact = rhs
        for _ in range(t):
            fact = w.u_f(fact)
        worst = max(worst, float(np.linalg.norm(lhs - fact)))
    return worst


def c2_square_error(params: ModelParams, p: float, theta: float, with_free_square: bool) -> float:
    """Distance between ``(U_f U_delta)^2 psi`` and ``U'^2_delta psi``.

    With ``with_free_square`` the right side is ``U_f^2 U'^2_delta psi``, which
    keeps the pi translation in theta produced by ``U_f^2`` in this case.
    """
    w = _window_for(params, p, 2)
    psi = w.state(p, theta)
    lhs = w.floquet(w.floquet(psi))
    rhs = w.u_delta_primed(w.u_delta_primed(psi))
    if with_free_square:
        rhs = w.u_f(w.u_f(rhs))
    return float(np.linalg.norm(lhs - rhs))


# ---------------------------------------------------------------- individual checks


def gauss_norm_error(s_max: int = 50) -> float:
    worst = 0.0
    for s in range(1, s_max + 1):
        for r in range(1, max(2, s)):
            if math.gcd(r, s) == 1:
                g = gauss_sums(r, s)
                worst = max(worst, abs(float(np.sum(np.abs(g) ** 2)) - 1.0))
    return worst


def gauss_modulus_error(s_max: int = 50, eps: float = 1e-10) -> int:
    """Count of coprime ``(r, s)`` violating the odd-modulus or even-parity zero rule."""
    bad = 0
    for s in range(1, s_max + 1):
        for r in range(1, max(2, s)):
            if math.gcd(r, s) != 1:
                continue
            mod = np.abs(gauss_sums(r, s))
            if s % 2:
                bad += not np.allclose(mod, 1.0 / math.sqrt(s), atol=1e-12)
            else:
                zeros = [l for l in range(s) if mod[l] < eps]
                bad += zeros != gauss_sum_zero_positions(s) or len(zeros) != s // 2
    return bad


def residual_max(deltas=(0.04, 0.01), samples: int = 20, seed: int = 2024, assignment="direct") -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for r, s in RESIDUAL_CASES:
        spec = branch_spec(r, s, assignment)
        for delta in deltas:
            for p, th in zip(rng.uniform(-3, 3, samples), rng.uniform(0, 2 * np.pi, samples)):
                worst = max(worst, free_rotation_residual(p, th, r, s, delta, spec))
    return worst


def unitarity_drift(steps: int = 1000) -> float:
    params = make_params(1, 4, 1, k=0.5, delta=0.04)
    series, _ = evolve(coherent_state(0.5, 0.5, params.delta), params, steps)
    return float(np.max(np.abs(series.norm_factor - 1.0)))


def weight_error(t_max: int = 10) -> float:
    worst = 0.0
    for r, s, omega in ((1, 4, 1), (1, 3, 3), (1, 4, 2)):
        params = make_params(r, s, omega, k=0.5, delta=0.04)
        series, _ = evolve_ensemble(BranchEnsemble.single(0.5, 0.5), params, t_max)
        worst = max(worst, float(np.max(np.abs(series.norm_factor - 1.0))))
    return worst


def run_all(tol: dict) -> list[tuple[str, float, float, bool]]:
    rows = []

    def below(name, value, limit):
        rows.append((name, float(value), float(limit), bool(value < limit)))

    below("gauss_sum_norm", gauss_norm_error(), tol["gauss_norm_tol"])
    below("gauss_sum_modulus_parity_violations", gauss_modulus_error(eps=tol["eps_zero"]), 0.5)
    below("free_rotation_residual", residual_max(), tol["residual_tol"])
    # the reversed amplitude order must fail, otherwise the residual does not fix the assignment
    swapped = residual_max(samples=3, assignment="swapped")
    rows.append(("free_rotation_residual_swapped", swapped, tol["residual_tol"], swapped > 1e3 * tol["residual_tol"]))
    below("commutator_c1", commutator_norm(make_params(1, 3, 3, k=0.5, delta=0.04)), tol["commutator_tol"])
    below("commutator_c2_primed", commutator_norm(make_params(1, 4, 2, k=0.5, delta=0.04), primed=True),
          tol["commutator_tol"])
    general = commutator_norm(make_params(1, 4, 1, k=0.5, delta=0.04))
    rows.append(("commutator_general", general, 0.1, general > 0.1))
    below("unitarity_drift", unitarity_drift(), tol["unitarity_drift_tol"])
    below("ensemble_weight", weight_error(), tol["weight_tol"])
    c1 = make_params(1, 3, 3, k=0.5, delta=0.04)
    below("c1_factorization", c1_factorization_error(c1, 0.5, 0.5), tol["factorization_tol"])
    c2 = make_params(1, 4, 2, k=0.5, delta=0.04)
    below("c2_square_identity", c2_square_error(c2, 0.5, 0.5, with_free_square=True), tol["factorization_tol"])
    return rows
