"""Exact stroboscopic propagation of the (PT-symmetric) kicked rotor on a momentum lattice.

Angle representation: ``psi(theta) = sum_n psi_n exp(+i n theta)``, so that the
coherent state ``|p, theta0>`` (amplitudes ``~ exp(-i n theta0)``) is peaked at
``theta0`` on the angle grid. Grid point ``j`` of an ``N``-site window sits at
``theta_j = 2 pi j / N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.fft as sfft

from .analysis import ObservableSeries
from .tolerances import GROW_FACTOR, GROW_TOL, LEAK_TOL
from .model import (
    BranchSpec,
    ModelParams,
    Wavefunction,
    WindowError,
    coherent_amplitudes,
    coherent_half_width,
    coherent_state,
)



def free_rotation_phases(n: np.ndarray, r: int, s: int) -> np.ndarray:
    """``exp(-2 pi i (r/s) n^2)`` with the exponent reduced exactly in integers."""
    n = np.asarray(n, dtype=np.int64)
    residue = (r * ((n * n) % s)) % s
    return np.exp(-2j * np.pi * residue / s)


def detuned_phases(n: np.ndarray, delta: float) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    return np.exp(-0.5j * delta * (n * n).astype(float))


def kick_field(theta: np.ndarray, params: ModelParams) -> np.ndarray:
    """Kick factor on the angle grid, including the PT gain when ``lam > 0``.

    ``exp(-i k/(delta omega) cos(omega theta)) * exp(k lam/(delta omega) sin(omega theta))``
    """
    scale = params.k / (params.delta * params.omega)
    arg = params.omega * np.asarray(theta)
    field = np.exp(-1j * scale * np.cos(arg))
    if params.lam > 0.0:
        field = field * np.exp(scale * params.lam * np.sin(arg))
    return field


def guard_width(params: ModelParams) -> int:
    """Edge band (in lattice sites) whose occupation is reported as boundary leak.

    Wide enough that one kick cannot carry weight from outside the band to
    the opposite edge of the window.
    """
    return int(math.ceil(2.0 * params.k / params.delta)) + coherent_half_width(params.delta)


def _fast_size(minimum: int, multiple: int) -> int:
    m = max(1, -(-minimum // multiple))
    while True:
        size = m * multiple
        if sfft.next_fast_len(size) == size:
            return size
        m += 1


def window_size_multiple(params: ModelParams, stride: int = 1) -> int:
    # a wrap-around shift of stride * size sites must preserve n mod s,
    # n mod omega and the parity of n, otherwise the FFT's periodic images
    # break the exact commutation structure of the lattice operators
    period = math.lcm(params.s, params.omega, 2)
    return period // math.gcd(period, stride)


@dataclass(frozen=True, eq=False)
class PropagatorPlan:
    """Precomputed phases and kick field for one lattice window.

    Sites are ``n_min + stride * j`` for ``j < size``; the kick is sampled
    on ``theta_j = 2 pi j / (stride * size)``, one period of a field with
    harmonic ``omega`` when ``stride`` divides ``omega``.
    """

    params: ModelParams
    n_min: int
    size: int
    free_phases: np.ndarray
    kick: np.ndarray
    guard: int
    stride: int = 1

    @classmethod
    def build(cls, params: ModelParams, n_min: int, size: int, stride: int = 1) -> "PropagatorPlan":
        if params.omega % stride:
            raise ValueError(f"stride {stride} does not divide omega={params.omega}")
        n = n_min + stride * np.arange(size, dtype=np.int64)
        phases = free_rotation_phases(n, params.r, params.s) * detuned_phases(n, params.delta)
        theta = 2.0 * np.pi * np.arange(size) / (stride * size)
        guard = min(-(-guard_width(params) // stride), size // 4)
        return cls(params, int(n_min), int(size), phases, kick_field(theta, params), guard, stride)

    @classmethod
    def around(
        cls, params: ModelParams, n_lo: int, n_hi: int, stride: int = 1, residue: int = 0
    ) -> "PropagatorPlan":
        """Plan covering ``[n_lo, n_hi]`` plus guard bands, on sites ``n = residue mod stride``."""
        guard = -(-guard_width(params) // stride)
        needed = (n_hi - n_lo) // stride + 1 + 2 * guard + 2
        size = _fast_size(max(needed, 128), window_size_multiple(params, stride))
        center = (n_lo + n_hi) // 2
        n_min = center - stride * (size // 2)
        n_min -= (n_min - residue) % stride
        return cls.build(params, n_min, size, stride)

    @property
    def window(self) -> tuple[int, int]:
        return self.n_min, self.size

    @property
    def n(self) -> np.ndarray:
        return self.n_min + self.stride * np.arange(self.size, dtype=np.int64)

    @property
    def theta(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.size) / (self.stride * self.size)


def plan_for(params: ModelParams, p_max: float, p_min: float | None = None) -> PropagatorPlan:
    """Auto-sized plan covering momenta in ``[p_min, p_max]``.

    Half-width is at least ``max(64, ceil(p_max/delta) + 8 sigma_n)``.
    """
    if p_min is None:
        p_min = -abs(p_max)
    hw = coherent_half_width(params.delta)
    n_hi = max(64, int(math.ceil(p_max / params.delta)) + hw)
    n_lo = min(-64, int(math.floor(p_min / params.delta)) - hw)
    return PropagatorPlan.around(params, n_lo, n_hi)


@dataclass(frozen=True)
class StepReport:
    norm_before: float
    norm_after: float
    boundary_leak: float


def boundary_leak(amps: np.ndarray, guard: int) -> float:
    g = max(1, guard)
    a = amps[:g]
    b = amps[-g:]
    return float(np.vdot(a, a).real + np.vdot(b, b).real)


def _prepare(psi: Wavefunction, plan: PropagatorPlan) -> np.ndarray:
    if psi.stride != plan.stride:
        if psi.stride == 1:
            psi = psi.on_sublattice(plan.stride)
        if psi.stride != plan.stride:
            raise WindowError(f"state stride {psi.stride} does not match plan stride {plan.stride}")
    if psi.n_min == plan.n_min and psi.size == plan.size:
        return psi.amps
    try:
        return psi.embedded(plan.n_min, plan.size).amps
    except ValueError:
        raise WindowError(
            f"state on [{psi.n_min}, {psi.n_max}] does not fit plan window "
            f"[{plan.n_min}, {plan.n_min + plan.stride * (plan.size - 1)}]"
        ) from None


def apply_floquet(
    psi: Wavefunction, plan: PropagatorPlan, leak_tol: float = LEAK_TOL
) -> tuple[Wavefunction, StepReport]:
    """One Floquet period: kick on the angle grid, then free-rotation phases.

    For ``lam > 0`` the result is renormalized and ``norm_after`` holds the
    norm before renormalization.
    """
    amps = _prepare(psi, plan)
    leak = boundary_leak(amps, plan.guard)
    if leak > leak_tol:
        raise WindowError(f"boundary leak {leak:.3g} exceeds {leak_tol:.1g}; enlarge the window")
    norm_before = math.sqrt(np.vdot(amps, amps).real)
    grid = sfft.ifft(amps)
    grid *= plan.kick
    out = sfft.fft(grid, overwrite_x=True)
    out *= plan.free_phases
    norm_after = math.sqrt(np.vdot(out, out).real)
    if not plan.params.hermitian:
        out /= norm_after
    return Wavefunction(plan.n_min, out, plan.stride), StepReport(norm_before, norm_after, leak)


def momentum_moments(psi: Wavefunction, delta: float, p0: float) -> tuple[float, float]:
    """Mean of ``p = delta n`` and variance about ``p0``, normalized by the state norm."""
    w = np.abs(psi.amps) ** 2
    total = w.sum()
    # moments about the window start keep the sums well conditioned
    x = np.arange(psi.size, dtype=float)
    m1 = np.dot(w, x) / total
    m2 = np.dot(w, (x - m1) ** 2) / total
    mean = delta * (psi.n_min + psi.stride * m1)
    var = (delta * psi.stride) ** 2 * m2 + (mean - p0) ** 2
    return float(mean), float(var)


def _occupied_range(psi: Wavefunction, rel: float) -> tuple[int, int]:
    w = np.abs(psi.amps) ** 2
    occupied = np.nonzero(w > rel * w.max())[0]
    return psi.n_min + psi.stride * int(occupied[0]), psi.n_min + psi.stride * int(occupied[-1])


def _grow(psi: Wavefunction, plan: PropagatorPlan) -> PropagatorPlan:
    lo, hi = _occupied_range(psi, 1e-32)
    span = max(hi - lo, plan.stride * (plan.size - 2 * plan.guard))
    pad = int((GROW_FACTOR - 1.0) * span / 2)
    return PropagatorPlan.around(plan.params, lo - pad, hi + pad, plan.stride, plan.n_min)


def initial_plan(psi0: Wavefunction, params: ModelParams, use_sublattice: bool = True) -> PropagatorPlan:
    """Plan fitted to the initial state, on the coarsest sublattice the dynamics preserves."""
    stride = 1
    if use_sublattice and params.omega > 1:
        compressed = psi0.on_sublattice(params.omega)
        stride = compressed.stride
    elif psi0.stride > 1 and params.omega % psi0.stride == 0:
        stride = psi0.stride
    lo, hi = _occupied_range(psi0, 0.0)
    span = int(math.ceil(params.k / params.delta)) + 64
    return PropagatorPlan.around(params, lo - span, hi + span, stride, lo)


def evolve(
    psi0: Wavefunction,
    params: ModelParams,
    t_max: int,
    p0: float | None = None,
    plan: PropagatorPlan | None = None,
    record_states: bool | Callable[[int], bool] = False,
    adaptive: bool = True,
    stop: Callable[[int, float, float], bool] | None = None,
    leak_tol: float = LEAK_TOL,
    use_sublattice: bool = True,
) -> tuple[ObservableSeries, dict[int, Wavefunction]]:
    """Iterate the Floquet operator ``t_max`` times and record momentum moments.

    Parameters
    ----------
    p0 : float, optional
        Reference momentum for the variance; defaults to the initial mean.
    plan : PropagatorPlan, optional
        Fixed plan. Without one, a plan is sized from the initial state and
        (if ``adaptive``) enlarged whenever weight approaches the edge bands.
        With ``adaptive=False`` a leak above ``leak_tol`` raises
        :class:`WindowError`.
    record_states : bool or callable
        Snapshot the state at every step, or at steps where the callable is true.
    stop : callable, optional
        ``stop(t, mean_p, var_p)``; evolution ends after the first step where it
        returns True.
    use_sublattice : bool
        Propagate on ``n = n0 mod omega`` when the initial state lives there.
    """
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    if plan is None:
        plan = initial_plan(psi0, params, use_sublattice)
    elif plan.params != params:
        raise ValueError("plan was built for different parameters")
    psi = Wavefunction(plan.n_min, _prepare(psi0, plan), plan.stride)
    if not params.hermitian:
        psi = psi.normalized()
    if p0 is None:
        p0 = momentum_moments(psi, params.delta, 0.0)[0]
    mean, var = momentum_moments(psi, params.delta, p0)
    want = record_states if callable(record_states) else (lambda t: bool(record_states))
    times, means, variances = [0], [mean], [var]
    norms, leaks = [psi.norm()], [boundary_leak(psi.amps, plan.guard)]
    states = {0: psi} if want(0) else {}
    for t in range(1, t_max + 1):
        if adaptive and boundary_leak(psi.amps, plan.guard) > GROW_TOL:
            plan = _grow(psi, plan)
            psi = Wavefunction(plan.n_min, _prepare(psi, plan), plan.stride)
        psi, report = apply_floquet(psi, plan, leak_tol)
        mean, var = momentum_moments(psi, params.delta, p0)
        times.append(t)
        means.append(mean)
        variances.append(var)
        norms.append(report.norm_after)
        leaks.append(report.boundary_leak)
        if want(t):
            states[t] = psi
        if stop is not None and stop(t, mean, var):
            break
    series = ObservableSeries(
        times=np.array(times),
        mean_p=np.array(means),
        var_p=np.array(variances),
        norm_factor=np.array(norms),
        boundary_leak=np.array(leaks),
        p0=p0,
    )
    return series, states


def coherent_norm_constant(p: float, delta: float) -> float:
    """Normalization ``c`` of ``|p, theta>`` on the infinite lattice."""
    hw = coherent_half_width(delta) + 8
    n = np.arange(int(round(p / delta)) - hw, int(round(p / delta)) + hw + 1)
    return 1.0 / math.sqrt(float(np.sum(np.exp(-delta * (n - p / delta) ** 2))))


def husimi_field(
    psi: Wavefunction, p_grid: np.ndarray, theta_grid: np.ndarray, delta: float
) -> np.ndarray:
    """``H[i, j] = |<p_i, theta_j | psi>|^2`` with coherent states of width ``delta``."""
    p_grid = np.asarray(p_grid, dtype=float)
    theta_grid = np.asarray(theta_grid, dtype=float)
    psi = psi.dense()
    w = np.abs(psi.amps)
    occupied = np.nonzero(w > 1e-14 * w.max())[0]
    lo, hi = int(occupied[0]), int(occupied[-1]) + 1
    amps = psi.amps[lo:hi]
    n = np.arange(psi.n_min + lo, psi.n_min + hi)
    out = np.empty((p_grid.size, theta_grid.size))
    # <p,theta|psi> = c(p) sum_n g_n(p) exp(+i n theta) psi_n ; chunk rows to bound memory
    phase = np.exp(1j * np.outer(n.astype(float), theta_grid))
    chunk = max(1, 2_000_000 // max(1, n.size))
    for start in range(0, p_grid.size, chunk):
        ps = p_grid[start : start + chunk]
        g = np.exp(-0.5 * delta * (n[None, :] - ps[:, None] / delta) ** 2)
        c = np.array([coherent_norm_constant(p, delta) for p in ps])
        amp = (g * amps[None, :]) @ phase
        out[start : start + chunk] = (c[:, None] * np.abs(amp)) ** 2
    return out


def free_rotation_residual(
    p: float,
    theta: float,
    r: int,
    s: int,
    delta: float,
    spec: BranchSpec,
) -> float:
    """``|| U_f |p,theta> - sum_j A_j |p, theta + Delta_j> ||`` on an exact lattice window."""
    hw = coherent_half_width(delta) + 16
    center = int(round(p / delta))
    window = (center - hw, 2 * hw + 1)
    psi = coherent_state(p, theta, delta, window)
    lhs = psi.amps * free_rotation_phases(psi.n, r, s)
    rhs = np.zeros_like(lhs)
    for offset, amp in spec.entries:
        rhs += amp * coherent_state(p, theta + offset, delta, window).amps
    return float(np.linalg.norm(lhs - rhs))


def kick_coefficients(params: ModelParams, max_order: int) -> np.ndarray:
    """Fourier coefficients ``c_d``, ``d = -max_order..max_order``, of the kick field.

    ``c_d = (1/M) sum_j exp(-i d theta_j) f(theta_j)`` on an ``M``-point grid
    (``M`` a multiple of omega, at least ``4 max_order``), i.e. the same
    quadrature the propagator uses.
    """
    m = _fast_size(4 * max_order + 8, math.lcm(params.omega, 2))
    theta = 2.0 * np.pi * np.arange(m) / m
    c = sfft.fft(kick_field(theta, params)) / m
    d = np.arange(-max_order, max_order + 1)
    return c[d % m]


def dense_operators(
    params: ModelParams, size: int, n_min: int | None = None
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense ``(U_f, U_delta, n)`` on a truncated window of the infinite lattice."""
    if n_min is None:
        n_min = -(size // 2)
    n = np.arange(n_min, n_min + size)
    c = kick_coefficients(params, size - 1)
    d = n[:, None] - n[None, :]
    kick = c[d + size - 1]
    u_delta = detuned_phases(n, params.delta)[:, None] * kick
    u_f = np.diag(free_rotation_phases(n, params.r, params.s))
    return u_f, u_delta, n


def primed_operators(u_f: np.ndarray, u_delta: np.ndarray, n: np.ndarray, r: int):
    """``U'_f = U_f exp(i pi r nu)`` and ``U'_delta = exp(-i pi r nu) U_delta``."""
    shift = np.exp(1j * np.pi * ((r * n) % 2))
    return u_f * shift[None, :], np.conj(shift)[:, None] * u_delta


def commutator_norm(params: ModelParams, size: int = 512, primed: bool = False) -> float:
    """Frobenius norm of ``[U_f, U_delta]`` (or the primed pair) away from the window edges.

    A frame of ``2 omega`` rows and columns is dropped on each side.
    """
    frame = 2 * params.omega
    if size <= 2 * frame + 1:
        raise WindowError(f"window of {size} sites is too small for a {frame}-site frame")
    u_f, u_delta, n = dense_operators(params, size)
    if primed:
        u_f, u_delta = primed_operators(u_f, u_delta, n, params.r)
    comm = u_f @ u_delta - u_delta @ u_f
    inner = comm[frame:-frame, frame:-frame]
    return float(np.linalg.norm(inner))
