"""Generalized pseudoclassical dynamics: kick map, branching free rotation, coherent merging.

An ensemble is a set of phase-space points carrying complex amplitudes.
Points that coincide are merged by adding amplitudes, so branches can
cancel. Points from different ``origin`` labels never merge; this keeps an
incoherent ensemble of initial conditions (a uniform line of points) as a
collection of independent pseudoclassical runs evaluated in one array pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import ObservableSeries
from .model import BranchSpec, ModelParams, PhasePoint, branch_spec
from .tolerances import AMP_TOL, BRANCH_CAP, POS_TOL, SEL_TOL

TWO_PI = 2.0 * math.pi


class BranchCapError(RuntimeError):
    """The ensemble outgrew the configured branch cap."""


def map_delta(point: PhasePoint, k: float, omega: int) -> PhasePoint:
    p = point.p + k * math.sin(omega * point.theta)
    return PhasePoint(p, point.theta + p)


def map_delta_nh(point: PhasePoint, k: float, omega: int, lam: float) -> PhasePoint:
    """Non-Hermitian kick map; both kick jumps use the pre-kick angle."""
    p = point.p + k * math.sin(omega * point.theta)
    theta = point.theta + k * lam * math.cos(omega * point.theta)
    return PhasePoint(p, theta + p)


def kick_arrays(p, theta, k: float, omega: int, lam: float = 0.0):
    """Vectorized :func:`map_delta` / :func:`map_delta_nh`; theta is reduced mod 2 pi."""
    arg = omega * theta
    p_new = p + k * np.sin(arg)
    th = theta + k * lam * np.cos(arg) if lam else theta
    return p_new, np.mod(th + p_new, TWO_PI)


@dataclass(frozen=True)
class Branch:
    point: PhasePoint
    amp: complex


@dataclass(eq=False)
class BranchEnsemble:
    p: np.ndarray
    theta: np.ndarray
    amp: np.ndarray
    origin: np.ndarray
    generation: int = 0

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        self.theta = np.mod(np.asarray(self.theta, dtype=float), TWO_PI)
        self.amp = np.asarray(self.amp, dtype=complex)
        self.origin = np.asarray(self.origin, dtype=np.int64)

    @classmethod
    def single(cls, p: float, theta: float, amp: complex = 1.0) -> "BranchEnsemble":
        return cls(np.array([p]), np.array([theta]), np.array([amp]), np.zeros(1, dtype=np.int64))

    @classmethod
    def from_branches(cls, branches, origin=None, generation=0) -> "BranchEnsemble":
        branches = list(branches)
        p = np.array([b.point.p for b in branches])
        th = np.array([b.point.theta for b in branches])
        amp = np.array([b.amp for b in branches], dtype=complex)
        if origin is None:
            origin = np.zeros(len(branches), dtype=np.int64)
        return cls(p, th, amp, origin, generation)

    @property
    def branches(self) -> list[Branch]:
        return [Branch(PhasePoint(p, t), complex(a)) for p, t, a in zip(self.p, self.theta, self.amp)]

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.amp) ** 2

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def __len__(self) -> int:
        return self.p.size

    def sorted(self) -> "BranchEnsemble":
        order = np.lexsort((self.p, self.theta, self.origin))
        return BranchEnsemble(self.p[order], self.theta[order], self.amp[order], self.origin[order], self.generation)


def uniform_line_ensemble(p0: float, n_points: int) -> BranchEnsemble:
    """``n_points`` independent unit-weight-share points on the line ``p = p0``."""
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    theta = TWO_PI * np.arange(n_points) / n_points
    amp = np.full(n_points, math.sqrt(1.0 / n_points), dtype=complex)
    return BranchEnsemble(np.full(n_points, float(p0)), theta, amp, np.arange(n_points))


def map_f(branch: Branch, spec: BranchSpec) -> list[Branch]:
    return [
        Branch(PhasePoint(branch.point.p, branch.point.theta + d), branch.amp * a)
        for d, a in spec.entries
    ]


def branch_arrays(ens: BranchEnsemble, spec: BranchSpec) -> BranchEnsemble:
    """Apply the free-rotation branching to every point (no merging)."""
    offsets, amps = spec.as_arrays()
    m = offsets.size
    return BranchEnsemble(
        np.repeat(ens.p, m),
        (ens.theta[:, None] + offsets[None, :]).ravel(),
        (ens.amp[:, None] * amps[None, :]).ravel(),
        np.repeat(ens.origin, m),
        ens.generation,
    )


def _cluster_starts(values: np.ndarray, breaks: np.ndarray, tol: float) -> np.ndarray:
    """Boolean 'starts a new group' for sorted values, chaining within ``tol``."""
    start = np.empty(values.size, dtype=bool)
    if values.size:
        start[0] = True
        start[1:] = (np.diff(values) > tol) | breaks[1:]
    return start


def merge_and_prune(
    ens: BranchEnsemble, pos_tol: float = POS_TOL, amp_tol: float = AMP_TOL
) -> BranchEnsemble:
    """Coherently merge coincident points of the same origin, then drop tiny amplitudes."""
    if len(ens) == 0:
        return ens
    theta = ens.theta.copy()
    # points just below 2 pi sit next to points just above 0
    theta[theta > TWO_PI - pos_tol] -= TWO_PI
    origin = ens.origin
    order = np.lexsort((theta, origin))
    th_s = theta[order]
    org_s = origin[order]
    org_break = np.empty(org_s.size, dtype=bool)
    org_break[0] = True
    org_break[1:] = org_s[1:] != org_s[:-1]
    theta_group = np.cumsum(_cluster_starts(th_s, org_break, pos_tol))
    tg = np.empty_like(theta_group)
    tg[order] = theta_group
    order2 = np.lexsort((ens.p, tg))
    p_s = ens.p[order2]
    tg_s = tg[order2]
    tg_break = np.empty(tg_s.size, dtype=bool)
    tg_break[0] = True
    tg_break[1:] = tg_s[1:] != tg_s[:-1]
    starts = _cluster_starts(p_s, tg_break, pos_tol)
    group = np.cumsum(starts) - 1
    n_groups = int(group[-1]) + 1
    amp = np.zeros(n_groups, dtype=complex)
    np.add.at(amp, group, ens.amp[order2])
    first = np.nonzero(starts)[0]
    keep = np.abs(amp) >= amp_tol
    idx = order2[first][keep]
    return BranchEnsemble(ens.p[idx], ens.theta[idx], amp[keep], ens.origin[idx], ens.generation).sorted()


def select(ens: BranchEnsemble, omega: int, sel_tol: float = SEL_TOL) -> BranchEnsemble:
    """Keep, per origin, the branches maximizing ``sin(omega theta)``.

    Kept amplitudes are rescaled to the origin's weight before selection;
    phases are preserved.
    """
    if len(ens) == 0:
        raise ValueError("cannot select from an empty ensemble")
    score = np.sin(omega * ens.theta)
    origins, inverse = np.unique(ens.origin, return_inverse=True)
    best = np.full(origins.size, -np.inf)
    np.maximum.at(best, inverse, score)
    keep = score >= best[inverse] - sel_tol
    before = np.zeros(origins.size)
    np.add.at(before, inverse, ens.weights)
    after = np.zeros(origins.size)
    np.add.at(after, inverse[keep], ens.weights[keep])
    scale = np.sqrt(before / after)[inverse[keep]]
    return BranchEnsemble(ens.p[keep], ens.theta[keep], ens.amp[keep] * scale, ens.origin[keep], ens.generation)


def step_ensemble(
    ens: BranchEnsemble,
    params: ModelParams,
    spec: BranchSpec | None = None,
    mode: str | None = None,
    pos_tol: float = POS_TOL,
    amp_tol: float = AMP_TOL,
    cap: int = BRANCH_CAP,
) -> BranchEnsemble:
    """One step of the pseudoclassical map.

    ``mode="hermitian"``: kick, branch, merge. ``mode="pt"``: select, non-Hermitian
    kick, branch, merge.
    """
    if spec is None:
        spec = branch_spec(params.r, params.s)
    if mode is None:
        mode = "hermitian" if params.hermitian else "pt"
    if mode == "pt":
        if params.hermitian:
            raise ValueError("PT mode needs lam > 0")
        ens = select(ens, params.omega)
        lam = params.lam
    elif mode == "hermitian":
        if not params.hermitian:
            raise ValueError("hermitian mode needs lam == 0")
        lam = 0.0
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if len(ens) * spec.n_branches > cap:
        raise BranchCapError(
            f"step {ens.generation + 1} would create {len(ens) * spec.n_branches} branches (cap {cap})"
        )
    p, th = kick_arrays(ens.p, ens.theta, params.k, params.omega, lam)
    kicked = BranchEnsemble(p, th, ens.amp, ens.origin, ens.generation)
    out = merge_and_prune(branch_arrays(kicked, spec), pos_tol, amp_tol)
    out.generation = ens.generation + 1
    return out


def ensemble_moments(ens: BranchEnsemble, p0: float) -> tuple[float, float]:
    w = ens.weights
    total = w.sum()
    if total <= 0.0:
        raise ValueError("ensemble has zero total weight")
    mean = float(np.dot(w, ens.p) / total)
    var = float(np.dot(w, (ens.p - p0) ** 2) / total)
    return mean, var


def evolve_ensemble(
    ens: BranchEnsemble,
    params: ModelParams,
    t_max: int,
    p0: float | None = None,
    record: bool = False,
    cap: int = BRANCH_CAP,
    spec: BranchSpec | None = None,
) -> tuple[ObservableSeries, dict[int, BranchEnsemble]]:
    """Iterate :func:`step_ensemble`, recording weighted moments and branch counts."""
    if spec is None:
        spec = branch_spec(params.r, params.s)
    if p0 is None:
        p0 = ensemble_moments(ens, 0.0)[0]
    means, variances, counts, weights = [], [], [], []
    snaps = {}
    for t in range(t_max + 1):
        if t > 0:
            ens = step_ensemble(ens, params, spec, cap=cap)
        mean, var = ensemble_moments(ens, p0)
        means.append(mean)
        variances.append(var)
        counts.append(len(ens))
        weights.append(ens.total_weight)
        if record:
            snaps[t] = ens
    series = ObservableSeries(
        times=np.arange(t_max + 1),
        mean_p=means,
        var_p=variances,
        norm_factor=np.array(weights),
        branch_count=np.array(counts),
        p0=p0,
    )
    return series, snaps


def kick_jacobian(point: PhasePoint, k: float, omega: int) -> np.ndarray:
    """Analytic Jacobian of the kick map in ``(p, theta)`` ordering."""
    c = k * omega * math.cos(omega * point.theta)
    return np.array([[1.0, c], [1.0, 1.0 + c]])
