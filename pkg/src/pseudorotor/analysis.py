"""Comparison of quantum and pseudoclassical series: diffusion time, scaling fits, peak matching."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tolerances import PEAK_RADIUS, TDIFF_THRESHOLD

TWO_PI = 2.0 * math.pi


@dataclass
class ObservableSeries:
    """Per-step observables; ``times`` runs 0, 1, ..., in unit steps."""

    times: np.ndarray
    mean_p: np.ndarray
    var_p: np.ndarray
    norm_factor: np.ndarray | None = None
    boundary_leak: np.ndarray | None = None
    branch_count: np.ndarray | None = None
    p0: float = 0.0

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=int)
        self.mean_p = np.asarray(self.mean_p, dtype=float)
        self.var_p = np.asarray(self.var_p, dtype=float)
        n = self.times.size
        for name in ("mean_p", "var_p", "norm_factor", "boundary_leak", "branch_count"):
            value = getattr(self, name)
            if value is not None and len(value) != n:
                raise ValueError(f"{name} has length {len(value)}, expected {n}")
        if n > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    def __len__(self) -> int:
        return self.times.size

    def truncated(self, t_max: int) -> "ObservableSeries":
        keep = self.times <= t_max

        def cut(a):
            return None if a is None else np.asarray(a)[keep]

        return ObservableSeries(
            self.times[keep],
            self.mean_p[keep],
            self.var_p[keep],
            cut(self.norm_factor),
            cut(self.boundary_leak),
            cut(self.branch_count),
            self.p0,
        )


def diffusion_time(
    quantum: ObservableSeries, pseudo: ObservableSeries, threshold: float = TDIFF_THRESHOLD
) -> int | None:
    """First time the quantum variance falls ``threshold`` (relative) below the pseudoclassical one.

    Only deviation from below counts. Returns None if it never happens on the
    shared time grid. The quantum series may be shorter than the pseudoclassical
    one (early-stopped runs); it must be a prefix of the same grid.
    """
    n = len(quantum)
    if n > len(pseudo) or not np.array_equal(quantum.times, pseudo.times[:n]):
        raise ValueError("quantum and pseudoclassical series are on different time grids")
    pv = pseudo.var_p[:n]
    hit = np.nonzero(pv - quantum.var_p > threshold * pv)[0]
    if hit.size == 0:
        return None
    return int(quantum.times[hit[0]])


def tdiff_stop(pseudo: ObservableSeries, threshold: float = TDIFF_THRESHOLD):
    """Stop predicate for :func:`quantum.evolve` matching :func:`diffusion_time`."""
    pv = pseudo.var_p

    def stop(t: int, mean: float, var: float) -> bool:
        return t < pv.size and pv[t] - var > threshold * pv[t]

    return stop


@dataclass(frozen=True)
class PowerLawFit:
    slope: float
    intercept: float
    r_squared: float


def powerlaw_fit(xs, ys) -> PowerLawFit:
    """Least-squares line through ``(log x, log y)``."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.size < 3:
        raise ValueError("need at least 3 paired points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit needs positive values")
    return linear_fit(np.log(x), np.log(y))


def linear_fit(xs, ys) -> PowerLawFit:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return PowerLawFit(float(slope), float(intercept), r2)


def max_relative_deviation(quantum: ObservableSeries, pseudo: ObservableSeries, t_min: int = 1, t_max=None, field_name="var_p") -> float:
    """``max |q - c| / |c|`` over ``t_min <= t <= t_max``."""
    n = min(len(quantum), len(pseudo))
    t = quantum.times[:n]
    keep = t >= t_min
    if t_max is not None:
        keep &= t <= t_max
    q = getattr(quantum, field_name)[:n][keep]
    c = getattr(pseudo, field_name)[:n][keep]
    return float(np.max(np.abs(q - c) / np.abs(c)))


def max_abs_deviation(quantum: ObservableSeries, pseudo: ObservableSeries, t_max=None, field_name="mean_p") -> float:
    n = min(len(quantum), len(pseudo))
    keep = np.ones(n, dtype=bool) if t_max is None else quantum.times[:n] <= t_max
    q = getattr(quantum, field_name)[:n][keep]
    c = getattr(pseudo, field_name)[:n][keep]
    return float(np.max(np.abs(q - c)))


def local_maxima(field: np.ndarray, min_rel_height: float = 0.0) -> np.ndarray:
    """Indices ``(i, j)`` of strict-or-equal 8-neighbour maxima; axis 1 (theta) is periodic.

    Maxima below ``min_rel_height`` times the global maximum are dropped.
    """
    f = np.asarray(field)
    padded = np.pad(f, ((1, 1), (0, 0)), constant_values=-np.inf)
    is_max = np.ones(f.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = np.roll(padded, dj, axis=1)[1 + di : 1 + di + f.shape[0]]
            is_max &= f >= shifted
    is_max &= f > min_rel_height * f.max()
    return np.argwhere(is_max)


@dataclass
class PeakMatch:
    distances: np.ndarray  # per branch, in units of sigma
    matched_fraction: float
    n_maxima: int
    unmatched_maxima: list[tuple[float, float]] = field(default_factory=list)
    maxima: list[tuple[float, float]] = field(default_factory=list)

    @property
    def all_matched(self) -> bool:
        return self.matched_fraction == 1.0


def phase_distance(p1, th1, p2, th2):
    dth = np.abs(np.asarray(th1) - np.asarray(th2)) % TWO_PI
    dth = np.minimum(dth, TWO_PI - dth)
    return np.hypot(np.asarray(p1) - np.asarray(p2), dth)


def peak_match(
    field: np.ndarray,
    p_grid: np.ndarray,
    theta_grid: np.ndarray,
    branch_p,
    branch_theta,
    sigma: float,
    radius: float = PEAK_RADIUS,
    floor: float = 0.01,
    significant: float = 0.10,
) -> PeakMatch:
    """Match branch positions to local maxima of a Husimi field.

    Maxima below ``floor`` times the global maximum are treated as numerical
    background. A maximum above ``significant`` times the global maximum with
    no branch within ``radius`` sigma is reported as unmatched.
    """
    bp = np.asarray(branch_p, dtype=float)
    bt = np.asarray(branch_theta, dtype=float)
    if bp.size == 0:
        raise ValueError("empty ensemble")
    idx = local_maxima(field, floor)
    mp = np.asarray(p_grid)[idx[:, 0]]
    mt = np.asarray(theta_grid)[idx[:, 1]]
    heights = field[idx[:, 0], idx[:, 1]]
    dist = phase_distance(bp[:, None], bt[:, None], mp[None, :], mt[None, :]) / sigma
    nearest = dist.min(axis=1)
    matched = float(np.mean(nearest <= radius))
    unmatched = []
    top = field.max()
    for q in range(mp.size):
        if heights[q] >= significant * top and dist[:, q].min() > radius:
            unmatched.append((float(mp[q]), float(mt[q])))
    return PeakMatch(
        distances=nearest,
        matched_fraction=matched,
        n_maxima=int(np.sum(heights >= significant * top)),
        unmatched_maxima=unmatched,
        maxima=[(float(a), float(b)) for a, b in zip(mp, mt)],
    )
