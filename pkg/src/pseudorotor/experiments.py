"""Named experiments, their configuration, and the data files they write."""

from __future__ import annotations

import configparser
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from . import csvout, tolerances
from .analysis import (
    ObservableSeries,
    diffusion_time,
    linear_fit,
    max_abs_deviation,
    max_relative_deviation,
    peak_match,
    powerlaw_fit,
)
from .model import (
    ModelParams,
    ParameterError,
    Wavefunction,
    branch_spec,
    coherent_state,
    gauss_sums,
    make_params,
    momentum_eigenstate,
)
from .pseudo import (
    BranchEnsemble,
    evolve_ensemble,
    ensemble_moments,
    step_ensemble,
    uniform_line_ensemble,
)
from .quantum import evolve, husimi_field


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


def parse_number(text: str) -> float:
    """Float literal, also accepting ``10^-2.4`` and ``10**-2.4``."""
    t = text.strip().replace("**", "^")
    if "^" in t:
        base, exp = t.split("^", 1)
        return float(base) ** float(exp)
    return float(t)


def parse_list(text: str) -> list[float]:
    return [parse_number(x) for x in text.replace(";", ",").split(",") if x.strip()]


@dataclass
class ExperimentConfig:
    experiment: str
    r: int = 1
    s: int = 4
    omega: int = 1
    delta: float = 0.04
    k: float = 0.5
    lam: float = 0.0
    kick_mode: str = "k"
    initial: str = "coherent"  # coherent | momentum | uniform_line
    p0: float = 0.5
    theta0: float = 0.5
    n0: int = 0
    n_points: int = 10_000
    baseline: str = "uniform_line"  # pseudoclassical reference for sweeps: uniform_line | point
    t_max: int = 3
    deltas: list[float] = field(default_factory=list)
    jobs: int = 1
    p_min: float | None = None
    p_max: float | None = None
    n_p: int = 0
    n_theta: int = 0
    out: str = "out"
    tol: dict = field(default_factory=lambda: dict(tolerances.DEFAULTS))

    def params(self, delta: float | None = None) -> ModelParams:
        return make_params(
            self.r,
            self.s,
            self.omega,
            k=self.k,
            delta=self.delta if delta is None else delta,
            lam=self.lam,
            kick_mode=self.kick_mode,
        )

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        self.params()
        for d in self.deltas:
            self.params(d)
        if self.initial not in ("coherent", "momentum", "uniform_line"):
            raise ConfigError(f"unknown initial state kind {self.initial!r}")
        if self.baseline not in ("uniform_line", "point"):
            raise ConfigError(f"unknown baseline {self.baseline!r}")
        if self.t_max < 0:
            raise ConfigError("t_max must be >= 0")
        if self.n_points < 1:
            raise ConfigError("n_points must be >= 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        return self

    def model_header(self) -> dict:
        keys = ("r", "s", "omega", "delta", "k", "lam", "kick_mode", "initial", "p0", "theta0",
                "n0", "n_points", "baseline", "t_max")
        out = {k: getattr(self, k) for k in keys}
        out["deltas"] = ";".join(csvout.fmt(d) for d in self.deltas)
        return out

    def tag(self, delta: float | None = None) -> str:
        d = self.delta if delta is None else delta
        return f"r{self.r}_s{self.s}_w{self.omega}_k{self.k:.6g}_d{d:.6g}_l{self.lam:.6g}"


# key -> (section, parser)
_KEYS: dict[str, tuple[str, Callable[[str], object]]] = {
    "experiment": ("experiment", str),
    "r": ("model", int),
    "s": ("model", int),
    "omega": ("model", int),
    "delta": ("model", parse_number),
    "k": ("model", parse_number),
    "lam": ("model", parse_number),
    "kick_mode": ("model", str),
    "initial": ("initial", str),
    "p0": ("initial", parse_number),
    "theta0": ("initial", parse_number),
    "n0": ("initial", int),
    "n_points": ("initial", lambda x: int(parse_number(x))),
    "baseline": ("initial", str),
    "t_max": ("run", lambda x: int(parse_number(x))),
    "deltas": ("run", parse_list),
    "jobs": ("run", int),
    "p_min": ("grid", parse_number),
    "p_max": ("grid", parse_number),
    "n_p": ("grid", int),
    "n_theta": ("grid", int),
    "out": ("output", str),
}
_ALIASES = {"lambda": "lam", "name": "experiment", "dir": "out", "kick": "k"}


def _apply(cfg: ExperimentConfig, key: str, value: str, section: str | None = None) -> None:
    key = _ALIASES.get(key.strip(), key.strip())
    if section == "tolerances" or key in cfg.tol:
        if key not in cfg.tol:
            raise ConfigError(f"unknown tolerance {key!r}")
        try:
            cfg.tol[key] = type(cfg.tol[key])(parse_number(value))
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
        return
    if key not in _KEYS:
        raise ConfigError(f"unknown configuration key {key!r}")
    expected, parser = _KEYS[key]
    if section is not None and section != expected:
        raise ConfigError(f"key {key!r} belongs in section [{expected}], not [{section}]")
    try:
        setattr(cfg, key, parser(value))
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc


def load_config(
    experiment: str, path: str | Path | None = None, overrides: list[str] = (), out: str | None = None
) -> ExperimentConfig:
    """Preset for ``experiment``, then the config file, then ``key=value`` overrides.

    The file format is INI-like: ``[section]`` headers and flat ``key = value``
    lines. Overrides accept ``key=value`` or ``section.key=value``.
    """
    if experiment not in PRESETS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    cfg = replace(PRESETS[experiment], tol=dict(tolerances.DEFAULTS), deltas=list(PRESETS[experiment].deltas))
    if path is not None:
        parser = configparser.ConfigParser(interpolation=None)
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for section in parser.sections():
            for key, value in parser.items(section):
                if key == "experiment" or (section == "experiment" and key == "name"):
                    if value.strip() != experiment:
                        raise ConfigError(f"config is for {value.strip()!r}, not {experiment!r}")
                    continue
                _apply(cfg, key, value, section)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, value = item.split("=", 1)
        section = None
        if "." in key:
            section, key = key.split(".", 1)
        _apply(cfg, key, value, section)
    if out is not None:
        cfg.out = out
    try:
        return cfg.validate()
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc


def initial_state(cfg: ExperimentConfig, delta: float) -> Wavefunction:
    if cfg.initial == "momentum":
        return momentum_eigenstate(cfg.n0)
    if cfg.initial == "coherent":
        return coherent_state(cfg.p0, cfg.theta0, delta)
    raise ConfigError("a uniform line has no quantum counterpart; use initial=momentum")


def initial_ensemble(cfg: ExperimentConfig, delta: float) -> BranchEnsemble:
    if cfg.initial == "coherent":
        return BranchEnsemble.single(cfg.p0, cfg.theta0)
    p0 = cfg.n0 * delta if cfg.initial == "momentum" else cfg.p0
    if cfg.initial == "uniform_line" or cfg.baseline == "uniform_line":
        return uniform_line_ensemble(p0, cfg.n_points)
    return BranchEnsemble.single(p0, cfg.theta0)


def reference_momentum(cfg: ExperimentConfig, delta: float) -> float:
    return cfg.n0 * delta if cfg.initial == "momentum" else cfg.p0


@dataclass
class Result:
    experiment: str
    files: list[Path] = field(default_factory=list)
    summary_columns: tuple[str, ...] = ()
    summary: list[tuple] = field(default_factory=list)
    ok: bool = True


def _header(cfg: ExperimentConfig, **extra) -> list[str]:
    params = cfg.model_header()
    params.update(extra)
    return csvout.header_lines(cfg.experiment, params)


def _series_rows(series: ObservableSeries):
    extra = [
        a for a in (series.norm_factor, series.boundary_leak, series.branch_count) if a is not None
    ]
    for i, t in enumerate(series.times):
        yield (t, series.mean_p[i], series.var_p[i], *(a[i] for a in extra))


def _series_columns(series: ObservableSeries) -> tuple[str, ...]:
    cols = ["t", "mean_p", "var_p"]
    for name in ("norm_factor", "boundary_leak", "branch_count"):
        if getattr(series, name) is not None:
            cols.append(name)
    return tuple(cols)


def write_series(path: Path, cfg: ExperimentConfig, series: ObservableSeries, **extra) -> Path:
    return csvout.write_csv(path, _series_columns(series), _series_rows(series), _header(cfg, **extra))


# ---------------------------------------------------------------- husimi-overlay


def _auto_grid(cfg: ExperimentConfig, states: dict, ensembles: dict, sigma: float):
    spacing = sigma / 6.0
    if cfg.p_min is not None and cfg.p_max is not None:
        lo, hi = cfg.p_min, cfg.p_max
    else:
        lo, hi = np.inf, -np.inf
        for t, psi in states.items():
            w = np.abs(psi.amps) ** 2
            keep = w > 1e-8 * w.max()
            p = cfg.params().delta * psi.n[keep]
            lo, hi = min(lo, p.min()), max(hi, p.max())
        for ens in ensembles.values():
            lo, hi = min(lo, ens.p.min() - 6 * sigma), max(hi, ens.p.max() + 6 * sigma)
    n_p = cfg.n_p or int(math.ceil((hi - lo) / spacing)) + 1
    n_theta = cfg.n_theta or int(math.ceil(2 * math.pi / spacing))
    return np.linspace(lo, hi, n_p), 2 * math.pi * np.arange(n_theta) / n_theta


@dataclass
class OverlayFrame:
    t: int
    field: np.ndarray
    ensemble: BranchEnsemble
    match: object


def husimi_overlay(cfg: ExperimentConfig):
    """Husimi fields and pseudoclassical branches for t = 0..t_max on one shared grid.

    Returns ``(p_grid, theta_grid, frames)``. The automatic grid has six nodes
    per coherent-state width in both directions.
    """
    params = cfg.params()
    if cfg.initial != "coherent":
        raise ConfigError("husimi-overlay starts from a coherent state")
    _, states = evolve(initial_state(cfg, params.delta), params, cfg.t_max, record_states=True,
                       leak_tol=cfg.tol["leak_tol"])
    _, ensembles = evolve_ensemble(BranchEnsemble.single(cfg.p0, cfg.theta0), params, cfg.t_max,
                                   record=True, cap=cfg.tol["branch_cap"])
    p_grid, theta_grid = _auto_grid(cfg, states, ensembles, params.sigma)
    frames = []
    for t in range(cfg.t_max + 1):
        field_ = husimi_field(states[t], p_grid, theta_grid, params.delta)
        ens = ensembles[t]
        match = peak_match(field_, p_grid, theta_grid, ens.p, ens.theta, params.sigma,
                           radius=cfg.tol["peak_radius"])
        frames.append(OverlayFrame(t, field_, ens, match))
    return p_grid, theta_grid, frames


def run_husimi_overlay(cfg: ExperimentConfig) -> Result:
    p_grid, theta_grid, frames = husimi_overlay(cfg)
    result = Result(cfg.experiment, summary_columns=(
        "t", "branches", "matched_fraction", "max_distance_sigma", "unmatched_maxima"))
    out = Path(cfg.out)
    for fr in frames:
        t = fr.t
        result.files.append(csvout.write_csv(
            out / f"husimi-overlay_{cfg.tag()}_t{t}.csv", csvout.FIELD_COLUMNS,
            csvout.field_rows(p_grid, theta_grid, fr.field), _header(cfg, t=t)))
        result.files.append(csvout.write_csv(
            out / f"husimi-overlay-ensemble_{cfg.tag()}_t{t}.csv", csvout.ENSEMBLE_COLUMNS,
            csvout.ensemble_rows(t, fr.ensemble), _header(cfg, t=t)))
        result.summary.append((t, len(fr.ensemble), fr.match.matched_fraction,
                               float(fr.match.distances.max()), len(fr.match.unmatched_maxima)))
    result.files.append(csvout.write_csv(
        out / f"husimi-overlay-summary_{cfg.tag()}_t{cfg.t_max}.csv", result.summary_columns,
        result.summary, _header(cfg)))
    return result


# ---------------------------------------------------------------- variance-compare / pt-current


def _quantum_job(args):
    cfg, delta = args
    params = cfg.params(delta)
    series, _ = evolve(initial_state(cfg, delta), params, cfg.t_max,
                       p0=reference_momentum(cfg, delta), leak_tol=cfg.tol["leak_tol"])
    return delta, series


def _map_jobs(fn, items, jobs: int):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def run_variance_compare(cfg: ExperimentConfig) -> Result:
    deltas = cfg.deltas or [cfg.delta]
    params = cfg.params(deltas[0])
    if not params.hermitian:
        raise ConfigError("variance-compare is for the Hermitian model; use pt-current for lam > 0")
    pseudo, _ = evolve_ensemble(initial_ensemble(cfg, deltas[0]), params, cfg.t_max,
                                p0=reference_momentum(cfg, deltas[0]), cap=cfg.tol["branch_cap"])
    out = Path(cfg.out)
    result = Result(cfg.experiment, summary_columns=("delta", "max_rel_dev_var"))
    result.files.append(write_series(out / f"variance-compare-pseudo_{cfg.tag(0.0)}_t{cfg.t_max}.csv",
                                     cfg, pseudo, kind="pseudoclassical"))
    for delta, series in _map_jobs(_quantum_job, [(cfg, d) for d in deltas], cfg.jobs):
        result.files.append(write_series(
            out / f"variance-compare_{cfg.tag(delta)}_t{cfg.t_max}.csv", cfg, series,
            kind="quantum", delta_run=delta))
        result.summary.append((delta, max_relative_deviation(series, pseudo, 1, cfg.t_max)))
    result.files.append(csvout.write_csv(
        out / f"variance-compare-summary_{cfg.tag(0.0)}_t{cfg.t_max}.csv", result.summary_columns,
        result.summary, _header(cfg)))
    return result


def run_pt_current(cfg: ExperimentConfig) -> Result:
    if cfg.lam <= 0.0:
        raise ConfigError("pt-current needs lam > 0 (use variance-compare for the Hermitian model)")
    deltas = cfg.deltas or [cfg.delta]
    params = cfg.params(deltas[0])
    pseudo, snaps = evolve_ensemble(initial_ensemble(cfg, deltas[0]), params, cfg.t_max,
                                    p0=reference_momentum(cfg, deltas[0]), record=True,
                                    cap=cfg.tol["branch_cap"])
    out = Path(cfg.out)
    result = Result(cfg.experiment, summary_columns=(
        "delta", "max_abs_dev_mean_p", "slope", "intercept", "r_squared"))
    result.files.append(write_series(out / f"pt-current-pseudo_{cfg.tag(0.0)}_t{cfg.t_max}.csv",
                                     cfg, pseudo, kind="pseudoclassical"))
    rows = (row for t in range(cfg.t_max + 1) for row in csvout.ensemble_rows(t, snaps[t]))
    result.files.append(csvout.write_csv(
        out / f"pt-current-ensemble_{cfg.tag(0.0)}_t{cfg.t_max}.csv", csvout.ENSEMBLE_COLUMNS, rows,
        _header(cfg)))
    for delta, series in _map_jobs(_quantum_job, [(cfg, d) for d in deltas], cfg.jobs):
        result.files.append(write_series(
            out / f"pt-current_{cfg.tag(delta)}_t{cfg.t_max}.csv", cfg, series,
            kind="quantum", delta_run=delta))
        fit = linear_fit(series.times, series.mean_p)
        result.summary.append((delta, max_abs_deviation(series, pseudo, cfg.t_max), fit.slope,
                               fit.intercept, fit.r_squared))
    result.files.append(csvout.write_csv(
        out / f"pt-current-summary_{cfg.tag(0.0)}_t{cfg.t_max}.csv", result.summary_columns,
        result.summary, _header(cfg)))
    return result


# ---------------------------------------------------------------- sweep-tdiff


class PseudoBaseline:
    """Pseudoclassical variance series, extended on demand."""

    def __init__(self, ens: BranchEnsemble, params: ModelParams, p0: float, chunk: int = 256,
                 cap: int = tolerances.BRANCH_CAP):
        self.ens = ens
        self.params = params
        self.p0 = p0
        self.chunk = chunk
        self.cap = cap
        self.spec = branch_spec(params.r, params.s)
        mean, var = ensemble_moments(ens, p0)
        self.mean, self.var, self.count = [mean], [var], [len(ens)]

    def extend(self, t: int) -> None:
        while len(self.var) <= t:
            self.ens = step_ensemble(self.ens, self.params, self.spec, cap=self.cap)
            mean, var = ensemble_moments(self.ens, self.p0)
            self.mean.append(mean)
            self.var.append(var)
            self.count.append(len(self.ens))

    def var_at(self, t: int) -> float:
        if t >= len(self.var):
            self.extend(t + self.chunk)
        return self.var[t]

    def series(self, t_max: int | None = None) -> ObservableSeries:
        n = len(self.var) if t_max is None else t_max + 1
        self.extend(n - 1)
        return ObservableSeries(np.arange(n), self.mean[:n], self.var[:n],
                                branch_count=np.array(self.count[:n]), p0=self.p0)


def _tdiff_job(args):
    cfg, delta, baseline = args
    threshold = cfg.tol["tdiff_threshold"]

    def stop(t, mean, var):
        pv = baseline.var_at(t)
        return pv - var > threshold * pv

    start = time.perf_counter()
    series, _ = evolve(initial_state(cfg, delta), cfg.params(delta), cfg.t_max,
                       p0=reference_momentum(cfg, delta), stop=stop, leak_tol=cfg.tol["leak_tol"])
    t_diff = diffusion_time(series, baseline.series(len(series) - 1), threshold)
    return delta, series, t_diff, time.perf_counter() - start


@dataclass
class TdiffSweep:
    rows: list[tuple]  # (delta, t_diff or None, steps_run, seconds)
    fit: object | None
    baseline: ObservableSeries
    quantum: dict


def sweep_tdiff(cfg: ExperimentConfig) -> TdiffSweep:
    """Diffusion time of the quantum run against a shared pseudoclassical baseline, per delta."""
    deltas = sorted(cfg.deltas or [cfg.delta], reverse=True)
    base_params = cfg.params(deltas[0])
    if not base_params.hermitian:
        raise ConfigError("sweep-tdiff is for the Hermitian model")
    # the pseudoclassical map does not depend on delta; a momentum eigenstate
    # n0 sits at p = n0 * delta, so only n0 = 0 gives a delta-independent baseline
    if cfg.initial == "momentum" and cfg.n0 != 0:
        raise ConfigError("sweep-tdiff with a momentum eigenstate needs n0 = 0")
    baseline = PseudoBaseline(initial_ensemble(cfg, deltas[0]), base_params,
                              reference_momentum(cfg, deltas[0]), cap=cfg.tol["branch_cap"])
    if cfg.jobs > 1:
        baseline.extend(cfg.t_max)
    runs = _map_jobs(_tdiff_job, [(cfg, d, baseline) for d in deltas], cfg.jobs)
    rows, quantum = [], {}
    for delta, series, t_diff, seconds in runs:
        rows.append((delta, t_diff, len(series) - 1, seconds))
        quantum[delta] = series
    reached = [(d, t) for d, t, _, _ in rows if t is not None]
    fit = powerlaw_fit(*zip(*reached)) if len(reached) >= 3 else None
    t_end = max(len(s) for s in quantum.values()) - 1
    return TdiffSweep(rows, fit, baseline.series(t_end), quantum)


def run_sweep_tdiff(cfg: ExperimentConfig) -> Result:
    sweep = sweep_tdiff(cfg)
    out = Path(cfg.out)
    result = Result(cfg.experiment, summary_columns=("delta", "t_diff", "reached", "steps"))
    result.files.append(write_series(
        out / f"sweep-tdiff-pseudo_{cfg.tag(0.0)}_t{len(sweep.baseline) - 1}.csv", cfg,
        sweep.baseline, kind="pseudoclassical"))
    for delta, series in sweep.quantum.items():
        result.files.append(write_series(
            out / f"sweep-tdiff_{cfg.tag(delta)}_t{len(series) - 1}.csv", cfg, series,
            kind="quantum", delta_run=delta))
    for delta, t_diff, steps, _ in sweep.rows:
        result.summary.append((delta, -1 if t_diff is None else t_diff, t_diff is not None, steps))
    result.files.append(csvout.write_csv(
        out / f"sweep-tdiff-summary_{cfg.tag(0.0)}_t{cfg.t_max}.csv", result.summary_columns,
        result.summary, _header(cfg)))
    fit = sweep.fit
    fit_row = [] if fit is None else [(fit.slope, fit.intercept, fit.r_squared)]
    result.files.append(csvout.write_csv(
        out / f"sweep-tdiff-fit_{cfg.tag(0.0)}_t{cfg.t_max}.csv", ("slope", "intercept", "r_squared"),
        fit_row, _header(cfg)))
    return result


# ---------------------------------------------------------------- dump-branch-spec


def run_dump_branch_spec(cfg: ExperimentConfig) -> Result:
    from .quantum import free_rotation_residual

    spec = branch_spec(cfg.r, cfg.s)
    sums = gauss_sums(cfg.r, cfg.s)
    residual = free_rotation_residual(cfg.p0, cfg.theta0, cfg.r, cfg.s, cfg.delta, spec)
    result = Result(cfg.experiment, summary_columns=("l", "offset", "re_amp", "im_amp", "weight", "kept"))
    kept = {round(o, 12) for o in spec.offsets}
    for l, g in enumerate(sums):
        offset = (2 * math.pi * ((l * cfg.r) % cfg.s) / cfg.s) % (2 * math.pi)
        result.summary.append((l, offset, g.real, g.imag, abs(g) ** 2,
                               abs(g) > cfg.tol["eps_zero"] and round(offset, 12) in kept))
    result.files.append(csvout.write_csv(
        Path(cfg.out) / f"dump-branch-spec_r{cfg.r}_s{cfg.s}_t0.csv", result.summary_columns,
        result.summary, _header(cfg, n_branches=spec.n_branches, free_rotation_residual=residual)))
    result.ok = residual < cfg.tol["residual_tol"]
    return result


# ---------------------------------------------------------------- verify


def verification_checks(tol: dict | None = None) -> list[tuple[str, float, float, bool]]:
    """Module invariants as ``(name, measured, tolerance, passed)`` rows."""
    from . import checks

    return checks.run_all(tol or dict(tolerances.DEFAULTS))


def run_verify(cfg: ExperimentConfig) -> Result:
    rows = verification_checks(cfg.tol)
    result = Result(cfg.experiment, summary_columns=("check", "value", "tolerance", "passed"))
    result.summary = rows
    result.ok = all(r[3] for r in rows)
    result.files.append(csvout.write_csv(
        Path(cfg.out) / "verify.csv", result.summary_columns, rows,
        csvout.header_lines("verify", {k: v for k, v in sorted(cfg.tol.items())})))
    return result


# ---------------------------------------------------------------- registry


PRESETS: dict[str, ExperimentConfig] = {
    "husimi-overlay": ExperimentConfig(
        "husimi-overlay", r=1, s=4, omega=1, delta=0.04, k=0.5, p0=0.5, theta0=0.5, t_max=3),
    "variance-compare": ExperimentConfig(
        "variance-compare", r=1, s=4, omega=1, delta=1e-3, k=0.5, p0=0.5, theta0=0.5, t_max=12,
        deltas=[1e-3, 1e-2, 1e-1]),
    "sweep-tdiff": ExperimentConfig(
        "sweep-tdiff", r=1, s=3, omega=3, delta=1e-2, k=2.0, initial="momentum", n0=0, p0=0.0,
        theta0=0.0, n_points=10_000, baseline="uniform_line", t_max=60_000,
        deltas=[1e-2, 10**-2.4, 10**-2.8, 10**-3.2]),
    "pt-current": ExperimentConfig(
        "pt-current", r=1, s=4, omega=1, delta=1e-3, k=0.5, lam=0.01, p0=0.0, theta0=0.0,
        t_max=20, deltas=[1e-3, 1e-2, 1e-1]),
    "dump-branch-spec": ExperimentConfig(
        "dump-branch-spec", r=1, s=4, omega=1, delta=0.04, k=0.5, p0=0.5, theta0=0.5),
    "verify": ExperimentConfig("verify"),
}

RUNNERS: dict[str, Callable[[ExperimentConfig], Result]] = {
    "husimi-overlay": run_husimi_overlay,
    "variance-compare": run_variance_compare,
    "sweep-tdiff": run_sweep_tdiff,
    "pt-current": run_pt_current,
    "dump-branch-spec": run_dump_branch_spec,
    "verify": run_verify,
}

EXPERIMENTS: dict[str, str] = {
    "husimi-overlay": "Husimi snapshots t=0..3 with pseudoclassical branch overlay "
                      "(general r=1,s=4,w=1; C1 r=1,s=3,w=3; C2 r=1,s=4,w=2; PT lam=0.2)",
    "variance-compare": "<(p-p0)^2> quantum vs pseudoclassical, r=1,s=4,w=1,k=0.5, delta sweep",
    "sweep-tdiff": "diffusion time vs delta from |0> against a uniform-line ensemble, C1/C2, k=2",
    "pt-current": "directed current <p>(t) in the PT-symmetric rotor, lam=0.01, delta sweep",
    "dump-branch-spec": "Gaussian-sum branch amplitudes and offsets for one (r, s)",
    "verify": "free-rotation identity, Gaussian-sum parity, commutators, unitarity, weights",
}


def run_experiment(cfg: ExperimentConfig) -> Result:
    cfg.validate()
    return RUNNERS[cfg.experiment](cfg)
