"""Shared substrate: parameters, coherent states, Gaussian sums and branch specs."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .tolerances import EPS_ZERO

TWO_PI = 2.0 * math.pi


class ParameterError(ValueError):
    """Invalid model parameters or configuration values."""


class Case(str, enum.Enum):
    GENERAL = "GENERAL"
    C1 = "C1"
    C2 = "C2"


@dataclass(frozen=True)
class ModelParams:
    """Kicked-rotor parameters near the resonance ``alpha = 4 pi r / s``.

    ``k`` is the effective kick strength ``K delta / alpha``; ``lam`` is the
    non-Hermiticity of the PT-symmetric kick (0 gives the Hermitian model).
    """

    r: int
    s: int
    omega: int
    delta: float
    k: float
    lam: float = 0.0

    @property
    def alpha(self) -> float:
        return 4.0 * math.pi * self.r / self.s + self.delta

    @property
    def K(self) -> float:
        """Bare kick strength of the original Hamiltonian."""
        return self.k * self.alpha / self.delta

    @property
    def hermitian(self) -> bool:
        return self.lam == 0.0

    @property
    def case(self) -> Case:
        return classify_case(self.s, self.omega)

    @property
    def sigma(self) -> float:
        """Coherent-state width in p and theta, sqrt(delta/2)."""
        return math.sqrt(self.delta / 2.0)

    def replace(self, **changes) -> "ModelParams":
        values = dict(r=self.r, s=self.s, omega=self.omega, delta=self.delta, k=self.k, lam=self.lam)
        values.update(changes)
        return make_params(kick_mode="k", **values)


def make_params(
    r: int,
    s: int,
    omega: int,
    k: float | None = None,
    delta: float = 0.0,
    lam: float = 0.0,
    kick_mode: str = "k",
    K: float | None = None,
) -> ModelParams:
    """Validate inputs and build :class:`ModelParams`.

    With ``kick_mode="k"`` the kick argument is the effective strength ``k``;
    with ``kick_mode="K"`` it is the bare strength ``K`` and
    ``k = K delta / alpha`` is derived.
    """
    if kick_mode not in ("k", "K"):
        raise ParameterError(f"kick_mode must be 'k' or 'K', got {kick_mode!r}")
    if kick_mode == "K":
        kick = K if K is not None else k
    else:
        kick = k if k is not None else K
    if kick is None:
        raise ParameterError("a kick strength is required")
    for name, v in (("r", r), ("s", s), ("omega", omega)):
        if int(v) != v or v <= 0:
            raise ParameterError(f"{name} must be a positive integer, got {v!r}")
    r, s, omega = int(r), int(s), int(omega)
    if math.gcd(r, s) != 1:
        raise ParameterError(f"r={r} and s={s} are not coprime")
    delta = float(delta)
    if not delta > 0.0 or not math.isfinite(delta):
        raise ParameterError(f"delta must be positive and finite, got {delta!r}")
    ratio = delta / math.pi
    if abs(ratio - round(ratio)) < 1e-12:
        raise ParameterError(f"delta={delta} is an integer multiple of pi")
    kick = float(kick)
    if kick < 0.0 or not math.isfinite(kick):
        raise ParameterError(f"kick strength must be >= 0, got {kick!r}")
    lam = float(lam)
    if lam < 0.0 or not math.isfinite(lam):
        raise ParameterError(f"lambda must be >= 0, got {lam!r}")
    alpha = 4.0 * math.pi * r / s + delta
    k_eff = kick * delta / alpha if kick_mode == "K" else kick
    return ModelParams(r=r, s=s, omega=omega, delta=delta, k=k_eff, lam=lam)


def classify_case(s: int, omega: int) -> Case:
    if s % 2 == 1 and omega == s:
        return Case.C1
    if s % 2 == 0 and 2 * omega == s:
        return Case.C2
    return Case.GENERAL


@dataclass(frozen=True)
class PhasePoint:
    p: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)


@dataclass(frozen=True, eq=False)
class Wavefunction:
    """Amplitudes on the lattice ``n_min + stride * j``; ``amps[j] = <n_min + stride j|psi>``.

    A stride above 1 holds states confined to one residue class, which the
    kick with harmonic ``omega`` preserves whenever ``stride`` divides ``omega``.
    """

    n_min: int
    amps: np.ndarray
    stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, "amps", np.asarray(self.amps, dtype=complex))
        object.__setattr__(self, "n_min", int(self.n_min))
        object.__setattr__(self, "stride", int(self.stride))

    @property
    def size(self) -> int:
        return self.amps.size

    @property
    def n(self) -> np.ndarray:
        return self.n_min + self.stride * np.arange(self.size, dtype=np.int64)

    @property
    def n_max(self) -> int:
        return self.n_min + self.stride * (self.size - 1)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))

    def normalized(self) -> "Wavefunction":
        return Wavefunction(self.n_min, self.amps / self.norm(), self.stride)

    def embedded(self, n_min: int, size: int) -> "Wavefunction":
        """Copy onto a larger window with the same stride, zero-padded."""
        lo, rem = divmod(self.n_min - n_min, self.stride)
        if rem or lo < 0 or lo + self.size > size:
            raise ValueError("target window does not contain the state")
        out = np.zeros(size, dtype=complex)
        out[lo : lo + self.size] = self.amps
        return Wavefunction(n_min, out, self.stride)

    def dense(self) -> "Wavefunction":
        """Equivalent state on the unit-stride lattice."""
        if self.stride == 1:
            return self
        out = np.zeros(self.stride * (self.size - 1) + 1, dtype=complex)
        out[:: self.stride] = self.amps
        return Wavefunction(self.n_min, out)

    def on_sublattice(self, stride: int) -> "Wavefunction":
        """Compress onto ``n = n0 mod stride`` if all weight lives there, else return self."""
        if stride <= 1 or self.stride != 1:
            return self
        nz = np.nonzero(self.amps)[0]
        if nz.size == 0:
            return self
        first = int(nz[0])
        if np.any((nz - first) % stride):
            return self
        return Wavefunction(self.n_min + first, self.amps[first::stride], stride)

    def inner(self, other: "Wavefunction") -> complex:
        """<self|other> over the overlapping part of both windows."""
        a, b = self.dense(), other.dense()
        lo = max(a.n_min, b.n_min)
        hi = min(a.n_max, b.n_max)
        if hi < lo:
            return 0j
        x = a.amps[lo - a.n_min : hi - a.n_min + 1]
        y = b.amps[lo - b.n_min : hi - b.n_min + 1]
        return complex(np.vdot(x, y))


def momentum_eigenstate(n: int, half_width: int = 64) -> Wavefunction:
    amps = np.zeros(2 * half_width + 1, dtype=complex)
    amps[half_width] = 1.0
    return Wavefunction(n - half_width, amps)


def coherent_half_width(delta: float) -> int:
    sigma_n = math.sqrt(1.0 / (2.0 * delta))
    return int(math.ceil(max(8.0 * sigma_n, 16.0)))


def coherent_amplitudes(n: np.ndarray, p: float, theta: float, delta: float) -> np.ndarray:
    """Unnormalized coherent-state amplitudes on arbitrary lattice sites ``n``."""
    n = np.asarray(n, dtype=float)
    return np.exp(-0.5 * delta * (n - p / delta) ** 2 - 1j * n * theta)


def coherent_state(
    p: float,
    theta: float,
    delta: float,
    window: tuple[int, int] | None = None,
    leak_tol: float = 1e-12,
) -> Wavefunction:
    """Normalized coherent state ``|p, theta>`` on the momentum lattice.

    Parameters
    ----------
    window : (n_min, size), optional
        Lattice window. Defaults to ``max(8 sigma_n, 16)`` sites either side
        of ``round(p / delta)``.
    leak_tol : float
        Maximum probability allowed on the two edge sites.
    """
    if window is None:
        hw = coherent_half_width(delta)
        center = int(round(p / delta))
        window = (center - hw, 2 * hw + 1)
    n_min, size = window
    n = np.arange(n_min, n_min + size)
    amps = coherent_amplitudes(n, p, theta, delta)
    norm = np.sqrt(np.sum(np.abs(amps) ** 2))
    if norm == 0.0:
        raise WindowError("coherent state has no weight inside the window")
    amps /= norm
    leak = abs(amps[0]) ** 2 + abs(amps[-1]) ** 2
    if leak > leak_tol:
        raise WindowError(f"window too small for coherent state: edge weight {leak:.3g}")
    return Wavefunction(n_min, amps)


class WindowError(RuntimeError):
    """The lattice window is too small for the state it has to hold."""


def gauss_sum(r: int, s: int, l: int) -> complex:
    """``(1/s) sum_m exp(-2 pi i (r/s) m (m - l))`` by direct summation."""
    if not 0 <= l <= s - 1:
        raise ValueError(f"l={l} out of range 0..{s - 1}")
    m = np.arange(s)
    # exact integer phase reduction keeps large s accurate
    phase = (r * m * (m - l)) % s
    return complex(np.exp(-2j * np.pi * phase / s).sum() / s)


def gauss_sums(r: int, s: int) -> np.ndarray:
    return np.array([gauss_sum(r, s, l) for l in range(s)])


def gauss_sum_zero_positions(s: int) -> list[int]:
    """Indices ``l`` where the Gaussian sum vanishes (closed-form parity rule)."""
    if s % 2 == 1:
        return []
    if s % 4 == 0:
        return [l for l in range(s) if l % 2 == 1]
    return [l for l in range(s) if l % 2 == 0]


@dataclass(frozen=True)
class BranchSpec:
    """Offsets in theta and complex amplitudes produced by one free rotation."""

    offsets: tuple[float, ...]
    amplitudes: tuple[complex, ...]
    r: int = field(default=1)
    s: int = field(default=1)

    @property
    def n_branches(self) -> int:
        return len(self.offsets)

    @property
    def entries(self) -> list[tuple[float, complex]]:
        return list(zip(self.offsets, self.amplitudes))

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array(self.offsets), np.array(self.amplitudes, dtype=complex)


def branch_spec(r: int, s: int, assignment: str = "direct") -> BranchSpec:
    """Nonzero Gaussian sums attached to offsets ``2 pi l r / s mod 2 pi``.

    ``assignment="swapped"`` reverses the amplitude order among the nonzero
    entries; it exists only so the free-rotation residual can show that the
    direct assignment is the correct one.
    """
    if math.gcd(r, s) != 1:
        raise ParameterError(f"r={r} and s={s} are not coprime")
    entries = []
    for l in range(s):
        g = gauss_sum(r, s, l)
        if abs(g) > EPS_ZERO:
            offset = (TWO_PI * ((l * r) % s) / s) % TWO_PI
            entries.append((offset, g))
    entries.sort(key=lambda e: e[0])
    offsets = tuple(e[0] for e in entries)
    amps = tuple(e[1] for e in entries)
    if assignment == "swapped":
        amps = amps[::-1]
    elif assignment != "direct":
        raise ValueError(f"unknown assignment {assignment!r}")
    return BranchSpec(offsets=offsets, amplitudes=amps, r=r, s=s)
