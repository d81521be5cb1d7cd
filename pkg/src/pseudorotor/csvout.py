"""Bit-stable CSV output: fixed 17-significant-digit floats, '#' header lines, '\\n' endings."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def header_lines(experiment: str, params: dict) -> list[str]:
    items = " ".join(f"{k}={fmt(v)}" for k, v in params.items())
    return [f"pseudorotor {__version__}", f"experiment={experiment}", items]


def write_csv(
    path: Path,
    columns: Sequence[str],
    rows: Iterable[Sequence],
    header: Sequence[str] = (),
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def read_csv(path: Path) -> tuple[list[str], list[str], np.ndarray]:
    """Return ``(header_lines, columns, data)``; data is a float array."""
    header, columns, data = [], None, []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                header.append(line[1:].strip())
            elif columns is None:
                columns = line.split(",")
            elif line:
                data.append([float(x) if x else np.nan for x in line.split(",")])
    return header, columns or [], np.array(data, dtype=float).reshape(len(data), len(columns or []))


def ensemble_rows(t: int, ens) -> Iterable[tuple]:
    for p, th, a in zip(ens.p, ens.theta, ens.amp):
        yield (t, p, th, a.real, a.imag)


ENSEMBLE_COLUMNS = ("t", "p", "theta", "re_amp", "im_amp")


def field_rows(p_grid, theta_grid, field) -> Iterable[tuple]:
    for i, p in enumerate(p_grid):
        for j, th in enumerate(theta_grid):
            yield (p, th, field[i, j])


FIELD_COLUMNS = ("p", "theta", "husimi")


def wavefunction_rows(psi) -> Iterable[tuple]:
    for n, a in zip(psi.n, psi.amps):
        yield (n, a.real, a.imag)


WAVEFUNCTION_COLUMNS = ("n", "re_amp", "im_amp")
