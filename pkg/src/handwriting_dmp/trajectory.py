"""Demonstration records, file I/O, differentiation and the error metric."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Sequence, Union

import numpy as np

PathOrStream = Union[str, os.PathLike, IO]

TIME_JITTER = 1e-9


class DemonstrationFormatError(ValueError):
    """Raised when a demonstration file cannot be parsed or validated."""


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def differentiate(positions, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Velocities and accelerations of uniformly sampled positions.

    Central differences in the interior, second-order one-sided
    differences at both endpoints.

    Parameters
    ----------
    positions : array, shape (M,) or (M, n_dofs)
    dt : float
        Sampling interval in seconds.

    Returns
    -------
    velocities, accelerations : arrays with the shape of ``positions``
    """
    y = np.asarray(positions, dtype=float)
    if dt <= 0:
        raise ValueError("dt must be positive")
    if y.shape[0] < 3:
        raise ValueError("differentiation needs at least 3 samples")
    vel = np.gradient(y, dt, axis=0, edge_order=2)

    acc = np.empty_like(y)
    acc[1:-1] = (y[2:] - 2.0 * y[1:-1] + y[:-2]) / dt**2
    if y.shape[0] >= 4:
        acc[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / dt**2
        acc[-1] = (2.0 * y[-1] - 5.0 * y[-2] + 4.0 * y[-3] - y[-4]) / dt**2
    else:
        acc[0] = acc[1]
        acc[-1] = acc[1]
    return vel, acc


@dataclass(frozen=True)
class Demonstration:
    """Uniformly sampled multi-DoF position record.

    ``positions`` has shape (M, n_dofs). Velocities and accelerations are
    always derived from positions by :func:`differentiate`.
    """

    dt: float
    positions: np.ndarray
    dofs: tuple = ("x", "y")
    velocities: np.ndarray = field(init=False, repr=False)
    accelerations: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim == 1:
            pos = pos[:, None]
        if pos.ndim != 2:
            raise DemonstrationFormatError("positions must be a (samples, dofs) array")
        if not self.dt > 0:
            raise DemonstrationFormatError("dt must be positive")
        if pos.shape[0] < 2:
            raise DemonstrationFormatError("fewer than 2 samples")
        dofs = tuple(self.dofs)
        if len(dofs) != pos.shape[1]:
            raise DemonstrationFormatError(
                f"{len(dofs)} dof names for {pos.shape[1]} position columns")
        if not np.all(np.isfinite(pos)):
            raise DemonstrationFormatError("non-finite position value")
        object.__setattr__(self, "dt", float(self.dt))
        object.__setattr__(self, "dofs", dofs)
        object.__setattr__(self, "positions", _frozen(pos))
        if pos.shape[0] >= 3:
            vel, acc = differentiate(pos, self.dt)
        else:
            # two samples: constant velocity, no curvature information
            vel = np.repeat((pos[1:] - pos[:1]) / self.dt, 2, axis=0)
            acc = np.zeros_like(pos)
        object.__setattr__(self, "velocities", _frozen(vel))
        object.__setattr__(self, "accelerations", _frozen(acc))

    @property
    def sample_count(self) -> int:
        return self.positions.shape[0]

    @property
    def n_dofs(self) -> int:
        return self.positions.shape[1]

    @property
    def duration(self) -> float:
        return (self.sample_count - 1) * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.sample_count) * self.dt

    def dof_index(self, name: str) -> int:
        try:
            return self.dofs.index(name)
        except ValueError:
            raise KeyError(f"no dof named {name!r} (have {', '.join(self.dofs)})") from None

    def select(self, names: Sequence[str]) -> "Demonstration":
        """Demonstration restricted to the named DoFs, in the given order."""
        idx = [self.dof_index(n) for n in names]
        return Demonstration(self.dt, self.positions[:, idx], tuple(names))


# --- file formats ---------------------------------------------------------


def _guess_format(source, fmt):
    if fmt is not None:
        fmt = fmt.upper()
        if fmt not in ("CSV", "JSON"):
            raise ValueError(f"unknown demonstration format {fmt!r}")
        return fmt
    name = getattr(source, "name", source)
    if isinstance(name, (str, os.PathLike)) and str(name).lower().endswith(".json"):
        return "JSON"
    return "CSV"


def _read_text(source) -> str:
    if isinstance(source, (str, os.PathLike)):
        return Path(source).read_text(encoding="utf-8")
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data


def _parse_csv(text: str) -> Demonstration:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r]
    if not rows:
        raise DemonstrationFormatError("empty file")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 or header[0] != "t":
        raise DemonstrationFormatError("header must be 't,<dof>[,<dof>...]'")
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DemonstrationFormatError(
                f"malformed row at line {lineno}: expected {len(header)} fields")
        try:
            values.append([float(v) for v in row])
        except ValueError:
            raise DemonstrationFormatError(f"malformed row at line {lineno}: non-numeric field") from None
    if len(values) < 2:
        raise DemonstrationFormatError("fewer than 2 samples")
    data = np.array(values)
    t = data[:, 0]
    steps = np.diff(t)
    dt = (t[-1] - t[0]) / (len(t) - 1)
    if dt <= 0:
        raise DemonstrationFormatError("timestamps must be strictly increasing")
    if np.max(np.abs(steps - dt)) > TIME_JITTER:
        raise DemonstrationFormatError("non-uniform timestamps")
    return Demonstration(dt, data[:, 1:], tuple(header[1:]))


def _parse_json(text: str) -> Demonstration:
    try:
        doc = json.loads(text)
        dt = float(doc["dt"])
        dofs = tuple(doc["dofs"])
        positions = doc["positions"]
    except (ValueError, KeyError, TypeError) as exc:
        raise DemonstrationFormatError(f"bad demonstration JSON: {exc}") from None
    if len(positions) < 2:
        raise DemonstrationFormatError("fewer than 2 samples")
    if any(len(p) != len(dofs) for p in positions):
        raise DemonstrationFormatError("malformed row: position length does not match dofs")
    return Demonstration(dt, np.array(positions, dtype=float), dofs)


def load_demonstration(source: PathOrStream, fmt: str | None = None) -> Demonstration:
    """Read a demonstration from a path or stream in CSV or JSON form.

    The format is taken from ``fmt`` when given, otherwise from the file
    suffix (``.json``), defaulting to CSV.
    """
    fmt = _guess_format(source, fmt)
    text = _read_text(source)
    return _parse_csv(text) if fmt == "CSV" else _parse_json(text)


def format_csv(positions, dt: float, dofs: Sequence[str]) -> str:
    """Render positions as demonstration CSV text (``t,<dofs>``)."""
    pos = np.asarray(positions, dtype=float)
    if pos.ndim == 1:
        pos = pos[:, None]
    out = io.StringIO()
    out.write(",".join(["t", *dofs]) + "\n")
    for k, row in enumerate(pos):
        out.write(",".join([repr(k * dt), *(repr(float(v)) for v in row)]) + "\n")
    return out.getvalue()


def format_json(positions, dt: float, dofs: Sequence[str]) -> str:
    pos = np.asarray(positions, dtype=float)
    if pos.ndim == 1:
        pos = pos[:, None]
    doc = {"dt": float(dt), "dofs": list(dofs), "positions": pos.tolist()}
    return json.dumps(doc, indent=1) + "\n"


def save_demonstration(demo: Demonstration, target: PathOrStream, fmt: str | None = None) -> None:
    fmt = _guess_format(target, fmt)
    render = format_csv if fmt == "CSV" else format_json
    text = render(demo.positions, demo.dt, demo.dofs)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        try:
            target.write(text)
        except TypeError:
            target.write(text.encode("utf-8"))


# --- resampling and error -------------------------------------------------


def _interp_rows(pos: np.ndarray, count: int) -> np.ndarray:
    src = np.linspace(0.0, 1.0, pos.shape[0])
    dst = np.linspace(0.0, 1.0, count)
    return np.column_stack([np.interp(dst, src, pos[:, j]) for j in range(pos.shape[1])])


def resample(demo: Demonstration, count: int) -> Demonstration:
    """Linearly interpolate ``demo`` onto ``count`` uniform samples over the same duration."""
    if count < 2:
        raise ValueError("resample needs at least 2 samples")
    if count == demo.sample_count:
        return Demonstration(demo.dt, demo.positions, demo.dofs)
    pos = _interp_rows(demo.positions, count)
    return Demonstration(demo.duration / (count - 1), pos, demo.dofs)


def euclidean_error(a, b) -> float:
    """Mean over samples of the euclidean distance between two trajectories.

    Inputs are position arrays of shape (M, n_dofs) (or (M,) for one DoF).
    When the sample counts differ, the shorter trajectory is linearly
    resampled onto the longer one's sample count first.
    """
    a = np.asarray(getattr(a, "positions", a), dtype=float)
    b = np.asarray(getattr(b, "positions", b), dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if b.ndim == 1:
        b = b[:, None]
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"dof mismatch: {a.shape[1]} vs {b.shape[1]}")
    if a.shape[0] < b.shape[0]:
        a = _interp_rows(a, b.shape[0])
    elif b.shape[0] < a.shape[0]:
        b = _interp_rows(b, a.shape[0])
    return float(np.mean(np.linalg.norm(a - b, axis=1)))
