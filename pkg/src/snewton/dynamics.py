"""Real-time propagation, Galilean boosts and the two-body diagnostics.

The propagator is Strang-split: half kinetic step in Fourier space, a full
potential phase kick, another half kinetic step. The kick leaves
``|psi|^2`` unchanged, so evaluating the self-potential once, from the
density entering the kick, makes that substep exact and the scheme second
order and time-reversible.
"""

import csv
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import kernels
from .fields import (
    ComplexField,
    UniformGrid,
    boundary_amplitude,
    fftn,
    ifftn,
    momentum_expectation,
    normalize,
    rms_width,
    translate,
)
from .gravity import NEWTONIAN, Kernel, potential_array

log = logging.getLogger(__name__)


class PropagationError(FloatingPointError):
    """The state became non-finite during propagation."""


class AliasingWarning(UserWarning):
    """A boost velocity is not on the momentum lattice of the grid."""


class InterpolationWarning(UserWarning):
    """A translation is not a lattice vector and was done spectrally."""


@dataclass(frozen=True)
class PropagatorConfig:
    dt: float
    steps: int
    kernel: Kernel = NEWTONIAN
    monitor_stride: int = 1
    snapshot_stride: int = 0  # 0 disables snapshots
    lobe_normal: Optional[Tuple[float, float, float]] = None
    boundary_threshold: float = 1e-8
    norm_tolerance: float = 1e-8

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.steps < 0:
            raise ValueError("steps must be non-negative")
        if self.monitor_stride < 1:
            raise ValueError("monitor_stride must be >= 1")
        if self.snapshot_stride < 0:
            raise ValueError("snapshot_stride must be >= 0")


BASE_COLUMNS = ("t", "norm2", "T", "W", "E", "px", "py", "pz", "cx", "cy", "cz", "width")
LOBE_COLUMNS = (
    "left_mass",
    "left_cx",
    "left_cy",
    "left_cz",
    "left_width",
    "right_mass",
    "right_cx",
    "right_cy",
    "right_cz",
    "right_width",
    "separation",
)


@dataclass
class Trajectory:
    columns: Tuple[str, ...]
    rows: List[List[float]] = field(default_factory=list)
    snapshots: List[Tuple[float, ComplexField]] = field(default_factory=list)
    final: Optional[ComplexField] = None
    max_boundary: float = 0.0
    warnings: List[str] = field(default_factory=list)
    lobe_normal: Optional[np.ndarray] = None

    def __getitem__(self, name) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([row[j] for row in self.rows])

    @property
    def times(self) -> np.ndarray:
        return self["t"]

    @property
    def has_lobes(self) -> bool:
        return "separation" in self.columns

    def drift(self) -> dict:
        """Largest deviations of the conserved quantities from their initial values."""
        E = self["E"]
        p = np.stack([self["px"], self["py"], self["pz"]], axis=1)
        n2 = self["norm2"]
        return {
            "norm": float(np.max(np.abs(n2 - n2[0]))),
            "energy_rel": float(np.max(np.abs(E - E[0])) / abs(E[0])) if E[0] != 0 else float(np.max(np.abs(E - E[0]))),
            "momentum": float(np.max(np.linalg.norm(p - p[0], axis=1))),
        }

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.columns)
            for row in self.rows:
                w.writerow([repr(float(x)) for x in row])
        return path


class Propagator:
    """Strang split-step integrator for one grid, kernel and time step."""

    def __init__(self, grid: UniformGrid, kernel: Kernel, dt: float):
        self.grid = grid
        self.kernel = kernel
        self.dt = dt
        self.half_kinetic = np.exp(-0.25j * dt * grid.k2)

    def potential(self, psi):
        return potential_array(kernels.abs2(psi), self.grid, self.kernel)

    @property
    def full_kinetic(self):
        if not hasattr(self, "_full_kinetic"):
            self._full_kinetic = self.half_kinetic * self.half_kinetic
        return self._full_kinetic

    def _kick(self, psi):
        if self.kernel.variant != "none":
            kernels.phase_kick(psi, self.potential(psi), self.dt)

    def step(self, psi: np.ndarray) -> np.ndarray:
        return self.run(psi, 1)

    def run(self, psi: np.ndarray, steps: int) -> np.ndarray:
        """Advance ``steps`` steps. Adjacent kinetic half steps are fused."""
        if steps <= 0:
            return psi
        spec = fftn(psi)
        kernels.scale_by(spec, self.half_kinetic)
        for i in range(steps):
            psi = ifftn(spec)
            self._kick(psi)
            spec = fftn(psi)
            kernels.scale_by(spec, self.full_kinetic if i < steps - 1 else self.half_kinetic)
        return ifftn(spec)


def _observables(psi: ComplexField, kernel: Kernel, lobe_normal=None) -> list:
    g = psi.grid
    dv = g.cell_volume
    rho = kernels.abs2(psi.values)
    n2 = float(rho.sum()) * dv
    spec2 = kernels.abs2(fftn(psi.values))
    T = 0.5 * float(np.sum(g.k2 * spec2)) * dv / g.n**3
    if kernel.variant == "none":
        W = 0.0
    else:
        W = 0.5 * float(np.sum(potential_array(rho, g, kernel) * rho)) * dv
    k = g.kdiff
    tot = spec2.sum()
    p = [
        float(spec2.sum(axis=(1, 2)) @ k / tot),
        float(spec2.sum(axis=(0, 2)) @ k / tot),
        float(spec2.sum(axis=(0, 1)) @ k / tot),
    ]
    a = g.axis
    mx, my, mz = rho.sum(axis=(1, 2)), rho.sum(axis=(0, 2)), rho.sum(axis=(0, 1))
    mass = rho.sum()
    c = np.array([mx @ a, my @ a, mz @ a]) / mass
    var = (mx @ (a - c[0]) ** 2 + my @ (a - c[1]) ** 2 + mz @ (a - c[2]) ** 2) / mass
    row = [n2, T, W, T + W, *p, *c, math.sqrt(var)]
    if lobe_normal is not None:
        row.extend(_lobe_record(rho, g, c, lobe_normal))
    return row


def lobe_moments(psi: ComplexField, normal, through=None):
    """Mass, centroid and rms width on either side of a plane.

    The plane has unit normal ``normal`` and passes through ``through``
    (default: the global centroid). Returns ``(left, right)`` dicts where
    "right" is the side the normal points to.
    """
    g = psi.grid
    rho = kernels.abs2(psi.values)
    if through is None:
        a = g.axis
        mass = rho.sum()
        through = np.array([rho.sum(axis=(1, 2)) @ a, rho.sum(axis=(0, 2)) @ a, rho.sum(axis=(0, 1)) @ a]) / mass
    vals = _lobe_record(rho, g, np.asarray(through, float), np.asarray(normal, float))
    left = {"mass": vals[0], "centroid": np.array(vals[1:4]), "width": vals[4]}
    right = {"mass": vals[5], "centroid": np.array(vals[6:9]), "width": vals[9]}
    return left, right


def _lobe_record(rho, g, through, normal):
    nrm = normal / np.linalg.norm(normal)
    x, y, z = g.coords()
    s = (x - through[0]) * nrm[0] + (y - through[1]) * nrm[1] + (z - through[2]) * nrm[2]
    # cells within roundoff of the plane are shared evenly
    tol = 1e-9 * g.h
    w_right = np.where(s > tol, 1.0, np.where(s < -tol, 0.0, 0.5))
    out = []
    cents = []
    for w in (1.0 - w_right, w_right):
        part = rho * w
        m = part.sum()
        a = g.axis
        mx, my, mz = part.sum(axis=(1, 2)), part.sum(axis=(0, 2)), part.sum(axis=(0, 1))
        c = np.array([mx @ a, my @ a, mz @ a]) / m
        var = (mx @ (a - c[0]) ** 2 + my @ (a - c[1]) ** 2 + mz @ (a - c[2]) ** 2) / m
        out.extend([float(m * g.cell_volume), *map(float, c), math.sqrt(var)])
        cents.append(c)
    out.append(float((cents[1] - cents[0]) @ nrm))
    return out


def evolve(psi: ComplexField, cfg: PropagatorConfig) -> Trajectory:
    """Propagate ``psi`` for ``cfg.steps`` steps, recording conserved quantities.

    Raises
    ------
    PropagationError
        If the state becomes non-finite.
    """
    g = psi.grid
    prop = Propagator(g, cfg.kernel, cfg.dt)
    normal = None
    columns = BASE_COLUMNS
    if cfg.lobe_normal is not None:
        normal = np.asarray(cfg.lobe_normal, dtype=float)
        normal = normal / np.linalg.norm(normal)
        columns = BASE_COLUMNS + LOBE_COLUMNS
    traj = Trajectory(columns=columns, lobe_normal=normal)

    def record(state, t):
        if not np.all(np.isfinite(state)):
            raise PropagationError(f"non-finite state at t = {t}")
        f = ComplexField(g, state)
        row = _observables(f, cfg.kernel, normal)
        traj.rows.append([t, *row])
        b = boundary_amplitude(state)
        traj.max_boundary = max(traj.max_boundary, b)
        if b > cfg.boundary_threshold and not any(w.startswith("boundary") for w in traj.warnings):
            traj.warnings.append(f"boundary contamination {b:.2e} at t = {t:.6g}")
        if abs(row[0] - traj.rows[0][1]) > cfg.norm_tolerance and not any(w.startswith("norm") for w in traj.warnings):
            traj.warnings.append(f"norm drift {row[0] - traj.rows[0][1]:.2e} at t = {t:.6g}")
        return f

    state = np.array(psi.values, dtype=np.complex128, copy=True)
    f = record(state, 0.0)
    if cfg.snapshot_stride:
        traj.snapshots.append((0.0, f))
    stride_m = cfg.monitor_stride
    stride_s = cfg.snapshot_stride or cfg.steps + 1
    i = 0
    while i < cfg.steps:
        nxt = min(cfg.steps, (i // stride_m + 1) * stride_m, (i // stride_s + 1) * stride_s)
        state = prop.run(state, nxt - i)
        i = nxt
        t = i * cfg.dt
        monitor = i % stride_m == 0 or i == cfg.steps
        snap = i % stride_s == 0
        f = record(state, t) if monitor else ComplexField(g, state)
        if snap:
            traj.snapshots.append((t, f))
    traj.final = ComplexField(g, state)
    for w in traj.warnings:
        log.warning(w)
    return traj


# --------------------------------------------------------------------------
# Galilean boosts
# --------------------------------------------------------------------------


def _plane_wave(grid, v):
    x, y, z = grid.coords()
    return np.exp(1j * (v[0] * x)) * np.exp(1j * (v[1] * y)) * np.exp(1j * (v[2] * z))


def boost(psi: ComplexField, r=(0.0, 0.0, 0.0), v=(0.0, 0.0, 0.0)) -> ComplexField:
    """Translate by ``r`` and give velocity ``v``: ``psi(x - r) exp(i v.x)``."""
    return galilean_image(psi, r, v, 0.0)


def galilean_image(psi: ComplexField, r, v, t: float) -> ComplexField:
    """Moving image of a solution at time ``t``.

    ``psi(x - r - v t, t) exp(-i v^2 t / 2 + i v.x)`` (units hbar = M = 1).
    """
    g = psi.grid
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    if not g.is_lattice_momentum(v):
        warnings.warn(f"velocity {v} is off the momentum lattice; the phase wraps", AliasingWarning, stacklevel=2)
    shift = r + v * t
    if np.any(shift) and not g.is_lattice_vector(shift):
        warnings.warn(f"shift {shift} is not a lattice vector; interpolating spectrally", InterpolationWarning, stacklevel=2)
    out = translate(psi, shift).values
    if np.any(v):
        out = out * _plane_wave(g, v) * np.exp(-0.5j * float(v @ v) * t)
    return psi.with_values(out)


# --------------------------------------------------------------------------
# two-soliton state and lobe kinematics
# --------------------------------------------------------------------------


def two_soliton_prepare(phi0: ComplexField, d, min_separation: float = 6.0) -> ComplexField:
    """Two copies of ``phi0`` at ``+-d/2``, jointly normalized to one.

    Raises ``ValueError`` if ``|d|`` is below ``min_separation`` soliton widths.
    """
    d = np.asarray(d, dtype=float)
    w = rms_width(phi0)
    if np.linalg.norm(d) < min_separation * w:
        raise ValueError(
            f"separation {np.linalg.norm(d):.4g} is below {min_separation} widths ({w:.4g} each): lobes overlap"
        )
    a = translate(phi0, 0.5 * d).values
    b = translate(phi0, -0.5 * d).values
    return normalize(phi0.with_values(a + b), 1.0)


def lobe_acceleration(traj: Trajectory, merge_widths: float = 2.0, fit_until: Optional[float] = None) -> dict:
    """Relative acceleration of the two lobes from their separation history.

    ``a_rel`` is the second central difference of the separation on the
    monitor samples; ``a_early`` is twice the quadratic coefficient of a
    least-squares fit over the early window (``t <= fit_until``, default:
    everything before merger). The reference is the two-body law
    ``(m_left + m_right) / d0^2``.
    """
    if not traj.has_lobes:
        raise ValueError("trajectory has no lobe records")
    t = traj.times
    d = traj["separation"]
    width = 0.5 * (traj["left_width"] + traj["right_width"])
    merged = np.nonzero(d < merge_widths * width)[0]
    end = int(merged[0]) if merged.size else t.size
    t_merge = float(t[end]) if merged.size else None
    t, d = t[:end], d[:end]
    if t.size < 5:
        raise ValueError("too few samples before merger")
    dt = np.diff(t)
    if not np.allclose(dt, dt[0], rtol=1e-9):
        raise ValueError("lobe analysis needs uniformly spaced samples")
    a_rel = (d[2:] - 2.0 * d[1:-1] + d[:-2]) / dt[0] ** 2
    window = t <= (fit_until if fit_until is not None else t[-1])
    coef = np.polyfit(t[window], d[window], 2)
    mass = traj["left_mass"][0] + traj["right_mass"][0]
    return {
        "t": t,
        "separation": d,
        "t_mid": t[1:-1],
        "a_rel": a_rel,
        "a_early": 2.0 * coef[0],
        "d0": float(d[0]),
        "prediction": float(mass / d[0] ** 2),
        "t_merge": t_merge,
    }


# --------------------------------------------------------------------------
# two-body separability
# --------------------------------------------------------------------------


def cross_coupling(psiA: ComplexField, psiB: ComplexField, mA: float, mB: float, d) -> dict:
    """Gravitational cross energy of two bodies with centre offset ``d``.

    ``-mA mB int int |psiA(x)|^2 |psiB(x' - d)|^2 / |x - x'|``, evaluated as
    one free-space convolution with the displaced kernel followed by one
    overlap sum. Self energies use the same point law scaled by ``m^2``.
    """
    if psiA.grid != psiB.grid:
        raise ValueError(f"incompatible grids: {psiA.grid} vs {psiB.grid}")
    g = psiA.grid
    d = np.asarray(d, dtype=float)
    rhoA = kernels.abs2(psiA.values)
    rhoB = kernels.abs2(psiB.values)
    dv = g.cell_volume
    if mA == 0 or mB == 0:
        cross = 0.0
    else:
        VA = potential_array(rhoA, g, NEWTONIAN, offset=d)
        cross = mA * mB * float(np.sum(VA * rhoB)) * dv
    selfA = 0.5 * mA * mA * float(np.sum(potential_array(rhoA, g, NEWTONIAN) * rhoA)) * dv
    selfB = 0.5 * mB * mB * float(np.sum(potential_array(rhoB, g, NEWTONIAN) * rhoB)) * dv
    dist = float(np.linalg.norm(d))
    return {
        "cross_energy": cross,
        "self_energies": (selfA, selfB),
        "point_mass": -mA * mB / dist if dist > 0 else -math.inf,
        "distance": dist,
    }
