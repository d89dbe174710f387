"""Uniform cubic grids, sampled wavefunctions and their observables.

Coordinates follow ``x_i = (i - n/2) h`` on every axis, so index ``n/2`` is
the origin. Integrals are midpoint sums; derivatives are spectral.
"""

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional

import numpy as np
import scipy.fft as sfft

from . import kernels

SNWF_MAGIC = "SNWF1"

# Threaded FFTs keep bitwise reproducibility (work is split per 1-D transform).
FFT_WORKERS = None


def fftn(a):
    return sfft.fftn(a, workers=FFT_WORKERS)


def ifftn(a):
    return sfft.ifftn(a, workers=FFT_WORKERS)


@dataclass(frozen=True)
class UniformGrid:
    n: int
    h: float

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
            raise ValueError(f"n must be a power of two >= 8, got {n!r}")
        if not (math.isfinite(self.h) and self.h > 0):
            raise ValueError(f"h must be positive, got {self.h!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "h", float(self.h))

    @property
    def extent(self) -> float:
        return self.n * self.h

    @property
    def shape(self):
        return (self.n, self.n, self.n)

    @property
    def cell_volume(self) -> float:
        return self.h**3

    @cached_property
    def axis(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.h

    @cached_property
    def kaxis(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h)

    def coords(self):
        """Broadcastable ``(x, y, z)`` coordinate arrays."""
        a = self.axis
        return a[:, None, None], a[None, :, None], a[None, None, :]

    def wavenumbers(self):
        k = self.kaxis
        return k[:, None, None], k[None, :, None], k[None, None, :]

    @cached_property
    def k2(self) -> np.ndarray:
        kx, ky, kz = self.wavenumbers()
        return kx * kx + ky * ky + kz * kz

    @cached_property
    def kdiff(self) -> np.ndarray:
        """First-derivative wavenumbers with the Nyquist mode zeroed."""
        k = self.kaxis.copy()
        k[self.n // 2] = 0.0
        return k

    @cached_property
    def r2(self) -> np.ndarray:
        x, y, z = self.coords()
        return x * x + y * y + z * z

    @property
    def momentum_quantum(self) -> float:
        return 2.0 * np.pi / self.extent

    def is_lattice_momentum(self, v, tol=1e-9) -> bool:
        q = np.asarray(v, dtype=float) / self.momentum_quantum
        return bool(np.all(np.abs(q - np.round(q)) < tol))

    def is_lattice_vector(self, r, tol=1e-9) -> bool:
        q = np.asarray(r, dtype=float) / self.h
        return bool(np.all(np.abs(q - np.round(q)) < tol))


def _frozen(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ComplexField:
    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128, order="C", copy=True)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite samples")
        object.__setattr__(self, "values", _frozen(v))

    def with_values(self, values) -> "ComplexField":
        return ComplexField(self.grid, values)

    def density(self) -> "RealField":
        return RealField(self.grid, kernels.abs2(self.values))


@dataclass(frozen=True, eq=False)
class RealField:
    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64, order="C", copy=True)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} does not match grid {self.grid.shape}")
        object.__setattr__(self, "values", _frozen(v))


@dataclass(frozen=True)
class EnergyBreakdown:
    T: float
    W: float
    E: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "E", self.T + self.W)

    def as_dict(self):
        return {"T": self.T, "W": self.W, "E": self.E}


# --------------------------------------------------------------------------
# constructors
# --------------------------------------------------------------------------


def gaussian(grid: UniformGrid, sigma: float, center=(0.0, 0.0, 0.0), k=(0.0, 0.0, 0.0)) -> ComplexField:
    """Normalized Gaussian packet whose *density* has standard deviation ``sigma``.

    ``psi = (2 pi sigma^2)^(-3/4) exp(-|x-c|^2 / (4 sigma^2)) exp(i k.x)``
    """
    x, y, z = grid.coords()
    cx, cy, cz = center
    r2 = (x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2
    amp = (2.0 * np.pi * sigma**2) ** -0.75 * np.exp(-r2 / (4.0 * sigma**2))
    kx, ky, kz = k
    if kx or ky or kz:
        amp = amp * np.exp(1j * (kx * x + ky * y + kz * z))
    return ComplexField(grid, amp)


def translate(psi: ComplexField, r) -> ComplexField:
    """Spectral translation ``psi(x - r)``; exact roll for lattice vectors."""
    g = psi.grid
    r = np.asarray(r, dtype=float)
    if not np.any(r):
        return psi
    if g.is_lattice_vector(r, tol=1e-12):
        shifts = tuple(int(round(c)) for c in r / g.h)
        return psi.with_values(np.roll(psi.values, shifts, axis=(0, 1, 2)))
    return psi.with_values(_spectral_shift(psi.values, g, r))


def _spectral_shift(values, grid, r):
    kx, ky, kz = grid.wavenumbers()
    spec = fftn(values)
    spec *= np.exp(-1j * kx * r[0])
    spec *= np.exp(-1j * ky * r[1])
    spec *= np.exp(-1j * kz * r[2])
    return ifftn(spec)


def embed(psi: ComplexField, n: int) -> ComplexField:
    """Place a field at the center of a larger grid with the same spacing."""
    g = psi.grid
    if n < g.n:
        raise ValueError("target grid must not be smaller")
    big = UniformGrid(n, g.h)
    out = np.zeros(big.shape, dtype=np.complex128)
    o = n // 2 - g.n // 2
    out[o : o + g.n, o : o + g.n, o : o + g.n] = psi.values
    return ComplexField(big, out)


# --------------------------------------------------------------------------
# observables
# --------------------------------------------------------------------------


def norm_squared(psi: ComplexField) -> float:
    return float(np.sum(kernels.abs2(psi.values)) * psi.grid.cell_volume)


def normalize(psi: ComplexField, target: float = 1.0) -> ComplexField:
    n2 = norm_squared(psi)
    if not n2 > 0:
        raise ValueError("cannot normalize a zero field")
    return psi.with_values(psi.values * math.sqrt(target / n2))


def momentum_expectation(psi: ComplexField) -> np.ndarray:
    """``<-i grad>`` per unit norm, from the spectrum."""
    g = psi.grid
    p2 = kernels.abs2(fftn(psi.values))
    total = p2.sum()
    k = g.kdiff
    px = np.dot(p2.sum(axis=(1, 2)), k)
    py = np.dot(p2.sum(axis=(0, 2)), k)
    pz = np.dot(p2.sum(axis=(0, 1)), k)
    return np.array([px, py, pz]) / total


def _moments(rho, grid):
    a = grid.axis
    mass = rho.sum()
    mx = rho.sum(axis=(1, 2))
    my = rho.sum(axis=(0, 2))
    mz = rho.sum(axis=(0, 1))
    c = np.array([mx @ a, my @ a, mz @ a]) / mass
    var = (mx @ (a - c[0]) ** 2 + my @ (a - c[1]) ** 2 + mz @ (a - c[2]) ** 2) / mass
    return c, var


def centroid(psi: ComplexField) -> np.ndarray:
    return _moments(kernels.abs2(psi.values), psi.grid)[0]


def rms_width(psi: ComplexField) -> float:
    return float(math.sqrt(_moments(kernels.abs2(psi.values), psi.grid)[1]))


def kinetic_energy(psi: ComplexField) -> float:
    g = psi.grid
    spec = kernels.abs2(fftn(psi.values))
    # Parseval: sum |f|^2 h^3 = sum |F|^2 h^3 / n^3
    return float(0.5 * np.sum(g.k2 * spec) * g.cell_volume / g.n**3)


def energy_breakdown(psi: ComplexField, kernel) -> EnergyBreakdown:
    """Kinetic, interaction (with the 1/2 pair factor) and total energy."""
    from .gravity import potential_array

    T = kinetic_energy(psi)
    rho = kernels.abs2(psi.values)
    if kernel.variant == "none":
        return EnergyBreakdown(T=T, W=0.0)
    V = potential_array(rho, psi.grid, kernel)
    W = 0.5 * float(np.sum(V * rho)) * psi.grid.cell_volume
    return EnergyBreakdown(T=T, W=W)


def boundary_amplitude(values: np.ndarray) -> float:
    """Largest |psi| on the outer faces relative to the peak |psi|."""
    a = np.abs(values)
    peak = a.max()
    if peak == 0:
        return 0.0
    faces = max(
        a[0].max(), a[-1].max(), a[:, 0].max(), a[:, -1].max(), a[:, :, 0].max(), a[:, :, -1].max()
    )
    return float(faces / peak)


# --------------------------------------------------------------------------
# SNWF1 binary format
# --------------------------------------------------------------------------


def write_field(path, psi: ComplexField, time: float = 0.0, units: str = "dimensionless", norm_target: float = 1.0, extra: Optional[dict] = None):
    """Write ``psi`` as SNWF1: one JSON header line, then little-endian
    float64 (re, im) pairs in row-major (x, y, z) order."""
    header = {
        "magic": SNWF_MAGIC,
        "n": psi.grid.n,
        "h": psi.grid.h,
        "time": float(time),
        "units": units,
        "norm_target": float(norm_target),
    }
    if extra:
        header.update(extra)
    line = json.dumps(header, sort_keys=True, allow_nan=False)
    if "\n" in line:
        raise ValueError("header must fit on one line")
    data = np.ascontiguousarray(psi.values).view(np.float64).astype("<f8", copy=False)
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(line.encode("utf-8") + b"\n")
        fh.write(data.tobytes(order="C"))
    return path


def read_field(path):
    """Read an SNWF1 file. Returns ``(ComplexField, header)``."""
    with open(path, "rb") as fh:
        line = fh.readline()
        try:
            header = json.loads(line.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ValueError(f"{path}: malformed SNWF1 header") from exc
        if header.get("magic") != SNWF_MAGIC:
            raise ValueError(f"{path}: not an SNWF1 file")
        grid = UniformGrid(int(header["n"]), float(header["h"]))
        count = 2 * grid.n**3
        raw = np.frombuffer(fh.read(), dtype="<f8")
    if raw.size != count:
        raise ValueError(f"{path}: expected {count} reals, found {raw.size}")
    values = raw.astype(np.float64).view(np.complex128).reshape(grid.shape)
    return ComplexField(grid, values), header
