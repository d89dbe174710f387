"""Self-interaction potentials.

``V_eff(x) = integral K(x - x') |psi(x')|^2 dx'`` for the point-mass,
homogeneous-sphere and harmonic-sphere laws, computed as a free-space
convolution (zero padding to ``2n`` per axis, sampled kernel), plus the
spherically symmetric shell-theorem solution used by the radial oracle.
"""

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.fft as sfft
from scipy.integrate import cumulative_simpson

from . import fields as _fields
from .fields import RealField, UniformGrid

VARIANTS = ("newtonian", "sphere", "harmonic_sphere", "none")


@dataclass(frozen=True)
class Kernel:
    variant: str = "newtonian"
    R: Optional[float] = None
    strength: float = 1.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown kernel variant {self.variant!r}; expected one of {VARIANTS}")
        if self.variant in ("sphere", "harmonic_sphere"):
            if self.R is None or not self.R > 0:
                raise ValueError(f"{self.variant} kernel needs R > 0")
        if not math.isfinite(self.strength):
            raise ValueError("strength must be finite")

    @property
    def attractive(self) -> bool:
        return self.variant != "none" and self.strength > 0

    def value(self, s):
        """Pair interaction at separation ``s`` (s > 0 for the point law)."""
        s = np.asarray(s, dtype=float)
        if self.variant == "newtonian":
            return -self.strength / s
        if self.variant == "sphere":
            return self.strength * sphere_kernel_value(s, self.R)
        if self.variant == "harmonic_sphere":
            R = self.R
            return self.strength / R * (-1.2 + 0.5 * (s / R) ** 2)
        return np.zeros_like(s)


NEWTONIAN = Kernel("newtonian")
NO_GRAVITY = Kernel("none")


def sphere_kernel_value(s, R):
    """Exact interaction energy of two uniform unit-mass balls of radius R.

    For ``xi = s/R <= 2``: ``-(1/R) (6/5 - xi^2/2 + 3 xi^3/16 - xi^5/160)``;
    beyond contact it is the point-mass value ``-1/s``.
    """
    s = np.asarray(s, dtype=float)
    if R <= 0:
        raise ValueError("R must be positive")
    if np.any(s < 0):
        raise ValueError("separation must be non-negative")
    xi = s / R
    inside = -(1.2 - 0.5 * xi**2 + 0.1875 * xi**3 - xi**5 / 160.0) / R
    with np.errstate(divide="ignore"):
        outside = -1.0 / np.where(s > 0, s, 1.0)
    out = np.where(xi < 2.0, inside, outside)
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# singular-cell constants
# --------------------------------------------------------------------------


def cell_mean_inverse_distance(order=64):
    """Mean of 1/|r| over the unit cube centred on the origin.

    Splitting the cube into six pyramids with apex at the origin reduces the
    volume integral to ``3/2 * int_{[-1/2,1/2]^2} (x^2 + y^2 + 1/4)^(-1/2)``,
    which is smooth and handled by Gauss-Legendre.
    """
    t, w = np.polynomial.legendre.leggauss(order)
    # integrand is even in x and y: integrate one quadrant, times four
    x = 0.25 * (t + 1.0)
    wx = 0.25 * w
    f = 1.0 / np.sqrt(x[:, None] ** 2 + x[None, :] ** 2 + 0.25)
    return 1.5 * 4.0 * float(wx @ f @ wx)


def lattice_origin_weight(alpha=2.0, cutoff=6):
    """Origin weight that makes the lattice sum of ``f(x)/|x|`` fourth-order.

    Returns ``-Z`` where ``Z`` is the Ewald-regularised simple-cubic lattice
    sum ``sum'_m 1/|m| - int d^3x/|x|`` (about -2.8373). Using ``-Z/h`` at
    the zero-separation sample removes the O(h^2) error that the plain
    cell average leaves behind.
    """
    from scipy.special import erfc

    m = np.arange(-cutoff, cutoff + 1)
    mx, my, mz = np.meshgrid(m, m, m, indexing="ij")
    d2 = (mx * mx + my * my + mz * mz).ravel()
    d2 = d2[d2 > 0].astype(float)
    d = np.sqrt(d2)
    real = np.sum(erfc(alpha * d) / d)
    g2 = (2.0 * np.pi) ** 2 * d2
    recip = np.sum(4.0 * np.pi / g2 * np.exp(-g2 / (4.0 * alpha * alpha)))
    Z = real + recip - 2.0 * alpha / math.sqrt(math.pi) - math.pi / alpha**2
    return -float(Z)


CELL_MEAN_INV_R = cell_mean_inverse_distance()
ORIGIN_WEIGHT = lattice_origin_weight()


# --------------------------------------------------------------------------
# Hockney free-space convolution
# --------------------------------------------------------------------------


def sampled_kernel(grid: UniformGrid, kernel: Kernel, offset=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Kernel on the (2n)^3 circular offset lattice, optionally displaced.

    Entry ``m`` holds ``K(m h + offset)`` with ``m`` folded into
    ``[-n, n)``. A separation of exactly zero in the point law takes the
    corrected value ``-ORIGIN_WEIGHT / h``.
    """
    n2 = 2 * grid.n
    m = np.arange(n2)
    m = np.where(m < grid.n, m, m - n2) * grid.h
    ox, oy, oz = (float(c) for c in offset)
    sx = (m + ox)[:, None, None]
    sy = (m + oy)[None, :, None]
    sz = (m + oz)[None, None, :]
    s = np.sqrt(sx * sx + sy * sy + sz * sz)
    if kernel.variant == "newtonian":
        zero = s == 0
        with np.errstate(divide="ignore"):
            K = -kernel.strength / np.where(zero, 1.0, s)
        K[zero] = -kernel.strength * ORIGIN_WEIGHT / grid.h
        return K
    if kernel.variant == "sphere":
        return kernel.strength * sphere_kernel_value(s, kernel.R)
    return kernel.value(s)


class _KernelCache:
    """Small LRU of kernel spectra, guarded for concurrent use."""

    def __init__(self, maxsize=3):
        self.maxsize = maxsize
        self._data = OrderedDict()
        self._lock = threading.Lock()

    def get(self, grid, kernel, offset):
        key = (grid.n, grid.h, kernel, tuple(float(c) for c in offset))
        with self._lock:
            if key in self._data:
                self._data.move_to_end(key)
                return self._data[key]
        spec = sfft.rfftn(sampled_kernel(grid, kernel, offset), workers=_fields.FFT_WORKERS)
        spec.flags.writeable = False
        with self._lock:
            self._data[key] = spec
            while len(self._data) > self.maxsize:
                self._data.popitem(last=False)
        return spec

    def clear(self):
        with self._lock:
            self._data.clear()


_cache = _KernelCache()


def clear_kernel_cache():
    _cache.clear()


def potential_array(rho: np.ndarray, grid: UniformGrid, kernel: Kernel, offset=(0.0, 0.0, 0.0)) -> np.ndarray:
    """Array-level free-space convolution ``h^3 sum_j K(x_i + offset - x_j) rho_j``.

    The padded transform is pruned: rows that are all zero on input are
    never transformed, and only the first octant is brought back.
    """
    if kernel.variant == "none":
        return np.zeros(grid.shape)
    n, n2 = grid.n, 2 * grid.n
    w = _fields.FFT_WORKERS
    kspec = _cache.get(grid, kernel, offset)
    a = sfft.rfft(rho, n=n2, axis=2, workers=w)
    a = sfft.fft(a, n=n2, axis=1, workers=w)
    a = sfft.fft(a, n=n2, axis=0, workers=w)
    a *= kspec
    a = sfft.ifft(a, axis=0, workers=w)[:n]
    a = sfft.ifft(a, axis=1, workers=w)[:, :n]
    V = sfft.irfft(a, n=n2, axis=2, workers=w)[:, :, :n]
    V = np.ascontiguousarray(V)
    V *= grid.cell_volume
    return V


def solve_potential(density: RealField, kernel: Kernel, grid: Optional[UniformGrid] = None) -> RealField:
    """Free-space potential of ``density`` under ``kernel``.

    The result is the attractive term that multiplies psi in the wave
    equation, so it is non-positive for the point law.
    """
    if grid is not None and grid != density.grid:
        raise ValueError(f"grid mismatch: density on {density.grid}, requested {grid}")
    rho = density.values
    if rho.min() < -1e-12 * max(rho.max(), 1.0):
        raise ValueError("density must be non-negative")
    mass = float(rho.sum()) * density.grid.cell_volume
    if mass > 1.0 + 1e-6:
        raise ValueError(f"density integrates to {mass:.8g} > 1")
    return RealField(density.grid, potential_array(rho, density.grid, kernel))


# --------------------------------------------------------------------------
# spherical symmetry
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Samples on an increasing radial mesh ``r`` (r[0] > 0)."""

    r: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.shape != v.shape:
            raise ValueError("r and values must be 1-D arrays of equal length")
        if r.size < 3 or r[0] <= 0 or np.any(np.diff(r) <= 0):
            raise ValueError("radial mesh must be strictly increasing and start above zero")
        if not np.all(np.isfinite(v)):
            raise ValueError("profile values must be finite")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "values", v)


def radial_potential(profile: RadialProfile, strength: float = 1.0) -> RadialProfile:
    """Shell-theorem potential of a spherically symmetric density.

    ``V(r) = -(m(r)/r + int_r^inf 4 pi r' rho(r') dr')`` with ``m`` the
    enclosed mass. The density inside ``r[0]`` is taken as constant.
    """
    r, rho = profile.r, profile.values
    if np.any(rho < 0):
        raise ValueError("density must be non-negative")
    m0 = 4.0 * np.pi / 3.0 * r[0] ** 3 * rho[0]
    m = m0 + cumulative_simpson(4.0 * np.pi * r * r * rho, x=r, initial=0.0)
    q = cumulative_simpson(4.0 * np.pi * r * rho, x=r, initial=0.0)
    outer = q[-1] - q
    return RadialProfile(r, -strength * (m / r + outer))
