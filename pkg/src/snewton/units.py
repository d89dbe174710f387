"""Physical constants, the natural unit system and closed-form width estimates.

All physical quantities are cgs. Solvers never see them: they work in the
units below, where hbar = G = M = 1 and the self-gravitating wave equation
reads ``i dpsi/dt = -1/2 lap(psi) - (|psi|^2 * 1/r) psi``.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

from scipy import constants as _si

HBAR_CGS = _si.hbar * 1e7  # erg s
G_CGS = _si.G * 1e3  # cm^3 g^-1 s^-2


class WidthRegimeWarning(UserWarning):
    """An extended-object estimate was requested outside width << R."""


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def sphere_mass(rho: float, R: float) -> float:
    """Mass of a homogeneous ball."""
    return 4.0 * math.pi / 3.0 * _positive("rho", rho) * _positive("R", R) ** 3


@dataclass(frozen=True)
class PhysicalParams:
    """Physical inputs in cgs. ``R`` and ``rho`` are optional."""

    M: float
    hbar: float = HBAR_CGS
    G: float = G_CGS
    R: Optional[float] = None
    rho: Optional[float] = None

    def __post_init__(self):
        _positive("hbar", self.hbar)
        _positive("G", self.G)
        _positive("M", self.M)
        if self.R is not None:
            _positive("R", self.R)
        if self.rho is not None:
            _positive("rho", self.rho)

    @classmethod
    def homogeneous_sphere(cls, R: float, rho: float, **kw) -> "PhysicalParams":
        return cls(M=sphere_mass(rho, R), R=R, rho=rho, **kw)


@dataclass(frozen=True)
class ScalingMap:
    length_unit: float  # cm
    time_unit: float  # s
    energy_unit: float  # erg

    def to_cm(self, x: float) -> float:
        return x * self.length_unit

    def from_cm(self, x_cm: float) -> float:
        return x_cm / self.length_unit

    def to_seconds(self, t: float) -> float:
        return t * self.time_unit

    def to_erg(self, e: float) -> float:
        return e * self.energy_unit


def make_scaling(params: PhysicalParams) -> ScalingMap:
    """Natural units of the self-gravitating Schrodinger equation for mass M."""
    hb, G, M = params.hbar, params.G, params.M
    # factored to keep intermediate powers in range
    length = (hb / M) * (hb / M) / (G * M)
    time = (hb / M) * (hb / M) * (hb / M) / (G * G * M * M)
    energy = (G * M * M) * (G * M * M) * M / (hb * hb)
    return ScalingMap(length_unit=length, time_unit=time, energy_unit=energy)


def point_width_estimate(params: PhysicalParams) -> float:
    """Natural width hbar^2 / (G M^3) of a pointlike object, in cm."""
    return make_scaling(params).length_unit


def sphere_width_estimate(params: PhysicalParams, R: Optional[float] = None) -> float:
    """Width ``a0**(1/4) * R**(3/4)`` of a homogeneous sphere of radius R (cm).

    Only meaningful when the result is much smaller than R; a
    :class:`WidthRegimeWarning` is issued otherwise.
    """
    if R is None:
        R = params.R
    if R is None:
        raise ValueError("sphere radius R is required")
    R = _positive("R", R)
    a0 = point_width_estimate(params)
    width = a0**0.25 * R**0.75
    if width > 0.1 * R:
        warnings.warn(
            f"width {width:.3g} cm is not small against R = {R:.3g} cm",
            WidthRegimeWarning,
            stacklevel=2,
        )
    return width


def energy_estimates(params: PhysicalParams, a: float, R: Optional[float] = None) -> float:
    """Order-of-magnitude energy (erg) of a packet of width ``a`` (cm).

    Pointlike: ``hbar^2/(M a^2) - G M^2 / a``.
    Extended (R given): ``hbar^2/(M a^2) - G M^2 / R + G M^2 a^2 / R^3``.
    """
    a = _positive("a", a)
    hb, G, M = params.hbar, params.G, params.M
    kinetic = hb * hb / (M * a * a)
    if R is None:
        return kinetic - G * M * M / a
    R = _positive("R", R)
    return kinetic - G * M * M / R + G * M * M * a * a / R**3


def critical_size(rho: float, hbar: float = HBAR_CGS, G: float = G_CGS) -> dict:
    """Radius at which a homogeneous body's own width equals its size.

    Returns both the ``a0**(1/4) R**(3/4)`` relation and the older
    ``a0**(1/3) R**(2/3)`` relation; with ``M = 4 pi rho R^3 / 3`` both
    reduce to ``a0(M(R)) = R``.
    """
    rho = _positive("rho", rho)
    _positive("hbar", hbar)
    _positive("G", G)
    k = (4.0 * math.pi / 3.0) ** 3
    r_c = (hbar * hbar / (G * k * rho**3)) ** 0.1

    def a0_of(R):
        return point_width_estimate(PhysicalParams(M=sphere_mass(rho, R), hbar=hbar, G=G))

    # both fixed points solved independently in log space as a check on the closed form
    r_c_two_thirds = _solve_log_fixed_point(lambda R: a0_of(R) ** (1 / 3) * R ** (2 / 3), r_c)
    r_c_quartic = _solve_log_fixed_point(lambda R: a0_of(R) ** 0.25 * R**0.75, r_c)
    return {"R_c": r_c, "R_c_two_thirds": r_c_two_thirds, "R_c_numeric": r_c_quartic}


def _solve_log_fixed_point(width_of, guess):
    from scipy.optimize import brentq

    def f(logR):
        R = math.exp(logR)
        return math.log(width_of(R)) - logR

    lo, hi = math.log(guess) - 20.0, math.log(guess) + 20.0
    return math.exp(brentq(f, lo, hi, xtol=1e-14, rtol=1e-15))
