"""Ground-state soliton: grid minimizer, radial shooting oracle, Gaussian bounds.

The grid minimizer is a normalized gradient flow in imaginary time. Each
step treats the kinetic term implicitly and the (frozen) self-potential
explicitly::

    psi' = psi - dtau * (1 + dtau k^2/2)^-1 (H psi - eps psi),   renormalize

so its fixed points are exactly the solutions of ``H[psi] psi = eps psi``.
Steps that raise the energy are rejected and ``dtau`` is halved.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import kernels
from .fields import (
    ComplexField,
    EnergyBreakdown,
    UniformGrid,
    boundary_amplitude,
    centroid,
    fftn,
    gaussian,
    ifftn,
    rms_width,
    translate,
)
from .gravity import NEWTONIAN, Kernel, RadialProfile, potential_array, radial_potential

log = logging.getLogger(__name__)


class NoGroundStateError(ValueError):
    """The functional has no minimizer for this kernel (e.g. no gravity)."""


class ConvergenceError(RuntimeError):
    """A solver stopped without meeting its tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass
class GroundStateResult:
    phi0: ComplexField
    energy: EnergyBreakdown
    epsilon: float
    width: float
    iterations: int
    residual: float
    max_imag: float = 0.0
    boundary: float = 0.0
    energy_history: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)

    def summary(self) -> dict:
        return {
            "E": self.energy.E,
            "T": self.energy.T,
            "W": self.energy.W,
            "epsilon": self.epsilon,
            "width": self.width,
            "iterations": self.iterations,
            "residual": self.residual,
            "max_imag": self.max_imag,
            "boundary": self.boundary,
        }


# --------------------------------------------------------------------------
# Gaussian trial states (sigma = standard deviation of the density per axis)
# --------------------------------------------------------------------------


def gaussian_energy(sigma: float, kernel: Kernel = NEWTONIAN) -> EnergyBreakdown:
    """Energy of a normalized Gaussian of density standard deviation ``sigma``."""
    T = 3.0 / (8.0 * sigma**2)
    g = kernel.strength
    if kernel.variant == "none":
        W = 0.0
    elif kernel.variant == "newtonian":
        W = -g / (2.0 * math.sqrt(math.pi) * sigma)
    elif kernel.variant == "harmonic_sphere":
        R = kernel.R
        # <|x - x'|^2> = 6 sigma^2 for two independent draws
        W = g * (-0.6 / R + 1.5 * sigma**2 / R**3)
    else:
        raise ValueError(f"no closed-form Gaussian energy for kernel {kernel.variant!r}")
    return EnergyBreakdown(T=T, W=W)


def gaussian_variational(kernel: Kernel = NEWTONIAN) -> dict:
    """Minimize the energy over normalized Gaussians in closed form."""
    g = kernel.strength
    if kernel.variant == "none" or g <= 0:
        raise NoGroundStateError("no bound Gaussian minimum without attraction")
    if kernel.variant == "newtonian":
        sigma = 1.5 * math.sqrt(math.pi) / g
    elif kernel.variant == "harmonic_sphere":
        sigma = (kernel.R**3 / (4.0 * g)) ** 0.25
    else:
        raise ValueError("Gaussian bound available for newtonian and harmonic_sphere kernels")
    e = gaussian_energy(sigma, kernel)
    return {"sigma_star": sigma, "E_star": e.E, "T_star": e.T, "W_star": e.W}


# --------------------------------------------------------------------------
# grid minimizer
# --------------------------------------------------------------------------


class _Hamiltonian:
    """``-1/2 lap + V[|psi|^2]`` on a grid, with the potential refreshed on demand."""

    def __init__(self, grid: UniformGrid, kernel: Kernel):
        self.grid = grid
        self.kernel = kernel
        self.half_k2 = 0.5 * grid.k2
        self.dv = grid.cell_volume

    def potential(self, psi):
        return potential_array(kernels.abs2(psi), self.grid, self.kernel)

    def evaluate(self, psi, V):
        """Return ``(H psi, T, W, eps)`` for a normalized ``psi``."""
        spec = fftn(psi)
        T = float(np.sum(self.half_k2 * kernels.abs2(spec))) * self.dv / self.grid.n**3
        spec *= self.half_k2
        Hpsi = ifftn(spec)
        rho = kernels.abs2(psi)
        vrho = float(np.sum(V * rho)) * self.dv
        Hpsi += V * psi
        return Hpsi, T, 0.5 * vrho, T + vrho

    def energy(self, psi, V):
        spec = fftn(psi)
        T = float(np.sum(self.half_k2 * kernels.abs2(spec))) * self.dv / self.grid.n**3
        W = 0.5 * float(np.sum(V * kernels.abs2(psi))) * self.dv
        return T, W


def _normalized(values, dv):
    n2 = float(np.sum(kernels.abs2(values))) * dv
    if not n2 > 0:
        raise ValueError("initial state has zero norm")
    return values / math.sqrt(n2)


def minimize(
    grid: UniformGrid,
    kernel: Kernel = NEWTONIAN,
    init: Union[ComplexField, str, None] = "gaussian",
    tol: float = 1e-8,
    max_iter: int = 50_000,
    dtau: Optional[float] = None,
    init_scale: float = 1.0,
    recenter: bool = True,
) -> GroundStateResult:
    """Normalized minimizer of the energy functional on ``grid``.

    Parameters
    ----------
    init : ComplexField or "gaussian"
        Starting state. ``"gaussian"`` uses the closed-form variational
        optimum, widened by ``init_scale``.
    tol : float
        Stop when ``||H psi - eps psi|| / T`` drops below this.
    dtau : float, optional
        Initial pseudo-time step. Defaults to ``0.5 / T`` of the initial
        state, i.e. half the kinetic time scale.

    Raises
    ------
    NoGroundStateError
        For a kernel without attraction.
    ConvergenceError
        When ``max_iter`` is exhausted or the step collapses.
    """
    if not kernel.attractive:
        raise NoGroundStateError(
            f"kernel {kernel.variant!r} has no attraction: the packet spreads without bound"
        )
    H = _Hamiltonian(grid, kernel)
    dv = grid.cell_volume
    if isinstance(init, ComplexField):
        if init.grid != grid:
            raise ValueError("initial field lives on a different grid")
        psi = init.values.copy()
    elif init in (None, "gaussian"):
        sigma = gaussian_variational(kernel)["sigma_star"] * init_scale
        psi = gaussian(grid, sigma).values.copy()
    else:
        raise ValueError(f"unknown init preset {init!r}")
    psi = _normalized(psi, dv)

    V = H.potential(psi)
    Hpsi, T, W, eps = H.evaluate(psi, V)
    E = T + W
    if dtau is None:
        dtau = 0.5 / T
    dtau_min = dtau * 2.0**-30
    energies = [E]
    residual = math.sqrt(float(np.sum(kernels.abs2(Hpsi - eps * psi))) * dv) / T
    it = 0
    # energy comparisons tolerate roundoff in the quadrature sums
    slack = 64 * np.finfo(float).eps
    while residual >= tol:
        if it >= max_iter:
            raise ConvergenceError(
                f"no convergence after {it} iterations (residual {residual:.3e})",
                {"iterations": it, "residual": residual, "dtau": dtau, "E": E},
            )
        it += 1
        grad = Hpsi - eps * psi
        gspec = fftn(grad)
        gspec /= 1.0 + dtau * H.half_k2
        trial = psi - dtau * ifftn(gspec)
        trial = _normalized(trial, dv)
        V_trial = H.potential(trial)
        T_t, W_t = H.energy(trial, V_trial)
        E_t = T_t + W_t
        if E_t > E + slack * (abs(E) + abs(T_t) + abs(W_t)):
            dtau *= 0.5
            log.debug("iteration %d: energy rose, dtau -> %.3g", it, dtau)
            if dtau < dtau_min:
                raise ConvergenceError(
                    "step size collapsed before convergence",
                    {"iterations": it, "residual": residual, "dtau": dtau, "E": E},
                )
            continue
        psi, V = trial, V_trial
        Hpsi, T, W, eps = H.evaluate(psi, V)
        E = T + W
        energies.append(E)
        residual = math.sqrt(float(np.sum(kernels.abs2(Hpsi - eps * psi))) * dv) / T
        if it % 50 == 0:
            log.info("iteration %d: E=%.12g residual=%.3e dtau=%.3g", it, E, residual, dtau)

    field_ = ComplexField(grid, psi)
    if recenter:
        c = centroid(field_)
        if np.max(np.abs(c)) > 1e-12 * grid.h:
            field_ = translate(field_, -c)
    values = field_.values
    peak = np.unravel_index(np.argmax(np.abs(values)), values.shape)
    phase = values[peak] / abs(values[peak])
    values = values / phase
    max_imag = float(np.max(np.abs(values.imag)) / np.max(np.abs(values)))
    phi0 = ComplexField(grid, values.real.astype(np.complex128))
    V = H.potential(phi0.values)
    Hpsi, T, W, eps = H.evaluate(phi0.values, V)
    residual = math.sqrt(float(np.sum(kernels.abs2(Hpsi - eps * phi0.values))) * dv) / T
    return GroundStateResult(
        phi0=phi0,
        energy=EnergyBreakdown(T=T, W=W),
        epsilon=eps,
        width=rms_width(phi0),
        iterations=it,
        residual=residual,
        max_imag=max_imag,
        boundary=boundary_amplitude(phi0.values),
        energy_history=np.asarray(energies),
    )


def eigenvalue(phi: ComplexField, kernel: Kernel = NEWTONIAN) -> float:
    """Lagrange multiplier ``<phi|H[phi]|phi> = T + 2W`` of a normalized state."""
    H = _Hamiltonian(phi.grid, kernel)
    V = H.potential(phi.values) if kernel.variant != "none" else np.zeros(phi.grid.shape)
    return H.evaluate(phi.values, V)[3]


# --------------------------------------------------------------------------
# radial shooting oracle
# --------------------------------------------------------------------------


@dataclass
class RadialSolution:
    epsilon: float
    E: float
    T: float
    W: float
    width: float
    profile: RadialProfile  # u(r) = sqrt(4 pi) r phi(r), unit L2 norm on [0, rmax]
    potential: RadialProfile
    iterations: int
    nodes: int

    def summary(self):
        return {
            "epsilon": self.epsilon,
            "E": self.E,
            "T": self.T,
            "W": self.W,
            "width": self.width,
            "iterations": self.iterations,
        }


def _simpson(y, dx):
    from scipy.integrate import simpson

    return float(simpson(y, dx=dx))


def _count_nodes(u):
    s = np.sign(u)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _ground_eigenvalue(V, dr, lo, hi, batch=33, rel_tol=4e-16):
    """Bisect (in batches) for the boundary between nodeless and noded solutions.

    ``V`` is sampled at ``r_i = i dr`` including ``r = 0``.
    """
    trace = []
    for _ in range(200):
        trial = np.linspace(lo, hi, batch)
        u = kernels.numerov(V, trial, dr, 0.0, dr)
        # a nodeless solution stays positive all the way out
        positive = np.all(u[:, 1:] > 0, axis=1)
        trace.append((lo, hi, int(positive.sum())))
        if positive.all():
            lo, hi = hi, hi + (hi - lo)
            if lo >= 0:
                raise ConvergenceError("no bound state below zero", {"trace": trace})
            hi = min(hi, 0.0)
            continue
        if not positive[0]:
            lo, hi = lo - (hi - lo), lo
            continue
        j = int(np.argmin(positive))  # first trial with a node
        lo, hi = trial[j - 1], trial[j]
        if hi - lo <= rel_tol * abs(hi):
            return 0.5 * (lo + hi), lo, hi
    raise ConvergenceError("eigenvalue bracketing did not converge", {"trace": trace})


def _bound_state(V, r, dr, eps):
    """Nodeless solution at ``eps``: outward Numerov up to the turning point,
    inward Numerov beyond it, joined continuously."""
    n = r.size
    u_out = kernels.numerov(V, [eps], dr, 0.0, dr)[0]
    allowed = np.nonzero(V[1:] < eps)[0]
    turn = int(allowed[-1]) + 1 if allowed.size else n // 4
    match = min(max(turn, 8), n - 8)
    u_in = kernels.numerov(V[::-1], [eps], dr, 0.0, 1e-30)[0][::-1]
    u = u_out.copy()
    u[match:] = u_in[match:] * (u_out[match] / u_in[match])
    return u


def radial_shooting_oracle(
    rmax: float = 60.0,
    npoints: int = 12_000,
    strength: float = 1.0,
    mixing: float = 0.5,
    tol: float = 1e-12,
    max_iter: int = 500,
) -> RadialSolution:
    """Spherically symmetric ground state by shooting plus self-consistency.

    Solves ``u'' = 2 (V - eps) u`` with ``V`` the shell-theorem potential of
    ``rho = u^2 / (4 pi r^2)``, choosing ``eps`` so that ``u`` is nodeless
    and decays. The density is mixed linearly between iterations until
    ``eps`` changes by less than ``tol`` (relative).
    """
    dr = rmax / npoints
    r = np.arange(npoints + 1) * dr
    rpos = r[1:]
    sigma = gaussian_variational(Kernel("newtonian", strength=strength))["sigma_star"]
    rho = (2 * np.pi * sigma**2) ** -1.5 * np.exp(-rpos**2 / (2 * sigma**2))
    eps_prev = None
    lo_hint = None
    for it in range(1, max_iter + 1):
        Vp = radial_potential(RadialProfile(rpos, rho), strength=strength).values
        # V(0): limit of the shell formula at the centre
        V0 = Vp[0] - (Vp[1] - Vp[0]) * rpos[0] / dr
        V = np.concatenate([[V0], Vp])
        vmin = float(V.min())
        if lo_hint is None:
            lo, hi = vmin, 0.5 * vmin
        else:
            width_ = max(abs(lo_hint) * 0.05, 1e-6)
            lo, hi = max(lo_hint - width_, vmin), min(lo_hint + width_, 0.0)
        eps, _, _ = _ground_eigenvalue(V, dr, lo, hi)
        u = _bound_state(V, r, dr, eps)
        u /= math.sqrt(_simpson(u * u, dr))
        rho_new = u[1:] ** 2 / (4 * np.pi * rpos**2)
        if eps_prev is not None and abs(eps - eps_prev) <= tol * abs(eps):
            rho = rho_new
            break
        rho = (1.0 - mixing) * rho + mixing * rho_new
        eps_prev = lo_hint = eps
    else:
        raise ConvergenceError(f"self-consistency failed after {max_iter} iterations", {"epsilon": eps})

    # final potential of the converged density; T from the derivative, not from eps
    Vp = radial_potential(RadialProfile(rpos, rho), strength=strength).values
    V0 = Vp[0] - (Vp[1] - Vp[0]) * rpos[0] / dr
    V = np.concatenate([[V0], Vp])
    du = np.gradient(u, dr, edge_order=2)
    T = 0.5 * _simpson(du * du, dr)
    W = 0.5 * _simpson(V * u * u, dr)
    width = math.sqrt(_simpson(r * r * u * u, dr))
    return RadialSolution(
        epsilon=eps,
        E=T + W,
        T=T,
        W=W,
        width=width,
        profile=RadialProfile(rpos, u[1:]),
        potential=RadialProfile(rpos, Vp),
        iterations=it,
        nodes=_count_nodes(u[1:]),
    )


def radial_to_grid(sol: RadialSolution, grid: UniformGrid) -> ComplexField:
    """Interpolate the oracle's profile onto a 3-D grid (for warm starts and checks)."""
    r = np.sqrt(grid.r2)
    rp, u = sol.profile.r, sol.profile.values
    phi_r = u / (math.sqrt(4 * np.pi) * rp)
    phi = np.interp(r, rp, phi_r, left=phi_r[0], right=0.0)
    return ComplexField(grid, phi)
