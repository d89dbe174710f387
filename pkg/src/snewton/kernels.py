"""Hot inner loops.

Each kernel exists twice: a numba-compiled version and a pure-numpy
fallback with identical semantics. The public names dispatch to the
compiled version unless numba is unavailable or disabled (see
:mod:`snewton._accel`). Both variants stay importable so they can be
cross-checked and benchmarked against each other.
"""

import numpy as np

from ._accel import HAVE_NUMBA, njit

__all__ = [
    "numerov",
    "numerov_numpy",
    "phase_kick",
    "phase_kick_numpy",
    "abs2",
    "abs2_numpy",
    "scale_by",
    "scale_by_numpy",
]


# --------------------------------------------------------------------------
# Numerov shooting for u'' = 2 (V(r) - eps) u, many trial eps at once
# --------------------------------------------------------------------------


def numerov_numpy(V, eps, dr, u0, u1):
    """Integrate ``u'' = 2 (V - eps) u`` on a uniform mesh for a batch of eps.

    Parameters
    ----------
    V : (N,) float array
        Potential sampled at ``r_i = r_0 + i*dr``.
    eps : (B,) float array
        Trial eigenvalues.
    dr : float
        Mesh step (negative for inward integration on a reversed mesh).
    u0, u1 : float
        Starting values at the first two mesh points.

    Returns
    -------
    (B, N) float array
    """
    V = np.asarray(V, dtype=np.float64)
    eps = np.atleast_1d(np.asarray(eps, dtype=np.float64))
    n = V.shape[0]
    c = dr * dr / 12.0
    # f_i = 1 - c*g_i with g = 2(V - eps)
    out = np.empty((eps.shape[0], n))
    out[:, 0] = u0
    out[:, 1] = u1
    f_prev = 1.0 - c * 2.0 * (V[0] - eps)
    f_cur = 1.0 - c * 2.0 * (V[1] - eps)
    for i in range(1, n - 1):
        f_next = 1.0 - c * 2.0 * (V[i + 1] - eps)
        out[:, i + 1] = ((12.0 - 10.0 * f_cur) * out[:, i] - f_prev * out[:, i - 1]) / f_next
        f_prev, f_cur = f_cur, f_next
    return out


@njit(cache=True)
def _numerov_numba(V, eps, dr, u0, u1):
    n = V.shape[0]
    nb = eps.shape[0]
    c = dr * dr / 12.0
    out = np.empty((nb, n))
    for b in range(nb):
        e = eps[b]
        out[b, 0] = u0
        out[b, 1] = u1
        f_prev = 1.0 - c * 2.0 * (V[0] - e)
        f_cur = 1.0 - c * 2.0 * (V[1] - e)
        for i in range(1, n - 1):
            f_next = 1.0 - c * 2.0 * (V[i + 1] - e)
            out[b, i + 1] = ((12.0 - 10.0 * f_cur) * out[b, i] - f_prev * out[b, i - 1]) / f_next
            f_prev = f_cur
            f_cur = f_next
    return out


def _numerov_dispatch(V, eps, dr, u0, u1):
    V = np.ascontiguousarray(V, dtype=np.float64)
    eps = np.ascontiguousarray(np.atleast_1d(eps), dtype=np.float64)
    return _numerov_numba(V, eps, float(dr), float(u0), float(u1))


# --------------------------------------------------------------------------
# Elementwise field kernels (in place where noted)
# --------------------------------------------------------------------------


def phase_kick_numpy(psi, V, dt):
    """In place: ``psi *= exp(-1j * V * dt)``."""
    psi *= np.exp(-1j * dt * V)
    return psi


@njit(cache=True)
def _phase_kick_numba(psi, V, dt):
    p = psi.ravel()
    v = V.ravel()
    for i in range(p.shape[0]):
        a = -dt * v[i]
        p[i] = p[i] * complex(np.cos(a), np.sin(a))
    return psi


def abs2_numpy(psi):
    """Return ``|psi|**2`` as a new real array."""
    return psi.real * psi.real + psi.imag * psi.imag


@njit(cache=True)
def _abs2_numba(psi):
    p = psi.ravel()
    out = np.empty(p.shape[0])
    for i in range(p.shape[0]):
        z = p[i]
        out[i] = z.real * z.real + z.imag * z.imag
    return out.reshape(psi.shape)


def scale_by_numpy(arr, mult):
    """In place: ``arr *= mult`` (complex array by real multiplier)."""
    arr *= mult
    return arr


@njit(cache=True)
def _scale_by_numba(arr, mult):
    a = arr.ravel()
    m = mult.ravel()
    for i in range(a.shape[0]):
        a[i] = a[i] * m[i]
    return arr


if HAVE_NUMBA:
    numerov = _numerov_dispatch

    def phase_kick(psi, V, dt):
        return _phase_kick_numba(psi, np.ascontiguousarray(V), float(dt))

    def abs2(psi):
        return _abs2_numba(np.ascontiguousarray(psi))

    def scale_by(arr, mult):
        if not (arr.flags.c_contiguous and mult.flags.c_contiguous) or mult.shape != arr.shape:
            return scale_by_numpy(arr, mult)
        return _scale_by_numba(arr, mult)

else:  # pragma: no cover - exercised via SNEWTON_DISABLE_NUMBA
    numerov = numerov_numpy
    phase_kick = phase_kick_numpy
    abs2 = abs2_numpy
    scale_by = scale_by_numpy
