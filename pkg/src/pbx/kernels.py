"""Hot numeric kernels.

Three loops dominate the run time of the verification suites: synthesis
of orthonormal Hermite functions on position grids, batch evaluation of
coherent-state coefficient tables, and the per-node products of the
resolution-of-identity quadrature.  Each exists as a numba ``@njit``
kernel and as a vectorized numpy fallback; :mod:`pbx._backend` picks the
implementation at import time (``PBX_BACKEND`` env flag).

Reductions always go through :func:`pairwise_sum`, a single fixed-order
implementation shared by both backends, so that a given backend produces
bit-identical results run to run.
"""

import numpy as np

from ._backend import USE_NUMBA

__all__ = [
    "hermite_table",
    "coherent_table",
    "quad_node_products",
    "pairwise_sum",
    "hermite_table_numpy",
    "coherent_table_numpy",
    "quad_node_products_numpy",
]


def hermite_table_numpy(x, n_max):
    """Orthonormal Hermite functions psi_0..psi_{n_max-1} sampled on ``x``.

    Uses the normalized three-term recurrence
    ``psi_{n+1} = sqrt(2/(n+1)) x psi_n - sqrt(n/(n+1)) psi_{n-1}``,
    which stays bounded where the polynomial-times-Gaussian form
    overflows past n ~ 20.  Returns an ``(n_max, len(x))`` float array.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((n_max, x.size), dtype=np.float64)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, n_max - 1):
        c1 = np.sqrt(2.0 / (n + 1.0))
        c2 = np.sqrt(n / (n + 1.0))
        out[n + 1] = c1 * x * out[n] - c2 * out[n - 1]
    return out


def coherent_table_numpy(z, dim):
    """Coefficient table C[j, k] = exp(-|z_j|^2/2) z_j^k / sqrt(k!).

    Running product in k avoids factorial overflow; valid for any |z|.
    Returns ``(len(z), dim)`` complex array.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    out = np.empty((z.size, dim), dtype=np.complex128)
    out[:, 0] = np.exp(-0.5 * (z.real * z.real + z.imag * z.imag))
    for k in range(dim - 1):
        out[:, k + 1] = out[:, k] * z / np.sqrt(k + 1.0)
    return out


def quad_node_products_numpy(C, u, v, w):
    """Per-node quadrature contributions t_j = w_j (C_j . u) (conj(C_j) . v)."""
    a = C @ u
    b = np.conj(C) @ v
    return w * a * b


def pairwise_sum(t):
    """Deterministic pairwise reduction (fixed adjacent-halving order).

    Shared by both kernel backends so the accumulation order never
    depends on the backend or array layout.
    """
    arr = np.asarray(t).ravel().copy()
    n = arr.size
    if n == 0:
        return arr.dtype.type(0)
    while n > 1:
        half = n // 2
        arr[:half] = arr[:half] + arr[half : 2 * half]
        if n % 2:
            arr[half - 1] = arr[half - 1] + arr[n - 1]
        n = half
    return arr[0]


if USE_NUMBA:
    from numba import njit, prange

    @njit(cache=True, parallel=True)
    def _hermite_table_nb(x, n_max):
        out = np.empty((n_max, x.size), dtype=np.float64)
        pref = np.pi ** -0.25
        for j in prange(x.size):
            xv = x[j]
            p0 = pref * np.exp(-0.5 * xv * xv)
            out[0, j] = p0
            if n_max > 1:
                p1 = np.sqrt(2.0) * xv * p0
                out[1, j] = p1
                for n in range(1, n_max - 1):
                    c1 = np.sqrt(2.0 / (n + 1.0))
                    c2 = np.sqrt(n / (n + 1.0))
                    p2 = c1 * xv * p1 - c2 * p0
                    out[n + 1, j] = p2
                    p0 = p1
                    p1 = p2
        return out

    @njit(cache=True, parallel=True)
    def _coherent_table_nb(z, dim):
        out = np.empty((z.size, dim), dtype=np.complex128)
        for j in prange(z.size):
            zv = z[j]
            c = np.exp(-0.5 * (zv.real * zv.real + zv.imag * zv.imag)) + 0.0j
            out[j, 0] = c
            for k in range(dim - 1):
                c = c * zv / np.sqrt(k + 1.0)
                out[j, k + 1] = c
        return out

    @njit(cache=True, parallel=True)
    def _quad_node_products_nb(C, u, v, w):
        n, dim = C.shape
        t = np.empty(n, dtype=np.complex128)
        for j in prange(n):
            a = 0.0 + 0.0j
            b = 0.0 + 0.0j
            for k in range(dim):
                a += C[j, k] * u[k]
                b += np.conj(C[j, k]) * v[k]
            t[j] = w[j] * a * b
        return t

    def hermite_table(x, n_max):
        return _hermite_table_nb(np.ascontiguousarray(x, dtype=np.float64), n_max)

    def coherent_table(z, dim):
        z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
        return _coherent_table_nb(np.ascontiguousarray(z), dim)

    def quad_node_products(C, u, v, w):
        return _quad_node_products_nb(
            np.ascontiguousarray(C),
            np.ascontiguousarray(u, dtype=np.complex128),
            np.ascontiguousarray(v, dtype=np.complex128),
            np.ascontiguousarray(w, dtype=np.float64),
        )

    hermite_table.__doc__ = hermite_table_numpy.__doc__
    coherent_table.__doc__ = coherent_table_numpy.__doc__
    quad_node_products.__doc__ = quad_node_products_numpy.__doc__
else:
    hermite_table = hermite_table_numpy
    coherent_table = coherent_table_numpy
    quad_node_products = quad_node_products_numpy
