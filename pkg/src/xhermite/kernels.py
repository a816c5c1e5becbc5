"""Numeric inner loops.

Each kernel exists twice: a loop form compiled by numba and a vectorised
numpy form.  The public names bind to one of them according to
``_accel.USE_NUMBA``; both stay importable for parity tests and benchmarks.
"""

from __future__ import annotations

import math

import numpy as np

from ._accel import USE_NUMBA, njit

_QUARTER_ROOT_2PI = (2.0 * math.pi) ** -0.25


# -- bivariate Horner ---------------------------------------------------------


def _horner2d_loop(a, x, y):
    nx, ny = a.shape
    out = np.empty(x.shape[0], dtype=np.complex128)
    for p in range(x.shape[0]):
        xv = x[p]
        yv = y[p]
        acc = 0.0 + 0.0j
        for i in range(nx - 1, -1, -1):
            row = 0.0 + 0.0j
            for j in range(ny - 1, -1, -1):
                row = row * yv + a[i, j]
            acc = acc * xv + row
        out[p] = acc
    return out


def _horner2d_numpy(a, x, y):
    nx, ny = a.shape
    acc = np.zeros(x.shape[0], dtype=np.complex128)
    for i in range(nx - 1, -1, -1):
        row = np.zeros(x.shape[0], dtype=np.complex128)
        for j in range(ny - 1, -1, -1):
            row = row * y + a[i, j]
        acc = acc * x + row
    return acc


# -- Hermite functions psi_n(x) = p_n He_n(x) exp(-x^2/4) ----------------------


def _hermite_functions_loop(x, nmax):
    npts = x.shape[0]
    out = np.empty((nmax + 1, npts), dtype=np.complex128)
    for p in range(npts):
        xv = x[p]
        prev = _QUARTER_ROOT_2PI * np.exp(-0.25 * xv * xv)
        out[0, p] = prev
        if nmax == 0:
            continue
        cur = xv * prev
        out[1, p] = cur
        for n in range(1, nmax):
            nxt = (xv * cur - math.sqrt(n) * prev) / math.sqrt(n + 1.0)
            out[n + 1, p] = nxt
            prev = cur
            cur = nxt
    return out


def _hermite_functions_numpy(x, nmax):
    out = np.empty((nmax + 1, x.shape[0]), dtype=np.complex128)
    out[0] = _QUARTER_ROOT_2PI * np.exp(-0.25 * x * x)
    if nmax >= 1:
        out[1] = x * out[0]
    for n in range(1, nmax):
        out[n + 1] = (x * out[n] - math.sqrt(n) * out[n - 1]) / math.sqrt(n + 1.0)
    return out


# -- Wronskian ratios for exceptional Hermite functions ------------------------
#
# With psi-table entries c(s, i) * psi_{s-i}(x), c(s, i) = sqrt(s!/(s-i)!),
# D_S(x) = det[c(s, i) psi_{s-i}(x)]_{i, s in S} satisfies
# psi_n^sigma(x) = N_n * D_{sigma + [n]}(x) / D_sigma(x).


def _falling_sqrt(s, i):
    if i > s:
        return 0.0
    v = 1.0
    for r in range(i):
        v *= math.sqrt(s - r)
    return v


def _det_small(m, k):
    # Gaussian elimination with partial pivoting on the leading k x k block
    a = m.copy()
    d = 1.0 + 0.0j
    for c in range(k):
        piv = c
        best = abs(a[c, c])
        for r in range(c + 1, k):
            if abs(a[r, c]) > best:
                best = abs(a[r, c])
                piv = r
        if best == 0.0:
            return 0.0 + 0.0j
        if piv != c:
            for q in range(k):
                tmp = a[c, q]
                a[c, q] = a[piv, q]
                a[piv, q] = tmp
            d = -d
        d *= a[c, c]
        for r in range(c + 1, k):
            f = a[r, c] / a[c, c]
            for q in range(c, k):
                a[r, q] -= f * a[c, q]
    return d


def _wronskian_ratios_loop(x, sigma, ns):
    npts = x.shape[0]
    k = sigma.shape[0]
    nmax = 0
    for s in sigma:
        nmax = max(nmax, s)
    for n in ns:
        nmax = max(nmax, n)
    psi = _hermite_functions_loop(x, nmax)
    out = np.empty((ns.shape[0], npts), dtype=np.complex128)
    mat = np.zeros((k + 1, k + 1), dtype=np.complex128)
    for p in range(npts):
        for i in range(k):
            for c in range(k):
                s = sigma[c]
                mat[i, c] = _falling_sqrt(s, i) * psi[s - i, p] if i <= s else 0.0
        base = _det_small(mat, k) if k > 0 else 1.0 + 0.0j
        for q in range(ns.shape[0]):
            n = ns[q]
            for i in range(k + 1):
                for c in range(k + 1):
                    s = sigma[c] if c < k else n
                    mat[i, c] = _falling_sqrt(s, i) * psi[s - i, p] if i <= s else 0.0
            out[q, p] = _det_small(mat, k + 1) / base
    return out


def _column_block(psi, s, rows):
    col = np.zeros((rows, psi.shape[1]), dtype=np.complex128)
    for i in range(min(rows, s + 1)):
        col[i] = math.sqrt(math.perm(s, i)) * psi[s - i]
    return col


def _wronskian_ratios_numpy(x, sigma, ns):
    k = len(sigma)
    nmax = max([0, *[int(s) for s in sigma], *[int(n) for n in ns]])
    psi = _hermite_functions_numpy(x, nmax)
    if k:
        base_cols = [_column_block(psi, int(s), k) for s in sigma]
        base = np.linalg.det(np.stack(base_cols, axis=-1).transpose(1, 0, 2))
    else:
        base = np.ones(x.shape[0], dtype=np.complex128)
    full_cols = [_column_block(psi, int(s), k + 1) for s in sigma]
    out = np.empty((len(ns), x.shape[0]), dtype=np.complex128)
    for q, n in enumerate(ns):
        cols = full_cols + [_column_block(psi, int(n), k + 1)]
        mats = np.stack(cols, axis=-1).transpose(1, 0, 2)
        out[q] = np.linalg.det(mats) / base
    return out


horner2d_jit = njit(_horner2d_loop)
hermite_functions_jit = njit(_hermite_functions_loop)
_falling_sqrt = njit(_falling_sqrt)
_det_small = njit(_det_small)
_hermite_functions_loop = hermite_functions_jit
wronskian_ratios_jit = njit(_wronskian_ratios_loop)


def _as_c128(x):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(x, dtype=np.complex128)).ravel())


def horner2d(a, x, y):
    """Evaluate ``sum a[i, j] x^i y^j`` pointwise over 1-d arrays ``x``, ``y``."""
    a = np.ascontiguousarray(a, dtype=np.float64)
    x = _as_c128(x)
    y = _as_c128(y)
    if USE_NUMBA:
        return horner2d_jit(a, x, y)
    return _horner2d_numpy(a, x, y)


def hermite_functions(x, nmax: int) -> np.ndarray:
    """Table ``psi[n, p]`` of oscillator eigenfunctions for ``n <= nmax``."""
    x = _as_c128(x)
    if USE_NUMBA:
        return hermite_functions_jit(x, int(nmax))
    return _hermite_functions_numpy(x, int(nmax))


def wronskian_ratios(x, sigma, ns) -> np.ndarray:
    """``D_{sigma+[n]}(x) / D_sigma(x)`` for each n in ``ns`` (rows) and point (cols)."""
    x = _as_c128(x)
    sigma = np.asarray(sigma, dtype=np.int64)
    ns = np.asarray(ns, dtype=np.int64)
    if USE_NUMBA:
        return wronskian_ratios_jit(x, sigma, ns)
    return _wronskian_ratios_numpy(x, sigma, ns)
