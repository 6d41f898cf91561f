"""Compiled Nelder-Mead simplex search used by the Bell-value maximizers.

The objective is selected by an integer code rather than passed as a
function so that numba can cache the compiled search between processes.
Objectives are minimized; ``data`` is a complex matrix describing the state.
"""

from __future__ import annotations

import numba as nb
import numpy as np

from ._kernels import neg_chsh, neg_i3

CHSH = 0  # data: 4x4 density matrix, x: 8 Bloch angles
CGLMP = 1  # data: 9xr factor V of rho = V V^dagger, x: 12 phases


@nb.njit(cache=True)
def _objective(kind, x, data):
    if kind == CHSH:
        return neg_chsh(x, data)
    return neg_i3(x, data)


@nb.njit(cache=True)
def _simplex_search(kind, x0, data, step, fatol, xatol, maxfev):
    # dimension-adaptive coefficients behave better than the classic ones for n > 5
    n = x0.size
    alpha = 1.0
    beta = 1.0 + 2.0 / n
    gamma = 0.75 - 0.5 / n
    delta = 1.0 - 1.0 / n

    sim = np.empty((n + 1, n))
    fs = np.empty(n + 1)
    sim[0] = x0
    for i in range(n):
        sim[i + 1] = x0
        sim[i + 1, i] += step
    for i in range(n + 1):
        fs[i] = _objective(kind, sim[i], data)
    nfev = n + 1
    c = np.empty(n)

    while nfev < maxfev:
        order = np.argsort(fs)
        sim = sim[order]
        fs = fs[order]

        fspread = 0.0
        xspread = 0.0
        for i in range(1, n + 1):
            fspread = max(fspread, abs(fs[i] - fs[0]))
            for k in range(n):
                xspread = max(xspread, abs(sim[i, k] - sim[0, k]))
        if fspread <= fatol and xspread <= xatol:
            break

        c[:] = 0.0
        for i in range(n):
            c += sim[i]
        c /= n

        xr = c + alpha * (c - sim[n])
        fr = _objective(kind, xr, data)
        nfev += 1
        if fr < fs[0]:
            xe = c + beta * (xr - c)
            fe = _objective(kind, xe, data)
            nfev += 1
            if fe < fr:
                sim[n] = xe
                fs[n] = fe
            else:
                sim[n] = xr
                fs[n] = fr
        elif fr < fs[n - 1]:
            sim[n] = xr
            fs[n] = fr
        else:
            if fr < fs[n]:
                xc = c + gamma * (xr - c)
                fc = _objective(kind, xc, data)
                accept = fc <= fr
            else:
                xc = c - gamma * (c - sim[n])
                fc = _objective(kind, xc, data)
                accept = fc < fs[n]
            nfev += 1
            if accept:
                sim[n] = xc
                fs[n] = fc
            else:
                for i in range(1, n + 1):
                    sim[i] = sim[0] + delta * (sim[i] - sim[0])
                    fs[i] = _objective(kind, sim[i], data)
                nfev += n

    best = np.argmin(fs)
    return sim[best].copy(), fs[best], nfev


def nelder_mead(kind: int, x0, data, *, step=0.5, tol=1e-8, maxfev=50_000, rebuilds=3):
    """Minimize objective ``kind`` (``CHSH`` or ``CGLMP``) over ``x`` starting at ``x0``.

    A run converges when the simplex values agree to ``tol`` and the vertices
    to ``sqrt(tol)``. The simplex is then rebuilt around the best vertex and
    the search repeated, up to ``rebuilds`` times, until a rebuild improves
    the value by less than ``tol``. Returns ``(x, value, evaluations)``.
    """
    # always writeable copies: read-only arrays would compile a second signature
    x = np.array(x0, dtype=np.float64, order="C")
    data = np.array(data, dtype=np.complex128, order="C")
    xatol = float(np.sqrt(tol))
    kind = int(kind)
    x, fx, nfev = _simplex_search(kind, x, data, step, tol, xatol, maxfev)
    for _ in range(rebuilds):
        x2, f2, n2 = _simplex_search(kind, x, data, 10 * xatol, tol, xatol, maxfev)
        nfev += n2
        improved = fx - f2
        if f2 < fx:
            x, fx = x2, f2
        if improved < tol:
            break
    return x, float(fx), int(nfev)
