"""Compiled objective functions for the simplex search.

Each objective has signature ``f(x, data) -> float`` and is minimized.
"""

import math

import numba as nb
import numpy as np


@nb.njit(cache=True)
def _bloch_observable(theta, phi):
    nx = math.sin(theta) * math.cos(phi)
    ny = math.sin(theta) * math.sin(phi)
    nz = math.cos(theta)
    o = np.empty((2, 2), np.complex128)
    o[0, 0] = nz
    o[0, 1] = nx - 1j * ny
    o[1, 0] = nx + 1j * ny
    o[1, 1] = -nz
    return o


@nb.njit(cache=True)
def _expect_product(rho, a, b):
    # tr(rho (a (x) b)) with entry ((i k), (j l)) = a[i, j] b[k, l]
    acc = 0.0 + 0.0j
    for i in range(2):
        for k in range(2):
            for j in range(2):
                for l in range(2):
                    acc += rho[2 * j + l, 2 * i + k] * a[i, j] * b[k, l]
    return acc.real


@nb.njit(cache=True)
def neg_chsh(x, rho):
    a = _bloch_observable(x[0], x[1])
    ap = _bloch_observable(x[2], x[3])
    b = _bloch_observable(x[4], x[5])
    bp = _bloch_observable(x[6], x[7])
    return -(
        _expect_product(rho, a, b)
        + _expect_product(rho, a, bp)
        + _expect_product(rho, ap, b)
        - _expect_product(rho, ap, bp)
    )


@nb.njit(cache=True)
def neg_i3(x, factor):
    # factor is V with rho = V V^dagger; P(a, b) = sum_k |<ab| A (x) B |v_k>|^2
    s = 1.0 / math.sqrt(3.0)
    w = 2.0 * math.pi / 3.0
    amat = np.empty((2, 3, 3), np.complex128)
    bmat = np.empty((2, 3, 3), np.complex128)
    for k in range(2):
        for a in range(3):
            for j in range(3):
                amat[k, a, j] = s * np.exp(1j * (w * a * j - x[3 * k + j]))
                bmat[k, a, j] = s * np.exp(1j * (-w * a * j - x[6 + 3 * k + j]))

    p = np.zeros((2, 2, 3, 3))
    xa = np.empty((3, 3), np.complex128)
    for col in range(factor.shape[1]):
        for m in range(2):
            # xa = A_m @ V_col reshaped to 3x3
            for a in range(3):
                for l in range(3):
                    acc = 0j
                    for i in range(3):
                        acc += amat[m, a, i] * factor[3 * i + l, col]
                    xa[a, l] = acc
            for n in range(2):
                for a in range(3):
                    for b in range(3):
                        acc = 0j
                        for l in range(3):
                            acc += xa[a, l] * bmat[n, b, l]
                        p[m, n, a, b] += acc.real * acc.real + acc.imag * acc.imag

    total = 0.0
    for j in range(3):
        j1 = (j + 1) % 3
        total += p[0, 0, j, j] + p[1, 0, j, j1] + p[1, 1, j, j] + p[0, 1, j, j]
        total -= p[0, 0, j, j1] + p[1, 0, j, j] + p[1, 1, j, j1] + p[0, 1, j1, j]
    return -total
