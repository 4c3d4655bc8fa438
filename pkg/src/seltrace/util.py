"""Shared numerics: quadrature grids, smooth cutoffs, modular reduction."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


class SeltraceError(Exception):
    """Base class for all library errors."""


class PoleProximityError(SeltraceError):
    """A requested evaluation point sits inside a pole exclusion disk."""

    def __init__(self, points, message="evaluation too close to a pole"):
        self.points = list(np.atleast_1d(points))
        super().__init__(f"{message}: {self.points}")


class DecayError(SeltraceError):
    """Declared or observed decay is insufficient for a convergent contour."""


@lru_cache(maxsize=64)
def gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def gl_nodes(a: float, b: float, n: int):
    """Gauss-Legendre nodes/weights on [a, b]."""
    x, w = gauss_legendre(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def panel_gl_nodes(edges, n: int):
    """Composite Gauss-Legendre nodes over consecutive panels `edges`."""
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = gl_nodes(a, b, n)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def trap_grid(t_max: float, dt: float):
    """Symmetric uniform grid on [-t_max, t_max] with trapezoid weights."""
    n = int(round(2.0 * t_max / dt))
    t = np.linspace(-t_max, t_max, n + 1)
    w = np.full(n + 1, dt)
    w[0] *= 0.5
    w[-1] *= 0.5
    return t, w


def vertical_line_integral(values, weights):
    """(1/2*pi*i) * integral over a vertical line, from samples F(sigma+it).

    ds = i dt, so the prefactor reduces to 1/(2*pi)."""
    return np.sum(values * weights) / (2.0 * np.pi)


def smooth_eta(x):
    """C^infinity cutoff: 1 on (0, 1/2], 0 on [1, inf), monotone in between."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    out[x <= 0.5] = 1.0
    mid = (x > 0.5) & (x < 1.0)
    if np.any(mid):
        t = (x[mid] - 0.5) / 0.5
        a = np.exp(-1.0 / np.clip(1.0 - t, 1e-300, None))
        b = np.exp(-1.0 / np.clip(t, 1e-300, None))
        out[mid] = a / (a + b)
    return out


def smooth_eta_inf(x):
    """Mirror cutoff: 0 on (0, 1], 1 on [2, inf)."""
    x = np.asarray(x, dtype=float)
    return smooth_eta(1.0 / np.clip(x, 1e-300, None))


def reduce_to_fundamental_domain(z: complex, max_iter: int = 200) -> complex:
    """Reduce z in the upper half-plane to {|x| <= 1/2, |z| >= 1} under PSL2(Z)."""
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half-plane")
    for _ in range(max_iter):
        z = complex(z.real - np.round(z.real), z.imag)
        n2 = z.real * z.real + z.imag * z.imag
        if n2 >= 1.0 - 1e-15:
            return z
        z = complex(-z.real / n2, z.imag / n2)
    return z


def coprime_pairs(c_max: int, d_window: int):
    """Arrays (c, d0) with 1 <= c <= c_max, |d0| <= d_window, gcd(c, d0) = 1."""
    cs, ds = [], []
    for c in range(1, c_max + 1):
        d = np.arange(-d_window, d_window + 1)
        g = np.gcd(c, np.abs(d))
        keep = g == 1
        cs.append(np.full(int(np.sum(keep)), c))
        ds.append(d[keep])
    if not cs:
        return np.array([], dtype=int), np.array([], dtype=int)
    return np.concatenate(cs), np.concatenate(ds)


def as_complex_array(x):
    return np.asarray(x, dtype=complex)
