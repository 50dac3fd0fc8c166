"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately avoid the code paths they are used to check:

* ``pv_hilbert_oracle``   brute-force principal-value quadrature on a dense
  grid with symmetric singularity exclusion (no FFT, no interleaving trick).
* ``conjugate_pair_from_roots``   boundary log-modulus and conjugate phase of
  a helicity polynomial assembled factor by factor from its roots (no Hilbert
  transform, no phase unwrapping).
* ``log_series_coefficients_newton``   the positive-frequency log expansion
  coefficients C_n = A_n = B_n from Newton power-sum identities applied to the
  reversed polynomial (no sampling, no Fourier analysis).
"""

import numpy as np
import pytest

from cyclicphase.trigpoly import offset_grid, polynomial_roots


def pv_hilbert_oracle(f, s0, m_dense=200_001):
    """P int f(s') (1/2) cot((s'-s0)/2) ds' by symmetric-exclusion midpoint rule.

    ``f`` is a callable; the dense grid is chosen so that s0 falls exactly
    between two nodes, which realises the symmetric principal-value limit.
    """
    h = 2.0 * np.pi / m_dense
    sp = s0 + h / 2 + h * np.arange(m_dense)  # nodes straddle s0 symmetrically
    kernel = 0.5 / np.tan((sp - s0) / 2.0)
    return float(np.sum(f(sp) * kernel) * h)


def conjugate_pair_from_roots(c, s, unit_tol=1e-8):
    """(log|chi/c0|, conjugate phase) on the grid, from the root factorisation."""
    roots = polynomial_roots(np.asarray(c, dtype=float))
    z = np.exp(1j * np.asarray(s))
    log_mod = np.zeros(len(s))
    phase = np.zeros(len(s))
    for zr in roots:
        if abs(abs(zr) - 1.0) <= unit_tol:
            u = np.mod(s - np.angle(zr), 2.0 * np.pi)
            log_mod += np.log(2.0 * np.abs(np.sin(u / 2.0)))
            phase += (u - np.pi) / 2.0
        elif abs(zr) > 1.0:
            w = np.log(1.0 - z / zr)
            log_mod += w.real
            phase += w.imag
        else:
            raise ValueError("oracle requires all zeros on or outside the unit circle")
    return log_mod, phase


def log_series_coefficients_newton(c, n_max):
    """C_n of log(chi/c_0) = sum_{n>0} C_n e^{ins} via Newton power sums.

    The inverse roots 1/z_r are the roots of the reversed monic polynomial
    w^d + (c_1/c_0) w^{d-1} + ... + c_d/c_0; their power sums p_n obey
    p_n + sum_{i<n} a_i p_{n-i} + n a_n = 0 (a_i = 0 beyond the degree), and
    C_n = -p_n / n.
    """
    c = np.asarray(c, dtype=float)
    if c[0] == 0.0:
        raise ValueError("c_0 must not vanish")
    a = c / c[0]
    d = len(c) - 1
    p = np.zeros(n_max + 1)
    for n in range(1, n_max + 1):
        acc = -n * (a[n] if n <= d else 0.0)
        for i in range(1, n):
            acc -= (a[i] if i <= d else 0.0) * p[n - i]
        p[n] = acc
    out = np.zeros(n_max + 1)
    out[1:] = -p[1:] / np.arange(1, n_max + 1)
    return out


def itoh_unwrap(raw):
    d = np.diff(raw)
    d = (d + np.pi) % (2.0 * np.pi) - np.pi
    return raw[0] + np.concatenate(([0.0], np.cumsum(d)))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


@pytest.fixture
def grid_4096():
    return offset_grid(4096)
