"""Trigonometric polynomials on the offset sample grid.

A signal here is a finite series

    phi(s) = sum_n a_n cos(n s) + i sum_n b_n sin(n s),   n = 0..n_max,

with real coefficients (which encodes phi*(s) = phi(-s)).  Multiplying by
e^{i n_max s} turns it into the positive-frequency ("helicity") polynomial
chi(s) = sum_m c_m e^{i m s}, m = 0..2 n_max, whose zero locations decide
whether log(chi/c_0) expands in positive frequencies only.

All sampling happens on the half-sample-offset grid

    s_j = -pi + (j + 1/2) * 2 pi / m,   j = 0..m-1,

which never contains s = +-pi/2 or s = +-pi, so the driven-model amplitude
zeros are never sampled exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: absolute tolerance for discarding imaginary residue of extracted coefficients
REALITY_TOL = 1e-10

#: default |z| >= 1 - tolerance for the zero-location gate (boundary case Im t = 0 passes)
ROOT_TOL = 1e-9


def offset_grid(m_samples: int) -> np.ndarray:
    """Return the offset grid s_j = -pi + (j + 1/2) h, h = 2 pi / m_samples.

    m_samples must be a positive multiple of 4; otherwise the grid would
    contain s = +-pi/2 exactly.
    """
    if m_samples <= 0 or m_samples % 4 != 0:
        raise ValueError(
            f"m_samples must be a positive multiple of 4 so the offset grid "
            f"avoids s = +-pi/2; got {m_samples}"
        )
    h = 2.0 * np.pi / m_samples
    return -np.pi + (np.arange(m_samples) + 0.5) * h


def spectrum(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two-sided Fourier coefficients of samples on the offset grid.

    Returns (fhat, n) with values(s_j) = sum_n fhat[n] e^{i n s_j} for signed
    integer frequencies n in [-m/2, m/2).  Exact (to round-off) for content
    band-limited below m/2.
    """
    m = len(values)
    fft = np.fft.fft(values) / m
    n = np.rint(np.fft.fftfreq(m, d=1.0 / m)).astype(int)
    twiddle = (-1.0) ** n * np.exp(-1j * np.pi * n / m)
    return fft * twiddle, n


def from_spectrum(fhat: np.ndarray, n: np.ndarray) -> np.ndarray:
    """Inverse of :func:`spectrum` back onto the offset grid."""
    m = len(fhat)
    twiddle = (-1.0) ** n * np.exp(-1j * np.pi * n / m)
    return np.fft.ifft(fhat / twiddle * m)


@dataclass(frozen=True)
class SampledSignal:
    """Complex samples of a period-2pi function on the offset grid."""

    m_samples: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        offset_grid(self.m_samples)  # validates m_samples
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.m_samples,):
            raise ValueError("values length does not match m_samples")
        if not np.all(np.isfinite(values)):
            raise ValueError("signal values must be finite")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values) -> "SampledSignal":
        values = np.asarray(values, dtype=complex)
        return cls(len(values), values)

    @property
    def grid(self) -> np.ndarray:
        return offset_grid(self.m_samples)


@dataclass(frozen=True)
class TrigSeries:
    """Real cosine/sine coefficients a_n, b_n, n = 0..n_max (b_0 = 0)."""

    n_max: int
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if self.n_max < 0:
            raise ValueError("n_max must be >= 0")
        if a.shape != (self.n_max + 1,) or b.shape != (self.n_max + 1,):
            raise ValueError("coefficient arrays must have length n_max + 1")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("coefficients must be finite")
        if b[0] != 0.0:
            raise ValueError("b[0] must be zero (sin(0 t) carries no coefficient)")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


@dataclass(frozen=True)
class HelicitySeries:
    """Real coefficients c_m, m = 0..2N, of the positive-frequency polynomial."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 1 or len(c) % 2 == 0:
            raise ValueError("c must be a 1-d array of odd length 2N + 1")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "c", c)

    @property
    def n_max(self) -> int:
        return (len(self.c) - 1) // 2

    def values(self, grid: np.ndarray) -> np.ndarray:
        """Evaluate sum_m c_m e^{i m s} on the given grid."""
        return np.polyval(self.c[::-1], np.exp(1j * np.asarray(grid)))


def _min_samples(n_max: int) -> int:
    return 4 * n_max + 4


def analyze(signal, n_max: int) -> TrigSeries:
    """Extract a_n, b_n from samples of a trigonometric polynomial.

    Parameters
    ----------
    signal : SampledSignal or array_like
        Samples on the offset grid of a function satisfying phi*(s) = phi(-s).
    n_max : int
        Highest harmonic to extract.  Requires m_samples >= 4 n_max + 4.

    Raises
    ------
    ValueError
        If the grid is too coarse for n_max, or the imaginary residue of an
        extracted coefficient exceeds REALITY_TOL (symmetry violation).
    """
    if not isinstance(signal, SampledSignal):
        signal = SampledSignal.from_values(signal)
    if signal.m_samples < _min_samples(n_max):
        raise ValueError(
            f"m_samples = {signal.m_samples} too small for n_max = {n_max}: "
            f"need at least {_min_samples(n_max)} (aliasing)"
        )
    fhat, n = spectrum(signal.values)
    pos = np.array([fhat[n == m][0] for m in range(n_max + 1)])
    neg = np.array([fhat[n == -m][0] for m in range(n_max + 1)])
    a = pos + neg
    a[0] = fhat[n == 0][0]
    b = pos - neg
    b[0] = 0.0
    residue = max(np.max(np.abs(a.imag)), np.max(np.abs(b.imag)))
    if residue > REALITY_TOL:
        raise ValueError(
            f"coefficient-reality violation: imaginary residue {residue:.3e} "
            f"exceeds {REALITY_TOL:.0e}; input does not satisfy phi*(s) = phi(-s)"
        )
    return TrigSeries(n_max, a.real.copy(), b.real.copy())


def synthesize(series: TrigSeries, m_samples: int,
               fejer_order: int | None = None) -> SampledSignal:
    """Evaluate the series on the offset grid.

    With ``fejer_order = K`` the Cesaro mean of the partial sums S_0..S_K is
    returned instead, i.e. harmonic n is weighted by max(0, 1 - n/(K+1)).
    """
    if m_samples < _min_samples(series.n_max):
        raise ValueError(
            f"m_samples = {m_samples} too small for n_max = {series.n_max}"
        )
    s = offset_grid(m_samples)
    n = np.arange(series.n_max + 1)
    if fejer_order is not None:
        if fejer_order < 0:
            raise ValueError("fejer_order must be >= 0")
        w = np.maximum(0.0, 1.0 - n / (fejer_order + 1.0))
    else:
        w = np.ones_like(n, dtype=float)
    ns = np.outer(n, s)
    values = (w * series.a) @ np.cos(ns) + 1j * ((w * series.b) @ np.sin(ns))
    return SampledSignal(m_samples, values)


def to_helicity(series: TrigSeries) -> HelicitySeries:
    """Convert a_n, b_n to the positive-frequency coefficients c_m.

    c_m = (a_{N-m} - b_{N-m})/2 for m < N, c_N = a_0, and
    c_m = (a_{m-N} + b_{m-N})/2 for m > N.  The result is sign-normalised so
    that c_0 >= 0 and verified against the pointwise synthesis identity
    chi(s) = e^{iNs} phi(s).
    """
    nmax = series.n_max
    c = np.zeros(2 * nmax + 1)
    for m in range(2 * nmax + 1):
        if m < nmax:
            c[m] = 0.5 * (series.a[nmax - m] - series.b[nmax - m])
        elif m == nmax:
            c[m] = series.a[0]
        else:
            c[m] = 0.5 * (series.a[m - nmax] + series.b[m - nmax])
    if c[0] < 0.0:
        c = -c  # chi/c_0 is unchanged under a global sign flip
        series = TrigSeries(nmax, -series.a, -series.b)
    out = HelicitySeries(c)
    m_check = max(64, _min_samples(nmax))
    grid = offset_grid(m_check)
    direct = np.exp(1j * nmax * grid) * synthesize(series, m_check).values
    dev = np.max(np.abs(out.values(grid) - direct))
    if dev > 1e-10:
        raise ValueError(f"helicity synthesis identity violated: max dev {dev:.3e}")
    return out


def _companion_eigenvalues(coeffs: np.ndarray) -> np.ndarray:
    """Eigenvalues of the companion matrix of sum_m coeffs[m] z^m (monic-scaled)."""
    d = len(coeffs) - 1
    monic = coeffs / coeffs[-1]
    comp = np.zeros((d, d), dtype=complex)
    comp[1:, :-1] = np.eye(d - 1)
    comp[:, -1] = -monic[:-1]
    return np.linalg.eigvals(comp)


def _refine_root_clusters(coeffs: np.ndarray, roots: np.ndarray,
                          cluster_tol: float = 1e-5) -> np.ndarray:
    """Polish companion eigenvalues; multiple roots via the derivative chain.

    A cluster of m eigenvalues within cluster_tol is treated as one root of
    multiplicity m and refined by Newton iteration on the (m-1)-th derivative,
    where it is simple.  Raw companion eigenvalues of a double root carry
    O(sqrt(eps)) ~ 1e-8 errors, too coarse for the unit-circle gate.
    """
    poly = np.polynomial.polynomial.Polynomial(coeffs)
    derivs = [poly]
    for _ in range(len(coeffs)):
        derivs.append(derivs[-1].deriv())
    out = np.empty_like(roots)
    used = np.zeros(len(roots), dtype=bool)
    pos = 0
    for i in range(len(roots)):
        if used[i]:
            continue
        cluster = np.where(~used & (np.abs(roots - roots[i]) < cluster_tol))[0]
        used[cluster] = True
        mult = len(cluster)
        x0 = roots[cluster].mean()
        p, dp = derivs[mult - 1], derivs[mult]
        x = x0
        for _ in range(60):
            fx, dfx = p(x), dp(x)
            if dfx == 0:
                break
            step = fx / dfx
            x = x - step
            if abs(step) <= 1e-15 * (1.0 + abs(x)):
                break
        if abs(p(x)) > abs(p(x0)) or abs(x - x0) > 100 * cluster_tol:
            x = x0  # refinement did not improve; keep the eigenvalue cluster mean
        out[pos:pos + mult] = x
        pos += mult
    return out


def polynomial_roots(c: np.ndarray, trim_tol: float = 1e-13) -> np.ndarray:
    """All roots of P(z) = sum_m c[m] z^m via companion-matrix eigenvalues.

    Trailing coefficients below trim_tol * max|c| are trimmed so the degree is
    well defined.  Clustered eigenvalues are polished to full accuracy.
    """
    c = np.asarray(c, dtype=float)
    scale = np.max(np.abs(c)) if len(c) else 0.0
    if scale == 0.0:
        raise ValueError("degenerate (all-zero) polynomial has no defined roots")
    keep = len(c)
    while keep > 1 and abs(c[keep - 1]) <= trim_tol * scale:
        keep -= 1
    c = c[:keep]
    if len(c) == 1:
        return np.empty(0, dtype=complex)
    raw = _companion_eigenvalues(c)
    return _refine_root_clusters(c, raw)


@dataclass(frozen=True)
class RootCheckResult:
    """Zero-location gate: all roots of the helicity polynomial on/outside |z| = 1."""

    roots: np.ndarray
    passed: bool
    min_modulus: float


def root_check(series: HelicitySeries | np.ndarray,
               tolerance: float = ROOT_TOL) -> RootCheckResult:
    """Check that all zeros z of sum c_m z^m satisfy |z| >= 1 - tolerance.

    z = e^{is}, so |z| >= 1 is the condition that the zeros of phi(t) lie at
    Im t <= 0 (real-axis zeros sit on the unit circle and pass as the boundary
    case).
    """
    c = series.c if isinstance(series, HelicitySeries) else np.asarray(series, dtype=float)
    roots = polynomial_roots(c)
    if len(roots) == 0:
        return RootCheckResult(roots, True, np.inf)
    min_mod = float(np.min(np.abs(roots)))
    return RootCheckResult(roots, bool(min_mod >= 1.0 - tolerance), min_mod)
