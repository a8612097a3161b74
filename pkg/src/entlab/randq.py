"""Reproducible random sampling of quantum objects.

All randomness flows through :class:`RngStream`, a counter-based stream
keyed by ``(seed, stream_index)``.  Identical keys reproduce identical
draw sequences across runs and thread schedules, so parallel workers
simply derive disjoint stream indices.  Gaussian variates are produced
by Box-Muller on top of the raw uniform stream (no ziggurat), which
keeps the draw sequence easy to reproduce elsewhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matcore import DensityMatrix, PureState, Spectrum, _eigvalsh
from .channels import Isometry

_MASK64 = (1 << 64) - 1

OVERLAP_DEGENERATE = 1.0 - 1e-12


class RngStream:
    """Counter-based random stream keyed by (seed, stream_index).

    Built on Philox4x64; the key holds the two identifiers and the
    counter advances with the draws, so a stream is a pure function of
    its key and draw position.
    """

    def __init__(self, seed: int, stream_index: int = 0):
        self.seed = int(seed)
        self.stream_index = int(stream_index)
        key = np.array([self.seed & _MASK64, self.stream_index & _MASK64],
                       dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_index={self.stream_index})"

    def substream(self, index: int) -> "RngStream":
        """Derive a disjoint stream for parallel unit ``index``."""
        return RngStream(self.seed, (self.stream_index << 20) ^ (index + 1))

    def uniform(self, shape=()) -> np.ndarray:
        """Uniform doubles in [0, 1)."""
        return self._gen.random(size=shape)

    def standard_normal(self, shape=()) -> np.ndarray:
        """Real N(0, 1) variates via Box-Muller."""
        n = int(np.prod(shape, dtype=int)) if shape != () else 1
        pairs = (n + 1) // 2
        u1 = 1.0 - self._gen.random(pairs)      # (0, 1]
        u2 = self._gen.random(pairs)
        r = np.sqrt(-2.0 * np.log(u1))
        out = np.empty(2 * pairs)
        out[0::2] = r * np.cos(2.0 * np.pi * u2)
        out[1::2] = r * np.sin(2.0 * np.pi * u2)
        out = out[:n]
        return out.reshape(shape) if shape != () else float(out[0])

    def complex_normal(self, shape=()) -> np.ndarray:
        """Standard complex Gaussian with E|z|^2 = 1 (one uniform pair per draw)."""
        n = int(np.prod(shape, dtype=int)) if shape != () else 1
        u1 = 1.0 - self._gen.random(n)
        u2 = self._gen.random(n)
        z = np.sqrt(-np.log(u1)) * np.exp(2j * np.pi * u2)
        return z.reshape(shape) if shape != () else complex(z[0])


def haar_unitary(m: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed unitary on U(m).

    QR of a complex Ginibre matrix, with the R-diagonal phases pushed
    into Q so the decomposition is unique and the law exactly Haar.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    z = rng.complex_normal((m, m))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return q


def random_pure_state(m: int, rng: RngStream) -> PureState:
    """Uniform state on the unit sphere of C^m."""
    v = rng.complex_normal((m,))
    return PureState(v / np.linalg.norm(v))


def random_isometry(s: int, n: int, d: int, rng: RngStream) -> Isometry:
    """Haar-random embedding of C^s into C^d (x) C^n.

    Realized as U W_0 with U Haar on U(nd) and W_0 the first-s-columns
    coordinate embedding, i.e. the first s columns of U.
    """
    if s > n * d:
        raise ValueError(f"s={s} exceeds n*d={n * d}")
    U = haar_unitary(n * d, rng)
    return Isometry(U[:, :s], (s, n, d))


def overlap_decompose(psi: PureState, theta: PureState) -> tuple[complex, PureState]:
    """Split theta into its component along psi and a unit residual.

    Returns (x, phi) with x = <psi|theta>, phi orthogonal to psi, and
    theta = x psi + sqrt(1 - |x|^2) phi.  Near-collinear inputs
    (|x| >= 1 - 1e-12) have no well-defined residual and are rejected.
    """
    if psi.dim != theta.dim:
        raise ValueError("states must have equal length")
    x = complex(np.vdot(psi.amplitudes, theta.amplitudes))
    if abs(x) >= OVERLAP_DEGENERATE:
        raise ValueError("states are numerically collinear; residual undefined")
    resid = theta.amplitudes - x * psi.amplitudes
    phi = resid / np.linalg.norm(resid)
    return x, PureState(phi)


def overlap_tail(s: int, t: float) -> float:
    """P(|<psi|theta>| > t) for theta uniform on the sphere of C^s."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    if s < 1:
        raise ValueError("s must be >= 1")
    return (1.0 - t * t) ** (s - 1)


def mu_log_density(w: Spectrum, n: int, d: int) -> float:
    """Log of the unnormalized induced-measure eigenvalue density.

    For a spectrum w in the d-simplex this is
    ``sum_{i<j} 2 log|w_i - w_j| + (n - d) sum_i log w_i``;
    the boundary (ties, or zeros when n > d) returns -inf.
    """
    if w.dim != d:
        raise ValueError("spectrum dimension mismatch")
    if n < d:
        raise ValueError("need n >= d")
    vals = w.values
    if d == 1:
        return 0.0
    total = 0.0
    for i in range(d):
        for j in range(i + 1, d):
            gap = vals[i] - vals[j]
            if gap == 0.0:
                return -math.inf
            total += 2.0 * math.log(abs(gap))
    if n > d:
        if np.any(vals == 0.0):
            return -math.inf
        total += (n - d) * float(np.sum(np.log(vals)))
    return total


@dataclass(frozen=True)
class MuCdf:
    """Tabulated CDF of the largest induced-measure eigenvalue."""

    d: int
    n: int
    support: np.ndarray
    cdf: np.ndarray

    def __call__(self, x) -> np.ndarray:
        return np.interp(x, self.support, self.cdf, left=0.0, right=1.0)


def mu_cdf_numeric(d: int, n: int, grid_size: int = 4001) -> MuCdf:
    """Largest-eigenvalue CDF of the induced measure, by quadrature.

    d=2 reduces to a 1-D integral of (2w-1)^2 (w(1-w))^(n-2) on
    [1/2, 1]; d=3 uses a midpoint rule on the 2-simplex with
    ``grid_size`` cells per dimension.  Only d in {2, 3} is supported.
    """
    if n < d:
        raise ValueError("need n >= d")
    if grid_size < 10:
        raise ValueError("grid_size too small")
    if d == 2:
        w = np.linspace(0.5, 1.0, grid_size)
        dens = (2.0 * w - 1.0) ** 2 * (w * (1.0 - w)) ** (n - 2)
        steps = np.diff(w)
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * steps)])
        cdf /= cdf[-1]
        cdf = np.maximum.accumulate(cdf)
        return MuCdf(d, n, w, cdf)
    if d == 3:
        g = grid_size
        u = (np.arange(g) + 0.5) / g
        w1, w2 = np.meshgrid(u, u, indexing="ij")
        w3 = 1.0 - w1 - w2
        inside = w3 > 0.0
        w1, w2, w3 = w1[inside], w2[inside], w3[inside]
        dens = ((w1 - w2) * (w1 - w3) * (w2 - w3)) ** 2
        if n > 3:
            dens = dens * (w1 * w2 * w3) ** (n - 3)
        lmax = np.maximum(np.maximum(w1, w2), w3)
        ts = np.linspace(1.0 / 3.0, 1.0, grid_size)
        hist, _ = np.histogram(lmax, bins=np.concatenate([[0.0], ts]), weights=dens)
        cdf = np.cumsum(hist)
        cdf /= cdf[-1]
        return MuCdf(d, n, ts, np.maximum.accumulate(cdf))
    raise ValueError(f"unsupported d={d}; only d in {{2, 3}}")


# ---------------------------------------------------------------------------
# batched samplers used by the Monte Carlo campaigns

def _batch_unit_vectors(m: int, k: int, rng: RngStream) -> np.ndarray:
    z = rng.complex_normal((k, m))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _batch_reduced_eigs(d: int, n: int, k: int, rng: RngStream) -> np.ndarray:
    """Descending spectra of the d-side reduction of k uniform states on C^{dn}."""
    z = _batch_unit_vectors(n * d, k, rng)
    M = z.reshape(k, n, d)
    G = np.einsum("kij,kil->kjl", M, M.conj())
    return _eigvalsh(G)
