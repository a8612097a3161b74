"""Embeddings, conjugate channel pairs, and output-space geometry.

An isometric embedding W of C^s into C^d (x) C^n induces the pair of
conjugate channels obtained by tracing out one tensor factor of
W rho W^dagger.  The direct channel outputs n x n states, the conjugate
channel d x d states; for pure inputs the two outputs share their
nonzero spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matcore import (
    DensityMatrix,
    PureState,
    op_norm,
    partial_trace,
)

ISOMETRY_TOL = 1e-10
TUBE_SEARCH_TOL = 1e-10
TUBE_SEARCH_MAX_ITERS = 200
BALL_CONSTANT = 2.0  # fixed radius coefficient of the typicality ball


@dataclass(frozen=True)
class Isometry:
    """Matrix W with W^dagger W = I embedding C^s into C^d (x) C^n."""

    matrix: np.ndarray
    dims: tuple[int, int, int]  # (s, n, d)

    def __post_init__(self):
        s, n, d = self.dims
        W = np.asarray(self.matrix, dtype=complex)
        if s > n * d:
            raise ValueError(f"s={s} exceeds n*d={n * d}")
        if W.shape != (n * d, s):
            raise ValueError(f"expected shape {(n * d, s)}, got {W.shape}")
        gram = W.conj().T @ W
        if np.max(np.abs(gram - np.eye(s))) > ISOMETRY_TOL:
            raise ValueError("columns are not orthonormal within tolerance")
        W = W.copy()
        W.flags.writeable = False
        object.__setattr__(self, "matrix", W)

    @property
    def s(self) -> int:
        return self.dims[0]

    @property
    def n(self) -> int:
        return self.dims[1]

    @property
    def d(self) -> int:
        return self.dims[2]


@dataclass(frozen=True)
class ChannelPair:
    """The two conjugate channels of one embedding.

    With ``conjugated=True`` the pair is built from the entrywise
    complex conjugate of the embedding matrix instead.
    """

    embedding: Isometry
    conjugated: bool = False

    @property
    def matrix(self) -> np.ndarray:
        W = self.embedding.matrix
        return W.conj() if self.conjugated else W

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.embedding.dims


def apply_direct(ch: ChannelPair, phi: PureState) -> DensityMatrix:
    """n x n output: trace out the C^d factor of W phi."""
    s, n, d = ch.dims
    if phi.dim != s:
        raise ValueError(f"input length {phi.dim} != s = {s}")
    psi = PureState(ch.matrix @ phi.amplitudes)
    return partial_trace(psi, d, n, "traceout_first_d")


def apply_conjugate(ch: ChannelPair, phi: PureState) -> DensityMatrix:
    """d x d output: trace out the C^n factor of W phi."""
    s, n, d = ch.dims
    if phi.dim != s:
        raise ValueError(f"input length {phi.dim} != s = {s}")
    psi = PureState(ch.matrix @ phi.amplitudes)
    return partial_trace(psi, d, n, "traceout_second_n")


def kraus_operators(ch: ChannelPair) -> list[np.ndarray]:
    """The d Kraus operators A_j (each n x s) of the direct channel.

    Under the shared index layout W phi decomposes as
    sum_j |j>_d (x) (A_j phi), so A_j collects every d-th row of W.
    The conjugate channel is then the double sum
    ``sum_{k,l} Tr(A_k rho A_l^dagger) |k><l|``.
    """
    s, n, d = ch.dims
    W = ch.matrix
    return [W[j::d, :] for j in range(d)]


def cross_term(ch: ChannelPair, u: PureState, v: PureState) -> np.ndarray:
    """Conjugate channel applied to the rank-one operator |u><v|.

    Entry (k, l) is <v| A_l^dagger A_k |u>; for u = v this reproduces
    ``apply_conjugate``.  The Frobenius norm is bounded by d ||u|| ||v||.
    """
    s, n, d = ch.dims
    if u.dim != s or v.dim != s:
        raise ValueError("input states must have length s")
    X = (ch.matrix @ u.amplitudes).reshape(n, d)
    Y = (ch.matrix @ v.amplitudes).reshape(n, d)
    return np.einsum("ik,il->kl", X, Y.conj())


def tube_radius(s: int, n: int, d: int) -> float:
    """2 sqrt(log n / n) + 13 d sqrt(log d / s)."""
    return 2.0 * math.sqrt(math.log(n) / n) + 13.0 * d * math.sqrt(math.log(d) / s)


def ball_radius(n: int) -> float:
    """Radius of the typicality ball around the maximally mixed state."""
    return BALL_CONSTANT * math.sqrt(math.log(n) / n)


@dataclass(frozen=True)
class TubeSpec:
    """Tube around the segment from ``center`` toward I/d.

    The segment is {r center + (1-r) I/d : gamma <= r <= 1} and the tube
    collects states within ``radius`` of it in operator norm.
    """

    center: DensityMatrix
    gamma: float
    radius: float

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")
        if self.radius < 0.0:
            raise ValueError("radius must be >= 0")

    @classmethod
    def for_dims(cls, center: DensityMatrix, gamma: float,
                 s: int, n: int, d: int) -> "TubeSpec":
        if center.dim != d:
            raise ValueError("center dimension differs from d")
        return cls(center, gamma, tube_radius(s, n, d))


def _segment_point(center: np.ndarray, r: float) -> np.ndarray:
    d = center.shape[0]
    return r * center + (1.0 - r) * np.eye(d) / d


def tube_distance(theta: DensityMatrix, spec: TubeSpec) -> float:
    """min over r in [gamma, 1] of ||theta - (r rho + (1-r) I/d)||_inf.

    The objective is convex in r (operator norm of an affine family), so
    a ternary search converges; tolerance 1e-10 in r.
    """
    if theta.dim != spec.center.dim:
        raise ValueError("dimension mismatch with tube center")
    T = theta.entries
    C = spec.center.entries

    def dist(r: float) -> float:
        return op_norm(T - _segment_point(C, r))

    lo, hi = spec.gamma, 1.0
    f_lo, f_hi = dist(lo), dist(hi)
    for _ in range(TUBE_SEARCH_MAX_ITERS):
        if hi - lo <= TUBE_SEARCH_TOL:
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        f1, f2 = dist(m1), dist(m2)
        if f1 <= f2:
            hi, f_hi = m2, f2
        else:
            lo, f_lo = m1, f1
    return min(f_lo, f_hi, dist(0.5 * (lo + hi)))


def in_tube(theta: DensityMatrix, spec: TubeSpec) -> bool:
    """Whether theta lies within the tube's radius of the segment."""
    # any single segment point already within radius settles it
    quick = op_norm(theta.entries - spec.center.entries)
    if quick <= spec.radius:
        return True
    return tube_distance(theta, spec) <= spec.radius


def in_ball(rho: DensityMatrix, n: int) -> bool:
    """Whether rho lies within 2 sqrt(log n / n) of I/d in operator norm."""
    d = rho.dim
    return op_norm(rho.entries - np.eye(d) / d) <= ball_radius(n)


def typicality_estimate(ch: ChannelPair, trials: int, rng) -> tuple[float, bool]:
    """Monte Carlo fraction of inputs mapped into the typicality ball.

    An embedding is typical when at least half of uniformly random
    inputs land in the ball, estimated here over ``trials`` draws.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    s, n, d = ch.dims
    from .randq import _batch_unit_vectors  # local import to avoid a cycle

    phis = _batch_unit_vectors(s, trials, rng)
    devs = _conjugate_outputs_batch(ch.matrix, n, d, phis) - np.eye(d) / d
    from .matcore import _eigvalsh

    norms = np.max(np.abs(_eigvalsh(devs)), axis=1)
    fraction = float(np.mean(norms <= ball_radius(n)))
    return fraction, fraction >= 0.5


def product_output(ch: ChannelPair, psi: PureState) -> DensityMatrix:
    """Output of (Phi^C (x) conj-Phi^C) on a pure input over C^{s^2}.

    The input lives on C^s (x) C^s in row-major (kron) layout; the
    d^2 x d^2 output is assembled from the Kraus double sum.  Swapping
    to the direct pair is the same computation with n and d exchanged,
    i.e. this operation on the conjugated pair.
    """
    s, n, d = ch.dims
    if psi.dim != s * s:
        raise ValueError(f"input length {psi.dim} != s^2 = {s * s}")
    W = ch.matrix
    X = psi.amplitudes.reshape(s, s)
    # (W (x) conj(W)) vec(X) = vec(W X W^dagger), then trace both n factors
    Psi = W @ X @ W.conj().T
    T = Psi.reshape(n, d, n, d)
    rho = np.einsum("iajb,icjd->abcd", T, T.conj()).reshape(d * d, d * d)
    rho = (rho + rho.conj().T) / 2.0
    return DensityMatrix(rho)


# ---------------------------------------------------------------------------
# batched kernels shared with the campaign code

def _conjugate_outputs_batch(W: np.ndarray, n: int, d: int,
                             phis: np.ndarray) -> np.ndarray:
    """Conjugate-channel outputs (k, d, d) for a batch of inputs (k, s)."""
    psi = phis @ W.T
    M = psi.reshape(-1, n, d)
    return np.einsum("kij,kil->kjl", M, M.conj())
