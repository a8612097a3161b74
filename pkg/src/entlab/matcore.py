"""Complex linear algebra and quantum-state primitives.

Conventions used throughout the package:

* Entropies are in nats (natural logarithm).
* A vector on the composite space C^d (x) C^n is stored so that the
  component with n-factor index i and d-factor index j sits at flat
  position ``i*d + j`` (0-based).  Equivalently, ``psi.reshape(n, d)``
  gives the coefficient matrix M with rows indexed by the n factor.
* Eigendecompositions of Hermitian matrices are computed with cyclic
  Jacobi sweeps (deterministic, accurate at the small dimensions used
  here); eigenvalues are returned in descending order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NORM_TOL = 1e-12
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_CLAMP = 1e-9          # eigenvalues in [-EIG_CLAMP, 0) clamp to 0
JACOBI_OFF_TOL = 1e-13    # off-diagonal Frobenius mass at convergence
JACOBI_MAX_SWEEPS = 100


def _as_complex_vector(values) -> np.ndarray:
    v = np.asarray(values, dtype=complex).reshape(-1)
    v = v.copy()
    v.flags.writeable = False
    return v


@dataclass(frozen=True)
class PureState:
    """Unit vector in C^m."""

    amplitudes: np.ndarray

    def __post_init__(self):
        v = _as_complex_vector(self.amplitudes)
        nrm = float(np.linalg.norm(v))
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {nrm!r} differs from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "amplitudes", v)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace m x m matrix (PSD up to numerical slack)."""

    entries: np.ndarray
    dim: int = 0

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        dim = m.shape[0]
        if self.dim and self.dim != dim:
            raise ValueError(f"declared dim {self.dim} does not match shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERM_TOL:
            raise ValueError("matrix is not Hermitian within tolerance")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr!r} differs from 1 beyond {TRACE_TOL}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "dim", dim)


@dataclass(frozen=True)
class Spectrum:
    """Probability vector sorted in descending order.

    Entries in ``[-1e-9, 0)`` are clamped to zero on construction; more
    negative input is rejected as a genuinely non-PSD spectrum.
    """

    values: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.values, dtype=float).reshape(-1)
        if w.size == 0:
            raise ValueError("empty spectrum")
        if np.min(w) < -EIG_CLAMP:
            raise ValueError(f"eigenvalue {np.min(w)!r} below -{EIG_CLAMP}")
        w = np.clip(w, 0.0, None)
        s = float(w.sum())
        if abs(s - 1.0) > TRACE_TOL:
            raise ValueError(f"spectrum sums to {s!r}, not 1 within {TRACE_TOL}")
        w = np.sort(w)[::-1].copy()
        w.flags.writeable = False
        object.__setattr__(self, "values", w)

    @property
    def dim(self) -> int:
        return self.values.shape[0]


# ---------------------------------------------------------------------------
# Jacobi eigensolver (batched over the leading axis)

_TRIU_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _triu(m: int):
    pair = _TRIU_CACHE.get(m)
    if pair is None:
        pair = np.triu_indices(m, 1)
        _TRIU_CACHE[m] = pair
    return pair


def _jacobi_eigh(mats: np.ndarray, vectors: bool = True):
    """Diagonalize a batch of complex Hermitian matrices.

    Parameters
    ----------
    mats : (k, m, m) or (m, m) complex array
    vectors : also accumulate eigenvectors

    Returns eigenvalues in descending order and, when requested, the
    unitary of column eigenvectors.  Convergence is declared when the
    off-diagonal Frobenius mass of every matrix falls below 1e-13;
    failure to converge within 100 cyclic sweeps raises ``ValueError``.
    """
    A = np.array(mats, dtype=complex)
    single = A.ndim == 2
    if single:
        A = A[None]
    k, m, m2 = A.shape
    if m != m2:
        raise ValueError("matrices must be square")
    V = None
    if vectors:
        V = np.zeros((k, m, m), dtype=complex)
        V[:, range(m), range(m)] = 1.0
    if m == 2:
        # a single rotation annihilates the only off-diagonal pair exactly
        _jacobi_rotate(A, V, 0, 1)
    elif m > 2:
        iu, ju = _triu(m)

        def _off_mass() -> float:
            return 2.0 * float(np.max(np.sum(np.abs(A[:, iu, ju]) ** 2, axis=1)))

        converged = False
        for _ in range(JACOBI_MAX_SWEEPS):
            if _off_mass() < JACOBI_OFF_TOL * JACOBI_OFF_TOL:
                converged = True
                break
            for p in range(m - 1):
                for q in range(p + 1, m):
                    _jacobi_rotate(A, V, p, q)
        if not converged and _off_mass() >= JACOBI_OFF_TOL * JACOBI_OFF_TOL:
            raise ValueError("Jacobi iteration did not converge; malformed input?")
    w = np.einsum("kii->ki", A).real.copy()
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if vectors:
        V = np.take_along_axis(V, order[:, None, :], axis=2)
    if single:
        return (w[0], V[0]) if vectors else (w[0], None)
    return w, V


def _jacobi_rotate(A: np.ndarray, V, p: int, q: int) -> None:
    """One batched Jacobi rotation zeroing the (p, q) entries."""
    apq = A[:, p, q]
    aa = np.abs(apq)
    active = aa > 0.0
    if not np.any(active):
        return
    safe = np.where(active, aa, 1.0)
    ph = np.where(active, apq / safe, 1.0)
    tau = (A[:, q, q].real - A[:, p, p].real) / (2.0 * safe)
    big = np.abs(tau) > 1e150
    tau_safe = np.where(big, 1.0, tau)
    t = np.sign(tau_safe) / (np.abs(tau_safe) + np.sqrt(1.0 + tau_safe * tau_safe))
    t = np.where(tau_safe == 0.0, 1.0, t)
    t = np.where(big, 0.5 / tau, t)  # asymptotic root; annihilation error O(tau^-2)
    t = np.where(active, t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    sph = s * ph
    colp = A[:, :, p].copy()
    colq = A[:, :, q].copy()
    A[:, :, p] = c[:, None] * colp - sph.conj()[:, None] * colq
    A[:, :, q] = sph[:, None] * colp + c[:, None] * colq
    rowp = A[:, p, :].copy()
    rowq = A[:, q, :].copy()
    A[:, p, :] = c[:, None] * rowp - sph[:, None] * rowq
    A[:, q, :] = sph.conj()[:, None] * rowp + c[:, None] * rowq
    # force exact zeros / real diagonal on the pivot
    A[:, p, q] = np.where(active, 0.0, A[:, p, q])
    A[:, q, p] = np.where(active, 0.0, A[:, q, p])
    A[:, p, p] = A[:, p, p].real
    A[:, q, q] = A[:, q, q].real
    if V is not None:
        vp = V[:, :, p].copy()
        vq = V[:, :, q].copy()
        V[:, :, p] = c[:, None] * vp - sph.conj()[:, None] * vq
        V[:, :, q] = sph[:, None] * vp + c[:, None] * vq


def _eigvalsh(mats: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of Hermitian matrices (batched)."""
    w, _ = _jacobi_eigh(mats, vectors=False)
    return w


def hermitian_eigs(M: DensityMatrix) -> tuple[Spectrum, np.ndarray]:
    """Spectrum and eigenvector unitary of a density matrix.

    The reconstruction ``V diag(w) V^dagger`` matches the input to better
    than 1e-9 in Frobenius norm; eigenvalues come out descending.
    """
    w, V = _jacobi_eigh(M.entries, vectors=True)
    return Spectrum(w), V


def von_neumann_entropy(w: Spectrum) -> float:
    """-sum w_i log w_i in nats, with 0 log 0 := 0."""
    return _entropy_from_values(w.values)


def _entropy_from_values(vals: np.ndarray) -> float:
    v = np.asarray(vals, dtype=float)
    v = np.clip(v, 0.0, None)
    nz = v[v > 0.0]
    return float(-np.sum(nz * np.log(nz)))


def partial_trace(psi: PureState, d: int, n: int, side: str) -> DensityMatrix:
    """Reduced density matrix of a pure state on C^d (x) C^n.

    ``side`` selects which tensor factor is traced out:

    * ``"traceout_second_n"`` -- trace over C^n, returning the d x d
      reduction ``rho[j, l] = sum_i M[i, j] conj(M[i, l])`` where M is the
      n x d coefficient matrix of psi.
    * ``"traceout_first_d"`` -- trace over C^d, returning the n x n
      matrix ``M M^dagger``.
    """
    if psi.dim != d * n:
        raise ValueError(f"state length {psi.dim} != d*n = {d * n}")
    M = psi.amplitudes.reshape(n, d)
    if side == "traceout_second_n":
        rho = np.einsum("ij,il->jl", M, M.conj())
    elif side == "traceout_first_d":
        rho = M @ M.conj().T
    else:
        raise ValueError(f"unknown side {side!r}")
    rho = (rho + rho.conj().T) / 2.0
    return DensityMatrix(rho)


def op_norm(M: np.ndarray) -> float:
    """Operator norm of a Hermitian matrix: largest |eigenvalue|."""
    M = np.asarray(M, dtype=complex)
    if M.shape == (1, 1):
        return float(abs(M[0, 0]))
    w = _eigvalsh(M)
    return float(np.max(np.abs(w)))


def fro_norm(M: np.ndarray) -> float:
    """Frobenius norm: root sum of squared entry magnitudes."""
    return float(np.linalg.norm(np.asarray(M).reshape(-1)))


def maximally_entangled(m: int) -> PureState:
    """(1/sqrt(m)) sum_k |k> (x) |k> on C^m (x) C^m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    v = np.eye(m, dtype=complex).reshape(-1) / math.sqrt(m)
    return PureState(v)
