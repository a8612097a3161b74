"""Monte Carlo verification campaigns and minimum-entropy estimation.

Each campaign is a pure function of (parameters, seed): all randomness
derives from counter-based streams keyed by the seed and a per-campaign
stream base, so results reproduce bit-for-bit regardless of thread
schedule.  Campaigns that loop over independent units (embeddings,
restarts) honor the LAB_THREADS environment variable.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import bounds
from .channels import (
    ChannelPair,
    Isometry,
    TubeSpec,
    _conjugate_outputs_batch,
    apply_conjugate,
    ball_radius,
    in_tube,
    kraus_operators,
    product_output,
    tube_radius,
    typicality_estimate,
)
from .matcore import (
    DensityMatrix,
    PureState,
    _eigvalsh,
    _entropy_from_values,
    _jacobi_eigh,
    maximally_entangled,
    op_norm,
)
from .randq import (
    RngStream,
    _batch_reduced_eigs,
    _batch_unit_vectors,
    overlap_tail,
    random_isometry,
)

# stream-index blocks, one per campaign family (units live in the low bits)
_BASE_OVERLAP = 1 << 32
_BASE_SPECTRUM = 2 << 32
_BASE_PUSHFORWARD = 3 << 32
_BASE_TUBE = 4 << 32
_BASE_TYPICALITY = 5 << 32
_BASE_INEQ = 6 << 32
_BASE_GRAD = 7 << 32
_BASE_MINENT = 8 << 32
_BASE_PRODUCT = 9 << 32

GRAD_EIG_FLOOR = 1e-12     # log-floor inside the entropy gradient
KS_QUANTILE = 0.999
INEQ_SLACK = 1e-9


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 20
    max_iters: int = 500
    grad_tol: float = 1e-8
    armijo_init: float = 1.0
    armijo_shrink: float = 0.5
    armijo_slope: float = 1e-4
    probes: int = 1000

    def __post_init__(self):
        if self.restarts < 1 or self.grad_tol <= 0.0:
            raise ValueError("restarts must be >= 1 and grad_tol > 0")


@dataclass(frozen=True)
class TrialConfig:
    dims: tuple[int, int, int]  # (s, n, d)
    trials: int = 1
    seed: int = 0
    tolerance_sigmas: float = 4.0
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass
class CampaignResult:
    name: str
    estimate: float
    bound_or_law: float
    margin_sigmas: float
    passed: bool
    samples_used: int
    wall_time: float
    detail: dict = field(default_factory=dict)


def _thread_count() -> int:
    raw = os.environ.get("LAB_THREADS", "")
    if raw:
        value = int(raw)
        if value < 1:
            raise ValueError("LAB_THREADS must be a positive integer")
        return value
    return os.cpu_count() or 1


def _map_units(fn, count: int) -> list:
    """Run fn(i) for i in range(count), in parallel, merged by index."""
    threads = min(_thread_count(), count)
    if threads <= 1:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def _binom_sigma(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials)


# ---------------------------------------------------------------------------
# entropy objective and gradient on the input sphere

def _output_state(W: np.ndarray, v: np.ndarray, n: int, d: int, side: str):
    psi = W @ v
    M = psi.reshape(n, d)
    if side == "conjugate":
        rho = np.einsum("ij,il->jl", M, M.conj())
    elif side == "direct":
        rho = M @ M.conj().T
    else:
        raise ValueError(f"unknown side {side!r}")
    return M, (rho + rho.conj().T) / 2.0


def _objective(W: np.ndarray, v: np.ndarray, n: int, d: int, side: str) -> float:
    _, rho = _output_state(W, v, n, d, side)
    return _entropy_from_values(_eigvalsh(rho))


def _objective_and_grad(W: np.ndarray, v: np.ndarray, n: int, d: int, side: str):
    """Entropy of the selected output and its ambient Euclidean gradient.

    The gradient is -2 W^dagger applied to (log rho + I) lifted onto the
    factor that was kept; eigenvalues are floored at 1e-12 inside the
    log so line searches stay finite near pure outputs, while the
    returned objective is the exact clamped entropy.
    """
    M, rho = _output_state(W, v, n, d, side)
    w, V = _jacobi_eigh(rho, vectors=True)
    value = _entropy_from_values(w)
    logw = np.log(np.maximum(w, GRAD_EIG_FLOOR)) + 1.0
    L = (V * logw[None, :]) @ V.conj().T
    if side == "conjugate":
        lifted = M @ L.T
    else:
        lifted = L @ M
    grad = -2.0 * (W.conj().T @ lifted.reshape(-1))
    return value, grad, float(w[-1])


def _batch_entropies(W: np.ndarray, phis: np.ndarray, n: int, d: int,
                     side: str) -> np.ndarray:
    if side == "conjugate":
        rhos = _conjugate_outputs_batch(W, n, d, phis)
    else:
        psi = phis @ W.T
        M = psi.reshape(-1, n, d)
        rhos = np.einsum("kij,klj->kil", M, M.conj())
    w = np.clip(_eigvalsh(rhos), 0.0, None)
    safe = np.where(w > 0.0, w, 1.0)
    return -np.sum(w * np.log(safe), axis=1)


def _minimize_entropy(W: np.ndarray, n: int, d: int, side: str,
                      opt: OptimizerConfig, rng: RngStream):
    """Multistart projected gradient descent over the input sphere.

    Returns (best value, best input, probe minimum, aborted restarts).
    Starts are the best ``opt.restarts`` of ``opt.probes`` random
    probes; each restart runs Armijo-backtracked descent with
    renormalization retraction.
    """
    s = W.shape[1]
    n_probes = max(opt.probes, opt.restarts)
    probes = _batch_unit_vectors(s, n_probes, rng)
    probe_vals = _batch_entropies(W, probes, n, d, side)
    order = np.argsort(probe_vals, kind="stable")
    probe_min = float(probe_vals[order[0]])

    best_val, best_v = math.inf, None
    aborted = 0
    for idx in order[: opt.restarts]:
        v = probes[idx].copy()
        val, grad, _ = _objective_and_grad(W, v, n, d, side)
        stalled = 0
        for _ in range(opt.max_iters):
            tangent = grad - np.vdot(v, grad) * v
            gnorm = float(np.linalg.norm(tangent))
            if gnorm < opt.grad_tol:
                break
            step = opt.armijo_init
            accepted = False
            while step > 1e-18:
                cand = v - step * tangent
                cand /= np.linalg.norm(cand)
                cand_val = _objective(W, cand, n, d, side)
                if cand_val <= val - opt.armijo_slope * step * gnorm * gnorm:
                    accepted = True
                    break
                step *= opt.armijo_shrink
            if not accepted:
                aborted += 1
                break
            # decreases at float resolution mean the restart has converged
            stalled = stalled + 1 if val - cand_val <= 1e-15 * (1.0 + abs(val)) \
                else 0
            v = cand
            val, grad, _ = _objective_and_grad(W, v, n, d, side)
            if stalled >= 2:
                break
        if val < best_val:
            best_val, best_v = val, v
    return best_val, best_v, probe_min, aborted


def estimate_min_output_entropy(ch: ChannelPair, which: str, cfg: TrialConfig,
                                unit: int = 0) -> tuple[float, PureState]:
    """Upper estimate of the minimal output entropy of one channel.

    Multistart first-order minimization of S(output) over unit inputs;
    the result is an upper bound on the true minimum, within grad_tol of
    a stationary point.  ``which`` selects the n x n direct output or
    the d x d conjugate output (their minima agree for pure inputs).
    """
    if which not in ("direct", "conjugate"):
        raise ValueError("which must be 'direct' or 'conjugate'")
    s, n, d = ch.dims
    W = ch.matrix
    if s == 1:
        phi = PureState(np.array([1.0 + 0.0j]))
        val = _objective(W, phi.amplitudes, n, d, which)
        return val, phi
    rng = RngStream(cfg.seed, _BASE_MINENT + unit)
    best_val, best_v, _, _ = _minimize_entropy(W, n, d, which, cfg.optimizer, rng)
    return best_val, PureState(best_v)


# ---------------------------------------------------------------------------
# product-channel entropy

def _product_rho(W: np.ndarray, chi: np.ndarray, n: int, d: int, s: int):
    X = chi.reshape(s, s)
    Psi = W @ X @ W.conj().T
    T = Psi.reshape(n, d, n, d)
    rho = np.einsum("iajb,icjd->abcd", T, T.conj()).reshape(d * d, d * d)
    return T, (rho + rho.conj().T) / 2.0


def _product_objective(W: np.ndarray, chi: np.ndarray, n: int, d: int, s: int) -> float:
    _, rho = _product_rho(W, chi, n, d, s)
    return _entropy_from_values(_eigvalsh(rho))


def _product_objective_and_grad(W: np.ndarray, chi: np.ndarray,
                                n: int, d: int, s: int):
    T, rho = _product_rho(W, chi, n, d, s)
    w, V = _jacobi_eigh(rho, vectors=True)
    value = _entropy_from_values(w)
    logw = np.log(np.maximum(w, GRAD_EIG_FLOOR)) + 1.0
    L4 = ((V * logw[None, :]) @ V.conj().T).reshape(d, d, d, d)
    lifted = np.einsum("abcd,icjd->iajb", L4, T).reshape(n * d, n * d)
    grad = -2.0 * (W.conj().T @ lifted @ W).reshape(s * s)
    return value, grad


@dataclass(frozen=True)
class ProductEntropyResult:
    value_at_max_entangled: float
    optimized_value: float


PRODUCT_INPUT_CAP = 256


def estimate_product_entropy(W: Isometry, cfg: TrialConfig,
                             unit: int = 0) -> ProductEntropyResult:
    """Entropy of the conjugate product channel at and below max entanglement.

    Evaluates the output entropy at the maximally entangled input and
    then multistart-minimizes over the s^2-sphere (the entangled input
    is always among the starts, so the optimized value can only be
    lower).
    """
    s, n, d = W.dims
    if s * s > PRODUCT_INPUT_CAP:
        raise ValueError(f"s^2 = {s * s} exceeds the optimization cap "
                         f"{PRODUCT_INPUT_CAP}")
    pair = ChannelPair(W)
    psi_hat = maximally_entangled(s)
    val_at = _product_objective(W.matrix, psi_hat.amplitudes, n, d, s)

    opt = cfg.optimizer
    rng = RngStream(cfg.seed, _BASE_PRODUCT + unit)
    n_probes = max(opt.probes, opt.restarts)
    probes = _batch_unit_vectors(s * s, n_probes, rng)
    probes[0] = psi_hat.amplitudes
    vals = np.array([_product_objective(W.matrix, p, n, d, s) for p in probes])
    order = np.argsort(vals, kind="stable")

    best_val = math.inf
    for idx in order[: opt.restarts]:
        v = probes[idx].copy()
        val, grad = _product_objective_and_grad(W.matrix, v, n, d, s)
        stalled = 0
        for _ in range(opt.max_iters):
            tangent = grad - np.vdot(v, grad) * v
            gnorm = float(np.linalg.norm(tangent))
            if gnorm < opt.grad_tol:
                break
            step = opt.armijo_init
            accepted = False
            while step > 1e-18:
                cand = v - step * tangent
                cand /= np.linalg.norm(cand)
                cand_val = _product_objective(W.matrix, cand, n, d, s)
                if cand_val <= val - opt.armijo_slope * step * gnorm * gnorm:
                    accepted = True
                    break
                step *= opt.armijo_shrink
            if not accepted:
                break
            stalled = stalled + 1 if val - cand_val <= 1e-15 * (1.0 + abs(val)) \
                else 0
            v = cand
            val, grad = _product_objective_and_grad(W.matrix, v, n, d, s)
            if stalled >= 2:
                break
        best_val = min(best_val, val)
    return ProductEntropyResult(val_at, min(best_val, val_at))


# ---------------------------------------------------------------------------
# law-verification campaigns

def overlap_law_campaign(s: int, t_list, trials: int,
                         seed: int) -> list[CampaignResult]:
    """Empirical overlap tail against the exact law (1 - t^2)^(s-1)."""
    t0 = time.perf_counter()
    rng = RngStream(seed, _BASE_OVERLAP)
    thetas = _batch_unit_vectors(s, trials, rng)
    overlap = np.abs(thetas[:, 0])  # reference state e_1
    results = []
    for t in t_list:
        law = overlap_tail(s, t)
        emp = float(np.mean(overlap > t))
        sigma = _binom_sigma(law, trials)
        if sigma == 0.0:
            margin = 0.0 if emp == law else math.inf
        else:
            margin = abs(emp - law) / sigma
        results.append(CampaignResult(
            name=f"overlap_law[s={s},t={t}]",
            estimate=emp,
            bound_or_law=law,
            margin_sigmas=margin,
            passed=margin <= 4.0,
            samples_used=trials,
            wall_time=time.perf_counter() - t0,
        ))
    return results


def _ks_one_sample(samples: np.ndarray, cdf) -> tuple[float, float]:
    """KS statistic against a callable CDF, with its 0.999 critical value."""
    x = np.sort(samples)
    k = len(x)
    F = cdf(x)
    upper = np.arange(1, k + 1) / k
    lower = np.arange(0, k) / k
    stat = float(max(np.max(upper - F), np.max(F - lower)))
    crit = float(stats.kstwo.ppf(KS_QUANTILE, k))
    return stat, crit


def spectrum_law_campaign(d: int, n: int, trials: int, seed: int,
                          law_n: int | None = None) -> CampaignResult:
    """Largest reduced eigenvalue of uniform states against the induced law.

    ``law_n`` substitutes a deliberately wrong reference law (negative
    control); it defaults to n.
    """
    if d not in (2, 3):
        raise ValueError(f"unsupported d={d}; only d in {{2, 3}}")
    t0 = time.perf_counter()
    rng = RngStream(seed, _BASE_SPECTRUM)
    lam = _batch_reduced_eigs(d, n, trials, rng)[:, 0]
    from .randq import mu_cdf_numeric

    grid = 20001 if d == 2 else 1000
    cdf = mu_cdf_numeric(d, law_n if law_n is not None else n, grid)
    stat, crit = _ks_one_sample(lam, cdf)
    return CampaignResult(
        name=f"spectrum_law[d={d},n={n}]",
        estimate=stat,
        bound_or_law=crit,
        margin_sigmas=stat / crit,
        passed=stat < crit,
        samples_used=trials,
        wall_time=time.perf_counter() - t0,
        detail={"law_n": law_n if law_n is not None else n},
    )


def _haar_batch(m: int, k: int, rng: RngStream) -> np.ndarray:
    """k Haar unitaries of size m, as a stacked array."""
    z = rng.complex_normal((k, m, m))
    q, r = np.linalg.qr(z)
    diag = np.einsum("kii->ki", r)
    return q * (diag / np.abs(diag))[:, None, :]


def pushforward_campaign(s: int, n: int, d: int, trials: int,
                         seed: int) -> CampaignResult:
    """Two-sample KS between the (W, phi)-path and the uniform-state path."""
    t0 = time.perf_counter()
    rng_a = RngStream(seed, _BASE_PUSHFORWARD)
    rng_b = RngStream(seed, _BASE_PUSHFORWARD + 1)
    # path A: random embedding applied to a random input
    us = _haar_batch(n * d, trials, rng_a)
    ws = us[:, :, :s]
    phis = _batch_unit_vectors(s, trials, rng_a)
    psi = np.einsum("kab,kb->ka", ws, phis)
    M = psi.reshape(trials, n, d)
    rhos = np.einsum("kij,kil->kjl", M, M.conj())
    lam_a = _eigvalsh(rhos)[:, 0]
    # path B: reduction of a uniform state on C^{dn}
    lam_b = _batch_reduced_eigs(d, n, trials, rng_b)[:, 0]
    stat = float(stats.ks_2samp(lam_a, lam_b, method="asymp").statistic)
    n_eff = trials / 2.0
    crit = float(stats.kstwobign.ppf(KS_QUANTILE) / math.sqrt(n_eff))
    return CampaignResult(
        name=f"pushforward[s={s},n={n},d={d}]",
        estimate=stat,
        bound_or_law=crit,
        margin_sigmas=stat / crit,
        passed=stat < crit,
        samples_used=2 * trials,
        wall_time=time.perf_counter() - t0,
    )


def tube_fraction_campaign(s: int, n: int, d: int, gamma: float, trials: int,
                           seed: int) -> CampaignResult:
    """Tube-hit fraction of a typical embedding vs the analytic floor.

    Fixes one typical embedding and one output center per campaign (the
    guarantee is uniform over both), then estimates the fraction of
    random inputs mapped into the tube at the center.
    """
    feas = bounds.tube_feasibility(d, s)
    if not feas.feasible:
        raise ValueError(f"(d={d}, s={s}) fails the tube feasibility check")
    t0 = time.perf_counter()
    typical_pair = None
    for attempt in range(100):
        rng = RngStream(seed, _BASE_TUBE + attempt)
        W = random_isometry(s, n, d, rng)
        pair = ChannelPair(W)
        frac, is_typ = typicality_estimate(pair, 2000, rng)
        if is_typ:
            typical_pair = pair
            break
    if typical_pair is None:
        raise ValueError("no typical embedding found in 100 attempts")

    from .randq import random_pure_state

    psi = random_pure_state(s, rng)
    center = apply_conjugate(typical_pair, psi)
    spec = TubeSpec.for_dims(center, gamma, s, n, d)

    thetas = _batch_unit_vectors(s, trials, rng)
    outs = _conjugate_outputs_batch(typical_pair.matrix, n, d, thetas)
    # distance at the r = 1 endpoint bounds the tube distance from above
    quick = np.max(np.abs(_eigvalsh(outs - center.entries[None])), axis=1)
    hits = quick <= spec.radius
    for i in np.flatnonzero(~hits):
        theta_dm = DensityMatrix(outs[i])
        hits[i] = in_tube(theta_dm, spec)
    emp = float(np.mean(hits))
    floor = bounds.tube_fraction_lower(s, gamma)
    sigma = _binom_sigma(floor, trials)
    margin = (emp - floor) / sigma if sigma > 0 else math.inf

    detail = _tube_event_tails(typical_pair, psi, thetas, outs, s, n, d)
    detail["feasibility_value"] = feas.value
    detail["typicality_fraction"] = frac
    return CampaignResult(
        name=f"tube_fraction[s={s},n={n},d={d},gamma={gamma}]",
        estimate=emp,
        bound_or_law=floor,
        margin_sigmas=margin,
        passed=emp >= floor - 4.0 * sigma,
        samples_used=trials,
        wall_time=time.perf_counter() - t0,
        detail=detail,
    )


def _tube_event_tails(pair: ChannelPair, psi: PureState, thetas: np.ndarray,
                      outs: np.ndarray, s: int, n: int, d: int) -> dict:
    """Empirical residual-event complements against their analytic tails."""
    x = thetas @ psi.amplitudes.conj()
    keep = np.abs(x) < 1.0 - 1e-9
    resid = thetas[keep] - x[keep, None] * psi.amplitudes[None, :]
    resid /= np.linalg.norm(resid, axis=1, keepdims=True)
    W = pair.matrix
    rho_phi = _conjugate_outputs_batch(W, n, d, resid)
    a2_lhs = np.max(np.abs(_eigvalsh(rho_phi - np.eye(d) / d)), axis=1)
    a2_thr = math.sqrt(48.0 * d * d * math.log(d) / s) \
        + 2.0 * math.sqrt(math.log(n) / n)
    X = (W @ psi.amplitudes).reshape(n, d)
    Y = (resid @ W.T).reshape(-1, n, d)
    cross = np.einsum("ik,bil->bkl", X, Y.conj())
    a3_lhs = np.linalg.norm(cross.reshape(len(resid), -1), axis=1)
    a3_thr = math.sqrt(6.0 * d * d * math.log(d) / s)
    base = max(0.0, 1.0 - 6.0 * math.log(d) / s) ** (s - 1)
    return {
        "a2_complement_emp": float(np.mean(a2_lhs > a2_thr)),
        "a2_complement_tail": base + 0.5,
        "a3_complement_emp": float(np.mean(a3_lhs > a3_thr)),
        "a3_complement_tail": d * d * base,
    }


def typicality_campaign(s: int, n: int, d: int, trials_W: int, trials_phi: int,
                        seed: int) -> CampaignResult:
    """Fraction of atypical embeddings against the analytic tail bound."""
    if n <= d:
        raise ValueError("requires n > d")
    t0 = time.perf_counter()

    def unit(i: int) -> bool:
        rng = RngStream(seed, _BASE_TYPICALITY + i)
        W = random_isometry(s, n, d, rng)
        _, is_typ = typicality_estimate(ChannelPair(W), trials_phi, rng)
        return not is_typ

    atypical = _map_units(unit, trials_W)
    emp = float(np.mean(atypical))
    bound = bounds.prob_Tc_upper(s, n, d)
    sigma = _binom_sigma(bound, trials_W)
    margin = (emp - bound) / sigma if sigma > 0 else math.inf
    return CampaignResult(
        name=f"typicality[s={s},n={n},d={d}]",
        estimate=emp,
        bound_or_law=bound,
        margin_sigmas=margin,
        passed=emp <= bound + 4.0 * sigma,
        samples_used=trials_W,
        wall_time=time.perf_counter() - t0,
        detail={"inputs_per_embedding": trials_phi},
    )


# ---------------------------------------------------------------------------
# pointwise inequality suites

def inequality_suite(trials: int, seed: int) -> list[CampaignResult]:
    """Zero-violation checks of the pointwise inequalities.

    Covers the scaling inequality f(x) <= f(rx + 1 - r)/f(1 - gamma),
    the spectrum-perturbation (Fannes) display, the cross-term norm
    bound, the overlap-residual norm bound, and the product-channel
    largest-eigenvalue claim.
    """
    out = [
        _lemma12_suite(trials, seed),
        _fannes_suite(trials, seed),
        _cross_term_suite(trials, seed),
        _residual_suite(trials, seed),
        _product_eig_suite(100, seed),
    ]
    return out


def _violations_result(name: str, violations: int, worst: float, trials: int,
                       t0: float, detail: dict | None = None) -> CampaignResult:
    return CampaignResult(
        name=name,
        estimate=float(violations),
        bound_or_law=0.0,
        margin_sigmas=worst / INEQ_SLACK,
        passed=violations == 0,
        samples_used=trials,
        wall_time=time.perf_counter() - t0,
        detail=detail or {},
    )


def _lemma12_suite(trials: int, seed: int) -> CampaignResult:
    t0 = time.perf_counter()
    rng = RngStream(seed, _BASE_INEQ)
    x = rng.uniform(trials) * 50.0
    gamma = rng.uniform(trials)
    gamma = np.clip(gamma, 1e-12, 1.0 - 1e-12)
    r = gamma + rng.uniform(trials) * (1.0 - gamma)
    fx = np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)) - x + 1.0, 1.0)
    y = r * x + 1.0 - r
    fy = y * np.log(y) - y + 1.0
    fg = gamma + (1.0 - gamma) * np.log1p(-gamma)
    gap = fx - fy / fg
    violations = int(np.sum(gap > INEQ_SLACK))
    return _violations_result("ineq_scaling_f", violations,
                              float(np.max(gap)), trials, t0)


def _fannes_suite(trials: int, seed: int) -> CampaignResult:
    t0 = time.perf_counter()
    rng = RngStream(seed, _BASE_INEQ + 1)
    dims = (2, 3, 4, 8)
    violations = 0
    worst = -math.inf
    per = trials // len(dims)
    for d in dims:
        # uniform spectra, zero-sum directions, perturbation kept inside
        # the simplex with total variation eps_m < 1
        e = -np.log(1.0 - rng.uniform((per, d)))
        z = e / e.sum(axis=1, keepdims=True)
        v = rng.standard_normal((per, d))
        v -= v.mean(axis=1, keepdims=True)
        ratios = np.where(v < 0, z / np.where(v < 0, -v, 1.0), np.inf)
        cmax = np.min(ratios, axis=1)
        scale_cap = (1.0 - 1e-9) / np.sum(np.abs(v), axis=1)
        c = rng.uniform(per) * 0.999 * np.minimum(cmax, scale_cap)
        theta = z + c[:, None] * v
        eps_m = np.sum(np.abs(c[:, None] * v), axis=1)
        ok = (eps_m > 0) & (theta.min(axis=1) >= 0)
        z, theta, eps_m = z[ok], theta[ok], eps_m[ok]

        def fsum(w):
            wd = np.clip(w * d, 0.0, None)
            safe = np.where(wd > 0, wd, 1.0)
            return np.sum(wd * np.log(safe) - wd + 1.0, axis=1)

        lhs = np.abs(fsum(theta) - fsum(z))
        eta = d * eps_m * (math.log(d) + np.log(1.0 / eps_m))
        gap = lhs - eta
        violations += int(np.sum(gap > INEQ_SLACK))
        worst = max(worst, float(np.max(gap)))
    return _violations_result("ineq_fannes", violations, worst, trials, t0)


def _cross_term_suite(trials: int, seed: int) -> CampaignResult:
    t0 = time.perf_counter()
    s, n, d = 3, 4, 2
    rng = RngStream(seed, _BASE_INEQ + 2)
    us = _haar_batch(n * d, trials, rng)
    ws = us[:, :, :s]
    u = _batch_unit_vectors(s, trials, rng)
    v = _batch_unit_vectors(s, trials, rng)
    X = np.einsum("kab,kb->ka", ws, u).reshape(trials, n, d)
    Y = np.einsum("kab,kb->ka", ws, v).reshape(trials, n, d)
    cross = np.einsum("kim,kil->kml", X, Y.conj())
    norms = np.linalg.norm(cross.reshape(trials, -1), axis=1)
    gap = norms - d
    violations = int(np.sum(gap > INEQ_SLACK))
    return _violations_result("ineq_cross_term_norm", violations,
                              float(np.max(gap)), trials, t0,
                              {"dims": [s, n, d]})


def _residual_suite(trials: int, seed: int) -> CampaignResult:
    t0 = time.perf_counter()
    s = 8
    rng = RngStream(seed, _BASE_INEQ + 3)
    psi = np.zeros(s, dtype=complex)
    psi[0] = 1.0
    thetas = _batch_unit_vectors(s, trials, rng)
    x = thetas[:, 0]
    keep = np.abs(x) < 1.0 - 1e-9
    thetas, x = thetas[keep], x[keep]
    resid = thetas - x[:, None] * psi[None, :]
    resid /= np.linalg.norm(resid, axis=1, keepdims=True)
    diff = np.linalg.norm(thetas - resid, axis=1)
    gap = diff - math.sqrt(2.0) * np.abs(x)
    violations = int(np.sum(gap > INEQ_SLACK))
    # one-sided tail comparison at a few thresholds, for the report
    tails = {}
    for t in (0.25, 0.5, 1.0):
        emp = float(np.mean(diff > t))
        law = (1.0 - t * t / 2.0) ** (s - 1)
        tails[f"tail_t={t}"] = {"empirical": emp, "bound": law}
    return _violations_result("ineq_overlap_residual", violations,
                              float(np.max(gap)), int(keep.sum()), t0, tails)


def _product_eig_suite(channels_count: int, seed: int) -> CampaignResult:
    t0 = time.perf_counter()
    s, n, d = 4, 4, 2
    violations = 0
    worst = -math.inf
    for i in range(channels_count):
        rng = RngStream(seed, _BASE_INEQ + 4 + i)
        W = random_isometry(s, n, d, rng)
        rho = product_output(ChannelPair(W), maximally_entangled(s))
        lam = _eigvalsh(rho.entries)[0]
        gap = s / (d * n) - lam
        violations += int(gap > INEQ_SLACK)
        worst = max(worst, float(gap))
    return _violations_result("ineq_product_eigenvalue", violations, worst,
                              channels_count, t0, {"dims": [s, n, d]})


# ---------------------------------------------------------------------------
# optimizer validation

def gradient_check(cfg: TrialConfig, trials: int, seed: int,
                   corrupt: bool = False) -> CampaignResult:
    """Analytic entropy gradient against central finite differences.

    Points whose smallest output eigenvalue is below 1e-6 are skipped
    (the log derivative is genuinely singular there).  ``corrupt`` flips
    the analytic gradient sign as a negative control.
    """
    s, n, d = cfg.dims
    t0 = time.perf_counter()
    step = 1e-5
    rel_errors = []
    for i in range(trials):
        rng = RngStream(seed, _BASE_GRAD + i)
        W = random_isometry(s, n, d, rng).matrix
        phi = _batch_unit_vectors(s, 1, rng)[0]
        _, grad, min_eig = _objective_and_grad(W, phi, n, d, "conjugate")
        if min_eig < 1e-6:
            continue
        if corrupt:
            grad = -grad
        fd = np.zeros(2 * s)
        for k in range(2 * s):
            delta = np.zeros(s, dtype=complex)
            if k < s:
                delta[k] = step
            else:
                delta[k - s] = 1j * step
            up = _objective(W, phi + delta, n, d, "conjugate")
            dn = _objective(W, phi - delta, n, d, "conjugate")
            fd[k] = (up - dn) / (2.0 * step)
        g_real = np.concatenate([grad.real, grad.imag])
        rel_errors.append(float(np.linalg.norm(fd - g_real)
                                / np.linalg.norm(g_real)))
    rel = np.array(rel_errors)
    frac_ok = float(np.mean(rel < 1e-5)) if len(rel) else 0.0
    max_err = float(np.max(rel)) if len(rel) else math.inf
    passed = frac_ok >= 0.99 and max_err < 1e-4
    return CampaignResult(
        name=f"gradient_check[s={s},n={n},d={d}]",
        estimate=max_err,
        bound_or_law=1e-4,
        margin_sigmas=max_err / 1e-4,
        passed=passed,
        samples_used=len(rel),
        wall_time=time.perf_counter() - t0,
        detail={"fraction_below_1e-5": frac_ok, "skipped": trials - len(rel)},
    )
