"""Scalar bound functions for subspace entanglement and additivity violation.

Contains the convex pair f, F, the constrained-minimum function m_d and
its inverse, the two-parameter optimization h_d and the one-parameter
constant h0, the linear and HLW entanglement lower bounds, the
product-channel entropy upper bound, the additivity-violation chain, the
Fannes perturbation term, induced-measure tail bounds, and the
divergence diagnostic that composes them.

Everything is double precision; 1-D minimizations run a deterministic
coarse grid followed by golden-section refinement, and the m_d solves
use geometric bisection in the distance-to-endpoint coordinate so that
both ends of the domain stay well conditioned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

HLW_C1 = 1.44
HLW_C2 = 19.84

_GRID_POINTS = 1000
_GOLDEN_TOL = 1e-10
_EPS_FLOOR = 1e-300


def f_func(x: float) -> float:
    """f(x) = x log x - x + 1, with f(0) = 1; nonnegative, zero at 1."""
    if x < 0.0:
        raise ValueError("f requires x >= 0")
    if x == 0.0:
        return 1.0
    return x * math.log(x) - x + 1.0


def F_func(x: float) -> float:
    """F(x) = -log x + x - 1; nonnegative, zero at 1."""
    if x <= 0.0:
        raise ValueError("F requires x > 0")
    return -math.log(x) + x - 1.0


def _f_one_minus(gamma: float) -> float:
    """f(1 - gamma) = gamma + (1 - gamma) log(1 - gamma), stably."""
    return gamma + (1.0 - gamma) * math.log1p(-gamma)


def h_constraint(z: float, d: int) -> float:
    """z log z + (d - z) log((d - z)/(d - 1)) on 1 <= z < d.

    Zero at z = 1, strictly increasing, approaching d log d as z -> d.
    """
    _check_z(z, d)
    t = z - 1.0
    return (1.0 + t) * math.log1p(t) + (d - 1.0 - t) * math.log1p(-t / (d - 1.0))


def g_objective(z: float, d: int) -> float:
    """-log z - (d - 1) log((d - z)/(d - 1)) on 1 <= z < d; increasing from 0."""
    _check_z(z, d)
    t = z - 1.0
    return -math.log1p(t) - (d - 1.0) * math.log1p(-t / (d - 1.0))


def _check_z(z: float, d: int) -> None:
    if d < 2:
        raise ValueError("d must be >= 2")
    if not 1.0 <= z < d:
        raise ValueError(f"z={z} outside [1, d)")


# eps = d - z parametrization; accurate at both ends of (1, d)

def _h_eps(eps: float, d: int) -> float:
    if eps <= (d - 1.0) / 2.0:
        return (d - eps) * math.log(d - eps) + eps * math.log(eps / (d - 1.0))
    t = (d - 1.0) - eps
    return (1.0 + t) * math.log1p(t) + eps * math.log1p(-t / (d - 1.0))


def _g_eps(eps: float, d: int) -> float:
    if eps <= (d - 1.0) / 2.0:
        return -math.log(d - eps) - (d - 1.0) * math.log(eps / (d - 1.0))
    t = (d - 1.0) - eps
    return -math.log1p(t) - (d - 1.0) * math.log1p(-t / (d - 1.0))


def _solve_decreasing(fn, target: float, d: int) -> float:
    """Root of fn(eps) = target for fn strictly decreasing in eps.

    Geometric bisection on eps in (0, d-1]: the bracket midpoint is the
    geometric mean, so the bracket converges in relative terms and both
    eps -> 0 and eps -> d-1 roots come out fully resolved.
    """
    lo, hi = _EPS_FLOOR, d - 1.0
    if fn(hi, d) >= target:
        return hi
    for _ in range(120):
        mid = math.sqrt(lo * hi)
        if fn(mid, d) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    return math.sqrt(lo * hi)


def m_d(y: float, d: int) -> float:
    """Constrained infimum of sum F(x_i) given sum f(x_i) >= y on the simplex.

    Evaluated through the scalar reduction: solve the constraint
    ``h(z) = y`` for z in [1, d) and return g(z).  Strictly increasing
    on [0, d log d) with slope at least 1/d; m_d(0) = 0.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    if y < 0.0 or y >= d * math.log(d):
        raise ValueError(f"y={y} outside [0, d log d)")
    if y == 0.0:
        return 0.0
    eps = _solve_decreasing(_h_eps, y, d)
    return _g_eps(eps, d)


def m_d_inv(w: float, d: int) -> float:
    """Inverse of m_d: solve g(z) = w and return h(z)."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if w < 0.0:
        raise ValueError("w must be >= 0")
    if w == 0.0:
        return 0.0
    if w > _g_eps(_EPS_FLOOR, d):
        raise ValueError("w beyond the resolvable range of g")
    eps = _solve_decreasing(_g_eps, w, d)
    return _h_eps(eps, d)


class OptResult(NamedTuple):
    value: float
    gamma: float


def _interior_grid(npts: int = _GRID_POINTS):
    """Deterministic log-spaced grid on (0, 1), dense at both ends."""
    half = npts // 2
    top = -math.log10(0.5)
    lo = [10.0 ** (-(9.0 + (top - 9.0) * i / (half - 1))) for i in range(half)]
    # lo spans 1e-9 .. 0.5 geometrically; mirror for the upper end
    grid = sorted(set(lo + [1.0 - g for g in lo]))
    return grid


def _golden_min(fn, a: float, b: float, tol: float = _GOLDEN_TOL,
                max_iters: int = 200) -> tuple[float, float]:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - (b - a) * invphi
    d_ = a + (b - a) * invphi
    fc, fd = fn(c), fn(d_)
    for _ in range(max_iters):
        if b - a <= tol:
            break
        if fc <= fd:
            b, d_, fd = d_, c, fc
            c = b - (b - a) * invphi
            fc = fn(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + (b - a) * invphi
            fd = fn(d_)
    x = 0.5 * (a + b)
    return min((fn(x), x), (fc, c), (fd, d_))


def _grid_golden_min(fn, grid=None) -> OptResult:
    grid = grid if grid is not None else _interior_grid()
    vals = [fn(g) for g in grid]
    i = min(range(len(grid)), key=lambda k: vals[k])
    a = grid[max(0, i - 1)]
    b = grid[min(len(grid) - 1, i + 1)]
    value, gamma = _golden_min(fn, a, b)
    return OptResult(value, gamma)


@lru_cache(maxsize=None)
def _h_d_unit(y: float, d: int) -> OptResult:
    def objective(gamma: float) -> float:
        arg = -math.log1p(-gamma) * y
        try:
            return m_d_inv(arg, d) / _f_one_minus(gamma)
        except ValueError:
            return math.inf

    return _grid_golden_min(objective)


def h_d(x: float, y: float, d: int) -> OptResult:
    """inf over gamma of m_d^{-1}(-log(1-gamma) y) / (x f(1-gamma)).

    Returns the minimal value and the gamma attaining it.  x enters only
    as a prefactor, so the argmin is independent of x.
    """
    if x <= 0.0 or y <= 0.0:
        raise ValueError("x and y must be positive")
    if d < 2:
        raise ValueError("d must be >= 2")
    base = _h_d_unit(float(y), int(d))
    return OptResult(base.value / x, base.gamma)


@lru_cache(maxsize=1)
def h0() -> OptResult:
    """inf over gamma of -log(1-gamma) / (gamma + (1-gamma) log(1-gamma))."""
    def objective(gamma: float) -> float:
        return -math.log1p(-gamma) / _f_one_minus(gamma)

    return _grid_golden_min(objective)


def hlw_bound(s: int, d: int, n: int) -> float:
    """Concentration-of-measure entanglement lower bound for 3 <= d <= n."""
    if not 3 <= d <= n:
        raise ValueError("requires 3 <= d <= n")
    return (math.log(d) - HLW_C1 * d / n
            - HLW_C2 * ((s + 1) / (d * n)) ** 0.4 * math.log(d))


def thm1_rhs(s: int, d: int, n: int, h: float) -> float:
    """log d - h s/(n d); meaningful when h exceeds h_d(s/n, s/n)."""
    return math.log(d) - h * s / (n * d)


def thm2_rhs(s: int, d: int, n: int, h: float) -> float:
    """log d - h s/(n d); meaningful in the s/n -> 0 regime when h > h0."""
    return math.log(d) - h * s / (n * d)


class CorollaryResult(NamedTuple):
    value: float
    n_used: int


def corollary_bound(s: int, d: int, h: float, eps: float) -> CorollaryResult:
    """log d - h/(s^(1/2-eps) d), with the n = ceil(s^(3/2-eps)) it rests on."""
    if not 0.0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    n_used = math.ceil(s ** (1.5 - eps))
    return CorollaryResult(math.log(d) - h / (s ** (0.5 - eps) * d), n_used)


def prod_entropy_upper(s: int, d: int, n: int) -> float:
    """Upper bound on the product-channel minimal output entropy.

    g(p) = (1-p) log(d^2 - 1) - p log p - (1-p) log(1-p) with p = s/(dn);
    requires sd >= n, equals 0 at p = 1, and never exceeds 2 log d.
    """
    if s * d < n:
        raise ValueError("requires s d >= n")
    p = s / (d * n)
    if p == 1.0:
        return 0.0
    return ((1.0 - p) * math.log(d * d - 1.0)
            - p * math.log(p) - (1.0 - p) * math.log1p(-p))


def violation_lower(d: int, h11: float | None = None) -> float:
    """(1/d)(log d - 2 h_d(1,1) - 1): additivity-violation lower bound at s = n."""
    if h11 is None:
        h11 = h_d11(d)
    return (math.log(d) - 2.0 * h11 - 1.0) / d


def violation_threshold(d: int, h11: float | None = None) -> float:
    """exp(2 h_d(1,1) + 1): the dimension scale where the violation turns positive."""
    if h11 is None:
        h11 = h_d11(d)
    return math.exp(2.0 * h11 + 1.0)


def violation_lower_general(s: int, n: int, d: int, h: float) -> float:
    """p log(p d^2) + (1-p) log(1-p) - 2 h p with p = s/(dn)."""
    p = s / (d * n)
    if not 0.0 < p <= 1.0:
        raise ValueError("p = s/(dn) must lie in (0, 1]")
    tail = 0.0 if p == 1.0 else (1.0 - p) * math.log1p(-p)
    return p * math.log(p * d * d) + tail - 2.0 * h * p


@lru_cache(maxsize=None)
def _h_d11_live(d: int) -> float:
    return h_d(1.0, 1.0, d).value


def h_d11(d: int) -> float:
    """h_d(1,1), from the checked-in fixture table when available."""
    fixtures = load_h_d_fixtures()
    if d in fixtures:
        return fixtures[d][0]
    return _h_d11_live(d)


def h_d11_uniform_bound() -> float:
    """Computed maximum of h_d(1,1) over the fixture table."""
    fixtures = load_h_d_fixtures()
    return max(v[0] for v in fixtures.values())


def smallest_violating_d(hi: int = 10 ** 7) -> int:
    """Smallest integer d with violation_lower(d) > 0.

    The fixture range is scanned directly; beyond it the crossing is
    located by bisection with h_d(1,1) evaluated on the fly (h_d(1,1)
    saturates in d, so the objective is monotone out there).
    """
    fixtures = load_h_d_fixtures()
    for d in sorted(fixtures):
        if violation_lower(d) > 0.0:
            return d
    lo = max(fixtures) if fixtures else 2

    def crosses(d: int) -> bool:
        return math.log(d) - 2.0 * _h_d11_live(d) - 1.0 > 0.0

    if crosses(lo):
        return lo
    if not crosses(hi):
        raise ValueError(f"no violation up to d = {hi}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if crosses(mid):
            hi = mid
        else:
            lo = mid
    return hi


def fannes_eta(eps_m: float, d: int) -> float:
    """d eps_m (log d + log 1/eps_m): spectrum-perturbation entropy slack."""
    if not 0.0 < eps_m < 1.0:
        raise ValueError("eps_m must lie in (0, 1)")
    return d * eps_m * (math.log(d) + math.log(1.0 / eps_m))


def eps_m_bound(s: int, n: int, d: int) -> float:
    """2 d sqrt(log n / n) + 13 d^2 sqrt(log d / s)."""
    if s < 2 or n < 2:
        raise ValueError("requires s, n >= 2")
    return (2.0 * d * math.sqrt(math.log(n) / n)
            + 13.0 * d * d * math.sqrt(math.log(d) / s))


def hastings_lhs(s: int, n: int, d: int, gamma: float, m_bound: float) -> float:
    """d^2 log n + n d log d + (n - d) M - s log(1 - gamma), with M bounded by m_bound."""
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    return (d * d * math.log(n) + n * d * math.log(d)
            + (n - d) * m_bound - s * math.log1p(-gamma))


def m_bound_chain(s: int, n: int, d: int, gamma: float, h: float,
                  eta: float | None = None) -> float:
    """Upper bound on d log d + M(gamma): -m_d(h f(1-gamma) s/n - eta).

    ``eta`` defaults to the Fannes slack at these dimensions; pass 0.0
    for the asymptotic (large s, n) form of the chain.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    if eta is None:
        eta = fannes_eta(eps_m_bound(s, n, d), d)
    arg = h * _f_one_minus(gamma) * (s / n) - eta
    if arg < 0.0 or arg >= d * math.log(d):
        raise ValueError(f"chain argument {arg} outside the m_d domain")
    return -m_d(arg, d)


class TrendResult(NamedTuple):
    gamma: float
    margin: float
    lhs: list[float]


def divergence_trend(d: int, h: float, ns: list[int],
                     ratio: float = 1.0) -> TrendResult:
    """Composed Hastings diagnostic along a dimension sequence.

    Uses the asymptotic chain (Fannes slack -> 0 in the large-dimension
    limit) with gamma picked on the standard grid to maximize the
    per-dimension decay margin m_d(h f(1-gamma) ratio) + ratio log(1-gamma);
    a positive margin makes the diagnostic decrease without bound.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    top = d * math.log(d)
    best_gamma, best_margin = None, -math.inf
    for gamma in _interior_grid():
        arg = h * _f_one_minus(gamma) * ratio
        if not 0.0 <= arg < top:
            continue
        margin = m_d(arg, d) + ratio * math.log1p(-gamma)
        if margin > best_margin:
            best_gamma, best_margin = gamma, margin
    if best_gamma is None:
        raise ValueError("no feasible gamma on the grid")
    m_bound = -top - m_d(h * _f_one_minus(best_gamma) * ratio, d)
    lhs = [hastings_lhs(int(round(ratio * n)), n, d, best_gamma, m_bound)
           for n in ns]
    return TrendResult(best_gamma, best_margin, lhs)


def md_series_k(d: int) -> float:
    """Coefficient k in the small-y expansion m_d(y)/y = 1 - k sqrt(y) + O(y).

    k = ((d^2 - 2d) / (6 (d-1)^2)) (2 (d-1) / d)^{3/2}; zero at d = 2.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    return ((d * d - 2.0 * d) / (6.0 * (d - 1.0) ** 2)
            * (2.0 * (d - 1.0) / d) ** 1.5)


def mu_tail_upper(s: int, n: int, d: int, sup_log_sum: float) -> float:
    """Induced-measure mass bound exp[d^2 log n + (n-d)(d log d + sup)] / (d-1)!."""
    if n <= d:
        raise ValueError("requires n > d")
    if sup_log_sum > -d * math.log(d) + 1e-12:
        raise ValueError("sup of sum log w_i cannot exceed -d log d")
    logp = (-math.lgamma(d) + d * d * math.log(n)
            + (n - d) * (d * math.log(d) + sup_log_sum))
    return math.exp(min(logp, 0.0))


def prob_Tc_upper(s: int, n: int, d: int) -> float:
    """Atypical-embedding probability bound (2d/(d-1)!) exp[-alpha d^2 log n]."""
    if n <= d:
        raise ValueError("requires n > d")
    alpha = 4.0 * (n - d) / (3.0 * n) - 1.0
    logp = math.log(2.0 * d) - math.lgamma(d) - alpha * d * d * math.log(n)
    return math.exp(min(logp, 0.0))


def tube_fraction_lower(s: int, gamma: float) -> float:
    """(1/4)(1 - gamma)^(s-1): guaranteed tube-hit fraction for typical embeddings."""
    if s < 2:
        raise ValueError("requires s >= 2")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")
    return 0.25 * (1.0 - gamma) ** (s - 1)


class FeasibilityResult(NamedTuple):
    value: float
    feasible: bool


def tube_feasibility(d: int, s: int) -> FeasibilityResult:
    """(d^2 + 2)(1 - 6 log d / s)^(s-1) <= 1/4 check behind the tube bound."""
    base = max(0.0, 1.0 - 6.0 * math.log(d) / s)
    value = (d * d + 2.0) * base ** (s - 1)
    return FeasibilityResult(value, value <= 0.25)


def hlw_crossover_ratio(d: int, n: int, h: float) -> float | None:
    """Ratio p = s/(nd) where the linear bound stops beating the HLW bound.

    Root of -h p + c1 d/n + c2 (p + 1/(dn))^{2/5} log d; None when the
    linear bound dominates over the whole range p in (0, 1].
    """
    if not 3 <= d <= n:
        raise ValueError("requires 3 <= d <= n")

    def diff(p: float) -> float:
        return (-h * p + HLW_C1 * d / n
                + HLW_C2 * (p + 1.0 / (d * n)) ** 0.4 * math.log(d))

    grid = [10.0 ** (-8.0 + 8.0 * i / 9999) for i in range(10000)]
    prev_p, prev_v = grid[0], diff(grid[0])
    for p in grid[1:]:
        v = diff(p)
        if prev_v > 0.0 >= v:
            lo, hi = prev_p, p
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if diff(mid) > 0.0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev_p, prev_v = p, v
    return None


# ---------------------------------------------------------------------------
# aggregated per-dimension report


@dataclass
class BoundReport:
    """Every scalar bound evaluated at one (s, n, d, h, gamma) tuple.

    Entries whose preconditions fail are None (e.g. the HLW bound needs
    3 <= d <= n, the product bound needs sd >= n, the Fannes slack needs
    a total variation below 1).
    """

    s: int
    n: int
    d: int
    p_ratio: float
    hlw: float | None
    thm1_rhs: float
    thm2_rhs: float
    prod_upper: float | None
    delta_s_lower: float
    h_d_value: float
    h0_value: float
    eta: float | None
    eps_m: float | None
    tube_radius: float
    hastings_lhs: float | None


def build_bound_report(s: int, n: int, d: int, h: float | None = None,
                       gamma: float | None = None) -> BoundReport:
    """Evaluate the full bound family at one dimension tuple.

    ``h`` defaults to the sharp thresholds (h_d(s/n, s/n) for the linear
    bound and the violation chain, h0 for the small-ratio bound);
    ``gamma`` overrides the diagnostic's automatic choice.
    """
    if s > n * d:
        raise ValueError(f"s={s} exceeds n*d={n * d}")
    if d < 2:
        raise ValueError("bound reports need d >= 2")
    ratio = s / n
    p = s / (d * n)
    hd = h_d(ratio, ratio, d)
    h0_val = h0().value
    h1 = h if h is not None else hd.value
    h2 = h if h is not None else h0_val
    hlw = hlw_bound(s, d, n) if 3 <= d <= n else None
    prod = prod_entropy_upper(s, d, n) if s * d >= n else None
    eps_m = eps_m_bound(s, n, d) if min(s, n) >= 2 else None
    eta = fannes_eta(eps_m, d) if eps_m is not None and eps_m < 1.0 else None
    from .channels import tube_radius

    lhs = None
    try:
        if gamma is not None:
            chain = m_bound_chain(s, n, d, gamma, h1, eta=0.0)
            lhs = hastings_lhs(s, n, d, gamma, chain - d * math.log(d))
        else:
            trend = divergence_trend(d, h1, [n], ratio=ratio)
            lhs = trend.lhs[0]
    except ValueError:
        lhs = None
    return BoundReport(
        s=s, n=n, d=d,
        p_ratio=p,
        hlw=hlw,
        thm1_rhs=thm1_rhs(s, d, n, h1),
        thm2_rhs=thm2_rhs(s, d, n, h2),
        prod_upper=prod,
        delta_s_lower=violation_lower_general(s, n, d, h1),
        h_d_value=hd.value,
        h0_value=h0_val,
        eta=eta,
        eps_m=eps_m,
        tube_radius=tube_radius(s, n, d),
        hastings_lhs=lhs,
    )


# ---------------------------------------------------------------------------
# fixture table and its independent generating oracle

_FIXTURE_NAME = "h_d_fixtures.tsv"
FIXTURE_D_MAX = 200


@lru_cache(maxsize=1)
def load_h_d_fixtures() -> dict[int, tuple[float, float]]:
    """Checked-in table d -> (h_d(1,1), argmin gamma)."""
    from importlib import resources

    path = resources.files("entlab").joinpath("data").joinpath(_FIXTURE_NAME)
    try:
        text = path.read_text()
    except FileNotFoundError:
        return {}
    return parse_h_d_fixtures(text)


def parse_h_d_fixtures(text: str) -> dict[int, tuple[float, float]]:
    out: dict[int, tuple[float, float]] = {}
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split("\t") != ["d", "h_d11", "gamma_m"]:
        raise ValueError("malformed fixture header")
    for ln in lines[1:]:
        d_str, h_str, g_str = ln.split("\t")
        out[int(d_str)] = (float(h_str), float(g_str))
    return out


def format_h_d_fixtures(table: dict[int, tuple[float, float]]) -> str:
    lines = ["d\th_d11\tgamma_m"]
    for d in sorted(table):
        h11, gm = table[d]
        lines.append(f"{d}\t{h11:.12g}\t{gm:.12g}")
    return "\n".join(lines) + "\n"


def oracle_h_d11(d: int, z_points: int = 100_000) -> OptResult:
    """Independent evaluation of h_d(1,1) by constraint elimination.

    Instead of minimizing over gamma with an inner inverse solve, the
    y = 1 constraint is inverted in closed form: along the constraint
    curve 1 - gamma = exp(-g(z)), so the objective becomes a function of
    z alone, scanned on a dense grid (dense at both endpoints) and
    polished by golden section.  Shares no solver code with ``h_d``.
    """
    if d < 2:
        raise ValueError("d must be >= 2")

    span = d - 1.0

    def objective_eps(eps: float) -> float:
        # z = d - eps; feasible gamma = 1 - exp(-g)
        if not 0.0 < eps < span:
            return math.inf
        g = _g_eps(eps, d)
        h = _h_eps(eps, d)
        if g < 1e-3:
            # series for 1 - (1+g) e^{-g}; the direct form cancels badly
            denom = g * g / 2.0 - g ** 3 / 3.0 + g ** 4 / 8.0
        else:
            denom = 1.0 - (1.0 + g) * math.exp(-g)  # = f(1 - gamma)
        if denom <= 0.0:
            return math.inf
        return h / denom

    half = z_points // 2
    # eps-grid geometric from both ends of (0, d-1)
    us = [0.30103 + (12.0 - 0.30103) * i / (half - 1) for i in range(half)]
    grid = sorted({span * 10.0 ** (-u) for u in us}
                  | {span * (1.0 - 10.0 ** (-u)) for u in us})
    vals = [objective_eps(e) for e in grid]
    i = min(range(len(grid)), key=lambda k: vals[k])
    a = grid[max(0, i - 1)]
    b = grid[min(len(grid) - 1, i + 1)]
    value, eps_star = _golden_min(objective_eps, a, b, tol=1e-14 * span)
    gamma_star = -math.expm1(-_g_eps(eps_star, d))
    return OptResult(value, gamma_star)
