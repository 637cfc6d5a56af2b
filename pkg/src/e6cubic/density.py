"""The expected leading constant: cone volume, local densities, and the
archimedean density.

The constant factors as  c = alpha * beta * omega_inf * omega_0  with

    alpha     = 1 / (6! * product of the seven anticanonical weights), exact,
    beta      = 1 (the surface is split),
    omega_0   = product over primes of (1 - 1/p)^7 (1 + 7/p + 1/p^2),
    omega_inf = 6 * the volume of a bounded 3-dimensional region, computed
                both through the iterated integrals g1/g2 and through an
                independent slicing of the same region.

alpha and omega_p are exact rationals; omega_0 and omega_inf are floats with
explicit tail and quadrature error estimates.  A closed form of the height
zeta function's local factor is cross-checked against a direct truncated sum
weighted by the arithmetic function vartheta.
"""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import IntegrationWarning, quad as _scipy_quad

from .arith import is_prime, phi_star
from .torsor import LAMBDA, T1_SCHEME, xi_scheme_satisfied

__all__ = [
    "LAMBDA",
    "ALPHA",
    "BETA",
    "alpha_exact",
    "alpha_simplex_check",
    "omega_p",
    "omega0",
    "EulerProduct",
    "g1",
    "g2",
    "omega_inf",
    "omega_inf_g2",
    "omega_inf_direct",
    "ArchimedeanDensity",
    "vartheta",
    "local_factor_closed",
    "local_factor_sum",
    "PeyreConstant",
    "peyre_constant",
]

ALPHA = Fraction(1, 6220800)
BETA = Fraction(1)


def quad(func, a, b, points=None, **kwargs):
    """scipy.integrate.quad with its warnings silenced and break points
    cleaned.

    Convergence is judged by the returned error estimates (callers compare
    independent evaluations), not by per-panel roundoff warnings, which at
    the tolerances used here fire routinely and harmlessly.  Break points
    that collapse onto the interval ends or onto each other would create
    degenerate subintervals, so they are dropped.
    """
    if points is not None:
        span = abs(b - a)
        keep = []
        for p in sorted(points):
            if min(p - a, b - p) > 1e-9 * span and (
                not keep or p - keep[-1] > 1e-9 * span
            ):
                keep.append(p)
        points = keep or None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return _scipy_quad(func, a, b, points=points, **kwargs)

# |log omega_p| <= _OMEGA_LOG_DECAY / p^2 for every prime (the expansion of
# log omega_p is -27/p^2 + 105/p^3 - ..., and the small primes sit below the
# asymptote); this constant drives the reported Euler product tail bound.
_OMEGA_LOG_DECAY = 27.0


def alpha_exact(weights=LAMBDA) -> Fraction:
    """Slice volume of the weighted simplex {t >= 0 : weights.t = 1}.

    Equals 1/(6! * prod(weights)); with the anticanonical weights this is
    1/6220800, and with unit weights the standard simplex value 1/6!.
    """
    denom = math.factorial(len(weights) - 1)
    for w in weights:
        denom *= w
    return Fraction(1, denom)


assert alpha_exact() == ALPHA


def alpha_simplex_check(samples: int = 10**6, seed: int = 12345, weights=LAMBDA):
    """Monte-Carlo estimate of alpha_exact, with its standard error.

    The slice measure is 7 times the volume of the corner simplex
    {t >= 0, weights.t <= 1}; points are drawn uniformly from the bounding
    box prod [0, 1/w_i].
    """
    if samples < 10**5:
        raise ValueError("use at least 1e5 samples")
    rng = np.random.default_rng(seed)
    w = np.array(weights, dtype=float)
    box = 1.0 / w
    hits = 0
    chunk = 250_000
    remaining = samples
    while remaining > 0:
        n = min(chunk, remaining)
        pts = rng.random((n, len(w))) * box
        hits += int(np.count_nonzero(pts @ w <= 1.0))
        remaining -= n
    box_volume = float(np.prod(box))
    frac = hits / samples
    estimate = len(w) * frac * box_volume
    stderr = len(w) * box_volume * math.sqrt(max(frac * (1 - frac), 1e-300) / samples)
    return estimate, stderr


def omega_p(p: int) -> Fraction:
    """Local density (1 - 1/p)^7 * (1 + 7/p + 1/p^2), exact."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return Fraction((p - 1) ** 7 * (p * p + 7 * p + 1), p**9)


@dataclass(frozen=True)
class EulerProduct:
    """Truncated product of omega_p with a rigorous tail estimate."""

    value: float
    truncation_prime: int
    tail_bound: float


def _primes_upto(n):
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def omega0(P: int = 10**5) -> EulerProduct:
    """Product of omega_p over p <= P, in ascending order of p.

    The tail satisfies |log prod_{p > P} omega_p| <= 27 * sum_{p > P} 1/p^2
    <= 27/P, so the true value lies in [value * exp(-27/P), value].
    """
    if P < 100:
        raise ValueError("truncation prime must be at least 100")
    value = 1.0
    for p in _primes_upto(P):
        p = int(p)
        value *= float(omega_p(p))
    tail = value * (1.0 - math.exp(-_OMEGA_LOG_DECAY / P))
    return EulerProduct(value, int(P), tail)


# --- archimedean density ---------------------------------------------------


def g1(u: float, v: float) -> float:
    """Length of {t : |t v^3| <= 1, |t^2 + u^3| <= 1}, in closed form.

    The admissible |t| run from sqrt(max(0, -1 - u^3)) to
    min(sqrt(1 - u^3), v^-3); empty when 1 - u^3 < 0.  For u far below -1
    the two square roots agree to many digits, so the differences are
    evaluated through their conjugates.
    """
    if v <= 0:
        raise ValueError("v must be positive")
    u3 = u**3
    hi_sq = 1.0 - u3
    if hi_sq < 0:
        return 0.0
    cap = v**-3.0
    lo_sq = -1.0 - u3
    if lo_sq <= 0.0:
        return 2.0 * min(math.sqrt(hi_sq), cap)
    lo = math.sqrt(lo_sq)
    if lo >= cap:
        return 0.0
    hi = math.sqrt(hi_sq)
    if hi <= cap:
        return 4.0 / (hi + lo)  # 2*(hi - lo) via the conjugate
    return 2.0 * (cap * cap - lo_sq) / (cap + lo)  # 2*(cap - lo)


def g2(v: float, tol: float = 1e-10) -> float:
    """Integral of g1(., v) over |u| <= v^-4, for 0 < v <= 1.

    The integrand vanishes for u > 1 and, below u = -1, decays so slowly
    that the tail is integrated in the variable r = -1/u.  Kinks of g1
    (the t-window hitting its cap v^-3, or closing) are passed to the
    integrator as break points.
    """
    if not 0 < v <= 1:
        raise ValueError("v must lie in (0, 1]")
    # the t-window top crosses the cap at u = -a1, and leaves it entirely
    # (g1 = 0) at u = -a2
    a1 = max(0.0, v**-6.0 - 1.0) ** (1.0 / 3.0)
    a2 = (v**-6.0 + 1.0) ** (1.0 / 3.0)
    pts = [-a1] if a1 < 1.0 else []
    near, _ = quad(
        g1, -1.0, 1.0, args=(v,), points=pts, limit=200, epsabs=tol, epsrel=tol
    )
    # tail in rho = sqrt(-1/u): the integrand approaches its moving lower
    # endpoint like 1/sqrt(r), which this substitution flattens
    rho_lo = math.sqrt(max(v**4.0, 1.0 / a2))
    pts = [a1**-0.5] if a1 > 1.0 else []
    far, _ = quad(
        lambda rho: g1(-1.0 / (rho * rho), v) * 2.0 / rho**3,
        rho_lo, 1.0, points=pts, limit=200, epsabs=tol, epsrel=tol,
    )
    return near + far


# v-locations where the structure of g2 changes: the t-window cap crossing
# enters u = -1, and the u-cap v^-4 overtakes the window's vanishing point
_G2_V_KINKS = (2.0 ** (-1.0 / 6.0), ((1.0 + math.sqrt(5.0)) / 2.0) ** (-1.0 / 6.0))


def _gauss_panel(f, a, b, nodes):
    x, w = nodes
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return half * sum(wi * f(mid + half * xi) for xi, wi in zip(x, w))


def omega_inf_g2(tol: float = 1e-9):
    """6 * integral of g2 over [0, 1]; returns (value, error estimate).

    g2 is smooth between its two structural kinks and has a cube-root cusp
    at v = 1 (the cap crossing scales like (1 - v)^(1/3)), so the integral
    runs as fixed Gauss-Legendre panels on the smooth stretches, with the
    top stretch substituted as v = 1 - y^3 to remove the cusp.  Fixed nodes
    keep the evaluation deterministic; the error estimate embeds a
    lower-order rule per panel.
    """
    inner = max(tol * 1e-2, 1e-10)
    k1, k2 = _G2_V_KINKS  # 2^(-1/6) < phi^(-1/6)
    f = lambda v: g2(v, inner)
    y_top = (1.0 - k2) ** (1.0 / 3.0)
    g = lambda y: 3.0 * y * y * g2(1.0 - y**3, inner)
    panels = [
        (f, 0.0, 0.35), (f, 0.35, 0.65), (f, 0.65, k1), (f, k1, k2),
        (g, 0.0, 0.5 * y_top), (g, 0.5 * y_top, y_top),
    ]
    hi_nodes = np.polynomial.legendre.leggauss(32)
    lo_nodes = np.polynomial.legendre.leggauss(20)
    total = err = 0.0
    for fn, a, b in panels:
        hi = _gauss_panel(fn, a, b, hi_nodes)
        lo = _gauss_panel(fn, a, b, lo_nodes)
        total += hi
        err += abs(hi - lo)
    return float(6.0 * total), float(6.0 * err)


def _v_measure(t, u):
    # measure of {v in [0,1] : |t v^3| <= 1, |u v^4| <= 1} for t >= 0
    w = 1.0 if t <= 1.0 else t ** (-1.0 / 3.0)
    cu = 1.0 if abs(u) <= 1.0 else abs(u) ** -0.25
    return min(w, cu)


def _u_section(u, tol):
    # integral over t of the v-measure along the band -1-u^3 <= t^2 <= 1-u^3
    u3 = u**3
    hi_sq = 1.0 - u3
    if hi_sq <= 0:
        return 0.0
    lo_sq = -1.0 - u3
    if lo_sq <= 0.0:
        hi = math.sqrt(hi_sq)
        pts = [p for p in (1.0, abs(u) ** 0.75) if 0.0 < p < hi]
        val, _ = quad(
            _v_measure, 0.0, hi, args=(u,), points=sorted(set(pts)), limit=200,
            epsabs=tol, epsrel=tol,
        )
        return 2.0 * val
    # narrow band far below u = -1: the width collapses in floating point,
    # so parametrize the band by its stable conjugate width
    lo = math.sqrt(lo_sq)
    width = 2.0 / (math.sqrt(hi_sq) + lo)
    pts = [
        (p - lo) / width
        for p in (1.0, abs(u) ** 0.75)
        if 0.0 < (p - lo) / width < 1.0
    ]
    val, _ = quad(
        lambda s: _v_measure(lo + width * s, u), 0.0, 1.0,
        points=sorted(set(pts)), limit=200, epsabs=tol, epsrel=tol,
    )
    return 2.0 * width * val


def omega_inf_direct(tol: float = 1e-9):
    """The same volume, sliced the other way: v-fibers measured exactly,
    then integrated over the (t, u) band.  Returns (value, error estimate).

    The unbounded u < -1 part is mapped to r = -1/u in (0, 1).
    """
    inner_tol = tol * 1e-2
    near, err1 = quad(
        lambda u: _u_section(u, inner_tol), -1.0, 1.0, points=[0.0], limit=400,
        epsabs=tol, epsrel=tol,
    )
    # section kinks in the tail: the t-window bottom crosses t = 1 at
    # |u| = 2^(1/3) and crosses the weight switch t = |u|^(3/4) where
    # |u|^(3/2) equals the golden ratio
    far_pts = [2.0 ** (-1.0 / 3.0), ((1.0 + math.sqrt(5.0)) / 2.0) ** (-2.0 / 3.0)]
    far, err2 = quad(
        lambda r: _u_section(-1.0 / r, inner_tol) / (r * r), 0.0, 1.0,
        points=far_pts, limit=400, epsabs=tol, epsrel=tol,
    )
    return 6.0 * (near + far), 6.0 * (err1 + err2)


@dataclass(frozen=True)
class ArchimedeanDensity:
    """omega_inf with the spread between its two independent evaluations."""

    value: float
    error: float
    g2_form: float
    direct_form: float


def omega_inf(tol: float = 1e-9) -> ArchimedeanDensity:
    """Archimedean density, computed two ways and cross-checked.

    Raises ArithmeticError when the two evaluations disagree by more than
    1e-6 plus the integrators' own error estimates.
    """
    a, ea = omega_inf_g2(tol)
    b, eb = omega_inf_direct(tol)
    spread = abs(a - b)
    if spread > 1e-6 + ea + eb:
        raise ArithmeticError(
            f"omega_inf evaluations disagree: {a!r} vs {b!r} (spread {spread:.3e})"
        )
    return ArchimedeanDensity(a, spread + ea, a, b)


# --- the arithmetic density weight and the local factor --------------------


def vartheta(xi) -> Fraction:
    """Multiplicative weight attached to a xi-tuple by the tau1/tau2 counts.

    Zero unless the xi-part of the T1 conditions holds; otherwise the
    product of phi* factors over the three coordinate blocks, corrected by
    the overlap of (xi4, xi5, xi6) with (xi1, xi2, xi3).
    """
    xi = tuple(int(v) for v in xi)
    if len(xi) != 7 or any(v < 1 for v in xi):
        raise ValueError("xi must be seven positive integers")
    if not xi_scheme_satisfied(xi, T1_SCHEME):
        return Fraction(0)
    x1, x2, x3, xl, x4, x5, x6 = xi
    block = phi_star(x4 * x5 * x6)
    overlap = phi_star(math.gcd(x4 * x5 * x6, x1 * x2 * x3))
    return phi_star(x1 * x3) * phi_star(x2 * x3 * xl * x4 * x5 * x6) * block / overlap


def local_factor_closed(p: int, s: float) -> float:
    """Closed form of the local factor F_p at shifted argument s, s > 0."""
    if s <= 0:
        raise ValueError("the local factor series diverges for s <= 0")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    t1, t2, t3, tl, t4, t5, t6 = (p ** (lam * s + 1) for lam in LAMBDA)
    pm = 1.0 - 1.0 / p
    bracket = (
        t1 / (t1 - 1)
        + t1 * t6 / (t3 * (t1 - 1))
        + t6 / (pm * t2)
        + 1.0 / (tl - 1)
        + tl * t6 / (t4 * (tl - 1))
        + tl * t6 / (t5 * (tl - 1))
    )
    return 1.0 + pm * pm / (t6 - 1) * bracket + pm / (t1 - 1) + pm / (tl - 1)


def local_factor_sum(p: int, s: float, cutoff: int = 40) -> float:
    """Truncated vartheta-weighted sum defining the local factor.

    Sums vartheta(p^e) * p^(-sum_i e_i (lambda_i s + 1)) over exponent
    vectors e in {0..cutoff}^7.  Vanishing terms are recognized through
    vartheta itself: a support pattern is skipped when its representative
    weight is zero, and a coordinate is capped at exponent 1 when raising
    it to 2 kills the weight.  The surviving terms factor into geometric
    partial sums, so the result equals the full boxed sum exactly.
    """
    if s <= 0:
        raise ValueError("the local factor series diverges for s <= 0")
    if cutoff < 20:
        raise ValueError("cutoff must be at least 20")
    x = [p ** -(lam * s + 1) for lam in LAMBDA]
    total = 0.0
    for mask in range(128):
        support = [(mask >> i) & 1 for i in range(7)]
        rep = tuple(p**e for e in support)
        weight = vartheta(rep)
        if weight == 0:
            continue
        term = float(weight)
        for i in range(7):
            if not support[i]:
                continue
            probe = tuple(p ** (2 if j == i else support[j]) for j in range(7))
            cap = cutoff if vartheta(probe) != 0 else 1
            xi_pow = x[i]
            term *= xi_pow * (1.0 - xi_pow**cap) / (1.0 - xi_pow)
        total += term
    return total


# --- assembly ---------------------------------------------------------------


@dataclass(frozen=True)
class PeyreConstant:
    """The assembled constant c = alpha * beta * omega_inf * omega_0."""

    alpha: Fraction
    beta: Fraction
    omega0: EulerProduct
    omega_inf: ArchimedeanDensity
    c: float
    c_error: float


def peyre_constant(P: int = 10**5, quad_tol: float = 1e-9) -> PeyreConstant:
    """Compute the full constant with propagated error estimates."""
    if P < 10**3:
        raise ValueError("truncation prime must be at least 1000")
    w0 = omega0(P)
    winf = omega_inf(quad_tol)
    a = float(ALPHA) * float(BETA)
    c = a * w0.value * winf.value
    c_err = a * (w0.tail_bound * winf.value + w0.value * winf.error)
    return PeyreConstant(ALPHA, BETA, w0, winf, c, c_err)
