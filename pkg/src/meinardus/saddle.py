"""Saddle point of the generating function and a Cauchy-integral count.

Phi_f(z) = log G_f(e^-z) = sum_m f(m) Li_1(e^{-mz}), and the k-th derivative
is (-1)^k sum_m f(m) m^k Li_{1-k}(e^{-mz}), summed term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .model import Kind, LSpec, WeightFunction, leading_pole
from .special import zeta

__all__ = [
    "SaddleResult",
    "SaddleError",
    "CauchyResult",
    "phi",
    "phi_eval",
    "solve_saddle",
    "pole_constants",
    "ell_for",
    "k_constants",
    "rho_asymptotic",
    "cauchy_count",
]


class SaddleError(RuntimeError):
    pass


@lru_cache(maxsize=64)
def _nonzero_weights(w: WeightFunction, M: int):
    f = np.asarray(w.values(M), dtype=float)
    m = np.nonzero(f)[0]
    return (m + 1).astype(float), f[m]


def _weight_growth(w: WeightFunction) -> float:
    """Constant B with f(m) <= B m on the tabulated range."""
    if w.kind is not Kind.EXPLICIT:
        return 1.0
    return max(1.0, max(v / (i + 1) for i, v in enumerate(w.table)))


def _li_neg(q, k):
    # Li_{1-k}(q) for k = 0..4
    if k == 0:
        return -np.log1p(-q)
    d = 1.0 - q
    if k == 1:
        return q / d
    if k == 2:
        return q / d**2
    if k == 3:
        return q * (1 + q) / d**3
    return q * (1 + 4 * q + q * q) / d**4


def _tail_bound(x: float, k: int, M: int, B: float) -> float:
    # sum_{m>M} B k! m^{k+1} r^m / (1-r)^{k+1}, geometric envelope
    r = math.exp(-x)
    ratio = ((M + 2) / (M + 1)) ** (k + 1) * r
    if ratio >= 1:
        return math.inf
    lead = math.exp((k + 1) * math.log(M + 1) - (M + 1) * x)
    return B * math.factorial(max(k, 1)) * lead / (1 - ratio) / (1 - r) ** (k + 1)


def phi_eval(w: WeightFunction, z, k: int = 0, rel_tol: float = 1e-14):
    """(value, error bound) of the k-th derivative of Phi_f at z (Re z > 0).

    ``z`` may be a scalar or an array sharing one real part.
    """
    if k not in range(5):
        raise ValueError("derivative order must be 0..4")
    z = np.asarray(z, dtype=complex)
    x = float(np.min(z.real))
    if x <= 0:
        raise ValueError("Phi_f needs Re z > 0")
    B = _weight_growth(w)
    M = max(8, int(math.ceil(36.0 / x)))
    while True:
        m, f = _nonzero_weights(w, M)
        q = np.exp(-np.multiply.outer(z, m))
        terms = f * m**k * _li_neg(q, k)
        val = terms.sum(axis=-1) * (-1) ** k
        bound = _tail_bound(x, k, M, B)
        scale = float(np.max(np.abs(val))) if np.size(val) else 0.0
        if bound <= rel_tol * max(scale, 1e-300):
            break
        M *= 2
        if M > 50_000_000:
            raise SaddleError("Phi series truncation did not converge")
    if val.ndim == 0:
        val = val[()]
    return val, bound


def phi(w: WeightFunction, z, k: int = 0):
    """k-th derivative of Phi_f at z."""
    return phi_eval(w, z, k)[0]


@dataclass(frozen=True)
class SaddleResult:
    n: int
    rho: float
    rho_asym: Optional[float]
    residual: float
    iterations: int


def _minus_dphi(w, r):
    return -float(np.real(phi(w, r, 1)))


def solve_saddle(w: WeightFunction, n: int, spec: Optional[LSpec] = None) -> SaddleResult:
    """Solve -Phi_f'(rho) = n by Newton's method inside a bisection bracket."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if spec is not None:
        a, om = spec.positive_poles[0]
    elif w.kind is not Kind.EXPLICIT:
        a, om = leading_pole(w)
    else:
        a = None
    if a is not None:
        c1 = om * math.gamma(float(a) + 1) * float(np.real(zeta(float(a) + 1)))
        r = (c1 / n) ** (1.0 / float(a + 1))
    else:
        r = 1.0
    lo, hi = r / 10, r * 10
    # widen until the bracket holds; -Phi' is decreasing in rho
    while _minus_dphi(w, lo) < n:
        lo /= 10
    while _minus_dphi(w, hi) > n:
        hi *= 10
    tol = 1e-9 * n
    for it in range(1, 31):
        g = _minus_dphi(w, r) - n
        if abs(g) <= tol:
            rho_asym = rho_asymptotic(spec, n) if spec is not None else None
            return SaddleResult(n, r, rho_asym, abs(g), it)
        if g > 0:
            lo = max(lo, r)
        else:
            hi = min(hi, r)
        d2 = float(np.real(phi(w, r, 2)))  # = -g'(r) > 0
        step = r + g / d2
        r = step if lo < step < hi else 0.5 * (lo + hi)
    raise SaddleError(f"saddle solve did not converge for n={n}: bracket [{lo}, {hi}]")


# ------------------------------------------------------------------ closed forms


def pole_constants(spec: LSpec) -> tuple[float, float, float]:
    """(c1, c2, c3): c_j = omega Gamma(pole+1) zeta(pole+1) for the two largest
    positive poles (c2 = 0 with a single pole), c3 = L_f(0)."""
    poles = spec.positive_poles

    def c(g, w):
        g = float(g)
        return w * math.gamma(g + 1) * float(np.real(zeta(g + 1)))

    c1 = c(*poles[0])
    c2 = c(*poles[1]) if len(poles) > 1 else 0.0
    return c1, c2, spec.L0


def ell_for(alpha: Fraction, beta: Fraction) -> int:
    """The l >= 1 with (l+1)/l beta < alpha <= l/(l-1) beta."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if not 0 < beta < alpha:
        raise ValueError("need 0 < beta < alpha")
    if alpha > 2 * beta:
        return 1
    for ell in range(2, 1000):
        if Fraction(ell + 1, ell) * beta < alpha <= Fraction(ell, ell - 1) * beta:
            return ell
    raise ValueError("poles too close together")


def k_constants(alpha, beta, c1: float, c2: float) -> tuple[float, ...]:
    """K1..K5 of rho_n = sum_j K_j n^{-1/(a+1) - (j-1)(a-b)/(a+1)} + c3/((a+1) n)."""
    a, b = float(alpha), float(beta)
    a1 = a + 1
    K1 = c1 ** (1 / a1)
    K2 = c2 / (a1 * c1 ** (b / a1))
    K3 = c2**2 * (a - 2 * b) / (2 * a1**2 * c1 ** ((2 * b + 1) / a1))
    K4 = c2**3 * (2 * a * a - 9 * a * b - 2 * a + 9 * b * b + 3 * b) / (6 * a1**3 * c1 ** ((3 * b + 2) / a1))
    K5 = (
        c2**4
        * (6 * a**3 - 44 * a * a * b - 15 * a * a + 96 * a * b * b + 56 * a * b + 6 * a - 64 * b**3 - 48 * b * b - 8 * b)
        / (24 * a1**4 * c1 ** ((4 * b + 3) / a1))
    )
    return K1, K2, K3, K4, K5


def rho_asymptotic(spec: LSpec, n: int) -> float:
    """Closed-form saddle expansion through the 1/n term."""
    poles = spec.positive_poles
    if len(poles) > 2:
        raise ValueError("at most two positive poles are supported")
    c1, c2, c3 = pole_constants(spec)
    a = poles[0][0]
    lead = Fraction(1) / (a + 1)
    if len(poles) == 1:
        return c1 ** float(lead) * n ** -float(lead) + c3 / (float(a + 1) * n)
    b = poles[1][0]
    delta = (a - b) / (a + 1)
    K = k_constants(a, b, c1, c2)
    out = c3 / (float(a + 1) * n)
    for j, Kj in enumerate(K):
        e = lead + j * delta
        if e > 1:
            break
        out += Kj * n ** -float(e)
    return out


# ------------------------------------------------------------------ Cauchy count


@dataclass(frozen=True)
class CauchyResult:
    n: int
    value: float
    nearest: int
    err_estimate: float
    nodes: int
    precision_bits: int  # 53 for the double-precision path


_EPS = 2.2e-16


def _node_values_double(w, n, rho, K):
    t = 2 * np.pi * np.arange(K // 2 + 1) / K
    z = rho + 1j * t
    expo = n * z + phi(w, z, 0)
    return np.exp(expo).real, expo


def _node_value_mp(n, rho, j, K, prec, coeffs):
    import gmpy2
    from gmpy2 import mpc, mpfr

    with gmpy2.context(gmpy2.get_context(), precision=prec):
        theta = 2 * gmpy2.const_pi() * j / K
        z = mpc(mpfr(rho), theta)
        q = gmpy2.exp(-z)
        # Phi = sum_k (c(k)/k) q^k by Horner
        acc = mpc(0)
        for a in reversed(coeffs):
            acc = acc * q + a
        return gmpy2.exp(n * z + acc * q).real


def _log_coeffs(w, M, prec):
    import gmpy2
    from gmpy2 import mpfr

    from .counting import divisor_weight

    c = divisor_weight(w, M)
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        return [mpfr(c[k]) / k for k in range(1, M + 1)]


def _trapezoid(w, n, rho, K, cache):
    """Trapezoid estimate of p_f(n) with K nodes (even integrand, half the circle).

    Nodes whose double-precision rounding error could exceed 1e-4 are
    recomputed in MPFR; ``cache`` keeps those across K doublings.
    """
    vals, expo = _node_values_double(w, n, rho, K)
    err = np.exp(expo.real) * _EPS * (np.abs(expo) + 10)
    hot = np.nonzero(err > 1e-4)[0]
    wts = np.full(vals.shape, 2.0)
    wts[0] = wts[-1] = 1.0
    if hot.size == 0:
        total = float(np.dot(wts, vals)) / K
        return total, int(round(total)), 53, total
    import gmpy2
    from gmpy2 import mpfr

    log_peak = float(np.max(expo.real))
    prec = int(log_peak / math.log(2) + 2 * math.log2(K) + 64)
    M = int((prec * math.log(2) + 40) / rho) + 2
    coeffs = None
    cold = np.ones(vals.shape, dtype=bool)
    cold[hot] = False
    with gmpy2.context(gmpy2.get_context(), precision=prec):
        total = mpfr(float(np.dot(wts[cold], vals[cold])))
        for j in hot:
            # node j of K sits at the same angle as node j*2^s of K*2^s
            key = Fraction(int(j), K)
            v = cache.get(key)
            if v is None or v.precision < prec:
                if coeffs is None:
                    coeffs = _log_coeffs(w, M, prec)
                v = cache[key] = _node_value_mp(n, rho, int(j), K, prec, coeffs)
            total += wts[j] * v
        res = total / K
        return float(res), int(gmpy2.rint(res)), prec, res


def cauchy_count(w: WeightFunction, n: int, spec: Optional[LSpec] = None) -> CauchyResult:
    """p_f(n) = (1/2pi) int_{-pi}^{pi} exp(n(rho+it) + Phi_f(rho+it)) dt.

    The periodic integrand is handled by the trapezoid rule with node doubling
    until successive estimates agree to 0.05.  Counts too large for double
    precision switch to MPFR at a width matched to the size of the integrand.
    """
    if not 1 <= n <= 300:
        raise ValueError("cauchy_count supports 1 <= n <= 300")
    rho = solve_saddle(w, n, spec).rho
    K = 1 << max(4, math.ceil(math.log2(2 * n + 2)))
    cache: dict = {}
    prev = None
    while K <= 1 << 16:
        cur, near, prec, raw = _trapezoid(w, n, rho, K, cache)
        if prev is not None:
            diff = abs(float(raw - prev[1]))
            if near == prev[0] and diff < 0.05:
                return CauchyResult(n, cur, near, diff, K, prec)
        prev = (near, raw)
        K *= 2
    raise SaddleError(f"Cauchy integral for n={n} did not reach 0.4 absolute accuracy")
