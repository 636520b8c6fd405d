"""Gamma and zeta functions for real and complex arguments.

All routines accept scalars or numpy arrays and return complex results
(``gamma``/``zeta``) unless noted.  Scalars in, scalars out.

Gamma uses a 15-term Lanczos sum (g = 671/128) with the reflection formula
for ``Re s < 1/2``.  Riemann and Hurwitz zeta use Euler--Maclaurin summation
whose cutoff grows with ``|s|``; below ``Re s = 1/2`` the Riemann zeta is
obtained from the functional equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "Precision",
    "bernoulli",
    "constants",
    "gamma",
    "loggamma",
    "rgamma",
    "zeta",
    "hurwitz_zeta",
    "binom_complex",
]


@dataclass(frozen=True)
class Precision:
    rel_tol: float = 1e-12
    working_digits: int = 16

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-6):
            raise ValueError(f"rel_tol must lie in (0, 1e-6], got {self.rel_tol}")


DEFAULT_PRECISION = Precision()

# Numerical Recipes (3rd ed.) gammln coefficients, g = 671/128.
_LANCZOS_G = 5.24218750000000000
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_LOG_SQRT_2PI = 0.91893853320467274178032973640562


def _as_complex(x):
    scalar = np.ndim(x) == 0
    return np.asarray(x, dtype=complex), scalar


def _ret(a, scalar):
    return a[()] if scalar else a


def _loggamma_right(z):
    # valid for Re z >= 1/2
    x = z
    tmp = x + _LANCZOS_G
    tmp = (x + 0.5) * np.log(tmp) - tmp
    ser = np.full_like(z, _LANCZOS_C0)
    y = x.copy()
    for c in _LANCZOS_COF:
        y = y + 1.0
        ser = ser + c / y
    return tmp + np.log(2.5066282746310005 * ser / x)


def _log_sin_pi(z):
    # log(sin(pi z)) evaluated stably for large |Im z|
    y = np.abs(z.imag)
    big = y > 20
    out = np.empty_like(z)
    small = ~big
    if small.any():
        out[small] = np.log(np.sin(np.pi * z[small]))
    if big.any():
        zb = z[big]
        up = zb.imag > 0
        # Im z > 0: sin(pi z) = e^{-i pi z} (1 - e^{2 i pi z}) * (i/2); mirror for Im z < 0
        lead = np.where(up, -1j * np.pi * zb, 1j * np.pi * zb)
        w = np.exp(np.where(up, 2j * np.pi * zb, -2j * np.pi * zb))
        out[big] = lead + np.log((1 - w) * np.where(up, 0.5j, -0.5j))
    return out


def loggamma(s):
    """Log-gamma on the principal sheet up to multiples of 2*pi*i.

    Only ``exp(loggamma(s))`` and real parts are meaningful; the imaginary
    part is not continuous across the reflection boundary.
    """
    z, scalar = _as_complex(s)
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    right = z.real >= 0.5
    if right.any():
        out[right] = _loggamma_right(z[right])
    left = ~right
    if left.any():
        zl = z[left]
        out[left] = math.log(math.pi) - _log_sin_pi(zl) - _loggamma_right(1.0 - zl)
    return _ret(out.reshape(np.shape(s)), scalar)


def _nonpositive_int(z):
    return (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))


def gamma(s):
    z, scalar = _as_complex(s)
    z1 = np.atleast_1d(z)
    if _nonpositive_int(z1).any():
        raise ValueError("gamma has poles at the non-positive integers")
    out = np.exp(np.atleast_1d(loggamma(z1)))
    # reflection loses the sign convention for real negative arguments; fix exactly
    realneg = (z1.imag == 0) & (z1.real < 0.5)
    if realneg.any():
        x = z1.real[realneg]
        out[realneg] = math.pi / (np.sin(np.pi * x) * np.exp(_loggamma_right(1.0 - z1[realneg]).real))
    out = out.reshape(np.shape(s))
    return _ret(out, scalar)


def rgamma(s):
    """1/Gamma(s), entire; zero at the non-positive integers."""
    z, scalar = _as_complex(s)
    z1 = np.atleast_1d(z)
    out = np.zeros_like(z1)
    ok = ~_nonpositive_int(z1)
    if ok.any():
        out[ok] = 1.0 / np.atleast_1d(gamma(z1[ok]))
    return _ret(out.reshape(np.shape(s)), scalar)


def binom_complex(x, m: int):
    """binom(x, m) for complex x and integer m >= 0 (product form)."""
    z, scalar = _as_complex(x)
    out = np.ones_like(np.atleast_1d(z))
    for j in range(m):
        out = out * (np.atleast_1d(z) - j) / (j + 1)
    return _ret(out.reshape(np.shape(x)), scalar)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    return _bernoulli_table(n + 1)[n]


@lru_cache(maxsize=8)
def _bernoulli_table(n: int):
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        c = 1
        for k in range(m):
            # c = binom(m+1, k)
            acc += c * B[k]
            c = c * (m + 1 - k) // (k + 1)
        B[m] = -acc / (m + 1)
    return tuple(B)


_EM_TERMS = 24
# B_{2k} / (2k)!
_EM_COEF = np.array(
    [float(bernoulli(2 * k) / math.factorial(2 * k)) for k in range(1, _EM_TERMS + 1)]
)


def _em_tail(s, a):
    """sum_{k>=0} (a+k)^{-s} for Re a large relative to |s|, by Euler--Maclaurin."""
    la = np.log(a)
    a_s = np.exp(-s * la)
    total = a * a_s / (s - 1.0) + 0.5 * a_s
    # term_k = B_2k/(2k)! * (s)_{2k-1} * a^{-s-2k+1}
    rising = s.copy()  # (s)_1
    pw = a_s / a
    inv_a2 = 1.0 / (a * a)
    for k in range(_EM_TERMS):
        total = total + _EM_COEF[k] * rising * pw
        rising = rising * (s + 2 * k + 1) * (s + 2 * k + 2)
        pw = pw * inv_a2
    return total


def _em_cutoff(s) -> int:
    m = float(np.max(np.abs(s))) if np.size(s) else 0.0
    return int(max(16, math.ceil((m + 2 * _EM_TERMS) / math.pi)))


def hurwitz_zeta(s, a):
    """Hurwitz zeta sum_{k>=0} (k+a)^{-s} for real a > 0 and s != 1.

    Uses direct summation up to a cutoff and Euler--Maclaurin beyond; valid for
    every ``s`` (the continuation is implicit in the EM formula), but accuracy is
    only guaranteed for ``Re s > -10``.
    """
    z, scalar = _as_complex(s)
    av = np.asarray(a, dtype=float)
    z, av = np.broadcast_arrays(np.atleast_1d(z), np.atleast_1d(av))
    z = z.astype(complex)
    if np.any(z == 1.0):
        raise ValueError("hurwitz zeta has a pole at s = 1")
    cut = _em_cutoff(z)
    need = np.maximum(0, np.ceil(cut - av)).astype(int)
    nmax = int(need.max()) if need.size else 0
    out = np.zeros(z.shape, dtype=complex)
    if nmax:
        k = np.arange(nmax)
        base = av[..., None] + k
        mask = k < need[..., None]
        terms = np.exp(-z[..., None] * np.log(base))
        out = np.where(mask, terms, 0).sum(axis=-1)
    out = out + _em_tail(z, av + need)
    scalar = scalar and np.ndim(a) == 0
    return _ret(out.reshape(np.broadcast_shapes(np.shape(s), np.shape(a))), scalar)


def _zeta_right(z):
    cut = _em_cutoff(z)
    k = np.arange(1, cut, dtype=float)
    head = np.exp(-z[:, None] * np.log(k)).sum(axis=1)
    return head + _em_tail(z, np.full(z.shape, float(cut)))


def zeta(s):
    """Riemann zeta for complex s != 1."""
    z, scalar = _as_complex(s)
    z = np.atleast_1d(z).ravel()
    if np.any(z == 1.0):
        raise ValueError("zeta has a pole at s = 1")
    out = np.empty_like(z)
    right = z.real >= 0.5
    if right.any():
        out[right] = _zeta_right(z[right])
    left = ~right
    if left.any():
        tiny = np.abs(z[left]) < 1e-9
        zl = np.where(tiny, 0.25, z[left])  # Taylor value set below
        w = 1.0 - zl
        lg = np.atleast_1d(loggamma(w))
        fac = np.exp(zl * math.log(2.0) + (zl - 1.0) * math.log(math.pi) + lg)
        out[left] = fac * np.sin(np.pi * zl / 2) * _zeta_right(w)
        zt = z[left][tiny]
        out[np.flatnonzero(left)[tiny]] = -0.5 - _LOG_SQRT_2PI * zt
    out = out.reshape(np.shape(s))
    return _ret(out, scalar)


@dataclass(frozen=True)
class Constants:
    euler_gamma: float
    zeta_prime_0: float
    zeta_prime_minus1: float
    gamma_quarter: float
    gamma_third: float
    zeta_3: float
    zeta_3_2: float
    zeta_1_3: float
    zeta_4_3: float


# 40-digit values from mpmath (mp.dps = 40); zeta'(-1) agrees with 1/12 - log(Glaisher).
_CONSTANT_STRINGS = {
    "euler_gamma": "0.5772156649015328606065120900824024310422",
    "zeta_prime_0": "-0.9189385332046727417803297364056176398614",
    "zeta_prime_minus1": "-0.165421143700450929213919660242780642764",
    "gamma_quarter": "3.625609908221908311930685155867672002995",
    "gamma_third": "2.678938534707747633655692940974677644129",
    "zeta_3": "1.202056903159594285399738161511449990765",
    "zeta_3_2": "2.612375348685488343348567567924071630571",
    "zeta_1_3": "-0.9733602483507827154688868624478965707728",
    "zeta_4_3": "3.600937750458862421292207578475411277557",
}


@lru_cache(maxsize=1)
def constants() -> Constants:
    return Constants(**{k: float(v) for k, v in _CONSTANT_STRINGS.items()})
