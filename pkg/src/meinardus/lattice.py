"""Direct evaluation of two-dimensional lattice sums

    S = sum_{m,n >= 1} prod_k (a_k m + b_k n)^(-s_k),   a_k, b_k >= 0,

and of the one-dimensional polygonal sums sum_n P_k(n)^-s.

The quadrant is split into three pieces:

* n <= N, all m: direct for m <= M1, then a binomial expansion in n/m whose
  m-sums are Hurwitz zeta values;
* m <= N, n > N: the mirror image;
* m, n > N: Euler--Maclaurin in both variables.  Homogeneity of the
  summand turns every integral into a one-dimensional integral over [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .special import bernoulli, hurwitz_zeta, zeta

__all__ = ["ZetaEval", "LatticeSum", "lattice_sum", "zeta_Pk", "DivergentRegionError"]

_EPS = 2.2e-16
_EM_ORDER = 6  # Bernoulli terms per axis; derivatives up to order 11
_SERIES_TERMS = 48
_TAYLOR_TERMS = 90
_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


class DivergentRegionError(ValueError):
    """Arguments outside the region where the requested method is valid."""


@dataclass(frozen=True)
class ZetaEval:
    value: complex
    err_estimate: float
    method: str  # "DirectSum" or "MellinBarnes"

    def to_json(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "err_estimate": self.err_estimate,
            "method": self.method,
        }


@dataclass(frozen=True)
class LatticeSum:
    """Forms (a, b, s); the summand is prod (a m + b n)^-s."""

    forms: tuple[tuple[float, float, complex], ...]

    @property
    def degree(self) -> complex:
        return sum(s for _, _, s in self.forms)

    def swapped(self) -> "LatticeSum":
        return LatticeSum(tuple((b, a, s) for a, b, s in self.forms))

    def values(self, m, n):
        logs = sum(-s * np.log(a * m + b * n) for a, b, s in self.forms)
        return np.exp(logs)


def _binom_series(s: complex, c: float, J: int) -> np.ndarray:
    """Coefficients of (1 + c t)^-s up to t^J."""
    out = np.empty(J + 1, dtype=complex)
    out[0] = 1.0
    for j in range(1, J + 1):
        out[j] = out[j - 1] * (-s - j + 1) / j * c
    return out


def _series_mul(x, y, J):
    return np.convolve(x, y)[: J + 1]


def _strip_sum(L: LatticeSum, N: int, skip: int = 0):
    """sum_{n=1..N} sum_{m>skip} F(m, n) and an error estimate."""
    forms = L.forms
    ratio = max((b / a for a, b, _ in forms if a > 0), default=0.0)
    M1 = max(2 * N, skip + N, int(math.ceil(4 * ratio * N)))
    m = np.arange(skip + 1, M1 + 1, dtype=float)[:, None]
    n = np.arange(1, N + 1, dtype=float)[None, :]
    box = L.values(m, n)
    total = box.sum()
    scale = np.abs(box).sum()
    # tail m > M1: F = A n^-sy m^-dx prod_{a>0} (1 + (b/a) n/m)^-s
    dx = sum(s for a, _, s in forms if a > 0)
    sy = sum(s for a, _, s in forms if a == 0)
    logA = sum(-s * math.log(a) for a, _, s in forms if a > 0) + sum(-s * math.log(b) for a, b, s in forms if a == 0)
    J = _SERIES_TERMS
    e = np.ones(1, dtype=complex)
    for a, b, s in forms:
        if a > 0 and b > 0:
            e = _series_mul(np.pad(e, (0, J + 1 - len(e))), _binom_series(s, b / a, J), J)
    e = np.pad(e, (0, J + 1 - len(e)))
    j = np.arange(J + 1)
    hz = np.asarray(hurwitz_zeta(dx + j, float(M1 + 1)))
    nn = np.arange(1, N + 1, dtype=float)
    # sum_n n^{j - sy}, summed exactly for each j
    pw = np.exp(np.outer(j, np.log(nn)) - sy * np.log(nn)[None, :]).sum(axis=1)
    terms = np.exp(logA) * e * pw * hz
    tail = terms.sum()
    err = float(np.abs(terms[-3:]).sum()) + _EPS * float(scale + np.abs(terms).sum()) * 10
    return total + tail, err


def _taylor_at_zero(L: LatticeSum, J: int):
    """F(1, w) = C w^-sigma H(w); returns (C, sigma, Taylor coefficients of H, radius)."""
    sigma = sum(s for a, _, s in L.forms if a == 0)
    logC = 0.0
    coef = np.zeros(J + 1, dtype=complex)
    coef[0] = 1.0
    radius = math.inf
    for a, b, s in L.forms:
        if a == 0:
            logC += -s * math.log(b)
        else:
            logC += -s * math.log(a)
            if b > 0:
                coef = _series_mul(coef, _binom_series(s, b / a, J), J)
                radius = min(radius, a / b)
    return np.exp(logC), sigma, coef, radius


def _falling(x, r: int):
    out = np.ones_like(np.asarray(x, dtype=complex))
    for i in range(r):
        out = out * (x - i)
    return out


def _derivs_along(L: LatticeSum, w: np.ndarray, R: int) -> np.ndarray:
    """d^r/dw^r F(1, w) for r = 0..R at the points w (shape (len(w), R+1))."""
    w = np.asarray(w, dtype=float)
    # Taylor coefficients in h of F(1, w + h), one row per point
    T = np.zeros((len(w), R + 1), dtype=complex)
    T[:, 0] = 1.0
    for a, b, s in L.forms:
        base = a + b * w
        lead = np.exp(-s * np.log(base))
        if b == 0:
            T *= lead[:, None]
            continue
        c = b / base  # (base + b h)^-s = base^-s (1 + c h)^-s
        ser = np.empty((len(w), R + 1), dtype=complex)
        ser[:, 0] = 1.0
        for j in range(1, R + 1):
            ser[:, j] = ser[:, j - 1] * (-s - j + 1) / j * c
        new = np.zeros_like(T)
        for i in range(R + 1):
            new[:, i:] += T[:, i : i + 1] * ser[:, : R + 1 - i]
        T = new * lead[:, None]
    fact = np.array([math.factorial(r) for r in range(R + 1)], dtype=float)
    return T * fact


def _axis_integrals(L: LatticeSum, d: complex, R: int):
    """J(r) = int_0^1 w^{d+r-2} d^r/dw^r F(1, w) dw for r = 0..R, with error."""
    C, sigma, H, radius = _taylor_at_zero(L, _TAYLOR_TERMS)
    delta = min(0.25, radius / 3) if math.isfinite(radius) else 0.25
    if not (d - 1 - sigma).real > 0:
        raise DivergentRegionError("lattice sum diverges along an axis")
    j = np.arange(_TAYLOR_TERMS + 1)
    expo = d - 1 - sigma + j  # w^{d-2-sigma+j} integrates to delta^expo / expo
    base = C * H * np.exp(expo * math.log(delta)) / expo
    out = np.empty(R + 1, dtype=complex)
    err = np.empty(R + 1)
    for r in range(R + 1):
        terms = base * _falling(j - sigma, r)
        out[r] = terms.sum()
        err[r] = float(np.abs(terms[-4:]).sum())
    # [delta, 1]: geometric panels, Gauss-Legendre on each
    edges = [delta]
    while edges[-1] < 1:
        edges.append(min(1.0, 2 * edges[-1]))
    for lo, hi in zip(edges[:-1], edges[1:]):
        x = 0.5 * (hi + lo) + 0.5 * (hi - lo) * _GL_X
        wts = 0.5 * (hi - lo) * _GL_W
        D = _derivs_along(L, x, R)
        r = np.arange(R + 1)
        weight = np.exp(np.outer(np.log(x), d + r - 2))
        out += (wts[:, None] * weight * D).sum(axis=0)
    err += _EPS * 100 * np.abs(out)
    return out, err


def _mixed_derivs(L: LatticeSum, R: int) -> np.ndarray:
    """D[p, q] = d^p/dx^p d^q/dy^q F at (1, 1)."""
    T = np.zeros((R + 1, R + 1), dtype=complex)
    T[0, 0] = 1.0
    for a, b, s in L.forms:
        base = a + b
        ser = _binom_series(s, 1.0 / base, R)  # in u = a hx + b hy
        # expand u^j into hx^i hy^(j-i)
        P = np.zeros((R + 1, R + 1), dtype=complex)
        for jj in range(R + 1):
            for i in range(jj + 1):
                P[i, jj - i] += ser[jj] * math.comb(jj, i) * a**i * b ** (jj - i)
        new = np.zeros_like(T)
        for i in range(R + 1):
            for k in range(R + 1 - i):
                if T[i, k] != 0:
                    new[i:, k:] += T[i, k] * P[: R + 1 - i, : R + 1 - k]
        T = new * base ** (-s)
    fact = np.array([math.factorial(r) for r in range(R + 1)], dtype=float)
    return T * np.outer(fact, fact)


def _em_ops():
    ops = [(-0.5, 0)]
    for k in range(1, _EM_ORDER + 1):
        ops.append((-float(bernoulli(2 * k)) / math.factorial(2 * k), 2 * k - 1))
    return ops


def _corner_sum(L: LatticeSum, N: int):
    """sum_{m > N} sum_{n > N} F(m, n) by two-dimensional Euler--Maclaurin."""
    d = L.degree
    if not d.real > 2:
        raise DivergentRegionError("lattice sum needs total degree > 2")
    R = 2 * _EM_ORDER - 1
    Jy, ey = _axis_integrals(L, d, R)  # F(1, w)
    Jx, ex = _axis_integrals(L.swapped(), d, R)  # F(w, 1)
    D = _mixed_derivs(L, R)
    ops = _em_ops()
    logN = math.log(N)
    Np = lambda e: np.exp(e * logN)  # noqa: E731
    total = Np(2 - d) / (d - 2) * (Jx[0] + Jy[0])
    err = abs(Np(2 - d) / (d - 2)) * (ex[0] + ey[0])
    last = 0.0
    for c, r in ops:
        tx = c * Np(1 - d - r) * Jx[r]
        ty = c * Np(1 - d - r) * Jy[r]
        total += tx + ty
        err += abs(c * Np(1 - d - r)) * (ex[r] + ey[r])
        if r == ops[-1][1]:
            last += abs(tx) + abs(ty)
        for c2, q in ops:
            t = c * c2 * Np(-d - r - q) * D[r, q]
            total += t
            if r == ops[-1][1] or q == ops[-1][1]:
                last += abs(t)
    return total, float(err + 10 * last)


def lattice_sum(forms: Sequence[tuple[float, float, complex]], N: int | None = None, method: str = "DirectSum") -> ZetaEval:
    """Evaluate sum_{m,n>=1} prod (a m + b n)^-s for nonnegative (a, b)."""
    L = LatticeSum(tuple((float(a), float(b), complex(s)) for a, b, s in forms))
    for a, b, _ in L.forms:
        if a < 0 or b < 0 or a + b == 0:
            raise ValueError("form coefficients must be nonnegative and not both zero")
    d = L.degree
    if N is None:
        N = int(max(24, math.ceil(1.5 * abs(d) + 4 * max(abs(s.imag) for *_, s in L.forms))))
    s1, e1 = _strip_sum(L, N)
    s2, e2 = _strip_sum(L.swapped(), N, skip=N)
    s3, e3 = _corner_sum(L, N)
    return ZetaEval(complex(s1 + s2 + s3), e1 + e2 + e3, method)


# ---------------------------------------------------------------- polygonal


def zeta_Pk(s: complex, k: int, tol: float = 1e-12, N: int = 40) -> ZetaEval:
    """Z_{P_k}(s) = sum_n P_k(n)^-s with P_k(n) = ((k-2) n^2 + (4-k) n)/2.

    Head summed directly to N; the tail uses
    P_k(n)^-s = (2/(k-2))^s n^-2s (1 - c/n)^-s with c = (k-4)/(k-2).
    """
    if k < 3:
        raise ValueError("k must be at least 3")
    s = complex(s)
    if not s.real > 0.5:
        raise DivergentRegionError("Z_{P_k}(s) converges only for Re s > 1/2")
    n = np.arange(1, N + 1, dtype=float)
    P = ((k - 2) * n * n + (4 - k) * n) / 2
    head_terms = np.exp(-s * np.log(P))
    head = head_terms.sum()
    c = (k - 4) / (k - 2)
    J = 60
    j = np.arange(J + 1)
    coef = _binom_series(s, -c, J)
    hz = np.asarray(hurwitz_zeta(2 * s + j, float(N + 1)))
    terms = coef * hz
    tail = np.exp(s * math.log(2 / (k - 2))) * terms.sum()
    err = float(np.abs(terms[-3:]).sum()) + 10 * _EPS * float(np.abs(head_terms).sum() + abs(tail))
    if k == 4:
        err = 10 * _EPS * float(abs(head + tail))
    if err > tol:
        raise DivergentRegionError(f"Z_P{k}({s}) error {err:.2e} exceeds tol {tol:.2e}")
    return ZetaEval(complex(head + tail), err, "DirectSum")
