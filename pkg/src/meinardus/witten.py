"""Witten and Mordell--Tornheim zeta functions.

Direct sums live in :mod:`meinardus.lattice`; this module adds the
Mellin--Barnes continuation

    zeta_MT(s1, s2, s3) = G(s2+s3-1) G(1-s2) / G(s3) * zeta(s1+s2+s3-1)
                        + sum_{m<M} binom(-s3, m) zeta(s1+s3+m) zeta(s2-m)
                        + 1/(2 pi i) int_{(M-eps)} G(s3+w) G(-w) / G(s3) zeta(s1+s3+w) zeta(s2-w) dw

and, one level up, the so(5) zeta

    zeta_so5(s) = 6^s [ sum_{k<K} binom(-s, k) zeta_MT(s, s-k, 2s+k)
                        + 1/(2 pi i G(s)) int_{(K-eps)} G(s+z) G(-z) zeta_MT(s, s-z, 2s+z) dz ].

Single vertical integrals are truncated where the Gamma factors have decayed
and integrated with Gauss--Kronrod panels refined where needed.  The nested
integral of the so(5) continuation is done on a square lattice instead, where
it collapses to a discrete correlation (see ``_so5_trapezoid``).
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .lattice import DivergentRegionError, ZetaEval, lattice_sum, zeta_Pk
from .quadrature import QuadratureError, _NODES, _WG_FULL, _WK_FULL
from .reduce import chunk_ranges, pairwise_sum, parallel_map
from .special import binom_complex, gamma, rgamma, zeta

__all__ = [
    "ZetaEval",
    "DivergentRegionError",
    "PoleProximityError",
    "ExtrapolationError",
    "QuadratureError",
    "zeta_so5_direct",
    "zeta_mt2",
    "zeta_mt2_mb",
    "zeta_mt2_continued",
    "zeta_so5_continued",
    "zeta_so5",
    "zeta_su3_direct",
    "zeta_su3_continued",
    "zeta_Pk",
    "residue_extract",
    "zeta_so5_deriv0",
    "su3_numeric_data",
    "so5_residue_half",
    "so5_residue_third",
]

_FLOOR = 5e-13  # relative accuracy of the special functions
_POLE_GUARD = 1e-3
_CIRCLE_R = 1e-2
_CIRCLE_PTS = 8


class PoleProximityError(ArithmeticError):
    """Evaluation point too close to a pole."""


class ExtrapolationError(ArithmeticError):
    """Residue extrapolation did not settle."""


# ------------------------------------------------------------------ direct sums


def zeta_so5_direct(s: complex, tol: float = 1e-10) -> ZetaEval:
    """6^s sum_{m,n>=1} (m n (m+n) (m+2n))^-s, for Re s > 1/2."""
    s = complex(s)
    if not s.real > 0.5:
        raise DivergentRegionError("the so(5) sum converges only for Re s > 1/2")
    r = lattice_sum([(1, 0, s), (0, 1, s), (1, 1, s), (1, 2, s)])
    f = np.exp(s * math.log(6.0))
    out = ZetaEval(complex(f * r.value), float(abs(f) * r.err_estimate), "DirectSum")
    if out.err_estimate > tol:
        raise DivergentRegionError(f"direct sum error {out.err_estimate:.2e} exceeds tol {tol:.2e} at s={s}")
    return out


def zeta_mt2(s1: complex, s2: complex, s3: complex, tol: float = 1e-10) -> ZetaEval:
    """sum_{m,n>=1} m^-s1 n^-s2 (m+n)^-s3 in its region of absolute convergence."""
    s1, s2, s3 = complex(s1), complex(s2), complex(s3)
    if not ((s1 + s3).real > 1 and (s2 + s3).real > 1 and (s1 + s2 + s3).real > 2):
        raise DivergentRegionError(f"zeta_MT({s1}, {s2}, {s3}) is outside the convergent region")
    r = lattice_sum([(1, 0, s1), (0, 1, s2), (1, 1, s3)])
    if r.err_estimate > tol:
        raise DivergentRegionError(f"direct sum error {r.err_estimate:.2e} exceeds tol {tol:.2e}")
    return r


def zeta_su3_direct(s: complex, tol: float = 1e-10) -> ZetaEval:
    """2^s sum (j k (j+k))^-s, for Re s > 2/3."""
    s = complex(s)
    if not s.real > 2 / 3:
        raise DivergentRegionError("the su(3) sum converges only for Re s > 2/3")
    r = zeta_mt2(s, s, s, tol=math.inf)
    f = np.exp(s * math.log(2.0))
    out = ZetaEval(complex(f * r.value), float(abs(f) * r.err_estimate), "DirectSum")
    if out.err_estimate > tol:
        raise DivergentRegionError(f"direct sum error {out.err_estimate:.2e} exceeds tol {tol:.2e}")
    return out


# ------------------------------------------------------------ vertical lines


def _gk_batch(f, lefts: np.ndarray, width: np.ndarray):
    """Kronrod sums and |K-G| on many panels with one call of f."""
    half = 0.5 * width
    x = (lefts + half)[:, None] + half[:, None] * _NODES[None, :]
    vals, errs = f(x.ravel())
    vals = vals.reshape(x.shape)
    k = half * (vals @ _WK_FULL)
    g = half * (vals @ _WG_FULL)
    ev = half * (errs.reshape(x.shape) @ _WK_FULL) if errs is not None else np.zeros(len(lefts))
    return k, np.abs(k - g), ev


def _vertical_integral(f, center: float, tol: float, step: float = 1.0, max_panels: int = 20000):
    """Integrate f(tau) over the real line for Gamma-decaying f.

    ``f`` maps a float array to (values, evaluation errors or None).
    Returns (value, error bound).
    """
    # march outward until `run` consecutive samples are negligible; a single
    # small sample may be a zero of the integrand rather than decay
    block, run = 8, 4
    ends = []
    l1 = 0.0
    tail = 0.0
    for direction in (1.0, -1.0):
        i0 = 0 if direction > 0 else 1
        t_end = None
        history: list[float] = []
        while t_end is None:
            ts = center + direction * step * np.arange(i0, i0 + block)
            vals, _ = f(ts)
            mags = np.abs(vals)
            l1 += float(mags.sum()) * step
            thresh = 1e-3 * tol * max(1.0, l1)
            for t, m in zip(ts, mags):
                history.append(float(m))
                last = history[-run:]
                if len(last) == run and max(last) < thresh:
                    t_end = float(t)
                    tail += max(last)  # decay rate at least one per unit length past the plateau
                    break
            i0 += block
            if i0 * step > 2000:
                raise QuadratureError("vertical integrand does not decay")
        ends.append(t_end)
    hi, lo = ends
    target = tol * max(1.0, l1)

    n0 = max(1, int(math.ceil((hi - lo) / step)))
    lefts = lo + step * np.arange(n0)
    widths = np.full(n0, (hi - lo) / n0)
    lefts = lo + widths * np.arange(n0)
    done_l, done_k, done_e, done_v = [], [], [], []
    span = hi - lo
    while len(lefts):
        k, e, ev = _gk_batch(f, lefts, widths)
        ok = e <= 0.1 * target * widths / span
        done_l.extend(lefts[ok])
        done_k.extend(k[ok])
        done_e.extend(e[ok])
        done_v.extend(ev[ok])
        bad = ~ok
        if len(done_l) + 2 * int(bad.sum()) > max_panels:
            raise QuadratureError("panel budget exhausted on vertical line")
        half = 0.5 * widths[bad]
        lefts = np.concatenate([lefts[bad], lefts[bad] + half])
        widths = np.concatenate([half, half])
        if len(widths) and widths.min() < 1e-6 * step:
            raise QuadratureError("vertical integrand not resolved")
    order = np.argsort(done_l, kind="stable")
    value = pairwise_sum([done_k[i] for i in order])
    err = float(sum(done_e)) + tail + float(sum(done_v)) + _FLOOR * l1
    return complex(value), err


# ----------------------------------------------------------- Mordell-Tornheim


def _near(x: complex, pts) -> bool:
    return any(abs(x - p) < _POLE_GUARD for p in pts)


def _near_int(x: complex, upper: Optional[int] = None, lower: Optional[int] = None) -> bool:
    r = round(x.real)
    if upper is not None and r > upper:
        r = upper
    if lower is not None and r < lower:
        r = lower
    return abs(x - r) < _POLE_GUARD


def _mt_min_M(s1: complex, s2: complex, s3: complex, eps: float) -> int:
    M = 1
    while not _mt_window_ok(s1, s2, s3, M, eps):
        M += 1
        if M > 60:
            raise DivergentRegionError("no admissible M")
    return M


def _mt_window_ok(s1, s2, s3, M, eps) -> bool:
    c = M - eps
    return (s3.real + c > 0) and ((s1 + s3).real + c > 1) and (s2.real - c < 1)


def zeta_mt2_mb(
    s1: complex,
    s2: complex,
    s3: complex,
    M: Optional[int] = None,
    eps: float = 0.5,
    tol: float = 1e-10,
) -> ZetaEval:
    """Mordell--Tornheim zeta by Mellin--Barnes, valid wherever the line Re w = M - eps is admissible."""
    s1, s2, s3 = complex(s1), complex(s2), complex(s3)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if M is None:
        M = _mt_min_M(s1, s2, s3, eps)
    elif not _mt_window_ok(s1, s2, s3, M, eps):
        raise DivergentRegionError(f"M={M}, eps={eps} is not admissible at ({s1}, {s2}, {s3})")
    # poles of the separate pieces
    a, b = s2 + s3 - 1, s1 + s2 + s3
    if _near_int(a, upper=0) and a.real < 0.5 or _near(b, [2]) or (_near_int(s2, lower=1) and s2.real > 0.5):
        raise PoleProximityError(f"closed term singular at ({s1}, {s2}, {s3})")
    for m in range(M):
        if _near(s1 + s3 + m, [1]) or _near(s2 - m, [1]):
            raise PoleProximityError(f"finite sum singular at m={m}")

    closed = gamma(a) * gamma(1 - s2) * rgamma(s3) * zeta(b - 1)
    finite = [binom_complex(-s3, m) * zeta(s1 + s3 + m) * zeta(s2 - m) for m in range(M)]
    c = M - eps
    rg = rgamma(s3)
    if rg == 0:
        integral, ierr = 0.0, 0.0
    else:

        def f(tau):
            w = c + 1j * tau
            v = gamma(s3 + w) * gamma(-w) * rg * zeta(s1 + s3 + w) * zeta(s2 - w) / (2 * math.pi)
            return v, None

        integral, ierr = _vertical_integral(f, -0.5 * s3.imag, tol)
    total = closed + pairwise_sum(finite) + integral
    scale = abs(closed) + sum(abs(t) for t in finite)
    return ZetaEval(complex(total), float(ierr + _FLOOR * scale), "MellinBarnes")


def zeta_mt2_continued(s: complex, z: complex, M: Optional[int] = None, eps: float = 0.5, tol: float = 1e-10) -> ZetaEval:
    """zeta_MT(s, s - z, 2s + z), the slice used by the so(5) continuation."""
    s, z = complex(s), complex(z)
    return zeta_mt2_mb(s, s - z, 2 * s + z, M=M, eps=eps, tol=tol)


# -------------------------------------------------------------------- so(5)


def _so5_true_pole(s: complex) -> Optional[float]:
    if abs(s - 0.5) < _POLE_GUARD:
        return 0.5
    d = round(3 * s.real)
    if d <= 1 and d % 2 and abs(s - d / 3) < _POLE_GUARD:
        return d / 3
    return None


def _piece_singular(s: complex) -> bool:
    """Points where single terms of the continuation blow up but the sum is regular."""
    d = round(3 * s.real)
    if d <= 1 and abs(s - d / 3) < _POLE_GUARD:
        return True
    n = round(s.real)
    return n >= 1 and abs(s - n) < _POLE_GUARD


def _circle_mean(fn: Callable[[complex], ZetaEval], s: complex) -> ZetaEval:
    pts = [s + _CIRCLE_R * np.exp(2j * math.pi * (j + 0.5) / _CIRCLE_PTS) for j in range(_CIRCLE_PTS)]
    vals = [fn(p) for p in pts]
    v = pairwise_sum([r.value for r in vals]) / _CIRCLE_PTS
    # neighbouring terms of the pieces are of size |v|/r and cancel
    e = max(r.err_estimate for r in vals) + _FLOOR * max(abs(r.value) for r in vals) / _CIRCLE_R
    return ZetaEval(complex(v), float(e), vals[0].method)


def _so5_trapezoid(s: complex, K: int, eps: float, M: int, h: float, Y: float, U: float, threads: int = 1):
    """Contour part of the continuation on an (h Z)^2 lattice.

    With z = K - eps + iy and w = M - eps + it, the inner Mordell--Tornheim
    integrand is G(-w) * C(y + t) / G(2s + z) where
    C(u) = G(2s + z + w) zeta(3s + z + w) zeta(s - z - w), so the double
    integral is a discrete correlation and every special function is
    evaluated on a one-dimensional grid.
    """
    cz, cw = K - eps, M - eps
    ny, nt = int(math.ceil(Y / h)), int(math.ceil(U / h))
    yc = round(-0.5 * s.imag / h)
    iy = np.arange(yc - ny, yc + ny + 1)
    it = np.arange(-nt, nt + 1) + round(-0.5 * (2 * s.imag) / h) // 2
    y, tau = iy * h, it * h
    z = cz + 1j * y
    P = gamma(s + z) * gamma(-z)
    rg2 = rgamma(2 * s + z)
    closed = gamma(3 * s - 1) * gamma(1 - s + z) * rg2 * zeta(4 * s - 1)
    finite = sum(binom_complex(-(2 * s + z), m) * zeta(3 * s + z + m) * zeta(s - z - m) for m in range(M))
    B = gamma(-(cw + 1j * tau))
    iu = np.arange(iy[0] + it[0], iy[-1] + it[-1] + 1)
    v = cz + cw + 1j * iu * h
    C = gamma(2 * s + v) * zeta(3 * s + v) * zeta(s - v)
    # G_i = sum_j B_j C_{i+j}, in fixed row blocks so threads cannot change the result
    absPr = np.abs(P * rg2)
    off = it - it[0]

    def block(lohi):
        lo, hi = lohi
        idx = (iy[lo:hi] - iy[0])[:, None] + off[None, :]
        terms = B[None, :] * C[idx]
        w2 = absPr[lo:hi, None] * np.abs(terms)
        return terms.sum(axis=1), w2.sum(), w2[:, 0].max(), w2[:, -1].max(), w2[0].max(), w2[-1].max()

    parts = parallel_map(block, chunk_ranges(len(iy), 128), threads)
    G = np.concatenate([q[0] for q in parts])
    w2sum = float(sum(q[1] for q in parts))
    edge2 = max(max(q[2] for q in parts), max(q[3] for q in parts), parts[0][4], parts[-1][5])
    inner = (h / (2 * math.pi)) * rg2 * G
    outer_terms = P * (closed + finite + inner)
    value = (h / (2 * math.pi)) * pairwise_sum(list(outer_terms))
    # magnitude on the box boundary, for the truncation check
    edge2 = edge2 * h * h / (2 * math.pi) ** 2
    edge1 = float(max(abs(P[0] * (closed[0] + finite[0])), abs(P[-1] * (closed[-1] + finite[-1])))) * h / (2 * math.pi)
    l1 = float(np.abs(outer_terms).sum()) * h / (2 * math.pi) + w2sum * h * h / (2 * math.pi) ** 2
    return complex(value), max(float(edge2), edge1), l1


def _so5_core(s: complex, K: int, eps: float, M: Optional[int], tol: float, threads: int) -> ZetaEval:
    inner_tol = 0.1 * tol
    ksum, kerr = [], 0.0
    for k in range(K):
        r = zeta_mt2_continued(s, k, M=M, eps=eps, tol=inner_tol)
        b = binom_complex(-s, k)
        ksum.append(b * r.value)
        kerr += abs(b) * r.err_estimate
    rg = rgamma(s)
    integral, ierr = 0.0, 0.0
    if rg != 0:
        cz = K - eps
        s1, s2, s3 = s, s - cz, 2 * s + cz
        Mi = _mt_min_M(s1, s2, s3, eps) if M is None else M
        if not _mt_window_ok(s1, s2, s3, Mi, eps):
            raise DivergentRegionError(f"M={Mi}, eps={eps} is not admissible on the line Re z = {cz}")
        cw = Mi - eps
        # distance from the lines to the nearest singularities fixes the step
        dist = [eps, cz + s.real, cz + cw + 2 * s.real, abs(cz + cw + 3 * s.real - 1), 1 - s.real + cz + cw]
        dist += [abs(cz - s.real + 1), abs(cz + 3 * s.real - 1), abs(s.real - 1 - cz)]
        dist += [abs(cz + 3 * s.real + m - 1) for m in range(Mi)] + [abs(s.real - m - 1 - cz) for m in range(Mi)]
        d = max(min(dist), 0.05)
        h = 1.0 / math.ceil(8.0 / d)
        Y = U = 16.0 + abs(s.imag)
        for _ in range(8):
            coarse, edge_c, _ = _so5_trapezoid(s, K, eps, Mi, 2 * h, Y, U, threads)
            fine, edge, l1 = _so5_trapezoid(s, K, eps, Mi, h, Y, U, threads)
            if edge < 1e-3 * tol * max(1.0, l1):
                break
            Y *= 1.5
            U *= 1.5
        else:
            raise QuadratureError("contour box did not capture the integrand")
        integral = rg * fine
        # the coarse-fine gap bounds the coarse error, hence far more than the fine one
        ierr = abs(rg) * (abs(fine - coarse) + 10 * edge + _FLOOR * l1)
    six = np.exp(s * math.log(6.0))
    total = six * (pairwise_sum(ksum) + integral)
    scale = sum(abs(t) for t in ksum)
    err = abs(six) * (kerr + ierr + _FLOOR * scale)
    return ZetaEval(complex(total), float(err), "MellinBarnes")


def zeta_so5_continued(
    s: complex,
    K: int = 3,
    eps: float = 0.5,
    M: Optional[int] = None,
    tol: float = 1e-10,
    threads: int = 1,
) -> ZetaEval:
    """Meromorphic continuation of the so(5) zeta to Re s > (1 - K + eps)/3."""
    s = complex(s)
    if K < 1:
        raise ValueError("K must be positive")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if not s.real > (1 - K + eps) / 3:
        raise DivergentRegionError(f"K={K}, eps={eps} reaches only Re s > {(1 - K + eps) / 3:.4g}")
    p = _so5_true_pole(s)
    if p is not None:
        raise PoleProximityError(f"s={s} lies within {_POLE_GUARD} of the pole {p:.6g}")
    fn = lambda x: _so5_core(x, K, eps, M, tol, threads)  # noqa: E731
    if _piece_singular(s):
        return _circle_mean(fn, s)
    return fn(s)


def zeta_so5(s: complex, method: str = "auto", tol: float = 1e-10, **kw) -> ZetaEval:
    s = complex(s)
    if method == "direct" or (method == "auto" and s.real >= 0.6):
        return zeta_so5_direct(s, tol=tol)
    if method in ("mb", "auto"):
        return zeta_so5_continued(s, tol=tol, **kw)
    raise ValueError(f"unknown method {method!r}")


# -------------------------------------------------------------------- su(3)


def zeta_su3_continued(s: complex, M: Optional[int] = None, eps: float = 0.5, tol: float = 1e-10) -> ZetaEval:
    """2^s zeta_MT(s, s, s) continued; poles near 2/3 and 1/2 are rejected."""
    s = complex(s)
    if _near(s, [2 / 3, 0.5]):
        raise PoleProximityError(f"s={s} is within {_POLE_GUARD} of a pole")

    def fn(x):
        r = zeta_mt2_mb(x, x, x, M=M, eps=eps, tol=tol)
        f = np.exp(x * math.log(2.0))
        return ZetaEval(complex(f * r.value), float(abs(f) * r.err_estimate), r.method)

    # pieces are singular at s = 1 - 2j/... ; the common offenders near the origin:
    if _near(s, [0.0, 1.0, 1 / 3, -0.5]):
        return _circle_mean(fn, s)
    try:
        return fn(s)
    except PoleProximityError:
        return _circle_mean(fn, s)


# ----------------------------------------------------------------- residues


def residue_extract(
    g: Callable[[float], float],
    s0: float,
    h_grid: Optional[Sequence[float]] = None,
    h0: float = 0.2,
    points: int = 4,
) -> tuple[float, float]:
    """Residue of g at a simple pole s0 by polynomial extrapolation of h g(s0+h) to h = 0.

    Returns (estimate, error proxy).  The proxy is the larger change in the
    extrapolant when either the largest or the smallest h is left out.  If
    the corrections grow as the grid is refined (no simple pole, or noise
    swamping the values) ``ExtrapolationError`` is raised.
    """
    hs = list(h_grid) if h_grid is not None else [h0 * 2.0**-j for j in range(points)]
    if len(hs) < 3:
        raise ValueError("need at least three grid points")
    ys = [h * float(np.real(g(s0 + h))) for h in hs]

    def neville(xs, vs):
        p = list(vs)
        n = len(xs)
        for lvl in range(1, n):
            for i in range(n - lvl):
                p[i] = (xs[i + lvl] * p[i] - xs[i] * p[i + 1]) / (xs[i + lvl] - xs[i])
        return p[0]

    # extrapolants from the first k points, k = 2..n, as the grid is refined
    ext = [neville(hs[:k], ys[:k]) for k in range(2, len(hs) + 1)]
    full = ext[-1]
    corr = [abs(b - a) for a, b in zip(ext, ext[1:])]
    noise = 1e-12 * max(1.0, abs(full))
    if corr[-1] > noise and corr[-1] >= corr[-2]:
        raise ExtrapolationError(f"extrapolants diverge: corrections {corr[-2]:.3e} then {corr[-1]:.3e}")
    drop_first = neville(hs[1:], ys[1:])
    return float(full), float(max(corr[-1], abs(full - drop_first)))


def so5_residue_half(h0: float = 0.05) -> tuple[float, float]:
    """Residue at 1/2 from the direct sum."""
    return residue_extract(lambda s: zeta_so5_direct(s, tol=1e-8).value.real, 0.5, h0=h0)


def so5_residue_third(h0: float = -0.02, **kw) -> tuple[float, float]:
    """Residue at 1/3 from the continuation (the pole at 1/2 sits 1/6 away)."""
    return residue_extract(lambda s: zeta_so5_continued(s, **kw).value.real, 1 / 3, h0=h0)


def _derivative_at_zero(fn: Callable[[complex], ZetaEval], hs=(1e-2, 5e-3)) -> tuple[float, float]:
    """Central differences at h and h/2 combined by Richardson.

    The error proxy is the gap to the same combination at 2h and h.
    """
    h0, h1 = hs
    cache = {}

    def diff(h):
        if h not in cache:
            cache[h] = (fn(h).value.real - fn(-h).value.real) / (2 * h)
        return cache[h]

    def rich(a, b):
        r = (a / b) ** 2
        return (r * diff(b) - diff(a)) / (r - 1)

    best = rich(h0, h1)
    return best, abs(best - rich(2 * h0, h0))


@lru_cache(maxsize=None)
def zeta_so5_deriv0() -> tuple[float, float]:
    """Numeric derivative of the so(5) zeta at 0, with a stability estimate."""
    return _derivative_at_zero(lambda s: zeta_so5_continued(s))


@lru_cache(maxsize=None)
def su3_numeric_data() -> dict:
    """Residues at 2/3 and 1/2, value and derivative at 0 of 2^s zeta_MT(s, s, s)."""
    c = gamma(1 / 3).real
    omega_2_3 = 2 ** (2 / 3) * c * c / (3 * gamma(2 / 3).real)
    fn = lambda s: zeta_su3_continued(s)  # noqa: E731
    om_half, om_err = residue_extract(lambda s: fn(s).value.real, 0.5, h0=-0.04)
    L0 = fn(0.0)
    d0, d0_err = _derivative_at_zero(fn)
    return {
        "omega_2_3": omega_2_3,
        "omega_1_2": om_half,
        "omega_1_2_err": om_err,
        "L0": L0.value.real,
        "L0_err": L0.err_estimate,
        "L0prime": d0,
        "L0prime_err": d0_err,
    }
