"""Meinardus-type asymptotic models and their diagnostics.

A model is p_f(n) ~ C n^-b exp(sum_j A_j n^alpha_j).  With one positive pole
alpha of L_f there is a single exponential term; with a second pole beta the
exponential carries l+1 terms whose exponents step down by (alpha-beta)/(alpha+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .model import AsymptoticModel, LSpec, WeightFunction, exponent_sets, parse_preset, preset_lspec
from .saddle import ell_for, k_constants, pole_constants

__all__ = [
    "TwoPoleConstants",
    "EvalResult",
    "FitResult",
    "one_pole_model",
    "two_pole_model",
    "two_pole_constants",
    "build_model",
    "model_for_preset",
    "evaluate",
    "error_exponent_fit",
    "model_to_json",
    "binom_neg",
]


@dataclass(frozen=True)
class TwoPoleConstants:
    c1: float
    c2: float
    c3: float
    K: tuple[float, ...]
    A: tuple[float, ...]
    ell: int


def binom_neg(x: float, m: int) -> float:
    """binom(x, m) = Gamma(x+1) / (m! Gamma(x-m+1)), Gamma on both sides."""
    if float(x).is_integer():
        # Gamma ratio is 0/0 at integers; use the finite product there
        out = 1.0
        for j in range(m):
            out *= (x - j) / (j + 1)
        return out
    lg1, s1 = math.lgamma(x + 1), math.copysign(1.0, math.gamma(x + 1))
    lg2, s2 = math.lgamma(x - m + 1), math.copysign(1.0, math.gamma(x - m + 1))
    return s1 * s2 * math.exp(lg1 - lg2 - math.lgamma(m + 1))


def _weighted_compositions(total: int, max_part: int):
    """Yield j = (j_1..j_max_part) with sum_i i*j_i = total."""

    def rec(i, rem):
        if i > max_part:
            if rem == 0:
                yield ()
            return
        for ji in range(rem // i + 1):
            for rest in rec(i + 1, rem - i * ji):
                yield (ji,) + rest

    yield from rec(1, total)


def _power_sum(K, expo: float, weight: int, ell: int, c1: float, a1: float) -> float:
    """sum_m binom(expo, m) sum_{|j|=m, sum i j_i = weight} multinom * prod K_{i+1}^{j_i} / c1^{m/(a+1)}."""
    total = 0.0
    for j in _weighted_compositions(weight, ell):
        m = sum(j)
        if m == 0 or m > ell:
            continue
        mult = math.factorial(m)
        prod = 1.0
        for i, ji in enumerate(j, start=1):
            mult //= math.factorial(ji)
            if ji:
                prod *= K[i] ** ji
        total += binom_neg(expo, m) * mult * prod / c1 ** (m / a1)
    return total


def two_pole_constants(spec: LSpec) -> TwoPoleConstants:
    if len(spec.positive_poles) != 2:
        raise ValueError("need exactly two positive poles")
    (alpha, _), (beta, _) = spec.positive_poles
    ell = ell_for(alpha, beta)
    if ell > 4:
        raise ValueError(f"l = {ell} needs saddle constants beyond K5")
    c1, c2, c3 = pole_constants(spec)
    a, b = float(alpha), float(beta)
    a1 = a + 1
    K = k_constants(alpha, beta, c1, c2)
    A = [(1 + 1 / a) * c1 ** (1 / a1), c2 / (b * c1 ** (b / a1))]
    for k in range(3, ell + 2):
        Ak = K[k - 1]
        Ak += c1 ** (1 / a1) / a * _power_sum(K, -a, k - 1, ell, c1, a1)
        Ak += c2 / (b * c1 ** (b / a1)) * _power_sum(K, -b, k - 2, ell, c1, a1)
        A.append(Ak)
    return TwoPoleConstants(c1, c2, c3, K, tuple(A[: ell + 1]), ell)


def _prefactor(spec: LSpec, c1: float):
    a = float(spec.alpha)
    C = math.exp(spec.L0prime) * c1 ** ((0.5 - spec.L0) / (a + 1)) / math.sqrt(2 * math.pi * (a + 1))
    b = (1 - spec.L0 + a / 2) / (a + 1)
    b_exact = None
    L0 = Fraction(spec.L0).limit_denominator(1000)
    if abs(float(L0) - spec.L0) < 1e-13 and "L0" not in spec.numeric:
        b_exact = (1 - L0 + spec.alpha / 2) / (spec.alpha + 1)
    return C, b, b_exact


def one_pole_model(spec: LSpec, preset: str = "custom") -> AsymptoticModel:
    if len(spec.positive_poles) != 1:
        raise ValueError("one_pole_model needs exactly one positive pole")
    c1 = pole_constants(spec)[0]
    a = spec.alpha
    A1 = (1 + 1 / float(a)) * c1 ** (1 / float(a + 1))
    C, b, b_exact = _prefactor(spec, c1)
    nxt = exponent_sets(spec).next_error_exponent()
    return AsymptoticModel(preset, a, ((A1, a / (a + 1)),), C, b, nxt, b_exact)


def two_pole_model(spec: LSpec, preset: str = "custom") -> AsymptoticModel:
    tp = two_pole_constants(spec)
    (alpha, _), (beta, _) = spec.positive_poles
    delta = (alpha - beta) / (alpha + 1)
    lead = alpha / (alpha + 1)
    terms = tuple((A, lead - j * delta) for j, A in enumerate(tp.A))
    C, b, b_exact = _prefactor(spec, tp.c1)
    nxt = exponent_sets(spec).next_error_exponent()
    return AsymptoticModel(preset, alpha, terms, C, b, nxt, b_exact)


def build_model(spec: LSpec, preset: str = "custom") -> AsymptoticModel:
    if len(spec.positive_poles) == 1:
        return one_pole_model(spec, preset)
    if len(spec.positive_poles) == 2:
        return two_pole_model(spec, preset)
    raise ValueError("three or more positive poles are not supported")


def model_for_preset(w: WeightFunction | str) -> AsymptoticModel:
    if isinstance(w, str):
        w = parse_preset(w)
    return build_model(preset_lspec(w), w.name)


@dataclass(frozen=True)
class EvalResult:
    n: int
    log_value: float
    value: Optional[float]  # None when exp(log_value) overflows a double


def evaluate(model: AsymptoticModel, n: int) -> EvalResult:
    if n < 1:
        raise ValueError("n must be at least 1")
    lv = math.log(model.prefactor_C) - model.prefactor_b * math.log(n)
    for A, e in model.exp_terms:
        lv += A * n ** float(e)
    value = math.exp(lv) if lv < 709.0 else None
    return EvalResult(n, lv, value)


@dataclass(frozen=True)
class FitResult:
    slope: float
    r2: float
    n: tuple[int, ...]
    rel_error: tuple[float, ...]


def error_exponent_fit(model: AsymptoticModel, table, n_grid: Sequence[int]) -> FitResult:
    """Least-squares slope of log|p(n)/p_hat(n) - 1| against log n.

    ``table`` is a CoeffTable or any mapping n -> p(n).
    """
    ns = sorted(set(int(n) for n in n_grid))
    if len(ns) < 3:
        raise ValueError("need at least three grid points")
    rel = []
    for n in ns:
        d = math.log(table[n]) - evaluate(model, n).log_value
        r = math.expm1(d)
        if r == 0:
            raise ValueError(f"ratio is exactly 1 at n={n}")
        rel.append(abs(r))
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(rel))
    slope, icept = np.polyfit(x, y, 1)
    resid = y - (slope * x + icept)
    ss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss if ss > 0 else 1.0
    return FitResult(float(slope), r2, tuple(ns), tuple(rel))


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def model_to_json(model: AsymptoticModel) -> dict:
    return {
        "preset": model.preset,
        "alpha": float(model.alpha),
        "exp_terms": [[A, float(e)] for A, e in model.exp_terms],
        "exponents_exact": [_frac(e) for _, e in model.exp_terms],
        "C": model.prefactor_C,
        "b": model.prefactor_b,
        "b_exact": _frac(model.b_exact) if model.b_exact is not None else None,
        "next_error_exponent": float(model.next_error_exponent),
    }
