"""Shared data model: weight functions, L-function data, exponent lattices,
asymptotic-model records.

Exponents are kept as :class:`fractions.Fraction` wherever they are rational
so that lattice enumerations dedupe exactly.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

__all__ = [
    "Kind",
    "WeightFunction",
    "LSpec",
    "ExponentSets",
    "AsymptoticModel",
    "parse_preset",
    "preset_lspec",
    "exponent_sets",
    "polygonal_number",
    "leading_pole",
]


class Kind(enum.Enum):
    ONES = "ones"
    PLANE = "plane"
    POLYGONAL = "polygonal"
    SU3 = "su3"
    SO5 = "so5"
    EXPLICIT = "explicit"


def polygonal_number(k: int, m: int) -> int:
    return ((k - 2) * m * m + (4 - k) * m) // 2


def _su3_dim(j: int, k: int) -> int:
    return j * k * (j + k) // 2


def _so5_dim(j: int, k: int) -> int:
    return j * k * (j + k) * (j + 2 * k) // 6


def _lattice_counts(dim: Callable[[int, int], int], N: int) -> list[int]:
    # dim is increasing in each argument, so both loops stop at the first overshoot
    f = [0] * (N + 1)
    k = 1
    while dim(1, k) <= N:
        j = 1
        while True:
            d = dim(j, k)
            if d > N:
                break
            f[d] += 1
            j += 1
        k += 1
    return f[1:]


@dataclass(frozen=True)
class WeightFunction:
    """Multiplicity sequence f(n) of the product prod (1 - q^n)^(-f(n)).

    ``table`` holds f(1..len) for explicit weights; beyond it ``tail`` is used
    when given, otherwise f vanishes.
    """

    kind: Kind
    k: Optional[int] = None
    table: Optional[tuple[int, ...]] = None
    tail: Optional[Callable[[int], int]] = field(default=None, compare=False)
    source: Optional[str] = None

    def __post_init__(self):
        if self.kind is Kind.POLYGONAL and (self.k is None or self.k < 3):
            raise ValueError(f"polygonal weight needs k >= 3, got {self.k}")
        if self.kind is Kind.EXPLICIT:
            if self.table is None:
                raise ValueError("explicit weight needs a table")
            if any(v < 0 for v in self.table):
                raise ValueError("weights must be nonnegative")
            if not any(self.table) and self.tail is None:
                raise ValueError("at least one weight must be positive")

    @property
    def name(self) -> str:
        if self.kind is Kind.POLYGONAL:
            return f"polygonal:{self.k}"
        if self.kind is Kind.EXPLICIT:
            return f"explicit:{self.source or '<table>'}"
        return self.kind.value

    def values(self, N: int) -> list[int]:
        """f(1), ..., f(N)."""
        if N < 0:
            raise ValueError("N must be nonnegative")
        kind = self.kind
        if kind is Kind.ONES:
            return [1] * N
        if kind is Kind.PLANE:
            return list(range(1, N + 1))
        if kind is Kind.POLYGONAL:
            f = [0] * (N + 1)
            m = 1
            while (p := polygonal_number(self.k, m)) <= N:
                f[p] += 1
                m += 1
            return f[1:]
        if kind is Kind.SU3:
            return _lattice_counts(_su3_dim, N)
        if kind is Kind.SO5:
            return _lattice_counts(_so5_dim, N)
        t = list(self.table[:N])
        for n in range(len(t) + 1, N + 1):
            t.append(int(self.tail(n)) if self.tail else 0)
        return t

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ValueError("f is defined on positive integers")
        return self.values(n)[-1]


def _read_explicit(path: str) -> WeightFunction:
    p = Path(path)
    if not p.is_file():
        raise ValueError(f"explicit weight file not found: {path}")
    entries: dict[int, int] = {}
    for lineno, line in enumerate(p.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'n f(n)'")
        n, v = int(parts[0]), int(parts[1])
        if n < 1 or v < 0:
            raise ValueError(f"{path}:{lineno}: need n >= 1 and f(n) >= 0")
        entries[n] = v
    if not entries:
        raise ValueError(f"{path}: no entries")
    top = max(entries)
    return WeightFunction(Kind.EXPLICIT, table=tuple(entries.get(n, 0) for n in range(1, top + 1)), source=path)


def parse_preset(name: str) -> WeightFunction:
    """Parse "ones", "plane", "polygonal:k", "su3", "so5" or "explicit:<path>"."""
    if name.startswith("polygonal:"):
        try:
            k = int(name.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad polygonal preset {name!r}") from None
        return WeightFunction(Kind.POLYGONAL, k=k)
    if name.startswith("explicit:"):
        return _read_explicit(name.split(":", 1)[1])
    simple = {"ones": Kind.ONES, "plane": Kind.PLANE, "su3": Kind.SU3, "so5": Kind.SO5}
    if name not in simple:
        raise ValueError(f"unknown preset {name!r}")
    return WeightFunction(simple[name])


@dataclass(frozen=True)
class LSpec:
    """Analytic data of L_f(s) = sum f(n) n^-s.

    ``positive_poles`` holds (location, residue) pairs sorted by decreasing
    location; ``lstar_poles`` is the pole set of Gamma(s) zeta(s+1) L_f(s)
    above -R, always containing 0.  Names in ``numeric`` flag values that
    were computed numerically rather than taken from a closed form.
    """

    positive_poles: tuple[tuple[Fraction, float], ...]
    lstar_poles: tuple[Fraction, ...]
    L0: float
    L0prime: float
    R: Fraction
    numeric: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.positive_poles:
            raise ValueError("L_f needs at least one positive pole")
        poles = tuple(sorted(((Fraction(g), float(w)) for g, w in self.positive_poles), reverse=True))
        object.__setattr__(self, "positive_poles", poles)
        object.__setattr__(self, "lstar_poles", tuple(sorted({Fraction(p) for p in self.lstar_poles}, reverse=True)))
        object.__setattr__(self, "R", Fraction(self.R))
        if poles[0][0] <= 0:
            raise ValueError("largest pole must be positive")
        if self.R <= 0:
            raise ValueError("R must be positive")

    @property
    def alpha(self) -> Fraction:
        return self.positive_poles[0][0]


def _lspec_ones() -> LSpec:
    return LSpec(((Fraction(1), 1.0),), (1, 0, -1), -0.5, -0.5 * math.log(2 * math.pi), Fraction(3, 2))


def _lspec_plane() -> LSpec:
    from .special import constants

    # L_f = zeta(s-1): L(0) = zeta(-1), L'(0) = zeta'(-1)
    return LSpec(((Fraction(2), 1.0),), (2, 0, -2), -1.0 / 12.0, constants().zeta_prime_minus1, Fraction(5, 2))


def _lspec_polygonal(k: int) -> LSpec:
    L0 = 1.0 / (2 - k)
    L0p = math.log((k - 2) / 2) / (k - 2) + math.lgamma(2 / (k - 2)) - math.log(2 * math.pi)
    res = math.sqrt(1.0 / (2 * (k - 2)))
    return LSpec(((Fraction(1, 2), res),), (Fraction(1, 2), 0, Fraction(-1, 2), -1), L0, L0p, Fraction(3, 2))


def _lspec_so5() -> LSpec:
    from .special import constants
    from .witten import zeta_so5_deriv0

    c = constants()
    w_half = math.sqrt(3) * c.gamma_quarter**2 / (8 * math.sqrt(math.pi))
    w_third = (2 ** (1 / 3) + 1) * 3 ** (-2 / 3) * c.zeta_1_3
    return LSpec(
        ((Fraction(1, 2), w_half), (Fraction(1, 3), w_third)),
        (Fraction(1, 2), Fraction(1, 3), 0, Fraction(-1, 3)),
        3 / 8,
        zeta_so5_deriv0()[0],
        Fraction(1),
        numeric=frozenset({"L0prime"}),
    )


def _lspec_su3() -> LSpec:
    from .witten import su3_numeric_data

    d = su3_numeric_data()
    return LSpec(
        ((Fraction(2, 3), d["omega_2_3"]), (Fraction(1, 2), d["omega_1_2"])),
        (Fraction(2, 3), Fraction(1, 2), 0, Fraction(-1, 2)),
        d["L0"],
        d["L0prime"],
        Fraction(1),
        numeric=frozenset({"omega_1_2", "L0", "L0prime"}),
    )


def leading_pole(w: WeightFunction) -> tuple[Fraction, float]:
    """(alpha, residue of L_f at alpha) in closed form for every named preset."""
    kind = w.kind
    if kind is Kind.ONES:
        return Fraction(1), 1.0
    if kind is Kind.PLANE:
        return Fraction(2), 1.0
    if kind is Kind.POLYGONAL:
        return Fraction(1, 2), math.sqrt(1.0 / (2 * (w.k - 2)))
    if kind is Kind.SO5:
        return Fraction(1, 2), math.sqrt(3) * math.gamma(0.25) ** 2 / (8 * math.sqrt(math.pi))
    if kind is Kind.SU3:
        # 2^s zeta_MT(s,s,s): the 1/(3s-2) pole of the Gamma-zeta main term
        return Fraction(2, 3), 2 ** (2 / 3) * math.gamma(1 / 3) ** 2 / (3 * math.gamma(2 / 3))
    raise ValueError("explicit weights need a caller-supplied LSpec")


_LSPEC_CACHE: dict = {}


def preset_lspec(w: WeightFunction | Kind | str) -> LSpec:
    """Analytic data for a named preset.  Explicit weights have none."""
    if isinstance(w, str):
        w = parse_preset(w)
    if isinstance(w, Kind):
        if w is Kind.POLYGONAL:
            raise ValueError("polygonal preset needs k; pass a WeightFunction")
        w = WeightFunction(w) if w is not Kind.EXPLICIT else None
        if w is None:
            raise ValueError("explicit weights need a caller-supplied LSpec")
    if w.kind is Kind.EXPLICIT:
        raise ValueError("explicit weights need a caller-supplied LSpec")
    key = (w.kind, w.k)
    if key not in _LSPEC_CACHE:
        build = {
            Kind.ONES: _lspec_ones,
            Kind.PLANE: _lspec_plane,
            Kind.SO5: _lspec_so5,
            Kind.SU3: _lspec_su3,
        }.get(w.kind)
        _LSPEC_CACHE[key] = build() if build else _lspec_polygonal(w.k)
    return _LSPEC_CACHE[key]


@dataclass(frozen=True)
class ExponentSets:
    L_set: tuple[Fraction, ...]  # descending
    M_set: tuple[Fraction, ...]  # ascending
    N_set: tuple[Fraction, ...]  # ascending

    def next_error_exponent(self) -> Fraction:
        """Smallest positive element of M + N."""
        pos = [m + n for m in self.M_set for n in self.N_set if m + n > 0]
        if not pos:
            raise ValueError("M + N has no positive element in its window")
        return min(pos)


def _semigroup(gens, lo: Fraction, hi: Fraction, include_hi: bool) -> set[Fraction]:
    """All sums of nonnegative multiples of positive ``gens`` inside [lo, hi)."""
    gens = sorted({g for g in gens if g > 0})
    inside = (lambda x: x <= hi) if include_hi else (lambda x: x < hi)
    out = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if inside(y) and y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
    return {x for x in out if x >= lo}


def exponent_sets(spec: LSpec) -> ExponentSets:
    P = spec.lstar_poles
    if Fraction(0) not in P:
        raise ValueError("the pole set of L*_f must contain 0")
    a = spec.alpha
    a1 = a + 1
    R = spec.R
    g = [(mu + 1) / a1 - 1 for mu in P]  # all <= 0

    # L: shifts of P/(a+1) by nonpositive generators, inside (-R/(a+1), a/(a+1)]
    lo, hi = -R / a1, a / a1
    neg = [-x for x in g]
    L = set()
    for mu in P:
        base = mu / a1
        if base > hi:
            continue
        for d in _semigroup(neg, Fraction(0), base - lo, include_hi=False):
            L.add(base - d)
    L = {x for x in L if lo < x <= hi}

    M = _semigroup([a / a1] + neg, Fraction(0), (R + a) / a1, include_hi=False)
    theta = [-x for x in L if 0 < -x < R / a1]
    N = _semigroup(theta, Fraction(0), R / a1, include_hi=False)
    return ExponentSets(tuple(sorted(L, reverse=True)), tuple(sorted(M)), tuple(sorted(N)))


@dataclass(frozen=True)
class AsymptoticModel:
    """p_f(n) ~ C n^-b exp(sum A_j n^alpha_j)."""

    preset: str
    alpha: Fraction
    exp_terms: tuple[tuple[float, Fraction], ...]
    prefactor_C: float
    prefactor_b: float
    next_error_exponent: Fraction
    b_exact: Optional[Fraction] = None

    def __post_init__(self):
        exps = [e for _, e in self.exp_terms]
        if any(x <= y for x, y in zip(exps, exps[1:])):
            raise ValueError("exponents must be strictly decreasing")

    def with_terms(self, terms) -> "AsymptoticModel":
        return replace(self, exp_terms=tuple(terms))
