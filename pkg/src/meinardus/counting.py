"""Exact coefficients of prod_n (1 - q^n)^(-f(n)).

Two production paths share the Cython kernel when it is built:

* ``coeffs_convolution``: n p(n) = sum_k c(k) p(n-k) with c(k) = sum_{d|k} d f(d);
* ``coeffs_pentagonal``: Euler's recurrence, partitions only.

``coeffs_oracle`` multiplies the factors out directly and shares no code with
either.  Set ``MEINARDUS_PURE=1`` to force the pure-Python recurrences.
"""

from __future__ import annotations

import hashlib
import io
import math
import os
import struct
from dataclasses import dataclass
from operator import mul
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .model import Kind, WeightFunction, parse_preset

try:
    if os.environ.get("MEINARDUS_PURE"):
        raise ImportError("pure mode requested")
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

__all__ = [
    "CoeffTable",
    "weight_table",
    "divisor_weight",
    "coeffs_convolution",
    "coeffs_pentagonal",
    "coeffs_oracle",
    "cached_coeffs",
    "kernel_available",
    "ORACLE_MAX_N",
    "CacheCorruptError",
]

ORACLE_MAX_N = 2000


def kernel_available() -> bool:
    return _kernels is not None


@dataclass(frozen=True)
class CoeffTable:
    N: int
    values: tuple[int, ...]
    weight: WeightFunction

    def __post_init__(self):
        if len(self.values) != self.N + 1:
            raise ValueError("table length must be N + 1")
        if self.values[0] != 1:
            raise ValueError("p(0) must be 1")

    def __getitem__(self, n):
        return self.values[n]

    def __len__(self):
        return len(self.values)

    def truncate(self, N: int) -> "CoeffTable":
        if N > self.N:
            raise ValueError(f"table only reaches {self.N}")
        return CoeffTable(N, self.values[: N + 1], self.weight)

    def to_csv(self, dest=None, rows: Optional[Sequence[int]] = None) -> str:
        buf = io.StringIO()
        buf.write("n,p_f_n\n")
        for n in range(self.N + 1) if rows is None else rows:
            buf.write(f"{n},{self.values[n]}\n")
        text = buf.getvalue()
        if dest is not None:
            Path(dest).write_text(text)
        return text

    @classmethod
    def from_csv(cls, text: str, weight: WeightFunction) -> "CoeffTable":
        lines = text.strip().splitlines()
        if not lines or lines[0] != "n,p_f_n":
            raise ValueError("missing 'n,p_f_n' header")
        vals = []
        for i, line in enumerate(lines[1:]):
            n, v = line.split(",")
            if int(n) != i:
                raise ValueError("CSV rows must be consecutive from 0")
            vals.append(int(v))
        return cls(len(vals) - 1, tuple(vals), weight)


def weight_table(w: WeightFunction, N: int) -> list[int]:
    """f(1), ..., f(N)."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return w.values(N)


def divisor_weight(w: WeightFunction, N: int) -> list[int]:
    """c(0..N) with c(0) = 0 and c(k) = sum_{d | k} d f(d)."""
    c = [0] * (N + 1)
    if N == 0:
        return c
    for d, fd in enumerate(weight_table(w, N), start=1):
        if fd:
            v = d * fd
            for k in range(d, N + 1, d):
                c[k] += v
    return c


def _log_bound(w: WeightFunction, N: int) -> float:
    """Upper bound for max_{n<=N} log p(n): min over rho of Phi_N(rho) + N rho."""
    f = np.asarray(weight_table(w, N), dtype=float)
    m = np.arange(1, N + 1, dtype=float)
    nz = f > 0
    f, m = f[nz], m[nz]

    def g(lr):
        r = math.exp(lr)
        return float(np.sum(-f * np.log1p(-np.exp(-m * r)))) + N * r

    # convex in rho; golden section on log rho
    a, b = math.log(1e-7), math.log(50.0)
    phi = (math.sqrt(5) - 1) / 2
    x1, x2 = b - phi * (b - a), a + phi * (b - a)
    g1, g2 = g(x1), g(x2)
    for _ in range(100):
        if g1 < g2:
            b, x2, g2 = x2, x1, g1
            x1 = b - phi * (b - a)
            g1 = g(x1)
        else:
            a, x1, g1 = x1, x2, g2
            x2 = a + phi * (b - a)
            g2 = g(x2)
    return min(g1, g2)


def _limb_budget(w: WeightFunction, N: int) -> int:
    bits = _log_bound(w, N) * 1.01 / math.log(2) + 64
    return int(math.ceil(bits / 32)) + 2


def _rows_to_ints(P: np.ndarray, widths: np.ndarray) -> tuple[int, ...]:
    P = P.astype("<u4", copy=False)
    return tuple(int.from_bytes(P[i, : widths[i]].tobytes(), "little") for i in range(len(widths)))


def _convolution_py(c: list[int], N: int) -> list[int]:
    p = [1] + [0] * N
    crev = c[:0:-1]  # crev[i] = c[N - i]
    for n in range(1, N + 1):
        s = sum(map(mul, p[:n], crev[N - n : N]))
        q, r = divmod(s, n)
        if r:
            raise ArithmeticError(f"inexact division at n={n}")
        p[n] = q
    return p


def _pentagonal_py(N: int) -> list[int]:
    p = [1] + [0] * N
    for n in range(1, N + 1):
        s = 0
        j = 1
        while True:
            g = j * (3 * j - 1) // 2
            if g > n:
                break
            t = p[n - g] + (p[n - g - j] if g + j <= n else 0)
            s = s + t if j & 1 else s - t
            j += 1
        p[n] = s
    return p


def coeffs_convolution(w: WeightFunction, N: int, backend: str = "auto") -> CoeffTable:
    """Exact p_f(0..N) by the divisor-sum recurrence.

    ``backend`` is "auto", "kernel" or "python".
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N == 0:
        return CoeffTable(0, (1,), w)
    c = divisor_weight(w, N)
    use_kernel = _select(backend) and max(c) < 2**32
    if backend == "kernel" and not use_kernel:
        raise ValueError("kernel needs c(k) < 2**32")
    if use_kernel:
        P, widths = _kernels.convolution(np.asarray(c, dtype=np.uint32), N, _limb_budget(w, N))
        vals = _rows_to_ints(P, widths)
    else:
        vals = tuple(_convolution_py(c, N))
    return CoeffTable(N, vals, w)


def coeffs_pentagonal(N: int, backend: str = "auto") -> CoeffTable:
    """Ordinary partition numbers p(0..N)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    w = WeightFunction(Kind.ONES)
    if N == 0:
        return CoeffTable(0, (1,), w)
    if _select(backend):
        P, widths = _kernels.pentagonal(N, _limb_budget(w, N))
        vals = _rows_to_ints(P, widths)
    else:
        vals = tuple(_pentagonal_py(N))
    return CoeffTable(N, vals, w)


def _select(backend: str) -> bool:
    if backend == "python":
        return False
    if backend == "kernel":
        if _kernels is None:
            raise RuntimeError("compiled kernel is not available")
        return True
    if backend != "auto":
        raise ValueError(f"unknown backend {backend!r}")
    return _kernels is not None


def coeffs_oracle(w: WeightFunction, N: int) -> CoeffTable:
    """Independent check: multiply the truncated factors out as polynomials."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to N <= {ORACLE_MAX_N}")
    poly = [1] + [0] * N
    if N == 0:
        return CoeffTable(0, (1,), w)
    for m, fm in enumerate(w.values(N), start=1):
        if fm == 0:
            continue
        # (1 - q^m)^(-fm) = sum_j binom(fm + j - 1, j) q^(mj)
        series = [math.comb(fm + j - 1, j) for j in range(N // m + 1)]
        new = [0] * (N + 1)
        for i in range(N + 1):
            if poly[i]:
                pi = poly[i]
                for j in range((N - i) // m + 1):
                    new[i + j * m] += pi * series[j]
        poly = new
    return CoeffTable(N, tuple(poly), w)


# ---------------------------------------------------------------- caching

_MAGIC = b"MEINCOF1"


class CacheCorruptError(ValueError):
    """A cached coefficient file failed validation."""


def _code_hash() -> str:
    h = hashlib.sha256()
    here = Path(__file__).parent
    for name in ("counting.py", "model.py", "_kernels.pyx"):
        p = here / name
        if p.exists():
            h.update(p.read_bytes())
    return h.hexdigest()[:16]


def _cache_key(w: WeightFunction) -> str:
    if w.kind is Kind.EXPLICIT:
        digest = hashlib.sha256(repr(w.table).encode()).hexdigest()[:12]
        return f"explicit-{digest}"
    return w.name.replace(":", "-")


def write_binary(table: CoeffTable, path, key: str) -> None:
    body = io.BytesIO()
    kb = key.encode()
    body.write(_MAGIC)
    body.write(struct.pack("<I", len(kb)))
    body.write(kb)
    body.write(struct.pack("<Q", len(table.values)))
    for v in table.values:
        b = v.to_bytes((v.bit_length() + 7) // 8, "little")
        body.write(struct.pack("<I", len(b)))
        body.write(b)
    data = body.getvalue()
    tmp = Path(str(path) + ".tmp")
    tmp.write_bytes(data + hashlib.sha256(data).digest())
    os.replace(tmp, path)


def read_binary(path, key: str, weight: WeightFunction) -> CoeffTable:
    raw = Path(path).read_bytes()
    data, digest = raw[:-32], raw[-32:]
    if len(raw) < 32 or hashlib.sha256(data).digest() != digest:
        raise CacheCorruptError(f"cache file {path} failed its checksum")
    if data[:8] != _MAGIC:
        raise CacheCorruptError(f"cache file {path} has a bad header")
    pos = 8
    (klen,) = struct.unpack_from("<I", data, pos)
    pos += 4
    if data[pos : pos + klen].decode() != key:
        raise CacheCorruptError(f"cache file {path} belongs to another key")
    pos += klen
    (count,) = struct.unpack_from("<Q", data, pos)
    pos += 8
    vals = []
    for _ in range(count):
        (ln,) = struct.unpack_from("<I", data, pos)
        pos += 4
        vals.append(int.from_bytes(data[pos : pos + ln], "little"))
        pos += ln
    return CoeffTable(count - 1, tuple(vals), weight)


def cached_coeffs(w: WeightFunction | str, N: int, cache_dir=None) -> CoeffTable:
    """Exact table through N, reusing any cached table that reaches N.

    ``cache_dir`` defaults to $MEINARDUS_CACHE; with neither set nothing is
    written.  A corrupted cache file raises ``CacheCorruptError``.
    """
    if isinstance(w, str):
        w = parse_preset(w)
    cache_dir = os.environ.get("MEINARDUS_CACHE") or cache_dir
    compute = (lambda: coeffs_pentagonal(N)) if w.kind is Kind.ONES else (lambda: coeffs_convolution(w, N))
    if not cache_dir:
        return compute()
    d = Path(cache_dir)
    d.mkdir(parents=True, exist_ok=True)
    key = _cache_key(w)
    h = _code_hash()
    best = None
    for p in d.glob(f"{key}_*_{h}.bin"):
        try:
            n_have = int(p.name[len(key) + 1 :].split("_")[0])
        except ValueError:
            continue
        if n_have >= N and (best is None or n_have < best[0]):
            best = (n_have, p)
    full_key = f"{key}|{h}"
    if best is not None:
        return read_binary(best[1], full_key, w).truncate(N)
    table = compute()
    write_binary(table, d / f"{key}_{N}_{h}.bin", full_key)
    return table
