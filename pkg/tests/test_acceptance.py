"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import math
import os
import subprocess
import sys
import time
from pathlib import Path

import mpmath as mp
import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))
import tables  # noqa: E402

from meinardus.asymptotics import error_exponent_fit, evaluate, model_for_preset  # noqa: E402
from meinardus.counting import coeffs_convolution, coeffs_oracle, coeffs_pentagonal  # noqa: E402
from meinardus.lattice import zeta_Pk  # noqa: E402
from meinardus.model import parse_preset  # noqa: E402
from meinardus.saddle import cauchy_count  # noqa: E402
from meinardus.special import gamma, zeta  # noqa: E402
from meinardus.witten import (  # noqa: E402
    residue_extract,
    so5_residue_half,
    so5_residue_third,
    zeta_so5_continued,
    zeta_so5_direct,
)

ACCEPTANCE_RESULTS: dict[int, str] = {}

PRESETS = ["ones", "plane", "polygonal:3", "su3", "so5"]


def log_grid(a, b, k=8):
    return sorted({int(round(x)) for x in np.geomspace(a, b, k)})


def log_error(model, table, n):
    return math.log(table[n]) - evaluate(model, n).log_value


# ------------------------------------------------------------------ criteria


def c01_oracle():
    t = time.perf_counter()
    bad = []
    for name in PRESETS:
        w = parse_preset(name)
        if coeffs_convolution(w, 500).values != coeffs_oracle(w, 500).values:
            bad.append(name)
    dt = time.perf_counter() - t
    return not bad and dt < 60, f"mismatches={bad} time={dt:.1f}s"


def c02_pentagonal():
    ones = parse_preset("ones")
    same = coeffs_pentagonal(2000).values == coeffs_convolution(ones, 2000).values
    t = time.perf_counter()
    big = coeffs_pentagonal(100_000)
    dt = time.perf_counter() - t
    return same and big.N == 100_000 and dt < 60, f"equal@2000={same} N=1e5 in {dt:.1f}s"


def c03_cauchy():
    fails = []
    for name in PRESETS:
        w = parse_preset(name)
        exact = coeffs_convolution(w, 100)
        for n in range(1, 101):
            if cauchy_count(w, n).nearest != exact[n]:
                fails.append((name, n))
    return not fails, f"{5 * 100} coefficients, failures={fails[:5]}"


def c04_hardy_ramanujan():
    T = tables.ones()
    m = model_for_preset("ones")
    ratios = [math.exp(log_error(m, T, n)) for n in range(500, T.N + 1)]
    lo, hi = min(ratios), max(ratios)
    fit = error_exponent_fit(m, T, log_grid(1e3, 1e5))
    pred = -float(m.next_error_exponent)
    ok = 0.9 < lo and hi < 1.1 and abs(fit.slope + 0.5) <= 0.1 and pred == -0.5
    return ok, f"ratio in [{lo:.4f}, {hi:.4f}] slope={fit.slope:.4f} predicted={pred}"


def c05_plane():
    T = tables.table("plane")
    m = model_for_preset("plane")
    grid = log_grid(1e3, 2e4)
    fit = error_exponent_fit(m, T, grid)
    upper = [abs(math.expm1(log_error(m, T, n))) for n in grid[len(grid) // 2 :]]
    mono = all(x > y for x, y in zip(upper, upper[1:]))
    ok = abs(fit.slope + 2 / 3) <= 0.1 and mono
    return ok, f"slope={fit.slope:.4f} monotone={mono}"


def polygonal_closed_forms(k):
    z32 = mp.zeta(1.5)
    C = (
        mp.mpf(k - 2) ** (mp.mpf(6 - k) / (6 * (k - 2)))
        * mp.gamma(mp.mpf(2) / (k - 2))
        * z32 ** (mp.mpf(k) / (3 * (k - 2)))
        / (
            mp.mpf(2) ** (mp.mpf(3 * k - 2) / (2 * (k - 2)))
            * mp.sqrt(3)
            * mp.pi ** (mp.mpf(4 * k - 9) / (3 * (k - 2)))
        )
    )
    A = mp.mpf(3) / 2 * (mp.sqrt(mp.pi / (k - 2)) * z32) ** (mp.mpf(2) / 3)
    b = mp.mpf(5 * k - 6) / (6 * (k - 2))
    return float(C), float(A), float(b)


def polygonal_short_forms(k):
    z32, pi = mp.zeta(1.5), mp.pi
    return float(
        {
            3: z32 / (mp.mpf(2) ** 3.5 * mp.sqrt(3) * pi),
            4: z32 ** (mp.mpf(2) / 3) / (mp.mpf(2) ** (mp.mpf(7) / 3) * mp.sqrt(3) * pi ** (mp.mpf(7) / 6)),
            5: mp.gamma(mp.mpf(2) / 3)
            * z32 ** (mp.mpf(5) / 9)
            / (mp.mpf(2) ** (mp.mpf(13) / 6) * mp.mpf(3) ** (mp.mpf(4) / 9) * pi ** (mp.mpf(11) / 9)),
        }[k]
    )


def c06_polygonal():
    ok = True
    parts = []
    for k in (3, 4, 5):
        m = model_for_preset(f"polygonal:{k}")
        C, A, b = polygonal_closed_forms(k)
        C2 = polygonal_short_forms(k)
        rel = max(
            abs(m.prefactor_C / C - 1),
            abs(m.prefactor_C / C2 - 1),
            abs(m.exp_terms[0][0] / A - 1),
            abs(m.prefactor_b / b - 1),
        )
        fit = error_exponent_fit(m, tables.table(f"polygonal:{k}"), log_grid(1e3, 2e4))
        ok &= rel <= 1e-12 and abs(fit.slope + 1 / 3) <= 0.15
        parts.append(f"k={k}: rel={rel:.1e} slope={fit.slope:.3f}")
    return ok, "; ".join(parts)


def c07_so5():
    T = tables.table("so5")
    m = model_for_preset("so5")
    ns = [2000, 5000, 10_000, 20_000]
    err = np.array([abs(log_error(m, T, n)) for n in ns])
    dec = bool(np.all(np.diff(err) < 0))
    x = np.asarray(ns, float) ** (-1 / 9)
    coef = np.polyfit(x, err, 1)
    resid = err - np.polyval(coef, x)
    r2 = 1 - float(np.sum(resid**2)) / float(np.sum((err - err.mean()) ** 2))
    ok = dec and r2 >= 0.9 and len(m.exp_terms) == 4
    return ok, f"|log-error|={np.round(err, 4).tolist()} decreasing={dec} R2={r2:.4f}"


def c08_witten_golden():
    z0 = zeta_so5_continued(0.0).value.real
    r_half, _ = so5_residue_half()
    r_third, _ = so5_residue_third()
    want_half = math.sqrt(3) * math.gamma(0.25) ** 2 / (8 * math.sqrt(math.pi))
    want_third = (2 ** (1 / 3) + 1) * 3 ** (-2 / 3) * float(mp.zeta(mp.mpf(1) / 3))
    d = (abs(z0 - 0.375), abs(r_half - want_half), abs(r_third - want_third))
    ok = d[0] <= 1e-4 and d[1] <= 1e-3 and d[2] <= 1e-3
    return ok, "deviations at 0, 1/2, 1/3 = " + ", ".join(f"{x:.1e}" for x in d)


def c09_continuation():
    pts = [0.6, 0.75 + 1j, 0.9 - 2j, 1.1 + 0.5j, 1.25 + 3j, 1.4 - 1j, 1.6, 1.75 + 2j, 1.9 - 0.5j, 2 + 1j]
    worst = 0.0
    ok = True
    for s in pts:
        d, m = zeta_so5_direct(s), zeta_so5_continued(s)
        gap = abs(d.value - m.value)
        ok &= gap <= d.err_estimate + m.err_estimate
        worst = max(worst, gap / (d.err_estimate + m.err_estimate))
    s = 0.8 + 0.3j
    base = zeta_so5_continued(s)
    settings = [{"K": 2}, {"K": 4}, {"M": 3}, {"M": 4}]
    for kw in settings:
        alt = zeta_so5_continued(s, **kw)
        ok &= abs(alt.value - base.value) <= alt.err_estimate + base.err_estimate
    return ok, f"worst gap/err={worst:.2e} over 10 points; K in (2,4), M in (3,4) checked"


def c10_polygonal_zeta():
    pts = [0.75, 1.0, 1.5 + 2j, 2.0 - 1j, 3.3 + 0.7j]
    dev = max(abs(zeta_Pk(s, 4).value - complex(zeta(2 * s))) for s in pts)
    res_dev = []
    for k in (3, 5, 7):
        r, _ = residue_extract(lambda s: zeta_Pk(s, k).value.real, 0.5)
        res_dev.append(abs(r - math.sqrt(1 / (2 * (k - 2)))))
    ok = dev <= 1e-10 and max(res_dev) <= 1e-3
    return ok, f"Z_P4 vs zeta(2s) {dev:.1e}; residue deviations " + ", ".join(f"{x:.1e}" for x in res_dev)


def c11_special():
    mp.mp.dps = 30
    rng = np.random.default_rng(11)
    gpts = [complex(a, b) for a, b in zip(rng.uniform(-4.5, 6, 20), rng.uniform(-8, 8, 20))]
    zpts = [complex(a, b) for a, b in zip(rng.uniform(-3, 4, 20), rng.uniform(-20, 20, 20))]
    g_gold = max(abs(complex(gamma(s)) / complex(mp.gamma(s)) - 1) for s in gpts)
    z_gold = max(abs(complex(zeta(s)) / complex(mp.zeta(s)) - 1) for s in zpts)
    refl = max(abs(complex(gamma(s)) * complex(gamma(1 - s)) * np.sin(np.pi * s) / np.pi - 1) for s in gpts)

    def feq(s):
        rhs = 2**s * np.pi ** (s - 1) * np.sin(np.pi * s / 2) * complex(gamma(1 - s)) * complex(zeta(1 - s))
        return abs(rhs / complex(zeta(s)) - 1)

    fe = max(feq(s) for s in zpts)
    ok = refl <= 1e-11 and fe <= 1e-11 and g_gold <= 1e-12 and z_gold <= 1e-12
    return ok, f"reflection={refl:.1e} functional eq={fe:.1e} golden gamma={g_gold:.1e} zeta={z_gold:.1e}"


def _cli(args):
    cmd = [sys.executable, "-m", "meinardus.cli", *args]
    return subprocess.run(cmd, capture_output=True, check=True, env={**os.environ, "MEINARDUS_CACHE": ""}).stdout


def c12_determinism():
    configs = [
        ["compare", "so5", "--n-grid", "1000,5000"],
        ["compare", "plane", "--n-grid", "1000,4000", "--output", "json"],
        ["zeta", "so5", "0.6,1", "--method", "mb", "--output", "json"],
        ["zeta", "so5", "1.2,-0.5"],
    ]
    diffs = [c for c in configs if _cli(c + ["--threads", "1"]) != _cli(c + ["--threads", "8"])]
    return not diffs, f"{len(configs)} configs, differing={diffs}"


CRITERIA = [
    (1, "oracle equivalence", c01_oracle),
    (2, "pentagonal fast path", c02_pentagonal),
    (3, "Cauchy cross-check", c03_cauchy),
    (4, "Hardy-Ramanujan", c04_hardy_ramanujan),
    (5, "plane partitions", c05_plane),
    (6, "polygonal constants", c06_polygonal),
    (7, "so5 end-to-end", c07_so5),
    (8, "Witten golden values", c08_witten_golden),
    (9, "continuation consistency", c09_continuation),
    (10, "polygonal zeta", c10_polygonal_zeta),
    (11, "special functions", c11_special),
    (12, "determinism", c12_determinism),
]


def run_one(num, label, fn):
    try:
        ok, detail = fn()
    except Exception as exc:  # a crash is a failure, reported like one
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    line = f"[{'PASS' if ok else 'FAIL'}] {num:2d} {label}: {detail}"
    ACCEPTANCE_RESULTS[num] = line
    print(line)
    return ok, detail


@pytest.mark.parametrize("num,label,fn", CRITERIA, ids=[f"{n:02d}-{lab.replace(' ', '-')}" for n, lab, _ in CRITERIA])
def test_criterion(num, label, fn):
    ok, detail = run_one(num, label, fn)
    assert ok, detail


if __name__ == "__main__":
    results = [run_one(*c)[0] for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
