"""Exact coefficient tables shared by the test modules and the acceptance script."""

from functools import lru_cache

from meinardus.counting import coeffs_convolution, coeffs_pentagonal
from meinardus.model import parse_preset

ONES_N = 100_000
OTHER_N = 20_000


@lru_cache(maxsize=None)
def ones():
    return coeffs_pentagonal(ONES_N)


@lru_cache(maxsize=None)
def table(name: str):
    return coeffs_convolution(parse_preset(name), OTHER_N)
