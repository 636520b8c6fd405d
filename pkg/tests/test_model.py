from fractions import Fraction

import pytest

from meinardus.model import (
    Kind,
    LSpec,
    WeightFunction,
    exponent_sets,
    leading_pole,
    parse_preset,
    polygonal_number,
    preset_lspec,
)
from meinardus.saddle import ell_for


def test_polygonal_numbers():
    assert [polygonal_number(3, m) for m in range(1, 6)] == [1, 3, 6, 10, 15]
    assert [polygonal_number(5, m) for m in range(1, 5)] == [1, 5, 12, 22]


def test_representation_dimensions():
    so5 = parse_preset("so5").values(40)
    dims = [n for n, c in enumerate(so5, 1) for _ in range(c)]
    assert dims == [1, 4, 5, 10, 14, 16, 20, 30, 35, 35, 40]
    su3 = parse_preset("su3").values(15)
    assert [n for n, c in enumerate(su3, 1) for _ in range(c)] == [1, 3, 3, 6, 6, 8, 10, 10, 15, 15, 15, 15]


def test_simple_weights():
    assert parse_preset("ones").values(4) == [1, 1, 1, 1]
    assert parse_preset("plane").values(4) == [1, 2, 3, 4]
    assert parse_preset("polygonal:4").values(9) == [1, 0, 0, 1, 0, 0, 0, 0, 1]


@pytest.mark.parametrize("bad", ["twos", "polygonal:x", "polygonal:2", "explicit:/no/such/file"])
def test_bad_presets(bad):
    with pytest.raises(ValueError):
        parse_preset(bad)


def test_explicit_file(tmp_path):
    p = tmp_path / "w.txt"
    p.write_text("# weights\n1 2\n3 1\n")
    w = parse_preset(f"explicit:{p}")
    assert w.kind is Kind.EXPLICIT
    assert w.values(4) == [2, 0, 1, 0]
    with pytest.raises(ValueError, match="caller-supplied"):
        preset_lspec(w)


def test_explicit_rejects_negative_weights(tmp_path):
    p = tmp_path / "w.txt"
    p.write_text("1 -1\n")
    with pytest.raises(ValueError):
        parse_preset(f"explicit:{p}")
    with pytest.raises(ValueError):
        WeightFunction(Kind.EXPLICIT, table=(0, 0))


def test_lspec_validation():
    with pytest.raises(ValueError):
        LSpec((), (0,), 0.0, 0.0, 1)
    with pytest.raises(ValueError):
        LSpec(((Fraction(-1), 1.0),), (0,), 0.0, 0.0, 1)
    spec = LSpec(((Fraction(1, 3), 1.0), (Fraction(1, 2), 2.0)), (0, Fraction(1, 2)), 0.0, 0.0, 1)
    assert spec.alpha == Fraction(1, 2)


def test_leading_pole_polygonal():
    a, w = leading_pole(parse_preset("polygonal:5"))
    assert a == Fraction(1, 2)
    assert w == pytest.approx((1 / 6) ** 0.5)


@pytest.mark.parametrize(
    "preset,expected",
    [("ones", "1/2"), ("plane", "2/3"), ("polygonal:3", "1/3"), ("so5", "1/9"), ("su3", "1/10")],
)
def test_next_error_exponent(preset, expected):
    assert exponent_sets(preset_lspec(preset)).next_error_exponent() == Fraction(expected)


def test_so5_exponent_sets():
    e = exponent_sets(preset_lspec("so5"))
    assert e.L_set[:4] == (Fraction(1, 3), Fraction(2, 9), Fraction(1, 9), Fraction(0))
    assert min(e.L_set) > -1 / Fraction(3, 2)


def test_numeric_flags():
    assert preset_lspec("so5").numeric == {"L0prime"}
    assert preset_lspec("su3").numeric == {"omega_1_2", "L0", "L0prime"}
    assert preset_lspec("ones").numeric == frozenset()


@pytest.mark.parametrize("a,b,ell", [(Fraction(1, 2), Fraction(1, 3), 3), (Fraction(2, 3), Fraction(1, 2), 4), (1, Fraction(1, 3), 1), (Fraction(1, 2), Fraction(2, 5), 5)])
def test_ell(a, b, ell):
    assert ell_for(a, b) == ell
