import math

import mpmath as mp
import pytest

from meinardus.lattice import DivergentRegionError, lattice_sum, zeta_Pk
from meinardus.special import zeta
from meinardus.witten import residue_extract


def tornheim(a, b, c):
    return lattice_sum([(1, 0, a), (0, 1, b), (1, 1, c)]).value


def test_tornheim_identities():
    assert tornheim(1, 1, 1) == pytest.approx(2 * float(mp.zeta(3)), rel=1e-12)
    assert tornheim(2, 3, 0) == pytest.approx(float(mp.zeta(2) * mp.zeta(3)), rel=1e-12)
    assert tornheim(0, 0, 4) == pytest.approx(float(mp.zeta(3) - mp.zeta(4)), rel=1e-12)


def test_tornheim_complex_symmetry():
    s1, s2, s3 = 1.5 + 1j, 2 - 0.5j, 1.2
    assert abs(tornheim(s1, s2, s3) - tornheim(s2, s1, s3)) < 1e-12


def test_truncation_independence():
    forms = [(1, 0, 1.3), (0, 1, 1.3), (1, 1, 1.3), (1, 2, 1.3)]
    a, b = lattice_sum(forms, N=24), lattice_sum(forms, N=60)
    assert abs(a.value - b.value) < 1e-11
    assert a.err_estimate < 1e-9


def test_lattice_argument_checks():
    with pytest.raises(ValueError):
        lattice_sum([(-1, 1, 2.0)])
    with pytest.raises(ValueError):
        lattice_sum([(0, 0, 2.0)])


@pytest.mark.parametrize("s", [0.8, 2.0, 1.1 + 4j])
def test_squares(s):
    assert abs(zeta_Pk(s, 4).value - complex(zeta(2 * s))) < 1e-12


def test_triangular_numbers():
    # sum 2/(n(n+1)) = 2
    assert zeta_Pk(1, 3).value.real == pytest.approx(2.0, rel=1e-12)


def test_polygonal_divergent_region():
    with pytest.raises(DivergentRegionError):
        zeta_Pk(0.5, 3)
    with pytest.raises(ValueError):
        zeta_Pk(2, 2)


@pytest.mark.parametrize("k", [3, 6])
def test_polygonal_residue(k):
    r, err = residue_extract(lambda s: zeta_Pk(s, k).value.real, 0.5)
    assert r == pytest.approx(math.sqrt(1 / (2 * (k - 2))), abs=1e-5)
    assert err < 1e-4


def test_pentagonal_zeta_truncation_independence():
    assert abs(zeta_Pk(1, 5, N=40).value - zeta_Pk(1, 5, N=90).value) < 1e-10
