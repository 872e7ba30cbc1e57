import numpy as np
import pytest

from meanking.errors import InvalidDimensionError, InvalidLabelError, ModularDivisionError
from meanking.finitefield import ModInt, PrimeDim, is_valid_dim, mod_div, mod_half, mod_inv


def r(value, d):
    return PrimeDim(d).residue(value)


@pytest.mark.parametrize("n, expected", [(3, True), (5, True), (7, True), (13, True), (2, False), (9, False), (1, False), (0, False), (-3, False), (15, False)])
def test_is_valid_dim(n, expected):
    assert is_valid_dim(n) is expected


@pytest.mark.parametrize("n", [np.int64(7), np.int32(5), np.uint8(3)])
def test_numpy_integers_are_valid_dims(n):
    assert is_valid_dim(n)
    dim = PrimeDim(n)
    assert type(dim.d) is int
    assert dim == PrimeDim(int(n))


def test_non_integers_are_not_dims():
    assert not is_valid_dim(7.0)
    assert not is_valid_dim(True)
    assert not is_valid_dim(np.float64(7))


@pytest.mark.parametrize("n", [2, 4, 9, 21])
def test_prime_dim_rejects(n):
    with pytest.raises(InvalidDimensionError, match="confined to d=p != 2"):
        PrimeDim(n)


@pytest.mark.parametrize("a, expected", [(1, 1), (3, 5), (2, 4)])
def test_mod_inv_d7(a, expected):
    assert mod_inv(r(a, 7)).value == expected


@pytest.mark.parametrize("d", [3, 5, 7, 11, 13])
def test_mod_inv_exhaustive(d):
    for a in range(1, d):
        assert (r(a, d) * mod_inv(r(a, d))).value == 1


def test_mod_inv_zero():
    with pytest.raises(ModularDivisionError):
        mod_inv(r(0, 5))


@pytest.mark.parametrize("a, d, expected", [(1, 7, 4), (0, 7, 0), (0, 3, 0), (2, 5, 1)])
def test_mod_half(a, d, expected):
    assert mod_half(r(a, d)).value == expected


def test_half_unit_is_inverse_of_two():
    for d in (3, 5, 7, 11):
        assert PrimeDim(d).half_unit == mod_inv(r(2, d)).value


@pytest.mark.parametrize("a, b, d, expected", [(4, 2, 5, 2), (1, 3, 7, 5), (0, 3, 7, 0), (0, 1, 5, 0)])
def test_mod_div(a, b, d, expected):
    assert mod_div(r(a, d), r(b, d)).value == expected
    assert (r(a, d) / r(b, d)).value == expected


def test_mod_div_by_zero():
    with pytest.raises(ModularDivisionError):
        mod_div(r(1, 5), r(0, 5))
    with pytest.raises(ZeroDivisionError):
        r(1, 5) / 0


def test_arithmetic_stays_canonical():
    a, b = r(5, 7), r(4, 7)
    assert (a + b).value == 2
    assert (b - a).value == 6
    assert (a * b).value == 6
    assert (-a).value == 2
    assert (3 - a).value == 5
    assert (2 * a).value == 3


def test_residues_from_different_dims_do_not_mix():
    with pytest.raises(InvalidLabelError):
        r(1, 5) + r(1, 7)


def test_non_canonical_residue_rejected():
    with pytest.raises(InvalidLabelError):
        ModInt(7, PrimeDim(5))
