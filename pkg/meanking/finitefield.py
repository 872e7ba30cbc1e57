"""Exact arithmetic in the integers mod an odd prime d.

Every integer label of the construction (n, m, b, the line coordinates
m̈ and m₀, collective labels, offsets) is a `ModInt`. Residues are always
stored in canonical form, 0 <= value < d, so equality is plain equality.
Halving is multiplication by inv(2) = (d+1)/2, e.g. 1/2 = 4 mod 7.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Integral
from typing import Iterator, Union

from meanking.errors import InvalidDimensionError, InvalidLabelError, ModularDivisionError


def is_valid_dim(n: Integral) -> bool:
    """True iff n is an odd prime."""
    if not isinstance(n, Integral) or isinstance(n, bool):
        return False
    if n < 3 or n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class PrimeDim:
    """Single-qudit dimension d, an odd prime."""

    d: int

    def __post_init__(self):
        if isinstance(self.d, Integral) and not isinstance(self.d, bool):
            object.__setattr__(self, "d", int(self.d))
        if not is_valid_dim(self.d):
            raise InvalidDimensionError(
                f"dimension {self.d!r} is not an odd prime (confined to d=p != 2)"
            )

    def __int__(self) -> int:
        return self.d

    def __str__(self) -> str:
        return str(self.d)

    def residue(self, value: int) -> "ModInt":
        return ModInt(value % self.d, self)

    def residues(self) -> Iterator["ModInt"]:
        for v in range(self.d):
            yield ModInt(v, self)

    @property
    def half_unit(self) -> int:
        """The integer (d+1)/2, i.e. inv(2) mod d."""
        return (self.d + 1) // 2


DimLike = Union[PrimeDim, int]


def as_dim(d: DimLike) -> PrimeDim:
    return d if isinstance(d, PrimeDim) else PrimeDim(d)


@dataclass(frozen=True)
class ModInt:
    value: int
    dim: PrimeDim

    def __post_init__(self):
        if not 0 <= self.value < self.dim.d:
            raise InvalidLabelError(
                f"residue {self.value} is not canonical mod {self.dim.d}"
            )

    def _coerce(self, other: Union["ModInt", int]) -> int:
        if isinstance(other, ModInt):
            if other.dim != self.dim:
                raise InvalidLabelError(
                    f"cannot mix residues mod {self.dim.d} and mod {other.dim.d}"
                )
            return other.value
        return int(other)

    def __add__(self, other):
        return self.dim.residue(self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.dim.residue(self.value - self._coerce(other))

    def __rsub__(self, other):
        return self.dim.residue(self._coerce(other) - self.value)

    def __mul__(self, other):
        return self.dim.residue(self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.dim.residue(-self.value)

    def __truediv__(self, other):
        return mod_div(self, self.dim.residue(self._coerce(other)))

    def __rtruediv__(self, other):
        return mod_div(self.dim.residue(self._coerce(other)), self)

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"ModInt({self.value} mod {self.dim.d})"

    def __bool__(self) -> bool:
        return self.value != 0


def mod_inv(a: ModInt) -> ModInt:
    """Multiplicative inverse by Fermat's little theorem, a^(d-2)."""
    if a.value == 0:
        raise ModularDivisionError(f"0 has no inverse mod {a.dim.d}")
    return ModInt(pow(a.value, a.dim.d - 2, a.dim.d), a.dim)


def mod_half(a: ModInt) -> ModInt:
    return a * a.dim.half_unit


def mod_div(a: ModInt, b: ModInt) -> ModInt:
    if b.value == 0:
        raise ModularDivisionError(f"division by 0 mod {b.dim.d}")
    return a * mod_inv(b)
