"""Exact Łukasiewicz connectives over a finite truth grid.

Truth degrees live on the grid ``{0, 1/k, ..., 1}``.  A :class:`TruthValue`
keeps its numerator and the grid resolution ``k`` separately, so all
arithmetic stays in the integers.  The ``n_*`` kernels at the bottom work on
bare numerators (ints or numpy integer arrays) and are what the vectorised
evaluators use internally.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

__all__ = [
    "GridMismatchError",
    "OffGridError",
    "TruthGrid",
    "TruthValue",
    "luk_and",
    "luk_or",
    "luk_neg",
    "luk_implies",
    "luk_iff",
    "big_and",
    "big_or",
    "parse_fraction",
    "round_half_down",
]


class GridMismatchError(ValueError):
    """Two truth values from grids of different resolution were combined."""


class OffGridError(ValueError):
    """A value does not lie on the requested grid."""


Number = Union[int, float, str, Fraction, "TruthValue"]


def parse_fraction(x: Number) -> Fraction:
    """Read ``x`` as an exact rational.

    Accepts ints, Fractions, ``"n/d"`` strings, decimal strings and floats.
    Floats go through their shortest repr, so ``0.1`` means ``1/10``.
    """
    if isinstance(x, TruthValue):
        return x.fraction
    if isinstance(x, bool):
        raise TypeError("booleans are not truth degrees; use 0 or 1")
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise ValueError(f"not a rational number: {x!r}") from None
    raise TypeError(f"cannot read {type(x).__name__} as a truth degree")


def round_half_down(num: int, den: int) -> int:
    """Nearest integer to ``num/den`` (den > 0), ties toward the lower value."""
    return (2 * num + den - 1) // (2 * den)


@functools.total_ordering
@dataclass(frozen=True)
class TruthValue:
    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator < 1:
            raise ValueError("grid resolution must be a positive integer")
        if not 0 <= self.numerator <= self.denominator:
            raise OffGridError(
                f"{self.numerator}/{self.denominator} is outside [0, 1]")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def grid(self) -> "TruthGrid":
        return TruthGrid(self.denominator)

    def _check(self, other: "TruthValue") -> None:
        if not isinstance(other, TruthValue):
            raise TypeError(f"expected TruthValue, got {type(other).__name__}")
        if other.denominator != self.denominator:
            raise GridMismatchError(
                f"grid resolutions differ: {self.denominator} vs {other.denominator}")

    def __lt__(self, other):
        if not isinstance(other, TruthValue):
            return NotImplemented
        self._check(other)
        return self.numerator < other.numerator

    def __and__(self, other):
        return luk_and(self, other)

    def __or__(self, other):
        return luk_or(self, other)

    def __invert__(self):
        return luk_neg(self)

    def __float__(self):
        return self.numerator / self.denominator

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"

    def __repr__(self):
        return f"TruthValue({self.numerator}/{self.denominator})"


@dataclass(frozen=True)
class TruthGrid:
    """The discretised truth set ``{0, 1/k, ..., 1}``."""

    resolution: int

    def __post_init__(self):
        if not isinstance(self.resolution, (int, np.integer)) or self.resolution < 1:
            raise ValueError(f"grid resolution must be a positive integer, got {self.resolution!r}")

    @property
    def k(self) -> int:
        return self.resolution

    @property
    def size(self) -> int:
        return self.resolution + 1

    @property
    def values(self) -> tuple[TruthValue, ...]:
        return tuple(TruthValue(i, self.resolution) for i in range(self.resolution + 1))

    @property
    def bottom(self) -> TruthValue:
        return TruthValue(0, self.resolution)

    @property
    def top(self) -> TruthValue:
        return TruthValue(self.resolution, self.resolution)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return self.size

    def __contains__(self, x) -> bool:
        try:
            self.value(x)
        except (OffGridError, ValueError, TypeError):
            return False
        return True

    def value(self, x: Number) -> TruthValue:
        """Exact grid point equal to ``x``; raises :class:`OffGridError` otherwise."""
        if isinstance(x, TruthValue) and x.denominator != self.resolution:
            raise GridMismatchError(
                f"value {x} is on grid {x.denominator}, expected {self.resolution}")
        f = parse_fraction(x)
        scaled = f * self.resolution
        if scaled.denominator != 1 or not 0 <= scaled <= self.resolution:
            raise OffGridError(f"{f} is not on the grid with resolution {self.resolution}")
        return TruthValue(int(scaled), self.resolution)

    def round(self, x: Number) -> TruthValue:
        """Nearest grid point to ``x``, ties toward the lower value; clamps to [0, 1]."""
        f = parse_fraction(x)
        if f < 0 or f > 1:
            raise OffGridError(f"{f} is outside [0, 1]")
        scaled = f * self.resolution
        return TruthValue(round_half_down(scaled.numerator, scaled.denominator), self.resolution)


def _pair(a: TruthValue, b: TruthValue) -> int:
    a._check(b)
    return a.denominator


def luk_and(a: TruthValue, b: TruthValue) -> TruthValue:
    k = _pair(a, b)
    return TruthValue(max(a.numerator + b.numerator - k, 0), k)


def luk_or(a: TruthValue, b: TruthValue) -> TruthValue:
    k = _pair(a, b)
    return TruthValue(min(a.numerator + b.numerator, k), k)


def luk_neg(a: TruthValue) -> TruthValue:
    return TruthValue(a.denominator - a.numerator, a.denominator)


def luk_implies(a: TruthValue, b: TruthValue) -> TruthValue:
    k = _pair(a, b)
    return TruthValue(min(k - a.numerator + b.numerator, k), k)


def luk_iff(a: TruthValue, b: TruthValue) -> TruthValue:
    k = _pair(a, b)
    return TruthValue(k - abs(a.numerator - b.numerator), k)


def _collect(values: Iterable[TruthValue]) -> list[TruthValue]:
    vals = list(values)
    for v in vals[1:]:
        vals[0]._check(v)
    return vals


def big_and(values: Iterable[TruthValue], grid: TruthGrid | None = None) -> TruthValue:
    """Infimum of ``values``; the empty infimum is 1.

    ``grid`` fixes the resolution of the result when ``values`` is empty
    (defaults to the two-valued grid).
    """
    vals = _collect(values)
    if not vals:
        return (grid or TruthGrid(1)).top
    return min(vals)


def big_or(values: Iterable[TruthValue], grid: TruthGrid | None = None) -> TruthValue:
    """Supremum of ``values``; the empty supremum is 0."""
    vals = _collect(values)
    if not vals:
        return (grid or TruthGrid(1)).bottom
    return max(vals)


# Numerator kernels.  ``k`` is the grid resolution; inputs are ints in [0, k]
# or integer numpy arrays of such.

def n_and(a, b, k):
    return np.maximum(a + b - k, 0)


def n_or(a, b, k):
    return np.minimum(a + b, k)


def n_neg(a, k):
    return k - a


def n_implies(a, b, k):
    return np.minimum(k - a + b, k)


def n_iff(a, b, k):
    return k - np.abs(a - b)
