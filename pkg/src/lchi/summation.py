"""Compensated summation with a fixed, reproducible accumulation order."""

from __future__ import annotations

import math
from typing import Iterable


class KahanSum:
    """Kahan-compensated complex accumulator (error O(1) ulp per term).

    Terms must be fed in a fixed order (ascending index/ordinate by
    convention) so that results are bit-reproducible.
    """

    __slots__ = ("_sr", "_si", "_cr", "_ci")

    def __init__(self) -> None:
        self._sr = 0.0
        self._si = 0.0
        self._cr = 0.0
        self._ci = 0.0

    def add(self, term: complex) -> None:
        yr = term.real - self._cr
        tr = self._sr + yr
        self._cr = (tr - self._sr) - yr
        self._sr = tr
        yi = term.imag - self._ci
        ti = self._si + yi
        self._ci = (ti - self._si) - yi
        self._si = ti

    @property
    def value(self) -> complex:
        return complex(self._sr, self._si)


def kahan_sum(terms: Iterable[complex]) -> complex:
    acc = KahanSum()
    for t in terms:
        acc.add(t)
    return acc.value


def fsum_complex(terms: Iterable[complex]) -> complex:
    """Exact-until-rounding complex sum; used as a summation oracle."""
    ts = list(terms)
    return complex(math.fsum(t.real for t in ts), math.fsum(t.imag for t in ts))
