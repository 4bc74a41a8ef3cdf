"""The dual sums: over critical-line zeros with conjugate-factor weights,
and over prime powers with character twists, in sharp-cutoff and
smooth-weighted forms, plus the compactly supported bump infrastructure.

Summation is Kahan-compensated in ascending ordinate/index order, so values
are reproducible and shard merges cannot reorder terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .characters import (
    DirichletCharacter,
    RationalXi,
    conjugate_character,
    lambda_sieve,
    xi_value,
)
from .errors import ZeroCoverageError
from .gauss import c_tilde, gauss_sum
from .lfunc import x_factor_on_line
from .quadrature import integrate_adaptive
from .summation import KahanSum
from .zeros import ZeroList


def log_plus(u: float) -> float:
    """max(log u, 1)."""
    if u <= 0:
        raise ValueError("log_plus requires u > 0")
    return max(math.log(u), 1.0)


@dataclass(frozen=True)
class BumpWeight:
    """A smooth weight supported on [a, b], 0 < a < b, with its derivative
    and cached total integral."""

    a: float
    b: float
    fn: Callable[[float], float]
    dfn: Callable[[float], float]
    c_b: float

    def value(self, u: float) -> float:
        if u <= self.a or u >= self.b:
            return 0.0
        return self.fn(u)

    def derivative(self, u: float) -> float:
        if u <= self.a or u >= self.b:
            return 0.0
        return self.dfn(u)

    def values(self, us: np.ndarray) -> np.ndarray:
        us = np.asarray(us, dtype=float)
        out = np.zeros_like(us)
        inside = (us > self.a) & (us < self.b)
        if inside.any():
            out[inside] = [self.fn(u) for u in us[inside]]
        return out


def default_bump(a: float, b: float) -> BumpWeight:
    """exp(-1/((u-a)(b-u))) on (a, b), identically zero outside; the total
    integral is computed by node-doubling quadrature to 1e-10."""
    if a <= 0 or b <= a:
        raise ValueError(f"bump support needs 0 < a < b, got [{a}, {b}]")

    def fn(u: float) -> float:
        g = (u - a) * (b - u)
        if g <= 0:
            return 0.0
        try:
            return math.exp(-1.0 / g)
        except OverflowError:  # pragma: no cover - g > 0 cannot overflow exp
            return 0.0

    def dfn(u: float) -> float:
        v = fn(u)
        if v == 0.0:
            return 0.0
        g = (u - a) * (b - u)
        return v * (a + b - 2.0 * u) / (g * g)

    def fn_vec(us: np.ndarray) -> np.ndarray:
        out = np.zeros_like(us)
        inside = (us > a) & (us < b)
        g = (us[inside] - a) * (b - us[inside])
        with np.errstate(under="ignore"):
            out[inside] = np.exp(-1.0 / g)
        return out

    c_b = integrate_adaptive(fn_vec, a, b, tol=1e-10).real
    return BumpWeight(a=a, b=b, fn=fn, dfn=dfn, c_b=c_b)


def zero_sum_terms(
    chi: DirichletCharacter, xi: RationalXi | float, gammas: np.ndarray
) -> np.ndarray:
    """Per-zero terms xi^{-rho} Xbar(1 - rho) at rho = 1/2 + i gamma, with
    the conjugate character's factor, vectorized over ordinates."""
    x = xi_value(xi)
    gammas = np.asarray(gammas, dtype=float)
    if len(gammas) == 0:
        return np.zeros(0, dtype=complex)
    chibar = conjugate_character(chi)
    xfac = x_factor_on_line(chibar, 0.5, -gammas)  # at 1 - rho = 1/2 - i gamma
    phases = np.exp(-1j * gammas * math.log(x)) if x != 1.0 else 1.0
    return x**-0.5 * phases * xfac


def sigma1_sharp(
    chi: DirichletCharacter, xi: RationalXi | float, T: float, zeros: ZeroList
) -> complex:
    """Sum over located zeros with 0 < gamma <= T of xi^{-rho} Xbar(1-rho)."""
    if not zeros.covers(T):
        raise ZeroCoverageError(
            f"zero list scanned to {zeros.ceiling} cannot support a sum to T = {T}"
        )
    gammas = np.array([g for g in zeros.ordinates if 0.0 < g <= T])
    terms = zero_sum_terms(chi, xi, gammas)
    acc = KahanSum()
    for t in terms:
        acc.add(complex(t))
    return acc.value


def _twist_phases(chi: DirichletCharacter, xi: RationalXi | float, ns: np.ndarray) -> np.ndarray:
    """e(-n xi / q) for integer n, with exact phase reduction when xi is
    rational (keeps large-n phases from accumulating rounding)."""
    q = chi.q
    if isinstance(xi, RationalXi):
        den = xi.k * q
        num = (-ns.astype(np.int64) * xi.h) % den
        return np.exp(2j * math.pi * (num / den))
    return np.exp(-2j * math.pi * ns * (float(xi) / q))


def prime_sum_terms(
    chi: DirichletCharacter, xi: RationalXi | float, ns: np.ndarray
) -> np.ndarray:
    """Per-n terms (tau(chibar)/q) Lambda(n) chi(n) e(-n xi/q) for the given
    integers (zero off prime powers)."""
    if len(ns) == 0:
        return np.zeros(0, dtype=complex)
    ns = np.asarray(ns, dtype=np.int64)
    tau_bar = gauss_sum(conjugate_character(chi))
    lam = lambda_sieve(int(ns.max()))
    chi_vals = chi.value_array()[ns % chi.q]
    return (tau_bar / chi.q) * lam[ns] * chi_vals * _twist_phases(chi, xi, ns)


def sigma2_sharp(chi: DirichletCharacter, xi: RationalXi | float, T: float) -> complex:
    """(tau(chibar)/q) sum over n <= qT/(2 pi xi) of Lambda(n) chi(n) e(-n xi/q)."""
    if T <= 0:
        raise ValueError("T must be positive")
    cutoff = chi.q * T / (2.0 * math.pi * xi_value(xi))
    if cutoff < 2.0:
        return 0j
    ns = np.arange(2, int(math.floor(cutoff)) + 1, dtype=np.int64)
    terms = prime_sum_terms(chi, xi, ns)
    acc = KahanSum()
    for i in np.flatnonzero(terms):
        acc.add(complex(terms[i]))
    return acc.value


def smooth_zero_sum(
    chi: DirichletCharacter,
    xi: RationalXi | float,
    X: float,
    bump: BumpWeight,
    zeros: ZeroList,
) -> complex:
    """Sum over zeros of xi^{-rho} Xbar(1-rho) B(gamma / (2 pi xi X)); only
    ordinates inside the scaled support contribute (exactly 0 outside)."""
    scale = 2.0 * math.pi * xi_value(xi) * X
    need = scale * bump.b
    if not zeros.covers(need):
        raise ZeroCoverageError(
            f"support reaches gamma = {need:.3f} but zeros were scanned to {zeros.ceiling}"
        )
    gammas = np.array([g for g in zeros.ordinates if scale * bump.a < g < scale * bump.b])
    if len(gammas) == 0:
        return 0j
    weights = bump.values(gammas / scale)
    terms = zero_sum_terms(chi, xi, gammas) * weights
    acc = KahanSum()
    for t in terms:
        acc.add(complex(t))
    return acc.value


def smooth_prime_sum(
    chi: DirichletCharacter, xi: RationalXi | float, X: float, bump: BumpWeight
) -> complex:
    """(tau(chibar)/q) sum of Lambda(n) chi(n) e(-n xi/q) B(n / (qX))."""
    if X <= 0:
        raise ValueError("X must be positive")
    lo = chi.q * X * bump.a
    hi = chi.q * X * bump.b
    if hi < 2.0:
        return 0j
    ns = np.arange(max(2, int(math.floor(lo))), int(math.ceil(hi)) + 1, dtype=np.int64)
    weights = bump.values(ns / (chi.q * X))
    terms = prime_sum_terms(chi, xi, ns) * weights
    acc = KahanSum()
    for i in np.flatnonzero(terms):
        acc.add(complex(terms[i]))
    return acc.value


def grh_dagger_lhs(
    chi: DirichletCharacter,
    xi: RationalXi,
    X: float,
    bump: BumpWeight,
    zeros: ZeroList,
) -> complex:
    """smooth_zero_sum plus the linear compensator C_B * Ctilde * X: the
    full quantity whose square-root-scale envelope is under test."""
    if not isinstance(xi, RationalXi):
        raise TypeError("the envelope quantity requires a rational xi = h/k")
    return smooth_zero_sum(chi, xi, X, bump, zeros) + bump.c_b * c_tilde(chi, xi) * X


@dataclass(frozen=True)
class DualSumPoint:
    """One abscissa of a cancellation experiment."""

    abscissa: float
    sigma1: complex
    sigma2: complex
    combined: complex
    normalizer: float
    ratio: float

    @staticmethod
    def make(abscissa: float, sigma1: complex, sigma2: complex, normalizer: float):
        combined = sigma1 + sigma2
        return DualSumPoint(
            abscissa=abscissa,
            sigma1=sigma1,
            sigma2=sigma2,
            combined=combined,
            normalizer=normalizer,
            ratio=abs(combined) / normalizer,
        )
