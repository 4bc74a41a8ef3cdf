"""Gauss sums, root numbers, and closed-form character-sum identities.

Every closed form here is paired with a brute-force evaluation; the test
suite asserts agreement numerically instead of trusting the classical
statements.  Phases are accumulated as exact rational exponents before any
complex rounding."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .characters import (
    DirichletCharacter,
    RationalXi,
    conjugate_character,
    euler_phi,
    moebius,
    unit_root,
)
from .summation import KahanSum


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum over a mod q of chi(a) e(a/q)."""
    q = chi.q
    acc = KahanSum()
    for a in range(q):
        r = chi.value_exponents[a]
        if r is None:
            continue
        acc.add(unit_root(r + Fraction(a, q)))
    return acc.value


def root_number(chi: DirichletCharacter) -> complex:
    """epsilon = tau(chi) / (i^kappa sqrt(q)); defined for primitive chi only."""
    if not chi.primitive:
        raise ValueError(
            f"root number requires a primitive character; chi(q={chi.q}, label={chi.label}) "
            f"has conductor {chi.conductor}"
        )
    tau = gauss_sum(chi)
    return tau / (1j**chi.kappa * math.sqrt(chi.q))


@dataclass(frozen=True)
class GaussData:
    """tau, epsilon and the residuals of their certified identities."""

    modulus: int
    kappa: int
    tau: complex
    epsilon: complex | None
    abs_tau_residual: float  # | |tau| - sqrt(q) |, primitive chi
    pair_residual: float  # | tau(chi) tau(chibar) - chi(-1) q |
    epsilon_modulus_residual: float | None


def gauss_data(chi: DirichletCharacter) -> GaussData:
    tau = gauss_sum(chi)
    tau_bar = gauss_sum(conjugate_character(chi))
    pair = abs(tau * tau_bar - chi.value(-1) * chi.q)
    if chi.primitive:
        eps = root_number(chi)
        return GaussData(
            modulus=chi.q,
            kappa=chi.kappa,
            tau=tau,
            epsilon=eps,
            abs_tau_residual=abs(abs(tau) - math.sqrt(chi.q)),
            pair_residual=pair,
            epsilon_modulus_residual=abs(abs(eps) - 1.0),
        )
    return GaussData(
        modulus=chi.q,
        kappa=chi.kappa,
        tau=tau,
        epsilon=None,
        abs_tau_residual=abs(abs(tau) - math.sqrt(chi.q)),
        pair_residual=pair,
        epsilon_modulus_residual=None,
    )


@dataclass(frozen=True)
class TwistedRamanujanResult:
    brute_force: complex
    closed_form: complex
    main_term_window: bool  # True when (h, q) = 1, i.e. the nonzero branch applies

    @property
    def disagreement(self) -> float:
        return abs(self.brute_force - self.closed_form)


def twisted_ramanujan_sum(chi: DirichletCharacter, h: int, k: int) -> TwistedRamanujanResult:
    """The twisted sum over a mod qk, (a, qk) = 1, of e(-a h / qk) chi(a).

    Returns the direct qk-term evaluation together with the closed form
    chibar(-h) chi(k) mu(k) tau(chi) (zero when (h, q) > 1).
    """
    if k <= 0:
        raise ValueError("k must be positive")
    if math.gcd(h, k) != 1:
        raise ValueError(f"twisted_ramanujan_sum requires gcd(h, k) = 1, got gcd({h}, {k})")
    q = chi.q
    qk = q * k
    acc = KahanSum()
    for a in range(1, qk + 1):
        if math.gcd(a, qk) != 1:
            continue
        r = chi.value_exponents[a % q]
        acc.add(unit_root(r + Fraction(-a * h, qk)))
    brute = acc.value
    chibar = conjugate_character(chi)
    closed = chibar.value(-h) * chi.value(k) * moebius(k) * gauss_sum(chi)
    return TwistedRamanujanResult(
        brute_force=brute,
        closed_form=closed,
        main_term_window=math.gcd(h, q) == 1,
    )


def c_tilde(chi: DirichletCharacter, xi: RationalXi) -> complex:
    """The linear-term constant: chibar(h) chi(k) mu(k) q / phi(qk) when
    (h, q) = 1, else 0."""
    h, k = xi.h, xi.k
    if math.gcd(h, chi.q) != 1:
        return 0j
    chibar = conjugate_character(chi)
    return chibar.value(h) * chi.value(k) * moebius(k) * chi.q / euler_phi(chi.q * k)


@dataclass(frozen=True)
class ProductTauResult:
    """Both routes to tau of the conjugated product character.

    theta(n) = psi(n) chibar(n) mod q*q2.  brute_force is the direct
    q*q2-term Gauss sum of thetabar; closed_form is chi(q2) mu(q2) tau(chi),
    whose validity regime is narrower than the general setup, so callers
    compare rather than assert."""

    theta_modulus: int
    brute_force: complex
    closed_form: complex

    @property
    def disagreement(self) -> float:
        return abs(self.brute_force - self.closed_form)


def product_character_tau(chi: DirichletCharacter, psi: DirichletCharacter) -> ProductTauResult:
    if not psi.primitive:
        raise ValueError("psi must be primitive")
    q, q2 = chi.q, psi.q
    n = q * q2
    # thetabar(a) = psibar(a) chi(a); exponent = chi_exp(a) - psi_exp(a) mod 1
    acc = KahanSum()
    for a in range(1, n + 1):
        rc = chi.value_exponents[a % q]
        rp = psi.value_exponents[a % q2]
        if rc is None or rp is None:
            continue
        acc.add(unit_root(rc - rp + Fraction(a % n, n)))
    closed = chi.value(q2) * moebius(q2) * gauss_sum(chi)
    return ProductTauResult(theta_modulus=n, brute_force=acc.value, closed_form=closed)
