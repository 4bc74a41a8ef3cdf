"""Dirichlet characters mod q with exact rational-exponent values.

A character value chi(a) on a unit a is stored as the exponent r in [0,1)
with chi(a) = e(r) = exp(2*pi*i*r), kept as an exact Fraction.  Complex
values are materialized on demand, so products and Gauss-sum phases reduce
exactly before any rounding happens.

Moduli are desk-scale (q <= 10_000); all factorizations use trial division.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

MAX_MODULUS = 10_000


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] with p ascending, by trial division."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi requires n >= 1")
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius requires n >= 1")
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def von_mangoldt(n: int) -> float:
    """Lambda(n) = log p when n = p^m, else 0."""
    if n < 1:
        raise ValueError("von_mangoldt requires n >= 1")
    if n == 1:
        return 0.0
    fac = factorize(n)
    if len(fac) == 1:
        return math.log(fac[0][0])
    return 0.0


@lru_cache(maxsize=8)
def lambda_sieve(limit: int) -> np.ndarray:
    """von Mangoldt values Lambda(0..limit) as a float array."""
    lam = np.zeros(limit + 1)
    if limit < 2:
        return lam
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    for p in np.flatnonzero(is_prime):
        p = int(p)
        logp = math.log(p)
        pk = p
        while pk <= limit:
            lam[pk] = logp
            pk *= p
    return lam


def unit_root(r: Fraction) -> complex:
    """e(r) = exp(2*pi*i*r); exact on quarter-turn points."""
    r = r % 1
    den = r.denominator
    if den == 1:
        return 1 + 0j
    if den == 2:
        return -1 + 0j
    if den == 4:
        return 1j if r.numerator == 1 else -1j
    x = 2.0 * math.pi * (r.numerator / den)
    return complex(math.cos(x), math.sin(x))


def _multiplicative_order(g: int, q: int, group_order: int) -> int:
    order = group_order
    for p, _ in factorize(group_order):
        while order % p == 0 and pow(g, order // p, q) == 1:
            order //= p
    return order


def _least_primitive_root(pk: int) -> int:
    phi = euler_phi(pk)
    for g in range(2, pk):
        if math.gcd(g, pk) == 1 and _multiplicative_order(g, pk, phi) == phi:
            return g
    raise ValueError(f"no primitive root mod {pk}")


def _crt_lift(residue: int, pk: int, q: int) -> int:
    """The element of (Z/qZ)* congruent to residue mod pk and 1 mod q/pk."""
    m = q // pk
    if m == 1:
        return residue % q
    inv = pow(pk, -1, m)
    return (residue + pk * ((1 - residue) * inv % m)) % q


@dataclass(frozen=True)
class _UnitGroup:
    """Cyclic decomposition of (Z/qZ)* with a discrete-log table."""

    q: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    dlog: dict[int, tuple[int, ...]]


@lru_cache(maxsize=None)
def _unit_group(q: int) -> _UnitGroup:
    if not 1 <= q <= MAX_MODULUS:
        raise ValueError(f"modulus {q} outside supported range 1..{MAX_MODULUS}")
    gens: list[int] = []
    orders: list[int] = []
    for p, e in factorize(q):
        pk = p**e
        if p == 2:
            if e == 2:
                gens.append(_crt_lift(pk - 1, pk, q))
                orders.append(2)
            elif e >= 3:
                # (Z/2^e)* = <-1> x <5>
                gens.append(_crt_lift(pk - 1, pk, q))
                orders.append(2)
                gens.append(_crt_lift(5, pk, q))
                orders.append(2 ** (e - 2))
            # e == 1: trivial factor
        else:
            gens.append(_crt_lift(_least_primitive_root(pk), pk, q))
            orders.append(euler_phi(pk))
    dlog: dict[int, tuple[int, ...]] = {}
    for ks in itertools.product(*[range(s) for s in orders]):
        a = 1 % q
        for g, k in zip(gens, ks):
            a = a * pow(g, k, q) % q
        dlog[a] = ks
    assert len(dlog) == euler_phi(q)
    return _UnitGroup(q, tuple(gens), tuple(orders), dlog)


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character mod q.

    value_exponents[a] is None when gcd(a, q) > 1, otherwise the Fraction
    r in [0,1) with chi(a) = e(r).  label is the position of the character
    in the lexicographic generator-exponent order used by
    enumerate_characters(q).
    """

    q: int
    value_exponents: tuple[Fraction | None, ...]
    kappa: int
    conductor: int
    primitive: bool
    label: int
    exponent_tuple: tuple[int, ...]

    def exponent(self, n: int) -> Fraction | None:
        return self.value_exponents[n % self.q]

    def value(self, n: int) -> complex:
        r = self.value_exponents[n % self.q]
        return 0j if r is None else unit_root(r)

    def __call__(self, n: int) -> complex:
        return self.value(n)

    @property
    def is_principal(self) -> bool:
        return self.conductor == 1

    @property
    def is_real(self) -> bool:
        return all(r is None or 2 * r % 1 == 0 for r in self.value_exponents)

    def value_array(self) -> np.ndarray:
        """chi(0..q-1) as a complex array (for vectorized n % q lookups)."""
        return np.array([self.value(a) for a in range(self.q)], dtype=complex)

    def __repr__(self) -> str:  # keep pytest output readable
        return f"chi(q={self.q}, label={self.label})"


def _conductor_of(q: int, exponents: list[Fraction | None]) -> int:
    # smallest f | q such that chi(a) = 1 for every unit a = 1 (mod f)
    divisors = sorted(d for d in range(1, q + 1) if q % d == 0)
    for f in divisors:
        ok = True
        for a in range(1, q + 1, f):
            r = exponents[a % q]
            if r is not None and r != 0:
                ok = False
                break
        if ok:
            return f
    return q


def _label_of(m: tuple[int, ...], orders: tuple[int, ...]) -> int:
    rank = 0
    for mi, si in zip(m, orders):
        rank = rank * si + mi
    return rank


def _character_from_exponents(q: int, m: tuple[int, ...]) -> DirichletCharacter:
    ug = _unit_group(q)
    exponents: list[Fraction | None] = [None] * q
    for a, ks in ug.dlog.items():
        r = Fraction(0)
        for mi, ki, si in zip(m, ks, ug.orders):
            r += Fraction(mi * ki, si)
        exponents[a] = r % 1
    minus_one = exponents[(q - 1) % q]
    if minus_one == 0:
        kappa = 0
    elif minus_one == Fraction(1, 2):
        kappa = 1
    else:  # pragma: no cover - impossible for a genuine character
        raise AssertionError("chi(-1) must be +-1")
    cond = _conductor_of(q, exponents)
    return DirichletCharacter(
        q=q,
        value_exponents=tuple(exponents),
        kappa=kappa,
        conductor=cond,
        primitive=(cond == q),
        label=_label_of(m, ug.orders),
        exponent_tuple=m,
    )


@lru_cache(maxsize=None)
def enumerate_characters(q: int) -> tuple[DirichletCharacter, ...]:
    """All phi(q) characters mod q, ordered lexicographically by the
    exponents of chi on the fixed unit-group generators."""
    ug = _unit_group(q)
    return tuple(
        _character_from_exponents(q, m)
        for m in itertools.product(*[range(s) for s in ug.orders])
    )


def character(q: int, label: int) -> DirichletCharacter:
    chars = enumerate_characters(q)
    if not 0 <= label < len(chars):
        raise ValueError(f"character label {label} out of range for q={q} (phi={len(chars)})")
    return chars[label]


def conjugate_character(chi: DirichletCharacter) -> DirichletCharacter:
    ug = _unit_group(chi.q)
    m_bar = tuple((-mi) % si for mi, si in zip(chi.exponent_tuple, ug.orders))
    return character(chi.q, _label_of(m_bar, ug.orders))


def char_value(chi: DirichletCharacter, n: int) -> complex:
    """chi(n), extended by periodicity; 0 off the units."""
    return chi.value(n)


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


def is_primitive(chi: DirichletCharacter) -> bool:
    return chi.primitive


@dataclass(frozen=True)
class RationalXi:
    """A positive rational h/k stored in lowest terms."""

    h: int
    k: int

    def __post_init__(self) -> None:
        if self.h <= 0 or self.k <= 0:
            raise ValueError("RationalXi requires h, k > 0")
        g = math.gcd(self.h, self.k)
        object.__setattr__(self, "h", self.h // g)
        object.__setattr__(self, "k", self.k // g)

    @property
    def value(self) -> float:
        return self.h / self.k

    def __float__(self) -> float:
        return self.h / self.k

    def __str__(self) -> str:
        return f"{self.h}/{self.k}"


def xi_value(xi: RationalXi | float | int) -> float:
    """Numeric value of a cutoff parameter given rationally or as a float."""
    x = float(xi)
    if not (x > 0 and math.isfinite(x)):
        raise ValueError(f"xi must be a positive finite number, got {xi}")
    return x
