"""Evaluation of L(s, chi), its logarithmic derivative, and the
functional-equation factor, exactly and asymptotically.

Backend: Hurwitz zeta by Euler-Maclaurin with the truncation point tracking
|t| and eight Bernoulli pairs.  All Gamma and sine factors are assembled in
log space so the factor stays representable at large |t| (Gamma decay and
sine growth cancel in the sum of logs).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import loggamma

from .characters import DirichletCharacter, lambda_sieve
from .errors import NearZeroError, PoleError, XFactorDomainError
from .gauss import gauss_sum, root_number

ComplexPoint = complex

# B_{2j} / (2j)! for j = 1..8; the EM remainder after these pairs falls like
# ((|s| + 16) / (2 pi N))^16, negligible once N tracks 2|t|.
_BERN_OVER_FACT = (
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
)

# |t| beyond this is out of desk scope for binary64 evaluation.
T_CAP = 800.0

SIGMA_RANGE = (-2.0, 3.0)

# Empirical envelope for the t^{-1} term of the asymptotic factor; fitted,
# not derived, and recorded in reports.
ASYMPTOTIC_ENVELOPE = 5.0

_LN2 = math.log(2.0)
_LNPI = math.log(math.pi)


def _n_terms(t: float) -> int:
    """EM truncation point, quantized so nearby ordinates share a value."""
    return int(max(20, 100 * math.ceil(abs(t) / 50.0)))


def _check_domain(s: complex) -> None:
    if abs(s.imag) > T_CAP:
        raise ValueError(f"|t| = {abs(s.imag):.1f} exceeds the binary64 evaluation cap {T_CAP}")


def _hurwitz_kernel(
    s: np.ndarray, alphas: np.ndarray, n_terms: int, want_deriv: bool
) -> tuple[np.ndarray, np.ndarray | None]:
    """Euler-Maclaurin zeta(s_i, alpha_j) on the grid (m, k); optionally
    the s-derivative, differentiated term by term (no finite differences)."""
    n = np.arange(n_terms)
    base = alphas[None, :] + n[:, None]  # (N, k)
    lg = np.log(base)
    expo = np.exp(-s[:, None, None] * lg[None, :, :])  # (m, N, k)
    main = expo[:, ::-1, :].sum(axis=1)  # small terms first
    z = alphas + float(n_terms)  # (k,)
    lz = np.log(z)
    w = np.exp(-s[:, None] * lz[None, :])  # z^{-s}
    at_pole = s == 1.0
    sm1 = np.where(at_pole, 1.0, s - 1.0)[:, None]
    t_int = (z[None, :] * w) / sm1  # z^{1-s} / (s-1)
    # At s = 1 keep only the finite part -log z (and +log^2 z / 2 for the
    # derivative): the 1/(s-1) parts are alpha-independent and cancel in any
    # nonprincipal character sum, which is the only caller reaching s = 1.
    t_int[at_pole] = -lz[None, :]
    t_half = 0.5 * w
    total = main + t_int + t_half

    dtotal = None
    if want_deriv:
        dmain = -(expo * lg[None, :, :])[:, ::-1, :].sum(axis=1)
        dt_int = t_int * (-lz[None, :] - 1.0 / sm1)
        dt_int[at_pole] = 0.5 * lz[None, :] ** 2
        dtotal = dmain + dt_int - t_half * lz[None, :]

    cur = w / z[None, :]  # z^{-s-1}
    rising = s.astype(complex).copy()  # s (s+1) ... growing rising factorial
    drising = np.ones_like(rising)
    for j, coef in enumerate(_BERN_OVER_FACT, start=1):
        total += coef * rising[:, None] * cur
        if want_deriv:
            dtotal += coef * (drising[:, None] - rising[:, None] * lz[None, :]) * cur
        if j < len(_BERN_OVER_FACT):
            a1 = s + (2 * j - 1)
            a2 = s + (2 * j)
            drising = drising * a1 * a2 + rising * (a1 + a2)
            rising = rising * a1 * a2
            cur = cur / (z**2)[None, :]
    return total, dtotal


def _hurwitz_many(
    s_vals: np.ndarray, alphas: np.ndarray, want_deriv: bool
) -> tuple[np.ndarray, np.ndarray | None]:
    """Kernel driver: bucket points by truncation length, chunk for memory."""
    s_vals = np.asarray(s_vals, dtype=complex)
    m, k = len(s_vals), len(alphas)
    out = np.empty((m, k), dtype=complex)
    dout = np.empty((m, k), dtype=complex) if want_deriv else None
    lengths = np.array([_n_terms(s.imag) for s in s_vals])
    for n_terms in np.unique(lengths):
        idx = np.flatnonzero(lengths == n_terms)
        chunk = max(1, 2_000_000 // (int(n_terms) * max(k, 1)))
        for lo in range(0, len(idx), chunk):
            sel = idx[lo : lo + chunk]
            vals, dvals = _hurwitz_kernel(s_vals[sel], alphas, int(n_terms), want_deriv)
            out[sel] = vals
            if want_deriv:
                dout[sel] = dvals
    return out, dout


def hurwitz_zeta(s: complex, alpha: float) -> complex:
    """zeta(s, alpha) for alpha in (0, 1]; raises PoleError at s = 1."""
    s = complex(s)
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if s == 1:
        raise PoleError("hurwitz zeta has its pole at s = 1")
    _check_domain(s)
    vals, _ = _hurwitz_many(np.array([s]), np.array([alpha]), want_deriv=False)
    return complex(vals[0, 0])


@lru_cache(maxsize=None)
def _coprime_data(chi: DirichletCharacter) -> tuple[np.ndarray, np.ndarray]:
    alphas = []
    chi_vals = []
    for a in range(1, chi.q + 1):
        v = chi.value(a)
        if v != 0:
            alphas.append(a / chi.q)
            chi_vals.append(v)
    return np.asarray(alphas), np.asarray(chi_vals, dtype=complex)


def _l_batch(
    s_vals: np.ndarray, chi: DirichletCharacter, want_deriv: bool = False
) -> tuple[np.ndarray, np.ndarray | None]:
    """L(s, chi) (and optionally L'(s, chi)) on an array of points, via
    q^{-s} sum_a chi(a) zeta(s, a/q)."""
    alphas, chi_vals = _coprime_data(chi)
    zetas, dzetas = _hurwitz_many(s_vals, alphas, want_deriv)
    lnq = math.log(chi.q)
    qs = np.exp(-np.asarray(s_vals, dtype=complex) * lnq)
    lvals = qs * (zetas @ chi_vals)
    if not want_deriv:
        return lvals, None
    lders = qs * (dzetas @ chi_vals) - lnq * lvals
    return lvals, lders


def l_value(s: complex, chi: DirichletCharacter) -> complex:
    """L(s, chi); raises PoleError for the principal character at s = 1."""
    s = complex(s)
    if s == 1 and chi.is_principal:
        raise PoleError("L(s, principal chi) has a pole at s = 1")
    _check_domain(s)
    vals, _ = _l_batch(np.array([s]), chi)
    return complex(vals[0])


_SERIES_SIGMA = 1.2
_SERIES_CAP = 1_200_000


def _series_terms_needed(s: complex) -> int:
    # heuristic prime-sum tail model: ~2.1 (1 + |s|/(sigma-1/2)) N^{1/2-sigma}
    sig = s.real
    c = 2.1 * (1.0 + abs(s) / (sig - 0.5))
    return int((c / 1e-7) ** (1.0 / (sig - 0.5))) + 10


def _log_derivative_series(s: complex, chi: DirichletCharacter, n_max: int) -> complex:
    lam = lambda_sieve(n_max)
    ns = np.flatnonzero(lam)
    vals = chi.value_array()[ns % chi.q]
    terms = lam[ns] * vals * np.exp(-s * np.log(ns))
    total = terms[::-1].sum()
    if chi.is_principal:
        # coprime prime powers have average density 1: integral tail
        total += n_max ** (1.0 - s) / (s - 1.0)
    return -complex(total)


def log_derivative(s: complex, chi: DirichletCharacter) -> complex:
    """L'/L(s, chi) to ~1e-7.

    In the absolutely convergent regime the Dirichlet series over prime
    powers is used (with an integral tail correction for principal-type
    averages) whenever its certified truncation fits the term budget;
    everywhere else the term-by-term differentiated Euler-Maclaurin
    evaluation of L' is divided by L.
    """
    s = complex(s)
    _check_domain(s)
    if s.real > _SERIES_SIGMA:
        needed = _series_terms_needed(s)
        if needed <= _SERIES_CAP:
            return _log_derivative_series(s, chi, needed)
    lvals, lders = _l_batch(np.array([s]), chi, want_deriv=True)
    lv = complex(lvals[0])
    if abs(lv) < 1e-10:
        raise NearZeroError(f"|L({s}, chi)| = {abs(lv):.2e}: too close to a zero")
    return complex(lders[0]) / lv


def _logsin(z: np.ndarray | complex) -> np.ndarray | complex:
    """A branch of log sin(z), safe for large |Im z|; only exp() of the
    result is meaningful (branches differ by multiples of 2 pi i)."""
    z = np.asarray(z, dtype=complex)
    y = z.imag
    out = np.empty_like(z)
    up = y >= 0
    out[up] = -1j * z[up] + np.log(1.0 - np.exp(2j * z[up])) + (1j * math.pi / 2 - _LN2)
    dn = ~up
    out[dn] = 1j * z[dn] + np.log(1.0 - np.exp(-2j * z[dn])) - (1j * math.pi / 2 + _LN2)
    return out


@lru_cache(maxsize=None)
def _root_number_cached(chi: DirichletCharacter) -> complex:
    return root_number(chi)


@dataclass(frozen=True)
class XFactorResult:
    value: complex
    method: str  # "exact" | "asymptotic"
    relative_error_estimate: float | None = None

    def __post_init__(self) -> None:
        if self.method == "exact" and self.relative_error_estimate is not None:
            raise ValueError("exact evaluations carry no error estimate")
        if self.method == "asymptotic" and self.relative_error_estimate is None:
            raise ValueError("asymptotic evaluations must carry an error estimate")


def _x_log_line(chi: DirichletCharacter, s_vals: np.ndarray) -> np.ndarray:
    """log of the functional-equation factor on an array of points away
    from the real axis (no pole handling)."""
    eps = _root_number_cached(chi)
    s = np.asarray(s_vals, dtype=complex)
    return (
        1j * cmath.phase(eps)
        + s * _LN2
        + (s - 1.0) * _LNPI
        + (0.5 - s) * math.log(chi.q)
        + loggamma(1.0 - s)
        + _logsin(math.pi / 2 * (s + chi.kappa))
    )


def x_factor_exact(s: complex, chi: DirichletCharacter) -> XFactorResult:
    """epsilon 2^s pi^{s-1} q^{1/2-s} Gamma(1-s) sin(pi (s+kappa)/2).

    Genuine poles (Gamma pole not cancelled by a sine zero) raise
    XFactorDomainError; removable points evaluate through a reflected,
    cancellation-free form.
    """
    s = complex(s)
    _check_domain(s)
    if not chi.primitive:
        raise ValueError("the functional-equation factor is defined for primitive chi")
    eps = _root_number_cached(chi)
    kappa = chi.kappa
    n = round(s.real)
    delta = s - n
    if n >= 1 and abs(delta) < 1e-3:
        if (n + kappa) % 2 == 1:
            if abs(delta) < 1e-9:
                raise XFactorDomainError(f"genuine pole of the factor at s = {n}")
            # near-pole but off it: fall through to the direct log form
        else:
            # removable: Gamma(1-s) sin(pi(s+kappa)/2) = pi sign / (Gamma(s) 2 cos(pi delta/2))
            sign = -1.0 if (((n + kappa) // 2) + n) % 2 else 1.0
            log_main = (
                s * (_LN2 + _LNPI)
                + (0.5 - s) * math.log(chi.q)
                - loggamma(s)
            )
            val = eps * cmath.exp(log_main) * sign / (2.0 * cmath.cos(math.pi * delta / 2.0))
            return XFactorResult(complex(val), "exact")
    if n <= 0 and abs(delta) < 1e-12 and (n + kappa) % 2 == 0:
        return XFactorResult(0j, "exact")  # sine zero, no Gamma pole
    val = cmath.exp(complex(_x_log_line(chi, np.array([s]))[0]))
    return XFactorResult(val, "exact")


def x_factor_on_line(chi: DirichletCharacter, sigma: float, ts: np.ndarray) -> np.ndarray:
    """Vectorized exact factor at sigma + i t for an array of nonzero t."""
    s = sigma + 1j * np.asarray(ts, dtype=float)
    return np.exp(_x_log_line(chi, s))


def x_factor_asymptotic(c: float, t: float, chi: DirichletCharacter) -> XFactorResult:
    """Large-t main term for the factor at 1 - c - i t (t >= 1):
    tau(chi) q^{c-1} e^{-i pi/4} exp(i t log(q t / 2 pi e)) (t/2 pi)^{c-1/2}."""
    if t < 1.0:
        raise ValueError(f"asymptotic form requires t >= 1, got {t}")
    _check_domain(complex(0, t))
    tau = gauss_sum(chi)
    main = (
        tau
        * chi.q ** (c - 1.0)
        * cmath.exp(-1j * math.pi / 4.0)
        * cmath.exp(1j * t * math.log(chi.q * t / (2.0 * math.pi * math.e)))
        * (t / (2.0 * math.pi)) ** (c - 0.5)
    )
    return XFactorResult(complex(main), "asymptotic", ASYMPTOTIC_ENVELOPE / t)


def realness_phase(chi: DirichletCharacter, ts: np.ndarray) -> np.ndarray:
    """theta(t) such that exp(i theta(t)) L(1/2 + i t, chi) is real-valued.

    Branch fixed by the principal argument of the root number at t = 0 and
    continued along t through the continuous log-Gamma.
    """
    eps = _root_number_cached(chi)
    ts = np.asarray(ts, dtype=float)
    lg = loggamma((0.5 + chi.kappa) / 2.0 + 0.5j * ts)
    return -cmath.phase(eps) / 2.0 + 0.5 * ts * math.log(chi.q / math.pi) + lg.imag


_QUIET_SIGMAS = (-1.0, -0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0)
_QUIET_GRID = 200


@dataclass(frozen=True)
class QuietOrdinate:
    t_star: float
    max_abs_log_derivative: float


def find_quiet_ordinate(chi: DirichletCharacter, t: float) -> QuietOrdinate:
    """An ordinate t* in [t, t+1] on which |L'/L| stays uniformly small
    across the strip, located by grid search; candidates bracketing a
    critical-line zero are skipped."""
    if t < 2.0:
        raise ValueError(f"quiet-ordinate search requires t >= 2, got {t}")
    _check_domain(complex(0, t + 1))
    cands = np.linspace(t, t + 1.0, _QUIET_GRID)
    grid = np.array([sig + 1j * tc for tc in cands for sig in _QUIET_SIGMAS])
    lvals, lders = _l_batch(grid, chi, want_deriv=True)
    lvals = lvals.reshape(_QUIET_GRID, len(_QUIET_SIGMAS))
    lders = lders.reshape(_QUIET_GRID, len(_QUIET_SIGMAS))

    # locate zeros among the candidates via the realness rotation at sigma = 1/2
    i_half = _QUIET_SIGMAS.index(0.5)
    zvals = (np.exp(1j * realness_phase(chi, cands)) * lvals[:, i_half]).real
    skip = np.zeros(_QUIET_GRID, dtype=bool)
    flips = np.flatnonzero(np.signbit(zvals[:-1]) != np.signbit(zvals[1:]))
    skip[flips] = True
    skip[flips + 1] = True
    skip |= (np.abs(lvals) < 1e-10).any(axis=1)

    maxima = np.abs(lders / lvals).max(axis=1)
    maxima[skip] = np.inf
    best = int(np.argmin(maxima))
    if not np.isfinite(maxima[best]):
        raise NearZeroError("every candidate ordinate sits next to a zero")
    return QuietOrdinate(t_star=float(cands[best]), max_abs_log_derivative=float(maxima[best]))
