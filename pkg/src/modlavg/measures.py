"""Satake-parameter measures on [-2, 2] and their spectral densities.

For a prime p and a sign delta = chi(p), the split measure (delta = +1) and
the inert measure (delta = -1, the unramified Plancherel measure) are

    split: (p-1)/(2 pi) * sqrt(4 - x^2) / (sqrt(p) + 1/sqrt(p) - x)^2
    inert: (p+1)/(2 pi) * sqrt(4 - x^2) / ((sqrt(p) + 1/sqrt(p))^2 - x^2)

Both are probability measures and tend to the semicircle (Sato-Tate) measure
as p grows.  The module also provides the Hecke-operator transfer polynomials
(traces of the double-coset functions on unramified principal series), an
independent coset-sum oracle for them, and the generating density F with its
even/odd coefficient series.

Internally integrals over x in [-2, 2] use the substitution x = 2 cos(theta),
theta in [0, pi], which removes the square-root endpoint behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleError
from .numerics import QuadratureSpec, integrate, interval

__all__ = [
    "SatakeMeasure",
    "SatakePolynomial",
    "density",
    "sato_tate_density",
    "mass",
    "satake_poly",
    "coset_list",
    "satake_coset_oracle",
    "moment",
    "basis_moment",
    "spectral_density",
    "spectral_density_series",
    "series_coefficient",
    "real_part_density",
    "density_change_of_variables_check",
    "sato_tate_limit_check",
]


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
        raise ValueError(f"p = {p} is not prime")


@dataclass(frozen=True)
class SatakeMeasure:
    """Measure on [-2, 2] attached to a prime p and a sign chi(p)."""

    p: int
    sign: int  # chi(p), +1 (split) or -1 (inert / Plancherel)

    def __post_init__(self):
        _check_prime(self.p)
        if self.sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")


def density(m: SatakeMeasure, x: float) -> float:
    """Density of the measure at x in [-2, 2]; zero at the endpoints."""
    if not -2.0 <= x <= 2.0:
        raise DomainError(f"x = {x} outside [-2, 2]")
    p = m.p
    root = math.sqrt(max(4.0 - x * x, 0.0))
    c = math.sqrt(p) + 1.0 / math.sqrt(p)
    if m.sign == +1:
        return (p - 1) / (2.0 * math.pi) * root / (c - x) ** 2
    return (p + 1) / (2.0 * math.pi) * root / (c * c - x * x)


def sato_tate_density(x: float) -> float:
    """Semicircle density, the large-p limit of both measures."""
    if not -2.0 <= x <= 2.0:
        raise DomainError(f"x = {x} outside [-2, 2]")
    return math.sqrt(max(4.0 - x * x, 0.0)) / (2.0 * math.pi)


def _integrate_against(m: SatakeMeasure, f, rel_tol=1e-12) -> float:
    """Integral of f(x) against the measure, in the theta coordinate."""
    p = m.p
    c = math.sqrt(p) + 1.0 / math.sqrt(p)

    if m.sign == +1:
        def w(th):
            s = math.sin(th)
            return (p - 1) / math.pi * (2.0 * s * s) / (c - 2.0 * math.cos(th)) ** 2
    else:
        def w(th):
            s = math.sin(th)
            x = 2.0 * math.cos(th)
            return (p + 1) / math.pi * (2.0 * s * s) / (c * c - x * x)

    spec = QuadratureSpec(domain=interval(0.0, math.pi),
                          rel_tol=rel_tol, abs_tol=1e-14)
    res = integrate(lambda th: f(2.0 * math.cos(th)) * w(th), spec)
    return res.require().real


def mass(m: SatakeMeasure) -> float:
    return _integrate_against(m, lambda x: 1.0)


# ---------------------------------------------------------------------------
# transfer polynomials psi_n and the coset-sum oracle
# ---------------------------------------------------------------------------

def chebyshev_x(j: int, x):
    """X_j(x) = 2 cos(j theta) under x = 2 cos(theta); X_0 = 2."""
    if j == 0:
        return 2.0 if not isinstance(x, complex) else complex(2.0)
    prev, cur = 2.0, x
    for _ in range(j - 1):
        prev, cur = cur, x * cur - prev
    return cur


@dataclass(frozen=True)
class SatakePolynomial:
    """p-normalized trace polynomial of the n-th Hecke double coset.

    Stored on the basis {1, X_1, X_2, ...}: coefficient 1 on X_n and
    (1 - 1/p) on every lower index of the same parity (index 0 standing for
    the constant 1, not X_0 = 2).  The full transfer is p^(n/2) times this.
    """

    n: int
    p: int
    coeffs: tuple  # pairs (j, coefficient)

    def evaluate(self, x):
        total = 0.0 if not isinstance(x, complex) else 0.0j
        for j, cf in self.coeffs:
            base = 1.0 if j == 0 else chebyshev_x(j, x)
            total = total + cf * base
        return total

    def __call__(self, x):
        return self.evaluate(x)


def satake_poly(n: int, p: int) -> SatakePolynomial:
    if n < 0:
        raise ValueError("index n must be >= 0")
    _check_prime(p)
    if n == 0:
        return SatakePolynomial(n=0, p=p, coeffs=((0, 1.0),))
    coeffs = [(n, 1.0)]
    low = 1.0 - 1.0 / p
    j = n - 2
    while j >= 0:
        coeffs.append((j, low))
        j -= 2
    return SatakePolynomial(n=n, p=p, coeffs=tuple(coeffs))


def coset_list(n: int, p: int) -> list:
    """Single-coset data (a, d, multiplicity) for the n-th double coset.

    Representatives are upper triangular with diagonal (p^a, p^d); the
    multiplicity counts the admissible top-right entries.
    """
    if n < 0:
        raise ValueError("index n must be >= 0")
    _check_prime(p)
    if n == 0:
        return [(0, 0, 1)]
    out = [(n, 0, p ** n)]
    for k in range(1, n + 1):
        mult = 1 if k == n else p ** (n - k) - p ** (n - k - 1)
        out.append((n - k, k, mult))
    return out


def satake_coset_oracle(n: int, p: int, s: complex) -> complex:
    """Trace of the n-th double-coset function on unramified principal series.

    Sums the half-density-twisted central character over the explicit single
    cosets; must equal p^(n/2) * psi_n(p^s + p^(-s)).
    """
    total = 0.0j
    for a, d, mult in coset_list(n, p):
        diff = a - d
        total += mult * p ** (-diff / 2.0) * p ** (-diff * complex(s))
    return total


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------

def moment(m: SatakeMeasure, n: int) -> float:
    """Measure of the n-th Hecke double-coset function.

    Integrates the full transfer p^(n/2) psi_n against the measure.  The
    contract: 1 for n = 0; for n >= 1, 2 when sign = +1 and 0 when -1.
    """
    if n < 0:
        raise ValueError("index n must be >= 0")
    psi = satake_poly(n, m.p)
    scale = m.p ** (n / 2.0)
    return scale * _integrate_against(m, psi.evaluate)


def basis_moment(m: SatakeMeasure, n: int) -> float:
    """Integral of the basis function X_n (X_0 = 2) against the measure."""
    return _integrate_against(m, lambda x: chebyshev_x(n, x))


def sato_tate_basis_moment(n: int) -> float:
    """Integral of X_n against the semicircle measure (2 for n = 0, else 0)."""
    spec = QuadratureSpec(domain=interval(0.0, math.pi), rel_tol=1e-12,
                          abs_tol=1e-14)
    res = integrate(
        lambda th: chebyshev_x(n, 2.0 * math.cos(th))
        * (2.0 / math.pi) * math.sin(th) ** 2,
        spec,
    )
    return res.require().real


# ---------------------------------------------------------------------------
# the generating density F and its series
# ---------------------------------------------------------------------------

def _sign_power_ratio(m: int, delta: complex) -> complex:
    """(delta^m - delta^(-m)) / (delta - delta^(-1)) as a polynomial limit.

    Evaluated as delta^(m-1) + delta^(m-3) + ... + delta^(1-m), which is
    well defined at delta = +-1 (value m * delta^(m-1)).
    """
    if m <= 0:
        return 0.0 + 0.0j
    return sum(complex(delta) ** (m - 1 - 2 * j) for j in range(m))


def series_coefficient(n: int, p: int, delta: complex) -> complex:
    """Coefficient C_n of p^(n(s - 1/2)) in the density series; C_0 = 1."""
    if n == 0:
        return 1.0 + 0.0j
    d = complex(delta)
    return d ** n + d ** (-n) - (p - 1) * _sign_power_ratio(n - 1, d)


def spectral_density(p: int, delta: complex, s: complex) -> complex:
    """Closed form (1 - p^(2s)) / ((1 - T/delta)(1 - delta T)), T = p^(s-1/2)."""
    _check_prime(p)
    d = complex(delta)
    if d == 0:
        raise ValueError("delta must be nonzero")
    t = p ** (complex(s) - 0.5)
    denom = (1.0 - t / d) * (1.0 - d * t)
    if abs(denom) < 1e-14:
        raise PoleError(f"spectral density pole at T = {t}")
    return (1.0 - p ** (2.0 * complex(s))) / denom


def spectral_density_series(p: int, delta: complex, s: complex,
                            terms: int = 50) -> complex:
    """Truncated series for the density, summed by parity depth.

    ``terms`` counts coefficients per parity part (even indices up to
    2*terms, odd up to 2*terms - 1), so the truncation error is of order
    p^(-terms) times a linear factor.
    """
    t = p ** (complex(s) - 0.5)
    total = 1.0 + 0.0j
    tn = 1.0 + 0.0j
    for n in range(1, 2 * terms + 1):
        tn = tn * t
        total += series_coefficient(n, p, delta) * tn
    return total


def real_part_density(p: int, s: complex) -> complex:
    """(F(s) + F(-s))/2 in its displayed closed form, for delta = 1."""
    num = (1.0 - 1.0 / p) * (2.0 - p ** (2 * complex(s)) - p ** (-2 * complex(s)))
    den = (1.0 + 1.0 / p - p ** (-0.5 + complex(s)) - p ** (-0.5 - complex(s))) ** 2
    return 0.5 * num / den


def density_change_of_variables_check(p: int, grid_points: int = 1000) -> float:
    """Transport the s-line density to [-2, 2] and compare with the split
    density pointwise; returns the maximum discrepancy over the grid."""
    m = SatakeMeasure(p=p, sign=+1)
    logp = math.log(p)
    xs = np.linspace(-2.0, 2.0, grid_points + 2)[1:-1]
    worst = 0.0
    for x in xs:
        theta = math.acos(x / 2.0)
        s = 1j * theta / logp
        mu_s = real_part_density(p, s).real
        transported = mu_s / (math.pi * math.sqrt(4.0 - x * x))
        worst = max(worst, abs(transported - density(m, x)))
    return worst


def sato_tate_limit_check(sign: int, n: int, primes) -> dict:
    """Moments of X_n along a prime sequence, with the semicircle target."""
    primes = list(primes)
    if any(q >= r for q, r in zip(primes, primes[1:])):
        raise ValueError("prime sequence must be increasing")
    vals = [basis_moment(SatakeMeasure(p=q, sign=sign), n) for q in primes]
    target = sato_tate_basis_moment(n)
    return {"primes": primes, "moments": vals, "limit": target}
