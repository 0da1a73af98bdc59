"""Taylor coefficients of f about eta = 0 as exact polynomials in
alpha = f''(0), plus Pade approximant construction over numeric series.

The coefficient recurrence comes from substituting f = sum f_j eta^j into
the ODE and matching powers of eta (Cauchy products for the two quadratic
terms):

    (j+1)(j+2)(j+3) f_{j+3} = M^2 (j+1) f_{j+1}
        + sum_{k=0..j} (k+1)(j-k+1) f_{k+1} f_{j-k+1}
        - m sum_{k=0..j} (j-k+1)(j-k+2) f_k f_{j-k+2}

seeded by f_0 = s, f_1 = -1, f_2 = alpha/2. All arithmetic is exact over
rationals; the Hankel sign tests downstream depend on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .model import ModelParams


class DegenerateSystem(Exception):
    """The Pade denominator system is singular or too ill-conditioned."""


class PoleNear(Exception):
    """Pade evaluation requested too close to a denominator zero."""


def to_exact(value) -> Fraction:
    """Convert a parameter to an exact rational.

    Fractions, ints and decimal strings convert exactly. Floats are read
    through their shortest decimal repr, so a value entered as 1.8 becomes
    9/5 (not the binary expansion of the float). Irrational parameters
    have no exact representation; use the float-only ansatz/IVP paths.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"parameter {value!r} is not finite")
        return Fraction(repr(value))
    raise TypeError(f"cannot convert {type(value).__name__} to exact rational")


@dataclass(frozen=True)
class AlphaPolynomial:
    """Univariate polynomial in alpha with exact rational coefficients,
    coeffs[k] multiplying alpha^k. Canonical: trailing zeros trimmed, the
    zero polynomial is the empty tuple."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def make(coeffs: Sequence) -> "AlphaPolynomial":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return AlphaPolynomial(tuple(cs))

    @staticmethod
    def constant(c) -> "AlphaPolynomial":
        return AlphaPolynomial.make([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "AlphaPolynomial") -> "AlphaPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return AlphaPolynomial.make(out)

    def __mul__(self, other: "AlphaPolynomial") -> "AlphaPolynomial":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return AlphaPolynomial(())
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return AlphaPolynomial.make(out)

    def scale(self, c) -> "AlphaPolynomial":
        c = Fraction(c)
        if c == 0:
            return AlphaPolynomial(())
        return AlphaPolynomial(tuple(x * c for x in self.coeffs))

    def __call__(self, alpha: Fraction) -> Fraction:
        # Horner, highest degree first, for determinism
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * alpha + c
        return acc


@dataclass(frozen=True)
class TaylorTable:
    """Taylor coefficients f_0 .. f_J of f about eta = 0, each an exact
    polynomial in alpha. m2/m/s are the exact rational parameters (the
    recurrence only sees M^2, so negative M is equivalent to |M|)."""

    m2: Fraction
    m: Fraction
    s: Fraction
    entries: tuple[AlphaPolynomial, ...]

    @property
    def order(self) -> int:
        return len(self.entries) - 1


def taylor_table(params: ModelParams, order: int) -> TaylorTable:
    """Build f_0 .. f_order by the exact recurrence. Requires order >= 3."""
    if order < 3:
        raise ValueError(f"order must be >= 3, got {order}")
    m2 = to_exact(params.M) ** 2
    m = to_exact(params.m)
    s = to_exact(params.s)

    f = [
        AlphaPolynomial.constant(s),
        AlphaPolynomial.constant(-1),
        AlphaPolynomial.make([0, Fraction(1, 2)]),
    ]
    for j in range(order - 2):
        rhs = f[j + 1].scale(m2 * (j + 1))
        for k in range(j + 1):
            rhs = rhs + (f[k + 1] * f[j - k + 1]).scale((k + 1) * (j - k + 1))
            rhs = rhs + (f[k] * f[j - k + 2]).scale(-m * (j - k + 1) * (j - k + 2))
        f.append(rhs.scale(Fraction(1, (j + 1) * (j + 2) * (j + 3))))
    return TaylorTable(m2=m2, m=m, s=s, entries=tuple(f))


def evaluate_table(table: TaylorTable, alpha: Fraction) -> list[Fraction]:
    """Exact values [f_j(alpha)] for j = 0..order. No rounding anywhere."""
    alpha = Fraction(alpha)
    return [p(alpha) for p in table.entries]


@dataclass(frozen=True)
class PadeApproximant:
    """[L/K] rational approximant; den_coeffs[0] == 1."""

    num_coeffs: tuple[float, ...]
    den_coeffs: tuple[float, ...]


def pade(series: Sequence[float], L: int, K: int) -> PadeApproximant:
    """[L/K] Pade approximant of a Maclaurin series.

    Denominator coefficients solve the K x K Toeplitz system that matches
    orders L+1 .. L+K; the numerator follows by convolution.
    """
    c = [float(x) for x in series]
    if len(c) < L + K + 1:
        raise ValueError(f"need at least {L + K + 1} series coefficients, got {len(c)}")

    def cc(i):
        return c[i] if i >= 0 else 0.0

    if K == 0:
        den = [1.0]
    else:
        A = np.array([[cc(L + j - k) for k in range(1, K + 1)]
                      for j in range(1, K + 1)])
        rhs = -np.array([cc(L + j) for j in range(1, K + 1)])
        if np.linalg.cond(A) > 1e13:
            raise DegenerateSystem(
                f"Toeplitz system for [{L}/{K}] is singular or near-singular; "
                "retry with smaller K")
        d = np.linalg.solve(A, rhs)
        den = [1.0] + list(d)
    num = [sum(den[k] * cc(i - k) for k in range(min(i, K) + 1))
           for i in range(L + 1)]
    return PadeApproximant(tuple(num), tuple(den))


def _horner(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def pade_eval(p: PadeApproximant, eta: float) -> float:
    num = _horner(p.num_coeffs, eta)
    den = _horner(p.den_coeffs, eta)
    if abs(den) <= 1e-12 * (1.0 + abs(num)):
        raise PoleNear(f"denominator {den:g} too small at eta={eta:g}")
    return num / den
