"""Exponential-sum approximation f(eta) ~ sum_{j=0..N} b_j exp(-beta j eta).

Substituting the ansatz into the ODE and collecting exp(-beta j eta) terms
gives residual modes, for j = 1 .. 2N:

    R_j = j beta (M^2 - j^2 beta^2) b_j                       (j <= N)
        - beta^2 sum_{i+k=j, i,k>=1} i k b_i b_k              (from -f'^2)
        + m beta^2 sum_{i+k=j, k>=1} k^2 b_i b_k              (from m f f'')

The constant b_0 drops out of the derivatives, so it only enters through
the m f f'' product; there is no independent mode-0 equation and b_0 is
fixed by the f(0) = s boundary row. The defining system is the two
boundary rows plus R_1 .. R_N = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import ModelParams


class ComplexDecay(Exception):
    """The N=1 discriminant 4M^2 + m^2 s^2 - 4m is negative."""


class RequiresNonzeroM(Exception):
    """The N=2 closed form divides by m; m = 0 is not admissible."""


class NoPhysicalRoot(Exception):
    """No real beta > 0 with a decaying coefficient sequence |b_2| < |b_1|."""


class NoConvergence(Exception):
    def __init__(self, msg, residual=None):
        super().__init__(msg)
        self.residual = residual


@dataclass(frozen=True)
class AnsatzSolution:
    N: int
    beta: float
    b: tuple[float, ...]  # b_0 .. b_N
    alpha_est: float      # beta^2 * sum j^2 b_j = implied f''(0)
    residual_norm: float  # max |R_j|, j = 1..N


@dataclass(frozen=True)
class ResidualModes:
    R: tuple[float, ...]  # R_1 .. R_{2N}


def _modes(params: ModelParams, beta: float, b) -> list[float]:
    M2 = params.M ** 2
    m = params.m
    N = len(b) - 1
    out = []
    for j in range(1, 2 * N + 1):
        r = 0.0
        if j <= N:
            r += j * beta * (M2 - j * j * beta * beta) * b[j]
        for i in range(max(1, j - N), min(N, j - 1) + 1):
            k = j - i
            r -= beta * beta * i * k * b[i] * b[k]
        for i in range(max(0, j - N), min(N, j - 1) + 1):
            k = j - i
            r += m * beta * beta * k * k * b[i] * b[k]
        out.append(r)
    return out


def residual_modes(params: ModelParams, sol: AnsatzSolution) -> ResidualModes:
    if sol.beta <= 0:
        raise ValueError("beta must be positive")
    return ResidualModes(tuple(_modes(params, sol.beta, sol.b)))


def _alpha_est(beta: float, b) -> float:
    return beta * beta * sum(j * j * bj for j, bj in enumerate(b))


def _finish(params: ModelParams, beta: float, b) -> AnsatzSolution:
    N = len(b) - 1
    beta = float(beta)
    R = _modes(params, beta, b)
    return AnsatzSolution(N=N, beta=beta, b=tuple(float(x) for x in b),
                          alpha_est=float(_alpha_est(beta, b)),
                          residual_norm=float(max(abs(r) for r in R[:N])))


def solve_n1(params: ModelParams) -> AnsatzSolution:
    """Closed-form N=1 solution: beta = (sqrt(4M^2 + m^2 s^2 - 4m) + ms)/2,
    b_1 = 1/beta, b_0 = s - 1/beta."""
    M2 = params.M ** 2
    m, s = params.m, params.s
    disc = 4 * M2 + m * m * s * s - 4 * m
    if disc < 0:
        raise ComplexDecay(f"discriminant {disc:g} < 0; decay rate is complex")
    beta = (math.sqrt(disc) + m * s) / 2
    if beta <= 0:
        raise ComplexDecay(f"closed-form beta {beta:g} is not positive")
    return _finish(params, beta, [s - 1 / beta, 1 / beta])


def _quartic_coeffs(params: ModelParams) -> list[float]:
    M2 = params.M ** 2
    m, s = params.m, params.s
    return [
        4.0,
        -4 * m * s * (2 - m),
        -2 * (2 * m * (m * m * s * s - m * s * s - 1) - M2 * (3 * m - 4)),
        -2 * m * s * (M2 * (5 * m - 4) - 2 * m * (m - 1)),
        -2 * M2 * M2 * (3 * m - 2) - 2 * M2 * m * (2 - 3 * m) - m * m * (m - 1),
    ]


def _n2_coeffs(params: ModelParams, beta: float) -> list[float]:
    M2 = params.M ** 2
    m, s = params.m, params.s
    b0 = (beta * beta - M2) / (m * beta)
    b1 = (2 * (M2 - beta * beta) + m * (2 * beta * s - 1)) / (m * beta)
    b2 = (beta * beta - M2 + m * (1 - beta * s)) / (m * beta)
    return [b0, b1, b2]


def solve_n2(params: ModelParams) -> AnsatzSolution:
    """Closed-form N=2 solution: beta is a positive real root of an
    explicit quartic, with b_0, b_1, b_2 rational in beta.

    Root selection (several positive roots are possible): keep roots with
    |b_2| < |b_1|, pick the one minimizing |b_2/b_1|, ties broken by
    proximity to the N=1 beta.
    """
    if params.m == 0:
        raise RequiresNonzeroM("the N=2 coefficient formulas divide by m")
    coeffs = _quartic_coeffs(params)
    roots = np.roots(coeffs)
    poly = np.polynomial.Polynomial(coeffs[::-1])
    dpoly = poly.deriv()
    try:
        beta1 = solve_n1(params).beta
    except ComplexDecay:
        beta1 = None

    candidates = []
    for r in roots:
        if abs(r.imag) > 1e-8 * (1 + abs(r)):
            continue
        beta = r.real
        # Newton polish against the exact quartic
        for _ in range(50):
            p, dp = poly(beta), dpoly(beta)
            if dp == 0:
                break
            step = p / dp
            beta -= step
            if abs(step) < 1e-15 * (1 + abs(beta)):
                break
        if beta <= 0:
            continue
        b = _n2_coeffs(params, beta)
        if abs(b[2]) >= abs(b[1]):
            continue
        ratio = abs(b[2] / b[1]) if b[1] != 0 else math.inf
        near = abs(beta - beta1) if beta1 is not None else 0.0
        candidates.append((ratio, near, beta, b))
    if not candidates:
        raise NoPhysicalRoot(
            "no real beta > 0 with a decaying coefficient sequence")
    candidates.sort(key=lambda t: (t[0], t[1]))
    _, _, beta, b = candidates[0]
    return _finish(params, beta, b)


def _system(params: ModelParams, x: np.ndarray, N: int) -> np.ndarray:
    b = x[:N + 1]
    beta = x[N + 1]
    g = np.empty(N + 2)
    g[0] = b.sum() - params.s
    g[1] = beta * sum(j * b[j] for j in range(N + 1)) - 1.0
    g[2:] = _modes(params, beta, b)[:N]
    return g


def _jacobian(params: ModelParams, x: np.ndarray, N: int) -> np.ndarray:
    M2 = params.M ** 2
    m = params.m
    b = x[:N + 1]
    beta = x[N + 1]
    J = np.zeros((N + 2, N + 2))
    J[0, :N + 1] = 1.0
    J[1, :N + 1] = [beta * j for j in range(N + 1)]
    J[1, N + 1] = sum(j * b[j] for j in range(N + 1))
    for row, j in enumerate(range(1, N + 1), start=2):
        # d R_j / d b_l
        J[row, j] += j * beta * (M2 - j * j * beta * beta)
        for l in range(N + 1):
            k = j - l
            if l >= 1 and 1 <= k <= N:
                J[row, l] += -2 * beta * beta * l * k * b[k]
            if 0 <= k <= N:
                # m-term: l as the f index (k as f'' index) and vice versa
                if k >= 1:
                    J[row, l] += m * beta * beta * k * k * b[k]
                if l >= 1:
                    J[row, l] += m * beta * beta * l * l * b[k]
        # d R_j / d beta
        db = j * (M2 - 3 * j * j * beta * beta) * b[j] if j <= N else 0.0
        for i in range(max(1, j - N), min(N, j - 1) + 1):
            db -= 2 * beta * i * (j - i) * b[i] * b[j - i]
        for i in range(max(0, j - N), min(N, j - 1) + 1):
            k = j - i
            db += 2 * m * beta * k * k * b[i] * b[k]
        J[row, N + 1] = db
    return J


def solve_general(params: ModelParams, N: int,
                  init: Optional[AnsatzSolution] = None) -> AnsatzSolution:
    """Damped Newton on the (N+2)-equation defining system with an
    analytically assembled Jacobian. Seeds from `init`, else the N=2
    closed form padded with zeros, else N=1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if init is None:
        try:
            init = solve_n2(params) if N >= 2 else solve_n1(params)
        except (RequiresNonzeroM, NoPhysicalRoot):
            init = solve_n1(params)
    b0 = list(init.b[:N + 1]) + [0.0] * (N - init.N)
    x = np.array(b0 + [init.beta])

    g = _system(params, x, N)
    norm = np.max(np.abs(g))
    for _ in range(100):
        if norm < 1e-13:
            break
        J = _jacobian(params, x, N)
        try:
            step = np.linalg.solve(J, g)
        except np.linalg.LinAlgError as e:
            raise NoConvergence(f"singular Jacobian: {e}", residual=norm)
        lam = 1.0
        for _ in range(20):
            x_new = x - lam * step
            g_new = _system(params, x_new, N)
            norm_new = np.max(np.abs(g_new))
            if norm_new < norm:
                break
            lam *= 0.5
        x, g, norm = x_new, g_new, norm_new
    if norm >= 1e-10:
        raise NoConvergence(f"Newton stalled at residual {norm:g}", residual=norm)
    beta = float(x[N + 1])
    if beta <= 0:
        raise NoConvergence(f"converged to nonphysical beta {beta:g}", residual=norm)
    return _finish(params, beta, x[:N + 1])


def eval_ansatz(sol: AnsatzSolution, eta: float, derivative: int = 0) -> float:
    """d^k/deta^k of the ansatz: sum_j b_j (-j beta)^k exp(-j beta eta)."""
    if derivative not in (0, 1, 2):
        raise ValueError("derivative must be 0, 1 or 2")
    acc = 0.0
    for j, bj in enumerate(sol.b):
        acc += bj * (-j * sol.beta) ** derivative * math.exp(-j * sol.beta * eta)
    return acc
