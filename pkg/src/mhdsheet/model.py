"""Model definition for the shrinking-sheet similarity equation.

The third-order ODE

    f'''(eta) - M^2 f'(eta) - f'(eta)^2 + m f(eta) f''(eta) = 0

with f(0) = s, f'(0) = -1 and f'(eta) -> 0 as eta -> infinity. The unknown
shooting parameter is alpha = f''(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless model parameters: Hartmann number M, coefficient m of
    the f*f'' term, and suction parameter s = f(0)."""

    M: float
    m: float
    s: float

    def __post_init__(self):
        for name in ("M", "m", "s"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"parameter {name} must be finite, got {v!r}")


@dataclass(frozen=True)
class BoundaryData:
    """Boundary values implied by the model: f(0)=s, f'(0)=-1, f'(inf)=0.

    Derived from ModelParams, never constructed independently, so the
    problem statement cannot become inconsistent.
    """

    f0: float
    fp0: float = -1.0
    fp_inf: float = 0.0


def boundary_data(params: ModelParams) -> BoundaryData:
    return BoundaryData(f0=params.s)


def ode_residual(params: ModelParams, f: float, fp: float, fpp: float,
                 fppp: float) -> float:
    """Pointwise residual of the ODE; zero on any true solution point."""
    return fppp - params.M ** 2 * fp - fp ** 2 + params.m * f * fpp


def fppp_at_origin(params: ModelParams, alpha: float) -> float:
    """The unique f'''(0) consistent with the ODE and the boundary data,
    given f''(0) = alpha."""
    return -params.M ** 2 + 1.0 - params.m * params.s * alpha
