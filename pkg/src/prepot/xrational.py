"""Rationally extended radial oscillator built on exceptional Laguerre polynomials.

With z = x^2 and deforming function xi(z) = L_ell^(alpha)(z), alpha < -ell:

    V(x)  = x^2 + (alpha+1/2)(alpha+3/2)/x^2
            + 8 g [z (g - 1) + alpha + 1/2] + 2(2 ell - alpha),   g = xi'/xi
    phi_n = exp(-x^2/2) x^-(alpha+1/2) p_n(z) / xi(z)
    p_n   = (alpha - n) L_n^(-alpha-1) xi + z L_n^(-alpha) xi'
    E_n   = 4 (n - alpha - ell)

For ell = 0 (xi = 1) this is the ordinary radial oscillator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bae import RootSet
from .poly import Poly, derivative, laguerre, roots
from .spectrum import GridError, GridSpec, QesState, count_nodes, integrate

ZERO_FREE_TOL = 1e-10


class ExtendedSpecError(ValueError):
    pass


@dataclass(frozen=True)
class ExtendedSpec:
    ell: int
    alpha: float

    def __post_init__(self):
        if self.ell < 0:
            raise ExtendedSpecError("ell must be a non-negative integer")
        if not self.alpha < -self.ell:
            raise ExtendedSpecError(f"need alpha < -ell, got alpha={self.alpha}, ell={self.ell}")

    def to_dict(self) -> dict:
        return {"ell": self.ell, "alpha": self.alpha}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "ExtendedSpec":
        return cls(int(data["ell"]), float(data["alpha"]))


def deforming_function(ell: int, alpha: float) -> Poly:
    """L_ell^(alpha), verified to have no zeros on [0, inf)."""
    p = laguerre(ell, alpha)
    if p.degree >= 1:
        for r in roots(p):
            if abs(r.imag) <= ZERO_FREE_TOL and r.real >= -ZERO_FREE_TOL:
                raise ExtendedSpecError(f"xi has a zero at z={r.real:.6g} in the physical domain")
    return p


def xi(spec: ExtendedSpec) -> Poly:
    return deforming_function(spec.ell, spec.alpha)


def potential_from_xi(xi_poly: Poly, ell: int, alpha: float, x):
    x = np.asarray(x, dtype=float)
    z = x * x
    g = (derivative(xi_poly)(z) / xi_poly(z)).real
    return x * x + (alpha + 0.5) * (alpha + 1.5) / (x * x) + 8 * g * (z * (g - 1) + alpha + 0.5) + 2 * (2 * ell - alpha)


def extended_potential(spec: ExtendedSpec, x):
    if np.any(np.asarray(x) <= 0):
        raise GridError("extended potential is defined for x > 0")
    return potential_from_xi(xi(spec), spec.ell, spec.alpha, x)


def p_ln(spec: ExtendedSpec, n: int) -> Poly:
    if n < 0:
        raise ValueError("n must be non-negative")
    a = spec.alpha
    x = xi(spec)
    return (a - n) * laguerre(n, -a - 1) * x + Poly((0.0, 1.0)) * laguerre(n, -a) * derivative(x)


def extended_energy(spec: ExtendedSpec, n: int) -> float:
    return 4.0 * (n - spec.alpha - spec.ell)


def extended_phi(spec: ExtendedSpec, n: int, x):
    """Unnormalized eigenfunction (real-valued)."""
    x = np.asarray(x, dtype=float)
    z = x * x
    xp = xi(spec)
    p = p_ln(spec, n)
    return (np.exp(-z / 2) * x ** (-(spec.alpha + 0.5)) * p(z) / xp(z)).real


def extended_state(spec: ExtendedSpec, n: int, grid: GridSpec) -> QesState:
    if grid.x_min <= 0:
        raise GridError("extended states need a grid on (0, x_max]")
    vals = extended_phi(spec, n, grid.x)
    peak = float(np.max(np.abs(vals)))
    if abs(vals[-1]) > 1e-10 * peak:
        raise GridError(f"state n={n} not decayed at x={grid.x_max}; use a larger grid")
    norm = math.sqrt(float(integrate(vals**2, grid)))
    vals = vals / norm
    E = complex(extended_energy(spec, n))
    return QesState(E, vals.astype(complex), norm, count_nodes(vals), RootSet(()), grid)
