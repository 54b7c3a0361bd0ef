"""Complex-coefficient univariate polynomials.

Coefficients are stored constant-first: ``Poly((c0, c1, c2))`` is
``c0 + c1*z + c2*z**2``. Values are immutable and hashable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

COEFF_RTOL = 1e-12


class RootFindingError(RuntimeError):
    """Raised when the simultaneous root iteration fails to converge."""

    def __init__(self, message: str, best: Sequence[complex]):
        super().__init__(message)
        self.best = tuple(best)


def _strip(coeffs: Iterable[complex]) -> tuple[complex, ...]:
    cs = [complex(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


@dataclass(frozen=True)
class Poly:
    coeffs: tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: complex = 1.0) -> "Poly":
        p = cls((lead,))
        for r in roots:
            p = p * cls((-r, 1.0))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> complex:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0j

    @property
    def lead(self) -> complex:
        return self.coeffs[-1] if self.coeffs else 0j

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self, tol: float = 0.0) -> bool:
        return all(abs(c.imag) <= tol for c in self.coeffs)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0.0)

    def __call__(self, z):
        return eval_poly(self, z)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "Poly":
        return Poly(c / scalar for c in self.coeffs)

    def compose_affine(self, scale: complex, shift: complex = 0.0) -> "Poly":
        """Return ``p(scale*z + shift)``."""
        out = Poly()
        lin = Poly((shift, scale))
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def integral(self) -> "Poly":
        """Antiderivative with zero constant term."""
        return Poly([0j] + [c / (i + 1) for i, c in enumerate(self.coeffs)])

    def allclose(self, other: "Poly", rtol: float = COEFF_RTOL) -> bool:
        other = _as_poly(other)
        scale = max(self.max_abs_coeff(), other.max_abs_coeff(), 1e-300)
        n = max(len(self.coeffs), len(other.coeffs))
        return all(abs(self.coeff(i) - other.coeff(i)) <= rtol * scale for i in range(n))

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        return f"Poly({list(self.coeffs)})"


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly((x,))


def eval_poly(p: Poly, z):
    """Horner evaluation; ``z`` may be a scalar or a numpy array."""
    acc = 0j if np.isscalar(z) else np.zeros_like(np.asarray(z), dtype=complex)
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return acc


def derivative(p: Poly) -> Poly:
    return Poly(i * c for i, c in enumerate(p.coeffs) if i > 0)


def poly_divmod(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Long division: ``num = q*den + r`` with ``deg r < deg den``."""
    if den.is_zero():
        raise ZeroDivisionError("polynomial division by zero polynomial")
    rem = list(num.coeffs)
    dd = den.degree
    if len(rem) - 1 < dd:
        return Poly(), Poly(rem)
    quot = [0j] * (len(rem) - dd)
    lead = den.lead
    for k in range(len(rem) - 1 - dd, -1, -1):
        c = rem[k + dd] / lead
        quot[k] = c
        for i, d in enumerate(den.coeffs):
            rem[k + i] -= c * d
    # leading entries are zero by construction; drop them exactly
    rem = rem[:dd]
    return Poly(quot), Poly(rem)


def _cauchy_bound(coeffs: Sequence[complex]) -> float:
    lead = abs(coeffs[-1])
    return 1.0 + max(abs(c) for c in coeffs[:-1]) / lead


def _residual_ok(p: Poly, r: complex, scale: float) -> bool:
    return abs(p(r)) <= COEFF_RTOL * scale * max(1.0, abs(r)) ** p.degree


def roots(p: Poly, maxiter: int = 500) -> list[complex]:
    """All complex roots (with multiplicity) by Aberth-Ehrlich iteration.

    Initial guesses sit on a slightly perturbed circle whose radius is the
    Cauchy bound. Each root is accepted once its residual satisfies
    ``|p(r)| <= 1e-12 * max|c| * max(1, |r|)**deg``.
    """
    n = p.degree
    if n < 1:
        raise ValueError("roots() needs a polynomial of degree >= 1")
    if n == 1:
        return [-p.coeffs[0] / p.coeffs[1]]
    dp = derivative(p)
    scale = p.max_abs_coeff()
    radius = _cauchy_bound(p.coeffs)
    z = np.array(
        [radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) * (1 + 0.01 * k / n) for k in range(n)]
    )
    done = np.zeros(n, dtype=bool)
    for _ in range(maxiter):
        for k in range(n):
            if done[k]:
                continue
            pk = p(z[k])
            dpk = dp(z[k])
            if pk == 0:
                done[k] = True
                continue
            ratio = pk / dpk if dpk != 0 else complex(radius * 1e-3)
            diffs = z[k] - np.delete(z, k)
            s = np.sum(1.0 / diffs) if np.all(diffs != 0) else 0.0
            step = ratio / (1 - ratio * s)
            z[k] -= step
            if abs(step) <= 4 * np.finfo(float).eps * max(abs(z[k]), 1e-300):
                done[k] = True
        if done.all():
            break
    # a few plain Newton polishes on stragglers
    for k in range(n):
        for _ in range(5):
            if _residual_ok(p, z[k], scale):
                break
            d = dp(z[k])
            if d == 0:
                break
            z[k] -= p(z[k]) / d
    if not all(_residual_ok(p, r, scale) for r in z):
        raise RootFindingError(f"Aberth iteration did not converge for degree {n}", z.tolist())
    return [complex(r) for r in z]


def hermite(n: int) -> Poly:
    """Physicists' Hermite polynomial H_n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    prev, cur = Poly((1.0,)), Poly((0.0, 2.0))
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, Poly((0.0, 2.0)) * cur - 2 * k * prev
    return cur


def laguerre(n: int, alpha: float) -> Poly:
    """Generalized Laguerre polynomial L_n^(alpha)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    prev, cur = Poly((1.0,)), Poly((1.0 + alpha, -1.0))
    if n == 0:
        return prev
    for k in range(1, n):
        # (k+1) L_{k+1} = (2k+1+alpha-z) L_k - (k+alpha) L_{k-1}
        nxt = (Poly((2 * k + 1 + alpha, -1.0)) * cur - (k + alpha) * prev) / (k + 1)
        prev, cur = cur, nxt
    return cur
