"""Model construction from the polynomial pair (P, Q).

A model is fixed by ``P(z) = W0'(x) z'(x)`` and ``Q(z) = z'(x)**2`` plus the
level count ``N``. From these we build the coordinate map ``z(x)``, the
prepotential ``W0``, the pole-free potential and the eigenvalue.

Conventions (hbar = 2m = 1):

* ``V0(z) = (P**2 - Q P' + P Q'/2) / Q = S(z) + pole terms``
* physical potential ``V(z) = S(z) - S0 + pole terms - 2 A2 N z``
* eigenvalue ``E = -(S0 + q2 N**2 - 2 A1 N - 2 A2 sum(z_k))``
"""

from __future__ import annotations

import cmath
import enum
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .poly import Poly, derivative, eval_poly, poly_divmod

ZERO_TOL = 1e-12


class ModelError(ValueError):
    """Raised for specs outside the constructible model class."""


class Solvability(enum.Enum):
    EXACTLY_SOLVABLE = "ExactlySolvable"
    QUASI_EXACTLY_SOLVABLE = "QuasiExactlySolvable"
    SINGLE_STATE = "SingleState"


def _coeffs_to_json(p: Poly, width: int = 3) -> list[list[float]]:
    cs = list(p.coeffs) + [0j] * max(0, width - len(p.coeffs))
    return [[c.real, c.imag] for c in cs]


def _coeffs_from_json(data) -> Poly:
    out = []
    for c in data:
        if isinstance(c, (list, tuple)):
            if len(c) != 2:
                raise ModelError(f"coefficient must be [re, im], got {c!r}")
            out.append(complex(float(c[0]), float(c[1])))
        else:
            out.append(complex(float(c)))
    return Poly(out)


@dataclass(frozen=True)
class ModelSpec:
    P: Poly
    Q: Poly
    N: int = 0
    label: str = ""

    def __post_init__(self):
        if self.Q.is_zero():
            raise ModelError("Q must not be the zero polynomial")
        if self.N < 0:
            raise ModelError("N must be non-negative")

    @property
    def m(self) -> int:
        return self.P.degree

    @property
    def n(self) -> int:
        return self.Q.degree

    def with_N(self, N: int) -> "ModelSpec":
        return ModelSpec(self.P, self.Q, N, self.label)

    def is_hermitian(self) -> bool:
        return self.P.is_real() and self.Q.is_real()

    def to_dict(self) -> dict:
        return {"P": _coeffs_to_json(self.P), "Q": _coeffs_to_json(self.Q), "N": self.N, "label": self.label}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        try:
            return cls(
                _coeffs_from_json(data["P"]),
                _coeffs_from_json(data["Q"]),
                int(data.get("N", 0)),
                str(data.get("label", "")),
            )
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed model spec: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelError(f"malformed JSON: {exc}") from exc
        return cls.from_dict(data)


def classify(spec: ModelSpec) -> Solvability:
    m, n = spec.P.degree, spec.Q.degree
    if n <= 2 and m <= 1:
        return Solvability.EXACTLY_SOLVABLE
    if n <= 2 and m == 2:
        return Solvability.QUASI_EXACTLY_SOLVABLE
    return Solvability.SINGLE_STATE


# --------------------------------------------------------------------------
# coordinate maps


@dataclass(frozen=True)
class CoordinateMap:
    """Real change of variables with ``z'(x)**2 = Q(z(x))``.

    ``kind`` is ``Linear`` (Q = gamma), ``Quadratic`` (Q = beta z + q0) or
    ``Quadratic2`` (Q = alpha((z + s)**2 + delta)); ``form`` picks the
    explicit function for ``Quadratic2`` (sinh, cosh, exp or sin).
    """

    kind: str
    params: dict
    form: str
    domain: tuple[float, float]

    def z_of_x(self, x):
        p = self.params
        if self.kind == "Linear":
            return math.sqrt(p["gamma"]) * (x if np.isscalar(x) else np.asarray(x, dtype=float))
        if self.kind == "Quadratic":
            return p["beta"] * np.square(x) / 4 + p["zeta"]
        a, d, s = p["alpha"], p["delta"], p["shift"]
        if self.form == "sinh":
            w = math.sqrt(d) * np.sinh(math.sqrt(a) * x)
        elif self.form == "cosh":
            w = math.sqrt(-d) * np.cosh(math.sqrt(a) * x)
        elif self.form == "exp":
            w = np.exp(math.sqrt(a) * x)
        else:
            w = math.sqrt(-d) * np.sin(math.sqrt(-a) * x)
        return w - s

    def dz_dx(self, x):
        p = self.params
        if self.kind == "Linear":
            return math.sqrt(p["gamma"]) * np.ones_like(np.asarray(x, dtype=float))
        if self.kind == "Quadratic":
            return p["beta"] * np.asarray(x, dtype=float) / 2
        a, d = p["alpha"], p["delta"]
        if self.form == "sinh":
            return math.sqrt(d * a) * np.cosh(math.sqrt(a) * x)
        if self.form == "cosh":
            return math.sqrt(-d * a) * np.sinh(math.sqrt(a) * x)
        if self.form == "exp":
            return math.sqrt(a) * np.exp(math.sqrt(a) * x)
        return math.sqrt(d * a) * np.cos(math.sqrt(-a) * x)

    def x_of_z(self, z):
        p = self.params
        if self.kind == "Linear":
            return np.asarray(z, dtype=float) / math.sqrt(p["gamma"])
        if self.kind == "Quadratic":
            return np.sqrt(4 * (np.asarray(z, dtype=float) - p["zeta"]) / p["beta"])
        a, d, s = p["alpha"], p["delta"], p["shift"]
        w = np.asarray(z, dtype=float) + s
        if self.form == "sinh":
            return np.arcsinh(w / math.sqrt(d)) / math.sqrt(a)
        if self.form == "cosh":
            return np.arccosh(w / math.sqrt(-d)) / math.sqrt(a)
        if self.form == "exp":
            return np.log(w) / math.sqrt(a)
        return np.arcsin(w / math.sqrt(-d)) / math.sqrt(-a)

    def in_domain(self, x) -> bool:
        lo, hi = self.domain
        x = np.asarray(x, dtype=float)
        return bool(np.all((x > lo) & (x < hi)))

    @property
    def growth(self) -> str:
        """How |z| grows at an infinite endpoint: ``power1``, ``power2`` or ``exp``."""
        return {"Linear": "power1", "Quadratic": "power2"}.get(self.kind, "exp")


def coordinate_map(Q: Poly) -> CoordinateMap:
    if not Q.is_real():
        raise ModelError("Q must have real coefficients for a real coordinate map")
    q0, q1, q2 = (Q.coeff(i).real for i in range(3))
    if Q.degree > 2:
        raise ModelError("Q must have degree <= 2")
    if Q.degree == 0:
        if q0 <= 0:
            raise ModelError("Q = gamma requires gamma > 0")
        return CoordinateMap("Linear", {"gamma": q0}, "linear", (-math.inf, math.inf))
    if Q.degree == 1:
        if q1 <= 0:
            raise ModelError("Q = beta z + q0 requires beta > 0")
        return CoordinateMap("Quadratic", {"beta": q1, "zeta": -q0 / q1}, "quadratic", (0.0, math.inf))
    shift = q1 / (2 * q2)
    delta = q0 / q2 - shift**2
    if abs(delta) <= ZERO_TOL * max(1.0, abs(q0 / q2), shift**2):
        delta = 0.0
    params = {"alpha": q2, "delta": delta, "shift": shift}
    if q2 > 0 and delta > 0:
        return CoordinateMap("Quadratic2", params, "sinh", (-math.inf, math.inf))
    if q2 > 0 and delta < 0:
        return CoordinateMap("Quadratic2", params, "cosh", (0.0, math.inf))
    if q2 > 0:
        return CoordinateMap("Quadratic2", params, "exp", (-math.inf, math.inf))
    if delta < 0:
        half = math.pi / (2 * math.sqrt(-q2))
        return CoordinateMap("Quadratic2", params, "sin", (-half, half))
    raise ModelError("Q = alpha(z^2 + delta) with alpha < 0, delta >= 0 has no real map")


# --------------------------------------------------------------------------
# partial fractions


@dataclass(frozen=True)
class PoleTerm:
    location: complex
    order: int
    coeff: complex

    def __call__(self, z):
        return self.coeff / (z - self.location) ** self.order


def _quadratic_roots(Q: Poly) -> tuple[complex, complex]:
    c, b, a = Q.coeff(0), Q.coeff(1), Q.coeff(2)
    disc = cmath.sqrt(b * b - 4 * a * c)
    # stable form avoids cancellation
    sgn = 1 if (b.conjugate() * disc).real >= 0 else -1
    t = -(b + sgn * disc) / 2
    r1 = t / a
    r2 = c / t if t != 0 else -b / a - r1
    return r1, r2


def partial_fractions(num: Poly, Q: Poly) -> tuple[Poly, list[PoleTerm]]:
    """Split ``num/Q`` into a polynomial and pole terms over the roots of Q."""
    quot, rem = poly_divmod(num, Q)
    if Q.degree == 0 or rem.is_zero():
        return quot, []
    if Q.degree == 1:
        zeta = -Q.coeff(0) / Q.coeff(1)
        return quot, [PoleTerm(zeta, 1, rem.coeff(0) / Q.coeff(1))]
    if Q.degree != 2:
        raise ModelError("partial fractions implemented for deg Q <= 2 only")
    z1, z2 = _quadratic_roots(Q)
    q2 = Q.coeff(2)
    scale = max(1.0, abs(z1), abs(z2))
    if abs(z1 - z2) > 1e-9 * scale:
        dQ = derivative(Q)
        terms = [PoleTerm(z, 1, rem(z) / dQ(z)) for z in (z1, z2)]
        return quot, [t for t in terms if t.coeff != 0]
    zeta = (z1 + z2) / 2
    terms = [PoleTerm(zeta, 2, rem(zeta) / q2), PoleTerm(zeta, 1, rem.coeff(1) / q2)]
    return quot, [t for t in terms if t.coeff != 0]


# --------------------------------------------------------------------------
# prepotential


def _is_real_point(zeta: complex) -> bool:
    return abs(zeta.imag) <= ZERO_TOL * max(1.0, abs(zeta))


@dataclass(frozen=True)
class Prepotential:
    """Closed form of ``W0(z) = integral of P/Q dz`` as a list of terms.

    The polynomial part integrates termwise; simple poles give logarithms and
    double poles give ``-c/(z - zeta)``. Logs of real-located poles use
    ``log|z - zeta|``; complex locations use the principal branch, which is
    continuous along real z.
    """

    poly: Poly
    poles: tuple[PoleTerm, ...]
    cmap: CoordinateMap

    def of_z(self, z):
        z = np.asarray(z, dtype=float) if not np.isscalar(z) else z
        out = eval_poly(self.poly, z)
        for t in self.poles:
            if t.order == 1:
                if _is_real_point(t.location):
                    out = out + t.coeff * np.log(np.abs(z - t.location.real))
                else:
                    out = out + t.coeff * np.log(z - t.location + 0j)
            else:
                out = out - t.coeff / (z - t.location)
        return out

    def __call__(self, x):
        return self.of_z(self.cmap.z_of_x(x))

    def terms(self) -> list[dict]:
        out = [{"kind": "poly", "coeffs": [[c.real, c.imag] for c in self.poly.coeffs]}]
        for t in self.poles:
            kind = "log" if t.order == 1 else "inverse"
            out.append({"kind": kind, "coeff": [t.coeff.real, t.coeff.imag], "at": [t.location.real, t.location.imag]})
        return out


def prepotential_W0(spec: ModelSpec) -> Prepotential:
    cmap = coordinate_map(spec.Q)
    quot, poles = partial_fractions(spec.P, spec.Q)
    return Prepotential(quot.integral(), tuple(poles), cmap)


def _lead_real(p: Poly) -> tuple[int, float]:
    """Highest power >= 1 whose coefficient has a nonzero real part."""
    scale = max(p.max_abs_coeff(), 1e-300)
    for k in range(p.degree, 0, -1):
        re = p.coeff(k).real
        if abs(re) > ZERO_TOL * scale:
            return k, re
    return 0, 0.0


def _infinite_end_ok(w0: Prepotential, sign: int) -> bool:
    k, re = _lead_real(w0.poly)
    if k:
        return re * sign**k > 0
    L = sum(t.coeff for t in w0.poles if t.order == 1).real
    growth = w0.cmap.growth
    if growth == "power1":
        return 2 * L > 1
    if growth == "power2":
        return 4 * L > 1
    return L > 0


def _finite_root_end_ok(w0: Prepotential, zeta: float) -> bool:
    # z - zeta ~ (x - x_end)**2, so phi ~ |x - x_end|**(-2c)
    c = sum(t.coeff for t in w0.poles if t.order == 1 and abs(t.location - zeta) <= 1e-9 * max(1, abs(zeta)))
    return -2 * c.real > -0.5


def _double_root_end_ok(w0: Prepotential) -> bool:
    c2 = sum(t.coeff for t in w0.poles if t.order == 2).real
    if abs(c2) > ZERO_TOL:
        return c2 < 0
    c1 = sum(t.coeff for t in w0.poles if t.order == 1).real
    return c1 < 0


def normalizable(spec: ModelSpec) -> bool:
    """Square-integrability of ``exp(-W0)`` from endpoint asymptotics."""
    w0 = prepotential_W0(spec)
    cmap = w0.cmap
    if cmap.kind == "Linear" or cmap.form == "sinh":
        return _infinite_end_ok(w0, -1) and _infinite_end_ok(w0, +1)
    if cmap.kind == "Quadratic":
        return _finite_root_end_ok(w0, cmap.params["zeta"]) and _infinite_end_ok(w0, +1)
    s, d = cmap.params["shift"], cmap.params["delta"]
    if cmap.form == "cosh":
        return _finite_root_end_ok(w0, math.sqrt(-d) - s) and _infinite_end_ok(w0, +1)
    if cmap.form == "exp":
        return _double_root_end_ok(w0) and _infinite_end_ok(w0, +1)
    r = math.sqrt(-d)
    return _finite_root_end_ok(w0, -r - s) and _finite_root_end_ok(w0, r - s)


# --------------------------------------------------------------------------
# potential and energy


@dataclass(frozen=True)
class RationalPotential:
    S: Poly
    pole_terms: tuple[PoleTerm, ...]
    S0: complex
    linear_N_term: complex  # multiplies N*z
    q2: complex
    A1: complex
    A2: complex

    def poles_at(self, z):
        out = 0j
        for t in self.pole_terms:
            out = out + t(z)
        return out

    def v0(self, z):
        return eval_poly(self.S, z) + self.poles_at(z)

    def constant(self, N: int, roots: Sequence[complex]) -> complex:
        return self.S0 + self.q2 * N**2 - 2 * self.A1 * N - 2 * self.A2 * complex(sum(roots, 0j))

    def energy(self, N: int, roots: Sequence[complex]) -> complex:
        return -self.constant(N, roots)

    def physical(self, z, N: int):
        """Potential of the Schroedinger problem with eigenvalue ``energy``."""
        return self.v0(z) - self.S0 + self.linear_N_term * N * z

    def pole_free(self, z, N: int, roots: Sequence[complex]):
        """``V_N`` with the Bethe ansatz equations imposed (``H_N phi = 0``)."""
        return self.v0(z) + self.linear_N_term * N * z + self.constant(N, roots) - self.S0


def potential_core(spec: ModelSpec) -> RationalPotential:
    P, Q = spec.P, spec.Q
    if P.degree > 2 or Q.degree > 2:
        raise ModelError("potential_core needs deg P <= 2 and deg Q <= 2")
    num = P * P - Q * derivative(P) + 0.5 * P * derivative(Q)
    S, poles = partial_fractions(num, Q)
    A2 = P.coeff(2)
    return RationalPotential(S, tuple(poles), S.coeff(0), -2 * A2, Q.coeff(2), P.coeff(1), A2)


def _root_values(roots) -> list[complex]:
    return list(getattr(roots, "roots", roots))


def energy(spec: ModelSpec, roots) -> complex:
    zs = _root_values(roots)
    if len(zs) != spec.N:
        raise ModelError(f"expected {spec.N} roots, got {len(zs)}")
    return potential_core(spec).energy(spec.N, zs)


def physical_potential(spec: ModelSpec, x, check_domain: bool = False):
    """``V(z(x))`` for the spec's N; x may lie outside the domain when the
    map extends there (e.g. even extension of z = beta x^2/4)."""
    cmap = coordinate_map(spec.Q)
    if check_domain and not cmap.in_domain(x):
        raise ModelError("x outside the model domain")
    return potential_core(spec).physical(cmap.z_of_x(x), spec.N)


def phi(spec: ModelSpec, roots, x):
    """Unnormalized eigenfunction ``exp(-W0(x)) * prod(z(x) - z_k)``."""
    w0 = prepotential_W0(spec)
    if not w0.cmap.in_domain(x):
        raise ModelError("x outside the model domain")
    z = w0.cmap.z_of_x(x)
    val = np.exp(-w0.of_z(z) + 0j)
    for zk in _root_values(roots):
        val = val * (z - zk)
    return val
