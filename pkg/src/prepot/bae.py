"""Bethe ansatz equations for the roots of the polynomial factor p_N.

For roots ``z_1..z_N`` the k-th equation reads

    A2 z_k^2 + (A1 - q2/2) z_k + A0 - q1/4 - sum_{l != k} Q(z_k)/(z_k - z_l) = 0.

They are solved by damped Newton iteration from many starting points; all
distinct solutions are collected (N+1 of them for a QES model).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import poly as _poly
from .model import ModelSpec, Solvability, classify, coordinate_map, energy
from .poly import Poly, derivative

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-12
CONVERGED_TOL = 1e-10
STEP_GUARD = 1e-6
DISTINCT_TOL = 1e-9
DEDUP_TOL = 1e-8


class CoincidentRootsError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    """Newton iteration failed; carries the last iterate and its residual."""

    def __init__(self, message: str, roots: Sequence[complex], residual: float):
        super().__init__(message)
        self.roots = tuple(complex(r) for r in roots)
        self.residual = residual


def canonical_order(roots: Sequence[complex]) -> tuple[complex, ...]:
    return tuple(sorted((complex(r) for r in roots), key=lambda r: (round(r.real, 9), round(r.imag, 9))))


@dataclass(frozen=True)
class RootSet:
    roots: tuple[complex, ...]
    residual_norm: float = 0.0
    converged: bool = True
    seed_index: int = -1

    def __post_init__(self):
        object.__setattr__(self, "roots", canonical_order(self.roots))

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def same_as(self, other: "RootSet", tol: float = DEDUP_TOL) -> bool:
        if len(self) != len(other):
            return False
        pool = list(other.roots)
        for r in self.roots:
            d = [abs(r - s) for s in pool]
            j = int(np.argmin(d))
            if d[j] > tol * max(1.0, abs(r)):
                return False
            pool.pop(j)
        return True

    def symmetric_sums(self) -> tuple[complex, complex]:
        """(z1 + z2, z1 - z2) for a two-root set."""
        z1, z2 = self.roots
        return z1 + z2, z1 - z2


def _coeffs(spec: ModelSpec):
    P, Q = spec.P, spec.Q
    return P.coeff(2), P.coeff(1), P.coeff(0), Q.coeff(2), Q.coeff(1), Q.coeff(0)


def _diffs(z: np.ndarray) -> np.ndarray:
    d = z[:, None] - z[None, :]
    off = ~np.eye(len(z), dtype=bool)
    if len(z) > 1 and np.min(np.abs(d[off])) <= 0:
        raise CoincidentRootsError("roots must be pairwise distinct")
    np.fill_diagonal(d, 1.0)
    return d


def residual(spec: ModelSpec, roots: Sequence[complex]) -> np.ndarray:
    A2, A1, A0, q2, q1, _ = _coeffs(spec)
    z = np.asarray(list(roots), dtype=complex)
    d = _diffs(z)
    Qz = spec.Q(z)
    inv = 1.0 / d
    np.fill_diagonal(inv, 0.0)
    return A2 * z**2 + (A1 - q2 / 2) * z + A0 - q1 / 4 - Qz * inv.sum(axis=1)


def jacobian(spec: ModelSpec, roots: Sequence[complex]) -> np.ndarray:
    A2, A1, *_ = _coeffs(spec)
    q2 = spec.Q.coeff(2)
    z = np.asarray(list(roots), dtype=complex)
    d = _diffs(z)
    Qz = spec.Q(z)
    dQz = derivative(spec.Q)(z)
    inv2 = 1.0 / d**2
    np.fill_diagonal(inv2, 0.0)
    J = -Qz[:, None] * inv2
    diag = 2 * A2 * z + (A1 - q2 / 2) - (dQz[:, None] * d * inv2 - Qz[:, None] * inv2).sum(axis=1)
    J[np.diag_indices_from(J)] = diag
    return J


def _min_gap(z: np.ndarray) -> float:
    if len(z) < 2:
        return math.inf
    d = np.abs(z[:, None] - z[None, :])
    return float(d[~np.eye(len(z), dtype=bool)].min())


def solve_from(
    spec: ModelSpec,
    seed: Sequence[complex],
    maxiter: int = 200,
    tol: float = RESIDUAL_TOL,
    seed_index: int = -1,
) -> RootSet:
    """Damped Newton from ``seed``; raises ConvergenceError on failure."""
    z = np.asarray(list(seed), dtype=complex)
    if len(z) != spec.N:
        raise ValueError(f"seed has {len(z)} entries, expected N={spec.N}")
    if spec.N == 0:
        return RootSet((), 0.0, True, seed_index)
    F = residual(spec, z)
    norm = float(np.max(np.abs(F)))
    guard_hits = 0
    for _ in range(maxiter):
        if not np.isfinite(norm):
            break
        if norm <= tol:
            if _min_gap(z) <= DISTINCT_TOL:
                raise ConvergenceError("converged to coincident roots", z, norm)
            return RootSet(tuple(z), norm, True, seed_index)
        try:
            dz = np.linalg.solve(jacobian(spec, z), -F)
        except np.linalg.LinAlgError:
            dz = np.linalg.lstsq(jacobian(spec, z), -F, rcond=None)[0]
        t = 1.0
        guarded = False
        while _min_gap(z + t * dz) < STEP_GUARD and t > 1e-12:
            t /= 2
            guarded = True
        guard_hits = guard_hits + 1 if guarded else 0
        if guard_hits >= 50:
            raise ConvergenceError("collision guard triggered 50 consecutive times", z, norm)
        for _ in range(40):
            trial = z + t * dz
            try:
                Ft = residual(spec, trial)
            except CoincidentRootsError:
                Ft = None
            if Ft is not None:
                nt = float(np.max(np.abs(Ft)))
                if nt < norm:
                    break
            t /= 2
        else:
            raise ConvergenceError("line search stalled", z, norm)
        z, F, norm = trial, Ft, nt
    raise ConvergenceError(f"no convergence in {maxiter} iterations", z, norm)


# --------------------------------------------------------------------------
# multi-start enumeration


def classical_seed(spec: ModelSpec) -> list[complex] | None:
    """Classical zeros mapped onto the BAE variables, when the map is known.

    For Q = gamma and P = A1 z + A0 the BAE roots are Hermite zeros scaled by
    sqrt(gamma/A1) and shifted by -A0/A1. For Q = beta z and P = A1 z + A0 they
    are zeros of L_N^(alpha), alpha = -1/2 - 2 A0/beta, divided by 2 A1/beta.
    For QES specs the same recipe with A2 ignored gives a rough seed.
    """
    from .oracle import classical_zeros

    N = spec.N
    if N == 0:
        return []
    cmap_kind = coordinate_map(spec.Q).kind if spec.Q.is_real() else None
    A1, A0 = spec.P.coeff(1), spec.P.coeff(0)
    if A1 == 0:
        A1 = 1.0
    if cmap_kind == "Linear":
        gamma = spec.Q.coeff(0)
        ys = classical_zeros("Hermite", N)
        s = np.sqrt(gamma / A1 + 0j)
        return [complex(s * y - A0 / A1) for y in ys]
    if cmap_kind == "Quadratic" and spec.Q.coeff(0) == 0:
        beta = spec.Q.coeff(1)
        alpha = (-0.5 - 2 * A0 / beta).real
        alpha = max(alpha, -0.5)
        ys = classical_zeros("Laguerre", N, alpha)
        return [complex(y / (2 * A1 / beta)) for y in ys]
    return None


@dataclass(frozen=True)
class Enumeration:
    solutions: tuple[RootSet, ...]
    energies: tuple[complex, ...]
    expected: int
    attempts: int
    rng_seed: int

    @property
    def complete(self) -> bool:
        return len(self.solutions) >= self.expected

    def __len__(self):
        return len(self.solutions)

    def __iter__(self) -> Iterator[RootSet]:
        return iter(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]


def default_starts(N: int) -> int:
    return 64 * (N + 1)


def _seeds(spec: ModelSpec, starts: int, rng: np.random.Generator, classical: bool) -> Iterator[np.ndarray]:
    N = spec.N
    base = classical_seed(spec) if classical else None
    spread = 1.0
    if base is not None:
        base = np.asarray(base)
        spread = max(1.0, float(np.max(np.abs(base))))
        yield base
        # QES root sets split between the two half-axes; try every split
        mags = np.abs(base)
        for k in range(N + 1):
            mixed = np.concatenate([mags[:k], -mags[: N - k]]) + 0.01j * spread
            yield mixed
            yield np.conj(mixed)
    for i in range(starts):
        radius = spread * (0.5 + 3.0 * i / max(starts, 1))
        flat = 0.1 if i % 2 else 1.0
        yield radius * (rng.standard_normal(N) + 1j * flat * rng.standard_normal(N))


def enumerate_solutions(
    spec: ModelSpec, starts: int | None = None, rng_seed: int = 0, classical: bool = True
) -> Enumeration:
    """Collect distinct BAE solutions, sorted by (Re E, Im E).

    Runs sequentially so the result depends only on (starts, rng_seed).
    Stops early once the expected count (N+1 for QES, 1 for ES) is reached.
    ``classical=False`` drops the classical-zero seeds and uses only the
    random clouds.
    """
    kind = classify(spec)
    if kind is Solvability.SINGLE_STATE:
        raise ValueError("enumerate_solutions needs an ES or QES spec")
    N = spec.N
    expected = N + 1 if kind is Solvability.QUASI_EXACTLY_SOLVABLE else 1
    if N == 0:
        rs = RootSet((), 0.0, True, 0)
        return Enumeration((rs,), (energy(spec, rs),), expected, 0, rng_seed)
    starts = default_starts(N) if starts is None else starts
    rng = np.random.default_rng(rng_seed)
    found: list[RootSet] = []
    attempts = 0
    for idx, seed in enumerate(_seeds(spec, starts, rng, classical)):
        attempts += 1
        if _min_gap(seed) <= STEP_GUARD:
            continue
        try:
            rs = solve_from(spec, seed, seed_index=idx)
        except (ConvergenceError, CoincidentRootsError):
            continue
        if any(rs.same_as(f) for f in found):
            continue
        found.append(rs)
        if len(found) >= expected:
            break
    if len(found) < expected:
        log.warning("found %d of %d expected BAE solutions", len(found), expected)
    pairs = sorted(((energy(spec, rs), rs) for rs in found), key=lambda t: (t[0].real, t[0].imag))
    return Enumeration(
        tuple(rs for _, rs in pairs), tuple(e for e, _ in pairs), expected, attempts, rng_seed
    )


# --------------------------------------------------------------------------
# N = 2 reduction for the sextic family P = 2a z^2 + 2b z, Q = 4z


@dataclass(frozen=True)
class N2Branch:
    p: complex
    q2: complex
    roots: tuple[complex, complex]
    residual: float
    energy: complex


def sextic_spec(a: complex, b: complex, N: int, label: str = "sextic") -> ModelSpec:
    return ModelSpec(Poly((0, 2 * b, 2 * a)), Poly((0, 4)), N, label)


def reduce_n2(a: complex, b: complex) -> list[N2Branch]:
    """Solve the two-root sextic BAEs through p = z1 + z2, q = z1 - z2.

    p solves a^2 p^3 + 3ab p^2 + (2b^2 - 4a) p - 6b = 0 and
    q^2 = 2p/(ap + b). When ap + b = 0 the second relation is empty; the
    branch is kept only if p = 0, with q^2 taken from a(p^2 + q^2) + 2bp = 6.
    """
    if a == 0:
        raise ValueError("reduce_n2 needs a != 0")
    cubic = Poly((-6 * b, 2 * b * b - 4 * a, 3 * a * b, a * a))
    spec = sextic_spec(a, b, 2)
    out = []
    for p in _poly.roots(cubic):
        scale = max(1.0, abs(p), abs(b / a))
        denom = a * p + b
        if abs(denom) <= 1e-10 * abs(a) * scale:
            if abs(p) > 1e-10 * scale:
                log.warning("reduce_n2: degenerate branch p=%s (ap+b=0, p!=0) excluded", p)
                continue
            p = 0j
            q2 = (6 - 2 * b * p) / a - p * p
        else:
            q2 = 2 * p / denom
        q = np.sqrt(complex(q2))
        if abs(q) <= 1e-10:
            log.warning("reduce_n2: branch p=%s has coincident roots, excluded", p)
            continue
        z = ((p + q) / 2, (p - q) / 2)
        res = float(np.max(np.abs(residual(spec, z))))
        if res > CONVERGED_TOL:
            log.warning("reduce_n2: branch p=%s fails BAE check (residual %.2e)", p, res)
            continue
        out.append(N2Branch(complex(p), complex(q2), z, res, energy(spec, z)))
    return out
