"""Independent verifiers.

* the gauged operator ``exp(W0) H exp(-W0)`` as a matrix on {1, z, ..., z^N}
* finite-difference Hamiltonians diagonalized by Sturm-sequence bisection
* pointwise Schroedinger residuals with a fourth-order stencil
* classical (Hermite / Laguerre) zeros from Jacobi matrices
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from .model import ModelSpec, Solvability, classify, potential_core
from .poly import Poly, roots as poly_roots


@njit(cache=True)
def _sturm_count(diag, off2, x):
    n = diag.shape[0]
    count = 0
    q = diag[0] - x
    if q < 0.0:
        count += 1
    for i in range(1, n):
        if q == 0.0:
            q = 1e-300
        q = diag[i] - x - off2[i - 1] / q
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect(diag, off2, lo, hi, k, tol):
    # k-th smallest eigenvalue (0-based): the least x with count(x) > k
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _sturm_count(diag, off2, mid) > k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TridiagonalSymmetric:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=float)
        e = np.ascontiguousarray(self.offdiag, dtype=float)
        if e.shape[0] != max(d.shape[0] - 1, 0):
            raise ValueError("offdiag must have length len(diag) - 1")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def size(self) -> int:
        return self.diag.shape[0]

    def gershgorin(self) -> tuple[float, float]:
        r = np.zeros(self.size)
        a = np.abs(self.offdiag)
        r[:-1] += a
        r[1:] += a
        return float(np.min(self.diag - r)), float(np.max(self.diag + r))

    def count_below(self, x: float) -> int:
        return int(_sturm_count(self.diag, self.offdiag**2, float(x)))

    def smallest(self, k: int, tol: float = 1e-10) -> np.ndarray:
        """The k smallest eigenvalues by Sturm bisection."""
        if k > self.size:
            raise ValueError(f"requested {k} eigenvalues of a {self.size}x{self.size} matrix")
        lo, hi = self.gershgorin()
        pad = 1e-12 * max(1.0, abs(lo), abs(hi))
        lo, hi = lo - pad, hi + pad
        off2 = self.offdiag**2
        out = np.empty(k)
        for i in range(k):
            out[i] = _bisect(self.diag, off2, lo if i == 0 else out[i - 1] - tol - pad, hi, i, tol)
        return out


# --------------------------------------------------------------------------
# gauged operator


def gauged_matrix(spec: ModelSpec, N: int | None = None) -> np.ndarray:
    """Matrix of -Q d2/dz2 + (2P - Q'/2) d/dz - 2 A2 N z on {1, z, ..., z^N}.

    Entry [i, j] is the coefficient of z^i in the image of z^j.
    """
    if classify(spec) is Solvability.SINGLE_STATE:
        raise ValueError("gauged_matrix needs an ES or QES spec")
    N = spec.N if N is None else N
    A0, A1, A2 = (spec.P.coeff(i) for i in range(3))
    q0, q1, q2 = (spec.Q.coeff(i) for i in range(3))
    M = np.zeros((N + 1, N + 1), dtype=complex)
    for j in range(N + 1):
        if j + 1 <= N:
            M[j + 1, j] = 2 * A2 * (j - N)
        M[j, j] = j * (2 * A1 - q2 * j)
        if j >= 1:
            M[j - 1, j] = j * (2 * A0 - q1 * (j - 0.5))
        if j >= 2:
            M[j - 2, j] = -q0 * j * (j - 1)
    return M


def hessenberg_charpoly(H: np.ndarray) -> Poly:
    """det(lambda I - H) for an upper Hessenberg matrix (Hyman recurrence)."""
    n = H.shape[0]
    lam = Poly((0.0, 1.0))
    ps = [Poly((1.0,))]
    for k in range(1, n + 1):
        pk = (lam - H[k - 1, k - 1]) * ps[k - 1]
        prod = 1.0 + 0j
        for i in range(k - 1, 0, -1):
            prod *= H[i, i - 1]
            if prod == 0:
                break
            pk = pk - H[i - 1, k - 1] * prod * ps[i - 1]
        ps.append(pk)
    return ps[n]


def gauged_energies(spec: ModelSpec, N: int | None = None) -> list[complex]:
    """Eigenvalues of the gauged matrix shifted by -S0, sorted by (Re, Im)."""
    N = spec.N if N is None else N
    cp = hessenberg_charpoly(gauged_matrix(spec, N))
    S0 = potential_core(spec).S0
    lams = poly_roots(cp) if cp.degree >= 1 else []
    return sorted((lam - S0 for lam in lams), key=lambda e: (e.real, e.imag))


# --------------------------------------------------------------------------
# finite differences


def fd_hamiltonian(potential: Callable, grid) -> TridiagonalSymmetric:
    """Second-order FD Hamiltonian with Dirichlet walls at both grid ends."""
    x = grid.x[1:-1]
    v = np.asarray(potential(x))
    if np.iscomplexobj(v):
        if np.max(np.abs(v.imag)) > 1e-12 * max(1.0, float(np.max(np.abs(v)))):
            raise ValueError("fd_spectrum needs a real potential")
        v = v.real
    h2 = grid.h**2
    return TridiagonalSymmetric(2.0 / h2 + v, np.full(len(x) - 1, -1.0 / h2))


def fd_spectrum(potential: Callable, grid, k: int) -> np.ndarray:
    if k > grid.points:
        raise ValueError("k exceeds the number of grid points")
    return fd_hamiltonian(potential, grid).smallest(k)


def second_derivative4(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central second derivative on interior points 2..n-3."""
    return (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)


SUPPORT_FRACTION = 1e-3


def schrodinger_residual(potential: Callable, E: complex, state, grid) -> float:
    """Relative L2 size of (-phi'' + V phi - E phi) over interior points.

    Normalized by ||phi|| * max(1, |E|, max|V|) with the max over points where
    |phi| exceeds SUPPORT_FRACTION of its peak.
    """
    phi = np.asarray(state.samples, dtype=complex)
    x = grid.x
    h = grid.h
    xi = x[2:-2]
    v = np.asarray(potential(xi), dtype=complex)
    r = -second_derivative4(phi, h) + (v - E) * phi[2:-2]
    pin = phi[2:-2]
    mag = np.abs(pin)
    support = mag >= SUPPORT_FRACTION * mag.max()
    vmax = float(np.max(np.abs(v[support]))) if support.any() else 0.0
    scale = max(1.0, abs(E), vmax)
    num = math.sqrt(float(np.sum(np.abs(r) ** 2)) * h)
    den = math.sqrt(float(np.sum(mag**2)) * h)
    return num / (den * scale)


# --------------------------------------------------------------------------
# classical zeros


def jacobi_matrix(kind: str, N: int, alpha: float = 0.0) -> TridiagonalSymmetric:
    k = np.arange(N, dtype=float)
    if kind == "Hermite":
        return TridiagonalSymmetric(np.zeros(N), np.sqrt(k[1:] / 2))
    if kind == "Laguerre":
        if alpha <= -1:
            raise ValueError("Laguerre zeros need alpha > -1")
        return TridiagonalSymmetric(2 * k + alpha + 1, np.sqrt(k[1:] * (k[1:] + alpha)))
    raise ValueError(f"unknown polynomial family {kind!r}")


def classical_zeros(kind: str, N: int, alpha: float = 0.0) -> np.ndarray:
    """Zeros of H_N or L_N^(alpha), ascending."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return jacobi_matrix(kind, N, alpha).smallest(N, tol=0.0)
