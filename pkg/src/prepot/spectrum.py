"""Sampled, normalized eigenstates on a uniform grid."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .bae import RootSet
from .model import ModelSpec, coordinate_map, energy, phi

TAIL_TOL = 1e-10
NATURAL_END_TOL = 1e-6
NODE_DEADBAND = 1e-12


class GridError(ValueError):
    """The grid does not fit the domain or does not capture the state's tails."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid in x (units hbar = 2m = 1)."""

    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise GridError("grid needs x_min < x_max")
        if self.points < 3:
            raise GridError("grid needs at least 3 points")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.points)

    def refined(self) -> "GridSpec":
        return GridSpec(self.x_min, self.x_max, 2 * self.points - 1)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse ``"min:max:points"``."""
        try:
            lo, hi, n = text.split(":")
            return cls(float(lo), float(hi), int(n))
        except ValueError as exc:
            raise GridError(f"bad grid {text!r}, expected min:max:points") from exc

    def __str__(self):
        return f"{self.x_min!r}:{self.x_max!r}:{self.points}"


FULL_LINE = GridSpec(-10.0, 10.0, 20001)
HALF_LINE = GridSpec(1e-9, 12.0, 24001)


def default_grid(spec: ModelSpec) -> GridSpec:
    lo, hi = coordinate_map(spec.Q).domain
    if math.isinf(lo) and math.isinf(hi):
        return FULL_LINE
    if math.isinf(hi):
        return GridSpec(lo + HALF_LINE.x_min, lo + HALF_LINE.x_max, HALF_LINE.points)
    pad = 1e-9 * (hi - lo)
    return GridSpec(lo + pad, hi - pad, 20001)


def integrate(values: np.ndarray, grid: GridSpec) -> complex:
    return simpson(values, dx=grid.h)


@dataclass(frozen=True)
class QesState:
    energy: complex
    samples: np.ndarray = field(repr=False)
    norm: float
    nodes: int | None
    rootset: RootSet
    grid: GridSpec

    def is_real(self) -> bool:
        return self.nodes is not None


def _is_natural(end: float, edge: float, span: float) -> bool:
    return math.isfinite(edge) and abs(end - edge) <= NATURAL_END_TOL * max(1.0, span)


def count_nodes(values: np.ndarray, deadband: float = NODE_DEADBAND) -> int:
    """Strict sign changes, ignoring samples within the dead-band of zero."""
    re = np.real(values)
    cut = deadband * float(np.max(np.abs(values)))
    s = np.sign(re[np.abs(re) > cut])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def build_state(spec: ModelSpec, roots: RootSet, grid: GridSpec, require_decay: bool = True) -> QesState:
    """Sample, normalize and characterize ``phi`` for one root set.

    Tails are checked only at grid ends that truncate the domain; a grid end
    sitting on a finite domain edge is left alone. With ``require_decay``
    off (quasinormal modes), the samples are normalized on the window only.
    """
    cmap = coordinate_map(spec.Q)
    lo, hi = cmap.domain
    x = grid.x
    if not cmap.in_domain(x):
        raise GridError(f"grid {grid} leaves the domain ({lo}, {hi})")
    vals = np.asarray(phi(spec, roots, x), dtype=complex)
    peak = float(np.max(np.abs(vals)))
    if require_decay:
        span = grid.x_max - grid.x_min
        for end, edge, v in ((grid.x_min, lo, vals[0]), (grid.x_max, hi, vals[-1])):
            if not _is_natural(end, edge, span) and abs(v) > TAIL_TOL * peak:
                raise GridError(
                    f"state not decayed at x={end}: |phi|/max = {abs(v) / peak:.2e}; use a larger grid"
                )
    norm = math.sqrt(float(integrate(np.abs(vals) ** 2, grid).real))
    vals = vals / norm
    E = energy(spec, roots)
    real = float(np.max(np.abs(vals.imag))) <= 1e-10 * float(np.max(np.abs(vals))) and abs(E.imag) <= 1e-10 * max(
        1.0, abs(E)
    )
    if real:
        # fix the global phase so the samples are real
        vals = vals.real + 0j
    nodes = count_nodes(vals) if real else None
    return QesState(E, vals, norm, nodes, roots, grid)


def orthogonality(states, grid: GridSpec | None = None) -> np.ndarray:
    """Gram matrix of overlaps int conj(phi_i) phi_j dx."""
    states = list(states)
    grid = grid or states[0].grid
    n = len(states)
    G = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            G[i, j] = integrate(np.conj(states[i].samples) * states[j].samples, grid)
            G[j, i] = np.conj(G[i, j])
    return G


def max_offdiag(G: np.ndarray) -> float:
    if G.shape[0] < 2:
        return 0.0
    return float(np.max(np.abs(G[~np.eye(G.shape[0], dtype=bool)])))
