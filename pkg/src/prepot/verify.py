"""Run every applicable oracle against a model and collect a report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bae, oracle
from .model import (
    ModelSpec,
    Solvability,
    classify,
    coordinate_map,
    normalizable,
    physical_potential,
    potential_core,
)
from .spectrum import GridSpec, build_state, default_grid, max_offdiag, orthogonality
from .xrational import ExtendedSpec, extended_potential, extended_state, p_ln, xi

TOLERANCES = {
    "bae_residual": 1e-10,
    "gauged_vs_bae": 1e-9,
    "classical_zeros": 1e-10,
    "fd_vs_bae": 5e-3,
    "schrodinger_residual": 1e-6,
    "qnm_residual": 1e-7,
    "orthogonality": 1e-6,
    "norm": 1e-6,
    "pt_real": 1e-10,
}

RADIAL_BAE_NOTE = (
    "radial BAE as solved: 2a z_k - (2l+1) - 4 sum_{j!=k} z_k/(z_k - z_j) = 0; "
    "the form 2a z_k + 2l + 1 + 4 sum z_k/(z_k - z_j) = 0 differs by sign and is "
    "not satisfied by the (scaled) zeros of L_N^(l-1/2); treated as a sign typo"
)


@dataclass
class Check:
    name: str
    value: float
    tol: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.value)) and self.value <= self.tol

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "tol": self.tol, "passed": self.passed, "detail": self.detail}


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    info: dict = field(default_factory=dict)
    complete: bool = True

    def add(self, name, value, tol_key_or_value, detail=""):
        tol = TOLERANCES[tol_key_or_value] if isinstance(tol_key_or_value, str) else tol_key_or_value
        self.checks.append(Check(name, float(value), tol, detail))

    @property
    def passed(self) -> bool:
        return self.complete and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "complete": self.complete,
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
            "info": self.info,
        }


def _cplx(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def exact_classical_roots(spec: ModelSpec) -> np.ndarray | None:
    """BAE roots of an ES model from classical zeros, when the map is exact.

    Q = gamma, P = A1 z + A0: Hermite zeros times sqrt(gamma/A1), minus A0/A1.
    Q = beta z, P = A1 z + A0: zeros of L_N^(alpha) with alpha = -1/2 - 2A0/beta,
    divided by 2A1/beta (needs alpha > -1).
    """
    if spec.N == 0 or spec.P.coeff(2) != 0 or spec.P.coeff(1) == 0 or not spec.Q.is_real():
        return None
    kind = coordinate_map(spec.Q).kind
    A1, A0 = spec.P.coeff(1), spec.P.coeff(0)
    if kind == "Linear":
        gamma = spec.Q.coeff(0).real
        ys = oracle.classical_zeros("Hermite", spec.N)
        return np.sqrt(gamma / A1 + 0j) * ys - A0 / A1
    if kind == "Quadratic" and spec.Q.coeff(0) == 0:
        beta = spec.Q.coeff(1).real
        alpha = -0.5 - 2 * A0 / beta
        if abs(alpha.imag) > 1e-14 or alpha.real <= -1:
            return None
        ys = oracle.classical_zeros("Laguerre", spec.N, alpha.real)
        return ys / (2 * A1 / beta) + 0j
    return None


def is_pt_symmetric(spec: ModelSpec) -> bool:
    """PT symmetry of a full-line model: even powers of P imaginary, odd real."""
    if spec.Q.degree != 0 or not spec.Q.is_real():
        return False
    for k, c in enumerate(spec.P.coeffs):
        part = c.real if k % 2 == 0 else c.imag
        if abs(part) > 1e-14 * max(1.0, abs(c)):
            return False
    return True


def pt_status(energies, tol: float = TOLERANCES["pt_real"]) -> str:
    es = list(energies)
    if all(abs(e.imag) <= tol * max(1.0, abs(e)) for e in es):
        return "PT unbroken"
    paired = all(min(abs(e - f.conjugate()) for f in es) <= tol * max(1.0, abs(e)) for e in es)
    return "PT broken" if paired else "complex (unpaired)"


def _match_sets(xs, ys) -> float:
    """Max over xs of the distance to the nearest ys entry."""
    ys = list(ys)
    if not xs:
        return 0.0
    if not ys:
        return math.inf
    return max(min(abs(x - y) for y in ys) for x in xs)


def fd_grid_for(spec: ModelSpec, grid: GridSpec) -> GridSpec:
    """Grid for the FD check; half-line models with a pole-free potential are
    extended evenly to the full line (their states are even in x)."""
    cmap = coordinate_map(spec.Q)
    if cmap.kind == "Quadratic" and not potential_core(spec).pole_terms and cmap.params["zeta"] == 0:
        return GridSpec(-grid.x_max, grid.x_max, 2 * grid.points - 1 if grid.points % 2 else 2 * grid.points + 1)
    return grid


def _fd_check(spec: ModelSpec, energies, grid: GridSpec, report: Report):
    grid = fd_grid_for(spec, grid)
    pot = lambda x: physical_potential(spec, x)  # noqa: E731
    target = max(e.real for e in energies)
    k = max(8, 2 * len(energies) + 4)
    while True:
        fd = oracle.fd_spectrum(pot, grid, k)
        if fd[-1] > target + 1 or k >= grid.points - 2:
            break
        k *= 2
    dev = _match_sets([e.real for e in energies], fd)
    report.add("fd_spectrum_contains_energies", dev, "fd_vs_bae", f"grid {grid}, {k} eigenvalues")
    report.info["fd_lowest"] = [float(v) for v in fd[: max(len(energies) + 2, 6)]]


def model_states(spec: ModelSpec, grid: GridSpec, starts: int | None = None, rng_seed: int = 0):
    """(spec, state) pairs in energy order.

    QES: the N+1 solvable states of ``spec``. ES: the ladder n = 0..N, each
    level solved with its own N (the potential does not depend on N).
    Non-normalizable models are sampled without the tail check.
    """
    decay = normalizable(spec)
    if classify(spec) is Solvability.EXACTLY_SOLVABLE:
        pairs = []
        for n in range(spec.N + 1):
            s = spec.with_N(n)
            en = bae.enumerate_solutions(s, starts, rng_seed)
            if len(en):
                pairs.append((s, en[0]))
    else:
        pairs = [(spec, rs) for rs in bae.enumerate_solutions(spec, starts, rng_seed)]
    return [(s, build_state(s, rs, grid, require_decay=decay)) for s, rs in pairs]


def verify_model(
    spec: ModelSpec, starts: int | None = None, rng_seed: int = 0, grid: GridSpec | None = None
) -> Report:
    report = Report()
    kind = classify(spec)
    report.info["solvability"] = kind.value
    if kind is Solvability.SINGLE_STATE:
        report.notes.append("single-state model: no invariant subspace, nothing to verify")
        return report
    cmap = coordinate_map(spec.Q)
    norm_ok = normalizable(spec)
    report.info["normalizable"] = norm_ok
    grid = grid or default_grid(spec)
    hermitian = spec.is_hermitian()

    en = bae.enumerate_solutions(spec, starts, rng_seed)
    report.complete = en.complete
    report.info["found"], report.info["expected"] = len(en), en.expected
    report.info["energies"] = [_cplx(e) for e in en.energies]
    if not len(en):
        return report
    report.add("bae_residual_max", max(rs.residual_norm for rs in en), "bae_residual")

    if cmap.kind == "Quadratic" and spec.P.coeff(2) == 0:
        report.notes.append(RADIAL_BAE_NOTE)

    es_levels = None
    if kind is Solvability.EXACTLY_SOLVABLE:
        # one state per level n = 0..N; the potential shape does not depend on n
        es_levels = [bae.enumerate_solutions(spec.with_N(n), starts, rng_seed) for n in range(spec.N + 1)]
        gauged = oracle.gauged_energies(spec)
        ladder = [lv.energies[0] for lv in es_levels if len(lv)]
        report.add("gauged_vs_bae", _match_sets(ladder, gauged), "gauged_vs_bae")
        ref = exact_classical_roots(spec)
        if ref is not None:
            indep = bae.enumerate_solutions(spec, starts, rng_seed, classical=False)
            if len(indep):
                got = np.array(indep[0].roots)
                dev = _match_sets(list(got), list(ref))
                report.add("bae_roots_vs_classical_zeros", dev, "classical_zeros")
            else:
                report.add("bae_roots_vs_classical_zeros", math.inf, "classical_zeros", "no solution from random seeds")
    else:
        gauged = oracle.gauged_energies(spec)
        dev = max(_match_sets(list(en.energies), gauged), _match_sets(gauged, list(en.energies)))
        report.add("gauged_vs_bae", dev, "gauged_vs_bae")

    if is_pt_symmetric(spec) and not hermitian:
        report.info["pt_status"] = pt_status(en.energies)

    pot = lambda x: physical_potential(spec, x)  # noqa: E731
    if norm_ok:
        if es_levels is not None:
            pairs = [(spec.with_N(n), lv[0]) for n, lv in enumerate(es_levels) if len(lv)]
        else:
            pairs = [(spec, rs) for rs in en]
        states = [build_state(s, rs, grid) for s, rs in pairs]
        for i, st in enumerate(states):
            res = oracle.schrodinger_residual(pot, st.energy, st, grid)
            report.add(f"schrodinger_residual[{i}]", res, "schrodinger_residual", f"E={st.energy:.12g}")
        report.info["nodes"] = [st.nodes for st in states]
        if hermitian:
            report.add("orthogonality_offdiag", max_offdiag(orthogonality(states, grid)), "orthogonality")
            energies = [st.energy for st in states]
            _fd_check(spec, energies, grid, report)
    else:
        report.notes.append("non-normalizable (quasinormal) model: residual-only verification")
        for i, rs in enumerate(en):
            st = build_state(spec, rs, grid, require_decay=False)
            res = oracle.schrodinger_residual(pot, st.energy, st, grid)
            report.add(f"schrodinger_residual[{i}]", res, "qnm_residual", f"E={st.energy:.12g}")
    return report


def verify_extended(spec: ExtendedSpec, n_max: int = 4, grid: GridSpec | None = None) -> Report:
    from .spectrum import HALF_LINE

    report = Report()
    grid = grid or HALF_LINE
    xi(spec)  # raises if xi has zeros on [0, inf)
    report.info["xi_zero_free"] = True
    pot = lambda x: extended_potential(spec, x)  # noqa: E731
    states = [extended_state(spec, n, grid) for n in range(n_max + 1)]
    for n, st in enumerate(states):
        report.add(f"schrodinger_residual[{n}]", oracle.schrodinger_residual(pot, st.energy, st, grid), "schrodinger_residual")
        report.add(f"degree_p[{n}]", abs(p_ln(spec, n).degree - (spec.ell + n)), 0.0)
    report.add("orthogonality_offdiag", max_offdiag(orthogonality(states, grid)), "orthogonality")
    report.info["energies"] = [st.energy.real for st in states]
    report.info["nodes"] = [st.nodes for st in states]
    return report
