import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import harmonic, pt_quartic, radial, raw_potential, sextic
from prepot import bae
from prepot.model import (
    ModelError,
    ModelSpec,
    Solvability,
    classify,
    coordinate_map,
    energy,
    normalizable,
    phi,
    physical_potential,
    potential_core,
    prepotential_W0,
)
from prepot.poly import Poly, derivative

SQ3 = math.sqrt(3.0)


@pytest.mark.parametrize(
    "P, Q, expected",
    [
        (Poly((0, 1)), Poly((1,)), Solvability.EXACTLY_SOLVABLE),
        (Poly((0, 2, 2)), Poly((0, 4)), Solvability.QUASI_EXACTLY_SOLVABLE),
        (Poly((0, 0, 0, 1)), Poly((1,)), Solvability.SINGLE_STATE),
        (Poly((1,)), Poly((1, 0, 1)), Solvability.EXACTLY_SOLVABLE),
        (Poly((0, 0, 1)), Poly((0, 0, 0, 1)), Solvability.SINGLE_STATE),
    ],
)
def test_classify(P, Q, expected):
    assert classify(ModelSpec(P, Q)) is expected


def test_spec_rejects_zero_Q_and_negative_N():
    with pytest.raises(ModelError):
        ModelSpec(Poly((1,)), Poly(()))
    with pytest.raises(ModelError):
        ModelSpec(Poly((1,)), Poly((1,)), -1)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False), min_size=1, max_size=3),
    st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=3).filter(lambda q: any(q)),
    st.integers(0, 12),
)
def test_spec_json_roundtrip(pc, qc, N):
    spec = ModelSpec(Poly(pc), Poly(qc), N, "x")
    assert ModelSpec.from_json(spec.to_json()) == spec


def test_spec_json_malformed():
    with pytest.raises(ModelError):
        ModelSpec.from_json("{not json")
    with pytest.raises(ModelError):
        ModelSpec.from_dict({"Q": [[1, 0]]})


# coordinate maps ---------------------------------------------------------

MAPS = [
    (Poly((1,)), "linear", (-math.inf, math.inf), lambda x: x),
    (Poly((0, 4)), "quadratic", (0.0, math.inf), lambda x: x * x),
    (Poly((1, 0, 1)), "sinh", (-math.inf, math.inf), np.sinh),
    (Poly((-1, 0, 1)), "cosh", (0.0, math.inf), np.cosh),
    (Poly((0, 0, 1)), "exp", (-math.inf, math.inf), np.exp),
    (Poly((1, 0, -1)), "sin", (-math.pi / 2, math.pi / 2), np.sin),
]


@pytest.mark.parametrize("Q, form, domain, ref", MAPS)
def test_coordinate_map_forms(Q, form, domain, ref):
    cmap = coordinate_map(Q)
    assert cmap.form == form
    assert cmap.domain == pytest.approx(domain)
    x = np.linspace(0.1, 1.4, 7)
    assert np.allclose(cmap.z_of_x(x), ref(x), rtol=1e-14)


@pytest.mark.parametrize(
    "Q", [m[0] for m in MAPS] + [Poly((3, 2)), Poly((2, 2, 2)), Poly((0.5, 1, 0.5)), Poly((2, 1, -1)), Poly((7,))]
)
def test_coordinate_map_derivative_identity(Q):
    cmap = coordinate_map(Q)
    lo, hi = cmap.domain
    lo = max(lo, -3.0) + 0.05
    hi = min(hi, 3.0) - 0.05
    x = np.linspace(lo, hi, 25)
    h = 1e-6
    fd = (cmap.z_of_x(x + h) - cmap.z_of_x(x - h)) / (2 * h)
    z = cmap.z_of_x(x)
    assert np.allclose(fd**2, Q(z).real, rtol=1e-6, atol=1e-8)
    assert np.allclose(cmap.dz_dx(x) ** 2, Q(z).real, rtol=1e-12, atol=1e-12)
    assert np.allclose(cmap.x_of_z(z), x, atol=1e-10)


@pytest.mark.parametrize(
    "Q", [Poly((1j,)), Poly((-1,)), Poly((0, -4)), Poly((1, 0, 0, 1)), Poly((-1, 0, -1)), Poly((1, 0, 1j))]
)
def test_coordinate_map_errors(Q):
    with pytest.raises(ModelError):
        coordinate_map(Q)


# prepotential -------------------------------------------------------------


def _delta(f, x, x0):
    return np.asarray(f(x)) - f(x0)


@pytest.mark.parametrize(
    "spec, ref",
    [
        (harmonic(1.5), lambda x: 1.5 * x**2 / 2),
        (sextic(2.0, 3.0), lambda x: 2.0 * x**4 / 4 + 3.0 * x**2 / 2),
        (radial(1.0, 2.0), lambda x: x**2 / 2 - 2.0 * np.log(x)),
    ],
)
def test_prepotential_closed_form(spec, ref):
    w0 = prepotential_W0(spec)
    x = np.linspace(0.2, 3.0, 15)
    assert np.allclose(_delta(w0, x, 1.0).real, _delta(ref, x, 1.0), atol=1e-12)


IN_SCOPE = [harmonic(1.0), harmonic(2.5), radial(1.0, 2.0), radial(0.7, 1.0), sextic(1, 1), sextic(2, 3), pt_quartic()]


@pytest.mark.parametrize("spec", IN_SCOPE, ids=lambda s: s.label)
def test_prepotential_derivative_identity(spec):
    # W0'(x) z'(x) = P(z(x))
    w0 = prepotential_W0(spec)
    cmap = w0.cmap
    x = np.linspace(0.3, 2.5, 50)
    h = 1e-5
    dW = (w0(x + h) - w0(x - h)) / (2 * h)
    lhs = dW * cmap.dz_dx(x)
    rhs = spec.P(cmap.z_of_x(x)) * cmap.dz_dx(x) ** 2 / spec.Q(cmap.z_of_x(x))
    assert np.allclose(lhs, rhs, rtol=1e-6, atol=1e-8)


@pytest.mark.parametrize(
    "spec, expected",
    [
        (harmonic(1.0), True),
        (ModelSpec(Poly((0, 0, 1)), Poly((1,))), False),
        (pt_quartic(1.0, 2.0, 1.0), True),
        (radial(1.0, 2.0), True),
        (sextic(1.0, 1.0), True),
        (sextic(-1.0, 1.0), False),
        (ModelSpec(Poly((0, -0.5j * 2)), Poly((1,))), False),
        (harmonic(-1.0), False),
    ],
)
def test_normalizable(spec, expected):
    assert normalizable(spec) is expected


# potential ---------------------------------------------------------------


@pytest.mark.parametrize(
    "spec, S, poles, S0",
    [
        (sextic(1, 1), (-1, -2, 2, 1), [], -1),
        (radial(1, 2), (-5, 1), [(0.0, 1, 2.0)], -5),
        (harmonic(1), (-1, 0, 1), [], -1),
    ],
)
def test_potential_core_examples(spec, S, poles, S0):
    core = potential_core(spec)
    assert core.S.allclose(Poly(S))
    assert [(complex(t.location), t.order, complex(t.coeff)) for t in core.pole_terms] == pytest.approx(
        [(complex(a), o, complex(c)) for a, o, c in poles]
    )
    assert core.S0 == pytest.approx(S0)


@pytest.mark.parametrize(
    "spec",
    IN_SCOPE
    + [
        ModelSpec(Poly((0.3, 1.0, 0.5)), Poly((1, 0, 1))),
        ModelSpec(Poly((0.3, 1.0)), Poly((-1, 0, 1))),
        ModelSpec(Poly((1.0, 0.2)), Poly((0.4, 2, 1))),
        ModelSpec(Poly((0.5, 1.0, 2.0)), Poly((2, 0.5))),
    ],
    ids=str,
)
def test_potential_reconstruction(spec, rng):
    core = potential_core(spec)
    P, Q = spec.P, spec.Q
    z = rng.standard_normal(20) * 2 + 1j * rng.standard_normal(20)
    direct = (P(z) ** 2 - Q(z) * derivative(P)(z) + 0.5 * P(z) * derivative(Q)(z)) / Q(z)
    assert np.allclose(core.v0(z), direct, rtol=1e-10)


@pytest.mark.parametrize(
    "spec, roots, E",
    [
        (harmonic(1, 3), bae.classical_seed(harmonic(1, 3)), 7.0),
        (sextic(1, 1, 1), [(-1 + SQ3) / 2], 3 + 2 * SQ3),
        (radial(1, 2, 3), [0.3, 1.1, 2.9], 17.0),
    ],
)
def test_energy_examples(spec, roots, E):
    assert energy(spec, roots) == pytest.approx(E, abs=1e-12)


def test_energy_needs_N_roots():
    with pytest.raises(ModelError):
        energy(harmonic(1, 2), [0.1])


def test_phi_examples():
    x = np.linspace(-3, 3, 13)
    assert np.allclose(phi(harmonic(1, 0), [], x), np.exp(-x * x / 2), rtol=1e-14)
    # sextic a=b=1, N=2, the p = -3 root set
    rs = [r for r in bae.reduce_n2(1.0, 1.0) if abs(r.p + 3) < 1e-9][0].roots
    xs = np.linspace(0.1, 3, 13)
    ref = np.exp(-(xs**4) / 4 - xs**2 / 2) * (xs**4 + 3 * xs**2 + 1.5)
    assert np.allclose(phi(sextic(1, 1, 2), rs, xs), ref, rtol=1e-12)
    # phi vanishes where z(x) hits a root
    z1 = 1.7
    assert abs(phi(sextic(1, 1, 1), [z1], math.sqrt(z1))) < 1e-15


def test_phi_outside_domain():
    with pytest.raises(ModelError):
        phi(radial(1, 2, 0), [], -1.0)


@pytest.mark.parametrize("spec", [harmonic(1, 4), radial(1, 2, 3), sextic(1, 1, 3), sextic(2, 3, 2)], ids=str)
def test_pole_free_identity_and_real_energy(spec, rng):
    for rs in bae.enumerate_solutions(spec):
        roots = np.array(rs.roots)
        core = potential_core(spec)
        z = rng.uniform(0.05, 4.0, 50) + 1j * rng.uniform(-1, 1, 50)
        z = z[np.min(np.abs(z[:, None] - roots[None, :]), axis=1) > 1e-2]
        raw = raw_potential(spec, roots, z)
        canonical = core.pole_free(z, spec.N, roots)
        assert np.allclose(raw, canonical, rtol=1e-8, atol=1e-8 * np.max(np.abs(canonical)))
        assert abs(energy(spec, rs).imag) <= 1e-10


@pytest.mark.parametrize("spec", [harmonic(1.3), radial(0.8, 1.0)], ids=str)
def test_es_shape_independent_of_N(spec):
    x = np.linspace(0.2, 5, 40)
    base = physical_potential(spec.with_N(0), x)
    for N in range(1, 7):
        assert np.max(np.abs(physical_potential(spec.with_N(N), x) - base)) <= 1e-12


def test_physical_potential_domain_check():
    with pytest.raises(ModelError):
        physical_potential(radial(), np.array([-1.0, 1.0]), check_domain=True)
    # without the check, the even extension is allowed
    assert np.isfinite(physical_potential(sextic(), np.array([-1.0]))).all()
