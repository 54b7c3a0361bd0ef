"""Named models with their parameters.

=============  ================  =========================================
name           parameters        P, Q
=============  ================  =========================================
harmonic       b                 P = b z,               Q = 1
qnm-harmonic   c                 P = -i c/2 z,          Q = 1
radial         a, ell            P = 2a z - 2 ell,      Q = 4z
qnm-radial     a, ell            P = -2i a z - 2 ell,   Q = 4z   (a -> -ia)
sextic         a, b              P = 2a z^2 + 2b z,     Q = 4z
sextic-imag-b  a, beta           P = 2a z^2 + 2i beta z, Q = 4z
pt-quartic     alpha, beta,      P = i alpha z^2 + beta z + i gamma, Q = 1
               gamma
x-laguerre     ell, alpha        extended radial oscillator (xi = L_ell^alpha)
=============  ================  =========================================

For pt-quartic the level count N corresponds to J = N + 1 in the usual
parameterization of the quartic PT-symmetric QES potential.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Union

from .model import ModelSpec
from .poly import Poly
from .xrational import ExtendedSpec

AnySpec = Union[ModelSpec, ExtendedSpec]


@dataclass(frozen=True)
class PresetDef:
    name: str
    defaults: dict
    build: Callable[..., AnySpec]
    doc: str


def _harmonic(b, N):
    return ModelSpec(Poly((0, b)), Poly((1,)), N, "harmonic")


def _qnm_harmonic(c, N):
    return ModelSpec(Poly((0, -0.5j * c)), Poly((1,)), N, "qnm-harmonic")


def _radial(a, ell, N):
    return ModelSpec(Poly((-2 * ell, 2 * a)), Poly((0, 4)), N, "radial")


def _qnm_radial(a, ell, N):
    return ModelSpec(Poly((-2 * ell, -2j * a)), Poly((0, 4)), N, "qnm-radial")


def _sextic(a, b, N):
    return ModelSpec(Poly((0, 2 * b, 2 * a)), Poly((0, 4)), N, "sextic")


def _sextic_imag_b(a, beta, N):
    return ModelSpec(Poly((0, 2j * beta, 2 * a)), Poly((0, 4)), N, "sextic-imag-b")


def _pt_quartic(alpha, beta, gamma, N):
    return ModelSpec(Poly((1j * gamma, beta, 1j * alpha)), Poly((1,)), N, "pt-quartic")


def _x_laguerre(ell, alpha, N=0):
    return ExtendedSpec(int(ell), float(alpha))


PRESETS: dict[str, PresetDef] = {
    p.name: p
    for p in [
        PresetDef("harmonic", {"b": 1.0}, _harmonic, "simple harmonic oscillator, E = b(2N+1)"),
        PresetDef("qnm-harmonic", {"c": 2.0}, _qnm_harmonic, "inverted oscillator quasinormal modes, E = -ic(N+1/2)"),
        PresetDef("radial", {"a": 1.0, "ell": 2.0}, _radial, "radial oscillator, E = a(4N+2ell+1)"),
        PresetDef("qnm-radial", {"a": 1.0, "ell": 2.0}, _qnm_radial, "radial quasinormal modes, E = -ia(4N+2ell+1)"),
        PresetDef("sextic", {"a": 1.0, "b": 1.0}, _sextic, "QES sextic oscillator, N+1 solvable states"),
        PresetDef("sextic-imag-b", {"a": 1.0, "beta": 1.0}, _sextic_imag_b, "sextic with imaginary b (no reference values)"),
        PresetDef("pt-quartic", {"alpha": 1.0, "beta": 2.0, "gamma": 1.0}, _pt_quartic, "PT-symmetric QES quartic"),
        PresetDef("x-laguerre", {"ell": 1, "alpha": -2.5}, _x_laguerre, "rationally extended radial oscillator"),
    ]
}


@dataclass(frozen=True)
class Preset:
    name: str
    params: dict
    spec: AnySpec
    doc: str = ""

    @property
    def extended(self) -> bool:
        return isinstance(self.spec, ExtendedSpec)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "params": dict(self.params),
            "kind": "extended" if self.extended else "model",
            "spec": self.spec.to_dict(),
            "doc": self.doc,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Preset":
        spec_cls = ExtendedSpec if data.get("kind") == "extended" else ModelSpec
        return cls(data["name"], dict(data["params"]), spec_cls.from_dict(data["spec"]), data.get("doc", ""))

    @classmethod
    def from_json(cls, text: str) -> "Preset":
        return cls.from_dict(json.loads(text))


def make_preset(name: str, N: int = 0, **params) -> Preset:
    try:
        d = PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
    unknown = set(params) - set(d.defaults)
    if unknown:
        raise KeyError(f"preset {name!r} has no parameter(s) {sorted(unknown)}")
    resolved = {k: params.get(k) if params.get(k) is not None else v for k, v in d.defaults.items()}
    return Preset(name, resolved, d.build(**resolved, N=N), d.doc)
