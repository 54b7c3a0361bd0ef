"""Command-line front end: ``prepot <command> [options]``.

Exit codes: 0 ok, 1 usage or input error, 2 verification failure,
3 solver non-convergence or incomplete enumeration.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__, bae, oracle
from .model import (
    ModelError,
    ModelSpec,
    classify,
    coordinate_map,
    normalizable,
    physical_potential,
    potential_core,
    prepotential_W0,
)
from .poly import RootFindingError
from .presets import PRESETS, make_preset
from .spectrum import HALF_LINE, GridError, GridSpec, default_grid, integrate, max_offdiag, orthogonality
from .verify import is_pt_symmetric, model_states, pt_status, verify_extended, verify_model
from .xrational import ExtendedSpec, ExtendedSpecError, extended_potential, extended_state

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_SOLVER = 0, 1, 2, 3
PARAM_FLAGS = ("a", "b", "c", "ell", "alpha", "beta", "gamma")
CSV_FMT = "%.17g"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# JSON helpers


def _plain(obj):
    """Recursively convert to JSON-safe builtins (complex -> [re, im])."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    return obj


def _emit_json(payload: dict, out: str | None):
    text = json.dumps(_plain(payload), indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(command: str, ctx: dict, **body) -> dict:
    return {"command": command, "version": __version__, **ctx, **body}


# --------------------------------------------------------------------------
# input resolution


def _load_spec_text(text: str):
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON spec: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("spec JSON must be an object")
    if "spec" in data and "name" in data:  # a serialized preset
        data = data["spec"]
    try:
        if "P" in data:
            return ModelSpec.from_dict(data)
        if "ell" in data:
            return ExtendedSpec.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid spec: {exc}") from exc
    raise InputError("spec JSON needs keys P, Q (model) or ell, alpha (extended)")


def resolve(args) -> tuple[object, dict]:
    """The spec named on the command line and its provenance block."""
    params = {k: getattr(args, k) for k in PARAM_FLAGS if getattr(args, k, None) is not None}
    if args.spec and args.preset:
        raise InputError("use either --preset or --spec, not both")
    if args.spec:
        if params:
            raise InputError("parameter flags only apply to --preset")
        spec = _load_spec_text(args.spec)
        if args.N is not None and isinstance(spec, ModelSpec):
            spec = spec.with_N(args.N)
        ctx = {"preset": None}
    elif args.preset:
        try:
            preset = make_preset(args.preset, N=args.N or 0, **params)
        except KeyError as exc:
            raise InputError(exc.args[0]) from exc
        spec = preset.spec
        ctx = {"preset": {"name": preset.name, "params": preset.params, "doc": preset.doc}}
    else:
        raise InputError("give --preset NAME or --spec JSON")
    ctx["spec"] = spec.to_dict()
    return spec, ctx


def _grid(args, spec) -> GridSpec:
    if args.grid:
        return GridSpec.parse(args.grid)
    return default_grid(spec)


def _need_model(spec, command):
    if not isinstance(spec, ModelSpec):
        raise InputError(f"{command} needs a P/Q model; use 'extended' for extended specs")
    return spec


# --------------------------------------------------------------------------
# commands


def cmd_classify(args):
    spec, ctx = resolve(args)
    if isinstance(spec, ExtendedSpec):
        body = {"solvability": "ExactlySolvable", "extended": True, "normalizable": True}
    else:
        cmap = coordinate_map(spec.Q)
        body = {
            "solvability": classify(spec).value,
            "m": spec.m,
            "n": spec.n,
            "normalizable": normalizable(spec),
            "coordinate_map": {"kind": cmap.kind, "form": cmap.form, "domain": list(cmap.domain)},
        }
    _emit_json(_envelope("classify", ctx, **body), args.out)
    return EXIT_OK


def cmd_build(args):
    spec, ctx = resolve(args)
    spec = _need_model(spec, "build")
    core = potential_core(spec)
    cmap = coordinate_map(spec.Q)
    body = {
        "S": list(core.S.coeffs),
        "S0": core.S0,
        "poles": [{"at": t.location, "order": t.order, "coeff": t.coeff} for t in core.pole_terms],
        "N_terms": {
            "z_coeff_per_N": core.linear_N_term,
            "energy": "E = -(S0 + q2 N^2 - 2 A1 N - 2 A2 sum z_k)",
            "q2": core.q2,
            "A1": core.A1,
            "A2": core.A2,
        },
        "coordinate_map": {"kind": cmap.kind, "form": cmap.form, "params": cmap.params, "domain": list(cmap.domain)},
        "W0": prepotential_W0(spec).terms(),
    }
    _emit_json(_envelope("build", ctx, **body), args.out)
    return EXIT_OK


def _solve_payload(spec: ModelSpec, args) -> tuple[dict, bae.Enumeration]:
    en = bae.enumerate_solutions(spec, args.starts, args.rng_seed)
    sols = []
    for rs, E in zip(en.solutions, en.energies):
        entry = {"roots": list(rs.roots), "energy": E, "residual": rs.residual_norm, "seed_index": rs.seed_index}
        if len(rs.roots) == 2:
            entry["p"], entry["q"] = rs.symmetric_sums()
        sols.append(entry)
    body = {
        "solvability": classify(spec).value,
        "expected": en.expected,
        "found": len(en),
        "complete": en.complete,
        "rng_seed": args.rng_seed,
        "solutions": sols,
    }
    if is_pt_symmetric(spec) and not spec.is_hermitian():
        body["pt_status"] = pt_status(en.energies)
    return body, en


def cmd_solve(args):
    spec, ctx = resolve(args)
    spec = _need_model(spec, "solve")
    body, en = _solve_payload(spec, args)
    _emit_json(_envelope("solve", ctx, **body), args.out)
    return EXIT_OK if en.complete else EXIT_SOLVER


def cmd_verify(args):
    spec, ctx = resolve(args)
    if isinstance(spec, ExtendedSpec):
        grid = GridSpec.parse(args.grid) if args.grid else None
        report = verify_extended(spec, args.n_max, grid)
    else:
        report = verify_model(spec, args.starts, args.rng_seed, _grid(args, spec))
    _emit_json(_envelope("verify", ctx, **report.to_dict()), args.out)
    if not report.complete:
        return EXIT_SOLVER
    return EXIT_OK if report.passed else EXIT_VERIFY


def _state_table(x, v, phi, magnify):
    v = np.asarray(v, dtype=complex)
    phi = magnify * np.asarray(phi, dtype=complex)
    return np.column_stack([x, v.real, v.imag, phi.real, phi.imag])


def _write_csv(target, table, header):
    buf = io.StringIO()
    np.savetxt(buf, table, fmt=CSV_FMT, delimiter=",", header=header, comments="")
    if isinstance(target, str):
        with open(target, "w") as fh:
            fh.write(buf.getvalue())
    else:
        target.write(buf.getvalue())


def _dump_states(states, pots, args, prefix: str) -> list[str]:
    """One CSV per state into the --out directory, or all to stdout."""
    header = "x,V_re,V_im,phi_re,phi_im"
    files = []
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    for i, (st, v) in enumerate(zip(states, pots)):
        table = _state_table(st.grid.x, v, st.samples, args.magnify)
        if args.out:
            path = os.path.join(args.out, f"{prefix}_{i}.csv")
            _write_csv(path, table, header)
            files.append(path)
        else:
            sys.stdout.write(f"# state {i} E={st.energy.real + 0.0!r}{st.energy.imag + 0.0:+.17g}j\n")
            _write_csv(sys.stdout, table, header)
    return files


def _state_summary(states, residuals):
    return [
        {"energy": st.energy, "norm": float(np.sqrt(_norm2(st))), "nodes": st.nodes, "residual": r}
        for st, r in zip(states, residuals)
    ]


def _norm2(st):
    return integrate(np.abs(st.samples) ** 2, st.grid).real


def cmd_states(args):
    spec, ctx = resolve(args)
    spec = _need_model(spec, "states")
    grid = _grid(args, spec)
    states = model_states(spec, grid, args.starts, args.rng_seed)
    pots = [physical_potential(s_spec, grid.x) for s_spec, _ in states]
    states = [st for _, st in states]
    residuals = [
        oracle.schrodinger_residual(lambda x: physical_potential(spec, x), st.energy, st, grid) for st in states
    ]
    summary = _envelope("states", ctx, grid=str(grid), magnify=args.magnify, states=_state_summary(states, residuals))
    if args.format == "csv":
        files = _dump_states(states, pots, args, "state")
        if args.out:
            summary["files"] = files
            _emit_json(summary, os.path.join(args.out, "summary.json"))
    else:
        _emit_json(summary, args.out)
    return EXIT_OK


def cmd_extended(args):
    spec, ctx = resolve(args)
    if not isinstance(spec, ExtendedSpec):
        raise InputError("extended needs the x-laguerre preset or an {ell, alpha} spec")
    grid = GridSpec.parse(args.grid) if args.grid else None
    report = verify_extended(spec, args.n_max, grid)
    grid = grid or HALF_LINE
    states = [extended_state(spec, n, grid) for n in range(args.n_max + 1)]
    pot = extended_potential(spec, grid.x)
    body = {
        "grid": str(grid),
        "energies": [st.energy.real for st in states],
        "nodes": [st.nodes for st in states],
        "orthogonality_offdiag": max_offdiag(orthogonality(states, grid)),
        "report": report.to_dict(),
    }
    if args.format == "csv":
        files = _dump_states(states, [pot] * len(states), args, "extended")
        if args.out:
            body["files"] = files
            _emit_json(_envelope("extended", ctx, **body), os.path.join(args.out, "summary.json"))
    else:
        _emit_json(_envelope("extended", ctx, **body), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def plot_data(preset: str, params: dict, grid: GridSpec | None, magnify: float, starts=None, rng_seed=0):
    """Rows (N, state, E, x, V_re, V_im, phi_re, phi_im) for N = 1 and N = 2."""
    blocks, summary = [], []
    for N in (1, 2):
        spec = make_preset(preset, N=N, **params).spec
        g = grid or default_grid(spec)
        v = physical_potential(spec, g.x)
        for i, (_, st) in enumerate(model_states(spec, g, starts, rng_seed)):
            col = np.full(g.points, 1.0)
            table = _state_table(g.x, v, st.samples, magnify)
            blocks.append(np.column_stack([N * col, i * col, st.energy.real * col, table]))
            summary.append({"N": N, "state": i, "energy": st.energy, "norm": float(np.sqrt(_norm2(st))), "nodes": st.nodes})
    return np.vstack(blocks), summary


def cmd_plot_data(args):
    name = args.preset or "sextic"
    if args.spec:
        raise InputError("plot-data works on presets")
    args.preset = name
    spec, ctx = resolve(args)
    _need_model(spec, "plot-data")
    params = ctx["preset"]["params"]
    grid = GridSpec.parse(args.grid) if args.grid else None
    table, summary = plot_data(name, params, grid, args.magnify, args.starts, args.rng_seed)
    header = "N,state,E,x,V_re,V_im,phi_re,phi_im"
    ctx["spec"] = None  # two specs (N=1, N=2); listed in the summary instead
    payload = _envelope("plot-data", ctx, magnify=args.magnify, states=summary)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_csv(os.path.join(args.out, "plot_data.csv"), table, header)
        payload["files"] = [os.path.join(args.out, "plot_data.csv")]
        _emit_json(payload, os.path.join(args.out, "summary.json"))
    _emit_json(payload, None)
    return EXIT_OK


COMMANDS = {
    "classify": (cmd_classify, "solvability class, (m, n) and normalizability"),
    "build": (cmd_build, "potential: S, pole terms, N-terms, domain and W0 terms"),
    "solve": (cmd_solve, "all Bethe ansatz solutions with energies"),
    "verify": (cmd_verify, "run every applicable oracle; exit 2 on failure"),
    "states": (cmd_states, "normalized state samples (CSV) and a summary"),
    "extended": (cmd_extended, "rationally extended oscillator pipeline"),
    "plot-data": (cmd_plot_data, "potential and states for N = 1 and N = 2"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--preset", choices=sorted(PRESETS), help="named model")
    common.add_argument("--spec", help="model JSON file or inline JSON")
    common.add_argument("--N", type=int, default=None, help="number of BAE roots (default 0)")
    common.add_argument("--starts", type=int, default=None, help="random seeds for the BAE search")
    common.add_argument("--rng-seed", type=int, default=0)
    common.add_argument("--grid", help='x grid as "min:max:points"')
    common.add_argument("--out", help="output file (JSON) or directory (CSV)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--magnify", type=float, default=None, help="scale factor for phi columns (plot-data: 10)")
    common.add_argument("--n-max", type=int, default=4, help="highest extended state index")
    for name in PARAM_FLAGS:
        common.add_argument(f"--{name}", type=float, default=None)

    parser = _Parser(prog="prepot", description="Prepotential models: solve, verify and sample.")
    parser.add_argument("--version", action="version", version=f"prepot {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command in ("states",) else "json"
    if args.magnify is None:
        args.magnify = 10.0 if args.command == "plot-data" else 1.0
    if args.N is not None and args.N < 0:
        parser.error("--N must be non-negative")
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except BrokenPipeError:
        # downstream reader (e.g. head) closed the pipe; nothing left to report
        sys.stderr.close()
        return EXIT_OK
    except (bae.ConvergenceError, RootFindingError) as exc:
        print(f"prepot {args.command}: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (InputError, ModelError, GridError, ExtendedSpecError, KeyError, ValueError, OSError) as exc:
        print(f"prepot {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
