"""Command-line interface.

Exit codes: 0 success, 2 configuration error, 3 physics-domain error,
4 numerical failure.  Failures print a one-line JSON error record on
stderr.  Outputs are written atomically.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import warnings
from dataclasses import replace

import numpy as np

from . import __version__
from . import bloch, dressed, gate, propagation, quantum_phase, susceptibility
from .config import load_config, set_value, build, validate_path
from .errors import ConfigError, NumericalError, PhysicsDomainError, TripodError
from .params import Beam, Convention, SystemParams


# --- output helpers ----------------------------------------------------------------


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else repr(v)
    if isinstance(x, (Convention, Beam)):
        return x.value
    return x


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


class Table:
    """Rows of numbers with per-column units."""

    def __init__(self, columns, units, rows):
        self.columns = list(columns)
        self.units = list(units)
        self.rows = [list(r) for r in rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# units: " + ", ".join(f"{c} [{u}]" for c, u in zip(self.columns, self.units)) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_cell(v) for v in r])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {"columns": self.columns, "units": self.units, "rows": self.rows}


def render(payload, fmt: str) -> str:
    if fmt == "csv":
        if isinstance(payload, Table):
            return payload.to_csv()
        return _dict_to_table(payload).to_csv()
    obj = payload.to_json() if isinstance(payload, Table) else payload
    return json.dumps(_jsonable(obj), indent=2) + "\n"


def _flatten(d, prefix=""):
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and set(v) == {"re", "im"}:
            out[key + ".re"], out[key + ".im"] = v["re"], v["im"]
        elif isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            for i, item in enumerate(v):
                if isinstance(item, dict):
                    out.update(_flatten(item, f"{key}.{i}."))
                else:
                    out[f"{key}.{i}"] = item
        else:
            out[key] = v
    return out


def _dict_to_table(d) -> Table:
    flat = _flatten(_jsonable(d))
    return Table(["key", "value"], ["-", "see key"], [[k, v] for k, v in flat.items()])


def write_atomic(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- subcommands --------------------------------------------------------------------


def _state_rows(states):
    return [[s.energy, int(s.is_dark)] + [c for a in s.amplitudes for c in (a.real, a.imag)] for s in states]


_AMP_COLS = [f"{p}{j}" for j in range(4) for p in ("re_a", "im_a")]


def cmd_dressed(sp: SystemParams, args):
    h = dressed.interaction_hamiltonian(sp.fields, sp.atom)
    states = dressed.eigensystem(h)
    if args.format == "csv":
        return Table(["energy", "is_dark"] + _AMP_COLS, ["gamma", "-"] + ["-"] * 8, _state_rows(states))
    out = {"hamiltonian_detunings": list(sp.atom.deltas),
           "eigenstates": [{"energy": s.energy, "is_dark": s.is_dark, "amplitudes": s.amplitudes}
                           for s in states]}
    try:
        dk = dressed.dark_states(sp.fields)
        br = dressed.bright_states(sp.fields)
        out["resonant_closed_form"] = {
            "dark": [{"energy": s.energy, "amplitudes": s.amplitudes} for s in dk],
            "bright": [{"energy": s.energy, "amplitudes": s.amplitudes} for s in br],
        }
    except PhysicsDomainError as exc:
        out["resonant_closed_form"] = {"error": str(exc)}
    return out


def _initial_state(name: str) -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    if name == "ground-mixture":
        rho[1, 1] = rho[2, 2] = rho[3, 3] = 1.0 / 3.0
    elif name == "probe-ground":
        rho[1, 1] = 1.0
    elif name == "symmetric":
        rho[1, 1] = rho[3, 3] = 0.5
    else:
        raise ConfigError(f"unknown initial state {name!r}")
    return rho


def cmd_bloch_steady(sp: SystemParams, args):
    rho0 = _initial_state(args.initial) if args.initial else None
    if args.clamp:
        rho = bloch.clamped_steady_state(sp.atom, sp.fields)
    else:
        rho = bloch.steady_state(sp.atom, sp.fields, rho0=rho0)
    if args.format == "csv":
        rows = [[i, j, rho[i, j].real, rho[i, j].imag] for i in range(4) for j in range(4)]
        return Table(["i", "j", "re_rho", "im_rho"], ["-", "-", "-", "-"], rows)
    return {"rho": rho, "populations": np.real(np.diag(rho)),
            "sigma_10": bloch.coherence(rho, Beam.P), "sigma_30": bloch.coherence(rho, Beam.T)}


def cmd_bloch_evolve(sp: SystemParams, args):
    rho0 = _initial_state(args.initial or "ground-mixture")
    times, rhos = bloch.time_evolve(sp.atom, sp.fields, rho0, args.t_final, args.dt, method=args.method)
    rows = []
    for t, r in zip(times, rhos):
        rows.append([t] + [r[k, k].real for k in range(4)] + [r[0, 1].real, r[0, 1].imag, r[0, 3].real, r[0, 3].imag])
    cols = ["t", "rho00", "rho11", "rho22", "rho33", "re_rho01", "im_rho01", "re_rho03", "im_rho03"]
    table = Table(cols, ["1/gamma"] + ["-"] * 8, rows)
    return table


def _chi_row(sp: SystemParams, form):
    s = susceptibility.susceptibilities(sp.atom, sp.fields, sp.medium, sp.convention, form)
    ap = susceptibility.absorption(susceptibility.chi_total(Beam.P, sp.atom, sp.fields, sp.medium, sp.convention, form),
                                   sp.medium.k_p, sp.medium.length, sp.convention)
    at = susceptibility.absorption(susceptibility.chi_total(Beam.T, sp.atom, sp.fields, sp.medium, sp.convention, form),
                                   sp.medium.k_t, sp.medium.length, sp.convention)
    return s, [s.chi1_p.real, s.chi1_p.imag, s.chi1_t.real, s.chi1_t.imag,
               s.chi3_p.real, s.chi3_p.imag, s.chi3_t.real, s.chi3_t.imag, float(ap), float(at)]


def _chi_units(conv: Convention):
    e = "m^2/V^2" if conv is Convention.SI else "cm^2/statV^2"
    return ["-"] * 4 + [e] * 4 + ["-", "-"]


_CHI_COLS = ["re_chi1_p", "im_chi1_p", "re_chi1_t", "im_chi1_t",
             "re_chi3_p", "im_chi3_p", "re_chi3_t", "im_chi3_t", "absorption_p", "absorption_t"]


def _sweep_values(start, stop, count):
    if count < 1:
        raise ConfigError("count must be >= 1")
    return np.linspace(start, stop, count) if count > 1 else np.array([start])


def _sweep(args, raw, param, values, fn, columns, units):
    validate_path(param)
    rows = []
    for v in values:
        sp = build(set_value(raw, param, float(v)))
        try:
            rows.append([float(v)] + fn(sp) + [0])
        except PhysicsDomainError:
            rows.append([float(v)] + [float("nan")] * len(columns) + [1])
    return Table([param] + columns + ["failed"], ["config"] + units + ["-"], rows)


def cmd_susceptibility(sp: SystemParams, args, raw):
    if args.scan:
        param, lo, hi, count = args.scan[0], float(args.scan[1]), float(args.scan[2]), int(args.scan[3])
        return _sweep(args, raw, param, _sweep_values(lo, hi, count),
                      lambda s: _chi_row(s, args.form)[1], _CHI_COLS, _chi_units(sp.convention))
    s, row = _chi_row(sp, args.form)
    out = s.as_dict()
    out["absorption_p"], out["absorption_t"] = row[8], row[9]
    return out


def cmd_coeffs(sp: SystemParams, args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        co = propagation.coefficients(sp.atom, sp.fields, sp.medium, args.form)
    out = co.as_dict()
    out["warnings"] = [str(w.message) for w in caught]
    return out


def cmd_propagate(sp: SystemParams, args):
    co = propagation.coefficients(sp.atom, sp.fields, sp.medium, args.form)
    grid = propagation.propagate(co, sp.pulses, n_t=args.nt, n_z=args.nz, include_loss=not args.no_loss,
                                 include_dispersion=not args.no_dispersion, snapshots=args.snapshots)
    rows = []
    for k, z in enumerate(grid.z):
        ph_p = np.angle(grid.e_p[k] * np.conj(grid.e_p[0]))
        ph_t = np.angle(grid.e_t[k] * np.conj(grid.e_t[0]))
        for i, t in enumerate(grid.t):
            rows.append([z, t, grid.e_p[k, i].real, grid.e_p[k, i].imag, grid.e_t[k, i].real,
                         grid.e_t[k, i].imag, ph_p[i], ph_t[i]])
    cols = ["z", "t_retarded", "re_e_p", "im_e_p", "re_e_t", "im_e_t", "phase_p", "phase_t"]
    table = Table(cols, ["m", "s", "-", "-", "-", "-", "rad", "rad"], rows)
    if args.format == "json":
        return {"step_bounds": grid.step_bounds, "reference_velocity": grid.reference_velocity,
                "table": table.to_json()}
    return table


def cmd_quantum_phase(sp: SystemParams, args):
    res = quantum_phase.evaluate(sp.atom, sp.fields, sp.medium, complex(args.alpha_p), complex(args.alpha_t),
                                 args.delta_omega, args.form)
    out = res.as_dict()
    out["units"] = {"phi": "rad", "delta_omega": "rad/s"}
    return out


def cmd_gate(sp: SystemParams, args):
    table = gate.truth_table(sp.atom, sp.fields, sp.medium, sp.pulses, sp.convention, args.form)
    if args.format == "csv":
        rows = [[f"{r['pol_p']}/{r['pol_t']}", r["total"], r["vacuum"], r["linear_excess"], r["nonlinear"]]
                for r in table.as_dict()["entries"]]
        return Table(["pol_p/pol_t", "total", "vacuum", "linear_excess", "nonlinear"],
                     ["-", "rad", "rad", "rad", "rad"], rows)
    return table.as_dict()


def cmd_gate_mc(sp: SystemParams, args):
    noise = gate.NoiseModel(args.level, args.samples, sp.seed)
    res = gate.gate_error_mc(noise, sp.atom, sp.fields, sp.medium, sp.pulses, sp.convention, args.form)
    if args.format == "csv":
        counts, edges = res.histogram(args.bins)
        rows = [[edges[i], edges[i + 1], int(c)] for i, c in enumerate(counts)]
        return Table(["dphi_lo", "dphi_hi", "count"], ["rad", "rad", "-"], rows)
    out = res.as_dict()
    out["level"], out["samples"], out["seed"] = args.level, args.samples, sp.seed
    return out


def cmd_fig2(sp: SystemParams, args):
    atom = replace(sp.atom, delta1=0.0, delta2=0.0, delta3=0.0) if not args.keep_detunings else sp.atom
    data = gate.absorption_scan(np.linspace(0.0, args.max, args.points), atom, sp.fields, sp.medium,
                                sp.convention)
    return Table(["gamma_d", "scaled_absorption", "absorption_exponent"], ["gamma", "-", "-"],
                 data.tolist())


def _sweep_quantities(sp: SystemParams, form):
    shifts = gate.phase_shifts(sp.atom, sp.fields, sp.medium, sp.pulses, sp.convention, form)
    co = propagation._coeff_arrays(sp.atom.delta1, sp.atom.delta2, sp.atom.delta3, sp.atom.gamma_d,
                                   sp.fields.omega_pump, sp.atom.gamma, sp.medium, form)
    return [shifts.phi_nlin_p + shifts.phi_nlin_t, shifts.phi_nlin_p, shifts.phi_nlin_t,
            shifts.lin_excess_p, shifts.lin_excess_t, float(co["vg_p"]), float(co["vg_t"])]


def cmd_sweep(sp: SystemParams, args, raw):
    values = _sweep_values(args.from_, args.to, args.count)
    cols = ["conditional_phase", "phi_nlin_p", "phi_nlin_t", "lin_excess_p", "lin_excess_t", "vg_p", "vg_t"]
    return _sweep(args, raw, args.param, values, lambda s: _sweep_quantities(s, args.form), cols,
                  ["rad"] * 5 + ["m/s", "m/s"])


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--convention", choices=("si", "gaussian"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--form", choices=susceptibility.FORMS, default="derived",
                        help="lineshape form (default derived)")

    parser = argparse.ArgumentParser(prog="tripodgate", description="Tripod-atom cross-Kerr phase gate.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, default_fmt, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(default_format=default_fmt)
        return p

    add("dressed", "json", help="eigenstates of the tripod Hamiltonian")
    p = add("bloch-steady", "json", help="steady-state density matrix")
    p.add_argument("--initial", choices=("ground-mixture", "probe-ground", "symmetric"),
                   help="initial state selecting the stationary state when it is not unique")
    p.add_argument("--clamp", action="store_true", help="hold populations at (0, 1/2, 0, 1/2)")
    p = add("bloch-evolve", "csv", help="time evolution of the density matrix")
    p.add_argument("--initial", choices=("ground-mixture", "probe-ground", "symmetric"))
    p.add_argument("--t-final", type=float, default=50.0, help="in 1/gamma")
    p.add_argument("--dt", type=float, default=0.5, help="in 1/gamma")
    p.add_argument("--method", default="DOP853")
    p = add("susceptibility", "json", help="linear and Kerr susceptibilities")
    p.add_argument("--scan", nargs=4, metavar=("PARAM", "FROM", "TO", "COUNT"))
    add("coeffs", "json", help="propagation coefficients")
    p = add("propagate", "csv", help="split-step envelope propagation")
    p.add_argument("--nz", type=int, default=200)
    p.add_argument("--nt", type=int, default=256)
    p.add_argument("--snapshots", type=int, default=2)
    p.add_argument("--no-loss", action="store_true")
    p.add_argument("--no-dispersion", action="store_true")
    p = add("quantum-phase", "json", help="quantum phase shifts and coherent-state expectations")
    p.add_argument("--alpha-p", type=complex, default=1.0)
    p.add_argument("--alpha-t", type=complex, default=1.0)
    p.add_argument("--delta-omega", type=float, default=None,
                   help="frequency spread in rad/s (default: narrower transparency window)")
    add("gate", "json", help="truth table and conditional phase")
    p = add("gate-mc", "json", help="Monte Carlo gate error under intensity noise")
    p.add_argument("--level", type=float, default=0.01)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--bins", type=int, default=40)
    p = add("fig2", "csv", help="probe absorption against ground-state dephasing")
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--max", type=float, default=0.1, help="largest gamma_d in units of gamma")
    p.add_argument("--keep-detunings", action="store_true", help="do not force resonance")
    p = add("sweep", "csv", help="scan one config parameter")
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="from_", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--count", type=int, default=11)
    return parser


COMMANDS = {
    "dressed": cmd_dressed,
    "bloch-steady": cmd_bloch_steady,
    "bloch-evolve": cmd_bloch_evolve,
    "coeffs": cmd_coeffs,
    "propagate": cmd_propagate,
    "quantum-phase": cmd_quantum_phase,
    "gate": cmd_gate,
    "gate-mc": cmd_gate_mc,
    "fig2": cmd_fig2,
}
RAW_COMMANDS = {"susceptibility": cmd_susceptibility, "sweep": cmd_sweep}


def _error_record(exc: BaseException, code: int) -> str:
    kind = getattr(exc, "kind", "error")
    return json.dumps({"status": "error", "kind": kind, "type": type(exc).__name__,
                       "message": str(exc), "exit_code": code})


def run(argv=None, environ=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = int(exc.code or 0)
        if code:
            sys.stderr.write(_error_record(ConfigError("invalid command line"), code) + "\n")
        return code
    try:
        sp, raw = load_config(args.config, environ)
        if args.convention is not None:
            raw = dict(raw, convention=args.convention)
        if args.seed is not None:
            raw = dict(raw, seed=args.seed)
        sp = build(raw)
        args.format = args.format or args.default_format
        with np.errstate(all="ignore"):
            if args.command in RAW_COMMANDS:
                payload = RAW_COMMANDS[args.command](sp, args, raw)
            else:
                payload = COMMANDS[args.command](sp, args)
        write_atomic(render(payload, args.format), args.out)
        return 0
    except TripodError as exc:
        err, code = exc, exc.exit_code
    except (ValueError, TypeError) as exc:
        err, code = exc, ConfigError.exit_code
    except (np.linalg.LinAlgError, FloatingPointError, OverflowError) as exc:
        err, code = exc, NumericalError.exit_code
    sys.stderr.write(_error_record(err, code) + "\n")
    return code


def main() -> None:
    sys.exit(run())
