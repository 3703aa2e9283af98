"""Command-line front end.

Subcommands write CSV/JSON into ``--out`` and exit with 0 on success, 1 when
a check fails and 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import _accel
from .converter import convert_mode, pulse_shaper_simulate
from .fieldcore import FieldError, UnitsPolicy
from .io import (
    ConfigError,
    catalog_from_longitudinal,
    config_hash,
    effective_parameters,
    load_config,
    load_state,
    longitudinal_grid_from_config,
    save_state,
    write_csv,
    write_json,
)
from .multiphoton import (
    TwoPhotonState,
    propagate_in_eigenframe,
    reduced_density_matrix,
    two_photon_propagate,
)
from .suites import expand, run_suites
from .wavepackets import LongitudinalBasis, WeightExponent, diagonalize_energy, longitudinal_mode

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FIDELITY_MIN = 1 - 1e-6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="run configuration JSON")
    p.add_argument("--out", type=Path, help="output directory (default from config)")
    p.add_argument("--tol", type=float, help="replace every residual threshold with this value")
    p.add_argument("--grid", type=int, help="retarded-time sample count n_t")
    p.add_argument("--threads", type=int, help="numba worker threads")
    p.add_argument("--rescale", type=float, help="scale tau and lambda together by this factor")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="photonwm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("figure", help="export mode, dual or product samples as CSV")
    p.add_argument("--m", type=int, action="append", help="mode order (repeatable; default: config modes)")
    p.add_argument("--kind", choices=("mode", "dual", "product", "all"), default="all")
    _common(p)

    p = sub.add_parser("suite", help="run acceptance batteries")
    p.add_argument("names", nargs="*", default=None, help="kernels, maxwell, biortho, twophoton, wolf, converter, boost, all")
    _common(p)

    p = sub.add_parser("convert", help="mode to dual conversion through the 1/k filter and pulse shaper")
    p.add_argument("--m", type=int, required=True)
    _common(p)

    p = sub.add_parser("reduce", help="reduced density matrix of a two-photon state file")
    p.add_argument("state", type=Path)
    _common(p)

    p = sub.add_parser("evolve", help="free evolution of a two-photon state file")
    p.add_argument("state", type=Path)
    p.add_argument("--time", type=float, required=True, help="elapsed time in fs")
    p.add_argument("--frame", choices=("basis", "eigen"), default="eigen")
    _common(p)

    p = sub.add_parser("modes", help="write the longitudinal mode catalog")
    _common(p)
    return parser


def _config(args) -> dict:
    over = {}
    if args.rescale is not None:
        over["rescale"] = args.rescale
    if args.grid is not None:
        over["longitudinal"] = {"n_t": args.grid}
    if args.threads is not None:
        over["threads"] = args.threads
    if args.out is not None:
        over["out"] = str(args.out)
    if getattr(args, "names", None):
        over["suites"] = list(args.names)
    return load_config(args.config, over)


def _outdir(cfg) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _fs(t_um):
    return UnitsPolicy.fs_from_length(np.asarray(t_um))


def cmd_figure(args, cfg, digest) -> int:
    kbar, w = effective_parameters(cfg)
    grid = longitudinal_grid_from_config(cfg)
    orders = args.m or cfg["modes"]
    kinds = ("mode", "dual", "product") if args.kind == "all" else (args.kind,)
    out = _outdir(cfg)
    t_fs = _fs(grid.t)
    dual_ref = longitudinal_mode(cfg["dual_index"], kbar, w, WeightExponent.MINUS_HALF, grid)
    for m in orders:
        if not 0 <= m <= 60:
            raise ConfigError(f"--m: mode order {m} outside 0..60")
        mode = longitudinal_mode(m, kbar, w, WeightExponent.PLUS_HALF, grid)
        for kind in kinds:
            if kind == "mode":
                path, vals = out / f"mode_m{m}.csv", mode.samples
            elif kind == "dual":
                path = out / f"dual_m{m}.csv"
                vals = longitudinal_mode(m, kbar, w, WeightExponent.MINUS_HALF, grid).samples
            else:
                # density per fs so that the column sum times dt_fs is the overlap
                path = out / f"product_d{cfg['dual_index']}_m{m}.csv"
                vals = np.conj(dual_ref.samples) * mode.samples * UnitsPolicy.length_from_fs(1.0)
                total = np.sum(vals) * (t_fs[1] - t_fs[0])
                print(f"product d{cfg['dual_index']} m{m}: integral = {total.real:.12g} {total.imag:+.12g}i")
            write_csv(path, t_fs, vals, digest)
            print(path)
    return EXIT_OK


def cmd_suite(args, cfg, digest) -> int:
    try:
        names = expand(cfg["suites"])
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    report = run_suites(names, cfg, args.tol, digest)
    for name, body in report["suites"].items():
        for c in body["checks"]:
            status = "PASS" if c["passed"] else "FAIL"
            print(f"{status} {name}.{c['name']} value={c['value']} {c['relation']} {c['threshold']}")
            if "message" in c:
                print(f"     {c['message']}")
    path = _outdir(cfg) / "report.json"
    write_json(path, report)
    print(path)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_convert(args, cfg, digest) -> int:
    if not 0 <= args.m <= 60:
        raise ConfigError(f"--m: mode order {args.m} outside 0..60")
    kbar, w = effective_parameters(cfg)
    grid = longitudinal_grid_from_config(cfg)
    rep = convert_mode(args.m, kbar, w, grid)
    mode = longitudinal_mode(args.m, kbar, w, WeightExponent.PLUS_HALF, grid)
    shaped, _ = pulse_shaper_simulate(mode)
    out = _outdir(cfg)
    write_csv(out / f"converted_m{args.m}.csv", _fs(grid.t), shaped.samples, digest)
    body = {
        "config_sha256": digest,
        "mode_label": rep["mode_label"],
        "filter_fidelity": repr(rep["filter_fidelity"]),
        "shaper_fidelity": repr(rep["shaper_fidelity"]),
        "efficiency": repr(rep["efficiency"]),
        "route_deviation": repr(rep["route_deviation"]),
        "grid": rep["grid"],
    }
    write_json(out / f"convert_m{args.m}.json", body)
    fid = min(rep["filter_fidelity"], rep["shaper_fidelity"])
    print(f"{rep['mode_label']}: fidelity {fid:.15f} efficiency {rep['efficiency']:.6f}")
    return EXIT_OK if fid >= FIDELITY_MIN else EXIT_FAIL


def _complex_json(M) -> dict:
    M = np.asarray(M)
    return {"re": [[repr(float(v)) for v in row] for row in M.real], "im": [[repr(float(v)) for v in row] for row in M.imag]}


def cmd_reduce(args, cfg, digest) -> int:
    state, ref = load_state(args.state)
    rdm = reduced_density_matrix(state)
    body = {
        "basis_ref": ref,
        "t": repr(state.t),
        "rho": _complex_json(rdm.rho),
        "trace": repr(rdm.trace),
        "purity": repr(rdm.purity),
        "eigenvalues": [repr(float(v)) for v in rdm.eigenvalues],
    }
    path = _outdir(cfg) / f"{args.state.stem}_reduced.json"
    write_json(path, body)
    print(f"purity {rdm.purity:.15f} trace {rdm.trace:.15f}")
    print(path)
    return EXIT_OK


def cmd_evolve(args, cfg, digest) -> int:
    state, ref = load_state(args.state)
    dt = UnitsPolicy.length_from_fs(args.time)
    if args.frame == "basis":
        new = two_photon_propagate(state, dt)
    else:
        diag = diagonalize_energy(state.basis)
        C = propagate_in_eigenframe(state.C, diag.energies, diag.U, dt)
        new = TwoPhotonState(state.basis, C, state.t)
    path = _outdir(cfg) / f"{args.state.stem}_evolved.json"
    save_state(path, new, ref)
    print(path)
    return EXIT_OK


def cmd_modes(args, cfg, digest) -> int:
    kbar, w = effective_parameters(cfg)
    basis = LongitudinalBasis(kbar, w, tuple(cfg["modes"]), longitudinal_grid_from_config(cfg))
    path = _outdir(cfg) / "modes.json"
    write_json(path, catalog_from_longitudinal(basis))
    print(path)
    return EXIT_OK


COMMANDS = {
    "figure": cmd_figure,
    "suite": cmd_suite,
    "convert": cmd_convert,
    "reduce": cmd_reduce,
    "evolve": cmd_evolve,
    "modes": cmd_modes,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        try:
            _accel.set_threads(cfg.get("threads"))
        except ValueError as exc:
            raise ConfigError(f"--threads: {exc}") from None
        return COMMANDS[args.command](args, cfg, config_hash(cfg))
    except (ConfigError, FieldError) as exc:
        print(f"photonwm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
