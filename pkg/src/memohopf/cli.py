"""Command-line driver.

    memohopf <command> --config <path> [--out <dir>] [--threads N] [--seed S]

One JSON config describes the model and the command options; every run
writes its outputs plus a manifest.json recording the config hash, package
and library versions, and a checksum per output file, so identical configs
yield identical manifests.  Exit codes: 0 success, 2 config error, 3 domain
error (reported with the pipeline stage when known), 4 I/O error.

Set MEMOHOPF_LOG=debug (or info, warning) for progress logging.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, model, normalform, pdesim, spectral, svgfig
from .config import COMMANDS, RunConfig, load_config
from .errors import ConfigError, MemoHopfError

log = logging.getLogger("memohopf")

__all__ = ["main", "run"]


def _g(x) -> str:
    return f"{float(x):.17g}"


def _write_rows(path: Path, header: str, rows) -> Path:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")
    return path


def _cmd_equilibrium(cfg: RunConfig, out: Path, threads: int) -> list[Path]:
    p = cfg.model
    rows = [("admissible", "true" if p.admissible else "false")]
    if p.admissible:
        lin = model.linearize(p)
        for name in ("u_star", "v_star", "gamma", "a11", "a12", "a21", "a22"):
            rows.append((name, _g(getattr(lin, name))))
        rows.append(("trace", _g(lin.trace)))
        rows.append(("det", _g(lin.det)))
        c0 = model.check_c0(p)
        rows.append(("condition_c0", "true" if c0 else "false"))
        if c0:
            rows.append(("c_star", _g(model.c_star(p))))
    return [_write_rows(out / "equilibrium.csv", "name,value", rows)]


def _find_double_hopf(lin, scan) -> list[tuple[float, float]]:
    markers = []
    ms = sorted(scan.curves)
    for lo_mode, hi_mode in zip(ms, ms[1:]):
        ca = scan.curves[lo_mode]
        cb = scan.curves[hi_mode]
        diff = ca - cb
        for i in range(diff.size - 1):
            if not (np.isfinite(diff[i]) and np.isfinite(diff[i + 1])):
                continue
            if diff[i] == 0.0:
                markers.append((float(scan.d21[i]), float(ca[i])))
            elif diff[i] * diff[i + 1] < 0:
                bracket = (float(scan.d21[i]), float(scan.d21[i + 1]))
                markers.append(spectral.double_hopf(lin, lo_mode, hi_mode, bracket))
    return markers


def _cmd_region(cfg: RunConfig, out: Path, threads: int) -> list[Path]:
    opts = cfg.options
    lin = model.linearize(cfg.model).as_float()
    d21_range = (float(opts["d21"][0]), float(opts["d21"][1]))
    tau_range = (float(opts["tau"][0]), float(opts["tau"][1]))
    res = tuple(opts.get("resolution", (121, 121)))
    modes = opts.get("modes")
    scan = spectral.region_scan(lin, d21_range, tau_range, res,
                                curve_modes=modes, threads=threads)
    written = []
    rows = []
    for n in sorted(scan.curves):
        vals = scan.curves[n]
        for dv, tv in zip(scan.d21, vals):
            if np.isfinite(tv):
                rows.append((_g(dv), n, _g(tv)))
    written.append(_write_rows(out / "region_curves.csv", "d21,n,tau", rows))
    grid_rows = [(_g(dv), _g(tv), int(scan.stable[i, j]))
                 for i, dv in enumerate(scan.d21)
                 for j, tv in enumerate(scan.tau)]
    written.append(_write_rows(out / "region_grid.csv", "d21,tau,stable", grid_rows))
    markers = _find_double_hopf(lin, scan)
    written.append(_write_rows(out / "special_points.csv", "kind,d21,tau",
                               [("double_hopf", _g(dv), _g(tv)) for dv, tv in markers]))
    if "svg" in cfg.formats:
        svg_path = out / "region.svg"
        svgfig.emit_region_figure(scan, markers, svg_path)
        written.append(svg_path)
    return written


def _cmd_hopf(cfg: RunConfig, out: Path, threads: int) -> list[Path]:
    opts = cfg.options
    p = cfg.model
    lin = model.linearize(p).as_float()
    d21 = float(p.d21)
    modes = opts.get("modes")
    if modes is None:
        modes = sorted(spectral.unstable_mode_set(lin, d21))
    j_max = int(opts.get("j_max", 0))
    rows = []
    for n in modes:
        omega = spectral.hopf_frequency(lin, d21, n)
        for j, tau in enumerate(spectral.hopf_delays(lin, d21, n, j_max=j_max)):
            rows.append((_g(d21), int(n), j, _g(omega), _g(tau)))
    return [_write_rows(out / "hopf_delays.csv", "d21,n,j,omega,tau", rows)]


def _cmd_normalform(cfg: RunConfig, out: Path, threads: int) -> list[Path]:
    rows = []
    for pt in cfg.options["points"]:
        nf = normalform.hopf_normal_form(cfg.model, float(pt["d21"]), int(pt["n_c"]))
        rows.append((_g(nf.d21), nf.n_c, _g(nf.omega), _g(nf.tau_c),
                     _g(nf.K1), _g(nf.K2), nf.direction, nf.orbit_stability))
    return [_write_rows(out / "normalform.csv",
                        "d21,n_c,omega,tau_c,K1,K2,direction,stability", rows)]


def _init_callable(component, eq_value, ell):
    base = float(component.get("base", eq_value))
    terms = [(int(m["n"]), float(m["amplitude"])) for m in component.get("modes", [])]

    def f(x):
        val = np.full_like(x, base, dtype=float)
        for n, amp in terms:
            val += amp * np.cos(n * x / ell)
        return val
    return f


def _cmd_simulate(cfg: RunConfig, out: Path, threads: int) -> list[Path]:
    opts = cfg.options
    p = cfg.model
    nx = int(opts.get("nx", pdesim.DEFAULT_NX))
    grid = pdesim.Grid(nx=nx, ell=float(p.ell))
    t_end = float(opts.get("t_end", 2000.0))
    sample_dt = float(opts.get("sample_dt", pdesim.DEFAULT_SAMPLE_DT))
    n_max = int(opts.get("n_max", pdesim.DEFAULT_N_MAX))
    flux_form = opts.get("flux_form", "conservative")
    init = None
    if "init" in opts:
        u_eq, v_eq = model.positive_equilibrium(p)
        init = (_init_callable(opts["init"].get("u", {}), float(u_eq), float(p.ell)),
                _init_callable(opts["init"].get("v", {}), float(v_eq), float(p.ell)))
    log.info("simulate: nx=%d t_end=%g tau=%g d21=%g", nx, t_end, float(p.tau), float(p.d21))
    traj = pdesim.simulate(p, grid, None, t_end, init, sample_dt=sample_dt,
                           n_max=n_max, flux_form=flux_form)
    written = []
    if "csv" in cfg.formats:
        pdesim.write_csv(traj, out / "trajectory.csv")
        written.append(out / "trajectory.csv")
        pdesim.write_modes_csv(traj, out / "modes.csv")
        written.append(out / "modes.csv")
    if "bin" in cfg.formats:
        pdesim.write_binary(traj, out / "trajectory.bin")
        written.append(out / "trajectory.bin")
    if "svg" in cfg.formats:
        for comp in ("u", "v"):
            path = out / f"spacetime_{comp}.svg"
            svgfig.emit_spacetime_figure(traj, comp, path)
            written.append(path)
    written.append(_write_rows(out / "classification.csv",
                               "kind,mode,mode_from,mode_to,period",
                               [_classification_row(traj)]))
    return written


def _classification_row(traj):
    try:
        att = pdesim.classify_attractor(traj)
    except MemoHopfError:
        return ("unclassified", "", "", "", "")
    period = ""
    probe = att.mode or att.mode_to
    if probe:
        try:
            period = _g(pdesim.period_estimate(traj, probe))
        except MemoHopfError:
            period = ""
    return (att.kind,
            "" if att.mode is None else att.mode,
            "" if att.mode_from is None else att.mode_from,
            "" if att.mode_to is None else att.mode_to,
            period)


def _cmd_modes(cfg: RunConfig, out: Path, threads: int) -> list[Path]:
    opts = cfg.options
    traj = pdesim.read_binary(opts["trajectory"])
    if "n_max" in opts:
        n_max = int(opts["n_max"])
        grid = pdesim.Grid(nx=traj.x.size, ell=traj.meta["params"]["ell"])
        W = pdesim.mode_matrix(grid, n_max)
        traj = pdesim.Trajectory(t=traj.t, x=traj.x, u=traj.u, v=traj.v,
                                 modes_u=traj.u @ W.T, modes_v=traj.v @ W.T,
                                 n_max=n_max, meta=traj.meta)
    path = out / "modes.csv"
    pdesim.write_modes_csv(traj, path)
    return [path]


_DISPATCH = {
    "equilibrium": _cmd_equilibrium,
    "region": _cmd_region,
    "hopf": _cmd_hopf,
    "normalform": _cmd_normalform,
    "simulate": _cmd_simulate,
    "modes": _cmd_modes,
}


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _versions() -> dict:
    import scipy
    vers = {"memohopf": __version__, "numpy": np.__version__, "scipy": scipy.__version__}
    try:
        import numba
        vers["numba"] = numba.__version__
    except ImportError:
        vers["numba"] = None
    return vers


def run(cfg: RunConfig, out_dir=None, threads: int = 1, seed=None) -> int:
    """Execute one configured command; returns the process exit code."""
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        files = _DISPATCH[cfg.command](cfg, out, max(1, int(threads)))
    except ConfigError as err:
        print(f"memohopf: config error: {err}", file=sys.stderr)
        return 2
    except MemoHopfError as err:
        stage = getattr(err, "stage", None)
        where = f" [stage: {stage}]" if stage else ""
        print(f"memohopf: {type(err).__name__}{where}: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"memohopf: i/o error: {err}", file=sys.stderr)
        return 4
    canon = json.dumps(cfg.raw, sort_keys=True).encode()
    manifest = {
        "command": cfg.command,
        "config_sha256": hashlib.sha256(canon).hexdigest(),
        "versions": _versions(),
        "threads": int(threads),
        "seed": seed,
        "outputs": {f.name: _sha256(f) for f in sorted(files)},
    }
    try:
        with open(out / "manifest.json", "w") as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2)
            fh.write("\n")
    except OSError as err:
        print(f"memohopf: i/o error: {err}", file=sys.stderr)
        return 4
    log.info("wrote %d outputs to %s", len(files) + 1, out)
    return 0


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(
        prog="memohopf",
        description="Bifurcation analysis and simulation of a delayed cross-diffusion system")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="path to the JSON run configuration")
    parser.add_argument("--out", default=None, help="output directory (overrides the config)")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", type=int, default=None,
                        help="recorded in the manifest; reserved for stochastic extensions")
    args = parser.parse_args(argv)

    level = os.environ.get("MEMOHOPF_LOG", "").upper()
    if level:
        logging.basicConfig(level=getattr(logging, level, logging.INFO),
                            format="%(levelname)s %(name)s: %(message)s")

    try:
        cfg = load_config(args.config, args.command)
    except ConfigError as err:
        print(f"memohopf: config error: {err}", file=sys.stderr)
        sys.exit(2)
    except OSError as err:
        print(f"memohopf: i/o error: {err}", file=sys.stderr)
        sys.exit(4)
    sys.exit(run(cfg, args.out, args.threads, args.seed))


if __name__ == "__main__":
    main()
