"""Command-line front end: config ingestion, dispatch, deterministic output.

Configuration file (JSON, unknown keys rejected)::

    {
      "lattice": {"a": [1, 0], "b": [0, 1]},
      "V":  [[n, m, re, im], ...],        # real periodic potential modes
      "A1": [[n, m, re, im], ...],        # optional vector potential
      "A2": [[n, m, re, im], ...],
      "qmax": 4, "delta": ["1/16", "1/31"], "band": [0], "iota": -1,
      "grid": [16, 16], "tol_band": 1e-6, "model": "full",
      "order": 4, "n_max": 30, "guard": 6, "n_cells": 1
    }

``delta`` entries are rational flux fractions p/q standing for the squared
adiabatic parameter (the flux per unit cell over 2 pi); the parameter itself
is derived as sqrt(p/q).  Flags override config values.  Numbers are emitted
with 17 significant digits and '\n' line endings; identical configs produce
byte-identical files.

Exit codes: 0 success, 2 config error, 3 numeric failure, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import effective, moyal, oracle, quantize, symbols
from .errors import (CommensurabilityError, ConfigError, GapClosedError,
                     GaugeError, GeometryError, MagblochError, NumericError,
                     ResourceCapError, TruncationError)
from .fock import FockTruncation
from .lattice import (FourierSeries2D, Lattice2D, PeriodicVectorPotential,
                      laplacian_DzDzbar, make_lattice)
from .quantize import RationalFlux

__all__ = ["main", "cmd_butterfly", "cmd_effective", "cmd_two_band",
           "cmd_sapt", "cmd_oracle_compare", "load_config"]

_KNOWN_KEYS = {
    "lattice", "V", "A1", "A2", "qmax", "delta", "band", "iota", "grid",
    "tol_band", "model", "order", "n_max", "guard", "n_cells",
}

Q_MAX_CAP = 200


def _fmt(x) -> str:
    """17 significant digits, '.' decimal separator."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _dump_json(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k in obj:
            items.append(f'{pad}  {json.dumps(str(k))}: '
                         f'{_dump_json(obj[k], indent + 1)}')
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}  {_dump_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    return json.dumps(obj)


def _series_from_rows(rows, cutoff: int, name: str, real: bool = True) -> FourierSeries2D:
    coeffs = {}
    for row in rows:
        if len(row) != 4:
            raise ConfigError(f"{name} rows must be [n, m, re, im]")
        n, m, re, im = row
        coeffs[(int(n), int(m))] = complex(float(re), float(im))
    try:
        return FourierSeries2D(coeffs, is_real=real, cutoff=cutoff)
    except ValueError as exc:
        raise ConfigError(f"bad {name} series: {exc}") from exc


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return raw


def _build_inputs(cfg: dict):
    if "lattice" not in cfg:
        raise ConfigError("config needs a 'lattice' section")
    lat_cfg = cfg["lattice"]
    if set(lat_cfg) != {"a", "b"}:
        raise ConfigError("lattice section must have exactly keys 'a' and 'b'")
    try:
        L = make_lattice(lat_cfg["a"], lat_cfg["b"])
    except GeometryError as exc:
        raise ConfigError(str(exc)) from exc
    cutoff = 8
    for key in ("V", "A1", "A2"):
        for row in cfg.get(key, []):
            cutoff = max(cutoff, abs(int(row[0])), abs(int(row[1])))
    V = _series_from_rows(cfg.get("V", []), cutoff, "V")
    A = None
    if cfg.get("A1") or cfg.get("A2"):
        f1 = _series_from_rows(cfg.get("A1", []), cutoff, "A1")
        f2 = _series_from_rows(cfg.get("A2", []), cutoff, "A2")
        try:
            A = PeriodicVectorPotential(f1, f2, L)
        except GaugeError as exc:
            raise ConfigError(str(exc)) from exc
    return L, V, A


def _parse_flux_list(values) -> list:
    out = []
    for v in values:
        try:
            out.append(RationalFlux.from_fraction(Fraction(str(v))))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad flux fraction {v!r}: {exc}") from exc
    if not out:
        raise ConfigError("empty flux list")
    return out


def _bands(cfg_band) -> list:
    if cfg_band is None:
        return [0]
    if isinstance(cfg_band, int):
        return [cfg_band]
    return [int(b) for b in cfg_band]


def _write(out_path: str | None, text: str) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _report_rows(reports) -> str:
    lines = ["p,q,theta,band_index,E_min,E_max"]
    for rep in reports:
        for k, (lo, hi) in enumerate(rep.bands):
            lines.append(f"{rep.flux.p},{rep.flux.q},{_fmt(rep.flux.theta)},"
                         f"{k},{_fmt(lo)},{_fmt(hi)}")
    return "\n".join(lines) + "\n"


def _report_json(reports) -> str:
    payload = []
    for rep in reports:
        payload.append({
            "p": rep.flux.p, "q": rep.flux.q, "theta": rep.flux.theta,
            "bands": [[lo, hi] for lo, hi in rep.bands],
            "samples": [[float(e) for e in row] for row in rep.samples],
            "metadata": {k: rep.metadata[k] for k in sorted(rep.metadata)},
        })
    return _dump_json(payload) + "\n"


def cmd_butterfly(cfg: dict, args) -> str:
    L, V, A = _build_inputs(cfg)
    q_max = args.qmax if args.qmax is not None else cfg.get("qmax", 10)
    if q_max > Q_MAX_CAP:
        raise ResourceCapError(f"q_max={q_max} exceeds cap {Q_MAX_CAP}")
    grid = tuple(cfg.get("grid", [8, 16]))
    reports = quantize.butterfly(V, q_max, iota=args.iota,
                                 convention="harper", grid=grid,
                                 threads=args.threads)
    if args.format == "csv":
        return _report_rows(reports)
    return _report_json(reports)


def _rescale_report(rep, delta: float, units: str):
    """Convert a report from cyclotron units to the bare lattice energy
    unit (divide by the squared adiabatic parameter)."""
    if units == "cyclotron":
        return rep
    if delta == 0.0:
        raise ConfigError("bare units undefined at zero flux")
    s = 1.0 / delta ** 2
    scaled = quantize.SpectrumReport(
        flux=rep.flux,
        bands=[(s * lo, s * hi) for lo, hi in rep.bands],
        samples=s * rep.samples,
        metadata=dict(rep.metadata, units="bare"))
    return scaled


def cmd_effective(cfg: dict, args) -> str:
    L, V, A = _build_inputs(cfg)
    fluxes = _parse_flux_list(args.delta or cfg.get("delta", ["1/16"]))
    band = _bands(args.band or cfg.get("band"))[0]
    grid = tuple(cfg.get("grid", [16, 16]))
    reports = []
    for fx in fluxes:
        model = effective.single_band_model(V, L, band + 0.5, fx, iota=args.iota)
        rep = quantize.spectrum(model.family, grid=grid, tol_band=args.tol_band,
                                threads=args.threads)
        rep.metadata["delta"] = model.delta
        rep.metadata["band"] = band
        reports.append(_rescale_report(rep, model.delta, args.units))
    if args.format == "csv":
        return _report_rows(reports)
    return _report_json(reports)


def cmd_two_band(cfg: dict, args) -> str:
    L, V, A = _build_inputs(cfg)
    if A is None or A.is_zero():
        raise ConfigError("two-band command needs a non-zero vector potential")
    fluxes = _parse_flux_list(args.delta or cfg.get("delta", ["1/16"]))
    n_star = _bands(args.band or cfg.get("band"))[0]
    grid = tuple(cfg.get("grid", [16, 16]))
    reports = []
    for fx in fluxes:
        model = effective.two_band_model(A, L, n_star, fx, iota=args.iota)
        rep = quantize.spectrum(model.family, grid=grid, tol_band=args.tol_band,
                                threads=args.threads)
        via = effective.spectrum_via_GGdag(A, L, n_star, fx, grid=grid,
                                           iota=args.iota)
        disc = float(np.max(np.abs(np.sort(rep.samples, axis=1)
                                   - np.sort(via.samples, axis=1))))
        rep.metadata["delta"] = model.delta
        rep.metadata["n_star"] = n_star
        rep.metadata["ggdag_max_discrepancy"] = disc
        reports.append(_rescale_report(rep, model.delta, args.units))
    if args.format == "csv":
        return _report_rows(reports)
    return _report_json(reports)


def _mode_blocks_payload(h):
    out = []
    for nm in sorted(h):
        M = h[nm]
        out.append([nm[0], nm[1],
                    [[[float(z.real), float(z.imag)] for z in row] for row in M]])
    return out


def cmd_sapt(cfg: dict, args) -> str:
    L, V, A = _build_inputs(cfg)
    bands = _bands(args.band or cfg.get("band"))
    order = int(cfg.get("order", 4))
    guard = int(cfg.get("guard", 6))
    n_max = int(cfg.get("n_max", 2 * order + max(bands) + guard + 12))
    T = FockTruncation(n_max=n_max, guard=guard)
    H = symbols.assemble_truncated(V, A, L, T)
    pi = moyal.build_projection(H, bands, order)
    u = moyal.build_intertwiner(pi, order)
    hs = moyal.effective_symbol(H, pi, u, order)
    pres = moyal.projection_residuals(H, pi, order)
    ures = moyal.intertwiner_residuals(pi, u, order)

    def block_norm(h):
        return max((float(np.max(np.abs(M))) for M in h.values()), default=0.0)

    payload = {
        "natural": H.natural,
        "order": order,
        "band_set": list(bands),
        "pi_residuals": {k: [float(x) for x in v] for k, v in sorted(pres.items())},
        "u_residuals": {k: [float(x) for x in v] for k, v in sorted(ures.items())},
        "h_norms": [block_norm(h) for h in hs],
        "h": {str(j): _mode_blocks_payload(hs[j]) for j in range(order + 1)},
    }
    if H.natural == 1 and len(bands) == 1 and order >= 4:
        lam = bands[0] + 0.5
        checks = {"h1_norm": block_norm(hs[1]), "h3_norm": block_norm(hs[3])}
        dv = 0.0
        for nm, c in V.coeffs.items():
            dv = max(dv, abs(hs[2].get(nm, np.zeros((1, 1)))[0, 0] - c))
        checks["h2_minus_V"] = dv
        Y = laplacian_DzDzbar(V, L)
        dy = 0.0
        for nm in set(Y.coeffs) | set(hs[4]):
            want = lam / 2.0 * Y[nm]
            got = hs[4].get(nm, np.zeros((1, 1)))[0, 0]
            dy = max(dy, abs(got - want))
        checks["h4_minus_closed_form"] = dy
        payload["checks"] = checks
    return _dump_json(payload) + "\n"


def cmd_oracle_compare(cfg: dict, args) -> str:
    L, V, A = _build_inputs(cfg)
    fluxes = (_parse_flux_list(args.delta) if args.delta
              else (_parse_flux_list(cfg["delta"]) if "delta" in cfg
                    else oracle.default_delta_sweep()))
    band = _bands(args.band or cfg.get("band"))[0]
    model_kind = cfg.get("model", "full")
    if model_kind not in ("order0", "order2", "full"):
        raise ConfigError(f"unknown model {model_kind!r}")
    guard = int(cfg.get("guard", 6))
    n_max = int(cfg.get("n_max", 30))
    n_cells = int(cfg.get("n_cells", 1))
    lam = band + 0.5
    T = FockTruncation(n_max=n_max, guard=guard)
    entries = []
    deltas, model_specs, oracle_specs = [], [], []
    for fx in fluxes:
        delta = effective.delta_from_flux(fx)
        n_modes = max((max(abs(n), abs(m)) for (n, m) in V.coeffs), default=1)
        per_cell = fx.q * max(1, -(-4 * n_modes // fx.q))
        basis = oracle.OracleBasis(n_cells=n_cells, n_grid=per_cell, fock=T)
        Hfull = oracle.build_full_matrix(V, A, L, basis, fx, iota=1)
        cluster = oracle.band_cluster(oracle.oracle_eigenvalues(Hfull), lam)
        model = effective.single_band_model(
            V, L, lam, fx, iota=1, fourth_order=(model_kind == "full"))
        series = model.blocks[0][0]
        if model_kind == "order0":
            series = FourierSeries2D({(0, 0): lam}, is_real=True, cutoff=V.cutoff)
        elif model_kind == "order2":
            series = FourierSeries2D({(0, 0): lam}, is_real=True,
                                     cutoff=V.cutoff).plus(V.scaled(delta ** 2))
        Hmod = oracle.quantize_on_grid(series, basis, fx, iota=1)
        mspec = oracle.oracle_eigenvalues(Hmod)
        deltas.append(delta)
        model_specs.append(mspec)
        oracle_specs.append(cluster)
        dist = quantize.sorted_list_distance(mspec, cluster)
        slope = None
        if len(deltas) >= 2:
            pts = [(d, quantize.sorted_list_distance(m, o))
                   for d, m, o in zip(deltas, model_specs, oracle_specs)]
            pts = [(d, e) for d, e in pts if e >= 1e-12]
            if len(pts) >= 2:
                lx = np.log([p[0] for p in pts])
                ly = np.log([p[1] for p in pts])
                slope = float(np.polyfit(lx, ly, 1)[0])
        entries.append({
            "delta": delta,
            "theta": f"{fx.p}/{fx.q}",
            "model": model_kind,
            "oracle_band": [float(x) for x in cluster],
            "model_band": [float(x) for x in np.sort(mspec)],
            "hausdorff": dist,
            "slope_so_far": slope,
        })
    return _dump_json(entries) + "\n"


_COMMANDS = {
    "butterfly": cmd_butterfly,
    "effective": cmd_effective,
    "two-band": cmd_two_band,
    "sapt": cmd_sapt,
    "oracle-compare": cmd_oracle_compare,
}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="magbloch",
        description="Magnetic Bloch bands at rational flux: spectra, "
                    "effective models, and oracle cross-checks.")
    ap.add_argument("command", choices=sorted(_COMMANDS))
    ap.add_argument("--config", required=True, help="JSON input file")
    ap.add_argument("--out", default=None, help="output path (default stdout)")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--qmax", type=int, default=None)
    ap.add_argument("--delta", default=None,
                    help="comma-separated flux fractions p/q (squared parameter)")
    ap.add_argument("--band", default=None, help="level index or N,N")
    ap.add_argument("--iota", type=int, choices=(1, -1), default=-1)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--tol-band", dest="tol_band", type=float, default=None)
    ap.add_argument("--units", choices=("cyclotron", "bare"),
                    default="cyclotron",
                    help="energy unit of effective/two-band reports")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.delta is not None:
        args.delta = [s for s in str(args.delta).split(",") if s]
    if args.band is not None:
        args.band = [int(s) for s in str(args.band).split(",") if s]
    try:
        cfg = load_config(args.config)
        text = _COMMANDS[args.command](cfg, args)
        _write(args.out, text)
        return 0
    except (ConfigError, GeometryError, GaugeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 4
    except (NumericError, GapClosedError, CommensurabilityError,
            TruncationError, MagblochError, ValueError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
