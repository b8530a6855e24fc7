"""Command-line interface: figure-data sweeps, spinning spectra and SI estimates.

Every command writes deterministic tables (CSV with a ``.meta.json``
sidecar and/or JSON) and optionally a plot.  Options come from built-in
defaults, then a JSON config file (``--config``), then explicit flags.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import estimates as est
from . import linear
from . import plotting
from . import spinning
from .params import ParameterError
from .parallel import ordered_map, resolve_threads
from .polarization import Pol
from .quadrature import ConvergenceError
from .tables import Column, ResultTable, write_table

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3
FORMATS = ("csv", "json", "svg", "png")


class UsageError(Exception):
    pass


def _float_list(text):
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from exc


def _str_list(text):
    if isinstance(text, (list, tuple)):
        return [str(x) for x in text]
    return [x.strip() for x in str(text).split(",") if x.strip()]


def _kick_range(stop, step):
    n = int(round(stop / step))
    return [round(i * step, 10) for i in range(n + 1)]


COMMON_DEFAULTS = {"out": "results", "format": "csv,svg", "threads": None, "tolerance": 1e-8}

DEFAULTS = {
    "fig2": {"kicks": [0.0, 0.1, -0.1, 0.2, -0.2, 0.3, -0.3, 0.4, -0.4], "omega_ratio": 0.5,
             "nx": 50, "ny": 50, "nz": 1, "extent": 20.0, "n_theta": 361},
    "fig3": {"kicks": _kick_range(0.9, 0.1), "omega_ratio": 0.7, "n_theta": 31, "n_phi": 73},
    "fig4": {"kicks": [0.0, 0.2, 0.4, 0.6, 0.8, 0.95], "n_omega": 39},
    "fig5": {"kicks": _kick_range(1.0, 0.05)},
    "spinning": {"ell": 0, "radius": 5.0, "m_max": 8, "n_omega": 9, "nodes": 12},
    "estimate": {"scenarios": ["mirror", "rb87", "waveguide"], "scenario_file": None},
}

PARSERS = {"kicks": _float_list, "scenarios": _str_list, "format": _str_list}


def _settings(args) -> dict:
    """Merge defaults, config-file values and explicit flags."""
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
        cmd = cfg.pop("command", None)
        if cmd is not None and cmd != args.command:
            raise UsageError(f"config is for command {cmd!r}, not {args.command!r}")
    out = {}
    known = {**COMMON_DEFAULTS, **DEFAULTS[args.command]}
    unknown = set(cfg) - set(known)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for key, default in known.items():
        flag = getattr(args, key, None)
        value = flag if flag is not None else cfg.get(key, default)
        if key in PARSERS and value is not None:
            value = PARSERS[key](value)
        out[key] = value
    tol = float(out["tolerance"])
    if not 0.0 < tol <= 1e-2:
        raise UsageError("tolerance must lie in (0, 1e-2]")
    out["tolerance"] = tol
    bad = [f for f in out["format"] if f not in FORMATS]
    if bad:
        raise UsageError(f"unknown output format(s): {', '.join(bad)}")
    if out["threads"] is not None:
        out["threads"] = int(out["threads"])
    try:
        out["threads"] = resolve_threads(out["threads"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return out


def _positive_int(s, name, minimum=1):
    if int(s[name]) != s[name] or s[name] < minimum:
        raise UsageError(f"{name} must be an integer >= {minimum}")
    s[name] = int(s[name])


def _metadata(command, s, extra=None):
    params = {k: v for k, v in s.items() if k not in ("out", "format", "threads")}
    meta = {"command": command, "tool_version": __version__, "parameters": params}
    if extra:
        meta.update(extra)
    return meta


# ---------------------------------------------------------------------------
# commands


def cmd_fig2(s):
    for key in ("nx", "ny", "nz", "n_theta"):
        _positive_int(s, key, 2 if key == "n_theta" else 1)
    if not 0.0 < s["omega_ratio"] < 1.0:
        raise UsageError("omega-ratio must lie in (0, 1)")
    if not s["kicks"]:
        raise UsageError("kick grid is empty")
    theta = np.linspace(-0.5 * math.pi, 0.5 * math.pi, s["n_theta"])
    table = ResultTable("fig2_lobes", [
        Column("polarization", ""), Column("kick", "Omega/c"), Column("theta", "rad"),
        Column("rate", "r0")], metadata=_metadata("fig2", s, {
            "geometry": "kick along +y, photon 1 in the yz-plane, partner along +z"}))
    for pol in ("TE", "TM"):
        for kick in s["kicks"]:
            vals = linear.lobes_finite_array(kick, theta, s["omega_ratio"], pol,
                                             s["nx"], s["ny"], s["nz"], s["extent"])
            for t, r in zip(theta, vals):
                table.add(pol, float(kick), float(t), float(r))
    return [table], plotting.plot_lobes


def cmd_fig3(s):
    _positive_int(s, "n_theta", 2)
    _positive_int(s, "n_phi", 3)
    w1 = float(s["omega_ratio"])
    if not 0.5 < w1 < 1.0:
        raise UsageError("omega-ratio selects the high-frequency photon and must lie in (0.5, 1)")
    if not s["kicks"]:
        raise UsageError("kick grid is empty")
    theta = np.linspace(0.0, 0.5 * math.pi, s["n_theta"])
    phi = np.linspace(-math.pi, math.pi, s["n_phi"])
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    dens = ResultTable("fig3_density", [
        Column("role", ""), Column("omega", "Omega"), Column("kick", "Omega/c"),
        Column("theta", "rad"), Column("phi", "rad"), Column("allowed", ""),
        Column("f_TE", "Gamma0/Omega"), Column("f_TM", "Gamma0/Omega")],
        metadata=_metadata("fig3", s, {"geometry": "kick along +y, emission towards z > 0"}))
    regions = ResultTable("fig3_regions", [
        Column("role", ""), Column("omega", "Omega"), Column("kick", "Omega/c"),
        Column("topology", "")], metadata=dens.metadata)
    for role, omega in (("high", w1), ("low", 1.0 - w1)):
        for kick in s["kicks"]:
            mask = linear.allowed_mask(tt, pp, omega, kick)
            f_te = linear.density_f(tt, pp, omega, kick, Pol.TE)
            f_tm = linear.density_f(tt, pp, omega, kick, Pol.TM)
            for i in range(len(theta)):
                for j in range(len(phi)):
                    dens.add(role, float(omega), float(kick), float(theta[i]), float(phi[j]),
                             bool(mask[i, j]), float(f_te[i, j]), float(f_tm[i, j]))
            regions.add(role, float(omega), float(kick),
                        linear.emission_region(omega, kick, role).topology)
    return [dens, regions], plotting.plot_density_maps


def _spectral_job(args):
    omega, kick, tol = args
    return linear.spectral_rates(omega, kick, tol)


def cmd_fig4(s, mapper):
    _positive_int(s, "n_omega", 2)
    if not s["kicks"]:
        raise UsageError("kick grid is empty")
    omegas = [(i + 1) / (s["n_omega"] + 1) for i in range(s["n_omega"])]
    jobs = [(w, abs(k), s["tolerance"]) for k in s["kicks"] for w in omegas]
    results = list(mapper(_spectral_job, jobs))
    table = ResultTable("fig4_spectra", [
        Column("kick", "Omega/c"), Column("omega", "Omega"), Column("TE", "Gamma0/Omega"),
        Column("TM", "Gamma0/Omega"), Column("R", "Gamma0/Omega"), Column("L", "Gamma0/Omega"),
        Column("sum", "Gamma0/Omega"), Column("error", "Gamma0/Omega")],
        metadata=_metadata("fig4", s))
    for (w, k, _), r in zip(jobs, results):
        v = r.values
        table.add(float(k), float(w), v["TE"], v["TM"], v["R"], v["L"],
                  v["TE"] + v["TM"], float(r.error))
    return [table], plotting.plot_spectra


def _total_job(args):
    kick, tol = args
    return linear.total_rates(kick, tol)


def cmd_fig5(s, mapper):
    if not s["kicks"]:
        raise UsageError("kick grid is empty")
    jobs = [(abs(k), s["tolerance"]) for k in s["kicks"]]
    results = list(mapper(_total_job, jobs))
    table = ResultTable("fig5_totals", [
        Column("kick", "Omega/c"), Column("TE", "Gamma0"), Column("TM", "Gamma0"),
        Column("R", "Gamma0"), Column("L", "Gamma0"), Column("total", "Gamma0"),
        Column("error", "Gamma0")], metadata=_metadata("fig5", s))
    for (k, _), r in zip(jobs, results):
        v = r.values
        table.add(float(k), v["TE"], v["TM"], v["R"], v["L"], r.total, float(r.error))
    return [table], plotting.plot_totals


def cmd_spinning(s, mapper):
    _positive_int(s, "n_omega", 1)
    _positive_int(s, "nodes", 2)
    ell = s["ell"]
    if int(ell) != ell:
        raise UsageError("ell must be an integer")
    ell = s["ell"] = int(ell)
    if int(s["m_max"]) != s["m_max"] or s["m_max"] < abs(ell) + 5:
        raise UsageError(f"m-max must be an integer >= |ell| + 5 = {abs(ell) + 5}")
    s["m_max"] = int(s["m_max"])
    if not s["radius"] > 0:
        raise UsageError("radius must be positive")
    omegas = [(i + 1) / (s["n_omega"] + 1) for i in range(s["n_omega"])]
    spec = spinning.angular_momentum_spectrum(omegas, ell, float(s["radius"]), s["m_max"],
                                              mapper=mapper)
    rate = spinning.total_rate_spinning(ell, float(s["radius"]), nodes=s["nodes"],
                                        mapper=mapper)
    table = ResultTable("spinning_spectrum", [
        Column("omega", "Omega"), Column("m", ""), Column("m_partner", ""),
        Column("allowed", ""), Column("f", "dimensionless")], metadata=_metadata(
            "spinning", s, {"tail": [float(t) for t in spec.tail]}))
    for i, u in enumerate(spec.omegas):
        for j, m in enumerate(spec.ms):
            rule = spinning.af3_conservation(int(m), ell - int(m), ell)
            table.add(float(u), int(m), rule.m2, rule.allowed, float(spec.values[i, j]))
    totals = ResultTable("spinning_rate", [
        Column("ell", ""), Column("radius", "c/Omega"), Column("rate", "Gamma0"),
        Column("error", "Gamma0"), Column("max_tail", "dimensionless")],
        metadata=table.metadata)
    totals.add(ell, float(s["radius"]), rate.value, rate.error, float(rate.max_tail))
    return [table, totals], plotting.plot_angular_momentum


def cmd_estimate(s):
    pool = dict(est.BUILTIN_SCENARIOS)
    if s["scenario_file"]:
        try:
            pool.update(est.load_scenarios(s["scenario_file"]))
        except OSError as exc:
            raise UsageError(f"cannot read scenarios: {exc}") from exc
    names = s["scenarios"]
    missing = [n for n in names if n not in pool]
    if missing:
        raise UsageError(f"unknown scenario(s): {', '.join(missing)}")
    table = ResultTable("estimates", [
        Column("scenario", ""), Column("kind", ""), Column("rate", "1/s"),
        Column("log10_rate", "log10(1/s)")], metadata=_metadata("estimate", s, {
            "zero_kick_coefficient": est.zero_kick_coefficient(),
            "scenarios": {n: {"kind": pool[n].kind.value, **pool[n].parameters}
                          for n in names}}))
    for n in names:
        r = pool[n].rate()
        table.add(n, pool[n].kind.value, r, math.log10(r) if r > 0 else -math.inf)
    return [table], plotting.plot_estimates


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="casimir-array", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file with option values")
        sp.add_argument("--out", help="output directory (default: results)")
        sp.add_argument("--format", help="comma list of csv,json,svg,png (default: csv,svg)")
        sp.add_argument("--threads", type=int, help="worker processes (default: all cores)")
        sp.add_argument("--tolerance", type=float, help="relative quadrature tolerance")
        return sp

    sp = common(sub.add_parser("fig2", help="emission lobes of a finite array"))
    sp.add_argument("--kick", "--kicks", dest="kicks", help="comma list of c*beta/Omega")
    sp.add_argument("--omega-ratio", type=float, help="photon-1 frequency over Omega")
    for name in ("nx", "ny", "nz", "n-theta"):
        sp.add_argument(f"--{name}", type=int)
    sp.add_argument("--extent", type=float, help="array side length in c/Omega")

    sp = common(sub.add_parser("fig3", help="angular density maps and allowed regions"))
    sp.add_argument("--kick", "--kicks", dest="kicks")
    sp.add_argument("--omega-ratio", type=float, help="high-frequency photon over Omega")
    sp.add_argument("--n-theta", type=int)
    sp.add_argument("--n-phi", type=int)

    sp = common(sub.add_parser("fig4", help="spectral rates versus frequency"))
    sp.add_argument("--kick", "--kicks", dest="kicks")
    sp.add_argument("--n-omega", type=int, help="interior frequency points")

    sp = common(sub.add_parser("fig5", help="total rates versus kick"))
    sp.add_argument("--kick", "--kicks", dest="kicks")

    sp = common(sub.add_parser("spinning", help="angular-momentum spectrum and rate"))
    sp.add_argument("--ell", type=int, help="topological charge")
    sp.add_argument("--radius", type=float, help="disk radius in c/Omega")
    sp.add_argument("--m-max", type=int, help="half width of the m window around ell")
    sp.add_argument("--n-omega", type=int)
    sp.add_argument("--nodes", type=int, help="Gauss nodes for the frequency integral")

    sp = common(sub.add_parser("estimate", help="SI rate estimates"))
    sp.add_argument("scenarios", nargs="*", default=None)
    sp.add_argument("--scenario-file", help="JSON list of extra scenarios")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "scenarios", None) == []:
        args.scenarios = None
    start = time.perf_counter()
    try:
        s = _settings(args)
        if args.command in ("fig4", "fig5", "spinning"):
            with ordered_map(s["threads"]) as mapper:
                tables, plot = globals()[f"cmd_{args.command}"](s, mapper)
        else:
            tables, plot = globals()[f"cmd_{args.command}"](s)
        outdir = Path(s["out"])
        written = []
        for t in tables:
            written += write_table(t, outdir, s["format"])
        for fmt in ("svg", "png"):
            if fmt in s["format"]:
                written.append(plot(tables[0], outdir / f"{tables[0].name}.{fmt}"))
    except (UsageError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    elapsed = time.perf_counter() - start
    for p in written:
        print(p)
    print(f"wall time {elapsed:.2f} s", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
