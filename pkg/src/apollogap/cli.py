"""Command line: ``apollogap {pack,count,spectrum,verify}``.

Exit codes: 0 success or all criteria pass, 1 a criterion fails, 2 usage or
validation error, 3 some criterion unresolved.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys

import numpy as np

from . import __version__, gap, packing
from .spectral import SpectralConfig, named_domain, spectrum_below, strip_exact

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNRESOLVED = 0, 1, 2, 3
_STATUS_EXIT = {gap.PASS: EXIT_OK, gap.FAIL: EXIT_FAIL, gap.UNRESOLVED: EXIT_UNRESOLVED}

log = logging.getLogger("apollogap")


class UsageError(Exception):
    pass


# output helpers

def _dump_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_circles_csv(path, circles: np.ndarray):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["curv", "cocurv", "cx", "cy"])
        for cocurv, curv, cx, cy in circles.tolist():
            w.writerow([curv, cocurv, cx, cy])


def write_packing_svg(path, circles: np.ndarray, size: int = 800):
    """One ``<circle>`` per row; negative curvature is drawn as the bounding circle."""
    arr = np.asarray(circles, dtype=float)
    outer = arr[arr[:, 1] < 0]
    if len(outer):
        R = 1.0 / abs(outer[0, 1])
        cx0, cy0 = outer[0, 2] / outer[0, 1], outer[0, 3] / outer[0, 1]
    else:
        R, cx0, cy0 = 1.0, 0.0, 0.0
    scale = size / (2.0 * R * 1.02)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<g fill="none" stroke="black" stroke-width="0.5">',
    ]
    for cocurv, curv, cx, cy in arr:
        if curv == 0:
            continue
        r = 1.0 / abs(curv)
        x = (cx / curv - cx0) * scale + size / 2
        y = size / 2 - (cy / curv - cy0) * scale
        lines.append(f'<circle cx="{x:.4f}" cy="{y:.4f}" r="{r * scale:.4f}"/>')
    lines += ["</g>", "</svg>"]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


# commands

def _root(args):
    try:
        return packing.validate_root(args.root)
    except (packing.InvalidRootError, ValueError) as exc:
        raise UsageError(f"invalid root {args.root}: {exc}") from exc


def cmd_pack(args) -> int:
    q = _root(args)
    rc = packing.root_circles(tuple(q.k))
    arr = packing.circle_array(rc, args.tmax)
    outer = rc.as_array()[rc.as_array()[:, 1] < 0]
    circles = np.concatenate([outer, arr]) if len(outer) else arr
    write_circles_csv(os.path.join(args.out, "circles.csv"), circles)
    write_packing_svg(os.path.join(args.out, "packing.svg"), circles)
    print(f"{len(arr)} circles with curvature <= {args.tmax:g} (+{len(outer)} bounding)")
    return EXIT_OK


def cmd_count(args) -> int:
    q = _root(args)
    Ts = packing.geometric_thresholds(args.tmin, args.tmax, args.per_decade)
    prof = packing.count_profile(tuple(q.k), Ts)
    with open(os.path.join(args.out, "count_profile.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["T", "N"])
        for T, N in zip(prof.thresholds, prof.counts):
            w.writerow([f"{T:.10g}", N])
    delta, stderr = packing.fit_growth_exponent(prof, args.fit_tmin)
    _dump_json(os.path.join(args.out, "count_fit.json"), {
        "root": list(prof.root), "delta_hat": delta, "stderr": stderr, "method": "growth-fit",
        "Tmin": args.fit_tmin, "Tmax": args.tmax, "N_Tmax": prof.counts[-1],
    })
    print(f"delta_hat = {delta:.5f} +- {stderr:.1e}  (N({args.tmax:g}) = {prof.counts[-1]})")
    return EXIT_OK


def _spectral_config(args) -> SpectralConfig:
    kw = {}
    if args.schedule is not None:
        kw["schedule"] = tuple(tuple(s) for s in args.schedule)
    for name in ("stability_tol", "boundary_mass_tol", "artificial_bc"):
        if getattr(args, name, None) is not None:
            kw[name] = getattr(args, name)
    try:
        return SpectralConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_spectrum(args) -> int:
    cfg = _spectral_config(args)
    if args.domain in ("hecke_D", "hecke_D2") and (args.mu is None or args.mu <= 2):
        raise UsageError("--mu > 2 is required for this domain")
    if args.domain == "strip":
        dom = named_domain("strip", a=args.strip_a, L=args.strip_L)
        if args.schedule is None:
            cfg = SpectralConfig(**{**cfg.to_dict(), "schedule": ((0.1, None, None), (0.05, None, None), (0.025, None, None))})
    else:
        dom = named_domain(args.domain, mu=args.mu)
    rep = spectrum_below(dom, args.kappa, config=cfg)
    d = rep.to_dict()
    if args.domain == "strip":
        d["exact"] = [strip_exact(args.strip_L, j) for j in (1, 2)]
    _dump_json(os.path.join(args.out, "spectrum.json"), d)
    rep.write_eigenfunctions(args.out)
    for lam, tag in zip(rep.eigenvalues, rep.tags):
        if lam < args.kappa:
            print(f"{lam:.6f}  {tag}")
    print(f"genuine below {args.kappa:g}: {rep.genuine_count}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = gap.GapConfig.from_dict(args.gap_config) if args.gap_config else gap.GapConfig()
    if args.case == "hecke":
        if args.mu is None or not args.mu > 2:
            raise UsageError(f"mu must exceed 2, got {args.mu}")
        report = gap.verify_hecke_gap(args.mu, cfg)
    else:
        if args.tmax < 1e4:
            raise UsageError("--tmax must be at least 1e4")
        report = gap.apollonian_report(args.tmax, cfg)
    _dump_json(os.path.join(args.out, "gap_report.json"), report.to_dict())
    print(report.summary())
    return _STATUS_EXIT[report.status]


# argument handling

def _common(p):
    p.add_argument("--out", default=None, help="output directory (default: current)")
    p.add_argument("--config", default=None, help="JSON file with option values")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="apollogap", description="Apollonian packings, limit sets and hyperbolic spectra.")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pack", help="enumerate and draw a packing")
    _common(p)
    p.add_argument("--root", type=int, nargs=4, default=None, metavar="K")
    p.add_argument("--tmax", type=float, default=None)
    p.set_defaults(func=cmd_pack, _defaults={"root": list(packing.DEFAULT_ROOT), "tmax": 100.0})

    p = sub.add_parser("count", help="counting function N(T) and growth exponent")
    _common(p)
    p.add_argument("--root", type=int, nargs=4, default=None, metavar="K")
    p.add_argument("--tmax", type=float, default=None)
    p.add_argument("--tmin", type=float, default=None, help="smallest threshold in the profile")
    p.add_argument("--fit-tmin", type=float, default=None)
    p.add_argument("--per-decade", type=int, default=None)
    p.set_defaults(func=cmd_count, _defaults={
        "root": list(packing.DEFAULT_ROOT), "tmax": 1e6, "tmin": 10.0, "fit_tmin": 1e3, "per_decade": 10})

    p = sub.add_parser("spectrum", help="low spectrum on a named domain")
    _common(p)
    p.add_argument("--domain", choices=["hecke_D", "hecke_D1", "hecke_D2", "strip"], default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--schedule", type=json.loads, default=None, help='JSON list of [h, eps, Y]')
    p.add_argument("--stability-tol", type=float, default=None)
    p.add_argument("--boundary-mass-tol", type=float, default=None)
    p.add_argument("--artificial-bc", choices=["neumann", "dirichlet", "matched"], default=None)
    p.add_argument("--strip-a", type=float, default=None)
    p.add_argument("--strip-L", type=float, default=None)
    p.set_defaults(func=cmd_spectrum, _defaults={"domain": "hecke_D", "mu": 3.0, "kappa": 0.25, "strip_a": 1.0, "strip_L": 1.0})

    p = sub.add_parser("verify", help="run an acceptance case")
    _common(p)
    p.add_argument("case", choices=["hecke", "apollonian"])
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--tmax", type=float, default=None)
    p.add_argument("--gap-config", type=json.loads, default=None, help="JSON object of GapConfig fields")
    p.set_defaults(func=cmd_verify, _defaults={"mu": 3.0, "tmax": 1e6})
    return ap


def _resolve(args):
    """Fill unset options from the config file, then from built-in defaults."""
    file_cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
    defaults = dict(args._defaults)
    defaults.setdefault("out", ".")
    defaults.setdefault("schedule", None)
    defaults.setdefault("gap_config", None)
    for key in set(defaults) | set(file_cfg):
        norm = key.replace("-", "_")
        if getattr(args, norm, None) is None:
            setattr(args, norm, file_cfg.get(key, file_cfg.get(norm, defaults.get(norm))))
    return args


def run_config(args) -> dict:
    skip = {"func", "_defaults", "config", "verbose"}
    return {"command": args.command, **{k: v for k, v in sorted(vars(args).items()) if k not in skip and k != "command"}}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args = _resolve(args)
        os.makedirs(args.out, exist_ok=True)
        _dump_json(os.path.join(args.out, f"{args.command}_config.json"), run_config(args))
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
