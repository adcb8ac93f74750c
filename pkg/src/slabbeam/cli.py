"""Command-line front end.

Exit status: 0 success, 1 bad arguments, 2 domain or regime error,
3 I/O error, 4 quadrature resolution guard.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import core
from .beam import per_order_field, synthesize_field
from .core import SlabConfig
from .errors import DomainError, QuadratureError, RegimeError, SlabError
from .fieldmap import GridSpec, detect_peaks, line_cut, render_map, transmission_scan
from .output import pgm_bytes, write_csv, write_pgm
from .quadrature import QuadratureSpec

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO, EXIT_QUAD = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _shared() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("scenario")
    g.add_argument("--n-ratio", type=float, default=math.sqrt(3) / 2,
                   help="index ratio n_II/n_I (default: sqrt(3)/2)")
    ang = g.add_mutually_exclusive_group()
    ang.add_argument("--theta0", type=float, default=None,
                     help="central incidence angle in radians (default: pi/4)")
    ang.add_argument("--theta0-deg", type=float, default=None,
                     help="central incidence angle in degrees")
    g.add_argument("--delta", type=float, default=50.0, help="beam scale n_I k d (default: 50)")
    g.add_argument("--L", dest="L", type=float, default=4.0,
                   help="slab width in units of d (default: 4)")
    q = p.add_argument_group("quadrature")
    q.add_argument("--quad-panels", type=int, default=64, help="Gauss-Legendre panels (default: 64)")
    q.add_argument("--quad-nodes", type=int, default=16, help="nodes per panel (default: 16)")
    o = p.add_argument_group("output")
    o.add_argument("--out", default="-", help="output path, '-' for stdout (default: -)")
    o.add_argument("--format", choices=("csv", "pgm"), default=None,
                   help="output format (default: pgm for map, csv otherwise)")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared()
    parser = _Parser(prog="slabbeam", description="TE beam scattering by a dielectric slab.")
    sub = parser.add_subparsers(dest="verb", metavar="VERB")
    sub.required = True

    c = sub.add_parser("coeffs", parents=[shared], help="plane-wave coefficients at theta0")
    extra = c.add_mutually_exclusive_group()
    extra.add_argument("--orders", type=int, default=None, metavar="N",
                       help="tabulate multiple-reflection terms 0..N instead")
    extra.add_argument("--resonances", type=int, default=None, metavar="N",
                       help="tabulate the first N resonant slab widths instead")
    c.add_argument("--particle", action="store_true",
                   help="append the incoherent (particle-limit) sums")

    s = sub.add_parser("scan", parents=[shared], help="wave-limit vs beam transmission against L_d")
    s.add_argument("--L-min", type=float, default=0.0, help="first L_d (default: 0)")
    s.add_argument("--L-max", type=float, default=None,
                   help="last L_d (default: ten resonance periods)")
    s.add_argument("--L-count", type=int, default=201, help="number of L_d values (default: 201)")

    m = sub.add_parser("map", parents=[shared], help="|E|^2 on a y-z grid")
    _grid_flags(m)
    m.add_argument("--bit-depth", type=int, choices=(8, 16), default=16, help="PGM depth (default: 16)")
    m.add_argument("--gamma", type=float, default=1.0, help="PGM gamma exponent (default: 1)")
    m.add_argument("--csv", default=None, metavar="PATH", help="also write y_d,z_d,intensity CSV")
    m.add_argument("--workers", type=int, default=None, help="rendering threads (default: all CPUs)")

    k = sub.add_parser("cuts", parents=[shared], help="|E|^2 along a line")
    k.add_argument("--axis", choices=("fixed_z", "fixed_y"), default="fixed_z",
                   help="hold z (sample y) or hold y (sample z) (default: fixed_z)")
    k.add_argument("--at", type=float, default=4.5, help="fixed coordinate value (default: 4.5)")
    k.add_argument("--from", dest="lo", type=float, default=-4.0, help="range start (default: -4)")
    k.add_argument("--to", dest="hi", type=float, default=32.0, help="range end (default: 32)")
    k.add_argument("--samples", type=int, default=1001, help="number of samples (default: 1001)")
    k.add_argument("--peaks", action="store_true", help="write detected peaks instead of samples")
    k.add_argument("--threshold", type=float, default=1e-2, help="relative peak threshold (default: 1e-2)")
    k.add_argument("--smooth", type=float, default=None, help="Gaussian smoothing sigma before peak search")

    b = sub.add_parser("beams", parents=[shared], help="per-order beam table")
    b.add_argument("--orders", type=int, default=2, help="highest order N (default: 2)")
    b.add_argument("--z-reflected", type=float, default=-2.0, help="cut for reflected beams (default: -2)")
    b.add_argument("--z-transmitted", type=float, default=None,
                   help="cut for transmitted beams (default: L + 0.5)")
    b.add_argument("--from", dest="lo", type=float, default=-6.0, help="y range start (default: -6)")
    b.add_argument("--to", dest="hi", type=float, default=32.0, help="y range end (default: 32)")
    b.add_argument("--samples", type=int, default=1501, help="samples per cut (default: 1501)")
    return parser


def _grid_flags(p):
    p.add_argument("--y-min", type=float, default=-4.0)
    p.add_argument("--y-max", type=float, default=32.5)
    p.add_argument("--z-min", type=float, default=-4.0)
    p.add_argument("--z-max", type=float, default=6.0)
    p.add_argument("--ny", type=int, default=512)
    p.add_argument("--nz", type=int, default=512)


def _scenario(args) -> SlabConfig:
    if args.theta0_deg is not None:
        theta0, flag = math.radians(args.theta0_deg), "--theta0-deg"
    else:
        theta0, flag = (math.pi / 4 if args.theta0 is None else args.theta0), "--theta0"
    if not 0 < theta0 < math.pi / 2:
        raise UsageError(f"{flag} must lie strictly between 0 and pi/2")
    if not args.n_ratio > 0:
        raise UsageError("--n-ratio must be positive")
    if not args.delta > 0:
        raise UsageError("--delta must be positive")
    if not args.L >= 0:
        raise UsageError("--L must be non-negative")
    if args.quad_panels < 1 or args.quad_nodes < 1 or args.quad_panels * args.quad_nodes < 16:
        raise UsageError("--quad-panels x --quad-nodes must be at least 16")
    return SlabConfig.from_angle(args.n_ratio, theta0, args.delta, args.L)


def _quad(args) -> QuadratureSpec:
    return QuadratureSpec(panels=args.quad_panels, order=args.quad_nodes)


def _emit(table, args) -> None:
    fmt = args.format or "csv"
    if fmt != "csv":
        raise UsageError(f"--format {fmt} is only available for the map verb")
    write_csv(table, args.out)


def _cmd_coeffs(args, cfg: SlabConfig) -> None:
    a = cfg.alpha0
    if args.orders is not None:
        if args.orders < 0:
            raise UsageError("--orders must be >= 0")
        terms = core.order_terms(a, cfg, args.orders)
        table = {
            "n": [t.n for t in terms],
            "Rn_re": [t.Rn.real for t in terms],
            "Rn_im": [t.Rn.imag for t in terms],
            "Tn_re": [t.Tn.real for t in terms],
            "Tn_im": [t.Tn.imag for t in terms],
            "Rn2": [abs(t.Rn) ** 2 for t in terms],
            "Tn2": [abs(t.Tn) ** 2 for t in terms],
        }
        _emit(table, args)
        return
    if args.resonances is not None:
        if args.resonances < 1:
            raise UsageError("--resonances must be >= 1")
        lams = core.resonance_lengths(a, cfg, args.resonances)
        ts = [abs(core.slab_coefficients(a, _with_L(cfg, lam / cfg.delta))[1]) ** 2 for lam in lams]
        _emit({"n": list(range(1, len(lams) + 1)), "delta_L": lams,
               "L_d": [lam / cfg.delta for lam in lams], "T2": ts}, args)
        return
    R, T = core.slab_coefficients(a, cfg)
    regime = core.classify_regime(a, cfg.n_ratio)
    table = {
        "alpha": [a], "n_ratio": [cfg.n_ratio], "delta": [cfg.delta], "L_d": [cfg.L_d],
        "regime": [{core.Regime.DIFFUSION: 1, core.Regime.TUNNELING: -1}.get(regime, 0)],
        "R_re": [R.real], "R_im": [R.imag], "T_re": [T.real], "T_im": [T.imag],
        "R2": [abs(R) ** 2], "T2": [abs(T) ** 2], "R2_plus_T2": [abs(R) ** 2 + abs(T) ** 2],
    }
    if args.particle:
        sr, st = core.particle_limit_sums(a, cfg)
        table["sumR2"], table["sumT2"] = [sr], [st]
    _emit(table, args)


def _with_L(cfg: SlabConfig, L_d: float) -> SlabConfig:
    return SlabConfig(cfg.n_ratio, cfg.alpha0, cfg.delta, L_d)


def _cmd_scan(args, cfg: SlabConfig) -> None:
    if args.L_count < 1:
        raise UsageError("--L-count must be >= 1")
    L_max = args.L_max
    if L_max is None:
        rad = cfg.n_ratio**2 - 1 + cfg.alpha0**2
        L_max = 10 * math.pi / (math.sqrt(abs(rad)) * cfg.delta) if rad != 0 else 1.0
    if not 0 <= args.L_min <= L_max:
        raise UsageError("--L-min and --L-max must satisfy 0 <= L-min <= L-max")
    rows = transmission_scan(cfg, np.linspace(args.L_min, L_max, args.L_count), _quad(args))
    _emit({"L_d": [r[0] for r in rows], "T_wave": [r[1] for r in rows],
           "T_beam": [r[2] for r in rows]}, args)


def _cmd_map(args, cfg: SlabConfig) -> None:
    if args.ny < 2 or args.nz < 2:
        raise UsageError("--ny and --nz must both be >= 2")
    if not (args.y_min < args.y_max and args.z_min < args.z_max):
        raise UsageError("--y-min/--y-max and --z-min/--z-max must be increasing")
    if args.gamma <= 0:
        raise UsageError("--gamma must be positive")
    fmt = args.format or "pgm"
    grid = GridSpec(args.y_min, args.y_max, args.z_min, args.z_max, args.ny, args.nz)
    imap = render_map(grid, cfg, _quad(args), workers=args.workers)
    table = None
    if fmt == "csv" or args.csv:
        yy, zz = np.meshgrid(grid.y, grid.z, indexing="ij")
        table = {"y_d": yy.ravel(), "z_d": zz.ravel(), "intensity": imap.values.ravel()}
    if fmt == "pgm":
        if args.out == "-":
            sys.stdout.buffer.write(_pgm(imap, args))
            sys.stdout.flush()
        else:
            write_pgm(imap, args.out, args.bit_depth, args.gamma)
    else:
        write_csv(table, args.out)
    if args.csv:
        write_csv(table, args.csv)


def _pgm(imap, args) -> bytes:
    return pgm_bytes(imap.values, args.bit_depth, args.gamma)


def _cmd_cuts(args, cfg: SlabConfig) -> None:
    if args.samples < 2:
        raise UsageError("--samples must be >= 2")
    if not args.lo < args.hi:
        raise UsageError("--from must be smaller than --to")
    cut = line_cut(args.axis, args.at, (args.lo, args.hi), args.samples, cfg, _quad(args))
    coord = "y_d" if args.axis == "fixed_z" else "z_d"
    if args.peaks:
        if not 0 < args.threshold < 1:
            raise UsageError("--threshold must lie in (0, 1)")
        peaks = detect_peaks(cut, args.threshold, smooth=args.smooth)
        _emit({"position": [p.position for p in peaks], "height": [p.height for p in peaks],
               "width": [p.width for p in peaks]}, args)
    else:
        _emit({coord: cut.coords, "intensity": cut.intensity}, args)


def _cmd_beams(args, cfg: SlabConfig) -> None:
    if args.orders < 0:
        raise UsageError("--orders must be >= 0")
    if args.samples < 3 or not args.lo < args.hi:
        raise UsageError("--samples must be >= 3 and --from < --to")
    quad = _quad(args)
    z_t = cfg.L_d + 0.5 if args.z_transmitted is None else args.z_transmitted
    y = np.linspace(args.lo, args.hi, args.samples)
    inc = np.abs(synthesize_field((y, args.z_reflected), "incident", cfg, quad)) ** 2
    inc_power = float(np.trapezoid(inc, y))
    rows: dict[str, list] = {k: [] for k in
                             ("kind", "n", "z_d", "y_peak", "y_centroid", "power_fraction", "particle_limit")}
    a = cfg.alpha0
    for kind, code, z in (("reflected", 0, args.z_reflected), ("transmitted", 1, z_t)):
        for n in range(args.orders + 1):
            e = per_order_field((y, z), n, kind, cfg, quad)
            v = np.abs(e) ** 2
            power = float(np.trapezoid(v, y))
            rn, tn = core._order_amplitudes(a, cfg, n)
            rows["kind"].append(code)
            rows["n"].append(n)
            rows["z_d"].append(z)
            rows["y_peak"].append(float(y[int(np.argmax(v))]))
            rows["y_centroid"].append(float(np.trapezoid(v * y, y) / power) if power > 0 else float("nan"))
            rows["power_fraction"].append(power / inc_power)
            rows["particle_limit"].append(float(abs(rn if kind == "reflected" else tn) ** 2))
    _emit(rows, args)


_COMMANDS = {
    "coeffs": _cmd_coeffs,
    "scan": _cmd_scan,
    "map": _cmd_map,
    "cuts": _cmd_cuts,
    "beams": _cmd_beams,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _scenario(args)
        _COMMANDS[args.verb](args, cfg)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"slabbeam: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuadratureError as exc:
        print(f"slabbeam: quadrature: {exc}", file=sys.stderr)
        return EXIT_QUAD
    except (DomainError, RegimeError, SlabError) as exc:
        print(f"slabbeam: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"slabbeam: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
