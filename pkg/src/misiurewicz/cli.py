"""Command line: solve, zoom, table, poincare.

Every option can also come from a key=value config file (``--config``);
flags given on the command line win over the file.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path


from . import hausdorff, poincare, render
from .errors import MisiurewiczError
from .rescale import compute_Q
from .solver import find_misiurewicz, solve_misiurewicz
from .tricorn import find_tricorn_misiurewicz, solve_tricorn_misiurewicz

EXIT_USAGE = 64
EXIT_IO = 74

CHECKS = ("functional-equation", "intersection", "cauchy")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """'a+bi', 'a-bi', 'bi', 'a' with optional exponents; 'j' also accepted."""
    s = str(text).strip().replace(" ", "")
    if s.endswith(("i", "I")):
        s = s[:-1] + "j"
    try:
        z = complex(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise argparse.ArgumentTypeError(f"not a finite complex number: {text!r}")
    return z


def parse_k_range(text: str):
    """'4..12' (inclusive), '5', or a comma list '0,2,4'."""
    s = str(text).strip()
    try:
        if ".." in s:
            lo, hi = s.split("..", 1)
            ks = list(range(int(lo), int(hi) + 1))
        else:
            ks = [int(x) for x in s.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k range: {text!r}") from None
    if not ks or min(ks) < 0:
        raise argparse.ArgumentTypeError(f"bad k range: {text!r}")
    return ks


def fmt_real(x: float) -> str:
    return repr(float(x))


def fmt_complex(z: complex) -> str:
    """Shortest round-trip form in the same syntax parse_complex reads."""
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def read_config(path) -> dict:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, val = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


class _Parser(argparse.ArgumentParser):
    # exit 2 is reserved for NoConvergence
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--family", choices=("quadratic", "tricorn"), default="quadratic")
    p.add_argument("--seed", type=parse_complex, help="parameter near the Misiurewicz point")
    p.add_argument("--l", type=int, help="preperiod (searched when omitted)")
    p.add_argument("--p", type=int, help="period (searched when omitted)")
    p.add_argument("--tol", type=float, default=1e-13)


def _render_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=parse_k_range, default=None, help="e.g. 4..12")
    p.add_argument("--r", type=float, default=render.DEFAULT_R)
    p.add_argument("--resolution", type=int, default=render.DEFAULT_RESOLUTION)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--mode", choices=("cover", "bounded"), default="cover",
                   help="cover also marks pixels the distance estimate puts on the set")
    p.add_argument("--escape-radius", type=float, default=2.0)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="misiurewicz", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="certify a parameter and print its constants")
    _common(p)

    p = sub.add_parser("zoom", help="paired Julia/parameter panels per depth k")
    _common(p)
    _render_opts(p)
    p.add_argument("--output-dir", default=".")
    p.add_argument("--format", choices=("pgm", "png"), default="pgm")

    p = sub.add_parser("table", help="Hausdorff convergence table as CSV")
    _common(p)
    _render_opts(p)
    p.add_argument("--output", help="CSV path (stdout when omitted)")

    p = sub.add_parser("poincare", help="Poincaré function diagnostics as CSV")
    _common(p)
    p.add_argument("--check", choices=CHECKS, default="functional-equation")
    p.add_argument("--k", type=parse_k_range, default=None)
    p.add_argument("--grid", type=int, default=33, help="grid side for sup over D(1)")
    p.add_argument("--points", type=int, default=100, help="sample size in D(1)")
    p.add_argument("--output", help="CSV path (stdout when omitted)")
    return ap


_CONVERTERS = {"seed": parse_complex, "k": parse_k_range, "l": int, "p": int, "tol": float,
               "r": float, "resolution": int, "budget": int, "escape_radius": float,
               "grid": int, "points": int}


def _glue_negative_values(argv):
    """'--seed -1+2i' -> '--seed=-1+2i'; argparse would read the value as a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a.startswith("--") and "=" not in a and i + 1 < len(argv) \
                and argv[i + 1][:1] == "-" and argv[i + 1][1:2] in "0123456789.ij":
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def parse_args(argv=None) -> argparse.Namespace:
    ap = build_parser()
    argv = _glue_negative_values(list(argv if argv is not None else sys.argv[1:]))
    args = ap.parse_args(argv)
    if args.config:
        cfg = read_config(args.config)
        explicit = _explicit_dests(ap, argv)
        for key, val in cfg.items():
            if key in ("config", "command") or not hasattr(args, key):
                raise UsageError(f"unknown config key: {key}")
            if key in explicit:
                continue
            conv = _CONVERTERS.get(key, str)
            try:
                setattr(args, key, conv(val))
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise UsageError(f"config {key}: {exc}") from None
    if args.seed is None:
        raise UsageError("--seed is required")
    return args


def _explicit_dests(ap: argparse.ArgumentParser, argv) -> set:
    flags = {a.split("=", 1)[0] for a in argv if a.startswith("--")}
    return {f[2:].replace("-", "_") for f in flags}


def certify(args):
    seed = args.seed
    tricorn = args.family == "tricorn"
    if args.l is None or args.p is None:
        if args.l is not None or args.p is not None:
            raise UsageError("give both --l and --p, or neither")
        return find_tricorn_misiurewicz(seed, tol=args.tol) if tricorn \
            else compute_Q(find_misiurewicz(seed, tol=args.tol))
    if tricorn:
        return solve_tricorn_misiurewicz(args.l, args.p, seed, args.tol)
    return compute_Q(solve_misiurewicz(args.l, args.p, seed, args.tol))


def describe(d) -> list:
    tricorn = getattr(d, "family", "quadratic") == "tricorn"
    items = [("family", "tricorn" if tricorn else "quadratic"), ("c0", fmt_complex(d.c0)),
             ("l", str(d.l)), ("p", str(d.p)), ("a0", fmt_complex(d.a0)),
             ("lambda0", fmt_complex(d.lambda0)), ("abs_lambda0", fmt_real(abs(d.lambda0))),
             ("A0", fmt_complex(d.A0)), ("B0", fmt_complex(d.B0))]
    if tricorn:
        items += [("B0p", fmt_complex(d.B0p)), ("Q", fmt_complex(d.Q)), ("Qp", fmt_complex(d.Qp))]
        residual = d.residual
    else:
        items += [("Q", fmt_complex(d.Q)), ("q", fmt_complex(d.q))]
        residual = d.base.residual
    items.append(("residual", fmt_real(residual)))
    return items


def cmd_solve(args, out) -> int:
    d = certify(args)
    for key, val in describe(d):
        out.write(f"{key}={val}\n")
    return 0


def _grids(d, args, k):
    cover = args.mode == "cover"
    jw = render.rescaled_julia_window(d, k, args.r, args.resolution)
    pw = render.rescaled_param_window(d, k, args.r, args.resolution)
    jg = render.classify_dynamical(d, jw, args.budget, cover, args.escape_radius)
    pg = render.classify_param(d, pw, args.budget, cover, args.escape_radius)
    return jg, pg


def cmd_zoom(args, out) -> int:
    d = certify(args)
    ks = args.k if args.k is not None else list(range(0, 11))
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    writer = render.write_png if args.format == "png" else render.write_pgm
    lines = ["k,side,file,center,dz_dw,dz_dwbar,w_half_width,resolution\n"]
    for k in ks:
        jg, pg = _grids(d, args, k)
        for side, grid in (("jul", jg), ("par", pg)):
            name = f"{side}_k{k}.{args.format}"
            writer(grid, outdir / name)
            p, q = grid.window.w_jacobian
            lines.append(f"{k},{side},{name},{fmt_complex(d.c0)},{fmt_complex(p)},"
                         f"{fmt_complex(q)},{fmt_real(args.r)},{args.resolution}\n")
            out.write(f"wrote {outdir / name}\n")
    (outdir / "index.csv").write_text("".join(lines))
    out.write(f"wrote {outdir / 'index.csv'}\n")
    return 0


def _emit(text: str, path, out) -> None:
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_table(args, out) -> int:
    d = certify(args)
    ks = args.k if args.k is not None else list(range(4, 11))
    rows = hausdorff.similarity_table(d, ks, args.r, args.resolution, args.budget,
                                      cover=args.mode == "cover")
    _emit(hausdorff.table_csv(rows), args.output, out)
    return 0


def poincare_csv(d, check: str, ks=None, grid: int = 33, points: int = 100) -> str:
    if check == "functional-equation":
        ev = poincare.PoincareEvaluator.from_data(d)
        w = poincare.disk_sample(points)
        res = poincare.functional_equation_residual(ev, w)
        lines = ["w,residual\n"]
        lines += [f"{fmt_complex(a)},{fmt_real(b)}\n" for a, b in zip(w, res)]
        return "".join(lines)
    if check == "intersection":
        ks = ks if ks is not None else list(range(5, 13))
        w = poincare.disk_grid(1.0, grid)
        lines = ["k,sup_phi_k_vs_phi,sup_Phi_k_vs_phi,sup_Phi_k_vs_phi_k\n"]
        for k, a, b, c in poincare.intersection_rows(d, ks, w):
            lines.append(f"{k},{fmt_real(a)},{fmt_real(b)},{fmt_real(c)}\n")
        return "".join(lines)
    if check == "cauchy":
        ev = poincare.PoincareEvaluator.from_data(d)
        incs = poincare.cauchy_increments(ev, poincare.disk_sample(points),
                                          poincare.cauchy_depth(d.lambda0))
        lines = ["n,increment,ratio\n"]
        for n, inc in enumerate(incs):
            ratio = inc / incs[n - 1] if n and incs[n - 1] > 0 else float("nan")
            lines.append(f"{n},{fmt_real(inc)},{fmt_real(ratio)}\n")
        return "".join(lines)
    raise UsageError(f"unknown check {check!r}")


def cmd_poincare(args, out) -> int:
    d = certify(args)
    _emit(poincare_csv(d, args.check, args.k, args.grid, args.points), args.output, out)
    return 0


COMMANDS = {"solve": cmd_solve, "zoom": cmd_zoom, "table": cmd_table, "poincare": cmd_poincare}


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args, out)
    except MisiurewiczError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SystemExit as exc:  # argparse: --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
