"""Command-line interface.

Exit status: 0 success, 2 input or parse error, 3 domain precondition
failure, 4 oracle could not resolve the question.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import cone, cusp, filling
from .errors import DomainError, InputError, ParseError
from .slice import oracle as oracle_mod
from .slice import plumbing, proximity
from .slice.reps import SurfaceKind

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_UNRESOLVED = 4

ENV_ORACLE = "HOLOFILL_ORACLE"
DEFAULT_TOL = 1e-5


class CommandFailed(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- parsing helpers ---------------------------------------------------------

def parse_complex(s: str) -> complex:
    """Parse ``a+bi`` style numbers (``i`` or ``j``), no spaces."""
    if not s or any(ch.isspace() for ch in s):
        raise ParseError(f"bad complex number {s!r}: use a+bi with no spaces")
    t = s.replace("I", "i").replace("i", "j")
    try:
        z = complex(t)
    except ValueError:
        raise ParseError(f"bad complex number {s!r}: use a+bi with no spaces") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ParseError(f"complex number {s!r} must be finite")
    return z


def parse_range(s: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in s.split(":"))
    except ValueError:
        raise ParseError(f"bad range {s!r}: expected lo:hi") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
        raise ParseError(f"bad range {s!r}: need finite lo <= hi")
    return lo, hi


def _complex_arg(s):
    try:
        return parse_complex(s)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def fmt(x) -> str:
    """Human-readable number, 6 significant digits."""
    if isinstance(x, complex):
        sign = "+" if x.imag >= 0 else "-"
        return f"{x.real:.6g}{sign}{abs(x.imag):.6g}i"
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(x)
    return f"{float(x):.6g}"


def ffmt(x) -> str:
    """File number format, 17 significant digits."""
    if isinstance(x, complex):
        sign = "+" if x.imag >= 0 else "-"
        return f"{x.real:.17g}{sign}{abs(x.imag):.17g}i"
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(x)
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    return format(float(x), ".17g")


def write_record_csv(path, record: dict) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(record.keys())
        w.writerow([ffmt(v) for v in record.values()])


def _threshold_note(L_sq: float, tol: float, out) -> None:
    if filling.FILL_THRESHOLD * (1 - tol) <= L_sq < filling.FILL_THRESHOLD:
        print(
            f"note: L^2 = {fmt(L_sq)} is below 8(2pi)^2 = {filling.FILL_THRESHOLD:.10g} "
            f"but within the relative tolerance {tol:g}",
            file=out,
        )


def _oracle(args, **kwargs):
    source = args.oracle if args.oracle is not None else os.environ.get(ENV_ORACLE)
    return oracle_mod.parse_oracle(source, **kwargs)


# -- commands ----------------------------------------------------------------

def cmd_cusp_shape(args, out) -> int:
    s = cusp.shape_from_w(args.w)
    n, unique = cusp.shortest_longitude(s.w)
    est = filling.estimate_filling(s, args.tol)
    rec = {
        "w": s.w,
        "L_sq": s.L_sq,
        "A_sq": s.A_sq,
        "twist": s.twist,
        "shortest_longitude_n": n,
        "longitude_unique": unique,
        "valid_fill": est.valid_fill,
        "valid_theta": est.valid_theta,
    }
    for k, v in rec.items():
        print(f"{k} = {fmt(v)}", file=out)
    if args.csv:
        write_record_csv(args.csv, rec)
    return EXIT_OK


def cmd_fill_estimate(args, out) -> int:
    if args.w is not None:
        s = cusp.shape_from_w(args.w)
        L_sq, A_sq = s.L_sq, s.A_sq
    elif args.Lsq is not None:
        L_sq = args.Lsq
        A_sq = math.inf if args.Asq is None else args.Asq
    else:
        raise CommandFailed(EXIT_INPUT, "give --w or --Lsq")
    est = filling.estimate_filling_from(L_sq, A_sq, args.tol)
    print(f"L_sq = {fmt(L_sq)}", file=out)
    print(f"A_sq = {fmt(A_sq)}", file=out)
    print(f"valid_fill = {fmt(est.valid_fill)}", file=out)
    print(f"valid_theta = {fmt(est.valid_theta)}", file=out)
    if not est.valid_fill:
        raise CommandFailed(
            EXIT_DOMAIN,
            f"L^2 = {L_sq:.10g} is below the filling threshold 8(2pi)^2 = {filling.FILL_THRESHOLD:.10g}",
        )
    _threshold_note(L_sq, args.tol, out)
    li = est.l_interval
    c, r = est.l_center_error
    print(f"l in [{fmt(li.lo)}, {fmt(li.hi)}]", file=out)
    print(f"l = {fmt(c)} +- {fmt(r)}", file=out)
    th = est.theta_interval
    if th is not None:
        print(f"theta in [{fmt(th.lo)}, {fmt(th.hi)}]", file=out)
    elif args.Asq is not None or args.w is not None:
        print("theta: no estimate (|A^2| < 3)", file=out)
    if args.csv:
        write_record_csv(
            args.csv,
            {
                "L_sq": L_sq,
                "A_sq": A_sq,
                "valid_fill": est.valid_fill,
                "valid_theta": est.valid_theta,
                "l_lo": li.lo,
                "l_hi": li.hi,
                "l_center": c,
                "l_radius": r,
                "theta_lo": th.lo if th else None,
                "theta_hi": th.hi if th else None,
            },
        )
    return EXIT_OK


def cmd_multi_fill(args, out) -> int:
    shapes = [cusp.shape_from_w(w) for w in (args.w or [])]
    if not shapes:
        raise CommandFailed(EXIT_INPUT, "give at least one --w")
    order = None
    if args.order:
        try:
            order = [int(x) for x in args.order.split(",")]
        except ValueError:
            raise CommandFailed(EXIT_INPUT, "--order must be comma-separated integers") from None
    try:
        plan = filling.multi_fill_plan(shapes, args.Kprime, args.budget, order)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise CommandFailed(EXIT_INPUT, str(exc)) from None
    print(f"threshold 4^n K' = {fmt(plan.threshold)}", file=out)
    print(f"feasible = {fmt(plan.feasible)}", file=out)
    for r in plan.records:
        print(
            f"cusp {r.index} (fill #{r.position}): L = {fmt(math.sqrt(r.L_sq_initial))}, "
            f"L^2 floor = {fmt(r.L_sq_guaranteed_floor)}, l bound = {fmt(r.l_bound_final)}",
            file=out,
        )
    print(f"total length bound = {fmt(plan.total_length_bound)}", file=out)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "position", "L_sq_initial", "L_sq_guaranteed_floor", "l_bound_final"])
            for r in plan.records:
                w.writerow([r.index, r.position, ffmt(r.L_sq_initial), ffmt(r.L_sq_guaranteed_floor), ffmt(r.l_bound_final)])
    if not plan.feasible:
        raise CommandFailed(EXIT_DOMAIN, "some normalized length is below 4^n K'")
    return EXIT_OK


def cmd_cone_trace(args, out) -> int:
    env = cone.envelope_trace(args.Lsq, args.steps, args.tol)
    _threshold_note(args.Lsq, args.tol, out)
    target = args.out or args.csv
    if target:
        with open(target, "w", newline="", encoding="utf-8") as fh:
            env.to_csv(fh)
    else:
        out.write(env.to_csv())
    if args.svg:
        cone.envelope_svg(env, args.svg)
    if target:
        f = env.final
        print(f"rows = {len(env.table)}", file=out)
        print(f"final l in [{fmt(f['l_lo'])}, {fmt(f['l_hi'])}]", file=out)
        print(f"final R_min = {fmt(f['R_min'])}", file=out)
        print(f"final v_drift = {fmt(f['v_drift'])}", file=out)
    return EXIT_OK


def _scan_chunk(task):
    points, kind, config = task
    rows = []
    for re_, im_ in points:
        v = oracle_mod.slice_membership(complex(re_, im_), kind, config)
        rows.append((re_, im_, v.verdict.value, v.evidence_string()))
    return rows


def scan_grid(re_range, im_range, n_re, n_im):
    """Grid points with im as the outer index and re as the inner one."""
    xs = np.linspace(re_range[0], re_range[1], n_re)
    ys = np.linspace(im_range[0], im_range[1], n_im)
    return [(float(x), float(y)) for y in ys for x in xs]


def _grid_count(rng, step, count, name):
    if count is not None:
        if count < 1:
            raise CommandFailed(EXIT_INPUT, f"{name} step count must be at least 1")
        return count
    if step is None:
        raise CommandFailed(EXIT_INPUT, "give --step or --grid")
    if not step > 0:
        raise CommandFailed(EXIT_INPUT, "--step must be positive")
    return int(round((rng[1] - rng[0]) / step)) + 1


def cmd_maskit_scan(args, out) -> int:
    kind = SurfaceKind.parse(args.kind)
    config = _oracle(args, word_budget=args.word_budget, heuristic=args.heuristic)
    re_range, im_range = parse_range(args.re), parse_range(args.im)
    n_re = n_im = None
    if args.grid:
        try:
            n_re, n_im = (int(x) for x in args.grid.lower().split("x"))
        except ValueError:
            raise CommandFailed(EXIT_INPUT, "--grid must look like 100x100") from None
    n_re = _grid_count(re_range, args.step, n_re, "re")
    n_im = _grid_count(im_range, args.step, n_im, "im")
    pts = scan_grid(re_range, im_range, n_re, n_im)

    chunk = max(1, math.ceil(len(pts) / (4 * max(1, args.parallel))))
    tasks = [(pts[i:i + chunk], kind, config) for i in range(0, len(pts), chunk)]
    if args.parallel > 1:
        with ProcessPoolExecutor(max_workers=args.parallel) as ex:
            parts = list(ex.map(_scan_chunk, tasks))
    else:
        parts = [_scan_chunk(t) for t in tasks]

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "verdict", "evidence"])
    counts = {}
    for part in parts:
        for re_, im_, verdict, ev in part:
            w.writerow([ffmt(re_), ffmt(im_), verdict, ev])
            counts[verdict] = counts.get(verdict, 0) + 1
    target = args.out or args.csv
    if target:
        with open(target, "w", newline="", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
        summary = ", ".join(f"{k}={counts.get(k, 0)}" for k in ("In", "Out", "Unknown"))
        print(f"{len(pts)} points: {summary}", file=out)
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_plumb(args, out) -> int:
    config = _oracle(args, word_budget=args.word_budget, heuristic=args.heuristic)
    res = plumbing.plumbing_test(args.z, args.w, args.kind, args.n_range, config)
    if res.status is plumbing.PlumbStatus.FOUND:
        print(f"Found n = {res.n}", file=out)
    else:
        print(f"{res.status.value}: {res.reason}", file=out)
    if args.csv:
        write_record_csv(args.csv, {"z": args.z, "w": args.w, "status": res.status.value, "n": res.n, "reason": res.reason})
    if res.status is plumbing.PlumbStatus.UNKNOWN:
        return EXIT_UNRESOLVED
    return EXIT_OK


def read_box_samples(path):
    """CSV with columns translate,re,im; translate is an integer or ``out``."""
    inside, outside = {}, []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            try:
                z = complex(float(row["re"]), float(row["im"]))
                tag = row["translate"].strip()
                if tag == "out":
                    outside.append(z)
                else:
                    inside.setdefault(int(tag), []).append(z)
            except (KeyError, ValueError, AttributeError):
                raise ParseError(f"{path}: rows need translate,re,im") from None
    return inside, outside


def cmd_box_check(args, out) -> int:
    try:
        x0, x1, y0, y1 = (float(v) for v in args.rect.split(":"))
    except ValueError:
        raise CommandFailed(EXIT_INPUT, "--rect must be re_min:re_max:im_min:im_max") from None
    inside, outside = read_box_samples(args.samples)
    try:
        boxes = proximity.BoxDecomposition(x0, x1, y0, y1, args.delta, tuple(sorted(inside)))
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise CommandFailed(EXIT_INPUT, str(exc)) from None
    res = proximity.box_separation_check(boxes, inside, outside)
    clearance = proximity.boundary_clearance(boxes, inside)
    print(f"{res.label}: min distance = {fmt(res.min_distance)} (delta = {fmt(args.delta)})", file=out)
    n, zi, zo = res.pair
    print(f"closest pair: translate {n}, {fmt(zi)} vs {fmt(zo)}", file=out)
    print(f"boundary clearance = {fmt(clearance)}", file=out)
    if args.csv:
        write_record_csv(args.csv, {"result": res.label, "min_distance": res.min_distance, "translate": n,
                                    "inside": zi, "outside": zo, "boundary_clearance": clearance})
    if not res.separated:
        raise CommandFailed(EXIT_DOMAIN, "separation violated")
    return EXIT_OK


def cmd_proximity_check(args, out) -> int:
    res = proximity.shape_proximity_check(args.z1, args.z2)
    dist = abs(args.z1 - args.z2)
    bound = proximity.proximity_bound(args.z1) if args.z1 != 0 else math.nan
    print(f"{res.value}: |z1 - z2| = {fmt(dist)}, bound = {fmt(bound)}", file=out)
    if args.csv:
        write_record_csv(args.csv, {"z1": args.z1, "z2": args.z2, "result": res.value, "distance": dist, "bound": bound})
    if res is not proximity.ProximityResult.CONCLUSION_HOLDS:
        raise CommandFailed(EXIT_DOMAIN, res.value)
    return EXIT_OK


def cmd_threshold(args, out) -> int:
    thr = proximity.component_separation_threshold(args.delta, args.kappa)
    n = math.floor(thr) + 1
    print(f"threshold = {fmt(thr)}", file=out)
    print(f"first excluded index n = {n}", file=out)
    if args.csv:
        write_record_csv(args.csv, {"delta": args.delta, "kappa": args.kappa, "threshold": thr, "first_n": n})
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="main output file")
    common.add_argument("--csv", help="write a machine-readable CSV record")
    common.add_argument("--parallel", type=int, default=1, help="worker processes for scans")
    common.add_argument("--oracle", default=None, help=f"certified-region file or mock-strip:<c> (default ${ENV_ORACLE})")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="relative slack on the L^2 >= 8(2pi)^2 threshold (default %(default)g)")

    p = argparse.ArgumentParser(prog="holofill", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("cusp-shape", parents=[common], help="invariants of a cusp parameter w")
    s.add_argument("--w", type=_complex_arg, required=True)
    s.set_defaults(func=cmd_cusp_shape)

    s = sub.add_parser("fill-estimate", parents=[common], help="length and angle intervals of the filled core curve")
    s.add_argument("--w", type=_complex_arg)
    s.add_argument("--Lsq", type=float)
    s.add_argument("--Asq", type=float)
    s.set_defaults(func=cmd_fill_estimate)

    s = sub.add_parser("multi-fill", parents=[common], help="bookkeeping for filling several cusps")
    s.add_argument("--w", type=_complex_arg, action="append")
    s.add_argument("--Kprime", type=float, required=True)
    s.add_argument("--budget", type=float, required=True)
    s.add_argument("--order", help="comma-separated fill order of cusp indices")
    s.set_defaults(func=cmd_multi_fill)

    s = sub.add_parser("cone-trace", parents=[common], help="envelope table over the cone deformation")
    s.add_argument("--Lsq", type=float, required=True)
    s.add_argument("--steps", type=int, default=1024)
    s.add_argument("--svg", help="optional SVG plot path (needs matplotlib)")
    s.set_defaults(func=cmd_cone_trace)

    s = sub.add_parser("maskit-scan", parents=[common], help="membership verdicts over a grid")
    s.add_argument("--re", required=True, help="lo:hi")
    s.add_argument("--im", required=True, help="lo:hi")
    s.add_argument("--step", type=float)
    s.add_argument("--grid", help="NREx NIM point counts, e.g. 100x100")
    s.add_argument("--kind", default="punctured_torus", choices=["punctured_torus", "four_punctured_sphere", "torus", "sphere"])
    s.add_argument("--word-budget", type=int, default=8)
    s.add_argument("--heuristic", action="store_true", help="enable the non-rigorous Im > 2 region")
    s.set_defaults(func=cmd_maskit_scan)

    s = sub.add_parser("plumb", parents=[common], help="search for the plumbing index n")
    s.add_argument("--z", type=_complex_arg, required=True)
    s.add_argument("--w", type=_complex_arg, required=True)
    s.add_argument("--kind", default="punctured_torus", choices=["punctured_torus", "four_punctured_sphere", "torus", "sphere"])
    s.add_argument("--n-range", type=int, default=plumbing.DEFAULT_N_RANGE)
    s.add_argument("--word-budget", type=int, default=8)
    s.add_argument("--heuristic", action="store_true")
    s.set_defaults(func=cmd_plumb)

    s = sub.add_parser("box-check", parents=[common], help="separation of sampled slice data in box translates")
    s.add_argument("--rect", required=True, help="re_min:re_max:im_min:im_max")
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--samples", required=True, help="CSV translate,re,im (translate 'out' for outside points)")
    s.set_defaults(func=cmd_box_check)

    s = sub.add_parser("proximity-check", parents=[common], help="closeness of two cusp parameters")
    s.add_argument("--z1", type=_complex_arg, required=True)
    s.add_argument("--z2", type=_complex_arg, required=True)
    s.set_defaults(func=cmd_proximity_check)

    s = sub.add_parser("threshold", parents=[common], help="index beyond which components separate")
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--kappa", type=float, required=True)
    s.set_defaults(func=cmd_threshold)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.parallel < 1:
        print("error: --parallel must be at least 1", file=err)
        return EXIT_INPUT
    try:
        return args.func(args, out)
    except CommandFailed as exc:
        print(f"error: {exc}", file=err)
        return exc.code
    except InputError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
