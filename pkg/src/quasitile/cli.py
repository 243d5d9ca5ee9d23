"""Command line: ``quasitile generate|inflate|diffract|verify|cover|render``.

JSON goes to ``--out`` (or standard output), SVG to ``--svg``. Errors are
reported as a JSON object on standard error with a nonzero exit status.
The thread count of the numeric backends can be capped with the
``QUASITILE_THREADS`` environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

TILINGS = ("ab", "penrose", "ttt", "fibonacci")
ROUTES = {
    "ab": ("cutproject", "inflation", "section"),
    "penrose": ("cutproject", "inflation", "section"),
    "ttt": ("cutproject", "section"),
    "fibonacci": ("inflation", "section"),
}
THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")
EXIT_USAGE = 2
EXIT_FAILED = 1


class UsageError(ValueError):
    pass


def _apply_threads() -> None:
    n = os.environ.get("QUASITILE_THREADS")
    if n is None:
        return
    if not n.isdigit() or int(n) < 1:
        raise UsageError(f"QUASITILE_THREADS must be a positive integer, got {n!r}")
    for var in THREAD_VARS:
        os.environ[var] = n


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _parse_vector(text: str | None):
    if text is None:
        return None
    try:
        return tuple(Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad coordinate list {text!r}") from exc


# ---------------------------------------------------------------------------
# generate / inflate
# ---------------------------------------------------------------------------


def _need(value, flag: str, what: str):
    if value is None:
        raise UsageError(f"{what} needs {flag}")
    return value


def _positive_radius(args) -> Fraction:
    r = Fraction(_need(args.radius, "--radius", f"{getattr(args, 'route', args.command)!r}"))
    if r <= 0:
        raise UsageError("--radius must be positive")
    return r


def _section(args):
    from .dualcell import section_tiling
    from .lattice import fibonacci_scheme, penrose_scheme
    from .cutproject import ab_scheme

    c = _parse_vector(args.c_perp)
    if args.tiling == "fibonacci":
        length = Fraction(_need(args.length, "--length", "the Fibonacci section"))
        if length < 0:
            raise UsageError("--length must be non-negative")
        return section_tiling(fibonacci_scheme(), "T", c, ((0,), (length,)), names=["A", "B"], tiling="fibonacci")
    r = _positive_radius(args)
    box = ((-r, -r), (r, r))
    if args.tiling == "ab":
        return section_tiling(ab_scheme(), "T*", c, box, names=["square", "rhomb"], tiling="ab")
    if args.tiling == "penrose":
        from .matching import decorate

        return decorate(section_tiling(penrose_scheme(), "T", c, box, names=["thick", "thin"], tiling="penrose"))
    return section_tiling(penrose_scheme(), "T*", c, box, names=["large", "small"], tiling="ttt")


def _cutproject(args):
    from . import cutproject as cp

    r = _positive_radius(args)
    off = _parse_vector(args.c_perp)
    if args.tiling == "ab":
        return cp.ab_tiling(r, off)
    if args.tiling == "penrose":
        from .matching import decorate

        return decorate(cp.penrose_tiling(r, off))
    return cp.triangle_tiling(r, off)


def _inflation(args):
    from .inflation import RULES, pair_halves, seed_names, seed_patch, substitute

    if args.steps is None or args.steps < 0:
        raise UsageError("route 'inflation' needs --steps >= 0")
    rule = RULES[args.tiling]()
    # a lone Penrose half has no partner and would vanish when halves are paired
    seed = args.seed or ("sun" if args.tiling == "penrose" else seed_names(rule)[0])
    if seed not in seed_names(rule):
        raise UsageError(f"unknown seed {seed!r}; choose from {seed_names(rule)}")
    patch = substitute(rule, seed_patch(rule, seed), args.steps)
    patch.meta["seed"] = seed
    if args.tiling == "penrose" and not args.halves:
        from .matching import PENROSE_TEMPLATE

        patch = pair_halves(patch, PENROSE_TEMPLATE)
    return patch


def build_patch(args):
    if args.tiling not in TILINGS:
        raise UsageError(f"unknown tiling {args.tiling!r}")
    if args.route not in ROUTES[args.tiling]:
        raise UsageError(f"route {args.route!r} is not available for tiling {args.tiling!r}")
    if args.route == "inflation":
        return _inflation(args)
    if args.route == "section":
        return _section(args)
    return _cutproject(args)


def cmd_generate(args) -> int:
    patch = build_patch(args)
    _write(patch.to_json(), args.out)
    if args.svg:
        from .render import render_patch

        _write(render_patch(patch), args.svg)
    return 0


def cmd_inflate(args) -> int:
    args.route = "inflation"
    if args.tiling not in ("ab", "penrose", "fibonacci"):
        raise UsageError(f"no substitution rule for tiling {args.tiling!r}")
    if args.rule_out:
        from .inflation import RULES

        _write(RULES[args.tiling]().to_json(), args.rule_out)
    return cmd_generate(args)


# ---------------------------------------------------------------------------
# diffract / cover / verify / render
# ---------------------------------------------------------------------------


def cmd_diffract(args) -> int:
    from .cutproject import ab_spec, penrose_windows
    from .diffraction import predict_peaks

    if args.tiling not in ("ab", "penrose"):
        raise UsageError(f"diffraction is available for ab and penrose, not {args.tiling!r}")
    if not 0 < args.cutoff <= 1 or args.k_max <= 0:
        raise UsageError("need 0 < --cutoff <= 1 and --k-max > 0")
    spec = ab_spec() if args.tiling == "ab" else penrose_windows()
    if args.tiling == "penrose":
        # vertex classes 1-4 only; class 0 marks decagon centres
        spec = type(spec)(spec.scheme, {k: v for k, v in spec.windows.items() if k != "0"})
    pattern = predict_peaks(spec, args.cutoff, args.k_max)
    pattern.meta = {"perp_bound": float(f"{pattern.meta['perp_bound']:.12g}"), "tiling": args.tiling}
    _write(pattern.to_json(), args.out)
    if args.svg:
        from .render import render_pattern

        _write(render_pattern(pattern), args.svg)
    return 0


def cmd_cover(args) -> int:
    from .covering import center_classes, decagon_cluster, find_covering, pentagon_clusters, verify_covering
    from .cutproject import penrose_tiling, triangle_tiling

    if args.tiling not in ("penrose", "ttt"):
        raise UsageError(f"coverings are available for penrose and ttt, not {args.tiling!r}")
    r = _positive_radius(args)
    if args.tiling == "penrose":
        patch, clusters = penrose_tiling(r), [decagon_cluster()]
    else:
        patch, clusters = triangle_tiling(r), pentagon_clusters()
    patch = patch.canonical()
    placements = find_covering(patch, clusters)
    rep = verify_covering(patch, placements)
    out = {
        "schema": "quasitile.covering/1",
        "tiling": args.tiling,
        "radius": str(r),
        "clusters": [c.to_dict() for c in clusters],
        "placements": [p.to_dict() for p in placements],
        "center_classes": {str(k): v for k, v in sorted(center_classes(placements).items())},
        "report": rep.to_dict(),
    }
    out["report"]["margin"] = float(f"{rep.margin:.12g}")
    out["report"]["covered_fraction"] = float(f"{rep.fraction:.12g}")
    _write(_dumps(out), args.out)
    if args.svg:
        from .render import cluster_polygons, render_patch

        _write(render_patch(patch, cluster_polygons(patch, placements, clusters)), args.svg)
    return 0 if rep.complete else EXIT_FAILED


def cmd_verify(args) -> int:
    from . import checks

    results = []
    if args.patch:
        with open(args.patch, encoding="utf-8") as fh:
            res = {"check": "patch-roundtrip", "patch": os.path.basename(args.patch)}
            res.update(checks.patch_roundtrip(fh.read()))
            results.append(res)
    if args.check or not args.patch:
        if args.tiling is None:
            raise UsageError("verify needs --tiling (or --patch)")
        names = checks.checks_for(args.tiling) if args.check in (None, "all") else [args.check]
        for name in names:
            try:
                results.append(checks.run_check(name, args.tiling))
            except KeyError as exc:
                raise UsageError(str(exc.args[0])) from exc
            except ValueError as exc:
                if name in checks.CHECKS and args.tiling not in checks.CHECKS[name][0]:
                    raise UsageError(str(exc)) from exc
                raise
    ok = all(r["passed"] for r in results)
    _write(_dumps({"passed": ok, "results": results}), args.out)
    return 0 if ok else EXIT_FAILED


def cmd_render(args) -> int:
    from .render import render_patch, render_pattern

    with open(args.input, encoding="utf-8") as fh:
        data = json.load(fh)
    schema = data.get("schema", "")
    if schema.startswith("quasitile.patch/"):
        from .patch import Patch

        svg = render_patch(Patch.from_dict(data))
    elif schema.startswith("quasitile.diffraction/"):
        from .diffraction import BraggPeak, DiffractionPattern

        peaks = [BraggPeak(tuple(p["indices"]), tuple(p["k_par"]), tuple(p["k_perp"]), p["intensity"]) for p in data["peaks"]]
        svg = render_pattern(DiffractionPattern(data["scheme"], peaks, data["cutoff"], data["k_max"]))
    else:
        raise UsageError(f"cannot render schema {schema!r}")
    _write(svg, args.svg)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _tiling_args(p, routes: bool = True) -> None:
    p.add_argument("--tiling", choices=TILINGS, required=True)
    if routes:
        p.add_argument("--route", choices=("cutproject", "inflation", "section"), default="cutproject")
    p.add_argument("--radius", type=Fraction)
    p.add_argument("--steps", type=int)
    p.add_argument("--seed", help="seed patch for the inflation route")
    p.add_argument("--length", type=Fraction, help="section length for the Fibonacci chain")
    p.add_argument("--c-perp", help="internal offset, comma separated rationals")
    p.add_argument("--halves", action="store_true", help="keep Penrose half-rhombs unpaired")
    p.add_argument("--out", help="JSON output path (default: standard output)")
    p.add_argument("--svg", help="SVG output path")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quasitile", description="Quasiperiodic tilings: construction, checks, diffraction.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="build a tiling patch")
    _tiling_args(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("inflate", help="iterate a substitution rule")
    _tiling_args(p, routes=False)
    p.add_argument("--rule-out", help="also write the rule JSON here")
    p.set_defaults(func=cmd_inflate)

    p = sub.add_parser("diffract", help="predicted Bragg peaks")
    p.add_argument("--tiling", choices=TILINGS, required=True)
    p.add_argument("--cutoff", type=float, default=1e-3)
    p.add_argument("--k-max", type=float, default=2.0)
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_diffract)

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("--tiling", choices=TILINGS)
    p.add_argument("--check", help="suite name or 'all' (default)")
    p.add_argument("--patch", help="patch JSON to re-ingest and check")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cover", help="cluster coverings")
    p.add_argument("--tiling", choices=TILINGS, required=True)
    p.add_argument("--radius", type=Fraction, default=Fraction(15))
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("render", help="SVG from a patch or pattern JSON")
    p.add_argument("input")
    p.add_argument("--svg", help="SVG output path (default: standard output)")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    try:
        _apply_threads()
        args = make_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(_dumps({"error": "usage", "message": str(exc)}) + "\n")
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        sys.stderr.write(_dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
