"""Command-line interface.

Subcommands: validate, analyze, render, characterize.  Exit codes: 0 when
every executed check passes, 2 when any check fails, 1 for usage errors or
operational failures.  Checks whose preconditions do not hold are reported
as skipped, never as failures.
"""

import argparse
import sys

from . import reporting
from .belos import SkippedCheck, analyze, characterization_residual, construct
from .errors import FbelosError, NestingViolation, NotAdmissible
from .numerics import DEFAULT_REL_TOL
from .profile import build_profile, nesting_check, preset, slope_is_infinite
from .render import Scene, render_svg

_PRESET_PARAMS = {"arbelos": [], "parbelos": [], "sine": [],
                  "parabola": ["k"], "cubic": ["a", "b"]}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(sub, need_p):
    src = sub.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="preset name, e.g. parbelos or parabola:k=2")
    src.add_argument("--profile", help='profile expression, e.g. "x - x^2"')
    sub.add_argument("--p", type=float, required=need_p,
                     help="cusp parameter in (0, 1)")
    sub.add_argument("--rel-tol", type=float, default=DEFAULT_REL_TOL,
                     help="quadrature relative tolerance (default 1e-10)")
    if need_p:
        sub.add_argument("--allow-non-nesting", action="store_true",
                         help="build the figure even when the lower arcs "
                              "rise above the upper arc")
    sub.add_argument("--json", metavar="PATH", help="write a JSON report")


def build_parser():
    parser = _Parser(prog="fbelos",
                     description="Construct and verify f-belos figures.")
    subs = parser.add_subparsers(dest="command", required=True)

    v = subs.add_parser("validate", parents=[], help="check admissibility and nesting")
    _add_common(v, need_p=False)

    a = subs.add_parser("analyze", help="run every applicable property check")
    _add_common(a, need_p=True)
    a.add_argument("--tol", type=float, default=1e-9,
                   help="report tolerance for checks without a pinned one")
    a.add_argument("--grid", type=int, default=101,
                   help="grid size for swept checks (default 101)")

    r = subs.add_parser("render", help="render the figure to SVG")
    _add_common(r, need_p=True)
    r.add_argument("--svg", metavar="PATH", help="output file (default: stdout)")
    r.add_argument("--overlays", default="",
                   help="comma-separated overlays, e.g. "
                        "tangent_parallelogram,circumcircle,point_parallelogram:0.35")
    r.add_argument("--samples", type=int, default=512,
                   help="polyline samples per arc (default 512)")

    c = subs.add_parser("characterize", help="classify against the parabola family")
    _add_common(c, need_p=False)
    c.add_argument("--grid", type=int, default=101,
                   help="residual grid size (default 101)")
    return parser


def _parse_preset(text):
    name, _, raw = text.partition(":")
    if name not in _PRESET_PARAMS:
        raise FbelosError(f"unknown preset {name!r}; known: {sorted(_PRESET_PARAMS)}")
    wanted = _PRESET_PARAMS[name]
    given = {}
    if raw:
        for pair in raw.split(","):
            key, sep, value = pair.partition("=")
            if not sep:
                raise FbelosError(f"preset parameter {pair!r} is not key=value")
            given[key.strip()] = float(value)
    missing = [k for k in wanted if k not in given]
    extra = [k for k in given if k not in wanted]
    if missing or extra:
        raise FbelosError(
            f"preset {name!r} takes parameters {wanted}, got {sorted(given)}")
    return preset(name, [given[k] for k in wanted])


def _load_profile(args):
    if args.preset:
        return _parse_preset(args.preset)
    return build_profile(args.profile)


def _profile_id(profile):
    return profile.name if profile.name != "custom" else profile.expr.source_text


def _slope_repr(slope):
    return "infinite" if slope_is_infinite(slope) else slope


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(reporting.dumps(payload))


def _cmd_validate(args):
    try:
        profile = _load_profile(args)
    except NotAdmissible as err:
        print(f"admissible: no ({err})")
        if args.json:
            _write_json(args.json, {"admissible": False, "nesting": None,
                                    "profile": args.preset or args.profile,
                                    "detail": str(err)})
        return 2
    s0, s1 = profile.endpoint_slopes
    print(f"profile: {_profile_id(profile)}")
    print("admissible: yes")
    print(f"endpoint slopes: ({_slope_repr(s0)}, {_slope_repr(s1)})")
    nested = None
    if args.p is not None:
        nested = nesting_check(profile, args.p)
        print(f"nesting at p={args.p:g}: {'yes' if nested else 'no'}")
    if args.json:
        _write_json(args.json, {
            "admissible": True, "nesting": nested,
            "profile": _profile_id(profile),
            "slope0": _slope_repr(s0), "slope1": _slope_repr(s1)})
    return 2 if nested is False else 0


def _cmd_analyze(args):
    profile = _load_profile(args)
    try:
        fig = construct(profile, args.p, rel_tol=args.rel_tol,
                        require_nesting=not args.allow_non_nesting)
    except NestingViolation as err:
        print(f"FAIL nesting: {err}")
        return 2
    checks = analyze(fig, report_tol=args.tol, grid=args.grid)
    failed = 0
    for check in checks:
        if isinstance(check, SkippedCheck):
            print(f"SKIP {check.name}: {check.reason}")
        elif check.passed:
            print(f"PASS {check.name} (err {check.abs_err:.3e} <= tol {check.tol:.3e})")
        else:
            failed += 1
            print(f"FAIL {check.name}: lhs={check.lhs!r} rhs={check.rhs!r} "
                  f"err={check.abs_err:.3e} tol={check.tol:.3e}")
    if args.json:
        _write_json(args.json, {
            "profile": _profile_id(profile), "p": args.p,
            "checks": [c.to_jsonable() for c in checks]})
    return 2 if failed else 0


def _cmd_render(args):
    profile = _load_profile(args)
    fig = construct(profile, args.p, rel_tol=args.rel_tol,
                    require_nesting=not args.allow_non_nesting)
    overlays = tuple(o for o in args.overlays.split(",") if o.strip())
    scene = Scene(fig, overlays=overlays, samples_per_arc=args.samples)
    svg = render_svg(scene)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg)
        print(f"wrote {args.svg}")
    else:
        sys.stdout.write(svg)
    if args.json:
        _write_json(args.json, {"profile": _profile_id(profile), "p": args.p,
                                "svg": args.svg, "overlays": list(args.overlays.split(","))})
    return 0


def _cmd_characterize(args):
    profile = _load_profile(args)
    try:
        result = characterization_residual(profile, grid_size=args.grid)
    except FbelosError as err:
        print(f"profile: {_profile_id(profile)}")
        print(f"verdict: not applicable ({err})")
        if args.json:
            _write_json(args.json, {"profile": _profile_id(profile),
                                    "verdict": "not applicable", "detail": str(err)})
        return 0
    verdict = "parabola family" if result.is_parabola_family else "not in the parabola family"
    print(f"profile: {_profile_id(profile)}")
    print(f"sup_residual = {reporting.format_float(result.sup_residual)}")
    print(f"symmetry_defect = {reporting.format_float(result.symmetry_defect)}")
    if result.implied_k is not None:
        print(f"implied_k = {reporting.format_float(result.implied_k)}")
    print(f"verdict: {verdict}")
    if args.json:
        _write_json(args.json, {
            "profile": _profile_id(profile),
            "sup_residual": result.sup_residual,
            "symmetry_defect": result.symmetry_defect,
            "implied_k": result.implied_k,
            "verdict": verdict})
    return 0


_COMMANDS = {"validate": _cmd_validate, "analyze": _cmd_analyze,
             "render": _cmd_render, "characterize": _cmd_characterize}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("analyze", "render") and not 0.0 < args.p < 1.0:
        print(f"fbelos: error: --p must lie in (0, 1), got {args.p}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except FbelosError as err:
        print(f"fbelos: error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"fbelos: error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
