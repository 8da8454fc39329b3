"""Command-line front end.

Subcommands cover each module: parameter maps and walls, discriminant,
the exact lattice action, the 27 lines, orbit traces, and the counting
suite.  Output is JSON, CSV or human-readable text; a key=value config
file can supply defaults that individual flags override.

Exit codes: 0 success / all checks pass, 1 verification failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

from . import counting, lattice, lines, params, surface

__all__ = ["main", "dispatch"]


def parse_complex(text):
    """Parse "re+imi" strings, bare reals, or [re, im] JSON pairs."""
    if isinstance(text, (int, float)):
        return complex(text)
    if isinstance(text, (list, tuple)):
        if len(text) != 2:
            raise ValueError(f"complex pair must have two entries: {text!r}")
        return complex(float(text[0]), float(text[1]))
    s = str(text).strip()
    if s.startswith("[") or s.startswith("("):
        return parse_complex(json.loads(s.replace("(", "[").replace(")", "]")))
    try:
        return complex(s.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ValueError(f"cannot parse complex number {text!r}") from None


def parse_scalar(text):
    """Parse a rational ("3/10"), integer, real, or complex scalar."""
    if isinstance(text, str) and "/" in text:
        return Fraction(text)
    v = parse_complex(text)
    if v.imag == 0 and isinstance(text, str) and "i" not in text and "j" not in text:
        # keep exact integers exact for wall membership
        s = str(text).strip()
        try:
            return int(s)
        except ValueError:
            return v.real
    return v


def _split_list(text):
    s = text.strip()
    if s.startswith("["):
        return json.loads(s)
    return [p for p in s.split(",") if p.strip()]


def parse_kappa(text) -> params.KappaPoint:
    """kappa from 4 (tail, k0 reconstructed) or 5 comma/JSON entries."""
    vals = [parse_scalar(v) for v in _split_list(text)]
    if len(vals) == 4:
        return params.KappaPoint.from_tail(*vals)
    if len(vals) == 5:
        return params.KappaPoint(*vals)
    raise ValueError("kappa needs 4 entries (k1..k4) or 5 (k0..k4)")


def parse_theta(text) -> params.ThetaPoint:
    vals = [parse_complex(v) for v in _split_list(text)]
    if len(vals) != 4:
        raise ValueError("theta needs 4 entries")
    return params.ThetaPoint(*vals)


def parse_b(text) -> params.EigenParams:
    vals = [parse_complex(v) for v in _split_list(text)]
    if len(vals) != 4:
        raise ValueError("b needs 4 entries")
    return params.EigenParams(*vals)


def _fmt_complex(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def read_config(path: str) -> dict:
    """Read a key=value config file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = line.split("=", 1)
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _emit(data, fmt: str, stream) -> None:
    """Render a JSON-able dict as json, csv (flat rows) or pretty text."""
    if fmt == "json":
        json.dump(data, stream, indent=2, default=str)
        stream.write("\n")
        return
    if fmt == "csv":
        writer = csv.writer(stream)
        for key, val in _flatten(data):
            writer.writerow([key, val])
        return
    for key, val in _flatten(data):
        stream.write(f"{key}: {val}\n")


def _flatten(data, prefix=""):
    if isinstance(data, dict):
        for k, v in data.items():
            yield from _flatten(v, f"{prefix}{k}." if prefix else f"{k}.")
    elif isinstance(data, (list, tuple)):
        scalars = all(not isinstance(v, (dict, list, tuple)) for v in data)
        if scalars:
            yield prefix.rstrip("."), " ".join(str(v) for v in data)
        else:
            for i, v in enumerate(data):
                yield from _flatten(v, f"{prefix.rstrip('.')}[{i}].")
    else:
        yield prefix.rstrip("."), data


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubicdyn",
        description="Birational dynamics on affine cubic surfaces: "
        "parameters, lattice action, 27 lines, periodic-point counts.",
    )
    parser.add_argument("--config", help="key=value config file supplying defaults")
    parser.add_argument("--output", choices=("json", "csv", "pretty"), default=None)
    parser.add_argument("--rng", type=int, default=None, help="RNG seed")
    # the same flags are accepted after the subcommand; SUPPRESS keeps a
    # pre-subcommand value from being clobbered by the subparser default
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS)
    common.add_argument("--output", choices=("json", "csv", "pretty"), default=argparse.SUPPRESS)
    common.add_argument("--rng", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=argparse.ArgumentParser)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("params", help="kappa -> traces, eigenvalues, theta + wall report")
    p.add_argument("--kappa", required=True, help="k1,k2,k3,k4 (rationals allowed) or 5 entries")
    p.add_argument("--wall-mode", choices=("exact", "tolerant"), default=None)
    p.add_argument("--wall-tol", type=float, default=None)

    p = add_parser("disc", help="discriminant of the surface in b-coordinates")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--kappa")
    g.add_argument("--b", help='four complex entries "re+imi" or [re,im] pairs')

    p = add_parser("lattice", help="exact matrices, charpoly, spectral radius, checks")
    p.add_argument("--matrices", action="store_true")
    p.add_argument("--charpoly", action="store_true")
    p.add_argument("--spectral-radius", action="store_true")
    p.add_argument("--checks", action="store_true")

    p = add_parser("lines", help="the 27 lines with on-surface residuals")
    p.add_argument("--kappa", required=True)
    p.add_argument("--verify", action="store_true", help="run the sigma line-swap checks")
    p.add_argument("--tol", type=float, default=None)

    p = add_parser("orbit", help="iterate a generator word from a start point")
    p.add_argument("--word", required=True, help='e.g. "s1 s2 s3" or "g1^2 g2^-2"')
    p.add_argument("--x", required=True, help="three complex start coordinates")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta")
    g.add_argument("--kappa")
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--escape-radius", type=float, default=None)

    p = add_parser("count", help="closed-form N-periodic point count of c")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--space", choices=("affine", "projective"), default=None)

    p = add_parser("count-kappa", help="closed-form count along the full loop")
    p.add_argument("--N", type=int, required=True)

    p = add_parser("zeta", help="Taylor coefficients of the zeta function")
    p.add_argument("--order", type=int, required=True)

    p = add_parser("solve", help="numerically find the N-periodic points")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--theta")
    g.add_argument("--kappa")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--seeds", type=int, default=None)
    p.add_argument("--newton-tol", type=float, default=None)
    p.add_argument("--newton-max-iter", type=int, default=None)
    p.add_argument("--dedup-radius", type=float, default=None)
    p.add_argument("--surface-tol", type=float, default=None)
    p.add_argument("--saturation-batches", type=int, default=None)
    p.add_argument("--escape-radius", type=float, default=None)

    p = add_parser("verify", help="cross-check every exact counting identity")
    p.add_argument("--nmax", type=int, required=True)
    return parser


def _opt(args, config, name, conv, default):
    """Flag value, else config-file value, else built-in default."""
    val = getattr(args, name, None)
    if val is not None:
        return val
    if name in config:
        return conv(config[name])
    return default


def _cmd_params(args, config, out):
    kappa = parse_kappa(args.kappa)
    mode = _opt(args, config, "wall_mode", str, "exact" if kappa.is_rational() else "tolerant")
    tol = _opt(args, config, "wall_tol", float, 1e-9)
    a = params.kappa_to_traces(kappa)
    b = params.kappa_to_eigen(kappa)
    theta = params.rh_params(kappa)
    wall = params.wall_membership(kappa, mode=mode, tol=tol)
    _emit(
        {
            "kappa": [str(v) for v in kappa.as_tuple()],
            "a": [_fmt_complex(v) for v in a.as_tuple()],
            "b": [_fmt_complex(v) for v in b.as_tuple()],
            "theta": [_fmt_complex(v) for v in theta.as_tuple()],
            "wall": wall.to_json(),
        },
        out.fmt,
        out.stream,
    )
    return 0


def _cmd_disc(args, config, out):
    b = parse_b(args.b) if args.b else params.kappa_to_eigen(parse_kappa(args.kappa))
    d = params.discriminant(b)
    _emit({"b": [_fmt_complex(v) for v in b.as_tuple()],
           "discriminant": _fmt_complex(d), "modulus": abs(complex(d))}, out.fmt, out.stream)
    return 0


def _cmd_lattice(args, config, out):
    want_all = not (args.matrices or args.charpoly or args.spectral_radius or args.checks)
    data = {}
    cstar = lattice.coxeter_star()
    if args.matrices or want_all:
        data["sigma_star"] = {str(i): lattice.sigma_star(i).to_json() for i in (1, 2, 3)}
        data["coxeter_star"] = cstar.to_json()
    if args.charpoly or want_all:
        coeffs = lattice.charpoly(cstar)
        terms = []
        for deg in range(len(coeffs) - 1, -1, -1):
            c = coeffs[deg]
            if c == 0:
                continue
            mono = "1" if deg == 0 else ("x" if deg == 1 else f"x^{deg}")
            sign = "+ " if c > 0 and terms else ("- " if c < 0 else "")
            mag = abs(c)
            terms.append(f"{sign}{'' if mag == 1 and deg > 0 else mag}{mono if deg > 0 else ('' if mag != 1 else '1')}".strip())
        data["charpoly_coeffs_low_to_high"] = list(coeffs)
        data["charpoly"] = " ".join(terms)
    if args.spectral_radius or want_all:
        data["spectral_radius"] = lattice.spectral_radius(cstar)
        data["spectral_radius_closed"] = 2 + 5 ** 0.5
    if args.checks or want_all:
        data["eigenvector_checks"] = lattice.eigenvector_checks()
    _emit(data, out.fmt, out.stream)
    return 0


def _cmd_lines(args, config, out):
    kappa = parse_kappa(args.kappa)
    tol = _opt(args, config, "tol", float, 1e-8)
    b = params.kappa_to_eigen(kappa)
    theta = params.rh_params(kappa)
    rows = []
    ok_all = True
    for ln in lines.all_lines(b):
        ok, resid = lines.line_on_surface(ln, theta, tol)
        ok_all = ok_all and ok
        rows.append({**ln.to_json(), "on_surface": ok, "residual": resid})
    data = {"count": len(rows), "all_on_surface": ok_all, "lines": rows}
    code = 0 if ok_all else 1
    if args.verify:
        try:
            data["sigma_checks"] = [
                {"sigma": i, "swaps": lines.verify_sigma_line_action(b, i, tol)["swaps"]}
                for i in (1, 2, 3)
            ]
        except (AssertionError, ValueError) as exc:
            data["sigma_checks_error"] = str(exc)
            code = 1
    _emit(data, out.fmt, out.stream)
    return code


def _cmd_orbit(args, config, out):
    word = surface.parse_word(args.word)
    x = tuple(parse_complex(v) for v in _split_list(args.x))
    if len(x) != 3:
        raise ValueError("start point needs 3 coordinates")
    theta = parse_theta(args.theta) if args.theta else params.rh_params(parse_kappa(args.kappa))
    iters = _opt(args, config, "iters", int, 1)
    radius = _opt(args, config, "escape_radius", float, surface.DEFAULT_ESCAPE_RADIUS)
    t = theta
    steps = []
    status = "ok"
    for n in range(iters):
        res = surface.word_apply(word, x, t, escape_radius=radius)
        x, t, status = res.point.as_tuple(), res.theta, res.status
        steps.append(
            {
                "step": n + 1,
                "x": [_fmt_complex(v) for v in x],
                "theta": [_fmt_complex(v) for v in t.as_tuple()],
                "surface_residual": res.point.residual(t),
                "status": status,
            }
        )
        if status == "escaped":
            break
    _emit({"word": str(word), "steps": steps, "status": status}, out.fmt, out.stream)
    return 0


def _cmd_count(args, config, out):
    space = _opt(args, config, "space", str, "affine")
    val = counting.per_count_closed(args.N, space)
    _emit({"N": args.N, "space": space, "count": val}, out.fmt, out.stream)
    return 0


def _cmd_count_kappa(args, config, out):
    _emit({"N": args.N, "count": counting.per_kappa_closed(args.N)}, out.fmt, out.stream)
    return 0


def _cmd_zeta(args, config, out):
    _emit({"order": args.order, "coefficients": counting.zeta_coefficients(args.order)},
          out.fmt, out.stream)
    return 0


def _cmd_solve(args, config, out):
    defaults = counting.SolverConfig(seeds=200000 if args.N >= 3 else 20000)
    cfg = counting.SolverConfig(
        seeds=_opt(args, config, "seeds", int, defaults.seeds),
        rng_seed=out.rng if out.rng is not None else int(config.get("rng", 0)),
        newton_max_iter=_opt(args, config, "newton_max_iter", int, defaults.newton_max_iter),
        newton_tol=_opt(args, config, "newton_tol", float, defaults.newton_tol),
        dedup_radius=_opt(args, config, "dedup_radius", float, defaults.dedup_radius),
        surface_tol=_opt(args, config, "surface_tol", float, defaults.surface_tol),
        saturation_batches=_opt(args, config, "saturation_batches", int, defaults.saturation_batches),
        escape_radius=_opt(args, config, "escape_radius", float, defaults.escape_radius),
    )
    try:
        if args.kappa:
            report = counting.solve_for_kappa(parse_kappa(args.kappa), args.N, cfg)
        else:
            report = counting.solve_periodic(parse_theta(args.theta), args.N, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(report.to_json(), out.fmt, out.stream)
    return 0 if report.status == "complete" else 1


def _cmd_verify(args, config, out):
    try:
        report = counting.verify_counts(args.nmax)
    except AssertionError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    _emit(report, out.fmt, out.stream)
    return 0


_COMMANDS = {
    "params": _cmd_params,
    "disc": _cmd_disc,
    "lattice": _cmd_lattice,
    "lines": _cmd_lines,
    "orbit": _cmd_orbit,
    "count": _cmd_count,
    "count-kappa": _cmd_count_kappa,
    "zeta": _cmd_zeta,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
}


class _Out:
    def __init__(self, fmt, stream, rng):
        self.fmt = fmt
        self.stream = stream
        self.rng = rng


def dispatch(argv, stream=None) -> int:
    """Parse argv and run the chosen subcommand; returns the exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    config = {}
    if args.config:
        try:
            config = read_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    fmt = args.output or config.get("output", "pretty")
    if fmt not in ("json", "csv", "pretty"):
        print(f"error: unknown output format {fmt!r}", file=sys.stderr)
        return 2
    rng = args.rng if args.rng is not None else (int(config["rng"]) if "rng" in config else None)
    out = _Out(fmt, stream if stream is not None else sys.stdout, rng)
    try:
        return _COMMANDS[args.command](args, config, out)
    except (ValueError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
