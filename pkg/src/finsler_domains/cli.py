"""Command-line interface: ``finsler <subcommand> [options]``.

JSON goes to stdout, diagnostics to stderr. Exit codes: 0 success, 1 a check
failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import curvature as curv
from .domains import DomainSpec, sample_point, sample_tangent
from .errors import BadParams, FinslerError
from .matrix_kernel import matrix_from_json, matrix_to_json
from .metrics import bergman, metric
from .norms import validate_phi
from .profiles import get_profile
from .tolerances import DEFAULT
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    code = "USAGE"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _error(code: str, message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    _emit({"error": {"code": code, "message": message}})
    return EXIT_USAGE


def _domain_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("domain")
    g.add_argument("--spec", help="spec JSON, @file, or a name from --config")
    g.add_argument("--config", help="JSON file with {'specs': {name: spec}}")
    g.add_argument("--kind", choices=["I", "II", "III", "IV"])
    for d in ("m", "n", "p", "q", "N"):
        g.add_argument(f"--{d}", type=int)
    g.add_argument("--t", type=float, default=None)
    g.add_argument("--k", type=int, default=None)
    g.add_argument("--profile", default=None, help="bergman | kobayashi | paper-example | exp-family(t,k)")
    g.add_argument("--relaxed", action="store_true", help="admit dimensions below the standing assumptions")


def _load_json_arg(text: str, flag: str):
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: invalid JSON ({exc.msg})") from None


def resolve_spec(args) -> DomainSpec:
    if args.spec:
        text = args.spec
        if args.config and not text.lstrip().startswith(("{", "@")):
            with open(args.config) as fh:
                specs = json.load(fh).get("specs", {})
            if text not in specs:
                raise UsageError(f"--spec: no spec named {text!r} in {args.config}")
            obj = specs[text]
        else:
            obj = _load_json_arg(text, "--spec")
        if args.relaxed:
            obj = {**obj, "relaxed": True}
        return DomainSpec.from_json(obj)
    if not args.kind:
        raise UsageError("either --spec or --kind is required")
    need = {"I": ("m", "n"), "II": ("p",), "III": ("q",), "IV": ("N",)}[args.kind]
    missing = [f"--{d}" for d in need if getattr(args, d) is None]
    if missing:
        raise UsageError(f"kind {args.kind} needs {' '.join(missing)}")
    dims = tuple(getattr(args, d) for d in need)
    if args.kind == "IV":
        return DomainSpec("IV", dims, profile=args.profile or "bergman", relaxed=args.relaxed)
    t = 0.0 if args.t is None else args.t
    k = 2 if args.k is None else args.k
    return DomainSpec(args.kind, dims, t=t, k=k, relaxed=args.relaxed)


def _default_seed() -> int:
    env = os.environ.get("FINSLER_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"FINSLER_SEED must be an integer, got {env!r}") from None


def named_tangent(spec: DomainSpec, name: str, seed: int) -> np.ndarray:
    shape = spec.shape
    V = np.zeros(shape, dtype=complex)
    if name == "random":
        return sample_tangent(spec, seed)
    if name == "e11":
        if spec.kind == "III":
            V[0, 1], V[1, 0] = 1, -1
        else:
            V[0, 0] = 1
        return V
    if name == "identity":
        if spec.kind == "I":
            for i in range(shape[0]):
                V[i, i] = 1
            return V
        if spec.kind == "II":
            return np.eye(shape[0], dtype=complex)
        if spec.kind == "III":
            return curv.block_V0(shape[0])
    raise UsageError(f"--tangent: {name!r} is not available for kind {spec.kind}")


def _point(args, spec: DomainSpec, flag_z: str = "Z") -> np.ndarray:
    text = getattr(args, flag_z)
    if args.origin or text is None:
        return np.zeros(spec.shape, dtype=complex)
    return matrix_from_json(_load_json_arg(text, f"--{flag_z}"))


def _tangent(args, spec, which: str, seed: int):
    text = getattr(args, which)
    if text is not None:
        return matrix_from_json(_load_json_arg(text, f"--{which}"))
    name = args.tangent if which == "V" else args.tangent_w
    if name is None:
        if which == "W":
            return None
        raise UsageError("a tangent is required: pass --V or --tangent")
    return named_tangent(spec, name, seed + (0 if which == "V" else 1))


def cmd_eval(args) -> int:
    spec = resolve_spec(args)
    seed = args.seed if args.seed is not None else _default_seed()
    Z = _point(args, spec)
    V = _tangent(args, spec, "V", seed)
    out = metric(spec, Z, V).to_json()
    out["bergman"] = bergman(spec, Z, V)
    out["spec"] = spec.to_json()
    _emit(out)
    return EXIT_OK


def cmd_curvature(args) -> int:
    spec = resolve_spec(args)
    seed = args.seed if args.seed is not None else _default_seed()
    Z = _point(args, spec)
    V = _tangent(args, spec, "V", seed)
    W = _tangent(args, spec, "W", seed)
    rep = curv.curvature_report(spec, Z, V, W, oracle=args.oracle, h=args.fd_step, seed=seed)
    out = rep.to_json()
    out["spec"] = spec.to_json()
    _emit(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = resolve_spec(args)
    seed = args.seed if args.seed is not None else _default_seed()
    rep = run_suite(args.suite, spec, args.samples, seed, args.tol, args.fd_step, args.jobs, args.timing)
    out = rep.to_json()
    if not args.full:
        failed = [c for c in out["checks"] if not c["pass"]]
        out["checks"] = out["checks"] if len(out["checks"]) <= 20 else failed
        out["checks_truncated"] = len(out["checks"]) != rep.samples
    _emit(out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_sample(args) -> int:
    spec = resolve_spec(args)
    seed = args.seed if args.seed is not None else _default_seed()
    fn = sample_point if args.what == "point" else sample_tangent
    items = [matrix_to_json(fn(spec, seed + i)) for i in range(args.count)]
    _emit({"spec": spec.to_json(), "what": args.what, "seed": seed, "items": items})
    return EXIT_OK


def cmd_bounds(args) -> int:
    spec = resolve_spec(args)
    out = {
        "spec": spec.to_json(),
        "sectional": curv.bounds(spec).to_json(),
        "bisectional": curv.bisectional_bounds(spec).to_json(),
    }
    if spec.kind == "IV":
        out["bisectional"]["requires"] = "phi' >= 0 on [0,1]"
    _emit(out)
    return EXIT_OK


def cmd_validate_phi(args) -> int:
    if args.coeffs:
        profile = get_profile({"name": args.profile or "polynomial", "coeffs": args.coeffs})
    else:
        profile = get_profile(args.profile or "bergman")
    rep = validate_phi(profile, grid=args.grid)
    out = rep.to_json()
    out["profile"] = profile.to_json()
    _emit(out)
    return EXIT_OK if rep.valid else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="finsler", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, domain=True, help=None):
        sp = sub.add_parser(name, help=help)
        if domain:
            _domain_flags(sp)
        sp.add_argument("--seed", type=int, default=None)
        sp.set_defaults(fn=fn)
        return sp

    def tangents(sp, second=False):
        sp.add_argument("--origin", action="store_true", help="evaluate at Z = 0")
        sp.add_argument("--Z", help="base point as matrix JSON")
        sp.add_argument("--V", help="tangent as matrix JSON")
        sp.add_argument("--tangent", choices=["identity", "e11", "random"])
        if second:
            sp.add_argument("--W", help="second tangent as matrix JSON")
            sp.add_argument("--tangent-w", dest="tangent_w", choices=["identity", "e11", "random"])

    sp = add("eval", cmd_eval, help="metric value at (Z; V)")
    tangents(sp)
    sp = add("curvature", cmd_curvature, help="sectional / bisectional curvature report")
    tangents(sp, second=True)
    sp.add_argument("--oracle", action="store_true", help="also run the finite-difference oracle")
    sp.add_argument("--fd-step", type=float, default=DEFAULT.fd_step)
    sp = add("verify", cmd_verify, help="run a verification suite")
    sp.add_argument("--suite", required=True, choices=SUITES)
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--fd-step", type=float, default=DEFAULT.fd_step)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    sp.add_argument("--full", action="store_true", help="list every check")
    sp = add("sample", cmd_sample, help="sample interior points or tangents")
    sp.add_argument("--what", choices=["point", "tangent"], default="point")
    sp.add_argument("--count", type=int, default=1)
    add("bounds", cmd_bounds, help="curvature bound constants")
    sp = add("validate-phi", cmd_validate_phi, domain=False, help="certify a kind-IV profile")
    sp.add_argument("--profile", default=None)
    sp.add_argument("--coeffs", type=float, nargs="+", help="polynomial profile, ascending coefficients")
    sp.add_argument("--grid", type=int, default=DEFAULT.phi_grid)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("a subcommand is required")
        return args.fn(args)
    except UsageError as exc:
        return _error(UsageError.code, str(exc))
    except FinslerError as exc:
        return _error(exc.code, str(exc))
    except (OSError, ValueError) as exc:
        return _error("BAD_INPUT", str(exc))


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
