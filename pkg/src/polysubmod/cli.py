"""Command-line front end: every command prints one JSON document.

Exit codes: 0 decided, 1 input error, 2 undecided, 3 certificate failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from typing import Sequence

from . import __version__
from .equivalence import (
    Verdict,
    modulus_equivalent,
    monomial_orbit_exponent,
    stable_free_part,
    unitarily_equivalent,
    unitarily_equivalent_principal,
)
from .errors import (
    CapabilityWarning,
    PolySubmodError,
    PolySyntaxError,
    UndecidedStability,
    VariableIndexError,
)
from .factor import FactoredPoly, factor
from .ideal import BeurlingForm, IdealGens, beurling_form, gcd_many, groebner
from .parser import format_coefficient, parse, parse_exponent
from .poly_core import Point, Polynomial
from .stability import DEFAULT_EPS, Status, has_zero_in_open_polydisk
from .weights import (
    WeightSignature,
    certificate_check,
    inner_product,
    kernel_eval,
    mc_norm_estimate,
    norm_sq,
    weight,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNDECIDED = 2
EXIT_CERT = 3


class InputError(Exception):
    """Bad command-line input; the message names the offending argument."""


# ---------------------------------------------------------------------------
# argument decoding
# ---------------------------------------------------------------------------


def _poly(text: str, what: str) -> Polynomial:
    try:
        return parse(text)
    except (PolySyntaxError, VariableIndexError) as exc:
        raise InputError(f"{what} {text!r}: {exc}") from exc


def _poly_set(text: str, what: str) -> list[Polynomial]:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise InputError(f"{what} {text!r}: expected a generator set such as '{{z1^2, z2}}'")
    inner = body[1:-1].strip()
    if not inner:
        return []
    return [_poly(part, f"{what} element {k + 1}") for k, part in enumerate(inner.split(","))]


def _load_json_arg(value: str, flag: str):
    try:
        if os.path.exists(value):
            with open(value, encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(value)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{flag}: cannot read JSON ({exc})") from exc


def _signature(args) -> WeightSignature:
    if args.sig is None:
        return WeightSignature()
    data = _load_json_arg(args.sig, "--sig")
    if not isinstance(data, dict):
        raise InputError("--sig: expected an object with default_beta and overrides")
    try:
        return WeightSignature.from_json(data)
    except (ValueError, ZeroDivisionError, PolySubmodError) as exc:
        raise InputError(f"--sig: {exc}") from exc


def _trusted(args, index: int, target: Polynomial) -> FactoredPoly | None:
    files = args.trusted_factors or []
    if index >= len(files):
        return None
    data = _load_json_arg(files[index], f"--trusted-factors #{index + 1}")
    if not isinstance(data, list):
        raise InputError(f"--trusted-factors #{index + 1}: expected a list of {{poly, mult}} objects")
    pairs = []
    for k, item in enumerate(data):
        try:
            pairs.append((_poly(item["poly"], f"--trusted-factors #{index + 1} entry {k + 1}"), int(item.get("mult", 1))))
        except (KeyError, TypeError) as exc:
            raise InputError(f"--trusted-factors #{index + 1} entry {k + 1}: missing 'poly'") from exc
    return factor(target, mode="trusted_input", trusted=pairs)


def _complex_value(v, what: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        p = _poly(v, what)
        if not p.is_constant():
            raise InputError(f"{what}: expected a constant")
        return complex(p.constant_term())
    raise InputError(f"{what}: cannot read coordinate {v!r}")


def _point(text: str, what: str) -> Point:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON point ({exc})") from exc
    if isinstance(data, list):
        items = enumerate(data, start=1)
    elif isinstance(data, dict):
        items = data.items()
    else:
        raise InputError(f"{what}: expected a JSON list or object")
    coords = {}
    for k, v in items:
        n = int(k)
        if n < 1:
            raise InputError(f"{what}: variable index must be positive")
        coords[n] = _complex_value(v, f"{what} coordinate {n}")
    return Point(coords)


def _cx(z: complex) -> list[float]:
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_norm(args) -> tuple[dict, int]:
    p = _poly(args.p, "argument p")
    n = norm_sq(p, _signature(args))
    return {"norm_sq": str(n), "approx": float(n)}, EXIT_OK


def cmd_inner(args) -> tuple[dict, int]:
    p, q = _poly(args.p, "argument p"), _poly(args.q, "argument q")
    v = inner_product(p, q, _signature(args))
    return {"exact": format_coefficient(v), "approx": _cx(complex(v))}, EXIT_OK


def cmd_weight(args) -> tuple[dict, int]:
    try:
        alpha = parse_exponent(args.alpha)
    except PolySyntaxError as exc:
        raise InputError(f"argument alpha {args.alpha!r}: {exc}") from exc
    w = weight(alpha, _signature(args))
    return {"exact": str(w.exact), "approx": w.approx}, EXIT_OK


def cmd_kernel(args) -> tuple[dict, int]:
    lam, zeta = _point(args.lam, "argument lambda"), _point(args.zeta, "argument zeta")
    v = kernel_eval(lam, zeta, _signature(args))
    return {"value": _cx(v)}, EXIT_OK


def cmd_beurling(args) -> tuple[dict, int]:
    gens = IdealGens.of(_poly(g, f"generator {k + 1}") for k, g in enumerate(args.gens))
    if gens.is_zero():
        raise InputError("beurling: at least one nonzero generator is required")
    b = beurling_form(gens)
    return {"gcd_part": str(b.gcd_part), "cofactor": [str(g) for g in b.cofactor]}, EXIT_OK


def cmd_groebner(args) -> tuple[dict, int]:
    gens = IdealGens.of(_poly(g, f"generator {k + 1}") for k, g in enumerate(args.gens))
    return {"basis": [str(g) for g in groebner(gens)]}, EXIT_OK


def cmd_gcd(args) -> tuple[dict, int]:
    ps = [_poly(g, f"argument {k + 1}") for k, g in enumerate(args.polys)]
    return {"gcd": str(gcd_many(ps))}, EXIT_OK


def _factored_json(fp: FactoredPoly) -> dict:
    return {
        "unit": format_coefficient(fp.unit),
        "factors": [{"poly": str(f.poly), "mult": f.mult, "certified": f.certified} for f in fp.factors],
    }


def cmd_factor(args) -> tuple[dict, int]:
    p = _poly(args.p, "argument p")
    fp = _trusted(args, 0, p)
    if fp is None:
        fp = factor(p)
    return _factored_json(fp), EXIT_OK


def cmd_pstar(args) -> tuple[dict, int]:
    p = _poly(args.p, "argument p")
    try:
        p_star, stable = stable_free_part(p, _trusted(args, 0, p), args.eps, args.seed)
    except UndecidedStability as exc:
        return {"status": "Undecided", "factor": str(exc.factor), "reason": exc.reason}, EXIT_UNDECIDED
    return {"p_star": str(p_star), "stable_part": str(stable)}, EXIT_OK


def cmd_stable(args) -> tuple[dict, int]:
    p = _poly(args.p, "argument p")
    v = has_zero_in_open_polydisk(p, eps=args.eps, seed=args.seed)
    out = {
        "status": v.status.value,
        "witness": {str(k): _cx(z) for k, z in v.witness.coords.items()} if v.witness else None,
        "isolation_radius": v.isolation_radius,
        "min_modulus_bound": v.min_modulus_bound,
        "method": v.method,
    }
    return out, EXIT_UNDECIDED if v.status is Status.UNDECIDED else EXIT_OK


def _verdict_exit(status: Verdict) -> int:
    return EXIT_UNDECIDED if status is Verdict.UNDECIDED else EXIT_OK


def cmd_modeq(args) -> tuple[dict, int]:
    r, s = _poly(args.r, "argument r"), _poly(args.s, "argument s")
    v = modulus_equivalent(r, s, args.eps, args.seed, _trusted(args, 0, r), _trusted(args, 1, s))
    return v.to_json(), _verdict_exit(v.status)


def _verify(args, v, sig) -> tuple[dict, int]:
    out = v.to_json()
    code = _verdict_exit(v.status)
    if args.verify and v.yes:
        report = certificate_check(v.certificate, sig, trials=args.trials, seed=args.seed)
        out["verification"] = {"ok": report.ok, "witness": report.witness}
        if not report.ok:
            code = EXIT_CERT
    return out, code


def cmd_equiv(args) -> tuple[dict, int]:
    sig = _signature(args)
    p, q = _poly(args.p, "argument p"), _poly(args.q, "argument q")
    K = IdealGens.of(_poly_set(args.K, "argument K"))
    L = IdealGens.of(_poly_set(args.L, "argument L"))
    M, N = BeurlingForm(p, K), BeurlingForm(q, L)
    v = unitarily_equivalent(M, N, sig, args.eps, args.seed, _trusted(args, 0, p), _trusted(args, 1, q))
    return _verify(args, v, sig)


def cmd_equiv_principal(args) -> tuple[dict, int]:
    sig = _signature(args)
    p, q = _poly(args.p, "argument p"), _poly(args.q, "argument q")
    v = unitarily_equivalent_principal(p, q, sig, args.eps, args.seed, _trusted(args, 0, p), _trusted(args, 1, q))
    return _verify(args, v, sig)


def cmd_orbit_exponent(args) -> tuple[dict, int]:
    try:
        gamma = parse_exponent(args.gamma)
    except PolySyntaxError as exc:
        raise InputError(f"argument gamma {args.gamma!r}: {exc}") from exc
    sig = _signature(args)
    g = monomial_orbit_exponent(gamma, sig)
    # report one entry per listed coordinate, trailing zeros included
    listed = args.gamma.split("=", 1)[-1].strip().strip("()[]")
    width = max(len(listed.split(",")) if listed else 0, max((n for n, _ in gamma), default=0))
    dense = [dict(g).get(k, 0) for k in range(1, width + 1)]
    return {"gamma_tilde": dense, "monomial": str(Polynomial.monomial(g))}, EXIT_OK


def cmd_mc_check(args) -> tuple[dict, int]:
    p = _poly(args.p, "argument p")
    sig = _signature(args)
    est, se = mc_norm_estimate(p, sig, args.samples, args.seed)
    exact = norm_sq(p, sig)
    ok = abs(est - float(exact)) <= 3 * se if se > 0 else est == float(exact)
    return {
        "estimate": est,
        "std_error": se,
        "exact": str(exact),
        "within_3_std_errors": bool(ok),
    }, EXIT_OK


def cmd_cert_check(args) -> tuple[dict, int]:
    sig = _signature(args)
    pt, qt = _poly(args.p_tilde, "argument p_tilde"), _poly(args.q_tilde, "argument q_tilde")
    G = IdealGens.of(_poly_set(args.G, "argument G"))
    report = certificate_check((pt, qt, G), sig, trials=args.trials, seed=args.seed)
    out = {
        "ok": report.ok,
        "witness": report.witness,
        "hardy_precondition": report.hardy_precondition,
        "checks": report.checks,
    }
    return out, EXIT_OK if report.ok else EXIT_CERT


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--sig", help="weight signature: JSON file or inline JSON {default_beta, overrides}")
    common.add_argument("--seed", type=int, default=None, help="seed for randomized subroutines (default 0)")
    common.add_argument("--eps", type=float, default=DEFAULT_EPS, help="resolution floor of the stability oracle")
    common.add_argument(
        "--trusted-factors",
        action="append",
        metavar="FILE",
        help="JSON list of {poly, mult}; repeat once per polynomial argument",
    )
    common.add_argument("--json", action="store_true", help="compact single-line JSON output")
    common.add_argument("--verify", action="store_true", help="re-check Yes certificates (exit 3 on failure)")
    common.add_argument("--deterministic", action="store_true", help="require an explicit --seed")
    common.add_argument("--trials", type=int, default=20, help="random ideal elements per certificate check")
    common.add_argument("--samples", type=int, default=100_000, help="Monte-Carlo sample count")

    parser = argparse.ArgumentParser(prog="polysubmod", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, *positionals, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        for pos in positionals:
            if isinstance(pos, tuple):
                sp.add_argument(pos[0], **pos[1])
            else:
                sp.add_argument(pos)
        sp.set_defaults(func=func)
        return sp

    add("norm", cmd_norm, "p", help="exact squared norm")
    add("inner", cmd_inner, "p", "q", help="exact inner product")
    add("weight", cmd_weight, "alpha", help="monomial weight, e.g. 'alpha=1,2'")
    add("kernel", cmd_kernel, ("lam", {"metavar": "lambda"}), "zeta", help="reproducing kernel value")
    add("beurling", cmd_beurling, ("gens", {"nargs": "+"}), help="Beurling form of an ideal")
    add("groebner", cmd_groebner, ("gens", {"nargs": "+"}), help="reduced Groebner basis")
    add("gcd", cmd_gcd, ("polys", {"nargs": "+"}), help="monic gcd")
    add("factor", cmd_factor, "p", help="irreducible factorization over Q(i)")
    add("pstar", cmd_pstar, "p", help="stable-free part")
    add("stable", cmd_stable, "p", help="zeros in the open polydisk")
    add("modeq", cmd_modeq, "r", "s", help="modulus equivalence")
    add("equiv", cmd_equiv, "p", "K", "q", "L", help="unitary equivalence of Beurling forms")
    add("equiv-principal", cmd_equiv_principal, "p", "q", help="unitary equivalence of [p] and [q]")
    add("orbit-exponent", cmd_orbit_exponent, "gamma", help="exponent of the monomial orbit")
    add("mc-check", cmd_mc_check, "p", help="Monte-Carlo norm against the exact norm")
    add("cert-check", cmd_cert_check, "p_tilde", "q_tilde", "G", help="verify an equivalence certificate")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    if args.deterministic and args.seed is None:
        print("polysubmod: error: --deterministic requires an explicit --seed", file=sys.stderr)
        return EXIT_INPUT
    if args.seed is None:
        args.seed = 0
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", CapabilityWarning)
            out, code = args.func(args)
        notes = [str(w.message) for w in caught if issubclass(w.category, CapabilityWarning)]
        if notes and isinstance(out, dict):
            out.setdefault("warnings", notes)
    except InputError as exc:
        print(f"polysubmod {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PolySubmodError as exc:
        print(f"polysubmod {args.command}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = json.dumps(out, separators=(",", ":")) if args.json else json.dumps(out, indent=2)
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
