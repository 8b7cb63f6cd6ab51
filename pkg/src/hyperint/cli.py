"""Command-line driver.

Exit codes: 0 on success (CERTIFIED, all checks passing), 1 on a negative
outcome (NOT-CERTIFIED, a failed check), 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Sequence

import jsonschema

from .arith import INF, is_prime, ord_p
from .classical import ClassicalInstance, classical_to_aset, cross_validate, rho_min
from .dwork import padic_selftest
from .dynamics import ParameterState, orbit
from .errors import HyperintError
from .geometry import ASet, in_shifted_lattice
from .series import certify, expand_F

SCHEMA_VERSION = "hyperint/1"
DEFAULT_WINDOW = 10
DEFAULT_PRECISION = 12
EXACT_INT = 2**53


class UsageError(Exception):
    pass


def load_schema(name: str) -> dict:
    text = resources.files("hyperint").joinpath("schemas", f"{name}.schema.json").read_text("utf-8")
    return json.loads(text)


# --------------------------------------------------------------------------
# serialization


def q(x) -> str:
    return str(Fraction(x))


def qvec(xs) -> list[str]:
    return [q(x) for x in xs]


def bigint(x) -> int | str:
    if x == INF:
        return "inf"
    x = int(x)
    return x if abs(x) < EXACT_INT else str(x)


def parse_rational(x) -> Fraction:
    try:
        return Fraction(x) if isinstance(x, (int, str)) else Fraction(str(x))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational: {x!r}") from exc


def parse_ratlist(text: str) -> list[Fraction]:
    return [parse_rational(t.strip()) for t in text.split(",") if t.strip()]


def parse_primes(text: str) -> list[int]:
    try:
        ps = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad prime list: {text!r}") from exc
    for p in ps:
        if not is_prime(p):
            raise UsageError(f"{p} is not prime")
    return ps


def default_primes(D: int, h: int, v: Sequence[Fraction], count: int = 4) -> list[int]:
    out = []
    p = 2
    while len(out) < count:
        if is_prime(p) and p % D == h % D and all(x.denominator % p for x in v):
            out.append(p)
        p += 1
    return out


# --------------------------------------------------------------------------
# instances


@dataclass
class Instance:
    kind: str
    A: ASet
    state: ParameterState
    classical: ClassicalInstance | None
    options: dict[str, Any]


def load_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read instance {path}: {exc}") from exc
    try:
        jsonschema.validate(data, load_schema("instance"))
    except jsonschema.ValidationError as exc:
        raise UsageError(f"instance does not match schema: {exc.message}") from exc
    opts = {k: data[k] for k in ("primes", "window", "precision", "rho_mode") if k in data}
    D, h = data["D"], data["h"]
    if data["kind"] == "classical":
        C = data["C"]
        theta = [parse_rational(t) for t in data["theta"]]
        if "n" in data and data["n"] != len(C):
            raise UsageError("n does not match the number of rows of C")
        if "m" in data and any(data["m"] != len(r) for r in C):
            raise UsageError("m does not match the number of columns of C")
        inst = ClassicalInstance.make(C, theta, D, h, normalize=data.get("normalize", False))
        A, state = classical_to_aset(inst)
        return Instance("classical", A, state, inst, opts)
    vectors = data["vectors"]
    if "N" in data and data["N"] != len(vectors):
        raise UsageError("N does not match the number of vectors")
    if "n" in data and any(data["n"] != len(a) for a in vectors):
        raise UsageError("n does not match the vector length")
    w = [parse_rational(x) for x in data["w"]] if "w" in data else None
    try:
        A = ASet.from_vectors(vectors, w)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    v = [parse_rational(x) for x in data["v"]]
    state = ParameterState(tuple(v), D, h, A)
    return Instance("aset", A, state, None, opts)


# --------------------------------------------------------------------------
# report fragments


def _orbit_json(orb) -> list[dict]:
    return [{"index": i, "v": qvec(s.v), "beta": qvec(s.beta)} for i, s in enumerate(orb)]


def _condition_json(i: int, c) -> dict:
    out = {
        "index": i,
        "holds": c.holds,
        "face": sorted(c.face.generators),
        "beta_weight": q(c.beta_weight),
        "levels": qvec(c.levels),
    }
    if c.counterexample is not None:
        out["counterexample"] = {"point": qvec(c.counterexample), "weight": q(c.counterexample_weight)}
    return out


def _integrality_json(key, r, series_terms, limit: int = 5) -> dict:
    p, i = key
    return {
        "p": p,
        "index": i,
        "min_ord": bigint(r.min_ord),
        "terms_checked": r.terms_checked,
        "passed": r.passed,
        "offenders": [
            {"l": list(l), "ord": o, "coefficient": q(series_terms[l])} for l, o in r.offenders[:limit]
        ],
    }


def _certify_report(inst: Instance, window: int, primes: list[int]) -> dict:
    st = inst.state
    bundle = certify(inst.A, st.v, st.D, st.h, primes, window)
    series = {i: expand_F(s.beta, s, inst.A, window).terms for i, s in enumerate(bundle.orbit)} if primes else {}
    return {
        "verdict": bundle.verdict,
        "window": window,
        "primes": primes,
        "a": bundle.orbit.a,
        "orbit": _orbit_json(bundle.orbit),
        "conditions": [_condition_json(i, c) for i, c in enumerate(bundle.conditions)],
        "integrality": [
            _integrality_json(k, r, series[k[1]]) for k, r in sorted(bundle.integrality.items())
        ],
    }


def _primes_for(args, inst: Instance) -> list[int]:
    if args.primes is not None:
        return parse_primes(args.primes)
    if "primes" in inst.options:
        return list(inst.options["primes"])
    return default_primes(inst.state.D, inst.state.h, inst.state.v)


def _window_for(args, inst: Instance) -> int:
    if args.window is not None:
        return args.window
    return inst.options.get("window", DEFAULT_WINDOW)


# --------------------------------------------------------------------------
# commands


def cmd_certify(args) -> tuple[dict, int]:
    inst = load_instance(args.instance)
    rep = _certify_report(inst, _window_for(args, inst), _primes_for(args, inst))
    ok = rep["verdict"] == "CERTIFIED"
    return rep, 0 if ok else 1


def cmd_orbit(args) -> tuple[dict, int]:
    inst = load_instance(args.instance)
    st = inst.state
    orb = orbit(st.v, st.D, st.h, inst.A)
    return {"a": orb.a, "orbit": _orbit_json(orb)}, 0


def cmd_expand(args) -> tuple[dict, int]:
    inst = load_instance(args.instance)
    st = inst.state
    u = tuple(parse_ratlist(args.u)) if args.u else st.beta
    if len(u) != inst.A.n:
        raise UsageError(f"u must have {inst.A.n} entries")
    in_shifted_lattice(u, st.beta, inst.A)
    window = _window_for(args, inst)
    primes = _primes_for(args, inst)
    p = primes[0] if primes else None
    ser = expand_F(u, st, inst.A, window)
    terms = []
    ok = True
    for l, c in sorted(ser.terms.items()):
        row = {"l": list(l), "coefficient": q(c)}
        if p is not None:
            o = ord_p(c, p)
            ok = ok and o >= 0
            row["ord"] = bigint(o)
        terms.append(row)
    rep = {"window": window, "expansion": {"u": qvec(u), "p": p, "terms": terms}}
    return rep, 0 if ok else 1


def cmd_padic_selftest(args) -> tuple[dict, int]:
    primes = parse_primes(args.primes) if args.primes is not None else [2, 3, 5, 7]
    M = args.precision if args.precision is not None else DEFAULT_PRECISION
    values = parse_ratlist(args.values) if args.values else None
    out = []
    for p in primes:
        vs = None if values is None else [v for v in values if v.denominator % p]
        r = padic_selftest(p, M, vs)
        slack = {}
        eig = [c.slack for e in r.eigen for c in e.checks if c.achieved != INF]
        if eig:
            slack["eigen-relations"] = q(min(eig))
        hf = [c.slack for c in r.h_factorial if c.achieved != INF]
        if hf:
            slack["h-factorial"] = q(min(hf))
        out.append(
            {
                "p": p,
                "M": M,
                "passed": r.passed,
                "sections": r.sections,
                "pi0": {
                    "ord": r.pi0["ord"],
                    "defining-congruence": r.pi0["defining-congruence"],
                    "residual": r.pi0["residual"],
                    "residual_val": bigint(r.pi0["residual_val"]),
                    "newton_steps": r.pi0["newton_steps"],
                },
                "min_slack": slack,
                "eigen": [
                    {
                        "relation": e.name,
                        "v": q(e.v),
                        "v_out": q(e.v_out),
                        "determined": e.determined,
                        "passed": e.passed,
                        "extra": dict(sorted(e.extra.items())),
                    }
                    for e in r.eigen
                ],
            }
        )
    return {"padic": out}, 0 if all(x["passed"] for x in out) else 1


def cmd_classical(args) -> tuple[dict, int]:
    inst = load_instance(args.instance)
    if inst.classical is None:
        raise UsageError("the classical command needs an instance of kind 'classical'")
    mode = args.rho_mode or inst.options.get("rho_mode", "exact")
    checks = cross_validate(inst.classical, mode)
    xv = []
    for c in checks:
        r = rho_min(c.theta, inst.classical.C, mode, inst.classical.D)
        xv.append(
            {
                "index": c.index,
                "theta": qvec(c.theta),
                "rho_min": c.rho_min,
                "rho_witness": qvec(r.witness),
                "rho_method": r.method,
                "weight_condition": c.weight_condition,
                "agree": c.agree,
            }
        )
    rep = _certify_report(inst, _window_for(args, inst), _primes_for(args, inst))
    rep["cross_validation"] = xv
    ok = rep["verdict"] == "CERTIFIED" and all(c.agree for c in checks)
    return rep, 0 if ok else 1


# --------------------------------------------------------------------------
# human summary


def summarize(rep: dict) -> str:
    lines = [f"{rep['command']}: {rep['status']}"]
    if "error" in rep:
        lines.append(f"  error: {rep['error']}")
    if "verdict" in rep:
        lines.append(f"  verdict: {rep['verdict']}")
    if "orbit" in rep:
        lines.append(f"  orbit length a = {rep['a']}")
        for s in rep["orbit"]:
            lines.append(f"  [{s['index']}] v = ({', '.join(s['v'])})  beta = ({', '.join(s['beta'])})")
    for c in rep.get("conditions", []):
        mark = "holds" if c["holds"] else "FAILS"
        lines.append(f"  condition [{c['index']}]: {mark}")
        if "counterexample" in c:
            ce = c["counterexample"]
            lines.append(f"    counterexample ({', '.join(ce['point'])}) of weight {ce['weight']}")
    for r in rep.get("integrality", []):
        lines.append(
            f"  p={r['p']} index {r['index']}: min ord {r['min_ord']} over {r['terms_checked']} terms"
        )
    if "expansion" in rep:
        e = rep["expansion"]
        lines.append(f"  u = ({', '.join(e['u'])}), p = {e['p']}")
        for t in e["terms"]:
            o = f"  ord {t['ord']}" if "ord" in t else ""
            lines.append(f"    l = {tuple(t['l'])}: {t['coefficient']}{o}")
    for c in rep.get("cross_validation", []):
        lines.append(
            f"  rho [{c['index']}] theta = ({', '.join(c['theta'])}): min {c['rho_min']} "
            f"({c['rho_method']}), weight condition {c['weight_condition']}, agree {c['agree']}"
        )
    for r in rep.get("padic", []):
        lines.append(f"  p={r['p']} M={r['M']}: {'PASS' if r['passed'] else 'FAIL'}")
        for name, ok in r["sections"].items():
            lines.append(f"    {name}: {'PASS' if ok else 'FAIL'}")
        for name, s in r["min_slack"].items():
            lines.append(f"    min slack {name}: {s} pi-units beyond the asserted precision")
    return "\n".join(lines)


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperint", description="p-integrality certificates for A-hypergeometric series")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--window", type=int, help=f"truncation window B (default {DEFAULT_WINDOW})")
    common.add_argument("--primes", help="comma-separated primes")
    common.add_argument("--precision", type=int, help=f"p-adic working precision M (default {DEFAULT_PRECISION})")
    common.add_argument("--json", metavar="OUT", help="write the JSON report to OUT ('-' for stdout)")
    common.add_argument("--quiet", action="store_true", help="suppress the human-readable summary")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("certify", parents=[common], help="weight condition along the orbit plus empirical check")
    p.add_argument("instance")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("orbit", parents=[common], help="print the Frobenius orbit of the parameters")
    p.add_argument("instance")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("expand", parents=[common], help="dump a truncation with ord_p of each coefficient")
    p.add_argument("instance")
    p.add_argument("--u", help="comma-separated point of beta + ZA (default beta)")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("padic-selftest", parents=[common], help="run the p-adic verification suite")
    p.add_argument("--values", help="comma-separated parameters v for the eigen-relation checks")
    p.set_defaults(func=cmd_padic_selftest)

    p = sub.add_parser("classical", parents=[common], help="classical instance: step function against lattice route")
    p.add_argument("instance")
    p.add_argument("--rho-mode", choices=["exact", "grid"])
    p.set_defaults(func=cmd_classical)
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[dict, int]:
    args = build_parser().parse_args(argv)
    rep: dict[str, Any] = {"schema": SCHEMA_VERSION, "command": args.command}
    try:
        body, code = args.func(args)
        rep.update(body)
        rep["status"] = "ok" if code == 0 else "fail"
    except (UsageError, HyperintError, ValueError) as exc:
        code = 2
        rep["status"] = "error"
        rep["error"] = f"{type(exc).__name__}: {exc}"
    jsonschema.validate(rep, load_schema("report"))
    rep = {k: rep[k] for k in sorted(rep)}
    text = json.dumps(rep, indent=2, sort_keys=False) + "\n"
    if args.json == "-":
        sys.stdout.write(text)
    elif args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    if not args.quiet:
        out = sys.stderr if args.json == "-" else sys.stdout
        print(summarize(rep), file=out)
    return rep, code


def main(argv: Sequence[str] | None = None) -> int:
    return run(argv)[1]
