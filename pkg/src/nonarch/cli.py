"""Command-line experiment runner.

Every subcommand writes one deterministic report (schema ``nonarch/1``) as
JSON or CSV.  Exit codes: 0 all checked properties hold, 1 a property
failed (the first counterexample is in the report and can be re-run with
``--replay``), 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .calculus import cn_certificate, holder_scan, not_cn1_witness, superpoly_decay
from .errors import NonarchError, PrecisionError, UsageError
from .expseq import parse_seq
from .ffield import default_field
from .group import GroupSession
from .laurent import Series, format_series, parse_series
from .morphisms import SeriesMap
from .willis import (Lattice, MatrixMap, calibration_compare, lattice_index,
                     scale, tidy_parts)

SCHEMA = "nonarch/1"

MAP_NAMES = ("beta", "alpha", "alpha-inv", "bar-beta", "bar-alpha", "bar-alpha-inv",
             "tau", "tau-inv", "identity")


def _field(args):
    modulus = None
    if args.modulus:
        modulus = tuple(int(c) for c in args.modulus.split(","))
    return default_field(args.q, modulus)


def _series_map(name: str, seq) -> SeriesMap:
    kind = name.replace("-", "_")
    if kind in ("tau", "tau_inv", "identity"):
        return SeriesMap(kind)
    if name not in MAP_NAMES:
        raise UsageError(f"unknown map {name!r}")
    return SeriesMap(kind, seq)


# -- subcommands ---------------------------------------------------------------
# each returns (report dict, csv rows, ok, counterexample or None)

def cmd_holder(args):
    F = _field(args)
    f = _series_map(args.map, parse_seq(args.seq))
    rep = holder_scan(f, F, args.vmin, args.vmax, sampling=args.sampling,
                      budget=args.budget, seed=args.seed, prec=args.prec)
    out = rep.to_json()
    bad = rep.violations[0] if rep.violations else None
    cex = None if bad is None else {"vmin": bad["v"], "vmax": bad["v"]}
    return out, rep.rows, bad is None, cex


def cmd_cn_cert(args):
    F = _field(args)
    f = _series_map(args.map, parse_seq(args.seq))
    rep = holder_scan(f, F, args.vmin, args.vmax, prec=args.prec)
    rows = []
    consistent = True
    for n in range(args.n, args.n + 1 + args.extra):
        cn = cn_certificate(f, n, rep)
        wit = not_cn1_witness(f, n, rep)
        nxt = cn_certificate(f, n + 1, rep)
        ok = not (nxt.granted and wit.granted)
        consistent &= ok
        rows.append({"n": n, "cn": cn.to_json(F.q), "not_cn1": wit.to_json(F.q),
                     "cn_next": nxt.granted, "consistent": ok})
    out = {"map": str(f), "q": F.q, "holder": rep.to_json()["cert"], "results": rows}
    flat = [{"n": r["n"], "cn": r["cn"]["granted"], "not_cn1": r["not_cn1"]["granted"],
             "cn_next": r["cn_next"], "consistent": r["consistent"]} for r in rows]
    cex = None
    if not consistent:
        first = next(r for r in rows if not r["consistent"])
        cex = {"n": first["n"], "extra": 0}
    return out, flat, consistent, cex


def cmd_non_analytic(args):
    F = _field(args)
    f = _series_map(args.map, parse_seq(args.seq))
    rep = superpoly_decay(f, F, args.nmax, args.vmin, args.vmax)
    out = rep.to_json()
    cex = None
    if not rep.obstruction:
        failing = [n for n, d in rep.decays.items() if not d]
        out["first_failure"] = {"n": failing[0]} if failing else {"injective": rep.injective}
        cex = {"nmax": failing[0]} if failing else {}
    return out, out["rows"], rep.obstruction, cex


def cmd_invert_alpha(args):
    F = _field(args)
    seq = parse_seq(args.seq)
    if args.z is None:
        raise UsageError("invert-alpha needs --z")
    z = parse_series(args.z, F)
    bar = z.val is not None and z.val < 0
    alpha = SeriesMap.bar_alpha(seq) if bar else SeriesMap.alpha(seq)
    inv = alpha.inverse()
    x = inv(z, args.prec)
    back = alpha(x)
    roundtrip = back.congruent(z) if z.prec is not None or x.prec is not None else back == z
    out = {"map": str(inv), "q": F.q, "z": format_series(z), "result": format_series(x),
           "alpha_of_result": format_series(back), "roundtrip": roundtrip}
    return out, [{"z": out["z"], "result": out["result"], "roundtrip": roundtrip}], roundtrip, \
        None if roundtrip else {"z": args.z}


def _linear_map(name: str, F, dstar: int) -> tuple[MatrixMap, Lattice]:
    if name in ("tau", "tau-inv"):
        A = MatrixMap.from_series_map(SeriesMap(name.replace("-", "_")), F)
        return A, Lattice.standard(F, 1)
    if name in ("shift", "shift-inv"):
        M = MatrixMap.cyclic_shift(F, dstar)
        return (M if name == "shift" else M.inverse()), Lattice.standard(F, dstar)
    raise UsageError(f"scale supports tau, tau-inv, shift, shift-inv; got {name!r}")


def cmd_scale(args):
    F = _field(args)
    A, U = _linear_map(args.map, F, args.dstar)
    up, um = tidy_parts(A, U)
    s = scale(A, U)
    out = {"map": args.map, "q": F.q, "d": U.d, "scale": s,
           "u_plus": None if up is None else up.elementary_divisors(),
           "u_minus": None if um is None else um.elementary_divisors()}
    if up is not None:
        out["index_check"] = lattice_index(up.image(A), up) == s
    return out, [{"map": args.map, "q": F.q, "d": U.d, "scale": s}], \
        out.get("index_check", True), None


def cmd_calibrate(args):
    F = _field(args)
    rep = calibration_compare(F, args.dstar, args.vmin, args.vmax, seed=args.seed)
    out = rep.to_json()
    cex = None
    if not rep.ok:
        v = rep.failures[0]["v"]
        cex = {"vmin": v, "vmax": v}
    return out, rep.samples, rep.ok, cex


def cmd_group_demo(args):
    F = _field(args)
    S = GroupSession(F, parse_seq(args.seq), args.prec)
    rng = np.random.default_rng(args.seed)
    if args.elements:
        triples = [[S.from_json(e) for e in args.elements]]
    else:
        triples = [[S.random(rng) for _ in range(3)] for _ in range(args.samples)]
    rows = []
    failure = None
    for g, h, k in triples:
        gi = S.mul(g, S.inv(g))
        conj = S.conj(g, S.elem(k.z))
        checks = {
            "assoc": S.equal(S.mul(S.mul(g, h), k), S.mul(g, S.mul(h, k))),
            "inverse": gi.w.is_identity and gi.z.truncate(S.prec).is_zero,
            "normal": conj.w.is_identity,
            "inner": conj.z.congruent(S.word_act(g.w, k.z), S.prec),
        }
        rows.append(checks)
        if failure is None and not all(checks.values()):
            failure = {"elements": [e.to_json() for e in (g, h, k)]}
    X = Series.monomial(F, 1)
    lhs, rhs = S.word_act("A T", X), S.word_act("T A", X)
    witness = {"z": "X", "A T": format_series(lhs), "T A": format_series(rhs),
               "differ": lhs != rhs}
    ok = failure is None and witness["differ"]
    summary = {k: sum(r[k] for r in rows) for k in ("assoc", "inverse", "normal", "inner")}
    out = {"q": F.q, "seq": args.seq, "prec": S.prec, "samples": len(rows),
           "passed": summary, "non_commutation": witness}
    if failure:
        out["counterexample"] = failure
    return out, rows, ok, failure


COMMANDS = {
    "holder": cmd_holder,
    "cn-cert": cmd_cn_cert,
    "non-analytic": cmd_non_analytic,
    "invert-alpha": cmd_invert_alpha,
    "scale": cmd_scale,
    "calibrate": cmd_calibrate,
    "group-demo": cmd_group_demo,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=2, help="field size (prime power <= 65536)")
    common.add_argument("--modulus", help="irreducible modulus, coefficients low to high: 1,1,1")
    common.add_argument("--seq", default="gauss:3/2", help="gauss:THETA | square | table:l0,l1,...")
    common.add_argument("--map", default=None, help="map name, see the subcommand help")
    common.add_argument("--prec", type=int, default=64, help="working precision P (mod X^P)")
    common.add_argument("--vmin", type=int, default=0)
    common.add_argument("--vmax", type=int, default=64)
    common.add_argument("--budget", type=int, default=1 << 12, help="enumeration cap")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="report path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--replay", help="re-run the counterexample stored in a report")

    parser = argparse.ArgumentParser(prog="nonarch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("holder", parents=[common], help="Hoelder-exponent scan")
    p.add_argument("--sampling", choices=("representative", "exhaustive"),
                   default="representative")
    p = sub.add_parser("cn-cert", parents=[common], help="C^n certificate and non-C^(n+1) witness")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--extra", type=int, default=0, help="also check n+1 .. n+extra")
    p = sub.add_parser("non-analytic", parents=[common], help="superpolynomial decay table")
    p.add_argument("--nmax", type=int, default=8)
    p = sub.add_parser("invert-alpha", parents=[common], help="solve alpha(x) = z")
    p.add_argument("--z", help='series such as "X^-1 + 1 + X^3 % X^8"')
    p = sub.add_parser("scale", parents=[common], help="scale via tidy subgroups")
    p.add_argument("--dstar", type=int, default=2)
    p = sub.add_parser("calibrate", parents=[common], help="compare calibrations of two charts")
    p.add_argument("--dstar", type=int, default=2)
    p = sub.add_parser("group-demo", parents=[common], help="group laws of K x| <alpha-bar, tau>")
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(elements=None)
    return parser


_DEFAULT_MAPS = {"holder": "beta", "cn-cert": "beta", "non-analytic": "beta", "scale": "tau-inv"}


def _config(args) -> dict:
    skip = {"out", "format", "replay", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _render(report: dict, rows: list, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    buf = io.StringIO()
    if rows:
        keys = list(rows[0].keys())
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v)
                        for k, v in r.items()})
    return buf.getvalue()


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.replay:
            with open(args.replay) as fh:
                stored = json.load(fh)
            if stored.get("schema") != SCHEMA or stored.get("command") != args.command:
                raise UsageError("replay file is not a report of this subcommand")
            cfg = dict(stored["config"])
            cfg.update(stored.get("counterexample") or {})
            for k, v in cfg.items():
                setattr(args, k, v)
        if args.map is None:
            args.map = _DEFAULT_MAPS.get(args.command, "beta")
        if args.prec < 2 or args.budget < 1:
            raise UsageError("need --prec >= 2 and --budget >= 1")
        body, rows, ok, cex = COMMANDS[args.command](args)
    except (UsageError, ValueError, OSError, KeyError) as exc:
        print(f"nonarch: error: {exc}", file=sys.stderr)
        return 2
    except (PrecisionError, NonarchError) as exc:
        print(f"nonarch: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report = {"schema": SCHEMA, "command": args.command, "config": _config(args),
              "ok": ok, "result": body}
    if cex is not None:
        report["counterexample"] = cex
    text = _render(report, rows, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
