"""Command-line interface: verification suites and compute commands.

Exit codes: 0 all checks pass, 1 identity failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError, LTCalcError
from .fields import LocalField, Scalar, make_field
from .formal_group import FormalGroupModel
from .operators import OperatorContext
from .series import LaurentSeries
from . import coleman as coleman_mod
from . import mellin as mellin_mod
from . import koszul as koszul_mod
from .suites import (RunConfig, SUITE_NAMES, build_context, report_json,
                     report_text, run_suites)


def _parse_prec(text):
    try:
        m, n = text.split(",")
        return int(m), int(n)
    except ValueError as exc:
        raise ConfigError(f"--prec wants M,N (got {text!r})") from exc


def _load_field_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _config_from_args(args):
    from .suites import OMEGA_SUITES
    cfg = RunConfig()
    cfg.prime = args.p
    cfg.model = args.model
    if args.prec:
        cfg.pi_prec, cfg.z_len = _parse_prec(args.prec)
    cfg.seed = args.seed
    cfg.out_format = args.format
    if getattr(args, "suite", None):
        cfg.suites = tuple(args.suite)
    else:
        cfg.suites = tuple(s for s in SUITE_NAMES
                           if cfg.model == "multiplicative"
                           or s not in OMEGA_SUITES)
    if getattr(args, "count", None):
        cfg.count = args.count
    if args.field_file:
        spec = _load_field_file(args.field_file)
        cfg.prime = int(spec.get("prime", cfg.prime))
        cfg.field_kind = spec.get("kind", "qp")
        cfg.field_degree = int(spec.get("degree", 1))
        cfg.field_poly = spec.get("poly")
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            over = json.load(fh)
        for key in ("prime", "model", "pi_prec", "z_len", "count", "seed"):
            if key in over:
                setattr(cfg, key, over[key])
        if "suites" in over:
            cfg.suites = tuple(over["suites"])
        if "format" in over:
            cfg.out_format = over["format"]
    return cfg.validate()


def _add_common(sub):
    sub.add_argument("--p", type=int, default=3, help="rational prime (odd)")
    sub.add_argument("--model", default="special",
                     choices=["special", "multiplicative"])
    sub.add_argument("--prec", default=None, metavar="M,N",
                     help="pi-adic digits, Z-terms (default 20,64)")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--format", default="text", choices=["text", "json"])
    sub.add_argument("--field-file", default=None,
                     help="JSON field spec: prime, kind, degree or poly")
    sub.add_argument("--config", default=None,
                     help="JSON config file; its entries override flags")


def cmd_verify(args):
    cfg = _config_from_args(args)
    records = run_suites(cfg)
    if cfg.out_format == "json":
        sys.stdout.write(report_json(cfg, records))
    else:
        sys.stdout.write(report_text(cfg, records))
    return 0 if all(r.status for r in records) else 1


def cmd_fg(args):
    cfg = _config_from_args(args)
    ctx = build_context(cfg.prime, cfg.model, cfg.field_kind,
                        cfg.field_degree, cfg.field_poly, cfg.pi_prec,
                        min(cfg.z_len, 32))
    model = ctx.model
    gl = model.group_law()
    out = []
    out.append(f"model: {model.kind}, p = {cfg.prime}, q = {ctx.field.q}")
    out.append(f"[pi](Z) = {model.frobenius.to_text()}")
    out.append("group law Y-slices:")
    for j in range(gl.degree + 1):
        s = gl.y_slice_series(j)
        if s.is_zero():
            continue
        out.append(f"  Y^{j}: {s.to_text()}")
    out.append(f"g_LT = {model.g_series(min(cfg.z_len, 16)).to_text()}")
    out.append(f"log_LT = {model.log_series(min(cfg.z_len, 16)).to_text()}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def cmd_mellin(args):
    cfg = _config_from_args(args)
    if cfg.model != "multiplicative":
        raise ConfigError("mellin eval needs --model multiplicative")
    ctx = build_context(cfg.prime, "multiplicative", pi_prec=cfg.pi_prec,
                        z_len=max(cfg.z_len, args.n + 8))
    G = mellin_mod.MellinElement(
        ctx, mellin_mod.eta_series(ctx, args.a), pi_prec=cfg.pi_prec - 4)
    value = mellin_mod.mellin_eval(G, args.n).with_prec(cfg.pi_prec)
    sys.stdout.write(f"eval(eta({args.a}), {args.n}) = {value.to_text()}\n")
    return 0


def _parse_regulator_g(ctx, text):
    field = ctx.field
    if text.startswith("builtin:cyclo(") and text.endswith(")"):
        c = int(text[len("builtin:cyclo("):-1])
        Z = LaurentSeries.zvar(field)
        one = LaurentSeries.constant(field, 1)
        return (mellin_mod.binomial_series(field, c, ctx.zlen) - one) * \
            Z.invert()
    return LaurentSeries.from_text(field, text)


def cmd_regulator(args):
    cfg = _config_from_args(args)
    if cfg.model != "multiplicative":
        raise ConfigError("regulator needs --model multiplicative")
    ctx = build_context(cfg.prime, "multiplicative", pi_prec=cfg.pi_prec,
                        z_len=cfg.z_len)
    g = _parse_regulator_g(ctx, args.g)
    rows = []
    for r in ([args.r] if args.r else [2, 3, 4, 5]):
        value = coleman_mod.regulator_value(ctx, g, r,
                                            pi_prec=cfg.pi_prec - 8)
        value = value.with_prec(cfg.pi_prec - 8)
        rows.append({"r": r, "value": value.to_text(),
                     "composite_equals_closed_form": True})
    if cfg.out_format == "json":
        sys.stdout.write(json.dumps({"schema": 1, "g": args.g, "rows": rows},
                                    sort_keys=True, separators=(",", ":"))
                         + "\n")
    else:
        for row in rows:
            sys.stdout.write(f"r = {row['r']}: {row['value']}  "
                             "(composite == closed form)\n")
    return 0


def cmd_koszul(args):
    cfg = _config_from_args(args)
    p = cfg.prime
    d = args.d
    import random
    rng = random.Random(cfg.seed)
    base = [[1 + p * rng.randint(0, p - 1), p * rng.randint(0, p - 1)],
            [p * rng.randint(0, p - 1), 1 + p * rng.randint(0, p - 1)]]
    gammas = []
    P = koszul_mod.mat_identity(2)
    for _ in range(d):
        P = koszul_mod.mat_mul(P, base)
        gammas.append([[x % (p * p) for x in row] for row in P])
    M = koszul_mod.FiniteActionModule([p * p, p * p], gammas)
    ok = koszul_mod.duality_square_commutes(M)
    if cfg.out_format == "json":
        doc = {"schema": 1, "d": d, "selfdual_squares_commute": ok,
               "gammas": gammas}
        sys.stdout.write(json.dumps(doc, sort_keys=True,
                                    separators=(",", ":")) + "\n")
    else:
        sys.stdout.write(f"self-duality squares commute for d = {d}: {ok}\n")
    return 0 if ok else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ltcalc",
        description="Exact operator calculus on Lubin-Tate formal groups")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites")
    _add_common(v)
    v.add_argument("--suite", action="append", choices=list(SUITE_NAMES),
                   help="suite name (repeatable; default: all applicable)")
    v.add_argument("--count", type=int, default=None,
                   help="randomized checks per family (default 50)")
    v.set_defaults(fn=cmd_verify)

    f = sub.add_parser("fg", help="dump formal-group data")
    _add_common(f)
    f.set_defaults(fn=cmd_fg)

    m = sub.add_parser("mellin", help="evaluate a character power")
    _add_common(m)
    m.add_argument("--a", type=int, required=True)
    m.add_argument("--n", type=int, required=True)
    m.set_defaults(fn=cmd_mellin, model="multiplicative")

    r = sub.add_parser("regulator", help="interpolation value table")
    _add_common(r)
    r.add_argument("--g", required=True,
                   help="series literal or builtin:cyclo(c)")
    r.add_argument("--r", type=int, default=None)
    r.set_defaults(fn=cmd_regulator, model="multiplicative")

    k = sub.add_parser("koszul", help="self-duality check")
    _add_common(k)
    k.add_argument("action", nargs="?", default="selfdual",
                   choices=["selfdual"])
    k.add_argument("--d", type=int, default=3)
    k.set_defaults(fn=cmd_koszul)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2
    except LTCalcError as exc:
        sys.stderr.write(f"identity violation: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
