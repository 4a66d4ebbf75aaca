"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 infeasible
parameters.  Relative output paths resolve against ``$TAMEFHE_WORKSPACE``
when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .automorphism import PlanInfeasible, gen_tame, plan_tame
from .bounds import (
    bit_width_estimate,
    keygen_bound_check,
    program_metrics,
    transform_bound_check,
    transform_bounds,
)
from .crypto import Ciphertext, CryptoError, decrypt, decrypt_result, encrypt
from .frontend import ParseError, parse_program
from .keys import (
    KeyFileError,
    PublicKey,
    dump_json,
    load_json,
    private_key_from_json,
    private_key_to_json,
    public_key_from_json,
    public_key_to_json,
)
from .pipeline import decrypt_output, encrypt_input, run_transformed, verify_pipeline
from .poly import metrics
from .program import ProgramError, program_from_json, run
from .rewrite import SchemeConfig, SchemeError, TransformedProgram, augment_program, build_fhe, emit_pseudocode
from .rng import Rng

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2, 3
WORKSPACE_ENV = "TAMEFHE_WORKSPACE"


class UsageError(Exception):
    pass


def _out_path(path: str) -> Path:
    p = Path(path)
    ws = os.environ.get(WORKSPACE_ENV)
    if ws and not p.is_absolute():
        p = Path(ws) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _in_path(path: str) -> Path:
    p = Path(path)
    ws = os.environ.get(WORKSPACE_ENV)
    if not p.exists() and ws and not p.is_absolute() and (Path(ws) / p).exists():
        p = Path(ws) / p
    if not p.exists():
        raise UsageError(f"no such file: {path}")
    return p


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def load_program(path: str):
    p = _in_path(path)
    if p.suffix == ".json":
        return program_from_json(load_json(p))
    return parse_program(p.read_text())


def _load_private(path: str):
    return private_key_from_json(load_json(_in_path(path)))


def _load_public(path: str) -> PublicKey:
    return public_key_from_json(load_json(_in_path(path)))


def _load_transformed(path: str) -> TransformedProgram:
    return TransformedProgram.from_json(load_json(_in_path(path)))


def _scheme_for(args, tp: TransformedProgram | None) -> SchemeConfig:
    """Private scheme file if given, else the public block (enough for versions 0 and 1)."""
    if getattr(args, "scheme", None):
        return SchemeConfig.from_json(load_json(_in_path(args.scheme)))
    if tp is None:
        raise UsageError("need --transformed or --scheme")
    if tp.version == 2:
        raise UsageError("version 2 needs the private --scheme file (it holds H⁻¹)")
    return SchemeConfig(tp.version, tp.m, tp.n, rng_bound=int((tp.scheme or {}).get("rng_bound", 0)))


def _emit(args, text: str, data: dict) -> None:
    print(text)
    if getattr(args, "json_out", None):
        dump_json(data, _out_path(args.json_out))


def _write_or_print(path: str | None, data: dict) -> None:
    if path:
        dump_json(data, _out_path(path))
    else:
        print(json.dumps(data, sort_keys=True))


# -- commands ---------------------------------------------------------------------

def cmd_keygen(args) -> int:
    m_bar = Fraction(args.avg_monomials) if args.avg_monomials is not None else None
    try:
        plan = plan_tame(args.n, args.degree, args.coeff_bound, args.monomials, m_bar, args.stages,
                         affine_offsets=not args.no_offsets)
    except PlanInfeasible as exc:
        print(f"infeasible parameters: {exc.inequality} cannot be satisfied. {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    pair = gen_tame(plan, Rng(args.seed))
    dump_json(private_key_to_json(pair), _out_path(args.out))
    dump_json(public_key_to_json(pair), _out_path(args.pub))
    report = keygen_bound_check(pair, args.degree, args.coeff_bound, args.monomials,
                                m_bar if m_bar is not None else args.monomials, bits=args.bits)
    text = "\n".join([
        f"fingerprint  {pair.fingerprint}",
        f"stages       {list(plan.stage_degrees)}",
        f"phi          {pair.phi}",
        "verification " + ("PASS" if pair.verified else "FAIL"),
        report.as_table(),
    ])
    _emit(args, text, {"fingerprint": pair.fingerprint, "verified": pair.verified,
                       "plan": plan.to_json(), "bounds": report.to_json()})
    return EXIT_OK if pair.verified and report.ok else EXIT_FAIL


def cmd_transform(args) -> int:
    pair = _load_private(args.key)
    p = load_program(args.program)
    if args.scheme:
        cfg = SchemeConfig.from_json(load_json(_in_path(args.scheme)))
    else:
        r = args.rand_slots if args.rand_slots is not None else pair.n - p.n
        if args.version == 0:
            r = 0
        if p.n + r != pair.n:
            raise UsageError(f"program state ({p.n}) plus {r} random slots does not match key dimension {pair.n}")
        cfg = SchemeConfig.generate(args.version, p.n, pair.n, Rng(args.seed).split("scheme"),
                                    rng_bound=args.rng_bound)
    tp = build_fhe(p, pair, cfg)
    dump_json(tp.to_json(), _out_path(args.out))
    if args.scheme_out:
        dump_json(cfg.private_json(), _out_path(args.scheme_out))
    mp = program_metrics(augment_program(p, cfg))
    tb = transform_bounds(mp, metrics(pair.phi), metrics(pair.psi))
    report = transform_bound_check(augment_program(p, cfg).steps, tp.program.steps, pair)
    text = "\n".join([
        f"version      {cfg.version}",
        f"steps        {len(tp.program.steps)}",
        f"bound d      {tb.degree}",
        f"bound |.|    {tb.coeff_norm}",
        f"bound m      {tb.max_monomials}",
        report.as_table(),
    ])
    _emit(args, text, {"version": cfg.version, "bounds": report.to_json()})
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_encrypt(args) -> int:
    key = _load_public(args.key)
    if args.scheme:
        cfg = SchemeConfig.from_json(load_json(_in_path(args.scheme)))
    elif args.transformed:
        cfg = _load_transformed(args.transformed).public_scheme()
    else:
        raise UsageError("need --transformed or --scheme")
    seed = args.enc_seed if args.enc_seed is not None else args.seed
    rng = Rng(seed).split("encrypt")
    u = _ints(args.input)
    if args.program:
        c = encrypt_input(load_program(args.program), u, key, cfg, rng)
    else:
        c = encrypt(u, key, cfg, rng)
    _write_or_print(args.out, c.to_json())
    return EXIT_OK


def cmd_run(args) -> int:
    if args.transformed:
        if not args.ciphertext:
            raise UsageError("--transformed needs --ciphertext")
        tp = _load_transformed(args.transformed)
        c = Ciphertext.from_json(load_json(_in_path(args.ciphertext)))
        _write_or_print(args.out, run_transformed(tp, c).to_json())
        return EXIT_OK
    if not (args.program and args.input is not None):
        raise UsageError("need --transformed/--ciphertext or --program/--input")
    out = run(load_program(args.program), _ints(args.input))
    print(", ".join(str(v) for v in out))
    return EXIT_OK


def cmd_decrypt(args) -> int:
    pair = _load_private(args.key)
    if args.scheme:
        cfg = SchemeConfig.from_json(load_json(_in_path(args.scheme)))
    elif args.transformed:
        tp = _load_transformed(args.transformed)
        if args.fresh and tp.version == 2:
            raise UsageError("decrypting a fresh version 2 ciphertext needs the private --scheme file")
        # ψ and truncation need only the version and slot counts
        cfg = tp.public_scheme()
    else:
        raise UsageError("need --transformed or --scheme")
    c = Ciphertext.from_json(load_json(_in_path(args.ciphertext)))
    if args.fresh:
        if args.program:
            raise UsageError("--program applies the output map and only makes sense for results")
        values = decrypt(c, pair, cfg).values
    elif args.program:
        values = decrypt_output(load_program(args.program), c, pair, cfg)
    else:
        values = decrypt_result(c, pair, cfg).values
    print(", ".join(str(v) for v in values))
    return EXIT_OK


def cmd_verify(args) -> int:
    pair = _load_private(args.key)
    p = load_program(args.program)
    tp = _load_transformed(args.transformed)
    cfg = _scheme_for(args, tp)
    if tp.key_fingerprint != pair.fingerprint:
        print("FAIL: transformed program was built for a different key", file=sys.stderr)
        return EXIT_FAIL
    rng = Rng(args.seed)
    if args.input is not None:
        inputs = [_ints(args.input)] * args.trials
    else:
        ir = rng.split("inputs")
        inputs = [tuple(ir.randint(-args.input_range, args.input_range) for _ in range(p.k))
                  for _ in range(args.trials)]
    report = verify_pipeline(p, tp, pair, cfg, inputs, rng.split("enc"))
    _emit(args, report.summary(), report.to_json())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_stats(args) -> int:
    lines, data, reports = [], {}, []
    if args.key:
        raw = load_json(_in_path(args.key))
        if raw.get("kind") == "private":
            pair = private_key_from_json(raw)
            mphi, mpsi = metrics(pair.phi), metrics(pair.psi)
            req = pair.plan.requested if pair.plan else {}
            # keys without a recorded plan are measured against their own larger half
            d = args.degree or (int(req["d"]) if "d" in req else max(mphi.degree, mpsi.degree))
            b = args.coeff_bound or (int(req["b"]) if "b" in req else max(mphi.coeff_norm, mpsi.coeff_norm))
            m = args.monomials or (int(req["m"]) if "m" in req
                                   else max(mphi.max_monomials, mpsi.max_monomials))
            kr = keygen_bound_check(pair, d, b, m, req.get("m_bar", m), bits=args.bits)
            reports.append(kr)
            lines += [f"key          {pair.fingerprint}", f"phi          {mphi.as_dict()}",
                      f"psi          {mpsi.as_dict()}", kr.as_table()]
            data["key"] = {"phi": _mjson(mphi), "psi": _mjson(mpsi), "bounds": kr.to_json()}
        else:
            key = public_key_from_json(raw)
            mphi = metrics(key.phi)
            lines += [f"key          {key.fingerprint}", f"phi          {mphi.as_dict()}"]
            if args.bits:
                lines.append(f"bit_width_B  {bit_width_estimate(args.bits, mphi)}")
            data["key"] = {"phi": _mjson(mphi)}
    if args.program:
        mp = program_metrics(load_program(args.program))
        lines.append(f"program      {mp.as_dict()}")
        data["program"] = _mjson(mp)
    if args.transformed:
        mt = program_metrics(_load_transformed(args.transformed).program)
        lines.append(f"transformed  {mt.as_dict()}")
        data["transformed"] = _mjson(mt)
    if not lines:
        raise UsageError("stats needs at least one of --key, --program, --transformed")
    ok = all(r.ok for r in reports)
    _emit(args, "\n".join(lines), {"ok": ok, **data})
    return EXIT_OK if ok else EXIT_FAIL


def _mjson(m) -> dict:
    return {k: str(v) for k, v in m.as_dict().items()}


def cmd_emit(args) -> int:
    text = emit_pseudocode(_load_transformed(args.transformed))
    if args.out:
        _out_path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tamefhe", description="Polynomial-automorphism program encryption")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--json-out", help="also write a structured report here")
        if seed:
            p.add_argument("--seed", type=int, default=0)

    k = sub.add_parser("keygen", help="generate a tame automorphism key pair")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--degree", type=int, required=True)
    k.add_argument("--coeff-bound", type=int, required=True)
    k.add_argument("--monomials", type=int, required=True)
    k.add_argument("--avg-monomials", type=str, default=None)
    k.add_argument("--stages", type=int, default=1)
    k.add_argument("--no-offsets", action="store_true", help="linear affine factors only")
    k.add_argument("--bits", type=int, default=None, help="input bit width for the B estimate")
    k.add_argument("--out", default="key.json")
    k.add_argument("--pub", default="key.pub.json")
    common(k)
    k.set_defaults(func=cmd_keygen)

    t = sub.add_parser("transform", help="build F(P) for a program and key")
    t.add_argument("--key", required=True)
    t.add_argument("--program", required=True)
    t.add_argument("--version", type=int, choices=(0, 1, 2), default=0)
    t.add_argument("--rand-slots", type=int, default=None)
    t.add_argument("--rng-bound", type=int, default=100)
    t.add_argument("--scheme", help="reuse an existing private scheme file")
    t.add_argument("--scheme-out", default="scheme.json")
    t.add_argument("--out", default="transformed.json")
    common(t)
    t.set_defaults(func=cmd_transform)

    e = sub.add_parser("encrypt", help="encrypt an input")
    e.add_argument("--key", required=True, help="public (or private) key file")
    e.add_argument("--transformed")
    e.add_argument("--scheme")
    e.add_argument("--program", help="apply this program's input map first")
    e.add_argument("--input", required=True)
    e.add_argument("--enc-seed", type=int, default=None)
    e.add_argument("--out")
    common(e)
    e.set_defaults(func=cmd_encrypt)

    r = sub.add_parser("run", help="run a transformed program on a ciphertext, or a plain program")
    r.add_argument("--transformed")
    r.add_argument("--ciphertext")
    r.add_argument("--program")
    r.add_argument("--input")
    r.add_argument("--out")
    common(r, seed=False)
    r.set_defaults(func=cmd_run)

    d = sub.add_parser("decrypt", help="decrypt a ciphertext")
    d.add_argument("--key", required=True)
    d.add_argument("--ciphertext", required=True)
    d.add_argument("--transformed")
    d.add_argument("--scheme")
    d.add_argument("--program", help="apply this program's output map")
    d.add_argument("--fresh", action="store_true", help="ciphertext came from encrypt, not from a program run")
    common(d, seed=False)
    d.set_defaults(func=cmd_decrypt)

    v = sub.add_parser("verify", help="check decrypt(run(F(P), encrypt(u))) = P(u)")
    v.add_argument("--key", required=True)
    v.add_argument("--program", required=True)
    v.add_argument("--transformed", required=True)
    v.add_argument("--scheme")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--input", help="fixed input; otherwise random in [-R, R]")
    v.add_argument("--input-range", type=int, default=5)
    common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="metrics and bounds")
    s.add_argument("--key")
    s.add_argument("--program")
    s.add_argument("--transformed")
    s.add_argument("--bits", type=int, default=None)
    s.add_argument("--degree", type=int, default=None)
    s.add_argument("--coeff-bound", type=int, default=None)
    s.add_argument("--monomials", type=int, default=None)
    common(s, seed=False)
    s.set_defaults(func=cmd_stats)

    m = sub.add_parser("emit", help="print a transformed program as pseudocode")
    m.add_argument("--transformed", required=True)
    m.add_argument("--out")
    m.set_defaults(func=cmd_emit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, SchemeError, KeyFileError, ProgramError, CryptoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, json.JSONDecodeError) as exc:
        print(f"error: malformed input file ({exc})", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
