"""Command-line entry point.  Every command prints one JSON document on stdout.

Exit status: 0 on success, 1 on a domain error, 2 on a usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional

from ._version import ENGINE_VERSION
from .coding import encode
from .complexity import classify, normalize
from .errors import LforgeError
from .formula import canonical_text, free_vars, relativize, to_text
from .hfs import DEFAULT_ENGINE, format_set
from .levels import FULL_BUILD_LIMIT, Level, build, level_size
from .parser import parse, parse_list
from . import forge as forge_mod
from . import srm

CACHE_ENV = "LFORGE_CACHE_DIR"


def write_atomic(path: str | Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename over the target."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n"


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _formula_arg(args) -> "object":
    if getattr(args, "file", None):
        return parse(_read(args.file).strip())
    if getattr(args, "formula", None) is None:
        raise LforgeError("give a formula or --file")
    return parse(args.formula)


def _level(n: int) -> Level:
    return build(n)


def _manifest(args, level: Optional[Level] = None) -> dict:
    arguments = {k: v for k, v in sorted(vars(args).items())
                 if k not in ("func", "with_manifest") and v is not None}
    return {"command": args.command, "arguments": arguments, "engineVersion": ENGINE_VERSION,
            "levelDigest": level.digest if level is not None else None}


# -- commands -------------------------------------------------------------------


def cmd_parse(args):
    f = _formula_arg(args)
    return {"formula": to_text(f), "canonical": canonical_text(f),
            "freeVars": list(free_vars(f)), "code": str(encode(f))}, None


def cmd_classify(args):
    return classify(_formula_arg(args)).to_json(), None


def cmd_normalize(args):
    f = _formula_arg(args)
    report: dict = {}
    g = normalize(f, args.collection_level, report=report)
    return {"formula": to_text(g), "input": classify(f).to_json(),
            "output": classify(g).to_json(), "report": report}, None


def cmd_relativize(args):
    f = _formula_arg(args)
    g = relativize(f, args.bound, rename=not args.no_rename)
    return {"formula": to_text(g), "class": classify(g).to_json()}, None


def _cached_level_json(n: int) -> tuple[str, Level]:
    lv = _level(n)
    cache = os.environ.get(CACHE_ENV)
    if not cache:
        return lv.dumps(), lv
    path = Path(cache) / ENGINE_VERSION / f"L{n}.json"
    if path.exists():
        return path.read_text(encoding="utf-8"), lv
    text = lv.dumps()
    write_atomic(path, text)
    return text, lv


def cmd_build_level(args):
    if args.size_only or args.n > FULL_BUILD_LIMIT:
        if not args.size_only:
            raise LforgeError(f"full builds stop at {FULL_BUILD_LIMIT}; use --size-only")
        return {"index": args.n, "size": str(level_size(args.n)), "sizeOnly": True}, None
    text, lv = _cached_level_json(args.n)
    if args.out:
        write_atomic(args.out, text)
        return {"index": lv.index, "size": len(lv), "out": args.out, "digest": lv.digest}, lv
    return json.loads(text), lv


def _assignments(pairs) -> dict:
    env = {}
    for item in pairs or []:
        if "=" not in item:
            raise LforgeError(f"bad assignment {item!r}; expected var=SET")
        v, text = item.split("=", 1)
        try:
            env[v.strip()] = DEFAULT_ENGINE.parse(text.strip())
        except ValueError as exc:
            raise LforgeError(str(exc)) from None
    return env


def cmd_eval(args):
    from .truth import Evaluator, model_check
    if args.formula_file:
        f = parse(_read(args.formula_file).strip())
    elif args.expr:
        f = parse(args.expr)
    else:
        raise LforgeError("give --formula FILE or --expr TEXT")
    lv = _level(args.level)
    env = _assignments(args.assign)
    value = model_check(lv, f, env)
    stats = {"levelSize": len(lv), "class": classify(f).to_json()}
    return {"value": value, "stats": stats}, lv


def _inputs(items) -> list:
    try:
        return [DEFAULT_ENGINE.parse(t) for t in items or []]
    except ValueError as exc:
        raise LforgeError(str(exc)) from None


def cmd_run_srm(args):
    p = srm.assemble(_read(args.program))
    lv = _level(args.level)
    res = srm.run(p, _inputs(args.input), lv, args.max_steps, args.max_limits,
                  trace=bool(args.trace))
    if args.trace:
        lines = "".join(dumps({"clock": c.to_json(), **conf.to_json()}) for c, conf in res.trace)
        write_atomic(args.trace, lines)
    return res.to_json(), lv


def cmd_compile_d0(args):
    f = _formula_arg(args)
    p = srm.compile_delta0(f)
    text = srm.disassemble(p)
    if args.out:
        write_atomic(args.out, text)
    return {"inputs": list(free_vars(f)), "lines": len(p), "program": text}, None


def _rep_json(r: forge_mod.Representation, check: Optional[int]) -> tuple[dict, Optional[Level]]:
    out = {"label": r.label, "var": r.var, "sigmaForm": to_text(r.sigma_form),
           "piDual": to_text(r.pi_dual), "normalized": to_text(r.normalized),
           "class": classify(r.sigma_form).to_json(),
           "normalizedClass": classify(r.normalized).to_json()}
    lv = None
    if check is not None:
        lv = _level(check)
        out["satisfiers"] = [format_set(x) for x in r.satisfiers(lv)]
    return out, lv


def _load_rep(path: str) -> forge_mod.Representation:
    data = json.loads(_read(path))
    try:
        return forge_mod.Representation(parse(data["sigmaForm"]), parse(data["piDual"]),
                                        data.get("label", path), data.get("var", forge_mod.XI))
    except KeyError as exc:
        raise LforgeError(f"representation file lacks {exc}") from None


def cmd_forge(args):
    kind = args.forge_command
    if kind == "kleene":
        A = parse(_read(args.matrix).strip())
        return _rep_json(forge_mod.kleene_representation(A, args.witness_var), args.check_level)
    if kind == "base":
        return _rep_json(forge_mod.base_representation(args.k), args.check_level)
    if kind == "succ":
        return _rep_json(forge_mod.successor_representation(_load_rep(args.rep)), args.check_level)
    if kind == "comp":
        f = forge_mod.comp_sentence(_load_rep(args.gamma), _load_rep(args.delta))
        out = {"formula": to_text(f), "class": classify(f).to_json(),
               "normalizedClass": classify(normalize(f)).to_json()}
        lv = None
        if args.check_level is not None:
            from .truth import model_check
            lv = _level(args.check_level)
            out["value"] = model_check(lv, f)
        return out, lv
    if kind == "exists":
        f = forge_mod.exists_sentence(_load_rep(args.rep))
        return {"formula": to_text(f), "class": classify(f).to_json()}, None
    theory = parse(_read(args.theory).strip())
    if kind == "rfn":
        f = forge_mod.rfn_template(theory, args.level_var)
    else:
        f = forge_mod.phiT_template(theory, args.level_var)
    return {"formula": to_text(f)}, None


def cmd_analyze(args):
    sentences = parse_list(_read(args.sentences))
    res = forge_mod.spectrum(sentences, args.max_level)
    return res.to_json(), None


def cmd_height(args):
    p = srm.assemble(_read(args.program))
    lv = _level(args.level)
    return {"height": srm.height(p, lv, args.max_steps, args.max_limits)}, lv


# -- argument parsing -------------------------------------------------------------


def _formula_inputs(sp):
    sp.add_argument("formula", nargs="?", help="formula text")
    sp.add_argument("--file", help="read the formula from a file")


def _budget(sp):
    sp.add_argument("--max-steps", type=int, default=srm.DEFAULT_MAX_STEPS,
                    help="successor steps allowed per ω-segment (default %(default)s)")
    sp.add_argument("--max-limits", type=int, default=srm.DEFAULT_MAX_LIMITS,
                    help="limit stages allowed (default %(default)s)")


def _level_arg(sp, flag="--level"):
    sp.add_argument(flag, type=int, default=FULL_BUILD_LIMIT,
                    help=f"level index, at most {FULL_BUILD_LIMIT} (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lforge", description=__doc__)
    ap.add_argument("--with-manifest", action="store_true",
                    help="add a run manifest (command, arguments, engine version, level digest)")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="parse and print a formula")
    _formula_inputs(sp)
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("classify", help="complexity class of a formula")
    _formula_inputs(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("normalize", help="strict prenex normal form")
    _formula_inputs(sp)
    sp.add_argument("--collection-level", type=int, default=None,
                    help="largest n for which Σ_n-Collection is assumed (default: all)")
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("relativize", help="bound every unbounded quantifier")
    _formula_inputs(sp)
    sp.add_argument("--bound", required=True)
    sp.add_argument("--no-rename", action="store_true", help="fail instead of renaming")
    sp.set_defaults(func=cmd_relativize)

    sp = sub.add_parser("build-level", help="construct L_n")
    sp.add_argument("n", type=int)
    sp.add_argument("--out")
    sp.add_argument("--size-only", action="store_true")
    sp.set_defaults(func=cmd_build_level)

    sp = sub.add_parser("eval", help="truth of a formula in L_n")
    _level_arg(sp)
    sp.add_argument("--formula", dest="formula_file", help="formula file")
    sp.add_argument("--expr", help="formula text")
    sp.add_argument("--assign", action="append", help="var=SET, repeatable")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("run-srm", help="run a set register machine")
    sp.add_argument("program")
    _level_arg(sp)
    sp.add_argument("--input", action="append", help="input set, repeatable")
    _budget(sp)
    sp.add_argument("--trace", help="write a JSON-lines trace here")
    sp.set_defaults(func=cmd_run_srm)

    sp = sub.add_parser("compile-d0", help="compile a Δ_0 formula to a decision program")
    _formula_inputs(sp)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_compile_d0)

    sp = sub.add_parser("forge", help="representations and sentences")
    fsub = sp.add_subparsers(dest="forge_command", required=True)
    k = fsub.add_parser("kleene")
    k.add_argument("--matrix", required=True)
    k.add_argument("--witness-var", default="x")
    b = fsub.add_parser("base")
    b.add_argument("k", type=int)
    s = fsub.add_parser("succ")
    s.add_argument("--rep", required=True)
    c = fsub.add_parser("comp")
    c.add_argument("--gamma", required=True)
    c.add_argument("--delta", required=True)
    for p_ in (k, b, s, c):
        p_.add_argument("--check-level", type=int)
    e = fsub.add_parser("exists")
    e.add_argument("--rep", required=True)
    for name in ("rfn", "phiT"):
        t = fsub.add_parser(name)
        t.add_argument("--theory", required=True)
        t.add_argument("--level-var", default="a")
    sp.set_defaults(func=cmd_forge)

    sp = sub.add_parser("analyze", help="spectrum of a sentence list")
    sp.add_argument("--sentences", required=True)
    sp.add_argument("--max-level", type=int, default=FULL_BUILD_LIMIT)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("height", help="height of a program")
    sp.add_argument("program")
    _level_arg(sp)
    _budget(sp)
    sp.set_defaults(func=cmd_height)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, level = args.func(args)
    except (LforgeError, ValueError, OSError, RecursionError) as exc:
        print(f"lforge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.with_manifest:
        result = dict(result)
        result["manifest"] = _manifest(args, level)
    sys.stdout.write(dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
