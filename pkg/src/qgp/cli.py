"""Command line interface: ``qgp <verb> [options]``.

Exit codes: 0 success, 1 an asserted flag is false, 2 bad input,
3 an internal invariant failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import InternalInvariantBroken, ParseError, QGPError, ValidationError
from .quiver import Quiver
from .rep import Rep, RepMap, ext1_oracle, validate_rep

VERBS = ("validate", "check", "replace", "factor", "stable-hom", "suspend", "loop", "oracle", "adjunction", "selftest")

MODES = {
    "cofibrant": "cofibrant",
    "fibrant": "fibrant",
    "cof-trivfib": "cof_then_trivfib",
    "trivcof-fib": "trivcof_then_fib",
}


def dumps(obj):
    """Canonical JSON: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def parse_rep(data):
    return Rep.from_json(data)


def parse_repmap(data, base_dir="."):
    """A morphism file holds ``source``/``target`` (inline or as paths) and ``components``."""
    if not isinstance(data, dict) or "source" not in data or "target" not in data:
        raise ParseError("morphism needs 'source' and 'target'")
    ends = []
    for key in ("source", "target"):
        ref = data[key]
        if isinstance(ref, str):
            ref = load_json(os.path.join(base_dir, ref))
        ends.append(parse_rep(ref))
    src, tgt = ends
    if src.quiver != tgt.quiver or src.ring != tgt.ring:
        raise ValidationError(_violation("shape", "source and target differ in quiver or ring"))
    return RepMap.from_json(src, tgt, data)


def _violation(kind, detail):
    from .errors import Violation

    return Violation(kind, detail)


def parse_and_validate(paths):
    """Parse files into Quiver, Rep or RepMap objects, validating each."""
    out = []
    for p in paths:
        data = load_json(p)
        if not isinstance(data, dict):
            raise ParseError(f"{p}: expected a JSON object")
        if "components" in data:
            out.append(parse_repmap(data, os.path.dirname(p)))
        elif "modules" in data:
            out.append(parse_rep(data))
        elif "vertices" in data:
            out.append(Quiver.from_json(data))
        else:
            raise ParseError(f"{p}: not a quiver, representation or morphism")
    return out


def repmap_json(f, inline=True):
    d = f.to_json()
    if inline:
        d["source"] = f.source.to_json()
        d["target"] = f.target.to_json()
    return d


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def _need(args, name):
    val = getattr(args, name)
    if val is None:
        raise ParseError(f"--{name.replace('_', '-')} is required for {args.verb}")
    return val


def _one(args, name, kind):
    (obj,) = parse_and_validate([_need(args, name)])
    if not isinstance(obj, kind):
        raise ParseError(f"--{name} must be a {kind.__name__} file")
    return obj


def cmd_validate(args):
    (obj,) = parse_and_validate([_need(args, "input")])
    if isinstance(obj, (Rep, RepMap)):
        v = validate_rep(obj)
        if v is not None:
            raise ValidationError(v)
    return {"valid": True, "kind": type(obj).__name__}, None


def cmd_check(args):
    from .model import classify_morphism, classify_object

    if args.morphism:
        f = _one(args, "morphism", RepMap)
        flags = classify_morphism(f).as_dict()
    else:
        m = _one(args, "input", Rep)
        flags = classify_object(m).as_dict()
    return {"flags": flags}, flags


def cmd_replace(args):
    from .model import cofibrant_replacement, fibrant_replacement

    m = _one(args, "input", Rep)
    mode = args.mode or "cofibrant"
    if mode == "cofibrant":
        r = cofibrant_replacement(m)
        return {"mode": mode, "replacement": r.gp.to_json(), "map": r.trivfib.to_json()}, None
    if mode == "fibrant":
        r = fibrant_replacement(m)
        return {"mode": mode, "replacement": r.ginj.to_json(), "map": r.trivcof.to_json()}, None
    raise ParseError(f"replace needs --mode cofibrant or fibrant, got {mode}")


def cmd_factor(args):
    from .model import factorize

    f = _one(args, "morphism", RepMap)
    mode = MODES.get(args.mode or "cof-trivfib")
    if mode not in ("cof_then_trivfib", "trivcof_then_fib"):
        raise ParseError("factor needs --mode cof-trivfib or trivcof-fib")
    r = factorize(f, mode)
    fl, fr = r.certified_flags
    return {
        "mode": args.mode or "cof-trivfib",
        "mid": r.mid.to_json(),
        "left": r.left.to_json(),
        "right": r.right.to_json(),
        "certification": {"left": fl.as_dict(), "right": fr.as_dict()},
    }, None


def _pair(args):
    a = _one(args, "a", Rep)
    b = _one(args, "b", Rep)
    if a.quiver != b.quiver or a.ring != b.ring:
        raise ValidationError(_violation("shape", "--a and --b differ in quiver or ring"))
    return a, b


def _module_json(m):
    return {"invariants": [m.ring.encode(d) for d in m.nontrivial_invariants], "order": m.order}


def cmd_stable_hom(args):
    from .stable import stable_hom

    a, b = _pair(args)
    h = stable_hom(a, b)
    return {
        "module": _module_json(h.module),
        "representatives": [r.to_json() for r in h.representatives],
    }, None


def cmd_suspend(args):
    from .stable import suspension

    return {"result": suspension(_one(args, "input", Rep)).to_json()}, None


def cmd_loop(args):
    from .stable import loop

    return {"result": loop(_one(args, "input", Rep)).to_json()}, None


def cmd_oracle(args):
    from .model import is_gorenstein_projective

    m = _one(args, "input", Rep)
    table = ext1_oracle(m)
    vanish = all(e.is_zero() for e in table.values())
    gp = is_gorenstein_projective(m)
    flags = {"gp": gp, "ext_vanishes": vanish, "agree": gp == vanish}
    return {"ext1": {v: _module_json(e) for v, e in table.items()}, **flags}, flags


def cmd_adjunction(args):
    from .stable import hovey_adjunction_check

    a, b = _pair(args)
    r = hovey_adjunction_check(a, b)
    return {"lhs": _module_json(r.lhs), "rhs": _module_json(r.rhs), "agree": r.agree}, {"agree": r.agree}


def cmd_selftest(args):
    from .acceptance import run_all

    results = run_all(seed=args.seed, scale=args.count)
    ok = all(r.passed for r in results)
    report = {"passed": ok, "criteria": [r.as_dict() for r in results]}
    return report, {"passed": ok}


COMMANDS = {
    "validate": cmd_validate,
    "check": cmd_check,
    "replace": cmd_replace,
    "factor": cmd_factor,
    "stable-hom": cmd_stable_hom,
    "suspend": cmd_suspend,
    "loop": cmd_loop,
    "oracle": cmd_oracle,
    "adjunction": cmd_adjunction,
    "selftest": cmd_selftest,
}

ASSERT_ALIASES = {"gp": "gorenstein_projective", "ginj": "gorenstein_injective", "weq": "weak_equivalence"}


def build_parser():
    p = argparse.ArgumentParser(prog="qgp", description="Model-structure computations for quiver representations.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("--input")
    p.add_argument("--morphism")
    p.add_argument("--mode", choices=sorted(MODES))
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=float, default=1.0, help="scale factor for selftest sample sizes")
    p.add_argument("--max-gens", type=int, default=2)
    p.add_argument("--assert", dest="assert_flag")
    p.add_argument("--report", choices=("json", "text"), default="json")
    p.add_argument("--output")
    return p


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    for k in sorted(obj):
        v = obj[k]
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 1))
        else:
            lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    return lines


def _emit(report, args, stdout):
    text = dumps(report) if args.report == "json" else "\n".join(_text(report)) + "\n"
    if args.output:
        path = args.output
        base = os.environ.get("QGP_REPORT_DIR")
        if base and not os.path.isabs(path):
            path = os.path.join(base, path)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        report, flags = COMMANDS[args.verb](args)
    except InternalInvariantBroken as exc:
        stderr.write(f"internal invariant broken: {exc}\n")
        return 3
    except ValidationError as exc:
        stderr.write(f"validation error: {exc}\n")
        return 2
    except (ParseError, QGPError) as exc:
        stderr.write(f"input error: {exc}\n")
        return 2
    _emit(report, args, stdout)
    if args.assert_flag:
        key = ASSERT_ALIASES.get(args.assert_flag, args.assert_flag)
        if not flags or key not in flags:
            stderr.write(f"unknown flag for --assert: {args.assert_flag}\n")
            return 2
        if not flags[key]:
            return 1
    return 0


def console():
    sys.exit(main())


if __name__ == "__main__":
    console()
