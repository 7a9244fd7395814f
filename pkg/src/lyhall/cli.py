"""Command-line front end.

Generators are ordered exactly as given on the command line; that order
fixes every other order used by the tool.  ``--gens`` takes either a
comma-separated name list (``a,b,c``) or a count (``3`` means ``a,b,c``).

Exit codes: 0 success, 1 verification failed, 2 bad usage or parse error,
3 resource cap, 4 flatten collision, 5 rewrite depth exceeded, 6 model error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib.resources import files
from pathlib import Path

from . import hall, oracle
from .hall import ResourceCapExceeded
from .models import ModelError, check_axioms, evaluate, load_model_file, parse_vector, vector_to_text
from .rewrite import DepthExceeded, FlattenCollision, Normalizer
from .terms import Generators, LinComb, ParseError, to_text

SCHEMA = 1

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_COLLISION = 4
EXIT_DEPTH = 5
EXIT_MODEL = 6


class UsageError(Exception):
    pass


@dataclass
class SessionConfig:
    generators: Generators
    max_ambient: int
    fmt: str = "text"


def _generators(text: str) -> Generators:
    text = text.strip()
    try:
        if text.isdigit():
            return Generators.standard(int(text))
        return Generators([s.strip() for s in text.split(",") if s.strip()])
    except ValueError as e:
        raise UsageError(f"--gens: {e}") from None


def _config(args) -> SessionConfig:
    cap = args.max_ambient if getattr(args, "max_ambient", None) else oracle.max_ambient()
    return SessionConfig(_generators(args.gens), cap, args.format)


def _json(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, indent=2, sort_keys=False)


def _frac_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# -- basis -------------------------------------------------------------------


def cmd_basis(args, out) -> int:
    cfg = _config(args)
    if args.max_degree < 1:
        raise UsageError("--max-degree must be at least 1")
    graded = [hall.enumerate_basis(cfg.generators, n, max_terms=cfg.max_ambient) for n in range(1, args.max_degree + 1)]
    if cfg.fmt == "json":
        payload = {
            "generators": list(cfg.generators.names),
            "degrees": [
                {"degree": g.degree, "count": len(g), **({"elements": [to_text(t) for t in g]} if args.list else {})}
                for g in graded
            ],
        }
        out.write(_json(payload) + "\n")
    elif cfg.fmt == "csv":
        if args.list:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["degree", "element"])
            for g in graded:
                w.writerows((g.degree, to_text(t)) for t in g)
        else:
            out.write(hall.dimension_table_csv([(g.degree, len(g)) for g in graded]))
    else:
        if args.list:
            for g in graded:
                out.write(f"degree {g.degree}: " + ", ".join(to_text(t) for t in g) + "\n")
        else:
            width = max(len("degree"), len(str(args.max_degree)))
            out.write(f"{'degree':>{width}}  count\n")
            for g in graded:
                out.write(f"{g.degree:>{width}}  {len(g)}\n")
    return 0


# -- normalize ---------------------------------------------------------------


def cmd_normalize(args, out) -> int:
    cfg = _config(args)
    try:
        x = cfg.generators.parse_lincomb(args.expression)
    except ParseError as e:
        raise UsageError(f"parse error: {e}") from None
    nf = Normalizer().normalize(x)
    verdict = None
    if args.certify:
        diff = x - nf.value
        verdict = True
        for n in sorted(x.degrees() | nf.value.degrees()):
            span = oracle.relation_span(cfg.generators, n, max_ambient_dim=cfg.max_ambient)
            part = LinComb({t: c for t, c in diff.items() if t.size == n})
            verdict = verdict and span.contains(part)
    if cfg.fmt == "json":
        payload = {
            "generators": list(cfg.generators.names),
            "input": x.to_text(),
            "normal_form": [
                {"term": to_text(t), "coefficient": _frac_text(nf.value[t])}
                for t in sorted(nf.value, key=lambda t: t.key, reverse=True)
            ],
            "text": nf.value.to_text(),
            "rules": dict(sorted(nf.certificate.items())),
        }
        if verdict is not None:
            payload["certified"] = verdict
        out.write(_json(payload) + "\n")
    elif cfg.fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["coefficient", "term"])
        for t in sorted(nf.value, key=lambda t: t.key, reverse=True):
            w.writerow([_frac_text(nf.value[t]), to_text(t)])
        if verdict is not None:
            w.writerow(["certified", "in-span" if verdict else "not-in-span"])
    else:
        out.write(nf.value.to_text() + "\n")
        if verdict is not None:
            out.write("certified: in-span\n" if verdict else "certified: NOT in span\n")
    return 0 if verdict in (None, True) else EXIT_FAIL


# -- oracle ------------------------------------------------------------------


def cmd_oracle_verify(args, out) -> int:
    cfg = _config(args)
    if args.degree < 1:
        raise UsageError("--degree must be at least 1")
    r = oracle.verify_basis_freeness(cfg.generators, args.degree, max_ambient_dim=cfg.max_ambient)
    fmt = "csv" if args.csv else cfg.fmt
    d = r.as_dict()
    if fmt == "json":
        out.write(_json({"generators": list(cfg.generators.names), **d}) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(list(d))
        w.writerow([str(v).lower() if isinstance(v, bool) else v for v in d.values()])
    else:
        rows = [
            ("generators", ",".join(cfg.generators.names)),
            ("degree", r.degree),
            ("expected |B_n|", r.expected),
            ("quotient dim", r.got),
            ("independent", "yes" if r.independent else "no"),
            ("spanning", "yes" if r.spanning else "no"),
            ("result", "pass" if r.passed else "FAIL"),
        ]
        width = max(len(k) for k, _ in rows)
        for k, v in rows:
            out.write(f"{k:<{width}}  {v}\n")
    return 0 if r.passed else EXIT_FAIL


# -- model -------------------------------------------------------------------


def _model_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    shipped = files("lyhall") / "data" / (name if name.endswith(".json") else name + ".json")
    if shipped.is_file():
        return Path(str(shipped))
    raise UsageError(f"model file {name!r} not found")


def cmd_model_check(args, out) -> int:
    mf = load_model_file(_model_path(args.file))
    results = check_axioms(mf.model)
    ok = all(r.passed for r in results)
    if args.format == "json":
        out.write(_json({
            "model": mf.model.label,
            "m": list(mf.model.names),
            "axioms": [{"axiom": r.axiom, "pass": r.passed, "witness": list(r.witness) if r.witness else None}
                       for r in results],
            "pass": ok,
        }) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["axiom", "pass", "witness"])
        for r in results:
            w.writerow([r.axiom, str(r.passed).lower(), " ".join(r.witness) if r.witness else ""])
    else:
        out.write(f"model {mf.model.label}: m = span({', '.join(mf.model.names)})\n")
        for r in results:
            line = f"{r.axiom}  {'pass' if r.passed else 'FAIL'}"
            if r.witness:
                line += f"  witness ({', '.join(r.witness)})"
            out.write(line + "\n")
    return 0 if ok else EXIT_MODEL


def _assignment(text: str, gens: Generators, names) -> dict:
    assignment = {}
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise UsageError(f"--map entries look like a=L1, got {item!r}")
        g, vec = item.split("=", 1)
        g = g.strip()
        if g not in gens.names:
            raise UsageError(f"--map names unknown generator {g!r}")
        try:
            assignment[g] = parse_vector(vec, names)
        except ModelError as e:
            raise UsageError(f"--map: {e}") from None
    return assignment


def cmd_model_eval(args, out) -> int:
    mf = load_model_file(_model_path(args.file))
    M = mf.model
    names = [item.split("=", 1)[0].strip() for item in args.map.split(",") if item.strip()]
    gens = _generators(args.gens) if args.gens else _generators(",".join(names))
    try:
        x = gens.parse_lincomb(args.expression)
    except ParseError as e:
        raise UsageError(f"parse error: {e}") from None
    assignment = _assignment(args.map, gens, M.names)
    v = evaluate(x, assignment, M)
    if args.format == "json":
        out.write(_json({"model": M.label, "value": {n: _frac_text(c) for n, c in zip(M.names, v) if c}}) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["basis", "coefficient"])
        w.writerows((n, _frac_text(c)) for n, c in zip(M.names, v))
    else:
        out.write(vector_to_text(v, M.names) + "\n")
    return 0


# -- wiring ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")

    p = _Parser(prog="lyhall", description="Free Lie-Yamaguti algebras: basis, normal forms, certification.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("basis", parents=[common], help="basis counts or elements by degree")
    b.add_argument("--gens", required=True, help="ordered generator names (a,b,c) or a count")
    b.add_argument("--max-degree", type=int, required=True)
    b.add_argument("--list", action="store_true", help="list elements instead of counts")
    b.add_argument("--max-ambient", type=int, default=None)
    b.set_defaults(func=cmd_basis)

    n = sub.add_parser("normalize", parents=[common], help="normal form of an expression")
    n.add_argument("--gens", required=True)
    n.add_argument("expression")
    n.add_argument("--certify", action="store_true", help="check input - output against the oracle")
    n.add_argument("--max-ambient", type=int, default=None)
    n.set_defaults(func=cmd_normalize)

    o = sub.add_parser("oracle", help="brute-force certification")
    osub = o.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    v = osub.add_parser("verify", parents=[common], help="check the basis against the quotient dimension")
    v.add_argument("--gens", required=True)
    v.add_argument("--degree", type=int, required=True)
    v.add_argument("--csv", action="store_true", help="same as --format csv")
    v.add_argument("--max-ambient", type=int, default=None)
    v.set_defaults(func=cmd_oracle_verify)

    m = sub.add_parser("model", help="concrete models from reductive splittings")
    msub = m.add_subparsers(dest="model_command", required=True, parser_class=_Parser)
    c = msub.add_parser("check", parents=[common], help="verify the six axioms")
    c.add_argument("file", help="model JSON file, or the name of a shipped model")
    c.set_defaults(func=cmd_model_check)
    e = msub.add_parser("eval", parents=[common], help="evaluate an expression in a model")
    e.add_argument("file")
    e.add_argument("--map", required=True, help="assignment such as a=L1,b=L2")
    e.add_argument("--gens", default=None, help="generator order (defaults to the --map order)")
    e.add_argument("expression")
    e.set_defaults(func=cmd_model_eval)
    return p


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as e:
        err.write(f"lyhall: {e}\n")
        return EXIT_USAGE
    except ResourceCapExceeded as e:
        err.write(f"lyhall: resource cap: {e}\n")
        return EXIT_CAP
    except FlattenCollision as e:
        err.write(f"lyhall: {e}\n")
        return EXIT_COLLISION
    except DepthExceeded as e:
        err.write(f"lyhall: {e}\n")
        return EXIT_DEPTH
    except ModelError as e:
        err.write(f"lyhall: model error: {e}\n")
        return EXIT_MODEL


def run(argv: list[str] | None = None) -> str:
    """Run the CLI and return its stdout (for scripts and tests)."""
    buf = io.StringIO()
    main(argv, out=buf)
    return buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
