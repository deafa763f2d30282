"""``gridrig`` command line: analyze, sparsity, construct, realize, crosscheck, fuzz.

Exit codes: 0 success, 1 domain error, 2 schema error.  Every command prints
deterministic JSON (sorted keys, rationals as ``"num/den"`` strings).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from .characterize import characterize, crosscheck, crosscheck_batch, random_framework, random_quotient
from .geometry import PRESETS, GeometryError, IllPositioned, QuadNorm, SymmetricFramework
from .moves import MODES, MoveError, extract_sequence, sequence_to_json
from .quotient import QuotientError, SignedQuotientGraph
from .realize import RealizationError, random_realize, realize
from .rigidity import flex_bases, rigidity_report
from .sparsity import SparsityError, check_gain_sparse, oracle_gain_sparse_edge_subsets

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[0-9]*[1-9][0-9]*)?$"}
POINT = {"type": "array", "items": RATIONAL, "minItems": 2, "maxItems": 2}

QUOTIENT_SCHEMA = {
    "type": "object",
    "required": ["orbits", "edges"],
    "properties": {
        "orbits": {"type": "array", "items": {"type": "string", "minLength": 1}},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "u", "v", "gain"],
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "u": {"type": "string"},
                    "v": {"type": "string"},
                    "gain": {"type": "integer", "enum": [1, -1]},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

NORM_SCHEMA = {
    "type": "object",
    "required": ["F1", "F2"],
    "properties": {"F1": POINT, "F2": POINT},
    "additionalProperties": False,
}

FRAMEWORK_SCHEMA = {
    "type": "object",
    "required": ["norm", "quotient", "reps"],
    "properties": {
        "norm": NORM_SCHEMA,
        "quotient": QUOTIENT_SCHEMA,
        "reps": {"type": "object", "additionalProperties": POINT},
    },
    "additionalProperties": False,
}


class SchemaError(Exception):
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class DomainError(Exception):
    pass


def _path(parts, prefix="$") -> str:
    out = prefix
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _validate(doc: Any, schema: dict, prefix: str = "$") -> None:
    v = jsonschema.Draft202012Validator(schema)
    errors = sorted(v.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        e = errors[0]
        raise SchemaError(_path(e.absolute_path, prefix), e.message)


def _check_quotient(doc: dict, prefix: str = "$") -> SignedQuotientGraph:
    """Schema plus the structural rules the schema cannot express."""
    _validate(doc, QUOTIENT_SCHEMA, prefix)
    seen = set()
    for i, o in enumerate(doc["orbits"]):
        if o in seen:
            raise SchemaError(f"{prefix}.orbits[{i}]", f"duplicate orbit {o!r}")
        seen.add(o)
    ids, keys = set(), set()
    for i, e in enumerate(doc["edges"]):
        p = f"{prefix}.edges[{i}]"
        if e["id"] in ids:
            raise SchemaError(f"{p}.id", f"duplicate edge id {e['id']!r}")
        ids.add(e["id"])
        for end in ("u", "v"):
            if e[end] not in seen:
                raise SchemaError(f"{p}.{end}", f"unknown orbit {e[end]!r}")
        if e["u"] == e["v"] and e["gain"] != -1:
            raise SchemaError(f"{p}.gain", "a loop must have gain -1")
        key = (*sorted((e["u"], e["v"])), e["gain"])
        if key in keys:
            raise SchemaError(p, "parallel edges must have distinct gains")
        keys.add(key)
    try:
        return SignedQuotientGraph.from_json(doc)
    except QuotientError as exc:
        raise SchemaError(prefix, str(exc)) from None


def _check_norm(doc: dict, prefix: str = "$") -> QuadNorm:
    _validate(doc, NORM_SCHEMA, prefix)
    try:
        return QuadNorm.from_json(doc)
    except (GeometryError, ZeroDivisionError) as exc:
        raise SchemaError(prefix, str(exc)) from None


def _check_framework(doc: dict) -> SymmetricFramework:
    _validate(doc, FRAMEWORK_SCHEMA)
    norm = _check_norm(doc["norm"], "$.norm")
    q = _check_quotient(doc["quotient"], "$.quotient")
    for o in q.orbits:
        if o not in doc["reps"]:
            raise SchemaError(f"$.reps.{o}", "missing representative")
    for o in doc["reps"]:
        if o not in q.orbits:
            raise SchemaError(f"$.reps.{o}", "unknown orbit")
    try:
        return SymmetricFramework.from_json(doc)
    except (GeometryError, ZeroDivisionError) as exc:
        raise SchemaError("$.reps", str(exc)) from None


def _load(path: str) -> Any:
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(obj: Any, out: str | None) -> None:
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _resolve_norm(spec: str) -> QuadNorm:
    if spec in PRESETS:
        return PRESETS[spec]
    return _check_norm(_load(spec))


# -- commands -----------------------------------------------------------------


def cmd_analyze(args) -> dict:
    f = _check_framework(_load(args.input))
    try:
        rep = rigidity_report(f)
    except IllPositioned as exc:
        raise DomainError(f"framework is not well-positioned; ill-positioned edges: {list(exc.edges)}") from None
    bases = flex_bases(f, lifted=args.flexes)
    out = {
        "report": rep.to_json(),
        "characterization": characterize(f).to_json(),
        "flexes": {k: b.to_json() for k, b in bases.items()},
    }
    return out


def cmd_sparsity(args) -> dict:
    q = _check_quotient(_load(args.input))
    try:
        return check_gain_sparse(q, args.variant, args.loopless).to_json()
    except SparsityError as exc:
        raise DomainError(str(exc)) from None


def cmd_construct(args) -> dict:
    q = _check_quotient(_load(args.input))
    try:
        seq = extract_sequence(q, args.mode)
    except MoveError as exc:
        w = getattr(exc, "witness", None)
        raise DomainError(str(exc) + (f"; witness {json.dumps(w.to_json(), sort_keys=True)}" if w else "")) from None
    return sequence_to_json(seq, args.mode)


def cmd_realize(args) -> dict:
    q = _check_quotient(_load(args.input))
    norm = _resolve_norm(args.norm)
    try:
        if args.method == "random":
            r = random_realize(q, args.mode, norm, seed=args.seed, attempts=args.attempts)
        else:
            r = realize(q, args.mode, norm)
    except (MoveError, RealizationError) as exc:
        raise DomainError(str(exc)) from None
    out = r.to_json()
    if r.sequence is not None:
        out["sequence"] = sequence_to_json(r.sequence, args.mode)
    return out


def cmd_crosscheck(args) -> dict:
    res = crosscheck_batch(args.random, args.max_orbits, args.seed, _resolve_norm(args.norm))
    return {"cases": res["cases"], "agreements": res["agreements"], "failures": res["failures"], "positives": res["positives"]}


def cmd_fuzz(args) -> dict:
    rng = random.Random(args.seed)
    outdir = Path(args.out) if args.out else None
    failures = []
    for i in range(args.cases):
        f = random_framework(rng, max_orbits=args.max_orbits)
        rec = crosscheck(f)
        if not rec["agree"]:
            failures.append({"case": i, "kind": "crosscheck", **rec})
        q = random_quotient(rng, args.max_orbits, max_edges=12)
        for variant in ("221", "220"):
            fast = check_gain_sparse(q, variant).to_json()
            slow = oracle_gain_sparse_edge_subsets(q, variant).to_json()
            if (fast["sparse"], fast["tight"]) != (slow["sparse"], slow["tight"]):
                failures.append({"case": i, "kind": "sparsity", "variant": variant, "quotient": q.to_json(), "scan": fast, "oracle": slow})
    if outdir is not None and failures:
        outdir.mkdir(parents=True, exist_ok=True)
        for k, rec in enumerate(failures):
            (outdir / f"failure-{k:04d}.json").write_text(dumps(rec))
    return {"cases": args.cases, "seed": args.seed, "failures": len(failures), "records": failures}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridrig", description="Rigidity of reflection-symmetric frameworks in quadrilateral norms.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="rank-based rigidity report for a framework")
    a.add_argument("-i", "--input", required=True)
    a.add_argument("-o", "--output")
    a.add_argument("--flexes", action="store_true", help="include lifted covering-level flexes")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sparsity", help="(2,2,l)-gain-sparsity verdict for a quotient graph")
    s.add_argument("-i", "--input", required=True)
    s.add_argument("-o", "--output")
    s.add_argument("--variant", choices=["221", "220"], default="221")
    s.add_argument("--loopless", action="store_true")
    s.set_defaults(func=cmd_sparsity)

    c = sub.add_parser("construct", help="construction sequence for a tight quotient graph")
    c.add_argument("-i", "--input", required=True)
    c.add_argument("-o", "--output")
    c.add_argument("--mode", choices=list(MODES), default="sym")
    c.set_defaults(func=cmd_construct)

    r = sub.add_parser("realize", help="certified isostatic realisation of a tight quotient graph")
    r.add_argument("-i", "--input", required=True)
    r.add_argument("-o", "--output")
    r.add_argument("--mode", choices=list(MODES), default="sym")
    r.add_argument("--norm", default="linf", help="linf, l1 or a norm JSON file")
    r.add_argument("--method", choices=["construct", "random"], default="construct")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--attempts", type=int, default=500)
    r.set_defaults(func=cmd_realize)

    x = sub.add_parser("crosscheck", help="rank vs combinatorial predicates on random frameworks")
    x.add_argument("--random", type=int, required=True, metavar="N")
    x.add_argument("--max-orbits", type=int, default=5)
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--norm", default="linf")
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_crosscheck)

    z = sub.add_parser("fuzz", help="crosscheck and sparsity-oracle agreement with failure artifacts")
    z.add_argument("--cases", type=int, default=100)
    z.add_argument("--max-orbits", type=int, default=5)
    z.add_argument("--seed", type=int, default=0)
    z.add_argument("--out", help="directory for failure artifacts")
    z.add_argument("-o", "--output")
    z.set_defaults(func=cmd_fuzz)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        result = args.func(args)
    except SchemaError as exc:
        sys.stderr.write(dumps({"error": "schema", "path": exc.path, "message": exc.message}))
        return 2
    except DomainError as exc:
        sys.stderr.write(dumps({"error": "domain", "message": str(exc)}))
        return 1
    _emit(result, getattr(args, "output", None))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
