"""Command-line front end.

Every subcommand writes one JSON document to stdout; failures write a JSON
error to stderr instead.  Exit status 0 means the requested computation
succeeded (a verdict of "not isomorphic" is still a success), 1 means a
domain error, and 2 is argparse's usage-error code.  Documents carry
``"schema": "nilgrade/1"`` and are byte-identical across runs for a fixed
seed and flag set.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .classify import ClassifyResult, canonical_form_a6, canonical_form_b4
from .core import Algebra
from .errors import ConstraintViolation, NilgradeError, ParamSyntax, UnclassifiedParameters
from .families import (
    REP_CATALOG,
    construct_representative,
    detect_family,
    family_a6,
    family_b4,
    null_filiform,
    representative_params,
)
from .grading import characteristic_sequence, is_naturally_graded
from .nonexistence import completion_problem, search_completion
from .scalar import QI_FIELD, FieldDescriptor, Fp, Qi, format_scalar, fp_field, parse_scalar
from .witness import approx_witness, chain_matrix, informed_witness

SCHEMA = "nilgrade/1"

_PARAM_COUNT = {"a6": 6, "b4": 4}


@dataclass(frozen=True)
class RunConfig:
    """Seed and tolerance in force for one invocation (flags beat env)."""

    seed: int = 42
    tol: float = 1e-9


def _run_config(args: argparse.Namespace) -> RunConfig:
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = int(os.environ.get("NILGRADE_SEED", "42"))
    tol = getattr(args, "tol", None)
    if tol is None:
        tol = float(os.environ.get("NILGRADE_TOL", "1e-9"))
    return RunConfig(seed=seed, tol=tol)


# ---------------------------------------------------------------------------
# serialization helpers


def _text(x) -> str:
    """Scalar as a literal the parser accepts back (mod-p values as ints)."""
    if isinstance(x, Fp):
        return str(x.val)
    return format_scalar(x)


def _cell(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    return _text(x)


def _matrix(rows) -> List[list]:
    return [[_cell(x) for x in row] for row in rows]


def _param_dict(params: Dict[str, object]) -> Dict[str, str]:
    return {k: _text(v) for k, v in sorted(params.items())}


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _emit_error(kind: str, message: str, **extra) -> None:
    doc = {"schema": SCHEMA, "error": {"kind": kind, "message": message, **extra}}
    sys.stderr.write(json.dumps(doc, indent=2) + "\n")


def _parse_params(text: str, expect: Optional[int] = None) -> List[Qi]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        try:
            out.append(parse_scalar(tok))
        except ValueError:
            raise ParamSyntax(f"bad parameter literal {tok!r}") from None
    if expect is not None and len(out) != expect:
        raise ParamSyntax(f"expected {expect} parameters, got {len(out)}")
    return out


def _load_algebra(path: str) -> Algebra:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if "algebra" in doc:
        doc = doc["algebra"]
    if "table" not in doc:
        raise ConstraintViolation(f"{path} holds no multiplication table")
    return Algebra.from_json(doc)


def _rep_label(res: ClassifyResult) -> str:
    return "A(" + ",".join(_text(t) for t in res.target) + ")"


# ---------------------------------------------------------------------------
# subcommands


def cmd_construct(args: argparse.Namespace, cfg: RunConfig) -> int:
    field = fp_field(args.mod) if args.mod else QI_FIELD
    doc: dict = {"schema": SCHEMA, "family": args.family, "n": args.n}

    if args.family == "nullfiliform":
        if args.params:
            raise ParamSyntax("nullfiliform takes no --params")
        alg = null_filiform(args.n, field)
        params: Optional[tuple] = None
    elif args.family == "rep":
        if not args.rep:
            raise ParamSyntax("--family rep needs --rep <id>")
        if args.rep not in REP_CATALOG:
            known = ", ".join(sorted(REP_CATALOG))
            raise ConstraintViolation(f"unknown representative {args.rep!r} (have: {known})")
        param = _parse_params(args.params, 1)[0] if args.params else None
        params = representative_params(args.rep, param, field)
        alg = construct_representative(args.rep, args.n, param, field)
        doc["rep"] = args.rep
    else:
        if not args.params:
            raise ParamSyntax(f"--family {args.family} needs --params")
        raw = _parse_params(args.params, _PARAM_COUNT[args.family])
        params = tuple(field.coerce(x) for x in raw)
        ctor = family_a6 if args.family == "a6" else family_b4
        alg = ctor(args.n, params, field)

    if params is not None:
        doc["params"] = [_text(x) for x in params]
    doc["algebra"] = alg.to_json()
    _emit(doc)
    return 0


def cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    alg = _load_algebra(args.source)
    violations = alg.verify_associativity()
    if violations:
        _emit_error(
            "AssociativityViolated",
            f"{len(violations)} associator(s) do not vanish",
            violations=[[v.i, v.j, v.k] for v in violations],
        )
        return 1
    seq, witness = characteristic_sequence(alg, seed=cfg.seed)
    graded, degrees = is_naturally_graded(alg)
    _emit({
        "schema": SCHEMA,
        "nilindex": alg.nilindex(),
        "char_sequence": list(seq),
        "witness": [_text(x) for x in witness],
        "graded": graded,
        "degrees": list(degrees) if degrees is not None else None,
    })
    return 0


def _classify_input(args: argparse.Namespace) -> Tuple[str, tuple, FieldDescriptor, int]:
    if args.source:
        alg = _load_algebra(args.source)
        hit = detect_family(alg)
        if hit is None:
            raise UnclassifiedParameters(
                "table does not match a chain-adapted family; rerun with --family/--params"
            )
        family, params = hit
        if family == "nullfiliform":
            raise UnclassifiedParameters("the single-chain algebra sits below this tree")
        return family, params, alg.field, alg.dim
    field = fp_field(args.mod) if args.mod else QI_FIELD
    raw = _parse_params(args.params, _PARAM_COUNT[args.family])
    return args.family, tuple(field.coerce(x) for x in raw), field, args.n


def cmd_classify(args: argparse.Namespace, cfg: RunConfig) -> int:
    family, params, field, n = _classify_input(args)
    canon = canonical_form_a6 if family == "a6" else canonical_form_b4
    res = canon(params, field)
    doc = {
        "schema": SCHEMA,
        "family": family,
        "rep_id": res.rep_id,
        "representative": _rep_label(res),
        "branch": res.branch_trace,
        "branch_trace": res.branch_trace,
        "continuous_params": _param_dict(res.param),
        "invariants": _param_dict(res.invariants),
        "flags": list(res.flags),
        "work_field": res.work_field.to_json(),
    }
    if args.witness:
        W, _ = chain_matrix(family, n, params, res.chain, res.work_field)
        doc["witness"] = _matrix(W)
    _emit(doc)
    return 0


def cmd_isomorphic(args: argparse.Namespace, cfg: RunConfig) -> int:
    alg_a, alg_b = _load_algebra(args.a), _load_algebra(args.b)
    if alg_a.dim != alg_b.dim:
        raise ConstraintViolation(f"dimensions differ: {alg_a.dim} vs {alg_b.dim}")
    hit_a, hit_b = detect_family(alg_a), detect_family(alg_b)
    if hit_a is None or hit_b is None:
        raise UnclassifiedParameters("both tables must lie in a chain-adapted family")
    fam_a, params_a = hit_a
    fam_b, params_b = hit_b
    doc: dict = {"schema": SCHEMA, "mode": args.mode, "family": fam_a}
    if fam_a != fam_b:
        # distinct tail dimensions: never isomorphic, nothing to search
        doc.update({"family": None, "isomorphic": False,
                    "reason": f"families differ ({fam_a} vs {fam_b})"})
        _emit(doc)
        return 0

    if args.mode == "exact":
        if alg_a.field != alg_b.field:
            raise ConstraintViolation("exact mode needs both tables over one field")
        rep = informed_witness(params_a, params_b, fam_a, alg_a.dim, alg_a.field)
        doc.update({
            "isomorphic": rep["isomorphic"],
            "rep_p": rep["rep_p"],
            "rep_q": rep["rep_q"],
            "param_p": _param_dict(rep["param_p"]),
            "param_q": _param_dict(rep["param_q"]),
        })
        if rep.get("witness") is not None:
            doc["witness"] = _matrix(rep["witness"])
            doc["verified"] = bool(rep.get("verified", False))
        if "reason" in rep:
            doc["reason"] = rep["reason"]
    else:
        rep = approx_witness(
            params_a, params_b, fam_a, alg_a.dim, seed=cfg.seed, tol=cfg.tol,
            budget=args.budget,
        )
        doc.update({
            "isomorphic": True,
            "witness": _matrix(rep["witness"]),
            "residual": rep["residual"],
            "evaluations": rep["evaluations"],
            "tol": cfg.tol,
            "seed": cfg.seed,
        })
    _emit(doc)
    return 0


def cmd_nonexist(args: argparse.Namespace, cfg: RunConfig) -> int:
    prob = completion_problem(args.n, args.scenario, args.field)
    t0 = time.perf_counter()
    out = search_completion(prob, budget=args.budget)
    elapsed = time.perf_counter() - t0
    doc = {
        "schema": SCHEMA,
        "n": args.n,
        "scenario": args.scenario,
        "field": args.field,
        "solutions_found": out.solutions_found,
        "complete": out.complete,
        "nodes": out.nodes,
    }
    if args.timing:
        doc["elapsed"] = elapsed
    _emit(doc)
    return 0


def cmd_acceptance(args: argparse.Namespace, cfg: RunConfig) -> int:
    from . import acceptance  # heavy battery; import only on demand

    results = acceptance.run_all(only=args.only)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.crit_id:<8s} {r.title}  [{r.elapsed:.2f}s]")
    ok = all(r.passed for r in results)
    print(f"{'all criteria pass' if ok else 'CRITERIA FAILING'} "
          f"({sum(r.passed for r in results)}/{len(results)})")
    if args.json:
        _emit({
            "schema": SCHEMA,
            "passed": ok,
            "results": [
                {"id": r.crit_id, "title": r.title, "passed": r.passed, "detail": r.detail}
                for r in results
            ],
        })
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# parser


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="nilgrade",
        description="Construct, verify, classify and compare naturally graded "
        "nilpotent algebras with a two-step tail.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a family member and print its table")
    c.add_argument("--family", required=True, choices=("nullfiliform", "a6", "b4", "rep"))
    c.add_argument("--n", type=int, default=7)
    c.add_argument("--params", default="", help="comma-separated literals: 3, -1/2, 1+2i")
    c.add_argument("--rep", default="", help="catalog id for --family rep (e.g. teo.16)")
    c.add_argument("--mod", type=int, default=0, help="build over F_p instead of Q(i)")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check a table: associativity, nilindex, gradation")
    v.add_argument("source", help="algebra JSON file")
    v.add_argument("--seed", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("classify", help="canonical representative and branch trace")
    k.add_argument("source", nargs="?", default="", help="algebra JSON file")
    k.add_argument("--family", choices=("a6", "b4"), default="a6")
    k.add_argument("--params", default="")
    k.add_argument("--n", type=int, default=7)
    k.add_argument("--mod", type=int, default=0)
    k.add_argument("--witness", action="store_true", help="include the basis-change matrix")
    k.set_defaults(func=cmd_classify)

    i = sub.add_parser("isomorphic", help="decide isomorphism of two stored tables")
    i.add_argument("a")
    i.add_argument("b")
    i.add_argument("--mode", choices=("exact", "approx"), default="exact")
    i.add_argument("--tol", type=float, default=None)
    i.add_argument("--seed", type=int, default=None)
    i.add_argument("--budget", type=int, default=10000)
    i.set_defaults(func=cmd_isomorphic)

    x = sub.add_parser("nonexist", help="exhaust completions of a tail scenario over F_p")
    x.add_argument("--n", type=int, default=7)
    x.add_argument("--scenario", required=True, help='e.g. "r1=2,r2=1" or "shape:2,4,1"')
    x.add_argument("--field", type=int, default=5, help="prime modulus")
    x.add_argument("--budget", type=int, default=2_000_000)
    x.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-stability)")
    x.set_defaults(func=cmd_nonexist)

    a = sub.add_parser("acceptance", help="run the acceptance battery and print the matrix")
    a.add_argument("--only", default="", help="comma-separated criterion ids, e.g. crit-3,crit-8")
    a.add_argument("--json", action="store_true")
    a.add_argument("--seed", type=int, default=None)
    a.set_defaults(func=cmd_acceptance)

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = _run_config(args)
    try:
        return args.func(args, cfg)
    except NilgradeError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
