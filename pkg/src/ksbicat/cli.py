"""Command-line interface: ``ksbicat COMMAND FILE ...``.

Exit codes: 0 pass, 1 verified negative, 2 inconclusive (partial
factorization), 3 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .algebra import AlgebraError, AlgebraElement, center, connectivity_report, primitive_idempotents
from .instances import InstanceError
from .io import GENERATOR_KINDS, InstanceFile, InstanceFormatError, atomic_write, generate, load, save
from .kstheory import (
    KSError,
    adjointify,
    associated_idempotent,
    frobenius_from_splitting,
    ks_decompose,
    match_decompositions,
    split_by_idempotent,
    strong_indecomposability_report,
    verify_direct_sum,
    verify_frobenius,
    verify_splitting_datum,
)
from .linalg import Field, FieldError
from .reports import FAIL, INPUT_ERROR, Report


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fmt(F: Field, v) -> list[str]:
    return [F.fmt(x) for x in v]


def _element(inst: InstanceFile, ref: str, n: int) -> tuple:
    F = inst.field
    if ref in inst.elements:
        v = inst.elements[ref]
    else:
        try:
            v = tuple(F.parse(s) for s in ref.split(","))
        except FieldError:
            raise InstanceFormatError(f"{ref!r} is neither a named element nor a comma-separated vector") from None
    if len(v) != n:
        raise InstanceFormatError(f"element {ref!r} has length {len(v)}, expected {n}")
    return tuple(v)


# -- commands -------------------------------------------------------------------

def cmd_center(inst: InstanceFile, args) -> Report:
    A = inst.get("algebras", args.alg)
    Z = center(A)
    conn = connectivity_report(Z.algebra)
    rep = Report("center", {"file": args.file, "algebra": args.alg})
    F = A.field
    basis = [_fmt(F, b) for b in Z.inclusion.columns()]
    rep.verdicts.add("central", all(A.is_central(b) for b in Z.inclusion.columns()))
    rep.data.update({"dim": A.dim, "center_dim": Z.algebra.dim, "center_basis": basis,
                     "components": conn.component_count, "connected": conn.connected})
    rep.complete = conn.complete
    return rep


def cmd_idempotents(inst: InstanceFile, args) -> Report:
    A = inst.get("algebras", args.alg)
    Z = center(A)
    dec = primitive_idempotents(Z.algebra)
    ids = [Z.to_parent(e.coords) for e in dec]
    F = A.field
    rep = Report("idempotents", {"file": args.file, "algebra": args.alg})
    rep.idempotents = [_fmt(F, e) for e in ids]
    rep.complete = dec.complete
    for k, e in enumerate(ids):
        x = AlgebraElement(A, e)
        rep.verdicts.add("idempotent", x.is_idempotent() and not x.is_zero(), f"e[{k}]")
        rep.verdicts.add("central", A.is_central(e), f"e[{k}]")
        for j in range(k):
            rep.verdicts.add("orthogonal", not any(A.multiply(e, ids[j])), f"e[{j}]e[{k}]")
    total = tuple(F.norm(sum(col)) for col in zip(*ids))
    rep.verdicts.add("sum-to-one", total == A.unit)
    return rep


def cmd_decompose_one(inst: InstanceFile, args, alg: str) -> Report:
    A = inst.get("algebras", alg)
    D = ks_decompose(A, basis_seed=args.seed)
    F = A.field
    rep = Report("decompose", {"file": args.file, "algebra": alg})
    rep.idempotents = [_fmt(F, e) for e in D.idempotents]
    rep.complete = D.complete
    rep.verdicts.extend(D.report)
    for k, s in enumerate(D.summands):
        conn = connectivity_report(center(s.Y).algebra)
        rep.verdicts.add("strongly-indecomposable", conn.connected, f"summand[{k}]")
    rep.data["summands"] = [{"dim": s.Y.dim, "center_dim": center(s.Y).algebra.dim} for s in D.summands]
    return rep


def cmd_verify_sum(inst: InstanceFile, args) -> Report:
    d = inst.get("diagrams", args.diagram)
    rep = Report("verify-sum", {"file": args.file, "diagram": args.diagram})
    rep.verdicts.extend(verify_direct_sum(d))
    rep.data["summands"] = len(d.summands)
    return rep


def cmd_adjointify(inst: InstanceFile, args) -> Report:
    d = inst.get("diagrams", args.diagram)
    rep = Report("adjointify", {"file": args.file, "diagram": args.diagram})
    try:
        out = adjointify(d)
    except KSError as exc:
        rep.status, rep.message = FAIL, str(exc)
        return rep
    rep.verdicts.extend(verify_direct_sum(out))
    rep.data["corrected_summands"] = [k for k, (a, b) in enumerate(zip(d.summands, out.summands)) if a is not b]
    if args.save:
        inst.diagrams[f"{args.diagram}-adjoint"] = out
        save(inst, args.save)
        rep.data["saved"] = args.save
    return rep


def cmd_split(inst: InstanceFile, args) -> Report:
    A = inst.get("algebras", args.alg)
    e = _element(inst, args.idempotent, A.dim)
    rep = Report("split", {"file": args.file, "algebra": args.alg, "idempotent": args.idempotent})
    first, second = split_by_idempotent(A, e)
    F = A.field
    parts = []
    for label, s in (("summand", first), ("complement", second)):
        if s is None:
            parts.append({"part": label, "dim": 0})
            continue
        rep.verdicts.extend(verify_splitting_datum(s), label)
        round_trip = associated_idempotent(s, verify=False).coords
        parts.append({"part": label, "dim": s.Y.dim, "idempotent": _fmt(F, round_trip)})
    if first is not None:
        rep.verdicts.add("idempotent-round-trip", associated_idempotent(first, verify=False).coords == e)
    rep.data["parts"] = parts
    return rep


def cmd_match(inst: InstanceFile, args) -> Report:
    D1, D2 = inst.get("decompositions", args.d1), inst.get("decompositions", args.d2)
    rep = Report("match", {"file": args.file, "first": args.d1, "second": args.d2, "strategy": args.strategy})
    rep.complete = D1.complete and D2.complete
    if not rep.complete:
        rep.message = "matching needs complete decompositions"
        return rep
    if len(D1) != len(D2):
        rep.status, rep.message = FAIL, f"different numbers of summands ({len(D1)} and {len(D2)})"
        return rep
    try:
        m = match_decompositions(D1, D2, args.strategy)
    except KSError as exc:
        rep.status, rep.message = FAIL, str(exc)
        return rep
    rep.verdicts.extend(m.report)
    rep.permutation = list(m.sigma)
    rep.data["equivalences"] = {name: len(r.certificates) for name, r in m.results.items()}
    return rep


def cmd_frobenius(inst: InstanceFile, args) -> Report:
    s = inst.get("splittings", args.splitting)
    rep = Report("frobenius", {"file": args.file, "splitting": args.splitting})
    base = verify_splitting_datum(s)
    rep.verdicts.extend(base, "splitting")
    if base.passed:
        rep.verdicts.extend(verify_frobenius(frobenius_from_splitting(s)), "frobenius")
    rep.data["monad_dim"] = s.E.dim
    return rep


def cmd_report_indec(inst: InstanceFile, args) -> Report:
    A = inst.get("algebras", args.alg)
    r = strong_indecomposability_report(A)
    rep = Report("report-indec", {"file": args.file, "algebra": args.alg})
    rep.data.update({k: v for k, v in r.to_json().items() if k != "complete"})
    rep.complete = r.complete
    rep.verdicts.add("checks-agree", r.agree)
    if r.complete and not r.connected_center:
        rep.status = FAIL
        rep.message = f"not strongly indecomposable: {r.components} blocks"
    return rep


def _target_worker(payload) -> Report:
    """Run one decompose target in a separate process."""
    args_dict, alg = payload
    return _run_target(argparse.Namespace(**args_dict), alg)


def _run_target(args, alg: str) -> Report:
    start = time.perf_counter()
    try:
        inst = load(args.file)
        rep = cmd_decompose_one(inst, args, alg)
    except (InstanceFormatError, AlgebraError, InstanceError) as exc:
        rep = Report("decompose", {"file": args.file, "algebra": alg}, status=INPUT_ERROR, message=str(exc))
    rep.seed = args.seed
    if args.timing:
        rep.timing = time.perf_counter() - start
    return rep.settle(args.strict)


COMMANDS = {
    "center": cmd_center,
    "idempotents": cmd_idempotents,
    "verify-sum": cmd_verify_sum,
    "adjointify": cmd_adjointify,
    "split": cmd_split,
    "match": cmd_match,
    "frobenius": cmd_frobenius,
    "report-indec": cmd_report_indec,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=None, help="seed for every randomized step")
    common.add_argument("--strict", action="store_true", help="treat partial factorization as failure")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    common.add_argument("--output", "-o", default=None, help="write the report here (atomically)")

    p = _Parser(prog="ksbicat", description="Krull-Schmidt decompositions of finite-dimensional algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, helptext in (("center", "center of an algebra"), ("idempotents", "primitive central idempotents"),
                           ("report-indec", "strong indecomposability checks")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("file")
        s.add_argument("alg")
    s = sub.add_parser("decompose", parents=[common], help="decompose into strongly indecomposable summands")
    s.add_argument("file")
    s.add_argument("algs", nargs="+", metavar="alg")
    s.add_argument("--jobs", type=int, default=1, help="process several targets in parallel")
    for name, helptext in (("verify-sum", "check a direct sum diagram"),
                           ("adjointify", "correct a direct sum into an adjoint one")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("file")
        s.add_argument("diagram")
        if name == "adjointify":
            s.add_argument("--save", default=None, help="write the instance file with the corrected diagram")
    s = sub.add_parser("split", parents=[common], help="split an algebra by a central idempotent")
    s.add_argument("file")
    s.add_argument("alg")
    s.add_argument("idempotent", help="element name or comma-separated coordinates")
    s = sub.add_parser("match", parents=[common], help="match the summands of two decompositions")
    s.add_argument("file")
    s.add_argument("d1")
    s.add_argument("d2")
    s.add_argument("--strategy", choices=("idempotent", "recursive", "both"), default="both")
    s = sub.add_parser("frobenius", parents=[common], help="check the Frobenius monad of a splitting")
    s.add_argument("file")
    s.add_argument("splitting")
    s = sub.add_parser("generate", parents=[common], help="write a curated instance file")
    s.add_argument("kind", choices=GENERATOR_KINDS)
    s.add_argument("--field", default="Q", help="Q or a prime p")
    s.add_argument("--name", default="A")
    s.add_argument("--group", help="builtin group such as S3, C4, D5, Q8, C2xC2")
    s.add_argument("--n", type=int, help="matrix size, split-algebra dimension")
    s.add_argument("--vertices", type=int)
    s.add_argument("--arrows", default="", help="comma-separated arrows such as 0>1,1>2")
    s.add_argument("--coeffs", default="", help="polynomial coefficients, constant term first")
    s.add_argument("--factor", action="append", default=[], help="JSON recipe of a factor (repeatable)")
    return p


def _parse_field(text: str) -> Field:
    return Field.from_json("Q" if text.upper() in ("Q", "QQ") else f"F_{int(text)}")


def _generate(args) -> tuple[Report, InstanceFile]:
    F = _parse_field(args.field)
    params: dict = {}
    kind = args.kind
    if kind == "group-algebra":
        params["group"] = args.group
    elif kind in ("matrix-algebra", "split"):
        params["n"] = args.n
    elif kind == "path-algebra":
        params["vertices"] = args.vertices
        params["arrows"] = [[int(x) for x in a.split(">")] for a in args.arrows.split(",") if a]
    elif kind == "polynomial":
        params["coeffs"] = [c for c in args.coeffs.split(",") if c]
    elif kind in ("product", "scrambled"):
        recipes = [json.loads(r) for r in args.factor]
        if kind == "product":
            params["factors"] = recipes
        else:
            if len(recipes) != 1:
                raise InstanceFormatError("scrambled needs exactly one --factor")
            params["of"] = recipes[0]
            params["seed"] = args.seed if args.seed is not None else 0
    inst = generate(kind, F, params, args.name)
    A = inst.algebras[args.name]
    rep = Report("generate", {"kind": kind, "field": str(F), "name": args.name})
    rep.data["dim"] = A.dim
    return rep, inst


@dataclass
class Outcome:
    reports: list[Report]
    exit_code: int
    format: str = "text"
    output: str | None = None

    def render(self) -> str:
        if self.format == "json":
            body = [r.to_json() for r in self.reports]
            return json.dumps(body[0] if len(body) == 1 else body, indent=1)
        return "\n\n".join(r.to_text() for r in self.reports)


def run_command(argv: list[str]) -> Outcome:
    """Parse ``argv`` and run one command; return the reports and the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        rep = Report("usage", {"argv": list(argv)}, status=INPUT_ERROR, message=str(exc))
        return Outcome([rep], rep.exit_code)
    if args.command == "decompose":
        if args.jobs > 1 and len(args.algs) > 1:
            payload = [(vars(args), a) for a in args.algs]
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(_target_worker, payload))
        else:
            reports = [_run_target(args, a) for a in args.algs]
        return Outcome(reports, max(r.exit_code for r in reports), args.format, args.output)
    start = time.perf_counter()
    output = args.output
    try:
        if args.command == "generate":
            rep, inst = _generate(args)
            if output is None:
                raise InstanceFormatError("generate needs --output FILE")
            save(inst, output)
            rep.data["written"] = output
            output = None
        else:
            inst = load(args.file)
            rep = COMMANDS[args.command](inst, args)
    except (InstanceFormatError, AlgebraError, InstanceError, FieldError, ValueError) as exc:
        rep = Report(args.command, {"file": getattr(args, "file", None)}, status=INPUT_ERROR, message=str(exc))
    rep.seed = args.seed
    if args.timing:
        rep.timing = time.perf_counter() - start
    rep.settle(args.strict)
    return Outcome([rep], rep.exit_code, args.format, output)


def main(argv: list[str] | None = None) -> int:
    out = run_command(list(sys.argv[1:] if argv is None else argv))
    if out.exit_code == 3:
        print(out.render(), file=sys.stderr)
        return out.exit_code
    if out.output and len(out.reports) > 1:
        # one report per target
        Path(out.output).mkdir(parents=True, exist_ok=True)
        ext = "json" if out.format == "json" else "txt"
        seen: dict[str, int] = {}
        for r in out.reports:
            alg = r.inputs["algebra"]
            seen[alg] = seen.get(alg, 0) + 1
            stem = alg if seen[alg] == 1 else f"{alg}-{seen[alg]}"
            body = json.dumps(r.to_json(), indent=1) if out.format == "json" else r.to_text()
            atomic_write(os.path.join(out.output, f"{stem}.{ext}"), body + "\n")
    elif out.output:
        atomic_write(out.output, out.render() + "\n")
    else:
        print(out.render())
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
