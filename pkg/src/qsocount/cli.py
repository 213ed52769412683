"""Command-line interface.

Every command prints a single JSON object on stdout (keys sorted, so
repeated runs with the same seed are byte-identical). Exit codes: 0 on
success, 1 on a domain error (module-qualified code on stderr), 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .approx import (
    fpras_rp1,
    machine_from_fp,
    miller_rabin_sampler,
    sample_count,
    sampler_from_d2s,
    EstimateParams,
)
from .checks import SUITES, run_suite
from .errors import QsoError
from .evaluate import EvalBudget, qso_eval
from .normalform import normalize_qso
from .parser import parse_formula
from .printing import print_pi2, print_qso
from .propcount import (
    count_bruteforce,
    count_selfreduce,
    parse_d2s,
    parse_dimacs_monotone,
    serialize_d2s,
    serialize_dimacs,
)
from .reductions import (
    encode_d2s_as_qso,
    encode_monotone_as_pi2,
    encode_vc,
    reduce_pi2_to_monotone,
    reduce_qso_to_d2s,
)
from .structures import parse_structure, serialize_structure

DEFAULT_SEED = 0xC0FFEE


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="ascii")
    except OSError as exc:
        raise QsoError(f"cannot read {path}: {exc.strerror or exc}")


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="ascii")
    except OSError as exc:
        raise QsoError(f"cannot write {path}: {exc.strerror or exc}")


def _budget(args) -> EvalBudget:
    return EvalBudget(max_so_exponent=args.budget)


def _load_structure(path: str):
    return parse_structure(_read(path))


def _cmd_eval(args) -> dict:
    structure = _load_structure(args.structure)
    formula = parse_formula(_read(args.formula), "qso", structure.vocabulary)
    value = qso_eval(structure, formula, _budget(args))
    return {"value": value}


def _cmd_reduce_d2s(args) -> dict:
    structure = _load_structure(args.structure)
    formula = parse_formula(_read(args.formula), "qso", structure.vocabulary)
    nf = normalize_qso(formula)
    d2s_formula, table = reduce_qso_to_d2s(nf, structure, _budget(args))
    _write(args.output, serialize_d2s(d2s_formula))
    sidecar = args.output + ".atoms.json"
    _write(sidecar, json.dumps(table.to_json(), sort_keys=True) + "\n")
    return {
        "output": args.output,
        "atom_table": sidecar,
        "num_vars": d2s_formula.num_vars,
        "num_disjuncts": len(d2s_formula.disjuncts),
    }


def _cmd_reduce_monotone(args) -> dict:
    structure = _load_structure(args.structure)
    spec = parse_formula(_read(args.spec), "pi2", structure.vocabulary)
    result = reduce_pi2_to_monotone(spec, structure, _budget(args))
    sidecar = args.output + ".meta.json"
    if result.unsatisfiable:
        meta = {"unsatisfiable": True}
        _write(sidecar, json.dumps(meta, sort_keys=True) + "\n")
        return {"unsatisfiable": True, "meta": sidecar}
    _write(args.output, serialize_dimacs(result.cnf))
    meta = {"unsatisfiable": False, "exponent": result.exponent}
    _write(sidecar, json.dumps(meta, sort_keys=True) + "\n")
    return {
        "unsatisfiable": False,
        "exponent": result.exponent,
        "output": args.output,
        "meta": sidecar,
        "num_vars": result.cnf.num_vars,
        "num_clauses": len(result.cnf.clauses),
    }


def _parse_graph(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Graph file: first line the vertex count, then one `u v` edge line per
    edge; `#` starts a comment line."""
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise QsoError("empty graph file")
    try:
        num_vertices = int(lines[0])
    except ValueError:
        raise QsoError(f"first line must be the vertex count, got {lines[0]!r}")
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise QsoError(f"expected edge line 'u v', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise QsoError(f"non-integer endpoint in {line!r}")
    return num_vertices, edges


def _cmd_encode(args) -> dict:
    text = _read(args.input)
    base = args.output
    if args.what == "vc":
        num_vertices, edges = _parse_graph(text)
        structure, spec, exponent = encode_vc(num_vertices, edges)
        _write(base + ".fst", serialize_structure(structure))
        _write(base + ".pi2", print_pi2(spec) + "\n")
        return {
            "structure": base + ".fst",
            "formula": base + ".pi2",
            "exponent": exponent,
        }
    if args.what == "mono":
        cnf = parse_dimacs_monotone(text)
        structure, spec, exponent = encode_monotone_as_pi2(cnf)
        _write(base + ".fst", serialize_structure(structure))
        _write(base + ".pi2", print_pi2(spec) + "\n")
        return {
            "structure": base + ".fst",
            "formula": base + ".pi2",
            "exponent": exponent,
        }
    phi = parse_d2s(text)
    structure, formula = encode_d2s_as_qso(phi)
    _write(base + ".fst", serialize_structure(structure))
    _write(base + ".qso", print_qso(formula) + "\n")
    return {"structure": base + ".fst", "formula": base + ".qso"}


def _cmd_count(args) -> dict:
    text = _read(args.file)
    header = next(
        (line.strip() for line in text.splitlines() if line.strip() and not line.startswith("c")),
        "",
    )
    if header.startswith("p d2s"):
        phi = parse_d2s(text)
    elif header.startswith("p cnf"):
        phi = parse_dimacs_monotone(text)
    else:
        raise QsoError(f"unrecognized header {header!r}; expected 'p d2s' or 'p cnf'")
    report = count_bruteforce(phi) if args.method == "brute" else count_selfreduce(phi)
    # Timing stays off the wire: repeated runs must be byte-identical.
    payload = {"count": report.count, "method": report.method}
    if report.nodes_explored is not None:
        payload["nodes_explored"] = report.nodes_explored
    return payload


def _cmd_estimate(args) -> dict:
    if args.fp is not None:
        sampler = machine_from_fp(args.fp)
    elif args.miller_rabin is not None:
        sampler = miller_rabin_sampler(args.miller_rabin)
    else:
        sampler = sampler_from_d2s(parse_d2s(_read(args.d2s)))
    estimate = fpras_rp1(sampler, args.eps, args.delta, args.seed)
    m = sample_count(EstimateParams(args.eps, args.delta, 0.5, args.seed))
    return {
        "estimate": float(estimate),
        "m": m,
        "domain_size": sampler.domain_size,
        "mr_promise": sampler.promised_mr,
    }


def _cmd_check(args) -> dict:
    return run_suite(args.suite, args.trials, args.seed, _budget(args))


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="qsocount",
        description="Evaluate quantitative second-order sentences, reduce them "
        "to propositional counting, count exactly, and estimate by sampling.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_budget(p):
        p.add_argument(
            "--budget",
            type=int,
            default=EvalBudget().max_so_exponent,
            help="cap on the subset-enumeration exponent (default %(default)s)",
        )

    p_eval = sub.add_parser("eval", help="evaluate a qso sentence on a structure")
    p_eval.add_argument("--structure", required=True)
    p_eval.add_argument("--formula", required=True)
    add_budget(p_eval)
    p_eval.set_defaults(handler=_cmd_eval)

    p_reduce = sub.add_parser("reduce", help="run a counting reduction")
    reduce_sub = p_reduce.add_subparsers(dest="target", required=True)

    p_rd = reduce_sub.add_parser("d2s", help="qso sentence -> disjunction of 2SAT")
    p_rd.add_argument("--structure", required=True)
    p_rd.add_argument("--formula", required=True)
    p_rd.add_argument("-o", "--output", required=True)
    add_budget(p_rd)
    p_rd.set_defaults(handler=_cmd_reduce_d2s)

    p_rm = reduce_sub.add_parser("monotone", help="pi2 spec -> monotone CNF")
    p_rm.add_argument("--structure", required=True)
    p_rm.add_argument("--spec", required=True)
    p_rm.add_argument("-o", "--output", required=True)
    add_budget(p_rm)
    p_rm.set_defaults(handler=_cmd_reduce_monotone)

    p_enc = sub.add_parser("encode", help="encode an instance as structure + formula")
    p_enc.add_argument("what", choices=["vc", "mono", "d2s"])
    p_enc.add_argument("input")
    p_enc.add_argument("-o", "--output", required=True, help="output base path")
    p_enc.set_defaults(handler=_cmd_encode)

    p_count = sub.add_parser("count", help="exact model count of a d2s or cnf file")
    p_count.add_argument("--method", choices=["brute", "selfreduce"], required=True)
    p_count.add_argument("file")
    p_count.set_defaults(handler=_cmd_count)

    p_est = sub.add_parser("estimate", help="randomized count estimate")
    p_est.add_argument("--eps", type=float, required=True)
    p_est.add_argument("--delta", type=float, required=True)
    p_est.add_argument("--seed", type=int, default=DEFAULT_SEED)
    source = p_est.add_mutually_exclusive_group(required=True)
    source.add_argument("--fp", type=int, help="known value turned into a sampler")
    source.add_argument("--miller-rabin", type=int, help="odd n; sample compositeness witnesses")
    source.add_argument("--d2s", help="d2s file; sample its assignment space (no promise)")
    p_est.set_defaults(handler=_cmd_estimate)

    p_check = sub.add_parser("check", help="run a seeded oracle-comparison suite")
    p_check.add_argument("--suite", choices=list(SUITES), required=True)
    p_check.add_argument("--trials", type=int, default=100)
    p_check.add_argument("--seed", type=int, default=DEFAULT_SEED)
    add_budget(p_check)
    p_check.set_defaults(handler=_cmd_check)

    return top


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload = args.handler(args)
    except QsoError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    _emit(payload)
    return 0


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
