"""Seeded oracle-comparison suites.

Each suite draws instances from the documented generators, runs the paired
oracle comparison, and reports failures as data (never exceptions). Every
failure detail carries the (seed, trial, attempt) triple and the serialized
instance, enough to replay it exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .approx import (
    CountingSampler,
    EstimateParams,
    check_mr,
    estimate_fraction,
    machine_from_fp,
    miller_rabin_witness_count,
)
from .evaluate import EvalBudget, pi2_count, qso_eval
from .generators import (
    random_d2s,
    random_monotone,
    random_pi2,
    random_qso_sentence,
    random_structure,
    rng_for,
)
from .normalform import normalize_qso
from .printing import print_pi2, print_qso
from .propcount import count_bruteforce, count_selfreduce, serialize_d2s
from .reductions import encode_d2s_as_qso, encode_monotone_as_pi2, reduce_pi2_to_monotone, reduce_qso_to_d2s
from .structures import serialize_structure

SUITES = ("parsimony", "product", "roundtrip", "selfreduce", "estimator", "mr")
MAX_REPORTED_FAILURES = 10

# Estimator suite configurations: exact fractions with a majority promise.
ESTIMATOR_CONFIGS = (
    {"domain": 20, "accepted": 11, "epsilon": 0.2, "delta": 0.1},
    {"domain": 8, "accepted": 6, "epsilon": 0.2, "delta": 0.1},
    {"domain": 16, "accepted": 16, "epsilon": 0.2, "delta": 0.1},
    {"domain": 20, "accepted": 11, "epsilon": 0.1, "delta": 0.05},
    {"domain": 8, "accepted": 6, "epsilon": 0.1, "delta": 0.05},
    {"domain": 16, "accepted": 16, "epsilon": 0.1, "delta": 0.05},
)

MR_SUITE_ODD_LIMIT = 2001


def parsimony_instance(seed: int, trial: int):
    """Structure plus sum-of-terms sentence, re-drawn (with an attempt
    counter) until the grounded output stays within 22 propositional
    variables and the subset enumeration within 2**8."""
    for attempt in range(1000):
        rng = rng_for(seed, trial, attempt)
        structure = random_structure(rng)
        alpha = random_qso_sentence(rng)
        nf = normalize_qso(alpha)
        n = structure.universe_size
        atoms = sum(n**arity for _, arity in nf.so_vars)
        groups = sum(n ** len(term.fo_sum_vars) for term in nf.terms)
        if atoms <= 8 and atoms + groups <= 22:
            return structure, alpha, nf, attempt
    raise RuntimeError("generator failed to produce a bounded instance")


def product_instance(seed: int, trial: int):
    for attempt in range(1000):
        rng = rng_for(seed, trial, attempt)
        structure = random_structure(rng)
        spec = random_pi2(rng)
        if structure.universe_size**spec.arity <= 9:
            return structure, spec, attempt
    raise RuntimeError("generator failed to produce a bounded instance")


def _suite_parsimony(trials: int, seed: int, budget: EvalBudget) -> list[dict]:
    failures = []
    for trial in range(trials):
        structure, alpha, nf, attempt = parsimony_instance(seed, trial)
        expected = qso_eval(structure, alpha, budget)
        formula, _table = reduce_qso_to_d2s(nf, structure, budget)
        got = count_bruteforce(formula).count
        if got != expected:
            failures.append(
                {
                    "trial": trial,
                    "attempt": attempt,
                    "expected": expected,
                    "got": got,
                    "formula": print_qso(alpha),
                    "structure": serialize_structure(structure),
                }
            )
    return failures


def _suite_product(trials: int, seed: int, budget: EvalBudget) -> list[dict]:
    failures = []
    for trial in range(trials):
        structure, spec, attempt = product_instance(seed, trial)
        oracle = pi2_count(structure, spec, budget)
        result = reduce_pi2_to_monotone(spec, structure, budget)
        if result.unsatisfiable:
            ok = oracle == 0
            got = 0
        else:
            got = count_bruteforce(result.cnf).count * 2**result.exponent
            ok = got == oracle
        if not ok:
            failures.append(
                {
                    "trial": trial,
                    "attempt": attempt,
                    "expected": oracle,
                    "got": got,
                    "spec": print_pi2(spec),
                    "structure": serialize_structure(structure),
                }
            )
    return failures


def _suite_roundtrip(trials: int, seed: int, budget: EvalBudget) -> list[dict]:
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, trial, 0)

        phi = random_d2s(rng, max_vars=4, max_disjuncts=2, max_clauses=2)
        expected = count_bruteforce(phi).count
        structure, alpha = encode_d2s_as_qso(phi)
        got = qso_eval(structure, alpha, budget)
        if got != expected:
            failures.append(
                {
                    "trial": trial,
                    "check": "d2s-encode",
                    "expected": expected,
                    "got": got,
                    "instance": serialize_d2s(phi),
                }
            )

        mono = random_monotone(rng, max_vars=4)
        mono_count = count_bruteforce(mono).count
        mstructure, mspec, exponent = encode_monotone_as_pi2(mono)
        spec_count = pi2_count(mstructure, mspec, budget)
        if spec_count != mono_count * 2**exponent:
            failures.append(
                {
                    "trial": trial,
                    "check": "monotone-encode",
                    "expected": mono_count * 2**exponent,
                    "got": spec_count,
                }
            )

        back = reduce_pi2_to_monotone(mspec, mstructure, budget)
        if back.unsatisfiable:
            back_ok = spec_count == 0
        else:
            back_ok = count_bruteforce(back.cnf).count * 2**back.exponent == spec_count
        if not back_ok:
            failures.append({"trial": trial, "check": "monotone-roundtrip"})
    return failures


def _suite_selfreduce(trials: int, seed: int, budget: EvalBudget) -> list[dict]:
    failures = []
    for trial in range(trials):
        rng = rng_for(seed, trial, 0)
        phi = random_d2s(rng, max_vars=14)
        expected = count_bruteforce(phi).count
        report = count_selfreduce(phi)
        bound_ok = (
            report.nodes_explored == 1
            if expected == 0
            else report.nodes_explored <= 2 * (phi.num_vars + 1) * expected
        )
        if report.count != expected or not bound_ok:
            failures.append(
                {
                    "trial": trial,
                    "expected": expected,
                    "got": report.count,
                    "nodes": report.nodes_explored,
                    "instance": serialize_d2s(phi),
                }
            )
    return failures


def _suite_estimator(trials: int, seed: int, budget: EvalBudget) -> list[dict]:
    failures = []
    for config_index, config in enumerate(ESTIMATOR_CONFIGS):
        domain, accepted = config["domain"], config["accepted"]
        epsilon, delta = config["epsilon"], config["delta"]
        sampler = CountingSampler(domain, lambda i, a=accepted: i < a, promised_mr=True)
        p = Fraction(accepted, domain)
        lo = p * (1 - Fraction(str(epsilon)))
        hi = p * (1 + Fraction(str(epsilon)))
        misses = 0
        for trial in range(trials):
            child_seed = int(rng_for(seed, config_index, trial).integers(0, 1 << 63))
            params = EstimateParams(epsilon, delta, 0.5, child_seed)
            p_hat, _m = estimate_fraction(sampler, params)
            if not (lo <= p_hat <= hi):
                misses += 1
        if misses > (delta + 0.05) * trials:
            failures.append(
                {
                    "config": config,
                    "misses": misses,
                    "trials": trials,
                    "allowed_rate": delta + 0.05,
                }
            )
    return failures


def _suite_mr(trials: int, seed: int, budget: EvalBudget) -> list[dict]:
    failures = []
    for value in range(trials + 1):
        report = check_mr(machine_from_fp(value))
        if report.accepted != value or not report.holds:
            failures.append({"value": value, "accepted": report.accepted, "holds": report.holds})
    for n in range(3, MR_SUITE_ODD_LIMIT + 1, 2):
        count, _sampler = miller_rabin_witness_count(n)
        if _is_prime(n):
            ok = count == 0
        else:
            ok = 2 * count > n - 1
        if not ok:
            failures.append({"n": n, "witnesses": count, "prime": _is_prime(n)})
    return failures


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


_SUITE_RUNNERS = {
    "parsimony": _suite_parsimony,
    "product": _suite_product,
    "roundtrip": _suite_roundtrip,
    "selfreduce": _suite_selfreduce,
    "estimator": _suite_estimator,
    "mr": _suite_mr,
}


def run_suite(name: str, trials: int, seed: int, budget: EvalBudget | None = None) -> dict:
    """Run one suite; failures are reported in the result, not raised.

    Trial semantics: per-instance for the generator suites, seeds per
    configuration for `estimator`, the top of the exhaustive value range for
    `mr` (whose odd-number sweep is fixed at 3..2001).
    """
    if name not in _SUITE_RUNNERS:
        raise ValueError(f"unknown suite {name!r}; known: {', '.join(SUITES)}")
    budget = budget or EvalBudget()
    failures = _SUITE_RUNNERS[name](trials, seed, budget)
    # No timing in the report: seeded runs must be byte-identical.
    return {
        "suite": name,
        "trials": trials,
        "seed": seed,
        "failures": len(failures),
        "failure_details": failures[:MAX_REPORTED_FAILURES],
    }
