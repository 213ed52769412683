"""Seeded random instance generators.

These distributions are part of the public surface: the check suites and the
acceptance tests draw from them. Every generator takes a numpy Generator so
that a (seed, trial, attempt) triple pins the instance exactly.

Conventions: universes have 1..3 elements; structures use the two-symbol
vocabulary R/1, E/2; set variables are drawn from X, Y with arity 1..2;
formulas stay inside the sum-of-terms fragment.
"""

from __future__ import annotations

import itertools

import numpy as np

from .formulas import (
    And,
    Atom,
    Base,
    Bottom,
    Const,
    Eq,
    Exists,
    FoFormula,
    FoPart,
    Forall,
    Not,
    Or,
    Implies,
    Pi2Spec,
    Plus,
    QsoFormula,
    Sigma2TwoSatFormula,
    SoLiteral,
    SumFo,
    SumSo,
    Top,
    TwoSatClause,
)
from .propcount import Disj2SatFormula, MonotoneCnf, TwoSatConjunct
from .structures import Structure, Vocabulary

TEST_VOCAB = Vocabulary((("R", 1), ("E", 2)))


def rng_for(seed: int, *path: int) -> np.random.Generator:
    """Deterministic child generator for (seed, trial, attempt, ...)."""
    return np.random.default_rng(np.random.SeedSequence([seed, *path]))


def _choice(rng: np.random.Generator, items):
    return items[int(rng.integers(0, len(items)))]


def random_structure(
    rng: np.random.Generator,
    max_universe: int = 3,
    vocabulary: Vocabulary = TEST_VOCAB,
    tuple_probability: float = 0.5,
) -> Structure:
    """Universe size uniform in 1..max_universe; each possible tuple of each
    relation present independently with the given probability."""
    n = int(rng.integers(1, max_universe + 1))
    relations = {}
    for name, arity in vocabulary.symbols:
        tuples = [
            tup
            for tup in itertools.product(range(n), repeat=arity)
            if rng.random() < tuple_probability
        ]
        relations[name] = frozenset(tuples)
    return Structure(vocabulary, n, relations)


def random_fo(
    rng: np.random.Generator,
    pool: list[str],
    depth: int = 2,
    vocabulary: Vocabulary = TEST_VOCAB,
    _quant_names: list[str] | None = None,
) -> FoFormula:
    """Random first-order formula over the vocabulary with free variables
    from the pool; quantifiers introduce fresh q0, q1, ... names."""
    if _quant_names is None:
        _quant_names = [f"q{i}" for i in range(4)]

    def leaf() -> FoFormula:
        options = ["top", "bot"]
        if pool:
            options += ["atom", "atom", "eq"]
        pick = _choice(rng, options)
        if pick == "top":
            return Top()
        if pick == "bot":
            return Bottom()
        if pick == "eq":
            return Eq(_choice(rng, pool), _choice(rng, pool))
        name, arity = _choice(rng, vocabulary.symbols)
        return Atom(name, tuple(_choice(rng, pool) for _ in range(arity)))

    if depth <= 0:
        return leaf()
    pick = _choice(rng, ["leaf", "leaf", "not", "or", "and", "implies", "exists", "forall"])
    if pick == "leaf":
        return leaf()
    if pick == "not":
        return Not(random_fo(rng, pool, depth - 1, vocabulary, _quant_names))
    if pick in ("or", "and", "implies"):
        left = random_fo(rng, pool, depth - 1, vocabulary, _quant_names)
        right = random_fo(rng, pool, depth - 1, vocabulary, _quant_names)
        ctor = {"or": Or, "and": And, "implies": Implies}[pick]
        return ctor(left, right)
    if not _quant_names:
        return leaf()
    fresh = _quant_names[0]
    body = random_fo(rng, pool + [fresh], depth - 1, vocabulary, _quant_names[1:])
    return (Exists if pick == "exists" else Forall)(fresh, body)


def random_qso_sentence(
    rng: np.random.Generator,
    vocabulary: Vocabulary = TEST_VOCAB,
    max_terms: int = 3,
) -> QsoFormula:
    """Sum-of-terms sentence: 1..max_terms terms joined by '+'. Each term is
    a constant (weight ~1/7) or a chain of up to two set-variable binders
    (arity 1..2), up to one element-sum binder, over a block with up to one
    exists and up to two forall variables and 1..3 clauses."""
    num_terms = int(rng.integers(1, max_terms + 1))
    terms = []
    for _ in range(num_terms):
        if rng.random() < 1 / 7:
            terms.append(Const(int(rng.integers(0, 4))))
            continue
        so_names = ["X", "Y"][: int(rng.integers(0, 3))]
        so_binders = [(name, int(rng.integers(1, 3))) for name in so_names]
        fo_vars = ["x"][: int(rng.integers(0, 2))]
        exists_vars = tuple(["y"][: int(rng.integers(0, 2))])
        forall_vars = tuple(["z", "w"][: int(rng.integers(0, 3))])
        visible = fo_vars + list(exists_vars) + list(forall_vars)

        clauses = []
        for _ in range(int(rng.integers(1, 4))):
            n_so = int(rng.integers(0, 3)) if so_binders and visible else 0
            parts: list = []
            for _ in range(n_so):
                name, arity = _choice(rng, so_binders)
                args = tuple(_choice(rng, visible) for _ in range(arity))
                parts.append(SoLiteral(rng.random() < 0.7, name, args))
            while len(parts) < 3:
                pick = rng.random()
                if pick < 0.15:
                    parts.append(FoPart(Top()))
                elif pick < 0.4:
                    parts.append(FoPart(Bottom()))
                else:
                    parts.append(FoPart(random_fo(rng, visible, depth=2, vocabulary=vocabulary)))
            clauses.append(TwoSatClause(tuple(parts)))

        node: QsoFormula = Base(
            Sigma2TwoSatFormula(exists_vars, forall_vars, tuple(clauses))
        )
        for var in reversed(fo_vars):
            node = SumFo(var, node)
        for name, arity in reversed(so_binders):
            node = SumSo(name, arity, node)
        terms.append(node)

    out = terms[0]
    for term in terms[1:]:
        out = Plus(out, term)
    return out


def so_exponent(alpha: QsoFormula, n: int) -> int:
    """Largest sum over any root-to-leaf path of n**arity for the
    set-variable binders on it."""
    if isinstance(alpha, Const):
        return 0
    if isinstance(alpha, Plus):
        return max(so_exponent(alpha.left, n), so_exponent(alpha.right, n))
    if isinstance(alpha, SumFo):
        return so_exponent(alpha.body, n)
    if isinstance(alpha, SumSo):
        return n**alpha.arity + so_exponent(alpha.body, n)
    return 0


def random_pi2(
    rng: np.random.Generator,
    vocabulary: Vocabulary = TEST_VOCAB,
) -> Pi2Spec:
    """Arity 1..2, up to two forall variables, matrix from random_fo."""
    arity = int(rng.integers(1, 3))
    forall_vars = tuple(["a", "b"][: int(rng.integers(0, 3))])
    exists_vars = tuple(f"z{i}" for i in range(arity))
    pool = list(forall_vars) + list(exists_vars)
    fo_part = random_fo(rng, pool, depth=2, vocabulary=vocabulary)
    return Pi2Spec("T", arity, forall_vars, exists_vars, fo_part)


def random_clause(rng: np.random.Generator, num_vars: int, allow_empty: bool = False):
    size_options = [1, 1, 2, 2, 2] + ([0] if allow_empty else [])
    size = _choice(rng, size_options)
    lits = []
    for _ in range(size):
        var = int(rng.integers(1, num_vars + 1))
        lits.append(var if rng.random() < 0.5 else -var)
    return tuple(lits)


def random_conjunct(
    rng: np.random.Generator, max_vars: int = 12
) -> tuple[TwoSatConjunct, int]:
    """Random 2SAT conjunct: V uniform 1..max_vars, 0..2V clauses."""
    num_vars = int(rng.integers(1, max_vars + 1))
    num_clauses = int(rng.integers(0, 2 * num_vars + 1))
    conjunct = tuple(random_clause(rng, num_vars) for _ in range(num_clauses))
    return conjunct, num_vars


def random_d2s(
    rng: np.random.Generator,
    max_vars: int = 14,
    max_disjuncts: int = 3,
    max_clauses: int = 4,
    allow_empty_clause: bool = True,
) -> Disj2SatFormula:
    """V uniform 1..max_vars; 1..max_disjuncts disjuncts of 0..max_clauses
    clauses each; clause width 1 or 2 with a small chance of the empty
    clause when allowed."""
    num_vars = int(rng.integers(1, max_vars + 1))
    disjuncts = []
    for _ in range(int(rng.integers(1, max_disjuncts + 1))):
        num_clauses = int(rng.integers(0, max_clauses + 1))
        allow = allow_empty_clause and rng.random() < 0.1
        disjuncts.append(
            tuple(random_clause(rng, num_vars, allow_empty=allow) for _ in range(num_clauses))
        )
    return Disj2SatFormula(num_vars, tuple(disjuncts))


def random_monotone(rng: np.random.Generator, max_vars: int = 4) -> MonotoneCnf:
    """V uniform 1..max_vars; 1..4 clauses, each a nonempty random subset."""
    num_vars = int(rng.integers(1, max_vars + 1))
    clauses = []
    for _ in range(int(rng.integers(1, 5))):
        members = [v for v in range(1, num_vars + 1) if rng.random() < 0.5]
        if not members:
            members = [int(rng.integers(1, num_vars + 1))]
        clauses.append(tuple(members))
    return MonotoneCnf(num_vars, tuple(clauses))
