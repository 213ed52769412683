"""Counting reductions and encoders.

Two directions each way:

* sum-of-terms sentences  ->  disjunction-of-2SAT (count-preserving), and
  disjunction-of-2SAT     ->  sum sentence over an encoding structure;
* single-set-variable forall-exists counting  ->  monotone CNF with a
  power-of-two multiplier, and monotone CNF / vertex-cover instances ->
  forall-exists counting over an encoding structure.

Everything here is deterministic: ground atoms are ordered by declaration
then tuple order, groups and branches by expansion order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EncodingError, BudgetExceededError, ReductionError
from .evaluate import EvalBudget, _fo_holds
from .formulas import (
    Atom,
    Base,
    FoPart,
    Not,
    Or,
    Pi2Spec,
    QsoFormula,
    Sigma2TwoSatFormula,
    SoLiteral,
    SumNormalForm,
    SumSo,
    TwoSatClause,
    clause,
)
from .propcount import Disj2SatFormula, MonotoneCnf
from .structures import Structure, Vocabulary


@dataclass(frozen=True)
class AtomTable:
    """Bijection between ground set-variable atoms plus selector variables
    and propositional variable indices. Atoms are ordered by set-variable
    declaration order, then tuple lexicographic order; selectors come last."""

    atoms: tuple[tuple[str, tuple[int, ...]], ...]
    selectors: tuple[int, ...]

    def variable_of(self, so_var: str, elements: tuple[int, ...]) -> int:
        return self.atoms.index((so_var, elements)) + 1

    def num_vars(self) -> int:
        return len(self.atoms) + len(self.selectors)

    def to_json(self) -> dict:
        return {
            "atoms": [
                {"variable": i + 1, "set_var": name, "elements": list(tup)}
                for i, (name, tup) in enumerate(self.atoms)
            ],
            "selectors": list(self.selectors),
        }


@dataclass(frozen=True)
class ProductResult:
    """Either Unsatisfiable (the true count is zero) or a monotone CNF with
    a correction exponent: original count = cnf count * 2**exponent."""

    unsatisfiable: bool
    cnf: MonotoneCnf | None = None
    exponent: int | None = None

    @staticmethod
    def unsat() -> "ProductResult":
        return ProductResult(True)

    @staticmethod
    def reduced(cnf: MonotoneCnf, exponent: int) -> "ProductResult":
        return ProductResult(False, cnf, exponent)


# ---------------------------------------------------------------------------
# Sum-of-terms  ->  disjunction of 2SAT
# ---------------------------------------------------------------------------


def reduce_qso_to_d2s(
    nf: SumNormalForm, A: Structure, budget: EvalBudget | None = None
) -> tuple[Disj2SatFormula, AtomTable]:
    """Ground a normal form over a structure into a propositional disjunction
    of 2SAT conjuncts with exactly as many models as the sentence's value.

    Pipeline: expand element sums and quantifiers over the universe; decide
    each closed first-order part and simplify clauses through top/bottom; a
    clause losing all its parts becomes a contradiction on the group's
    selector variable; ground atoms absent after simplification get a
    tautology clause in every disjunct (their variables stay free); finally
    each (term, sum-assignment) group is tagged with its own selector set
    true and all others false, making the groups' model sets disjoint.
    """
    if A.universe_size == 0:
        raise ReductionError("empty universe")
    budget = budget or EvalBudget()
    n = A.universe_size

    atoms: list[tuple[str, tuple[int, ...]]] = []
    for name, arity in nf.so_vars:
        for tup in itertools.product(range(n), repeat=arity):
            atoms.append((name, tup))
    atom_var = {atom: i + 1 for i, atom in enumerate(atoms)}

    num_groups = 0
    for term in nf.terms:
        width = len(term.fo_sum_vars) + len(term.exists_vars) + len(term.forall_vars)
        expansion = (n**width) * max(1, len(term.clauses))
        if expansion > budget.max_fo_expansion:
            raise BudgetExceededError(
                f"term expands to {expansion} ground clauses > budget {budget.max_fo_expansion}"
            )
        num_groups += n ** len(term.fo_sum_vars)

    selectors = tuple(range(len(atoms) + 1, len(atoms) + num_groups + 1))

    # First pass: ground every (group, branch) conjunct, tracking which atoms
    # survive simplification.
    grouped: list[list[list[tuple[int, ...]]]] = []  # group -> branch -> clauses
    used_atoms: set[tuple[str, tuple[int, ...]]] = set()
    group_index = 0
    env: dict[str, int] = {}
    for term in nf.terms:
        for sum_choice in itertools.product(range(n), repeat=len(term.fo_sum_vars)):
            selector = selectors[group_index]
            group_index += 1
            branches: list[list[tuple[int, ...]]] = []
            for exists_choice in itertools.product(range(n), repeat=len(term.exists_vars)):
                ground_clauses: list[tuple[int, ...]] = []
                for cl in term.clauses:
                    for forall_choice in itertools.product(
                        range(n), repeat=len(term.forall_vars)
                    ):
                        env.clear()
                        env.update(zip(term.fo_sum_vars, sum_choice))
                        env.update(zip(term.exists_vars, exists_choice))
                        env.update(zip(term.forall_vars, forall_choice))
                        pending: list[tuple[int, tuple[str, tuple[int, ...]]]] = []
                        satisfied = False
                        for part in cl.parts:
                            if isinstance(part, SoLiteral):
                                tup = tuple(env[v] for v in part.variables)
                                atom = (part.so_var, tup)
                                var = atom_var[atom]
                                pending.append((var if part.positive else -var, atom))
                            elif _fo_holds(A, part.formula, env):
                                satisfied = True
                                break
                        if satisfied:
                            continue
                        lits = []
                        for lit, atom in pending:
                            used_atoms.add(atom)
                            lits.append(lit)
                        if not lits:
                            # Contradiction on this group's selector; no
                            # fresh variables, so the count is untouched.
                            ground_clauses.append((selector,))
                            ground_clauses.append((-selector,))
                        else:
                            ground_clauses.append(tuple(lits))
                branches.append(ground_clauses)
            grouped.append(branches)

    missing = [atom for atom in atoms if atom not in used_atoms]

    disjuncts: list[tuple[tuple[int, ...], ...]] = []
    group_index = 0
    for branches in grouped:
        selector = selectors[group_index]
        group_index += 1
        others = [s for s in selectors if s != selector]
        for ground_clauses in branches:
            conj = list(ground_clauses)
            for atom in missing:
                var = atom_var[atom]
                conj.append((var, -var))
            conj.append((selector,))
            conj.extend((-s,) for s in others)
            disjuncts.append(tuple(conj))

    formula = Disj2SatFormula(len(atoms) + num_groups, tuple(disjuncts))
    return formula, AtomTable(tuple(atoms), selectors)


# ---------------------------------------------------------------------------
# Forall-exists counting  ->  monotone CNF with multiplier
# ---------------------------------------------------------------------------


def reduce_pi2_to_monotone(
    spec: Pi2Spec, A: Structure, budget: EvalBudget | None = None
) -> ProductResult:
    """Ground the matrix over the structure: rows whose first-order part is
    false lose that disjunct; a row losing every disjunct makes the instance
    unsatisfiable. Surviving atoms become propositional variables; tuples
    never mentioned contribute the factor 2**exponent."""
    if A.universe_size == 0:
        raise ReductionError("empty universe")
    budget = budget or EvalBudget()
    n = A.universe_size
    if n**spec.arity > budget.max_so_exponent:
        raise BudgetExceededError(
            f"tuple space {n}^{spec.arity} exceeds budget {budget.max_so_exponent}"
        )
    for count_vars in (spec.forall_vars, spec.exists_vars):
        if n ** len(count_vars) > budget.max_fo_expansion:
            raise BudgetExceededError(
                f"quantifier block expands {n}^{len(count_vars)} > budget "
                f"{budget.max_fo_expansion}"
            )

    env: dict[str, int] = {}
    rows: list[tuple[tuple[int, ...], ...]] = []
    seen_rows: set[tuple[tuple[int, ...], ...]] = set()
    for ys in itertools.product(range(n), repeat=len(spec.forall_vars)):
        surviving: list[tuple[int, ...]] = []
        for zs in itertools.product(range(n), repeat=len(spec.exists_vars)):
            env.clear()
            env.update(zip(spec.forall_vars, ys))
            env.update(zip(spec.exists_vars, zs))
            if _fo_holds(A, spec.fo_part, env):
                surviving.append(zs)
        if not surviving:
            return ProductResult.unsat()
        row = tuple(sorted(set(surviving)))
        if row not in seen_rows:
            seen_rows.add(row)
            rows.append(row)

    surviving_atoms = sorted({tup for row in rows for tup in row})
    atom_var = {tup: i + 1 for i, tup in enumerate(surviving_atoms)}
    clauses = tuple(tuple(atom_var[tup] for tup in row) for row in rows)
    exponent = n**spec.arity - len(surviving_atoms)
    return ProductResult.reduced(MonotoneCnf(len(surviving_atoms), clauses), exponent)


# ---------------------------------------------------------------------------
# Encoders (membership directions)
# ---------------------------------------------------------------------------

_D2S_VOCAB = Vocabulary(
    (("C1", 3), ("C2", 3), ("C3", 3), ("C4", 3), ("D", 2), ("Var", 1), ("Disj", 1))
)


def encode_d2s_as_qso(phi: Disj2SatFormula) -> tuple[Structure, QsoFormula]:
    """Encode a propositional disjunction of 2SAT conjuncts as a structure
    plus a sum sentence whose value is exactly the model count.

    Universe: variable elements, then one element per clause occurrence,
    then one element per disjunct. Clause relations hold the four
    sign patterns (positive/positive through negated/negated); D links each
    disjunct to its clauses; Var and Disj sort the universe so the counted
    relation is confined to variable elements and the witness to disjunct
    elements. A unit clause acts as its own doubling; an empty clause
    becomes a contradictory pair on variable 1.
    """
    if phi.num_vars < 1:
        raise EncodingError("need at least one propositional variable")
    if phi.variables != tuple(range(1, phi.num_vars + 1)):
        raise EncodingError("cannot encode a restricted formula")

    num_vars = phi.num_vars
    clause_rows: list[tuple[str, int, int]] = []  # (pattern, x, y) per clause element
    d_pairs: list[tuple[int, int]] = []  # (disjunct element, clause element), filled later
    clause_owner: list[int] = []  # disjunct index per clause element

    for d_index, conj in enumerate(phi.disjuncts):
        for cl in conj:
            if len(cl) == 0:
                # Contradictory pair on variable 1 keeps the count intact.
                clause_rows.append(("C1", 0, 0))
                clause_owner.append(d_index)
                clause_rows.append(("C4", 0, 0))
                clause_owner.append(d_index)
                continue
            a = cl[0]
            b = cl[1] if len(cl) == 2 else cl[0]
            pattern = {
                (True, True): "C1",
                (False, True): "C2",
                (True, False): "C3",
                (False, False): "C4",
            }[(a > 0, b > 0)]
            clause_rows.append((pattern, abs(a) - 1, abs(b) - 1))
            clause_owner.append(d_index)

    num_clause_elems = len(clause_rows)
    num_disjuncts = len(phi.disjuncts)
    clause_base = num_vars
    disjunct_base = num_vars + num_clause_elems
    universe = num_vars + num_clause_elems + num_disjuncts

    rels: dict[str, set[tuple[int, ...]]] = {name: set() for name, _ in _D2S_VOCAB.symbols}
    for v in range(num_vars):
        rels["Var"].add((v,))
    for d_index in range(num_disjuncts):
        rels["Disj"].add((disjunct_base + d_index,))
    for c_index, (pattern, x, y) in enumerate(clause_rows):
        c_elem = clause_base + c_index
        rels[pattern].add((c_elem, x, y))
        rels["D"].add((disjunct_base + clause_owner[c_index], c_elem))

    structure = Structure(
        _D2S_VOCAB, universe, {name: frozenset(tups) for name, tups in rels.items()}
    )

    def guard(pattern: str) -> FoPart:
        return FoPart(
            Or(Not(Atom("D", ("d", "c"))), Not(Atom(pattern, ("c", "x", "y"))))
        )

    t = lambda v, pos: SoLiteral(pos, "T", (v,))
    clauses = (
        clause(FoPart(Atom("Disj", ("d",)))),
        # Confine the counted set to variable elements: T(x) -> Var(x).
        clause(FoPart(Atom("Var", ("x",))), t("x", False)),
        TwoSatClause((guard("C1"), t("x", True), t("y", True))),
        TwoSatClause((guard("C2"), t("x", False), t("y", True))),
        TwoSatClause((guard("C3"), t("x", True), t("y", False))),
        TwoSatClause((guard("C4"), t("x", False), t("y", False))),
    )
    sentence = SumSo(
        "T", 1, Base(Sigma2TwoSatFormula(("d",), ("c", "x", "y"), clauses))
    )
    return structure, sentence


_MONO_VOCAB = Vocabulary((("C", 2), ("IsClause", 1)))


def encode_monotone_as_pi2(phi: MonotoneCnf) -> tuple[Structure, Pi2Spec, int]:
    """Encode a monotone CNF as a structure plus a forall-exists counting
    spec. Universe: clause elements then variable elements; C(c, x) holds
    when variable x occurs in clause c. Returns the correction exponent m
    (the clause count): spec count = cnf count * 2**m, because the counted
    set is unconstrained on clause elements and every model of a
    clause-bearing monotone CNF is nonempty."""
    if not phi.clauses:
        raise EncodingError("need at least one clause")
    m = len(phi.clauses)
    universe = m + phi.num_vars
    c_rel = set()
    for c_index, cl in enumerate(phi.clauses):
        for v in cl:
            c_rel.add((c_index, m + v - 1))
    structure = Structure(
        _MONO_VOCAB,
        universe,
        {
            "C": frozenset(c_rel),
            "IsClause": frozenset((c,) for c in range(m)),
        },
    )
    spec = Pi2Spec(
        "T",
        1,
        ("c",),
        ("x",),
        Or(Not(Atom("IsClause", ("c",))), Atom("C", ("c", "x"))),
    )
    return structure, spec, m


_VC_VOCAB = Vocabulary((("E", 2), ("End", 2), ("IsEdge", 1)))


def encode_vc(
    num_vertices: int, edges: list[tuple[int, int]]
) -> tuple[Structure, Pi2Spec, int]:
    """Encode a graph for all-sizes vertex-cover counting. Universe:
    vertices then edge elements; End(u, e) holds when u is an endpoint of e.
    Returns the correction exponent |E|: cover count = spec count / 2**|E|
    (the counted set is unconstrained on edge elements)."""
    if num_vertices < 1:
        raise EncodingError("need at least one vertex")
    normalized: list[tuple[int, int]] = []
    seen = set()
    for u, v in edges:
        if not (0 <= u < num_vertices and 0 <= v < num_vertices):
            raise EncodingError(f"edge ({u}, {v}) outside vertex range")
        key = (min(u, v), max(u, v))
        if key not in seen:
            seen.add(key)
            normalized.append(key)
    if not normalized:
        raise EncodingError("need at least one edge")

    num_edges = len(normalized)
    universe = num_vertices + num_edges
    e_rel = set()
    end_rel = set()
    is_edge = set()
    for e_index, (u, v) in enumerate(normalized):
        e_elem = num_vertices + e_index
        e_rel.add((u, v))
        e_rel.add((v, u))
        end_rel.add((u, e_elem))
        end_rel.add((v, e_elem))
        is_edge.add((e_elem,))
    structure = Structure(
        _VC_VOCAB,
        universe,
        {
            "E": frozenset(e_rel),
            "End": frozenset(end_rel),
            "IsEdge": frozenset(is_edge),
        },
    )
    spec = Pi2Spec(
        "VC",
        1,
        ("x",),
        ("y",),
        Or(Not(Atom("IsEdge", ("x",))), Atom("End", ("y", "x"))),
    )
    return structure, spec, num_edges
