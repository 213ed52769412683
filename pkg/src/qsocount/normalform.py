"""Sentence checking, the restricted sum-of-terms normalizer, and the
conversion of restricted-Horn counting formulae into quantitative sums.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NormalizationError
from .formulas import (
    Base,
    Bottom,
    Const,
    FoFormula,
    FoPart,
    Not,
    Or,
    Plus,
    QsoFormula,
    RhPi1Formula,
    Sigma2TwoSatFormula,
    SoLiteral,
    SumFo,
    SumNormalForm,
    SumSo,
    NormalTerm,
    TwoSatClause,
    clause,
    fo_free_vars,
)

# ---------------------------------------------------------------------------
# Free variables / sentence check
# ---------------------------------------------------------------------------


def _clause_free(cl: TwoSatClause, fo_bound: frozenset[str], so_bound: frozenset[str]):
    free_fo: set[str] = set()
    free_so: set[str] = set()
    for part in cl.parts:
        if isinstance(part, SoLiteral):
            if part.so_var not in so_bound:
                free_so.add(part.so_var)
            free_fo.update(v for v in part.variables if v not in fo_bound)
        else:
            free_fo.update(fo_free_vars(part.formula) - fo_bound)
    return free_fo, free_so


def _qso_free(alpha: QsoFormula, fo_bound: frozenset[str], so_bound: frozenset[str]):
    if isinstance(alpha, Const):
        return set(), set()
    if isinstance(alpha, Plus):
        lf, ls = _qso_free(alpha.left, fo_bound, so_bound)
        rf, rs = _qso_free(alpha.right, fo_bound, so_bound)
        return lf | rf, ls | rs
    if isinstance(alpha, SumFo):
        return _qso_free(alpha.body, fo_bound | {alpha.variable}, so_bound)
    if isinstance(alpha, SumSo):
        return _qso_free(alpha.body, fo_bound, so_bound | {alpha.so_var})
    if isinstance(alpha, Base):
        psi = alpha.formula
        inner = fo_bound | set(psi.exists_vars) | set(psi.forall_vars)
        free_fo: set[str] = set()
        free_so: set[str] = set()
        for cl in psi.clauses:
            f, s = _clause_free(cl, frozenset(inner), so_bound)
            free_fo |= f
            free_so |= s
        return free_fo, free_so
    raise NormalizationError(f"unknown node {alpha!r}")


def check_sentence(alpha: QsoFormula) -> list[str]:
    """Return the sorted list of free variable names; empty means sentence."""
    free_fo, free_so = _qso_free(alpha, frozenset(), frozenset())
    return sorted(free_fo | free_so)


# ---------------------------------------------------------------------------
# Name pool for fresh variables
# ---------------------------------------------------------------------------


class _NamePool:
    def __init__(self):
        self.used: set[str] = set()

    def reserve_qso(self, alpha: QsoFormula) -> None:
        if isinstance(alpha, Const):
            return
        if isinstance(alpha, Plus):
            self.reserve_qso(alpha.left)
            self.reserve_qso(alpha.right)
        elif isinstance(alpha, SumFo):
            self.used.add(alpha.variable)
            self.reserve_qso(alpha.body)
        elif isinstance(alpha, SumSo):
            self.used.add(alpha.so_var)
            self.reserve_qso(alpha.body)
        elif isinstance(alpha, Base):
            psi = alpha.formula
            self.used.update(psi.exists_vars)
            self.used.update(psi.forall_vars)
            for cl in psi.clauses:
                for part in cl.parts:
                    if isinstance(part, SoLiteral):
                        self.used.add(part.so_var)
                        self.used.update(part.variables)
                    else:
                        self.used.update(fo_free_vars(part.formula))

    def fresh(self, stem: str) -> str:
        if stem not in self.used:
            self.used.add(stem)
            return stem
        i = 0
        while f"{stem}{i}" in self.used:
            i += 1
        name = f"{stem}{i}"
        self.used.add(name)
        return name


# ---------------------------------------------------------------------------
# Sum-of-terms normalizer
# ---------------------------------------------------------------------------


@dataclass
class _RawTerm:
    so_binders: list[tuple[str, int]]
    fo_vars: list[str]
    exists_vars: tuple[str, ...]
    forall_vars: tuple[str, ...]
    clauses: tuple[TwoSatClause, ...]


def _rename_so(cl: TwoSatClause, old: str, new: str) -> TwoSatClause:
    parts = tuple(
        SoLiteral(p.positive, new, p.variables)
        if isinstance(p, SoLiteral) and p.so_var == old
        else p
        for p in cl.parts
    )
    return TwoSatClause(parts)


def _one_term(alpha: QsoFormula) -> _RawTerm:
    so_binders: list[tuple[str, int]] = []
    fo_vars: list[str] = []
    node = alpha
    while True:
        if isinstance(node, SumSo):
            so_binders.append((node.so_var, node.arity))
            node = node.body
        elif isinstance(node, SumFo):
            fo_vars.append(node.variable)
            node = node.body
        elif isinstance(node, Base):
            psi = node.formula
            return _RawTerm(so_binders, fo_vars, psi.exists_vars, psi.forall_vars, psi.clauses)
        elif isinstance(node, Const):
            raise _ConstTerm(so_binders, fo_vars, node.value)
        elif isinstance(node, Plus):
            raise NormalizationError(
                "sum '+' under a quantitative binder is outside the sum-of-terms "
                "fragment; distribute it first (sum X . (a + b) = sum X . a + sum X . b)"
            )
        else:
            raise NormalizationError(f"unknown node {node!r}")


class _ConstTerm(Exception):
    def __init__(self, so_binders, fo_vars, value):
        self.so_binders = so_binders
        self.fo_vars = fo_vars
        self.value = value


def normalize_qso(alpha: QsoFormula) -> SumNormalForm:
    """Flatten a sum-of-terms sentence into terms over one shared list of
    set variables.

    Accepted fragment: a '+'-combination of terms, each term a chain of
    set/element sum binders over a single 2SAT block or constant. Within a
    term, set-variable binders are hoisted outside element binders (sums
    commute). A constant s becomes s copies of the unit term
    ``sum U:1 . forall u . [ U(u) | bot | bot ]`` (exactly one satisfying
    assignment). Every term is padded to the shared variable list with
    full-relation forcing clauses ``X(u1..uk) | bot | bot`` for the set
    variables it does not mention, leaving its value unchanged.
    """
    free = check_sentence(alpha)
    if free:
        raise NormalizationError(f"not a sentence; free variables: {', '.join(free)}")

    pool = _NamePool()
    pool.reserve_qso(alpha)
    unit_name: list[str] = []

    raw_terms: list[_RawTerm] = []

    def collect(node: QsoFormula) -> None:
        if isinstance(node, Plus):
            collect(node.left)
            collect(node.right)
            return
        try:
            raw_terms.append(_one_term(node))
        except _ConstTerm as const:
            if not unit_name:
                unit_name.append(pool.fresh("U"))
            uvar = pool.fresh("u")
            unit = clause(SoLiteral(True, unit_name[0], (uvar,)))
            for _ in range(const.value):
                raw_terms.append(
                    _RawTerm(
                        list(const.so_binders) + [(unit_name[0], 1)],
                        list(const.fo_vars),
                        (),
                        (uvar,),
                        (unit,),
                    )
                )

    collect(alpha)

    # Shared set-variable list: first occurrence wins its slot; a name reused
    # at a different arity in a later term is renamed there.
    shared: list[tuple[str, int]] = []
    shared_arity: dict[str, int] = {}
    for term in raw_terms:
        renames: dict[str, str] = {}
        for idx, (name, arity) in enumerate(term.so_binders):
            if name in shared_arity and shared_arity[name] != arity:
                new = pool.fresh(name)
                renames[name] = new
                term.so_binders[idx] = (new, arity)
                name = new
            if name not in shared_arity:
                shared_arity[name] = arity
                shared.append((name, arity))
        if renames:
            term.clauses = tuple(
                _apply_renames(cl, renames) for cl in term.clauses
            )

    # Pad each term with full-relation forcing clauses for absent variables.
    terms: list[NormalTerm] = []
    for term in raw_terms:
        own = {name for name, _ in term.so_binders}
        forall_vars = list(term.forall_vars)
        clauses = list(term.clauses)
        for name, arity in shared:
            if name in own:
                continue
            fresh_vars = tuple(pool.fresh("u") for _ in range(arity))
            forall_vars.extend(fresh_vars)
            clauses.append(clause(SoLiteral(True, name, fresh_vars)))
        terms.append(
            NormalTerm(
                tuple(term.fo_vars),
                term.exists_vars,
                tuple(forall_vars),
                tuple(clauses),
            )
        )

    return SumNormalForm(tuple(shared), tuple(terms))


def _apply_renames(cl: TwoSatClause, renames: dict[str, str]) -> TwoSatClause:
    out = cl
    for old, new in renames.items():
        out = _rename_so(out, old, new)
    return out


def normal_form_to_qso(nf: SumNormalForm) -> QsoFormula:
    """Rebuild a quantitative formula from a normal form (used to check value
    preservation against the evaluator)."""
    terms: list[QsoFormula] = []
    for term in nf.terms:
        node: QsoFormula = Base(
            Sigma2TwoSatFormula(term.exists_vars, term.forall_vars, term.clauses)
        )
        for var in reversed(term.fo_sum_vars):
            node = SumFo(var, node)
        for name, arity in reversed(nf.so_vars):
            node = SumSo(name, arity, node)
        terms.append(node)
    if not terms:
        return Const(0)
    out = terms[0]
    for t in terms[1:]:
        out = Plus(out, t)
    return out


# ---------------------------------------------------------------------------
# Restricted-Horn conversion
# ---------------------------------------------------------------------------


def rh_to_qso(rho: RhPi1Formula) -> QsoFormula:
    """Convert a restricted-Horn universal counting formula into a sum
    sentence with the same value: all first-order literals of a clause fold
    into one disjunction, joined by the clause's (at most one) negative and
    (at most one) positive set-variable literal."""
    clauses = []
    for cl in rho.cnf:
        fold: FoFormula
        if not cl.fo_literals:
            fold = Bottom()
        else:
            fold = cl.fo_literals[0]
            for lit in cl.fo_literals[1:]:
                fold = Or(fold, lit)
        parts: list = [FoPart(fold)]
        if cl.neg_so is not None:
            parts.append(cl.neg_so)
        if cl.pos_so is not None:
            parts.append(cl.pos_so)
        clauses.append(clause(*parts))
    node: QsoFormula = Base(
        Sigma2TwoSatFormula((), rho.forall_vars, tuple(clauses))
    )
    for var in reversed(rho.fo_count_vars):
        node = SumFo(var, node)
    for name, arity in reversed(rho.so_vars):
        node = SumSo(name, arity, node)
    return node
