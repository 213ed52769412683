"""ASTs for the logics: first-order formulae, three-part 2SAT clauses,
existential-universal 2SAT blocks, quantitative sum formulae, the
single-variable forall-exists counting shape, and the restricted-Horn
counting shape. All nodes are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import FormulaValidationError

# ---------------------------------------------------------------------------
# First-order formulae
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Atom:
    relation: str
    variables: tuple[str, ...]


@dataclass(frozen=True)
class Not:
    operand: "FoFormula"


@dataclass(frozen=True)
class Or:
    left: "FoFormula"
    right: "FoFormula"


@dataclass(frozen=True)
class Exists:
    variable: str
    body: "FoFormula"


# Sugar constructors, lowered to the core before the core is required.


@dataclass(frozen=True)
class And:
    left: "FoFormula"
    right: "FoFormula"


@dataclass(frozen=True)
class Implies:
    left: "FoFormula"
    right: "FoFormula"


@dataclass(frozen=True)
class Forall:
    variable: str
    body: "FoFormula"


FoFormula = Union[Top, Bottom, Eq, Atom, Not, Or, Exists, And, Implies, Forall]

_CORE = (Top, Bottom, Eq, Atom)


def lower_fo(phi: FoFormula) -> FoFormula:
    """Rewrite sugar (And, Implies, Forall) into the core constructors
    (Not, Or, Exists, Eq, Atom, Top, Bottom). Idempotent."""
    if isinstance(phi, _CORE):
        return phi
    if isinstance(phi, Not):
        return Not(lower_fo(phi.operand))
    if isinstance(phi, Or):
        return Or(lower_fo(phi.left), lower_fo(phi.right))
    if isinstance(phi, Exists):
        return Exists(phi.variable, lower_fo(phi.body))
    if isinstance(phi, And):
        return Not(Or(Not(lower_fo(phi.left)), Not(lower_fo(phi.right))))
    if isinstance(phi, Implies):
        return Or(Not(lower_fo(phi.left)), lower_fo(phi.right))
    if isinstance(phi, Forall):
        return Not(Exists(phi.variable, Not(lower_fo(phi.body))))
    raise FormulaValidationError(f"unknown node {phi!r}")


def fo_free_vars(phi: FoFormula) -> frozenset[str]:
    if isinstance(phi, (Top, Bottom)):
        return frozenset()
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, Atom):
        return frozenset(phi.variables)
    if isinstance(phi, Not):
        return fo_free_vars(phi.operand)
    if isinstance(phi, (Or, And, Implies)):
        return fo_free_vars(phi.left) | fo_free_vars(phi.right)
    if isinstance(phi, (Exists, Forall)):
        return fo_free_vars(phi.body) - {phi.variable}
    raise FormulaValidationError(f"unknown node {phi!r}")


def substitute_fo(phi: FoFormula, env: dict[str, str]) -> FoFormula:
    """Rename free variables per env (used when padding rebinds clause vars)."""
    if isinstance(phi, (Top, Bottom)):
        return phi
    if isinstance(phi, Eq):
        return Eq(env.get(phi.left, phi.left), env.get(phi.right, phi.right))
    if isinstance(phi, Atom):
        return Atom(phi.relation, tuple(env.get(v, v) for v in phi.variables))
    if isinstance(phi, Not):
        return Not(substitute_fo(phi.operand, env))
    if isinstance(phi, Or):
        return Or(substitute_fo(phi.left, env), substitute_fo(phi.right, env))
    if isinstance(phi, And):
        return And(substitute_fo(phi.left, env), substitute_fo(phi.right, env))
    if isinstance(phi, Implies):
        return Implies(substitute_fo(phi.left, env), substitute_fo(phi.right, env))
    if isinstance(phi, (Exists, Forall)):
        inner = {k: v for k, v in env.items() if k != phi.variable}
        body = substitute_fo(phi.body, inner)
        return type(phi)(phi.variable, body)
    raise FormulaValidationError(f"unknown node {phi!r}")


# ---------------------------------------------------------------------------
# Three-part 2SAT clauses over set variables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SoLiteral:
    """A (possibly negated) application of a set variable to FO variables."""

    positive: bool
    so_var: str
    variables: tuple[str, ...]


@dataclass(frozen=True)
class FoPart:
    formula: FoFormula


ClausePart = Union[SoLiteral, FoPart]


@dataclass(frozen=True)
class TwoSatClause:
    """Disjunction of exactly three parts, at most two of which are set-variable
    literals and at least one of which is a first-order formula."""

    parts: tuple[ClausePart, ...]

    def __post_init__(self):
        if len(self.parts) != 3:
            raise FormulaValidationError(f"clause must have exactly 3 parts, got {len(self.parts)}")
        n_so = sum(1 for p in self.parts if isinstance(p, SoLiteral))
        n_fo = sum(1 for p in self.parts if isinstance(p, FoPart))
        if n_so > 2:
            raise FormulaValidationError("clause has more than two set-variable literals")
        if n_fo < 1:
            raise FormulaValidationError("clause has no first-order part")

    def free_fo_vars(self) -> frozenset[str]:
        out: set[str] = set()
        for p in self.parts:
            if isinstance(p, SoLiteral):
                out.update(p.variables)
            else:
                out.update(fo_free_vars(p.formula))
        return frozenset(out)

    def so_vars(self) -> frozenset[str]:
        return frozenset(p.so_var for p in self.parts if isinstance(p, SoLiteral))


def clause(*parts: ClausePart) -> TwoSatClause:
    """Build a clause, padding to three parts with bottom."""
    padded = tuple(parts) + tuple(FoPart(Bottom()) for _ in range(3 - len(parts)))
    return TwoSatClause(padded)


@dataclass(frozen=True)
class Sigma2TwoSatFormula:
    """exists x1..xk . forall y1..ym . conjunction of 2SAT clauses.

    Clause variables outside the exists/forall prefix stay free here; they
    may be bound by enclosing quantitative sum binders.
    """

    exists_vars: tuple[str, ...]
    forall_vars: tuple[str, ...]
    clauses: tuple[TwoSatClause, ...]

    def __post_init__(self):
        bound = set(self.exists_vars) | set(self.forall_vars)
        if len(bound) != len(self.exists_vars) + len(self.forall_vars):
            raise FormulaValidationError("exists/forall variable lists overlap or repeat")

    def free_fo_vars(self) -> frozenset[str]:
        bound = set(self.exists_vars) | set(self.forall_vars)
        out: set[str] = set()
        for cl in self.clauses:
            out |= cl.free_fo_vars()
        return frozenset(out - bound)

    def so_vars(self) -> frozenset[str]:
        out: set[str] = set()
        for cl in self.clauses:
            out |= cl.so_vars()
        return frozenset(out)


# ---------------------------------------------------------------------------
# Quantitative sum formulae
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Base:
    formula: Sigma2TwoSatFormula


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise FormulaValidationError("constants must be non-negative")


@dataclass(frozen=True)
class Plus:
    left: "QsoFormula"
    right: "QsoFormula"


@dataclass(frozen=True)
class SumFo:
    variable: str
    body: "QsoFormula"


@dataclass(frozen=True)
class SumSo:
    so_var: str
    arity: int
    body: "QsoFormula"

    def __post_init__(self):
        if self.arity < 1:
            raise FormulaValidationError(f"set variable {self.so_var}: arity must be >= 1")


QsoFormula = Union[Base, Const, Plus, SumFo, SumSo]


# ---------------------------------------------------------------------------
# Single-set-variable forall-exists counting shape
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Pi2Spec:
    """Counts set variables X with matrix exactly phi(y, z) and X(z):
    forall y . exists z . (phi(y, z) and X(z1, ..., zk))."""

    so_var: str
    arity: int
    forall_vars: tuple[str, ...]
    exists_vars: tuple[str, ...]
    fo_part: FoFormula

    def __post_init__(self):
        if self.arity < 1:
            raise FormulaValidationError("arity must be >= 1")
        if len(self.exists_vars) != self.arity:
            raise FormulaValidationError(
                f"exists block has {len(self.exists_vars)} variables, arity is {self.arity}"
            )
        bound = set(self.forall_vars) | set(self.exists_vars)
        if len(bound) != len(self.forall_vars) + len(self.exists_vars):
            raise FormulaValidationError("forall/exists variable lists overlap or repeat")
        loose = fo_free_vars(self.fo_part) - bound
        if loose:
            raise FormulaValidationError(f"free variables {sorted(loose)} in matrix")


# ---------------------------------------------------------------------------
# Restricted-Horn universal counting shape
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RhClause:
    """CNF clause with any number of first-order literals, at most one
    positive and at most one negative set-variable literal."""

    fo_literals: tuple[FoFormula, ...]
    pos_so: SoLiteral | None
    neg_so: SoLiteral | None

    def __post_init__(self):
        if self.pos_so is not None and not self.pos_so.positive:
            raise FormulaValidationError("pos_so slot holds a negated literal")
        if self.neg_so is not None and self.neg_so.positive:
            raise FormulaValidationError("neg_so slot holds a positive literal")


@dataclass(frozen=True)
class RhPi1Formula:
    so_vars: tuple[tuple[str, int], ...]
    fo_count_vars: tuple[str, ...]
    forall_vars: tuple[str, ...]
    cnf: tuple[RhClause, ...]

    def __post_init__(self):
        names = [n for n, _ in self.so_vars]
        if len(set(names)) != len(names):
            raise FormulaValidationError("repeated set variable in prefix")
        bound = set(self.fo_count_vars) | set(self.forall_vars)
        if len(bound) != len(self.fo_count_vars) + len(self.forall_vars):
            raise FormulaValidationError("count/forall variable lists overlap or repeat")
        arities = dict(self.so_vars)
        for cl in self.cnf:
            loose: set[str] = set()
            for lit in cl.fo_literals:
                loose |= fo_free_vars(lit)
            for so in (cl.pos_so, cl.neg_so):
                if so is None:
                    continue
                if so.so_var not in arities:
                    raise FormulaValidationError(f"set variable {so.so_var} not in prefix")
                if len(so.variables) != arities[so.so_var]:
                    raise FormulaValidationError(
                        f"{so.so_var} applied to {len(so.variables)} variables, arity is "
                        f"{arities[so.so_var]}"
                    )
                loose |= set(so.variables)
            loose -= bound
            if loose:
                raise FormulaValidationError(f"clause variables {sorted(loose)} unbound")


# ---------------------------------------------------------------------------
# Sum normal form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormalTerm:
    """One summand: sum over shared set variables, then over fo_sum_vars,
    of an exists/forall 2SAT block."""

    fo_sum_vars: tuple[str, ...]
    exists_vars: tuple[str, ...]
    forall_vars: tuple[str, ...]
    clauses: tuple[TwoSatClause, ...]


@dataclass(frozen=True)
class SumNormalForm:
    """Sum of terms over one shared, ordered list of set variables. Every
    term ranges over the full list; terms not mentioning a variable carry a
    full-relation forcing clause for it (added during normalization)."""

    so_vars: tuple[tuple[str, int], ...]
    terms: tuple[NormalTerm, ...]
