"""Canonical text rendering of formula ASTs. Parsing the printed form
reproduces the AST exactly (tested over randomized ASTs)."""

from __future__ import annotations

from .errors import FormulaValidationError
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
    RhClause,
    RhPi1Formula,
    Sigma2TwoSatFormula,
    SoLiteral,
    SumFo,
    SumSo,
    Top,
    TwoSatClause,
)

# Precedence levels: 0 quantifier body, 1 ->, 2 |, 3 &, 4 ~, 5 atoms.


def _fo(phi: FoFormula, prec: int) -> str:
    if isinstance(phi, (Exists, Forall)):
        kw = "exists" if isinstance(phi, Exists) else "forall"
        names = [phi.variable]
        body = phi.body
        while isinstance(body, type(phi)):
            names.append(body.variable)
            body = body.body
        text = f"{kw} {' '.join(names)} . {_fo(body, 0)}"
        return f"({text})" if prec > 0 else text
    if isinstance(phi, Implies):
        text = f"{_fo(phi.left, 2)} -> {_fo(phi.right, 1)}"
        return f"({text})" if prec > 1 else text
    if isinstance(phi, Or):
        text = f"{_fo(phi.left, 2)} | {_fo(phi.right, 3)}"
        return f"({text})" if prec > 2 else text
    if isinstance(phi, And):
        text = f"{_fo(phi.left, 3)} & {_fo(phi.right, 4)}"
        return f"({text})" if prec > 3 else text
    if isinstance(phi, Not):
        return f"~{_fo(phi.operand, 4)}"
    if isinstance(phi, Atom):
        return f"{phi.relation}({','.join(phi.variables)})"
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Bottom):
        return "bot"
    if isinstance(phi, Top):
        return "top"
    raise FormulaValidationError(f"unknown node {phi!r}")


def print_fo(phi: FoFormula) -> str:
    return _fo(phi, 0)


def _so_literal(lit: SoLiteral) -> str:
    sign = "" if lit.positive else "~"
    return f"{sign}{lit.so_var}({','.join(lit.variables)})"


def _clause_entry(part: SoLiteral | FoPart) -> str:
    if isinstance(part, SoLiteral):
        return _so_literal(part)
    if isinstance(part.formula, Top):
        return "top"
    if isinstance(part.formula, Bottom):
        return "bot"
    return f"{{ {_fo(part.formula, 0)} }}"


def _clause(cl: TwoSatClause) -> str:
    return " | ".join(_clause_entry(p) for p in cl.parts)


def _block(psi: Sigma2TwoSatFormula) -> str:
    parts = []
    if psi.exists_vars:
        parts.append(f"exists {' '.join(psi.exists_vars)} .")
    if psi.forall_vars:
        parts.append(f"forall {' '.join(psi.forall_vars)} .")
    body = " ; ".join(_clause(cl) for cl in psi.clauses)
    parts.append(f"[ {body} ]" if psi.clauses else "[ ]")
    return " ".join(parts)


def _qso(alpha: QsoFormula, in_plus: bool) -> str:
    if isinstance(alpha, Const):
        return str(alpha.value)
    if isinstance(alpha, Plus):
        # Right-nested sums keep explicit parens so reparsing rebuilds the
        # identical tree (surface '+' associates to the left).
        text = f"{_qso(alpha.left, True)} + {_qso(alpha.right, False)}"
        return f"({text})" if not in_plus else text
    if isinstance(alpha, SumSo):
        return f"sum {alpha.so_var}:{alpha.arity} . {_qso(alpha.body, False)}"
    if isinstance(alpha, SumFo):
        return f"sumfo {alpha.variable} . {_qso(alpha.body, False)}"
    if isinstance(alpha, Base):
        return _block(alpha.formula)
    raise FormulaValidationError(f"unknown node {alpha!r}")


def print_qso(alpha: QsoFormula) -> str:
    return _qso(alpha, True)


def print_pi2(spec: Pi2Spec) -> str:
    forall_part = f"forall {' '.join(spec.forall_vars)} ." if spec.forall_vars else "forall ."
    return (
        f"pivar {spec.so_var}:{spec.arity} . {forall_part} "
        f"exists {' '.join(spec.exists_vars)} . "
        f"{{ {_fo(spec.fo_part, 0)} }} & {spec.so_var}({','.join(spec.exists_vars)})"
    )


def _rh_clause(cl: RhClause) -> str:
    entries = []
    for lit in cl.fo_literals:
        if isinstance(lit, Top):
            entries.append("top")
        elif isinstance(lit, Bottom):
            entries.append("bot")
        else:
            entries.append(f"{{ {_fo(lit, 0)} }}")
    if cl.pos_so is not None:
        entries.append(_so_literal(cl.pos_so))
    if cl.neg_so is not None:
        entries.append(_so_literal(cl.neg_so))
    return " | ".join(entries)


def print_rh(rho: RhPi1Formula) -> str:
    parts = []
    for name, arity in rho.so_vars:
        parts.append(f"sum {name}:{arity} .")
    for name in rho.fo_count_vars:
        parts.append(f"sumfo {name} .")
    if rho.forall_vars:
        parts.append(f"forall {' '.join(rho.forall_vars)} .")
    else:
        parts.append("forall .")
    body = " ; ".join(_rh_clause(cl) for cl in rho.cnf)
    parts.append(f"[ {body} ]" if rho.cnf else "[ ]")
    return " ".join(parts)


def print_formula(formula, kind: str) -> str:
    if kind == "fo":
        return print_fo(formula)
    if kind == "qso":
        return print_qso(formula)
    if kind == "pi2":
        return print_pi2(formula)
    if kind == "rh":
        return print_rh(formula)
    raise FormulaValidationError(f"unknown formula kind {kind!r}")
