"""Surface syntax for the four formula kinds.

Kinds and shapes::

    fo    exists y . R(x,y) & ~(x = y)
    qso   sum T:1 . sumfo x . exists y . forall z . [ T(z) | ~T(y) | {E(y,z)} ; ... ]
    pi2   pivar T:1 . forall c . exists x . { C(c,x) } & T(x)
    rh    sum X:1 . sumfo x . forall y1 y2 . [ {~E(y1,y2)} | ~X(y1) | X(y2) ; ... ]

Conventions: `~` negation, `&` / `|` / `->` connectives, `top` / `bot`,
`x = y` equality, atom arguments comma-separated, quantifier variable lists
space-separated. Inside a qso/rh clause, entries are separated by `|`;
set-variable literals appear bare, first-order parts inside `{ }` (with
`top` and `bot` allowed bare). `#` starts a comment to end of line.

Variable names may not collide with relation symbols, and no name may be
bound twice along a path (shadowing is rejected).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import FormulaSyntaxError, FormulaValidationError
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
    Implies,
    Not,
    Or,
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
from .structures import Vocabulary

_KEYWORDS = {"sum", "sumfo", "exists", "forall", "top", "bot", "pivar"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<sym>[+.:;|{}\[\]()=~&,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'int' | 'ident' | 'kw' | symbol text | 'eof'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r} at offset {i}")
        i = m.end()
        if m.lastgroup in ("ws", "comment"):
            continue
        if m.lastgroup == "int":
            tokens.append(_Token("int", m.group(), m.start()))
        elif m.lastgroup == "ident":
            kind = "kw" if m.group() in _KEYWORDS else "ident"
            tokens.append(_Token(kind, m.group(), m.start()))
        else:
            tokens.append(_Token(m.group(), m.group(), m.start()))
    tokens.append(_Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vocabulary: Vocabulary):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.vocab = vocabulary
        self.bound: set[str] = set()  # all names bound on the current path
        self.so_arities: dict[str, int] = {}

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def accept(self, kind: str, text: str | None = None) -> _Token | None:
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if not self.at(kind, text):
            want = text or kind
            raise FormulaSyntaxError(f"expected {want!r}, got {tok.text!r} at offset {tok.pos}")
        return self.next()

    def expect_eof(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            raise FormulaSyntaxError(f"trailing input {tok.text!r} at offset {tok.pos}")

    # -- binder bookkeeping -----------------------------------------------

    def bind(self, name: str) -> None:
        if self.vocab.has(name):
            raise FormulaValidationError(f"variable {name!r} collides with a relation symbol")
        if name in self.bound:
            raise FormulaValidationError(f"variable {name!r} is already bound (shadowing rejected)")
        self.bound.add(name)

    def unbind(self, names: list[str]) -> None:
        for name in names:
            self.bound.discard(name)

    def var_list(self) -> list[str]:
        """Zero or more identifiers up to the next '.'; binds each."""
        names: list[str] = []
        while self.at("ident"):
            name = self.next().text
            self.bind(name)
            names.append(name)
        self.expect(".")
        return names

    # -- first-order formulae ----------------------------------------------

    def fo_formula(self) -> FoFormula:
        if self.at("kw", "exists") or self.at("kw", "forall"):
            kw = self.next().text
            names: list[str] = []
            while self.at("ident"):
                name = self.next().text
                self.bind(name)
                names.append(name)
            if not names:
                raise FormulaSyntaxError(f"'{kw}' needs at least one variable here")
            self.expect(".")
            body = self.fo_formula()
            self.unbind(names)
            ctor = Exists if kw == "exists" else Forall
            for name in reversed(names):
                body = ctor(name, body)
            return body
        return self.fo_implies()

    def fo_implies(self) -> FoFormula:
        left = self.fo_or()
        if self.accept("->"):
            return Implies(left, self.fo_implies())
        return left

    def fo_or(self) -> FoFormula:
        node = self.fo_and()
        while self.accept("|"):
            node = Or(node, self.fo_and())
        return node

    def fo_and(self) -> FoFormula:
        node = self.fo_unary()
        while self.accept("&"):
            node = And(node, self.fo_unary())
        return node

    def fo_unary(self) -> FoFormula:
        if self.accept("~"):
            return Not(self.fo_unary())
        return self.fo_primary()

    def fo_primary(self) -> FoFormula:
        if self.accept("kw", "top"):
            return Top()
        if self.accept("kw", "bot"):
            return Bottom()
        if self.accept("("):
            inner = self.fo_formula()
            self.expect(")")
            return inner
        tok = self.expect("ident")
        name = tok.text
        if self.accept("("):
            args = self.arg_list()
            if not self.vocab.has(name):
                raise FormulaValidationError(f"unknown relation symbol {name!r}")
            arity = self.vocab.arity(name)
            if len(args) != arity:
                raise FormulaValidationError(
                    f"relation {name} has arity {arity}, applied to {len(args)} arguments"
                )
            return Atom(name, tuple(args))
        if self.accept("="):
            other = self.expect("ident").text
            return Eq(name, other)
        raise FormulaSyntaxError(f"expected '(' or '=' after {name!r} at offset {tok.pos}")

    def arg_list(self) -> list[str]:
        args = [self.expect("ident").text]
        while self.accept(","):
            args.append(self.expect("ident").text)
        self.expect(")")
        return args

    # -- 2SAT clause blocks --------------------------------------------------

    def so_literal(self, positive: bool) -> SoLiteral:
        tok = self.expect("ident")
        name = tok.text
        self.expect("(")
        args = self.arg_list()
        if name not in self.so_arities:
            if self.vocab.has(name):
                raise FormulaValidationError(
                    f"{name!r} is a relation symbol; first-order atoms belong inside {{ }}"
                )
            raise FormulaValidationError(f"unknown set variable {name!r}")
        arity = self.so_arities[name]
        if len(args) != arity:
            raise FormulaValidationError(
                f"set variable {name} has arity {arity}, applied to {len(args)} arguments"
            )
        return SoLiteral(positive, name, tuple(args))

    def clause_entry(self) -> SoLiteral | FoPart:
        if self.accept("kw", "top"):
            return FoPart(Top())
        if self.accept("kw", "bot"):
            return FoPart(Bottom())
        if self.accept("{"):
            inner = self.fo_formula()
            self.expect("}")
            return FoPart(inner)
        if self.accept("~"):
            return self.so_literal(positive=False)
        return self.so_literal(positive=True)

    def two_sat_clause(self) -> TwoSatClause:
        parts: list[SoLiteral | FoPart] = [self.clause_entry()]
        while self.accept("|"):
            parts.append(self.clause_entry())
        if len(parts) > 3:
            raise FormulaSyntaxError("clause has more than three entries")
        while len(parts) < 3:
            parts.append(FoPart(Bottom()))
        return TwoSatClause(tuple(parts))

    def sigma2_block(self) -> Sigma2TwoSatFormula:
        exists_vars: list[str] = []
        forall_vars: list[str] = []
        if self.accept("kw", "exists"):
            exists_vars = self.var_list()
        if self.accept("kw", "forall"):
            forall_vars = self.var_list()
        self.expect("[")
        clauses: list[TwoSatClause] = []
        if not self.at("]"):
            clauses.append(self.two_sat_clause())
            while self.accept(";"):
                clauses.append(self.two_sat_clause())
        self.expect("]")
        self.unbind(exists_vars + forall_vars)
        return Sigma2TwoSatFormula(tuple(exists_vars), tuple(forall_vars), tuple(clauses))

    # -- quantitative formulae -------------------------------------------------

    def qso_formula(self) -> QsoFormula:
        node = self.qso_term()
        while self.accept("+"):
            node = Plus(node, self.qso_term())
        return node

    def qso_term(self) -> QsoFormula:
        if self.at("int"):
            return Const(int(self.next().text))
        if self.accept("("):
            inner = self.qso_formula()
            self.expect(")")
            return inner
        if self.accept("kw", "sum"):
            name = self.expect("ident").text
            self.expect(":")
            arity = int(self.expect("int").text)
            if arity < 1:
                raise FormulaValidationError(f"set variable {name}: arity must be >= 1")
            self.expect(".")
            self.bind(name)
            self.so_arities[name] = arity
            body = self.qso_term()
            del self.so_arities[name]
            self.unbind([name])
            return SumSo(name, arity, body)
        if self.accept("kw", "sumfo"):
            name = self.expect("ident").text
            self.expect(".")
            self.bind(name)
            body = self.qso_term()
            self.unbind([name])
            return SumFo(name, body)
        return Base(self.sigma2_block())

    # -- single-set-variable forall-exists shape --------------------------------

    def pi2_spec(self) -> Pi2Spec:
        self.expect("kw", "pivar")
        name = self.expect("ident").text
        self.expect(":")
        arity = int(self.expect("int").text)
        self.bind(name)
        self.so_arities[name] = arity
        self.expect(".")
        self.expect("kw", "forall")
        forall_vars = self.var_list()
        self.expect("kw", "exists")
        exists_vars = self.var_list()
        self.expect("{")
        fo_part = self.fo_formula()
        self.expect("}")
        self.expect("&")
        tail = self.so_literal(positive=True)
        if tail.so_var != name:
            raise FormulaValidationError(
                f"matrix must apply {name}, found {tail.so_var}"
            )
        if tail.variables != tuple(exists_vars):
            raise FormulaValidationError(
                f"{name} must be applied to the exists variables in order "
                f"{tuple(exists_vars)}, found {tail.variables}"
            )
        return Pi2Spec(name, arity, tuple(forall_vars), tuple(exists_vars), fo_part)

    # -- restricted-Horn shape ----------------------------------------------------

    def rh_formula(self) -> RhPi1Formula:
        so_vars: list[tuple[str, int]] = []
        fo_count_vars: list[str] = []
        while True:
            if self.accept("kw", "sum"):
                name = self.expect("ident").text
                self.expect(":")
                arity = int(self.expect("int").text)
                self.expect(".")
                self.bind(name)
                self.so_arities[name] = arity
                so_vars.append((name, arity))
            elif self.accept("kw", "sumfo"):
                name = self.expect("ident").text
                self.expect(".")
                self.bind(name)
                fo_count_vars.append(name)
            else:
                break
        self.expect("kw", "forall")
        forall_vars = self.var_list()
        self.expect("[")
        cnf: list[RhClause] = []
        if not self.at("]"):
            cnf.append(self.rh_clause())
            while self.accept(";"):
                cnf.append(self.rh_clause())
        self.expect("]")
        return RhPi1Formula(tuple(so_vars), tuple(fo_count_vars), tuple(forall_vars), tuple(cnf))

    def rh_clause(self) -> RhClause:
        fo_literals: list[FoFormula] = []
        pos_so: SoLiteral | None = None
        neg_so: SoLiteral | None = None
        while True:
            entry = self.clause_entry()
            if isinstance(entry, FoPart):
                fo_literals.append(entry.formula)
            elif entry.positive:
                if pos_so is not None:
                    raise FormulaValidationError("clause has two positive set-variable literals")
                pos_so = entry
            else:
                if neg_so is not None:
                    raise FormulaValidationError("clause has two negative set-variable literals")
                neg_so = entry
            if not self.accept("|"):
                break
        return RhClause(tuple(fo_literals), pos_so, neg_so)


ParsedFormula = FoFormula | QsoFormula | Pi2Spec | RhPi1Formula


def parse_formula(text: str, kind: str, vocabulary: Vocabulary) -> ParsedFormula:
    """Parse a formula of the given kind ('fo' | 'qso' | 'pi2' | 'rh')
    against a vocabulary (used for relation arity checks)."""
    parser = _Parser(text, vocabulary)
    if kind == "fo":
        result: ParsedFormula = parser.fo_formula()
    elif kind == "qso":
        result = parser.qso_formula()
    elif kind == "pi2":
        result = parser.pi2_spec()
    elif kind == "rh":
        result = parser.rh_formula()
    else:
        raise FormulaSyntaxError(f"unknown formula kind {kind!r}")
    parser.expect_eof()
    return result
