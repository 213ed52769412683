"""Propositional formats and exact model counters.

Counting is always over the declared (active) variable set, not just the
occurring variables: tautology padding and restriction both rely on free
variables contributing a factor of two each.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import PropFormatError, PropGuardError

Clause = tuple[int, ...]  # 0, 1, or 2 literals; empty = unsatisfiable clause
TwoSatConjunct = tuple[Clause, ...]  # zero clauses = tautology

BRUTE_FORCE_MAX_VARS = 26


def _normalize_clause(literals: Iterable[int]) -> Clause:
    lits = sorted(set(literals), key=lambda l: (abs(l), l > 0))
    return tuple(lits)


@dataclass(frozen=True)
class Disj2SatFormula:
    """Disjunction of 2SAT conjuncts over variables 1..num_vars.

    `variables` is the active set the count ranges over; restriction removes
    a variable while the rest keep their identities.
    """

    num_vars: int
    disjuncts: tuple[TwoSatConjunct, ...]
    variables: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.num_vars < 0:
            raise PropFormatError("variable count must be >= 0")
        if self.variables is None:
            object.__setattr__(self, "variables", tuple(range(1, self.num_vars + 1)))
        active = set(self.variables)
        fixed = []
        for conj in self.disjuncts:
            fixed_conj = []
            for cl in conj:
                cl = _normalize_clause(cl)
                if len(cl) > 2:
                    raise PropFormatError(f"clause {cl} has more than two literals")
                for lit in cl:
                    if lit == 0:
                        raise PropFormatError("literal 0 is not allowed")
                    if abs(lit) not in active:
                        raise PropFormatError(f"literal {lit} outside the active variable set")
                fixed_conj.append(cl)
            fixed.append(tuple(fixed_conj))
        object.__setattr__(self, "disjuncts", tuple(fixed))
        object.__setattr__(self, "variables", tuple(sorted(active)))


def d2s(num_vars: int, disjuncts: Sequence[Sequence[Sequence[int]]]) -> Disj2SatFormula:
    """Builder from nested lists."""
    return Disj2SatFormula(
        num_vars, tuple(tuple(tuple(cl) for cl in conj) for conj in disjuncts)
    )


@dataclass(frozen=True)
class MonotoneCnf:
    """CNF with only positive literals; every clause nonempty."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 0:
            raise PropFormatError("variable count must be >= 0")
        fixed = []
        for cl in self.clauses:
            if not cl:
                raise PropFormatError("empty clause in a monotone formula")
            for lit in cl:
                if lit <= 0:
                    raise PropFormatError(f"literal {lit} is not positive")
                if lit > self.num_vars:
                    raise PropFormatError(f"literal {lit} exceeds variable count {self.num_vars}")
            fixed.append(tuple(sorted(set(cl))))
        object.__setattr__(self, "clauses", tuple(fixed))


@dataclass(frozen=True)
class CountReport:
    count: int
    method: str
    nodes_explored: int | None = None
    elapsed: float = 0.0


# ---------------------------------------------------------------------------
# Polynomial-time satisfiability
# ---------------------------------------------------------------------------


def sat2_satisfiable(conjunct: TwoSatConjunct, num_vars: int) -> bool:
    """Implication-graph criterion: unsatisfiable iff some variable shares a
    strongly connected component with its negation. A unit clause l acts as
    l|l; an empty clause is immediately unsatisfiable."""
    occurring: list[int] = []
    seen: set[int] = set()
    for cl in conjunct:
        if len(cl) == 0:
            return False
        for lit in cl:
            v = abs(lit)
            if v > num_vars:
                raise PropFormatError(f"literal {lit} exceeds variable count {num_vars}")
            if v not in seen:
                seen.add(v)
                occurring.append(v)
    if not occurring:
        return True

    index_of = {v: i for i, v in enumerate(sorted(occurring))}
    size = 2 * len(index_of)

    def node(lit: int) -> int:
        return 2 * index_of[abs(lit)] + (0 if lit > 0 else 1)

    def negated(n: int) -> int:
        return n ^ 1

    adj: list[list[int]] = [[] for _ in range(size)]
    for cl in conjunct:
        a = cl[0]
        b = cl[1] if len(cl) == 2 else cl[0]
        adj[negated(node(a))].append(node(b))
        adj[negated(node(b))].append(node(a))

    # Tarjan, iterative.
    comp = [-1] * size
    low = [0] * size
    num = [-1] * size
    stack: list[int] = []
    on_stack = [False] * size
    counter = 0
    comp_count = 0
    for root in range(size):
        if num[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work[-1]
            if ei == 0:
                num[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while ei < len(adj[v]):
                w = adj[v][ei]
                ei += 1
                if num[w] == -1:
                    work[-1] = (v, ei)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], num[w])
            if advanced:
                continue
            work.pop()
            if low[v] == num[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = comp_count
                    if w == v:
                        break
                comp_count += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    return all(comp[i] != comp[i ^ 1] for i in range(0, size, 2))


def d2s_satisfiable(phi: Disj2SatFormula) -> bool:
    """Satisfiable iff some disjunct is."""
    return any(sat2_satisfiable(conj, phi.num_vars) for conj in phi.disjuncts)


# ---------------------------------------------------------------------------
# Exact counting
# ---------------------------------------------------------------------------


def _column_masks(width: int) -> tuple[int, list[int]]:
    """Truth-table columns over 2^width assignments packed into integers:
    bit a of column j is the value of variable j in assignment a."""
    total = 1 << width
    full = (1 << total) - 1
    cols = []
    for j in range(width):
        half = 1 << j
        cols.append((full // ((1 << half) + 1)) << half)
    return full, cols


def _count_d2s(phi: Disj2SatFormula) -> int:
    width = len(phi.variables)
    full, cols = _column_masks(width)
    position = {v: j for j, v in enumerate(phi.variables)}

    def literal_mask(lit: int) -> int:
        col = cols[position[abs(lit)]]
        return col if lit > 0 else full & ~col

    formula_mask = 0
    for conj in phi.disjuncts:
        conj_mask = full
        for cl in conj:
            cl_mask = 0
            for lit in cl:
                cl_mask |= literal_mask(lit)
            conj_mask &= cl_mask
            if conj_mask == 0:
                break
        formula_mask |= conj_mask
        if formula_mask == full:
            break
    return formula_mask.bit_count()


def _count_monotone(phi: MonotoneCnf) -> int:
    width = phi.num_vars
    full, cols = _column_masks(width)
    formula_mask = full
    for cl in phi.clauses:
        cl_mask = 0
        for lit in cl:
            cl_mask |= cols[lit - 1]
        formula_mask &= cl_mask
        if formula_mask == 0:
            break
    return formula_mask.bit_count()


def count_bruteforce(phi: Union[Disj2SatFormula, MonotoneCnf]) -> CountReport:
    """Exact count over every assignment of the declared variable set."""
    width = len(phi.variables) if isinstance(phi, Disj2SatFormula) else phi.num_vars
    if width > BRUTE_FORCE_MAX_VARS:
        raise PropGuardError(
            f"brute force counts at most {BRUTE_FORCE_MAX_VARS} variables, got {width}"
        )
    start = time.perf_counter()
    if isinstance(phi, Disj2SatFormula):
        count = _count_d2s(phi)
    else:
        count = _count_monotone(phi)
    return CountReport(count, "brute", None, time.perf_counter() - start)


def restrict(phi: Disj2SatFormula, var: int, value: bool) -> Disj2SatFormula:
    """Fix one active variable: satisfied literals delete their clause,
    falsified literals shrink theirs (possibly to the empty clause)."""
    if var not in phi.variables:
        raise PropFormatError(f"variable {var} is not in the active set")
    sat_lit = var if value else -var
    new_disjuncts = []
    for conj in phi.disjuncts:
        new_conj = []
        for cl in conj:
            if sat_lit in cl:
                continue
            new_conj.append(tuple(l for l in cl if abs(l) != var))
        new_disjuncts.append(tuple(new_conj))
    remaining = tuple(v for v in phi.variables if v != var)
    return Disj2SatFormula(phi.num_vars, tuple(new_disjuncts), remaining)


def count_selfreduce(phi: Union[Disj2SatFormula, MonotoneCnf]) -> CountReport:
    """Exact count by branching on the lowest-indexed active variable,
    pruning unsatisfiable nodes. Output-sensitive: visits at most
    2*(V+1)*count nodes when the count is positive, one node when zero."""
    start = time.perf_counter()
    nodes = 0

    def rec(f: Disj2SatFormula) -> int:
        nonlocal nodes
        nodes += 1
        if not d2s_satisfiable(f):
            return 0
        if not f.variables:
            return 1
        var = f.variables[0]
        return rec(restrict(f, var, False)) + rec(restrict(f, var, True))

    def rec_mono(clauses: tuple[tuple[int, ...], ...], remaining: tuple[int, ...]) -> int:
        # A set of positive clauses is satisfiable iff none is empty (the
        # all-true assignment works); fixing a variable true drops its
        # clauses, fixing it false shrinks them.
        nonlocal nodes
        nodes += 1
        if any(len(cl) == 0 for cl in clauses):
            return 0
        if not remaining:
            return 1
        var, rest = remaining[0], remaining[1:]
        false_branch = tuple(tuple(l for l in cl if l != var) for cl in clauses)
        true_branch = tuple(cl for cl in clauses if var not in cl)
        return rec_mono(false_branch, rest) + rec_mono(true_branch, rest)

    if isinstance(phi, Disj2SatFormula):
        count = rec(phi)
    else:
        count = rec_mono(phi.clauses, tuple(range(1, phi.num_vars + 1)))
    return CountReport(count, "selfreduce", nodes, time.perf_counter() - start)


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------


def serialize_d2s(phi: Disj2SatFormula) -> str:
    """Canonical form: header `p d2s V k`; one `d m` line per disjunct
    followed by its m clause lines, literals ascending by |literal| and unit
    clauses written doubled; a bare `0` line is the empty clause."""
    if phi.variables != tuple(range(1, phi.num_vars + 1)):
        raise PropFormatError("cannot serialize a restricted formula")
    lines = [f"p d2s {phi.num_vars} {len(phi.disjuncts)}"]
    for conj in phi.disjuncts:
        lines.append(f"d {len(conj)}")
        for cl in conj:
            if len(cl) == 0:
                lines.append("0")
            elif len(cl) == 1:
                lines.append(f"{cl[0]} {cl[0]} 0")
            else:
                lines.append(f"{cl[0]} {cl[1]} 0")
    return "\n".join(lines) + "\n"


def parse_d2s(text: str) -> Disj2SatFormula:
    lines = _content_lines(text)
    if not lines:
        raise PropFormatError("empty input")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != "d2s":
        raise PropFormatError(f"line {lineno}: expected header 'p d2s V k'")
    try:
        num_vars, num_disjuncts = int(parts[2]), int(parts[3])
    except ValueError:
        raise PropFormatError(f"line {lineno}: non-integer header fields")
    if num_vars < 0 or num_disjuncts < 0:
        raise PropFormatError(f"line {lineno}: negative header fields")

    pos = 1
    disjuncts = []
    for _ in range(num_disjuncts):
        if pos >= len(lines):
            raise PropFormatError("unexpected end of input: missing disjunct block")
        lineno, dline = lines[pos]
        pos += 1
        dparts = dline.split()
        if len(dparts) != 2 or dparts[0] != "d":
            raise PropFormatError(f"line {lineno}: expected 'd m', got {dline!r}")
        try:
            num_clauses = int(dparts[1])
        except ValueError:
            raise PropFormatError(f"line {lineno}: non-integer clause count")
        conj = []
        for _ in range(num_clauses):
            if pos >= len(lines):
                raise PropFormatError("unexpected end of input: missing clause line")
            lineno, cline = lines[pos]
            pos += 1
            conj.append(_parse_clause_line(cline, lineno, num_vars))
        disjuncts.append(tuple(conj))
    if pos != len(lines):
        lineno, extra = lines[pos]
        raise PropFormatError(f"line {lineno}: trailing content {extra!r}")
    return Disj2SatFormula(num_vars, tuple(disjuncts))


def _parse_clause_line(line: str, lineno: int, num_vars: int) -> Clause:
    try:
        values = [int(tok) for tok in line.split()]
    except ValueError:
        raise PropFormatError(f"line {lineno}: non-integer literal in {line!r}")
    if not values or values[-1] != 0:
        raise PropFormatError(f"line {lineno}: clause line must end with 0")
    lits = values[:-1]
    if any(l == 0 for l in lits):
        raise PropFormatError(f"line {lineno}: literal 0 before terminator")
    if len(lits) > 2:
        raise PropFormatError(f"line {lineno}: more than two literals")
    for lit in lits:
        if abs(lit) > num_vars:
            raise PropFormatError(f"line {lineno}: literal {lit} exceeds variable count")
    return _normalize_clause(lits)


def serialize_dimacs(phi: MonotoneCnf) -> str:
    lines = [f"p cnf {phi.num_vars} {len(phi.clauses)}"]
    for cl in phi.clauses:
        lines.append(" ".join(str(l) for l in cl) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs_monotone(text: str) -> MonotoneCnf:
    """Standard DIMACS CNF restricted to positive literals."""
    lines = _content_lines(text)
    if not lines:
        raise PropFormatError("empty input")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
        raise PropFormatError(f"line {lineno}: expected header 'p cnf V m'")
    try:
        num_vars, num_clauses = int(parts[2]), int(parts[3])
    except ValueError:
        raise PropFormatError(f"line {lineno}: non-integer header fields")
    clauses = []
    for lineno, line in lines[1:]:
        try:
            values = [int(tok) for tok in line.split()]
        except ValueError:
            raise PropFormatError(f"line {lineno}: non-integer literal in {line!r}")
        if not values or values[-1] != 0:
            raise PropFormatError(f"line {lineno}: clause line must end with 0")
        lits = values[:-1]
        if not lits:
            raise PropFormatError(f"line {lineno}: empty clause not allowed in monotone input")
        for lit in lits:
            if lit < 0:
                raise PropFormatError(f"line {lineno}: negative literal {lit} in monotone input")
            if lit == 0 or lit > num_vars:
                raise PropFormatError(f"line {lineno}: literal {lit} out of range")
        clauses.append(tuple(lits))
    if len(clauses) != num_clauses:
        raise PropFormatError(
            f"header declares {num_clauses} clauses, found {len(clauses)}"
        )
    return MonotoneCnf(num_vars, tuple(clauses))


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("c"):
            continue
        out.append((lineno, stripped))
    return out
