"""Reference semantics by exhaustive enumeration.

These functions are the trusted oracles the reductions are tested against,
so they stay as close to the defining clauses as possible: element sums
iterate the universe, set-variable sums iterate all subsets of the tuple
space, and blocks are checked by expanding their quantifiers. No sharing
with the reduction code paths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import BudgetExceededError, EvalError
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
    SoLiteral,
    SumFo,
    SumSo,
    Top,
)
from .normalform import check_sentence
from .structures import FoAssignment, Structure

DEFAULT_SO_EXPONENT = 24
DEFAULT_FO_EXPANSION = 1_000_000


@dataclass(frozen=True)
class EvalBudget:
    """Guards for the exponential enumerations.

    max_so_exponent bounds the sum of |A|^arity over the set-variable sums
    along any path (the subset enumeration runs over 2^that many tuples).
    max_fo_expansion bounds |A|^k for any element-quantifier prefix of k
    variables expanded at once.
    """

    max_so_exponent: int = DEFAULT_SO_EXPONENT
    max_fo_expansion: int = DEFAULT_FO_EXPANSION

    def __post_init__(self):
        if self.max_so_exponent <= 0 or self.max_fo_expansion <= 0:
            raise EvalError("budget limits must be positive")


def _check_budget(alpha: QsoFormula, n: int, budget: EvalBudget, acc: int) -> None:
    if isinstance(alpha, (Const,)):
        return
    if isinstance(alpha, Plus):
        _check_budget(alpha.left, n, budget, acc)
        _check_budget(alpha.right, n, budget, acc)
        return
    if isinstance(alpha, SumFo):
        _check_budget(alpha.body, n, budget, acc)
        return
    if isinstance(alpha, SumSo):
        step = n**alpha.arity
        if acc + step > budget.max_so_exponent:
            raise BudgetExceededError(
                f"set-variable sums need exponent {acc + step} > "
                f"budget {budget.max_so_exponent}"
            )
        _check_budget(alpha.body, n, budget, acc + step)
        return
    if isinstance(alpha, Base):
        psi = alpha.formula
        width = len(psi.exists_vars) + len(psi.forall_vars)
        if n**width > budget.max_fo_expansion:
            raise BudgetExceededError(
                f"block expands {n}^{width} assignments > budget {budget.max_fo_expansion}"
            )
        return
    raise EvalError(f"unknown node {alpha!r}")


# ---------------------------------------------------------------------------
# First-order model checking
# ---------------------------------------------------------------------------


def _fo_holds(A: Structure, phi: FoFormula, env: dict[str, int]) -> bool:
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Eq):
        return _lookup(env, phi.left) == _lookup(env, phi.right)
    if isinstance(phi, Atom):
        tup = tuple(_lookup(env, v) for v in phi.variables)
        return tup in A.tuples(phi.relation)
    if isinstance(phi, Not):
        return not _fo_holds(A, phi.operand, env)
    if isinstance(phi, Or):
        return _fo_holds(A, phi.left, env) or _fo_holds(A, phi.right, env)
    if isinstance(phi, And):
        return _fo_holds(A, phi.left, env) and _fo_holds(A, phi.right, env)
    if isinstance(phi, Implies):
        return (not _fo_holds(A, phi.left, env)) or _fo_holds(A, phi.right, env)
    if isinstance(phi, Exists):
        shadowed = env.get(phi.variable)
        for a in range(A.universe_size):
            env[phi.variable] = a
            if _fo_holds(A, phi.body, env):
                _restore(env, phi.variable, shadowed)
                return True
        _restore(env, phi.variable, shadowed)
        return False
    if isinstance(phi, Forall):
        shadowed = env.get(phi.variable)
        for a in range(A.universe_size):
            env[phi.variable] = a
            if not _fo_holds(A, phi.body, env):
                _restore(env, phi.variable, shadowed)
                return False
        _restore(env, phi.variable, shadowed)
        return True
    raise EvalError(f"unknown node {phi!r}")


def _lookup(env: dict[str, int], var: str) -> int:
    try:
        return env[var]
    except KeyError:
        raise EvalError(f"unbound variable {var!r}")


def _restore(env: dict[str, int], var: str, old: int | None) -> None:
    if old is None:
        env.pop(var, None)
    else:
        env[var] = old


def fo_eval(A: Structure, phi: FoFormula, assignment: FoAssignment | None = None) -> bool:
    """Tarskian truth of a first-order formula under an assignment."""
    if A.universe_size == 0:
        raise EvalError("empty universe")
    env = dict(assignment.bindings) if assignment is not None else {}
    if assignment is not None:
        assignment.check(A.universe_size)
    return _fo_holds(A, phi, env)


# ---------------------------------------------------------------------------
# Quantitative evaluation
# ---------------------------------------------------------------------------


def _tuple_space(n: int, arity: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(n), repeat=arity))


def _subsets(tuples: list[tuple[int, ...]]):
    """All subsets of a lexicographically ordered tuple list, enumerated by a
    binary counter (bit i of the counter selects tuples[i])."""
    count = len(tuples)
    for mask in range(1 << count):
        yield frozenset(tuples[i] for i in range(count) if mask >> i & 1)


def _clause_holds(A, cl, env, so_env) -> bool:
    for part in cl.parts:
        if isinstance(part, SoLiteral):
            try:
                rel = so_env[part.so_var]
            except KeyError:
                raise EvalError(f"unbound set variable {part.so_var!r}")
            tup = tuple(_lookup(env, v) for v in part.variables)
            if (tup in rel) == part.positive:
                return True
        else:
            if _fo_holds(A, part.formula, env):
                return True
    return False


def _block_holds(A, psi, env, so_env) -> bool:
    n = A.universe_size
    for exists_choice in itertools.product(range(n), repeat=len(psi.exists_vars)):
        for var, val in zip(psi.exists_vars, exists_choice):
            env[var] = val
        ok = True
        for forall_choice in itertools.product(range(n), repeat=len(psi.forall_vars)):
            for var, val in zip(psi.forall_vars, forall_choice):
                env[var] = val
            if not all(_clause_holds(A, cl, env, so_env) for cl in psi.clauses):
                ok = False
                break
        for var in psi.forall_vars:
            env.pop(var, None)
        for var in psi.exists_vars:
            env.pop(var, None)
        if ok:
            return True
    return False


def _qso_value(A, alpha, env, so_env) -> int:
    if isinstance(alpha, Const):
        return alpha.value
    if isinstance(alpha, Plus):
        return _qso_value(A, alpha.left, env, so_env) + _qso_value(A, alpha.right, env, so_env)
    if isinstance(alpha, SumFo):
        total = 0
        shadowed = env.get(alpha.variable)
        for a in range(A.universe_size):
            env[alpha.variable] = a
            total += _qso_value(A, alpha.body, env, so_env)
        _restore(env, alpha.variable, shadowed)
        return total
    if isinstance(alpha, SumSo):
        total = 0
        tuples = _tuple_space(A.universe_size, alpha.arity)
        shadowed = so_env.get(alpha.so_var)
        for subset in _subsets(tuples):
            so_env[alpha.so_var] = subset
            total += _qso_value(A, alpha.body, env, so_env)
        if shadowed is None:
            so_env.pop(alpha.so_var, None)
        else:
            so_env[alpha.so_var] = shadowed
        return total
    if isinstance(alpha, Base):
        return 1 if _block_holds(A, alpha.formula, env, so_env) else 0
    raise EvalError(f"unknown node {alpha!r}")


def qso_eval(
    A: Structure,
    alpha: QsoFormula,
    budget: EvalBudget | None = None,
    *,
    initial_fo: dict[str, int] | None = None,
    initial_so: dict[str, frozenset[tuple[int, ...]]] | None = None,
) -> int:
    """Exact value of a quantitative sum sentence on a structure.

    The initial assignments exist only to witness that sentence values do
    not depend on them; they never affect the result.
    """
    if A.universe_size == 0:
        raise EvalError("empty universe")
    free = check_sentence(alpha)
    if free:
        raise EvalError(f"not a sentence; free variables: {', '.join(free)}")
    budget = budget or EvalBudget()
    _check_budget(alpha, A.universe_size, budget, 0)
    env = dict(initial_fo) if initial_fo else {}
    so_env = dict(initial_so) if initial_so else {}
    return _qso_value(A, alpha, env, so_env)


# ---------------------------------------------------------------------------
# Single-set-variable forall-exists counting
# ---------------------------------------------------------------------------


def pi2_count(A: Structure, spec: Pi2Spec, budget: EvalBudget | None = None) -> int:
    """Number of relations X with: for all y-tuples some z-tuple satisfies
    the matrix phi(y, z) and X(z). Counts by enumerating every subset of the
    tuple space and expanding both quantifier blocks."""
    if A.universe_size == 0:
        raise EvalError("empty universe")
    budget = budget or EvalBudget()
    n = A.universe_size
    if n**spec.arity > budget.max_so_exponent:
        raise BudgetExceededError(
            f"subset space exponent {n ** spec.arity} > budget {budget.max_so_exponent}"
        )
    width = len(spec.forall_vars) + len(spec.exists_vars)
    if n**width > budget.max_fo_expansion:
        raise BudgetExceededError(
            f"matrix expands {n}^{width} assignments > budget {budget.max_fo_expansion}"
        )

    tuples = _tuple_space(n, spec.arity)
    y_choices = list(itertools.product(range(n), repeat=len(spec.forall_vars)))
    z_choices = list(itertools.product(range(n), repeat=len(spec.exists_vars)))

    count = 0
    env: dict[str, int] = {}
    for subset in _subsets(tuples):
        ok = True
        for ys in y_choices:
            for var, val in zip(spec.forall_vars, ys):
                env[var] = val
            found = False
            for zs in z_choices:
                if zs not in subset:
                    continue
                for var, val in zip(spec.exists_vars, zs):
                    env[var] = val
                if _fo_holds(A, spec.fo_part, env):
                    found = True
                    break
            if not found:
                ok = False
                break
        if ok:
            count += 1
        for var in spec.forall_vars:
            env.pop(var, None)
        for var in spec.exists_vars:
            env.pop(var, None)
    return count
