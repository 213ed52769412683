import itertools

import pytest

from qsocount import (
    Base,
    BudgetExceededError,
    EvalBudget,
    EvalError,
    FoAssignment,
    FoPart,
    Not,
    Pi2Spec,
    Plus,
    Sigma2TwoSatFormula,
    SoLiteral,
    SumSo,
    clause,
    encode_vc,
    fo_eval,
    make_structure,
    parse_formula,
    pi2_count,
    qso_eval,
)
from qsocount.generators import TEST_VOCAB, random_fo, random_qso_sentence, random_structure, rng_for
from qsocount.checks import parsimony_instance

EMPTY2 = make_structure(2)
EMPTY5 = make_structure(5)


def qparse(text, vocab=TEST_VOCAB):
    return parse_formula(text, "qso", vocab)


class TestFoEval:
    def test_top(self):
        assert fo_eval(EMPTY2, parse_formula("top", "fo", TEST_VOCAB))

    def test_exists_over_relation(self):
        s = make_structure(2, [("R", 2, [(0, 1)])])
        phi = parse_formula("exists y . R(x,y)", "fo", s.vocabulary)
        assert fo_eval(s, phi, FoAssignment({"x": 0})) is True
        assert fo_eval(s, phi, FoAssignment({"x": 1})) is False

    def test_double_negation(self):
        for trial in range(200):
            rng = rng_for(55, trial)
            s = random_structure(rng)
            phi = random_fo(rng, ["x"], depth=3)
            v = FoAssignment({"x": int(rng.integers(0, s.universe_size))})
            assert fo_eval(s, Not(Not(phi)), v) == fo_eval(s, phi, v)

    def test_unbound_variable(self):
        with pytest.raises(EvalError):
            fo_eval(EMPTY2, parse_formula("x = y", "fo", TEST_VOCAB))

    def test_empty_universe_rejected(self):
        with pytest.raises(EvalError):
            fo_eval(make_structure(0), parse_formula("top", "fo", TEST_VOCAB))


class TestQsoEval:
    def test_constant_sum(self):
        assert qso_eval(EMPTY2, qparse("3 + 4")) == 7

    def test_element_sum(self):
        assert qso_eval(EMPTY5, qparse("sumfo x . [ top ]")) == 5

    def test_subset_sum_arity_two(self):
        assert qso_eval(EMPTY2, qparse("sum X:2 . [ top ]")) == 16

    def test_unit_term(self):
        alpha = qparse("sum T:1 . exists . forall u . [ T(u) | bot | bot ]")
        for n in (1, 2, 3):
            assert qso_eval(make_structure(n), alpha) == 1

    def test_linearity(self):
        for trial in range(100):
            rng = rng_for(56, trial)
            s = random_structure(rng)
            a = random_qso_sentence(rng, max_terms=1)
            b = random_qso_sentence(rng, max_terms=1)
            assert qso_eval(s, Plus(a, b)) == qso_eval(s, a) + qso_eval(s, b)

    def test_assignment_independence(self):
        for trial in range(50):
            rng = rng_for(57, trial)
            s = random_structure(rng)
            alpha = random_qso_sentence(rng)
            junk_fo = {"zz": int(rng.integers(0, s.universe_size))}
            junk_so = {"ZZ": frozenset({(0,)})}
            assert qso_eval(s, alpha) == qso_eval(
                s, alpha, initial_fo=junk_fo, initial_so=junk_so
            )

    def test_budget_exceeded_reports_exponent(self):
        alpha = qparse("sum X:2 . [ top ]")
        with pytest.raises(BudgetExceededError) as err:
            qso_eval(make_structure(3), alpha, EvalBudget(max_so_exponent=8))
        assert "9" in str(err.value)

    def test_non_sentence_rejected(self):
        with pytest.raises(EvalError):
            qso_eval(EMPTY2, qparse("[ { R(x) } ]"))

    def test_empty_universe_rejected(self):
        with pytest.raises(EvalError):
            qso_eval(make_structure(0), qparse("1"))


def _cover_count(num_vertices, edges):
    """Independent oracle: enumerate vertex subsets, keep edge covers."""
    count = 0
    for bits in itertools.product([0, 1], repeat=num_vertices):
        if all(bits[u] or bits[v] for u, v in edges):
            count += 1
    return count


class TestPi2Count:
    def test_triangle(self):
        structure, spec, exponent = encode_vc(3, [(0, 1), (0, 2), (1, 2)])
        covers = _cover_count(3, [(0, 1), (0, 2), (1, 2)])
        assert covers == 4
        assert pi2_count(structure, spec) == covers * 2**exponent == 32

    def test_path(self):
        structure, spec, exponent = encode_vc(3, [(0, 1), (1, 2)])
        covers = _cover_count(3, [(0, 1), (1, 2)])
        assert covers == 5
        assert pi2_count(structure, spec) == covers * 2**exponent == 20

    def test_false_matrix_counts_nothing(self):
        spec = Pi2Spec("T", 1, ("a",), ("z0",), parse_formula("bot", "fo", TEST_VOCAB))
        assert pi2_count(make_structure(2), spec) == 0

    def test_budget(self):
        spec = Pi2Spec("T", 2, (), ("z0", "z1"), parse_formula("top", "fo", TEST_VOCAB))
        with pytest.raises(BudgetExceededError):
            pi2_count(make_structure(3), spec, EvalBudget(max_so_exponent=8))

    def test_monotone_in_the_set_variable(self):
        """Any satisfying set stays satisfying under supersets."""
        structure, spec, _ = encode_vc(2, [(0, 1)])
        n = structure.universe_size
        tuples = [(i,) for i in range(n)]

        def satisfies(subset):
            sat = True
            for x in range(n):
                if not any(
                    (y,) in subset
                    and _matrix(structure, spec, x, y)
                    for y in range(n)
                ):
                    sat = False
                    break
            return sat

        satisfied = []
        for mask in range(1 << n):
            subset = frozenset(tuples[i] for i in range(n) if mask >> i & 1)
            if satisfies(subset):
                satisfied.append(subset)
        for subset in satisfied:
            for extra in tuples:
                assert satisfies(subset | {extra})

    def test_agrees_with_qso_wrapper_when_no_forall(self):
        """With an empty forall block the count is expressible as a sum
        sentence: sum T . exists z [ {phi} ; T(z) ]."""
        from qsocount.generators import random_pi2

        for trial in range(60):
            rng = rng_for(58, trial)
            s = random_structure(rng)
            spec = random_pi2(rng)
            if s.universe_size**spec.arity > 9:
                continue
            spec = Pi2Spec("T", spec.arity, (), spec.exists_vars, _drop_forall(spec))
            wrapper = SumSo(
                "T",
                spec.arity,
                Base(
                    Sigma2TwoSatFormula(
                        spec.exists_vars,
                        (),
                        (
                            clause(FoPart(spec.fo_part)),
                            clause(SoLiteral(True, "T", spec.exists_vars)),
                        ),
                    )
                ),
            )
            assert pi2_count(s, spec) == qso_eval(s, wrapper)


def _drop_forall(spec):
    """Rebind any forall variables in the matrix to the first exists var so
    the matrix stays well formed without the forall block."""
    from qsocount.formulas import substitute_fo

    env = {v: spec.exists_vars[0] for v in spec.forall_vars}
    return substitute_fo(spec.fo_part, env)


def _matrix(structure, spec, x, y):
    from qsocount.evaluate import _fo_holds

    return _fo_holds(structure, spec.fo_part, {spec.forall_vars[0]: x, spec.exists_vars[0]: y})


class TestNormalizedEvalAgreement:
    def test_hoisting_preserves_value(self):
        """Element sums commute with set sums; checked on the parsimony
        generator's instances against the evaluator."""
        from qsocount import normal_form_to_qso, normalize_qso

        for trial in range(60):
            structure, alpha, nf, _ = parsimony_instance(59, trial)
            assert qso_eval(structure, alpha) == qso_eval(structure, normal_form_to_qso(nf))
