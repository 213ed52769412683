import pytest

from qsocount import (
    Base,
    Bottom,
    Const,
    FoPart,
    NormalizationError,
    Not,
    Or,
    Plus,
    SoLiteral,
    SumFo,
    SumSo,
    check_sentence,
    clause,
    lower_fo,
    make_structure,
    normal_form_to_qso,
    normalize_qso,
    parse_formula,
    qso_eval,
    rh_to_qso,
)
from qsocount.formulas import And, Atom, Eq, Exists, Forall, Implies, Top
from qsocount.generators import TEST_VOCAB, random_structure, rng_for
from qsocount.checks import parsimony_instance


def qparse(text):
    return parse_formula(text, "qso", TEST_VOCAB)


class TestCheckSentence:
    def test_constant_sum_is_sentence(self):
        assert check_sentence(qparse("sumfo x . [ top ]")) == []

    def test_free_variable_reported(self):
        assert check_sentence(qparse("[ { R(x) } ]")) == ["x"]

    def test_bound_so_ok(self):
        alpha = qparse("sum X:1 . sumfo x . exists y . forall z . [ X(x) | bot | bot ]")
        assert check_sentence(alpha) == []

    def test_free_so_reported(self):
        alpha = Base(
            parse_formula("sum T:1 . [ T(u) ]", "qso", TEST_VOCAB).body.formula
        )
        assert check_sentence(alpha) == ["T", "u"]


class TestNormalize:
    def test_const_three_unit_terms(self):
        nf = normalize_qso(Const(3))
        assert len(nf.terms) == 3
        assert len(nf.so_vars) == 1
        name, arity = nf.so_vars[0]
        assert arity == 1
        for term in nf.terms:
            assert term.clauses == nf.terms[0].clauses
            lit = term.clauses[0].parts[0]
            assert lit == SoLiteral(True, name, term.forall_vars)
        # each unit term evaluates to 1
        for n in (1, 2, 3):
            assert qso_eval(make_structure(n), normal_form_to_qso(nf)) == 3

    def test_const_zero_empty(self):
        nf = normalize_qso(Const(0))
        assert nf.terms == ()
        assert qso_eval(make_structure(2), normal_form_to_qso(nf)) == 0

    def test_two_term_union_and_padding(self):
        alpha = qparse(
            "(sum X:1 . forall u . [ X(u) | bot | bot ]) + (sum Y:1 . [ top ])"
        )
        nf = normalize_qso(alpha)
        assert nf.so_vars == (("X", 1), ("Y", 1))
        term1, term2 = nf.terms
        # term 1 gains a forcing clause for Y, term 2 for X
        assert any(
            isinstance(p, SoLiteral) and p.so_var == "Y" and p.positive
            for cl in term1.clauses
            for p in cl.parts
        )
        assert any(
            isinstance(p, SoLiteral) and p.so_var == "X" and p.positive
            for cl in term2.clauses
            for p in cl.parts
        )
        s = make_structure(2)
        assert qso_eval(s, alpha) == qso_eval(s, normal_form_to_qso(nf)) == 5

    def test_hoist_so_outside_fo(self):
        alpha = qparse("sumfo x . sum X:1 . [ X(x) | bot | bot ]")
        nf = normalize_qso(alpha)
        assert nf.so_vars == (("X", 1),)
        assert nf.terms[0].fo_sum_vars == ("x",)
        for trial in range(20):
            rng = rng_for(61, trial)
            s = random_structure(rng)
            assert qso_eval(s, alpha) == qso_eval(s, normal_form_to_qso(nf))

    def test_const_under_binders(self):
        alpha = qparse("sumfo x . 5")
        nf = normalize_qso(alpha)
        assert len(nf.terms) == 5
        for n in (1, 2, 3):
            s = make_structure(n)
            assert qso_eval(s, normal_form_to_qso(nf)) == 5 * n == qso_eval(s, alpha)

    def test_arity_clash_renamed(self):
        alpha = qparse("(sum X:1 . [ X(u) | bot | bot ]) + (sum X:2 . [ top ])")
        nf = normalize_qso(alpha)
        names = [name for name, _ in nf.so_vars]
        assert len(names) == len(set(names)) == 2
        s = make_structure(2)
        assert qso_eval(s, alpha) == qso_eval(s, normal_form_to_qso(nf))

    def test_plus_under_binder_rejected(self):
        with pytest.raises(NormalizationError) as err:
            normalize_qso(SumFo("x", Plus(Const(1), Const(1))))
        assert "distribute" in str(err.value)

    def test_non_sentence_rejected(self):
        with pytest.raises(NormalizationError):
            normalize_qso(qparse("[ { R(x) } ]"))

    def test_value_preserved_randomized(self):
        for trial in range(120):
            structure, alpha, nf, _ = parsimony_instance(62, trial)
            assert qso_eval(structure, alpha) == qso_eval(
                structure, normal_form_to_qso(nf)
            )


class TestLowering:
    def test_only_core_constructors(self):
        phi = Implies(And(Atom("R", ("x",)), Top()), Forall("y", Eq("x", "y")))
        lowered = lower_fo(phi)

        def assert_core(node):
            assert not isinstance(node, (And, Implies, Forall))
            for attr in ("operand", "left", "right", "body"):
                child = getattr(node, attr, None)
                if child is not None:
                    assert_core(child)

        assert_core(lowered)

    def test_idempotent(self):
        for trial in range(100):
            rng = rng_for(63, trial)
            from qsocount.generators import random_fo

            phi = random_fo(rng, ["x", "y"], depth=3)
            once = lower_fo(phi)
            assert lower_fo(once) == once

    def test_lowering_preserves_truth(self):
        from qsocount import FoAssignment, fo_eval
        from qsocount.generators import random_fo

        for trial in range(150):
            rng = rng_for(64, trial)
            s = random_structure(rng)
            phi = random_fo(rng, ["x"], depth=3)
            v = FoAssignment({"x": int(rng.integers(0, s.universe_size))})
            assert fo_eval(s, phi, v) == fo_eval(s, lower_fo(phi), v)


class TestRhToQso:
    def test_downset_clause_shape(self):
        rho = parse_formula(
            "sum X:1 . forall y1 y2 . [ {~E(y1,y2)} | ~X(y1) | X(y2) ]", "rh", TEST_VOCAB
        )
        alpha = rh_to_qso(rho)
        block = alpha.body.formula
        parts = block.clauses[0].parts
        assert parts[0] == FoPart(Not(Atom("E", ("y1", "y2"))))
        assert parts[1] == SoLiteral(False, "X", ("y1",))
        assert parts[2] == SoLiteral(True, "X", ("y2",))

    def test_pure_fo_clause_padded(self):
        rho = parse_formula(
            "sum X:1 . forall y1 . [ {~E(y1,y1)} | {R(y1)} ]", "rh", TEST_VOCAB
        )
        alpha = rh_to_qso(rho)
        parts = alpha.body.formula.clauses[0].parts
        assert parts[0] == FoPart(Or(Not(Atom("E", ("y1", "y1"))), Atom("R", ("y1",))))
        assert parts[1] == FoPart(Bottom()) and parts[2] == FoPart(Bottom())

    def test_downsets_of_two_chain(self):
        """Oracle: enumerate the 4 subsets of {0,1} closed downward under
        0 -> 1; the chain has 3 of them."""
        edges = [(0, 1)]
        expected = sum(
            1
            for mask in range(4)
            if all(not (mask >> u & 1 and not mask >> v & 1) for u, v in edges)
        )
        assert expected == 3
        s = make_structure(2, [("R", 1, []), ("E", 2, edges)])
        rho = parse_formula(
            "sum X:1 . forall y1 y2 . [ {~E(y1,y2)} | ~X(y1) | X(y2) ]", "rh", TEST_VOCAB
        )
        assert qso_eval(s, rh_to_qso(rho)) == expected

    def test_output_sentence_randomized(self):
        from test_parser import _random_rh

        for trial in range(100):
            rng = rng_for(65, trial)
            rho = _random_rh(rng)
            alpha = rh_to_qso(rho)
            assert check_sentence(alpha) == []

    def test_count_vars_multiply(self):
        """A counted element variable contributes a factor of the universe
        size when the matrix ignores it."""
        rho = parse_formula("sum X:1 . sumfo x . forall y1 . [ {top} ]", "rh", TEST_VOCAB)
        alpha = rh_to_qso(rho)
        s = make_structure(3)
        assert qso_eval(s, alpha) == 3 * 2**3
