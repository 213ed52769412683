import numpy as np
import pytest

from qsocount import (
    Base,
    Bottom,
    FoPart,
    FormulaSyntaxError,
    FormulaValidationError,
    Pi2Spec,
    RhPi1Formula,
    SoLiteral,
    SumSo,
    Vocabulary,
    parse_formula,
    print_fo,
    print_pi2,
    print_qso,
    print_rh,
)
from qsocount.formulas import RhClause, Top
from qsocount.generators import TEST_VOCAB, random_fo, random_pi2, random_qso_sentence, rng_for

MONO_VOCAB = Vocabulary((("C", 2), ("IsClause", 1)))


class TestQsoParsing:
    def test_unit_sentence(self):
        alpha = parse_formula(
            "sum T:1 . exists . forall u . [ T(u) | bot | bot ]", "qso", TEST_VOCAB
        )
        assert isinstance(alpha, SumSo)
        assert alpha.so_var == "T" and alpha.arity == 1
        block = alpha.body
        assert isinstance(block, Base)
        assert block.formula.exists_vars == ()
        assert block.formula.forall_vars == ("u",)
        assert len(block.formula.clauses) == 1
        parts = block.formula.clauses[0].parts
        assert parts[0] == SoLiteral(True, "T", ("u",))
        assert parts[1] == FoPart(Bottom()) and parts[2] == FoPart(Bottom())

    def test_three_so_literals_rejected(self):
        with pytest.raises(FormulaValidationError):
            parse_formula(
                "sum T:1 . sum S:1 . [ T(u) | S(u) | T(u) ]", "qso", TEST_VOCAB
            )

    def test_unbound_so_variable_rejected(self):
        with pytest.raises(FormulaValidationError):
            parse_formula("[ T(u) | S(u) | R(u) ]", "qso", TEST_VOCAB)

    def test_clause_padded_to_three(self):
        alpha = parse_formula("sum T:1 . [ T(u) ]", "qso", TEST_VOCAB)
        clause = alpha.body.formula.clauses[0]
        assert len(clause.parts) == 3
        assert clause.parts[1] == FoPart(Bottom())

    def test_four_entries_rejected(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("[ top | top | top | top ]", "qso", TEST_VOCAB)

    def test_shadowing_rejected(self):
        with pytest.raises(FormulaValidationError):
            parse_formula("sumfo x . sumfo x . [ top ]", "qso", TEST_VOCAB)
        with pytest.raises(FormulaValidationError):
            parse_formula("sum X:1 . exists X . [ top ]", "qso", TEST_VOCAB)

    def test_relation_name_collision_rejected(self):
        with pytest.raises(FormulaValidationError):
            parse_formula("sumfo R . [ top ]", "qso", TEST_VOCAB)

    def test_unknown_relation(self):
        with pytest.raises(FormulaValidationError):
            parse_formula("[ { Q(x) } ]", "qso", TEST_VOCAB)

    def test_relation_arity_mismatch(self):
        with pytest.raises(FormulaValidationError):
            parse_formula("[ { E(x) } ]", "qso", TEST_VOCAB)

    def test_so_literal_arity_mismatch(self):
        with pytest.raises(FormulaValidationError):
            parse_formula("sum T:2 . [ T(u) ]", "qso", TEST_VOCAB)

    def test_bare_relation_atom_hint(self):
        with pytest.raises(FormulaValidationError) as err:
            parse_formula("[ R(u) ]", "qso", TEST_VOCAB)
        assert "inside { }" in str(err.value)

    def test_trailing_input(self):
        with pytest.raises(FormulaSyntaxError):
            parse_formula("[ top ] ]", "qso", TEST_VOCAB)


class TestPi2Parsing:
    def test_monotone_shape(self):
        spec = parse_formula(
            "pivar T:1 . forall c . exists x . { C(c,x) } & T(x)", "pi2", MONO_VOCAB
        )
        assert isinstance(spec, Pi2Spec)
        assert spec.arity == 1
        assert spec.forall_vars == ("c",)
        assert spec.exists_vars == ("x",)

    def test_tail_must_match_exists_order(self):
        with pytest.raises(FormulaValidationError):
            parse_formula(
                "pivar T:2 . forall . exists x y . { C(x,y) } & T(y,x)", "pi2", MONO_VOCAB
            )

    def test_tail_must_use_declared_variable(self):
        with pytest.raises(FormulaValidationError):
            parse_formula(
                "pivar T:1 . forall . exists x . { top } & S(x)", "pi2", MONO_VOCAB
            )


class TestRhParsing:
    def test_downset_clause(self):
        rho = parse_formula(
            "sum X:1 . forall y1 y2 . [ {~E(y1,y2)} | ~X(y1) | X(y2) ]", "rh", TEST_VOCAB
        )
        assert isinstance(rho, RhPi1Formula)
        cl = rho.cnf[0]
        assert cl.pos_so == SoLiteral(True, "X", ("y2",))
        assert cl.neg_so == SoLiteral(False, "X", ("y1",))
        assert len(cl.fo_literals) == 1

    def test_two_positive_rejected(self):
        with pytest.raises(FormulaValidationError):
            parse_formula(
                "sum X:1 . forall y1 y2 . [ {top} | X(y1) | X(y2) ]", "rh", TEST_VOCAB
            )

    def test_two_negative_rejected(self):
        with pytest.raises(FormulaValidationError):
            parse_formula(
                "sum X:1 . forall y1 y2 . [ {top} | ~X(y1) | ~X(y2) ]", "rh", TEST_VOCAB
            )


class TestPrintParseIdentity:
    def test_fo(self):
        for trial in range(500):
            rng = rng_for(101, trial)
            phi = random_fo(rng, ["x", "y"], depth=3)
            assert parse_formula(print_fo(phi), "fo", TEST_VOCAB) == phi

    def test_qso(self):
        for trial in range(500):
            rng = rng_for(102, trial)
            alpha = random_qso_sentence(rng)
            assert parse_formula(print_qso(alpha), "qso", TEST_VOCAB) == alpha

    def test_pi2(self):
        for trial in range(500):
            rng = rng_for(103, trial)
            spec = random_pi2(rng)
            assert parse_formula(print_pi2(spec), "pi2", TEST_VOCAB) == spec

    def test_rh(self):
        for trial in range(300):
            rng = rng_for(104, trial)
            rho = _random_rh(rng)
            assert parse_formula(print_rh(rho), "rh", TEST_VOCAB) == rho


def _random_rh(rng: np.random.Generator) -> RhPi1Formula:
    so_vars = (("X", 1),) if rng.random() < 0.7 else (("X", 1), ("Y", 2))
    arities = dict(so_vars)
    fo_count = ("x",) if rng.random() < 0.5 else ()
    forall_vars = ("y1", "y2")[: int(rng.integers(1, 3))]
    pool = list(fo_count) + list(forall_vars)
    clauses = []
    for _ in range(int(rng.integers(1, 4))):
        fo_lits = tuple(
            random_fo(rng, pool, depth=1) for _ in range(int(rng.integers(1, 3)))
        )
        pos = neg = None
        if rng.random() < 0.7:
            name = so_vars[int(rng.integers(0, len(so_vars)))][0]
            args = tuple(pool[int(rng.integers(0, len(pool)))] for _ in range(arities[name]))
            pos = SoLiteral(True, name, args)
        if rng.random() < 0.7:
            name = so_vars[int(rng.integers(0, len(so_vars)))][0]
            args = tuple(pool[int(rng.integers(0, len(pool)))] for _ in range(arities[name]))
            neg = SoLiteral(False, name, args)
        clauses.append(RhClause(fo_lits, pos, neg))
    return RhPi1Formula(so_vars, fo_count, forall_vars, tuple(clauses))


class TestRhClauseShape:
    def test_slot_polarity_enforced(self):
        with pytest.raises(FormulaValidationError):
            RhClause((Top(),), SoLiteral(False, "X", ("y",)), None)
        with pytest.raises(FormulaValidationError):
            RhClause((Top(),), None, SoLiteral(True, "X", ("y",)))
