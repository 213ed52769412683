import itertools

import pytest

from qsocount import (
    Disj2SatFormula,
    MonotoneCnf,
    PropFormatError,
    PropGuardError,
    count_bruteforce,
    count_selfreduce,
    d2s,
    d2s_satisfiable,
    parse_d2s,
    parse_dimacs_monotone,
    restrict,
    sat2_satisfiable,
    serialize_d2s,
    serialize_dimacs,
)
from qsocount.generators import random_conjunct, random_d2s, rng_for


def _assignments(num_vars):
    return itertools.product([False, True], repeat=num_vars)


def _clause_true(clause, values):
    return any(values[abs(l) - 1] == (l > 0) for l in clause)


def _conjunct_sat_bruteforce(conjunct, num_vars):
    """Independent oracle: plain enumeration of all assignments."""
    return any(
        all(_clause_true(cl, values) for cl in conjunct) for values in _assignments(num_vars)
    )


def _d2s_count_bruteforce(phi):
    """Independent oracle over the active variable set."""
    count = 0
    for values in itertools.product([False, True], repeat=len(phi.variables)):
        byvar = dict(zip(phi.variables, values))
        if any(
            all(any(byvar[abs(l)] == (l > 0) for l in cl) for cl in conj)
            for conj in phi.disjuncts
        ):
            count += 1
    return count


class TestSat2:
    def test_forced_contradiction(self):
        assert sat2_satisfiable(((1,), (-1,)), 1) is False

    def test_satisfiable_pair(self):
        assert sat2_satisfiable(((1, 2), (-1, 2)), 2) is True

    def test_empty_clause(self):
        assert sat2_satisfiable(((),), 3) is False

    def test_no_clauses(self):
        assert sat2_satisfiable((), 3) is True

    def test_agrees_with_bruteforce_1000(self):
        for trial in range(1000):
            rng = rng_for(200, trial)
            conjunct, num_vars = random_conjunct(rng, max_vars=12)
            assert sat2_satisfiable(conjunct, num_vars) == _conjunct_sat_bruteforce(
                conjunct, num_vars
            )


class TestD2sSatisfiable:
    def test_zero_disjuncts(self):
        assert d2s_satisfiable(d2s(2, [])) is False

    def test_tautology_disjunct(self):
        assert d2s_satisfiable(d2s(2, [[[1], [-1]], []])) is True

    def test_equivalent_to_positive_count(self):
        for trial in range(300):
            rng = rng_for(201, trial)
            phi = random_d2s(rng, max_vars=8)
            assert d2s_satisfiable(phi) == (count_bruteforce(phi).count > 0)


class TestBruteForce:
    def test_single_clause(self):
        assert count_bruteforce(d2s(2, [[[1, 2]]])).count == 3

    def test_tautology_disjunct(self):
        assert count_bruteforce(d2s(2, [[]])).count == 4

    def test_monotone_example(self):
        """Oracle: of the 8 assignments, x3 plus at least one of x1, x2."""
        phi = MonotoneCnf(3, ((1, 2), (3,)))
        expected = sum(
            1
            for values in _assignments(3)
            if values[2] and (values[0] or values[1])
        )
        assert expected == 3
        assert count_bruteforce(phi).count == expected

    def test_matches_plain_enumeration(self):
        for trial in range(200):
            rng = rng_for(202, trial)
            phi = random_d2s(rng, max_vars=8)
            assert count_bruteforce(phi).count == _d2s_count_bruteforce(phi)

    def test_guard(self):
        with pytest.raises(PropGuardError):
            count_bruteforce(d2s(27, []))


class TestRestrict:
    def test_tautology_stays_tautological(self):
        phi = restrict(d2s(2, [[]]), 1, True)
        assert phi.disjuncts == ((),)

    def test_satisfied_clause_dropped(self):
        phi = restrict(d2s(2, [[[1, 2]]]), 1, True)
        assert phi.disjuncts == ((),)
        assert phi.variables == (2,)

    def test_falsified_literal_shrinks(self):
        phi = restrict(d2s(2, [[[1, 2]]]), 1, False)
        assert phi.disjuncts == (((2,),),)

    def test_empty_clause_reached(self):
        phi = restrict(d2s(1, [[[1]]]), 1, False)
        assert phi.disjuncts == (((),),)

    def test_unknown_variable(self):
        with pytest.raises(PropFormatError):
            restrict(d2s(2, []), 5, True)
        with pytest.raises(PropFormatError):
            restrict(restrict(d2s(2, []), 1, True), 1, False)

    def test_count_splits(self):
        for trial in range(300):
            rng = rng_for(203, trial)
            phi = random_d2s(rng, max_vars=8)
            var = int(phi.variables[int(rng.integers(0, len(phi.variables)))])
            total = count_bruteforce(phi).count
            low = count_bruteforce(restrict(phi, var, False)).count
            high = count_bruteforce(restrict(phi, var, True)).count
            assert total == low + high


class TestSelfReduce:
    def test_single_clause(self):
        report = count_selfreduce(d2s(2, [[[1, 2]]]))
        assert report.count == 3
        assert report.nodes_explored <= 2 * 3 * 3

    def test_unsat_is_one_node(self):
        report = count_selfreduce(d2s(1, [[[1], [-1]]]))
        assert report.count == 0
        assert report.nodes_explored == 1

    def test_500_random_match_bruteforce(self):
        for trial in range(500):
            rng = rng_for(204, trial)
            phi = random_d2s(rng, max_vars=14)
            expected = count_bruteforce(phi).count
            report = count_selfreduce(phi)
            assert report.count == expected
            if expected == 0:
                assert report.nodes_explored == 1
            else:
                assert report.nodes_explored <= 2 * (phi.num_vars + 1) * expected

    def test_monotone_variant(self):
        phi = MonotoneCnf(3, ((1, 2), (3,)))
        report = count_selfreduce(phi)
        assert report.count == 3
        assert report.nodes_explored <= 2 * 4 * 3

    def test_monotone_matches_bruteforce(self):
        for trial in range(200):
            rng = rng_for(205, trial)
            from qsocount.generators import random_monotone

            phi = random_monotone(rng, max_vars=6)
            assert count_selfreduce(phi).count == count_bruteforce(phi).count


class TestD2sFormat:
    def test_canonical_serialization(self):
        phi = d2s(3, [[[2, 1], [3]], [[]]])
        text = serialize_d2s(phi)
        assert text == "p d2s 3 2\nd 2\n1 2 0\n3 3 0\nd 1\n0\n"

    def test_roundtrip(self):
        for trial in range(200):
            rng = rng_for(206, trial)
            phi = random_d2s(rng, max_vars=8)
            assert parse_d2s(serialize_d2s(phi)) == phi

    def test_unit_doubling_normalizes(self):
        assert parse_d2s("p d2s 1 1\nd 1\n1 1 0\n") == d2s(1, [[[1]]])

    def test_comments_skipped(self):
        assert parse_d2s("c note\np d2s 1 1\nd 0\n") == d2s(1, [[]])

    def test_restricted_not_serializable(self):
        with pytest.raises(PropFormatError):
            serialize_d2s(restrict(d2s(2, [[]]), 1, True))

    @pytest.mark.parametrize(
        "text",
        [
            "p cnf 1 1\n1 0\n",
            "p d2s 1\n",
            "p d2s 1 1\nd 1\n1 2 3 0\n",
            "p d2s 1 1\nd 1\n1\n",
            "p d2s 1 1\nd 1\n5 5 0\n",
            "p d2s 1 1\nd 2\n1 1 0\n",
            "p d2s 1 0\nd 0\n",
        ],
    )
    def test_malformed_rejected(self, text):
        with pytest.raises(PropFormatError):
            parse_d2s(text)


class TestDimacsFormat:
    def test_roundtrip(self):
        phi = MonotoneCnf(4, ((1, 3), (2,), (1, 2, 4)))
        assert parse_dimacs_monotone(serialize_dimacs(phi)) == phi

    def test_negative_literal_rejected(self):
        with pytest.raises(PropFormatError):
            parse_dimacs_monotone("p cnf 2 1\n1 -2 0\n")

    def test_clause_count_checked(self):
        with pytest.raises(PropFormatError):
            parse_dimacs_monotone("p cnf 2 2\n1 0\n")

    def test_empty_clause_rejected(self):
        with pytest.raises(PropFormatError):
            parse_dimacs_monotone("p cnf 2 1\n0\n")


class TestInvariants:
    def test_wide_clause_rejected(self):
        with pytest.raises(PropFormatError):
            d2s(3, [[[1, 2, 3]]])

    def test_out_of_range_literal(self):
        with pytest.raises(PropFormatError):
            d2s(2, [[[3]]])

    def test_monotone_empty_clause_rejected(self):
        with pytest.raises(PropFormatError):
            MonotoneCnf(2, ((),))

    def test_monotone_negative_rejected(self):
        with pytest.raises(PropFormatError):
            MonotoneCnf(2, ((-1,),))
