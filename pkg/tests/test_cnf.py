import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlsat.cnf import (
    CnfFormula,
    brute_force_sat,
    count_satisfying,
    eval_formula,
    parse_dimacs,
    random_3cnf,
)
from nlsat.errors import CapExceeded, ParseError


def test_parse_minimal():
    f = parse_dimacs("p cnf 1 1\n1 0\n")
    assert f.var_count == 1 and f.clauses == ((1,),)


def test_parse_two_clauses_and_bytes():
    f = parse_dimacs(b"c a comment\np cnf 2 2\n1 -2 0\n-1 2 0\n")
    assert f.var_count == 2 and f.clauses == ((1, -2), (-1, 2))


def test_clause_may_span_lines():
    f = parse_dimacs("p cnf 3 2\n1 2\n3 0 -1\n0\n")
    assert f.clauses == ((1, 2, 3), (-1,))


@pytest.mark.parametrize(
    "text, line",
    [
        ("p cnf 1 1\n2 0\n", 2),
        ("1 0\n", 1),
        ("p cnf 4 1\n1 2 3 4 0\n", 2),
        ("p cnf 2 1\n1 0\n2 0\n", 3),
        ("p cnf 2 1\n1 x 0\n", 2),
        ("p cnf 2 0\n", 1),
        ("p cnf 2 2\n1 0\n", 2),
        ("p cnf 2 1\n1 2\n", 2),
        ("p cnf 2 1\n0\n", 2),
        ("c only comments\n", 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        parse_dimacs(text)
    assert exc.value.line == line


def test_eval_formula():
    assert eval_formula(CnfFormula(1, ((1,),)), (1,))
    contra = CnfFormula(1, ((1,), (-1,)))
    assert not eval_formula(contra, (0,)) and not eval_formula(contra, (1,))
    f = CnfFormula(3, ((1, 2, 3), (-1, 2, -3)))
    # clause 1: x1 true; clause 2: not x3 true
    assert eval_formula(f, (1, 0, 0))


def test_count_satisfying_examples():
    assert count_satisfying(CnfFormula(1, ((1,),))) == 1
    assert count_satisfying(CnfFormula(1, ((1,), (-1,)))) == 0
    assert count_satisfying(CnfFormula(3, ((1, 2, 3),))) == 7


def test_brute_force_examples():
    assert brute_force_sat(CnfFormula(1, ((1,),))) == (True, (1,))
    assert brute_force_sat(CnfFormula(1, ((1,), (-1,)))) == (False, None)
    assert brute_force_sat(CnfFormula(2, ((1, 2),))) == (True, (0, 1))


def test_caps():
    with pytest.raises(CapExceeded):
        count_satisfying(CnfFormula(25, ((1,),)))
    with pytest.raises(CapExceeded):
        brute_force_sat(CnfFormula(25, ((1,),)))


def test_tautology_and_duplicates_allowed():
    f = parse_dimacs("p cnf 2 2\n1 -1 2 0\n2 2 0\n")
    assert count_satisfying(f) == 2


def test_random_formulas_oracles_agree():
    rng = np.random.default_rng(7)
    for _ in range(50):
        f = random_3cnf(6, int(rng.integers(1, 30)), rng)
        sat, witness = brute_force_sat(f)
        assert sat == (count_satisfying(f) > 0)
        if sat:
            assert eval_formula(f, witness)


def test_count_matches_definition():
    rng = np.random.default_rng(8)
    for n in range(1, 11):
        f = random_3cnf(n, int(rng.integers(1, 3 * n + 2)), rng)
        # reverse loop order relative to the vectorized count
        brute = sum(
            eval_formula(f, x[::-1]) for x in itertools.product((1, 0), repeat=n)
        )
        assert count_satisfying(f) == brute


literal = st.integers(1, 8).flatmap(lambda v: st.sampled_from([v, -v]))


@settings(max_examples=100)
@given(clauses=st.lists(st.lists(literal, min_size=1, max_size=3), min_size=1, max_size=12))
def test_dimacs_roundtrip(clauses):
    n = max(abs(l) for c in clauses for l in c)
    f = CnfFormula(n, tuple(tuple(c) for c in clauses))
    assert parse_dimacs(f.to_dimacs()) == f
