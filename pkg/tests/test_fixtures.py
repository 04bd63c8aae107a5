from fractions import Fraction

import pytest

from frameadmit.fixtures import FIXTURES, KNOWN_TRUTH, norm_obstruction, run_example
from frameadmit.errors import UnknownExample
from oracles import gapped_identity_bounds


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_pipeline_matches_expected(name):
    rep = run_example(name)
    assert rep["matches_expected"]
    if "synthesis" in rep:
        assert rep["synthesis"]["pass"]


def test_obstruction_values():
    rep = norm_obstruction()
    loose, exact = gapped_identity_bounds(Fraction(1, 2), Fraction(1, 5))
    assert rep["loose_bound_exact"] == "11/24"
    assert abs(rep["loose_bound"] - float(loose)) <= 1e-12
    assert abs(rep["exact_bound"] - float(exact)) <= 1e-12
    assert rep["contradiction"]


def test_obstruction_disappears_for_large_a():
    # a / (1 - a^2) >= 1/4 leaves the loose bound above p
    assert not norm_obstruction(Fraction(1, 2), Fraction(1, 2))["contradiction"]


def test_known_truth_recorded():
    assert KNOWN_TRUTH["6.1"] == "NotAdmissible"
    assert run_example("6.3")["known_truth"] == "Admissible"


def test_one_two_constructions():
    rep = run_example("6.6")
    assert rep["pack"]["pass"] and rep["pack"]["excess"] == 1
    assert rep["riesz_basis_truncation"]["pass"] and rep["riesz_basis_truncation"]["excess"] == 0
    assert rep["synthesis"]["vectors"] == 6


def test_spherical_excess():
    rep = run_example("6.7")
    assert rep["synthesis"]["excess"] == 2 and rep["synthesis"]["tight"]


def test_unknown():
    with pytest.raises(UnknownExample):
        run_example("7.1")
