"""Cross-checks between the shipped grading matrices and the recomputed ones."""

import pytest

from halphen.checks import find_isomorphism, matching_isomorphism, same_count_function, transport
from halphen.polytope import count
from halphen.roots import TYPES13, ClassGroupElement, GradingMatrix, appendix_grading, torsion_elements
from halphen.surface import reconstruct_neg2_curves, table1_sequence


@pytest.fixture(scope="module")
def models():
    return {name: reconstruct_neg2_curves(table1_sequence(name)) for name in TYPES13}


@pytest.mark.parametrize("name", TYPES13)
def test_recomputed_matrix_is_isomorphic_to_fixture(models, name):
    model = models[name]
    assert matching_isomorphism(appendix_grading(name), model.q_matrix, model.configuration)


@pytest.mark.parametrize("name", TYPES13)
def test_transported_counts_agree(models, name):
    model = models[name]
    assert same_count_function(appendix_grading(name), model.q_matrix, model.configuration, 2)


def test_transport_maps_column_degrees(models):
    model = models["D5+A3"]
    a = appendix_grading("D5+A3")
    b2, iso = matching_isomorphism(a, model.q_matrix, model.configuration)
    images = sorted(transport(a.degree(j), iso, a.moduli) for j in range(a.num_columns))
    assert images == sorted(b2.degree(j) for j in range(b2.num_columns))


def test_printed_e6_a2_torsion_row_is_inconsistent(models):
    # the row as printed gives two of the three mark-1 nodes of the E6 fiber
    # the same residue; no isomorphism can match the recomputed class map
    model = models["E6+A2"]
    fixed = appendix_grading("E6+A2")
    printed = GradingMatrix(fixed.free_rows, ((3, (0, 0, 0, 1, 1, 2, 1, 0, 1, 2)),))
    assert find_isomorphism(printed, model.q_matrix, model.configuration) is None
    assert not same_count_function(printed, model.q_matrix, model.configuration, 1)
    # the twist counts of the index-2 degree do not see the difference
    for q in (printed, fixed):
        assert {count(q, ClassGroupElement((2, 2), t)) for t in torsion_elements(q)} == {18}


def test_printed_4a2_row_breaks_block_structure():
    fixed = appendix_grading("4A2")
    rows = [list(r) for r in fixed.free_rows]
    rows[2][4] = 1
    with pytest.raises(ValueError):
        GradingMatrix(tuple(map(tuple, rows)), fixed.torsion)


def test_different_class_groups_are_not_isomorphic(models):
    model = models["D8"]
    assert not same_count_function(appendix_grading("D8"), appendix_grading("A8"), model.configuration, 1)
