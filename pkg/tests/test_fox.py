import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from bnskit.characters import Character
from bnskit.fox import (
    GroupRingElement,
    StructureError,
    UnitStatus,
    fox_derivative,
    fox_identity_holds,
    fox_matrix,
    grade,
    leading_unit_test,
    structural_verify,
)
from bnskit.presentation import Presentation
from bnskit.sections import Status, classify
from bnskit.transform import insert_commutators
from bnskit.words import Word

from conftest import normalized_tuples, raw_words, reduced_words

E = GroupRingElement.word


def fox_oracle(letters, j):
    """Product rule applied recursively to an unreduced letter sequence."""
    if not letters:
        return GroupRingElement()
    if len(letters) == 1:
        a = letters[0]
        if a == j:
            return GroupRingElement.one()
        if a == -j:
            return -E([a])
        return GroupRingElement()
    mid = len(letters) // 2
    u, v = letters[:mid], letters[mid:]
    return fox_oracle(u, j) + E(u) * fox_oracle(v, j)


def test_commutator_derivatives():
    r = [1, 2, -1, -2]
    assert fox_derivative(r, 1) == E([]) - E([1, 2, -1])
    assert fox_derivative(r, 2) == E([1]) - E([1, 2, -1, -2])


def test_inverse_letter_contribution():
    assert fox_derivative([-1], 1) == -E([-1])
    assert fox_derivative([2, -1, 3], 1) == -E([2, -1])
    assert not fox_derivative([2, 3], 1)


@given(raw_words(rank=3, max_size=24), st.integers(1, 3))
def test_derivative_matches_product_rule(letters, j):
    assert fox_derivative(Word(letters), j) == fox_oracle(tuple(letters), j)


@given(raw_words(rank=4, max_size=60))
def test_fundamental_identity(letters):
    assert fox_identity_holds(Word(letters), 4)


def test_ring_arithmetic():
    x = E([1])
    assert x * E([-1]) == GroupRingElement.one()
    assert (x - x).terms == {}
    assert (2 * x).terms == {Word([1]): Fraction(2)}
    assert GroupRingElement({(1, -1): 3}) == GroupRingElement({(): 3})
    assert GroupRingElement().format() == "0"


def test_grade_example():
    phi = Character([1, -1])
    g = grade(fox_derivative([1, 2, -1, -2], 1), phi)
    assert sorted(g.pieces) == [-1, 0]
    assert g.min_degree == -1
    assert grade(GroupRingElement(), phi).min_degree == math.inf


def _elements(rank=3):
    term = st.tuples(reduced_words(rank, 6), st.integers(-3, 3).filter(bool))
    return st.lists(term, min_size=1, max_size=4).map(
        lambda ts: GroupRingElement({w: c for w, c in ts}))


@given(_elements(), _elements(), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_grade_is_submultiplicative(e, f, values):
    phi = Character(values)
    ge, gf = grade(e, phi), grade(f, phi)
    prod = grade(e * f, phi)
    if not e or not f:
        return
    assert prod.min_degree >= ge.min_degree + gf.min_degree
    if len(ge.leading) == 1 and len(gf.leading) == 1:
        assert prod.min_degree == ge.min_degree + gf.min_degree


@given(_elements(), st.lists(st.integers(-2, 2), min_size=3, max_size=3))
def test_grade_partitions_terms(e, values):
    g = grade(e, Character(values))
    merged = {}
    for piece in g.pieces.values():
        assert not set(piece.terms) & set(merged)
        merged.update(piece.terms)
    assert merged == e.terms


def test_leading_unit_test():
    phi = Character([1, -1])
    assert leading_unit_test(E([1]) * 5, phi=phi) is UnitStatus.UNIT
    pair = E([1, 2]) + E([2, 1]) * Fraction(-3, 2)
    assert leading_unit_test(pair, True, phi) is UnitStatus.NONUNIT
    assert leading_unit_test(pair, False, phi) is UnitStatus.UNKNOWN
    assert leading_unit_test(pair + E([1, 1, 2, 2]), True, phi) is UnitStatus.UNKNOWN
    with pytest.raises(ValueError):
        leading_unit_test(E([1]) + E([2]), phi=phi)


def test_structure_commutator(commutator):
    phi = Character([1, -1])
    rep = structural_verify(commutator, phi, classify(commutator, phi))
    assert rep.diag_leading[0].kind == "SINGLE"
    assert rep.diag_status == (UnitStatus.UNIT,)
    assert not rep.nonunit_certificate


def test_structure_commutator_squared(commutator_squared):
    phi = Character([1, -1])
    report = classify(commutator_squared, phi)
    rep = structural_verify(commutator_squared, phi, report, no_zero_divisors=True)
    piece = rep.diag_leading[0]
    assert piece.kind == "PAIR"
    assert piece.u == Word([1, 2, -1])
    assert piece.v == Word([-2, 1, 2, -1])
    assert piece.coefficients == (-1, -1)
    assert rep.nonunit_certificate and rep.assumptions
    assert not structural_verify(commutator_squared, phi, report).nonunit_certificate


def test_structure_rejects_neither(bs12):
    phi = Character([1, 0])
    with pytest.raises(ValueError):
        structural_verify(bs12, phi, classify(bs12, phi))


@given(normalized_tuples(max_n=3, max_len=20))
def test_structure_on_transform_images(case):
    rels, phi = case
    try:
        rec = insert_commutators(rels, phi)
    except ValueError:
        return
    p = rec.output_presentation()
    for sign, status in ((1, Status.UNIQUE), (-1, Status.REPEATED)):
        psi = phi if sign > 0 else -phi
        report = classify(p, psi)
        assert report.status is status
        rep = structural_verify(p, psi, report, no_zero_divisors=True)
        assert all(all(row) for row in rep.offdiag_ok)
        assert rep.nonunit_certificate is (status is Status.REPEATED)


def test_fox_matrix_dump(commutator):
    dump = fox_matrix(commutator, Character([1, -1]))
    assert len(dump["entries"]) == 2
    terms = dump["entries"][0]["terms"]
    assert [t["degree"] for t in terms] == [0, -1]
    assert terms[1]["coefficient"] == "-1"
