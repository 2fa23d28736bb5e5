import random

import pytest
from hypothesis import given, strategies as st

from bnskit.characters import Character, CharacterError, character_lattice
from bnskit.presentation import Presentation, parse_presentation
from bnskit.sections import Status, classify, cycle_walk, lower_section, upper_section
from bnskit.words import CyclicWord

from conftest import cyclic_words

COMM = (1, 2, -1, -2)


def brute_section(r, phi, lower=True):
    """Direct scan: heights by summing each prefix from scratch."""
    vals = phi.values
    n = len(r)
    h = [sum(vals[abs(a) - 1] * (1 if a > 0 else -1) for a in r[:k]) for k in range(n)]
    target = min(h) if lower else max(h)
    verts = [k for k in range(n) if h[k] == target]
    edges = [k for k in range(n) if h[k] == target and h[(k + 1) % n] == target]
    return verts, edges


@pytest.mark.parametrize("r, phi, heights", [
    (COMM, (1, -1), (0, 1, 0, -1)),
    ((1, 2), (1, -1), (0, 1)),
    (COMM, (0, 0), (0, 0, 0, 0)),
])
def test_cycle_walk_examples(r, phi, heights):
    w = cycle_walk(r, Character(phi))
    assert w.heights == heights
    assert w.min_height == min(heights)


def test_cycle_walk_rejects_nonvanishing():
    with pytest.raises(CharacterError):
        cycle_walk((1, 2), Character([1, 1]))


def test_section_examples():
    phi = Character([1, -1])
    low = lower_section(COMM, phi)
    assert low.vertices == (3,) and low.full_edges == ()
    assert lower_section(COMM * 2, phi).vertices == (3, 7)
    assert upper_section(COMM, phi).vertices == (1,)
    assert len(upper_section(COMM * 2, phi).vertices) == 2
    s = lower_section((1, 2, 1, -2), Character([0, -1]))
    assert s.vertices == (2, 3) and s.full_edges == (2,) and s.components == 1
    assert upper_section(COMM, Character([0, 0])).is_circle


def test_classify_examples(commutator, commutator_squared, bs12):
    rep = classify(commutator, Character([1, -1]))
    assert rep.status is Status.UNIQUE and rep.matching == (1,)
    rep = classify(commutator_squared, Character([1, -1]))
    assert rep.status is Status.REPEATED and rep.repeated_relator == 1
    assert classify(bs12, Character([1, 0])).status is Status.NEITHER


def test_classify_errors(bs12):
    with pytest.raises(CharacterError):
        classify(bs12, Character([1, 1]))
    with pytest.raises(CharacterError):
        classify(parse_presentation("<x1,x2,x3 | [x1,x2]>"), Character([1, 0, 0]))
    with pytest.raises(CharacterError):
        classify(bs12, Character([0, 0]))


def test_mixed_doubled_shape_is_neither():
    # a vertex occurrence for x1 and an edge occurrence for x2 in the same lower section
    phi = Character([1, 0, -1])
    r = CyclicWord([1, 3, 2, -3, 2, 3])
    sec = lower_section(r, phi)
    assert {a.shape(r, 3) for a in sec.arcs} == {("vertex", 1), ("edge", 2)}
    p = Presentation(3, (r, CyclicWord([3, 2, -3, -2])))
    assert classify(p, phi).status is Status.NEITHER


@given(cyclic_words(rank=3, max_size=40), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_sections_match_brute_force(r, values):
    p = Presentation(3, (r,))
    basis = character_lattice(p)
    phi = Character(values)
    if phi(r) != 0:
        if not basis:
            return
        phi = basis[0]
    for lower, fn in ((True, lower_section), (False, upper_section)):
        sec = fn(r, phi)
        verts, edges = brute_section(r, phi, lower)
        assert list(sec.vertices) == verts and list(sec.full_edges) == edges
        # Euler check: arcs are paths, so components = vertices - edges
        if not sec.is_circle:
            assert sec.components == len(sec.vertices) - len(sec.full_edges)
        for e in sec.full_edges:
            assert phi([r[e]]) == 0


@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_classify_scaling_invariance(lam, rnd):
    from conftest import random_normalized_tuple
    n = rnd.randint(1, 3)
    rels, phi = random_normalized_tuple(rnd, n, 20)
    p = Presentation(n + 1, rels)
    a, b = classify(p, phi), classify(p, Character([lam * v for v in phi.values]))
    assert (a.status, a.matching, a.repeated_relator, a.pivot) == (b.status, b.matching, b.repeated_relator, b.pivot)


def test_report_json_has_heights(commutator):
    data = classify(commutator, Character([1, -1])).to_json()
    assert data["relators"][0]["heights"] == [0, 1, 0, -1]
    assert data["status"] == "UNIQUE"
