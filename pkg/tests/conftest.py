import itertools
import random

import pytest
from hypothesis import settings, strategies as st

from bnskit.words import CyclicWord, Word, is_cyclically_reduced

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


def letters(rank):
    return st.sampled_from([g for i in range(1, rank + 1) for g in (i, -i)])


def raw_words(rank=3, max_size=12):
    return st.lists(letters(rank), max_size=max_size)


def reduced_words(rank=3, max_size=12):
    return raw_words(rank, max_size).map(Word)


def cyclic_words(rank=3, min_size=1, max_size=12):
    return raw_words(rank, max_size).filter(
        lambda w: len(w) >= min_size and is_cyclically_reduced(w)).map(CyclicWord)


def all_reduced_words(rank, max_len):
    alphabet = [g for i in range(1, rank + 1) for g in (i, -i)]
    for k in range(max_len + 1):
        for w in itertools.product(alphabet, repeat=k):
            if all(w[i] != -w[i + 1] for i in range(k - 1)):
                yield Word(w)


def all_cyclic_words(rank, max_len, min_len=1):
    for w in all_reduced_words(rank, max_len):
        if len(w) >= min_len and is_cyclically_reduced(w):
            yield CyclicWord(w)


@pytest.fixture
def commutator():
    from bnskit.presentation import parse_presentation
    return parse_presentation("<x1,x2 | [x1,x2]>")


@pytest.fixture
def commutator_squared():
    from bnskit.presentation import parse_presentation
    return parse_presentation("<x1,x2 | [x1,x2]^2>")


@pytest.fixture
def bs12():
    from bnskit.presentation import parse_presentation
    return parse_presentation("<x1,x2 | x1 x2 x1^-1 x2^-2>")


@pytest.fixture
def gnw():
    from bnskit.presentation import parse_presentation
    return parse_presentation("<i,j,k,l | [i,j], [j,k], [k,l]>")


def random_normalized_tuple(rnd, n, max_len=40, min_len=2):
    """A character with the sign condition and ``n`` balanced cyclic relators on ``n + 1`` generators."""
    from bnskit.characters import Character
    values = [rnd.choice([0, 0, 1, 1, 2, 3]) for _ in range(n)] + [-rnd.choice([1, 1, 2])]
    phi = Character(values)
    alphabet = [g for i in range(1, n + 2) for g in (i, -i)]
    rels = []
    while len(rels) < n:
        k = rnd.randint(min_len, max_len)
        w = [rnd.choice(alphabet)]
        while len(w) < k:
            a = rnd.choice(alphabet)
            if a != -w[-1]:
                w.append(a)
        if w[0] == -w[-1]:
            continue
        if sum(values[a - 1] if a > 0 else -values[-a - 1] for a in w) == 0:
            rels.append(CyclicWord(w))
    return tuple(rels), phi


def normalized_tuples(max_n=3, max_len=40):
    # a seed keeps the entropy small; rejection sampling would exhaust hypothesis' buffer
    return st.tuples(st.integers(0, 2**32), st.integers(1, max_n)).map(
        lambda args: random_normalized_tuple(random.Random(args[0]), args[1], max_len))
