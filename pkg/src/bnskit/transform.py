"""Commutator insertion producing a unique minimum and a repeated maximum, and its inverse.

Works on normalized tuples: ``n`` relators over ``n + 1`` generators with
``phi(x_i) >= 0`` for ``i <= n`` and ``phi(x_{n+1}) < 0``.  Relator ``i`` is
paired with generator ``x_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .characters import Character, satisfies_sign_condition
from .presentation import Presentation
from .sections import cycle_walk
from .words import CyclicWord


class TransformError(ValueError):
    def __init__(self, kind: str, message: str):
        super().__init__(f"{kind}: {message}")
        self.kind = kind


FREE_CANCELLATION = "FREE_CANCELLATION"
NORMALIZATION = "NORMALIZATION"
NOT_AN_IMAGE = "NOT_AN_IMAGE"


@dataclass(frozen=True)
class Insertion:
    min_vertex: int
    epsilon: int
    max_vertex: int


@dataclass(frozen=True)
class TransformRecord:
    input_tuple: tuple[CyclicWord, ...]
    character: Character
    insertion_log: tuple[Insertion, ...]
    output_tuple: tuple[CyclicWord, ...]

    def output_presentation(self) -> Presentation:
        return Presentation(len(self.character), self.output_tuple)

    def to_json(self) -> dict:
        rank = len(self.character)
        return {
            "character": list(self.character.values),
            "input": Presentation(rank, self.input_tuple).to_json(),
            "insertion_log": [vars(ins) for ins in self.insertion_log],
            "output": Presentation(rank, self.output_tuple).to_json(),
            "output_text": self.output_presentation().format(),
        }


def _commutator(a: int, b: int) -> tuple[int, ...]:
    return (a, b, -a, -b)


def _first(heights: Sequence[int], target: int) -> int:
    return heights.index(target)


def _check_normalized(relators: Sequence[Sequence[int]], phi: Character) -> None:
    n = len(relators)
    if len(phi) != n + 1:
        raise TransformError(NORMALIZATION, f"{n} relators need a character on {n + 1} generators")
    if not satisfies_sign_condition(phi):
        raise TransformError(NORMALIZATION, "character must be >= 0 on x_1..x_n and < 0 on x_{n+1}")
    for i, r in enumerate(relators):
        try:
            cycle_walk(r, phi)
        except ValueError:
            raise TransformError(NORMALIZATION, f"character does not vanish on relator {i + 1}") from None


def _insert(r: tuple, k: int, block: tuple) -> tuple:
    out = r[:k] + block + r[k:]
    # the block sits between letters out[k-1] and out[k+len(block)] (cyclically)
    before, after = out[k - 1], out[(k + len(block)) % len(out)]
    if before == -block[0] or after == -block[-1]:
        raise TransformError(FREE_CANCELLATION, f"inserted block cancels at vertex {k}")
    return out


def _epsilon(phi: Character, i: int) -> int:
    return -1 if phi[i] > 0 else 1


def insert_commutators(relators: Sequence[Sequence[int]], phi: Character) -> TransformRecord:
    """Insert ``[x_{n+1}, x_i^e]`` at the first minimal vertex of relator ``i``
    and ``[x_{n+1}^-1, x_i^-e]`` (squared for ``i = 1``) at the first maximal
    vertex of the result."""
    rels = tuple(CyclicWord(r) for r in relators)
    _check_normalized(rels, phi)
    t = len(rels) + 1
    log, out = [], []
    for i, r in enumerate(rels, start=1):
        eps = _epsilon(phi, i)
        h = cycle_walk(r, phi).heights
        kmin = _first(h, min(h))
        r1 = _insert(tuple(r), kmin, _commutator(t, eps * i))
        h1 = cycle_walk(r1, phi).heights
        kmax = _first(h1, max(h1))
        block = _commutator(-t, -eps * i)
        r2 = _insert(r1, kmax, block * 2 if i == 1 else block)
        log.append(Insertion(kmin, eps, kmax))
        out.append(CyclicWord(r2))
    return TransformRecord(rels, phi, tuple(log), tuple(out))


def _remove_at_extremum(r: tuple, heights: Sequence[int], use_max: bool, block: tuple, flat: bool):
    target = max(heights) if use_max else min(heights)
    first = _first(heights, target)
    start = first - (1 if flat else 2)
    if start < 0 or r[start:start + len(block)] != block:
        raise TransformError(NOT_AN_IMAGE, "inserted commutator not found at the extremal vertex")
    return r[:start] + r[start + len(block):], start


def remove_commutators(relators_or_record, phi: Character | None = None) -> tuple[CyclicWord, ...]:
    """Left inverse of :func:`insert_commutators`; raises on non-images."""
    if isinstance(relators_or_record, TransformRecord):
        rels = relators_or_record.output_tuple
        phi = relators_or_record.character if phi is None else phi
    else:
        rels = tuple(CyclicWord(r) for r in relators_or_record)
    if phi is None:
        raise ValueError("a character is required")
    _check_normalized(rels, phi)
    t = len(rels) + 1
    originals = []
    for i, r2 in enumerate(rels, start=1):
        eps = _epsilon(phi, i)
        flat = phi[i] == 0
        block = _commutator(-t, -eps * i)
        r1, _ = _remove_at_extremum(tuple(r2), cycle_walk(r2, phi).heights, True,
                                    block * 2 if i == 1 else block, flat)
        r0, _ = _remove_at_extremum(r1, cycle_walk(r1, phi).heights, False, _commutator(t, eps * i), flat)
        if not r0:
            raise TransformError(NOT_AN_IMAGE, f"relator {i} is empty after removal")
        try:
            originals.append(CyclicWord(r0))
        except ValueError:
            raise TransformError(NOT_AN_IMAGE, f"relator {i} is not cyclically reduced after removal") from None
    originals = tuple(originals)
    try:
        again = insert_commutators(originals, phi).output_tuple
    except TransformError:
        again = None
    if again != rels:
        raise TransformError(NOT_AN_IMAGE, "tuple is not in the image of the insertion map")
    return originals
