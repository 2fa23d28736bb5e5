"""Integral characters of a presentation and their normalization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import content, integer_kernel
from .presentation import Presentation, PresentationError, abelianization_matrix
from .words import CyclicWord


class CharacterError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    values: tuple[int, ...]

    def __init__(self, values: Iterable[int]):
        object.__setattr__(self, "values", tuple(int(v) for v in values))

    def __call__(self, w: Sequence[int]) -> int:
        return evaluate(self, w)

    def __neg__(self) -> "Character":
        return Character(-v for v in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, g: int) -> int:
        """Value on the generator with 1-based index ``g``."""
        return self.values[g - 1]

    @property
    def content(self) -> int:
        return content(self.values)

    @property
    def is_zero(self) -> bool:
        return not any(self.values)

    def primitive(self) -> "Character":
        c = self.content
        return self if c in (0, 1) else Character(v // c for v in self.values)

    def to_json(self) -> dict:
        return {"values": list(self.values)}

    @classmethod
    def from_json(cls, data: dict) -> "Character":
        return cls(data["values"])

    @classmethod
    def parse(cls, text: str) -> "Character":
        try:
            return cls(int(t) for t in text.split(","))
        except ValueError:
            raise CharacterError(f"bad character {text!r}; expected e.g. 1,0,-1") from None

    def __str__(self) -> str:
        return ",".join(map(str, self.values))


def evaluate(phi: Character, w: Sequence[int]) -> int:
    vals = phi.values
    total = 0
    for a in w:
        total += vals[a - 1] if a > 0 else -vals[-a - 1]
    return total


def character_lattice(p: Presentation) -> list[Character]:
    """Basis of the characters that vanish on every relator."""
    return [Character(v) for v in integer_kernel(abelianization_matrix(p), p.rank)]


def check_vanishes(p: Presentation, phi: Character) -> None:
    if len(phi) != p.rank:
        raise CharacterError(f"character has {len(phi)} values for {p.rank} generators")
    for i, r in enumerate(p.relators):
        if evaluate(phi, r):
            raise CharacterError(f"character does not vanish on relator {i + 1}")


@dataclass(frozen=True)
class Normalization:
    """Generator moves turning ``phi`` into the ``phi(x_i) >= 0, phi(x_last) < 0`` form.

    ``generator_permutation[k]`` is the original generator placed in slot
    ``k + 1``; ``inversion_mask[g - 1]`` is -1 when generator ``g`` is inverted.
    """

    generator_permutation: tuple[int, ...]
    inversion_mask: tuple[int, ...]
    transformed_presentation: Presentation
    transformed_character: Character

    @property
    def pivot(self) -> int:
        return self.generator_permutation[-1]

    def map_letter(self, a: int) -> int:
        g = abs(a)
        slot = self.generator_permutation.index(g) + 1
        return slot * self.inversion_mask[g - 1] * (1 if a > 0 else -1)

    def unmap_letter(self, a: int) -> int:
        g = self.generator_permutation[abs(a) - 1]
        return g * self.inversion_mask[g - 1] * (1 if a > 0 else -1)

    def pull_back(self, relators: Iterable[Sequence[int]]) -> tuple[CyclicWord, ...]:
        return tuple(CyclicWord(self.unmap_letter(a) for a in r) for r in relators)

    def to_json(self) -> dict:
        return {
            "generator_permutation": list(self.generator_permutation),
            "inversion_mask": list(self.inversion_mask),
            "transformed_presentation": self.transformed_presentation.to_json(),
            "transformed_character": self.transformed_character.to_json(),
        }


def pivot_candidates(phi: Character) -> list[int]:
    """Generators that may take the last (negative) slot, default choice first.

    The default is the negative generator of largest ``|phi|`` (lowest index on
    ties); with no negative value it is the largest positive one.
    """
    vals = phi.values
    negs = [g for g in range(1, len(vals) + 1) if vals[g - 1] < 0]
    pool = negs or [g for g in range(1, len(vals) + 1) if vals[g - 1] > 0]
    if not pool:
        return []
    default = min(pool, key=lambda g: (-abs(vals[g - 1]), g))
    return [default] + [g for g in range(1, len(vals) + 1) if vals[g - 1] and g != default]


def satisfies_sign_condition(phi: Character) -> bool:
    v = phi.values
    return v[-1] < 0 and all(x >= 0 for x in v[:-1])


def normalize(p: Presentation, phi: Character, pivot: int | None = None) -> Normalization:
    """Reorder and invert generators so only the last one has negative value.

    ``pivot`` selects the generator sent to the last slot (default rule in
    :func:`pivot_candidates`).  Other generators keep their relative order.
    """
    try:
        p.require_deficiency_one()
    except PresentationError as exc:
        raise CharacterError(str(exc)) from None
    if phi.is_zero:
        raise CharacterError("the zero character cannot be normalized")
    check_vanishes(p, phi)
    candidates = pivot_candidates(phi)
    if pivot is None:
        pivot = candidates[0]
    elif pivot not in candidates:
        raise CharacterError(f"generator {pivot} has value 0 and cannot be the pivot")
    vals = phi.values
    mask = []
    for g in range(1, p.rank + 1):
        v = vals[g - 1]
        mask.append(-1 if (g == pivot and v > 0) or (g != pivot and v < 0) else 1)
    perm = tuple([g for g in range(1, p.rank + 1) if g != pivot] + [pivot])
    slot_of = {g: k + 1 for k, g in enumerate(perm)}
    rels = tuple(
        CyclicWord(slot_of[abs(a)] * mask[abs(a) - 1] * (1 if a > 0 else -1) for a in r) for r in p.relators)
    names = None
    if p.generator_names is not None:
        names = tuple(p.generator_names[g - 1] + ("_inv" if mask[g - 1] < 0 else "") for g in perm)
    new_phi = Character(vals[g - 1] * mask[g - 1] for g in perm)
    return Normalization(perm, tuple(mask), Presentation(p.rank, rels, names), new_phi)
