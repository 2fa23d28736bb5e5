"""Height profiles of relators and the unique / repeated minimum conditions.

Vertex ``k`` of a relator's cycle sits between letters ``k-1`` and ``k``
(vertex 0 is the marked vertex); edge ``k`` runs from vertex ``k`` to vertex
``k+1`` and carries letter ``k``.  The height of vertex ``k`` is the character
value of the prefix of length ``k``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .characters import Character, CharacterError, check_vanishes, pivot_candidates
from .presentation import Presentation, PresentationError


@dataclass(frozen=True)
class CycleWalk:
    relator: tuple[int, ...]
    heights: tuple[int, ...]

    @property
    def min_height(self) -> int:
        return min(self.heights)

    @property
    def max_height(self) -> int:
        return max(self.heights)


def cycle_walk(r: Sequence[int], phi: Character) -> CycleWalk:
    vals = phi.values
    h = 0
    heights = []
    for a in r:
        heights.append(h)
        h += vals[a - 1] if a > 0 else -vals[-a - 1]
    if h:
        raise CharacterError(f"character takes value {h} on the relator, expected 0")
    return CycleWalk(tuple(r), tuple(heights))


@dataclass(frozen=True)
class Arc:
    """A connected piece of a section: consecutive vertices joined by flat edges."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    in_letter: int | None     # letter on the edge entering the arc (None for a full circle)
    out_letter: int | None    # letter on the edge leaving the arc

    def shape(self, relator: Sequence[int], pivot: int) -> tuple[str, int] | None:
        """``("vertex", g)`` or ``("edge", g)`` if the arc has an allowed local shape."""
        if self.in_letter is None:
            return None
        a, b = abs(self.in_letter), abs(self.out_letter)
        if len(self.vertices) == 1:
            if a == pivot and b != pivot:
                return "vertex", b
            if b == pivot and a != pivot:
                return "vertex", a
            return None
        if len(self.vertices) == 2:
            g = abs(relator[self.edges[0]])
            if g != pivot and a == pivot and b == pivot:
                return "edge", g
        return None


@dataclass(frozen=True)
class SectionDescriptor:
    height: int
    vertices: tuple[int, ...]
    full_edges: tuple[int, ...]
    arcs: tuple[Arc, ...] = field(repr=False)

    @property
    def components(self) -> int:
        return len(self.arcs)

    @property
    def is_circle(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0].in_letter is None

    def to_json(self) -> dict:
        return {
            "height": self.height,
            "vertices": list(self.vertices),
            "full_edges": list(self.full_edges),
            "components": self.components,
            "arcs": [
                {"vertices": list(a.vertices), "edges": list(a.edges),
                 "in_letter": a.in_letter, "out_letter": a.out_letter}
                for a in self.arcs
            ],
        }


def _section(walk: CycleWalk, height: int) -> SectionDescriptor:
    h, r = walk.heights, walk.relator
    n = len(h)
    verts = tuple(k for k in range(n) if h[k] == height)
    vset = set(verts)
    full = tuple(k for k in verts if (k + 1) % n in vset)
    fset = set(full)
    if len(full) == n:
        arcs = (Arc(verts, full, None, None),)
    else:
        arcs = []
        for v in verts:
            if (v - 1) % n in fset:
                continue  # not the start of an arc
            vs, es = [v], []
            k = v
            while k in fset:
                es.append(k)
                k = (k + 1) % n
                vs.append(k)
            arcs.append(Arc(tuple(vs), tuple(es), r[(v - 1) % n], r[k]))
        arcs = tuple(arcs)
    return SectionDescriptor(height, verts, full, arcs)


def lower_section(r: Sequence[int], phi: Character) -> SectionDescriptor:
    walk = cycle_walk(r, phi)
    return _section(walk, walk.min_height)


def upper_section(r: Sequence[int], phi: Character) -> SectionDescriptor:
    return lower_section(r, -phi)


class Status(str, enum.Enum):
    UNIQUE = "UNIQUE"
    REPEATED = "REPEATED"
    NEITHER = "NEITHER"


@dataclass(frozen=True)
class ConditionReport:
    status: Status
    character: Character
    pivot: int                                  # generator playing the role of x_{n+1}
    matching: tuple[int, ...] | None            # generator assigned to each relator
    repeated_relator: int | None                # 1-based
    sections: tuple[SectionDescriptor, ...]
    heights: tuple[tuple[int, ...], ...]
    shapes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "character": list(self.character.values),
            "pivot": self.pivot,
            "matching": list(self.matching) if self.matching else None,
            "repeated_relator": self.repeated_relator,
            "shapes": list(self.shapes),
            "relators": [
                {"heights": list(h), "lower_section": s.to_json()}
                for h, s in zip(self.heights, self.sections)
            ],
        }


def _relator_shape(relator, section: SectionDescriptor, pivot: int):
    """Return ``(kind, generator, copies)`` or None."""
    shapes = [arc.shape(relator, pivot) for arc in section.arcs]
    if not shapes or None in shapes or len(shapes) > 2:
        return None
    if len(shapes) == 2 and shapes[0] != shapes[1]:
        return None  # mixed kinds or different generators
    kind, g = shapes[0]
    return kind, g, len(shapes)


def classify(p: Presentation, phi: Character, pivot: int | None = None) -> ConditionReport:
    """Decide which minimum condition ``(relators, phi)`` satisfies.

    The conditions allow reordering and inverting generators.  Sections do not
    depend on that choice, only the role of the last generator does, so each
    admissible pivot is tried in turn (default normalization first) unless
    ``pivot`` is fixed.  Every arc shape names its generator, which makes the
    relator-to-generator assignment forced once the pivot is chosen.
    """
    try:
        p.require_deficiency_one()
    except PresentationError as exc:
        raise CharacterError(str(exc)) from None
    if phi.is_zero:
        raise CharacterError("classification needs a non-zero character")
    check_vanishes(p, phi)
    walks = [cycle_walk(r, phi) for r in p.relators]
    sections = tuple(_section(w, w.min_height) for w in walks)
    heights = tuple(w.heights for w in walks)
    candidates = pivot_candidates(phi)
    if pivot is not None:
        if pivot not in candidates:
            raise CharacterError(f"generator {pivot} has value 0 and cannot be the pivot")
        candidates = [pivot]
    for piv in candidates:
        shapes = [_relator_shape(r, s, piv) for r, s in zip(p.relators, sections)]
        if None in shapes:
            continue
        gens = tuple(s[1] for s in shapes)
        if len(set(gens)) != len(gens):
            continue
        doubled = [i for i, s in enumerate(shapes) if s[2] == 2]
        kinds = tuple(s[0] for s in shapes)
        if not doubled:
            return ConditionReport(Status.UNIQUE, phi, piv, gens, None, sections, heights, kinds)
        if len(doubled) == 1:
            return ConditionReport(Status.REPEATED, phi, piv, gens, doubled[0] + 1, sections, heights, kinds)
    return ConditionReport(Status.NEITHER, phi, candidates[0], None, None, sections, heights)
