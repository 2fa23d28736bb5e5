"""Free differential calculus and leading-degree analysis of Fox matrices."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .characters import Character, evaluate, normalize
from .presentation import Presentation
from .sections import ConditionReport, Status, cycle_walk
from .words import Word, concat, format_word, invert


class GroupRingElement:
    """Finite rational combination of free group words.

    >>> x1, x2 = GroupRingElement.word([1]), GroupRingElement.word([2])
    >>> (x1 + x2) * (x1 - x2)
    GroupRingElement('x1^2 - x1 x2 + x2 x1 - x2^2')
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Sequence[int], Fraction | int] | None = None):
        self.terms: dict[Word, Fraction] = {}
        if terms:
            for w, c in terms.items():
                self._add_term(Word(w), Fraction(c))

    def _add_term(self, w: Word, c: Fraction) -> None:
        new = self.terms.get(w, 0) + c
        if new:
            self.terms[w] = new
        else:
            self.terms.pop(w, None)

    @classmethod
    def word(cls, w: Sequence[int], coefficient: Fraction | int = 1) -> "GroupRingElement":
        return cls({Word(w): coefficient})

    @classmethod
    def one(cls) -> "GroupRingElement":
        return cls.word(())

    def copy(self) -> "GroupRingElement":
        out = GroupRingElement()
        out.terms = dict(self.terms)
        return out

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        out = self.copy()
        for w, c in other.terms.items():
            out._add_term(w, c)
        return out

    def __neg__(self) -> "GroupRingElement":
        out = GroupRingElement()
        out.terms = {w: -c for w, c in self.terms.items()}
        return out

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        return self + (-other)

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, (int, Fraction)):
            if not other:
                return GroupRingElement()
            out = GroupRingElement()
            out.terms = {w: c * other for w, c in self.terms.items()}
            return out
        out = GroupRingElement()
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                out._add_term(concat(u, v), a * b)
        return out

    def __rmul__(self, other) -> "GroupRingElement":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def support(self) -> list[Word]:
        return sorted(self.terms, key=lambda w: (len(w), tuple(w)))

    def format(self, names=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in self.support():
            c = self.terms[w]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = format_word(w, names) or "1"
            if mag != 1:
                body = f"{mag}*{body}" if w else str(mag)
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"GroupRingElement({self.format()!r})"

    def to_json(self, phi: Character | None = None) -> list[dict]:
        out = []
        for w in self.support():
            entry = {"word": list(w), "coefficient": str(self.terms[w])}
            if phi is not None:
                entry["degree"] = evaluate(phi, w)
            out.append(entry)
        return out


def fox_derivative(r: Sequence[int], j: int) -> GroupRingElement:
    """Fox derivative of ``r`` with respect to ``x_j``.

    A letter ``x_j`` contributes ``+u`` where ``u`` is the prefix before it; a
    letter ``x_j^-1`` contributes ``-u x_j^-1``, the prefix ending with it.

    >>> fox_derivative([1, 1, 1], 1)
    GroupRingElement('1 + x1 + x1^2')
    """
    out = GroupRingElement()
    letters = tuple(Word(r))
    for k, a in enumerate(letters):
        if a == j:
            out._add_term(Word._trusted(letters[:k]), Fraction(1))
        elif a == -j:
            out._add_term(Word._trusted(letters[:k + 1]), Fraction(-1))
    return out


def fox_identity_holds(r: Sequence[int], rank: int) -> bool:
    """Check the fundamental formula ``sum_j (dr/dx_j)(x_j - 1) = r - 1``."""
    total = GroupRingElement()
    one = GroupRingElement.one()
    for j in range(1, rank + 1):
        d = fox_derivative(r, j)
        if d:
            total = total + d * (GroupRingElement.word([j]) - one)
    return total == GroupRingElement.word(r) - one


@dataclass(frozen=True)
class GradedDecomposition:
    pieces: dict[int, GroupRingElement]

    @property
    def min_degree(self) -> float | int:
        """The t-order; ``math.inf`` for the zero element."""
        return min(self.pieces, default=math.inf)

    @property
    def leading(self) -> GroupRingElement:
        return self.pieces[self.min_degree] if self.pieces else GroupRingElement()


def grade(e: GroupRingElement, phi: Character) -> GradedDecomposition:
    pieces: dict[int, GroupRingElement] = {}
    for w, c in e.terms.items():
        pieces.setdefault(evaluate(phi, w), GroupRingElement()).terms[w] = c
    return GradedDecomposition(dict(sorted(pieces.items())))


class UnitStatus(str, enum.Enum):
    UNIT = "UNIT"
    NONUNIT = "NONUNIT"
    UNKNOWN = "UNKNOWN"


def leading_unit_test(piece: GroupRingElement, no_zero_divisors: bool = False,
                      phi: Character | None = None) -> UnitStatus:
    """Unit test for a homogeneous leading piece in the Novikov ring.

    One term ``c*w`` is a unit.  Two terms ``a*u + b*u*v`` factor as
    ``b*u*(v + a/b)`` with ``phi(v) = 0``, which is not a unit once ``v`` has
    infinite order; that needs the no-zero-divisor hypothesis.  Anything else
    is left undecided.
    """
    if phi is not None and len({evaluate(phi, w) for w in piece.terms}) > 1:
        raise ValueError("piece is not homogeneous for the character")
    if len(piece) == 1:
        return UnitStatus.UNIT
    if len(piece) == 2 and no_zero_divisors:
        return UnitStatus.NONUNIT
    return UnitStatus.UNKNOWN


class StructureError(RuntimeError):
    """A leading-degree conclusion failed on an input that passed classification."""


@dataclass(frozen=True)
class LeadingPiece:
    kind: str                        # "SINGLE" or "PAIR"
    u: Word
    v: Word | None = None            # PAIR: the other term is u*v
    coefficients: tuple[Fraction, ...] = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "u": list(self.u), "v": None if self.v is None else list(self.v),
                "coefficients": [str(c) for c in self.coefficients]}


@dataclass(frozen=True)
class StructureReport:
    """Leading-degree structure of the square Fox matrix in normalized coordinates.

    Row ``i`` is relator ``relator_order[i]`` (1-based, original numbering),
    column ``j`` the generator ``generator_order[j]`` (original numbering).
    """

    relator_order: tuple[int, ...]
    generator_order: tuple[int, ...]
    minima: tuple[int, ...]
    offdiag_ok: tuple[tuple[bool, ...], ...]
    diag_leading: tuple[LeadingPiece, ...]
    diag_status: tuple[UnitStatus, ...]
    nonunit_certificate: bool
    assumptions: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "relator_order": list(self.relator_order),
            "generator_order": list(self.generator_order),
            "minima": list(self.minima),
            "offdiag_ok": [list(row) for row in self.offdiag_ok],
            "diag_leading": [p.to_json() for p in self.diag_leading],
            "diag_status": [s.value for s in self.diag_status],
            "nonunit_certificate": self.nonunit_certificate,
            "assumptions": list(self.assumptions),
        }


def _leading_piece(piece: GroupRingElement) -> LeadingPiece:
    words = piece.support()
    coeffs = tuple(piece.terms[w] for w in words)
    if len(words) == 1:
        return LeadingPiece("SINGLE", words[0], None, coeffs)
    if len(words) == 2:
        u, uv = words
        return LeadingPiece("PAIR", u, concat(invert(u), uv), coeffs)
    return LeadingPiece("MANY", words[0], None, coeffs)


def structural_verify(p: Presentation, phi: Character, report: ConditionReport,
                      no_zero_divisors: bool = False) -> StructureReport:
    """Check the leading-degree shape of the restricted Fox matrix.

    Works in the normalization given by ``report.pivot`` with the repeated
    relator and its generator moved to the first row and column.  Raises
    :class:`StructureError` when any expected property fails.
    """
    if report.status not in (Status.UNIQUE, Status.REPEATED):
        raise ValueError(f"structural verification needs UNIQUE or REPEATED input, got {report.status.value}")
    norm = normalize(p, phi, pivot=report.pivot)
    q, psi = norm.transformed_presentation, norm.transformed_character
    n = q.n_relators
    order = list(range(n))
    if report.status is Status.REPEATED:
        j = report.repeated_relator - 1
        order = [j] + [i for i in order if i != j]
    slots = [norm.generator_permutation.index(report.matching[i]) + 1 for i in order]

    minima, offdiag, leading, status = [], [], [], []
    for row, ri in enumerate(order):
        r = q.relators[ri]
        pmin = cycle_walk(r, psi).min_height
        minima.append(pmin)
        ok_row = []
        for col, slot in enumerate(slots):
            g = grade(fox_derivative(r, slot), psi)
            if col != row:
                ok = g.min_degree > pmin
                if not ok:
                    raise StructureError(
                        f"entry ({row + 1},{col + 1}) has a term of degree {g.min_degree} <= {pmin}")
                ok_row.append(True)
                continue
            ok_row.append(True)
            if g.min_degree != pmin:
                raise StructureError(f"diagonal entry {row + 1} has t-order {g.min_degree}, expected {pmin}")
            piece = _leading_piece(g.leading)
            expect = "PAIR" if (row == 0 and report.status is Status.REPEATED) else "SINGLE"
            if piece.kind != expect:
                raise StructureError(f"diagonal entry {row + 1}: leading piece is {piece.kind}, expected {expect}")
            if piece.kind == "PAIR" and (not piece.v or evaluate(psi, piece.v) != 0):
                raise StructureError("repeated slot: leading pair does not differ by a kernel element")
            leading.append(piece)
            status.append(leading_unit_test(g.leading, no_zero_divisors, psi))
        offdiag.append(tuple(ok_row))

    certificate = report.status is Status.REPEATED and status[0] is UnitStatus.NONUNIT
    assumptions = ()
    if certificate:
        assumptions = ("QG has no non-trivial zero-divisors",
                       "the kernel element v of the leading pair is non-trivial in G")
    return StructureReport(
        tuple(i + 1 for i in order), tuple(report.matching[i] for i in order), tuple(minima),
        tuple(offdiag), tuple(leading), tuple(status), certificate, assumptions)


def fox_matrix(p: Presentation, phi: Character | None = None) -> dict:
    """JSON dump of all Fox derivatives, with degrees when ``phi`` is given."""
    return {
        "generators": list(p.names),
        "character": None if phi is None else list(phi.values),
        "entries": [
            {"relator": i + 1, "generator": j,
             "terms": fox_derivative(r, j).to_json(phi)}
            for i, r in enumerate(p.relators) for j in range(1, p.rank + 1)
        ],
    }


def sum_elements(elements: Iterable[GroupRingElement]) -> GroupRingElement:
    total = GroupRingElement()
    for e in elements:
        total = total + e
    return total
