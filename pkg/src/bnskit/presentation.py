"""Finite presentations: parsing, abelianization and small cancellation."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import rank
from .words import CyclicWord, Word, exponent_sums, format_word, is_cyclically_reduced, resolve_generator


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    rank: int
    relators: tuple[CyclicWord, ...]
    generator_names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.rank < 1:
            raise PresentationError("a presentation needs at least one generator")
        if not self.relators:
            raise PresentationError("a presentation needs at least one relator")
        rels = []
        for i, r in enumerate(self.relators):
            if not r:
                raise PresentationError(f"relator {i + 1} is empty")
            if not is_cyclically_reduced(r):
                raise PresentationError(f"relator {i + 1} ({format_word(r)}) is not cyclically reduced")
            if max(abs(a) for a in r) > self.rank:
                raise PresentationError(f"relator {i + 1} uses a generator beyond x{self.rank}")
            rels.append(r if isinstance(r, CyclicWord) else CyclicWord(r))
        object.__setattr__(self, "relators", tuple(rels))
        if self.generator_names is not None:
            names = tuple(self.generator_names)
            if len(names) != self.rank or len(set(names)) != len(names):
                raise PresentationError("generator names must be distinct, one per generator")
            object.__setattr__(self, "generator_names", names)

    @property
    def n_relators(self) -> int:
        return len(self.relators)

    @property
    def deficiency(self) -> int:
        return self.rank - self.n_relators

    @property
    def names(self) -> tuple[str, ...]:
        return self.generator_names or tuple(f"x{i}" for i in range(1, self.rank + 1))

    def require_deficiency_one(self) -> None:
        if self.deficiency != 1:
            raise PresentationError(
                f"deficiency 1 required, got {self.rank} generators and {self.n_relators} relators")

    def format(self) -> str:
        names = self.names
        rels = ", ".join(format_word(r, names) for r in self.relators)
        return f"<{','.join(names)} | {rels}>"

    def to_json(self) -> dict:
        return {"generators": list(self.names), "relators": [list(r) for r in self.relators]}

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        gens = data["generators"]
        names = None if list(gens) == [f"x{i}" for i in range(1, len(gens) + 1)] else gens
        try:
            rels = tuple(CyclicWord(r) for r in data["relators"])
        except ValueError as exc:
            raise PresentationError(str(exc)) from None
        return cls(len(gens), rels, names)

    def __str__(self) -> str:
        return self.format()


# --- parser ----------------------------------------------------------------

_TOKENS = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>[+-]?\d+)|(?P<sym>[\[\]\(\),^|<>]))")


def _tokenize(text: str) -> list[str]:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m or m.end() == pos:
            raise PresentationError(f"syntax error near {text[pos:pos + 10]!r}")
        out.append(m.group(m.lastgroup))
        pos = m.end()
    return out


class _WordParser:
    """Recursive descent over ``word := factor*``, ``factor := atom ('^' int)?``,
    ``atom := name | '[' word ',' word ']' | '(' word ')'``."""

    def __init__(self, tokens: list[str], names: Sequence[str] | None):
        self.toks = tokens
        self.i = 0
        self.names = names

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise PresentationError(f"syntax error: expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def word(self) -> list[int]:
        letters: list[int] = []
        while self.peek() is not None and (self.peek() in "[(" or self.peek()[0].isalpha() or self.peek()[0] == "_"):
            letters.extend(self.factor())
        return letters

    def factor(self) -> list[int]:
        tok = self.take()
        if tok == "[":
            u = self.word()
            self.take(",")
            v = self.word()
            self.take("]")
            atom = u + v + _inv(u) + _inv(v)
        elif tok == "(":
            atom = self.word()
            self.take(")")
        else:
            try:
                atom = [resolve_generator(tok, self.names)]
            except ValueError as exc:
                raise PresentationError(str(exc)) from None
        if self.peek() == "^":
            self.take()
            e = self.take()
            if not re.fullmatch(r"[+-]?\d+", e):
                raise PresentationError(f"bad exponent {e!r}")
            e = int(e)
            atom = (atom if e >= 0 else _inv(atom)) * abs(e)
        return atom


def _inv(letters: list[int]) -> list[int]:
    return [-a for a in reversed(letters)]


def parse_presentation(text: str) -> Presentation:
    """Parse ``<g1,...,gm | r1, ..., rn>``; ``#`` starts a comment line.

    Relators must already be cyclically reduced; they are rejected, not reduced.

    >>> parse_presentation("<a,b | [a,b]>").relators
    (CyclicWord('x1 x2 x1^-1 x2^-1'),)
    """
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    toks = _tokenize(body)
    if not toks or toks[0] != "<" or toks[-1] != ">" or "|" not in toks:
        raise PresentationError("expected '<generators | relators>'")
    bar = toks.index("|")
    gen_toks = toks[1:bar]
    names = [t for t in gen_toks if t != ","]
    if not names or any(not (t[0].isalpha() or t[0] == "_") for t in names) or gen_toks[1::2] != [","] * (len(names) - 1):
        raise PresentationError("bad generator list")
    if len(set(names)) != len(names):
        raise PresentationError("duplicate generator name")
    p = _WordParser(toks[bar + 1:-1], names)
    raw = []
    while True:
        raw.append(p.word())
        if p.peek() is None:
            break
        p.take(",")
    relators = []
    for i, letters in enumerate(raw):
        if not letters:
            raise PresentationError(f"relator {i + 1} is empty")
        if tuple(Word(letters)) != tuple(letters):
            raise PresentationError(f"relator {i + 1} is not freely reduced")
        if not is_cyclically_reduced(letters):
            raise PresentationError(f"relator {i + 1} is not cyclically reduced")
        relators.append(CyclicWord(letters))
    plain = names == [f"x{i}" for i in range(1, len(names) + 1)]
    return Presentation(len(names), tuple(relators), None if plain else tuple(names))


def load_presentation(path: str) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return Presentation.from_json(json.loads(text))
    return parse_presentation(text)


# --- abelianization ----------------------------------------------------------

def abelianization_matrix(p: Presentation) -> list[list[int]]:
    return [exponent_sums(r, p.rank) for r in p.relators]


def first_betti(p: Presentation) -> int:
    return p.rank - rank(abelianization_matrix(p))


# --- small cancellation --------------------------------------------------------

@dataclass(frozen=True)
class PieceLocation:
    relator: int          # 0-based relator index
    inverted: bool        # occurrence read in the inverse relator
    offset: int           # starting letter of the rotation


@dataclass(frozen=True)
class SmallCancellationReport:
    lam: Fraction
    max_piece_ratio: Fraction
    passes: bool
    piece: Word = field(default_factory=Word)
    locations: tuple[PieceLocation, ...] = ()
    condition: str = "C'"

    def to_json(self) -> dict:
        return {
            "condition": f"{self.condition}({self.lam})",
            "lambda": str(self.lam),
            "max_piece_ratio": str(self.max_piece_ratio),
            "passes": self.passes,
            "piece": list(self.piece),
            "locations": [vars(loc) for loc in self.locations],
        }


def _symmetrized(p: Presentation):
    for i, r in enumerate(p.relators):
        for inverted, w in ((False, tuple(r)), (True, tuple(-a for a in reversed(r)))):
            for k in range(len(w)):
                yield w[k:] + w[:k], PieceLocation(i, inverted, k)


def _lcp(a: tuple, b: tuple) -> int:
    n = min(len(a), len(b))
    k = 0
    while k < n and a[k] == b[k]:
        k += 1
    return k


def small_cancellation_check(p: Presentation, lam: Fraction | int | str = Fraction(1, 6)) -> SmallCancellationReport:
    """Metric C'(lam) check over the symmetrized relator set.

    Every position of every cyclic conjugate of every relator and its inverse
    is a distinct occurrence; a piece is a common prefix of two occurrences.
    After sorting the occurrences lexicographically, the longest piece
    starting at an occurrence is its common prefix with a sorted neighbour.
    """
    lam = Fraction(lam)
    occ = sorted(_symmetrized(p), key=lambda t: t[0])
    best = (Fraction(0), 0, None, None)
    for idx in range(len(occ)):
        w, loc = occ[idx]
        for jdx in (idx - 1, idx + 1):
            if 0 <= jdx < len(occ):
                k = _lcp(w, occ[jdx][0])
                ratio = Fraction(k, len(w))
                if ratio > best[0]:
                    best = (ratio, k, idx, jdx)
    ratio, k, idx, jdx = best
    if idx is None:
        return SmallCancellationReport(lam, Fraction(0), True)
    return SmallCancellationReport(
        lam, ratio, ratio < lam, Word._trusted(occ[idx][0][:k]), (occ[idx][1], occ[jdx][1]))
