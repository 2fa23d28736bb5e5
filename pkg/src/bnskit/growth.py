"""Growth of conjugacy classes under iteration of a free group automorphism."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Sequence

from .words import Word, conjugacy_length, cyclic_reduce, parse_word

DEFAULT_LENGTH_CAP = 200_000


class GrowthError(ValueError):
    pass


@dataclass(frozen=True)
class AutomorphismSpec:
    rank: int
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise GrowthError(f"need {self.rank} images, got {len(self.images)}")
        if self.inverse_images is not None and len(self.inverse_images) != self.rank:
            raise GrowthError("inverse block must give one image per generator")

    @property
    def verified(self) -> bool:
        """True when the inverse images are checked to compose to the identity both ways."""
        if self.inverse_images is None:
            return False
        inv = AutomorphismSpec(self.rank, self.inverse_images)
        gens = [Word([g]) for g in range(1, self.rank + 1)]
        return all(apply(inv, apply(self, x)) == x and apply(self, apply(inv, x)) == x for x in gens)

    @property
    def status(self) -> str:
        return "VERIFIED_AUTOMORPHISM" if self.verified else "UNVERIFIED_ENDOMORPHISM"

    def inverse(self) -> "AutomorphismSpec":
        if self.inverse_images is None:
            raise GrowthError("no inverse images supplied")
        return AutomorphismSpec(self.rank, self.inverse_images, self.images, self.names)


def apply(phi: AutomorphismSpec, w: Sequence[int]) -> Word:
    letters: list[int] = []
    for a in w:
        g = abs(a)
        if g > phi.rank:
            raise GrowthError(f"letter x{g} outside rank {phi.rank}")
        img = phi.images[g - 1]
        letters.extend(img if a > 0 else img.inverse())
    return Word(letters)


def parse_automorphism(text: str) -> AutomorphismSpec:
    """Parse ``x -> x; y -> y x`` with an optional ``inverse:`` block.

    Generators are named by the left-hand sides, in order.
    """
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    parts = re.split(r"\binverse\s*:", body, maxsplit=1)
    forward = parts[0]
    backward = parts[1] if len(parts) > 1 else ""
    rules = _rules(forward)
    names = tuple(lhs for lhs, _ in rules)
    if len(set(names)) != len(names):
        raise GrowthError("duplicate generator on a left-hand side")
    try:
        images = tuple(parse_word(rhs, names) for _, rhs in rules)
        inverse = None
        if backward.strip():
            inv_rules = dict(_rules(backward))
            if set(inv_rules) != set(names):
                raise GrowthError("inverse block must map exactly the same generators")
            inverse = tuple(parse_word(inv_rules[n], names) for n in names)
    except ValueError as exc:
        raise GrowthError(str(exc)) from None
    return AutomorphismSpec(len(names), images, inverse, names)


def _rules(text: str) -> list[tuple[str, str]]:
    rules = []
    for part in re.split(r"[;\n]", text):
        if not part.strip():
            continue
        if "->" not in part:
            raise GrowthError(f"expected 'generator -> word', got {part.strip()!r}")
        lhs, rhs = (s.strip() for s in part.split("->", 1))
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", lhs):
            raise GrowthError(f"bad generator name {lhs!r}")
        rules.append((lhs, rhs))
    if not rules:
        raise GrowthError("no rules given")
    return rules


@dataclass(frozen=True)
class GrowthSequence:
    lengths: tuple[int, ...]      # cyclic lengths for n = 0, 1, ...
    truncated: bool               # the length cap stopped the iteration early
    requested: int


def growth_sequence(phi: AutomorphismSpec, g: Sequence[int], iterations: int,
                    length_cap: int = DEFAULT_LENGTH_CAP) -> GrowthSequence:
    """Cyclic lengths of ``phi^n(g)`` for ``n = 0..iterations``.

    Each iterate is replaced by its cyclic reduction, which keeps the class.
    """
    if iterations < 1:
        raise GrowthError("need at least one iteration")
    w = cyclic_reduce(Word(g))[0]
    lengths = [len(w)]
    for _ in range(iterations):
        w = cyclic_reduce(apply(phi, w))[0]
        if len(w) > length_cap:
            return GrowthSequence(tuple(lengths), True, iterations)
        lengths.append(len(w))
    return GrowthSequence(tuple(lengths), False, iterations)


class GrowthKind(str, enum.Enum):
    POLYNOMIAL = "POLYNOMIAL"
    EXPONENTIAL = "EXPONENTIAL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class GrowthEstimate:
    kind: GrowthKind
    degree: int | None
    samples: tuple[tuple[int, int], ...]
    diagnostics: dict

    def __str__(self) -> str:
        return f"POLYNOMIAL({self.degree})" if self.kind is GrowthKind.POLYNOMIAL else self.kind.value

    def to_json(self) -> dict:
        return {"classification": str(self), "kind": self.kind.value, "degree": self.degree,
                "samples": [list(s) for s in self.samples], "diagnostics": self.diagnostics}


EXP_RATIO = 1.05        # geometric-mean step ratio over the last quarter
EXP_TREND = 0.9         # last-quarter log-increment / previous-quarter log-increment
DEGREE_TOL = 0.25


def estimate_degree(seq: GrowthSequence | Sequence[int]) -> GrowthEstimate:
    """Classify growth from a length sequence indexed by iteration count.

    Exponential when the last quarter's step ratios have geometric mean at
    least 1.05 and the log-increments are not decaying; otherwise the degree
    is the rounded ``log2(len(2n) / len(n))`` over the tail.
    """
    lengths = list(seq.lengths if isinstance(seq, GrowthSequence) else seq)
    if len(lengths) < 16:
        raise GrowthError(f"need at least 16 untruncated lengths, got {len(lengths)}")
    if min(lengths) <= 0:
        raise GrowthError("lengths must be positive (the trivial class does not grow)")
    samples = tuple(enumerate(lengths))
    logs = [math.log(x) for x in lengths]
    steps = [b - a for a, b in zip(logs, logs[1:])]
    q = max(len(steps) // 4, 2)
    last, prev = steps[-q:], steps[-2 * q:-q]
    geo_ratio = math.exp(sum(last) / len(last))
    trend = (sum(last) / sum(prev)) if sum(prev) > 0 else (math.inf if sum(last) > 0 else 0.0)
    diag = {"tail_geometric_ratio": geo_ratio, "tail_trend": trend}
    if geo_ratio >= EXP_RATIO and trend >= EXP_TREND:
        return GrowthEstimate(GrowthKind.EXPONENTIAL, None, samples, diag)

    big_n = len(lengths) - 1
    ns = range(max(1, big_n // 4), big_n // 2 + 1)
    doubling = [math.log2(lengths[2 * n] / lengths[n]) for n in ns]
    tail = doubling[-max(len(doubling) // 2, 1):]
    est = sum(tail) / len(tail)
    spread = max(tail) - min(tail)
    diag.update({"doubling_exponent": est, "doubling_spread": spread})
    d = round(est)
    if d < 0 or abs(est - d) > DEGREE_TOL or spread > 2 * DEGREE_TOL:
        return GrowthEstimate(GrowthKind.INCONCLUSIVE, None, samples, diag)
    return GrowthEstimate(GrowthKind.POLYNOMIAL, d, samples, diag)


def check_levitt_bound(phi: AutomorphismSpec | int, estimate: GrowthEstimate | int) -> bool:
    """Polynomial degree must not exceed ``rank - 1``."""
    rank = phi if isinstance(phi, int) else phi.rank
    d = estimate if isinstance(estimate, int) else estimate.degree
    if d is None:
        raise GrowthError("the bound applies to polynomial growth only")
    return d <= rank - 1
