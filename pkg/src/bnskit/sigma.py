"""BNS membership verdicts for integral characters of deficiency-1 presentations."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .characters import Character, CharacterError, character_lattice
from .fox import StructureReport, structural_verify
from .presentation import Presentation, first_betti
from .sections import ConditionReport, Status, classify


class Membership(str, enum.Enum):
    IN_SIGMA = "IN_SIGMA"
    NOT_IN_SIGMA = "NOT_IN_SIGMA"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SigmaVerdict:
    membership: Membership
    character: Character
    justification: tuple[str, ...]
    condition: ConditionReport | None = field(default=None, repr=False)
    structure: StructureReport | None = field(default=None, repr=False)

    @property
    def decided(self) -> bool:
        return self.membership is not Membership.UNKNOWN

    def to_json(self) -> dict:
        return {
            "membership": self.membership.value,
            "character": list(self.character.values),
            "character_content": self.character.content,
            "justification": list(self.justification),
            "condition": None if self.condition is None else self.condition.to_json(),
            "structure": None if self.structure is None else self.structure.to_json(),
        }


def decide(p: Presentation, phi: Character, no_zero_divisors: bool = False,
           pivot: int | None = None) -> SigmaVerdict:
    """Sufficient-criterion verdict on whether ``phi`` lies in Sigma(G).

    UNIQUE minimum gives IN_SIGMA.  REPEATED minimum gives NOT_IN_SIGMA only
    when the Fox-matrix leading structure certifies a non-unit and the
    no-zero-divisor hypothesis is asserted.  Everything else is UNKNOWN.
    """
    report = classify(p, phi, pivot=pivot)
    why = [f"minimum condition: {report.status.value} (pivot generator {report.pivot})"]
    if report.status is Status.UNIQUE:
        why.append("unique minimum condition implies membership in Sigma")
        return SigmaVerdict(Membership.IN_SIGMA, phi, tuple(why), report)
    if report.status is Status.NEITHER:
        why.append("neither condition holds; the criterion is silent")
        return SigmaVerdict(Membership.UNKNOWN, phi, tuple(why), report)
    structure = structural_verify(p, phi, report, no_zero_divisors)
    why.append(f"repeated minimum at relator {report.repeated_relator}")
    why.append("Fox matrix: off-diagonal leading degrees above row minima, diagonal leading pieces verified")
    if not no_zero_divisors:
        why.append("no-zero-divisor hypothesis not asserted; non-unit leading pair not certified")
        return SigmaVerdict(Membership.UNKNOWN, phi, tuple(why), report, structure)
    why.append("leading pair u(a + b v) with phi(v) = 0 is a non-unit in the Novikov ring")
    why.append("restricted Fox matrix not invertible, so first Novikov homology is non-zero")
    why.extend(f"assumption: {a}" for a in structure.assumptions)
    return SigmaVerdict(Membership.NOT_IN_SIGMA, phi, tuple(why), report, structure)


@dataclass(frozen=True)
class SymmetryReport:
    b1: int
    plus_verdict: SigmaVerdict
    minus_verdict: SigmaVerdict
    nonsymmetric: bool
    not_lerf: bool
    not_fibering: bool

    @property
    def decided(self) -> bool:
        return self.plus_verdict.decided and self.minus_verdict.decided

    def to_json(self) -> dict:
        return {
            "b1": self.b1,
            "character": list(self.plus_verdict.character.values),
            "plus": self.plus_verdict.to_json(),
            "minus": self.minus_verdict.to_json(),
            "nonsymmetric": self.nonsymmetric,
            "not_lerf": self.not_lerf,
            "not_fibering": self.not_fibering,
        }


def primitive_character(p: Presentation) -> Character:
    """The primitive character of a presentation with first Betti number 1."""
    b1 = first_betti(p)
    if b1 != 1:
        raise CharacterError(f"b1 = {b1}, a unique primitive character needs b1 = 1")
    (phi,) = character_lattice(p)
    return phi


def symmetry_report(p: Presentation, no_zero_divisors: bool = False) -> SymmetryReport:
    phi = primitive_character(p)
    plus = decide(p, phi, no_zero_divisors)
    minus = decide(p, -phi, no_zero_divisors)
    memberships = {plus.membership, minus.membership}
    nonsymmetric = memberships == {Membership.IN_SIGMA, Membership.NOT_IN_SIGMA}
    # with b1 = 1, one ray in Sigma and the opposite one outside rules out fibering
    return SymmetryReport(1, plus, minus, nonsymmetric, nonsymmetric, nonsymmetric)
