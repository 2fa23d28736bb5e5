"""Free group words.

A letter is a non-zero integer: ``+g`` is the generator ``x_g`` and ``-g`` its
inverse (generators are 1-based).  Words are immutable tuples of letters and
are always freely reduced.
"""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence


def letter(generator_index: int, sign: int = 1) -> int:
    if generator_index < 1:
        raise ValueError(f"generator index must be >= 1, got {generator_index}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return sign * generator_index


class Word(tuple):
    """A freely reduced word in a free group.

    >>> Word([1, 2, -2, 1])
    Word('x1^2')
    >>> Word([1, 2]) * Word([-2, 1])
    Word('x1^2')
    >>> Word([1, 2]).inverse()
    Word('x2^-1 x1^-1')
    """

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()):
        return super().__new__(cls, _reduce(letters))

    @classmethod
    def _trusted(cls, letters: Iterable[int]) -> "Word":
        # Caller guarantees the letters are already freely reduced.
        return tuple.__new__(cls, letters)

    def __mul__(self, other: Sequence[int]) -> "Word":
        return concat(self, other)

    def __rmul__(self, other):
        return NotImplemented

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        c, conj = cyclic_reduce(self)
        if not conj:
            return Word._trusted(tuple(self) * k)
        return concat(concat(conj, Word._trusted(tuple(c) * k)), conj.inverse())

    def __getitem__(self, item):
        if isinstance(item, slice):
            # any contiguous piece of a reduced word is reduced
            return Word._trusted(tuple.__getitem__(self, item))
        return tuple.__getitem__(self, item)

    def __add__(self, other):
        return NotImplemented

    def inverse(self) -> "Word":
        return Word._trusted(-a for a in reversed(self))

    @property
    def rank(self) -> int:
        """Largest generator index occurring (0 for the empty word)."""
        return max((abs(a) for a in self), default=0)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


class CyclicWord(Word):
    """A cyclically reduced word; the marked vertex sits before the first letter."""

    __slots__ = ()

    def __new__(cls, letters: Iterable[int] = ()):
        w = tuple(letters)
        if _reduce(w) != w:
            raise ValueError(f"word {format_word(w)} is not freely reduced")
        if len(w) > 1 and w[0] == -w[-1]:
            raise ValueError(f"word {format_word(w)} is not cyclically reduced")
        return tuple.__new__(cls, w)

    def rotate(self, k: int) -> "CyclicWord":
        k %= max(len(self), 1)
        return tuple.__new__(CyclicWord, tuple(self[k:]) + tuple(self[:k]))

    def __getitem__(self, item):
        if isinstance(item, slice):
            return Word._trusted(tuple.__getitem__(self, item))
        return tuple.__getitem__(self, item)


def is_cyclically_reduced(letters: Sequence[int]) -> bool:
    if _reduce(letters) != tuple(letters):
        return False
    return len(letters) <= 1 or letters[0] != -letters[-1]


def _reduce(letters: Iterable[int]) -> tuple:
    out: list[int] = []
    for a in letters:
        if not a:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def free_reduce(letters: Iterable[int]) -> Word:
    """Freely reduce an arbitrary letter sequence.

    >>> free_reduce([1, -1])
    Word('')
    >>> free_reduce([1, 2, -2, 1])
    Word('x1^2')
    """
    return Word(letters)


def cyclic_reduce(w: Sequence[int]) -> tuple[CyclicWord, Word]:
    """Return ``(c, u)`` with ``w = u c u^-1`` and ``c`` cyclically reduced.

    >>> cyclic_reduce(Word([1, 2, -1]))
    (CyclicWord('x2'), Word('x1'))
    """
    w = tuple(Word(w))
    n = len(w)
    i = 0
    while i < n - 1 - i and w[i] == -w[n - 1 - i]:
        i += 1
    c = tuple.__new__(CyclicWord, w[i:n - i])
    return c, Word._trusted(w[:i])


def invert(w: Sequence[int]) -> Word:
    return Word._trusted(-a for a in reversed(w))


def concat(u: Sequence[int], v: Sequence[int]) -> Word:
    """Reduced product of two reduced words (cancellation only at the seam)."""
    nu, nv = len(u), len(v)
    k = 0
    while k < nu and k < nv and u[nu - 1 - k] == -v[k]:
        k += 1
    return Word._trusted(tuple(u[:nu - k]) + tuple(v[k:]))


def prefix(w: Sequence[int], k: int) -> Word:
    if not 0 <= k <= len(w):
        raise IndexError(f"prefix length {k} out of range for word of length {len(w)}")
    return Word._trusted(tuple(w[:k]))


def conjugacy_length(w: Sequence[int]) -> int:
    """Length of a cyclically reduced conjugate of ``w``."""
    return len(cyclic_reduce(w)[0])


def exponent_sums(w: Iterable[int], rank: int) -> list[int]:
    sums = [0] * rank
    for a in w:
        sums[abs(a) - 1] += 1 if a > 0 else -1
    return sums


# --- text syntax -----------------------------------------------------------

_TOKEN = re.compile(r"^(?P<name>[A-Za-z_][A-Za-z0-9_]*)(?:\^(?P<exp>[+-]?\d+))?$")
_XNAME = re.compile(r"^x(\d+)$")


def resolve_generator(name: str, names: Sequence[str] | None = None) -> int:
    """Map a generator name to its 1-based index.

    Declared names win; ``x<k>`` is always accepted otherwise.
    """
    if names:
        try:
            return list(names).index(name) + 1
        except ValueError:
            pass
    m = _XNAME.match(name)
    if m and int(m.group(1)) >= 1:
        k = int(m.group(1))
        if names and k > len(names):
            raise ValueError(f"undeclared generator {name!r}")
        return k
    raise ValueError(f"undeclared generator {name!r}")


def parse_word(text: str, names: Sequence[str] | None = None, reduce: bool = True) -> Word | tuple:
    """Parse whitespace separated tokens such as ``x1 x2^-1 a^3``.

    With ``reduce=False`` the raw expanded letter tuple is returned.

    >>> parse_word("x1 x2^2 x2^-1")
    Word('x1 x2')
    """
    letters: list[int] = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        g = resolve_generator(m.group("name"), names)
        e = int(m.group("exp") or 1)
        letters.extend([g if e > 0 else -g] * abs(e))
    return Word(letters) if reduce else tuple(letters)


def format_word(w: Sequence[int], names: Sequence[str] | Mapping[int, str] | None = None) -> str:
    """Render a word with run-length exponents, e.g. ``x1^2 x2^-1``."""
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        g = abs(w[i])
        if names is None:
            name = f"x{g}"
        else:
            name = names[g] if isinstance(names, Mapping) else names[g - 1]
        e = (j - i) * (1 if w[i] > 0 else -1)
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return " ".join(parts)
