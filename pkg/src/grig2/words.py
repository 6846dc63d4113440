"""Letters, words and the rewriting system shared by every G_omega.

A letter ``(base, shift)`` stands for the map ``omega -> base`` evaluated at
``sigma^shift(omega)``.  ``a`` never carries a shift.  The ``t0, t1, t2``
letters are the left sections of ``b, c, d``: ``t_j@s`` is the identity when
``omega_{s+1} == j`` and the root flip ``a`` otherwise.

Text format: ``a b c d t0 t1 t2``, with ``@s`` appended for ``s > 0``
(``b@1``, ``t0@3``).  The empty word prints as ``e``.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

MAX_SHIFT = 64

BASES = ("a", "b", "c", "d", "t0", "t1", "t2")
K_LETTERS = ("b", "c", "d")
T_LETTERS = ("t0", "t1", "t2")
# b|_0 = t0, c|_0 = t1, d|_0 = t2
K_INDEX = {"b": 0, "c": 1, "d": 2}
_BASE_ORDER = {b: i for i, b in enumerate(BASES)}

_TOKEN = re.compile(r"(t[012]|[abcd])(?:@(\d+))?")


class WordError(ValueError):
    pass


class ShiftOverflow(WordError):
    pass


class Letter(NamedTuple):
    base: str
    shift: int = 0

    def __str__(self) -> str:
        return self.base if self.shift == 0 else f"{self.base}@{self.shift}"

    @property
    def is_k(self) -> bool:
        return self.base in K_INDEX

    @property
    def is_t(self) -> bool:
        return self.base[0] == "t"

    def sort_key(self) -> tuple[int, int]:
        return (self.shift, _BASE_ORDER[self.base])


def letter(base: str, shift: int = 0) -> Letter:
    if base not in _BASE_ORDER:
        raise WordError(f"unknown letter {base!r}")
    if base == "a" and shift != 0:
        raise WordError("a does not depend on omega and carries no shift")
    if shift < 0:
        raise WordError("negative shift")
    if shift > MAX_SHIFT:
        raise ShiftOverflow(f"shift {shift} exceeds maximum {MAX_SHIFT}")
    return Letter(base, shift)


A = Letter("a", 0)


@dataclass(frozen=True)
class Word:
    """Immutable sequence of letters.  Equality is literal, not group equality."""

    letters: tuple[Letter, ...] = ()
    reduced: bool = field(default=False, compare=False)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __str__(self) -> str:
        return "".join(map(str, self.letters)) or "e"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def max_shift(self) -> int:
        return max((l.shift for l in self.letters), default=0)

    def shortlex_key(self) -> tuple:
        return (len(self.letters), tuple(l.sort_key() for l in self.letters))


EMPTY = Word((), reduced=True)


def parse(text: str) -> Word:
    """Parse the textual word format; ``""``, ``"e"`` and ``"1"`` denote the identity."""
    s = "".join(text.split())
    if s in ("", "e", "1", "ε"):
        return EMPTY
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            raise WordError(f"cannot parse word {text!r} at position {pos}")
        out.append(letter(m.group(1), int(m.group(2) or 0)))
        pos = m.end()
    return Word(tuple(out))


def word(x) -> Word:
    """Coerce a string, letter sequence or Word into a Word."""
    if isinstance(x, Word):
        return x
    if isinstance(x, str):
        return parse(x)
    return Word(tuple(x))


def _combine(x: Letter, y: Letter) -> tuple[Letter, ...] | None:
    """Rewrite the adjacent pair ``xy``; None when no rule applies."""
    if x == y:
        return ()
    if x.shift == y.shift and x.is_k and y.is_k:
        (z,) = set(K_LETTERS) - {x.base, y.base}
        return (Letter(z, x.shift),)
    return None


def reduce(w) -> Word:
    w = word(w)
    if w.reduced:
        return w
    stack: list[Letter] = []
    for l in w.letters:
        stack.append(l)
        while len(stack) >= 2:
            r = _combine(stack[-2], stack[-1])
            if r is None:
                break
            del stack[-2:]
            stack.extend(r)
    return Word(tuple(stack), reduced=True)


def reduce_random_order(w, rng: random.Random) -> Word:
    """Reduce by applying rules at randomly chosen positions (confluence oracle)."""
    ls = list(word(w).letters)
    while True:
        spots = [i for i in range(len(ls) - 1) if _combine(ls[i], ls[i + 1]) is not None]
        if not spots:
            return Word(tuple(ls), reduced=True)
        i = rng.choice(spots)
        ls[i : i + 2] = _combine(ls[i], ls[i + 1])


def is_reduced(w) -> bool:
    ls = word(w).letters
    return all(_combine(x, y) is None for x, y in zip(ls, ls[1:]))


def inverse(w) -> Word:
    # every letter is an involution
    w = word(w)
    return Word(w.letters[::-1], reduced=w.reduced)


def shift_endo(w, by: int = 1) -> Word:
    """Precompose with sigma^by: raise the shift of every non-``a`` letter."""
    w = word(w)
    return Word(
        tuple(l if l.base == "a" else letter(l.base, l.shift + by) for l in w.letters),
        reduced=w.reduced,
    )


GENERATORS = tuple(Word((Letter(b, 0),), reduced=True) for b in ("a", "b", "c", "d"))


def all_words(max_len: int, alphabet: Iterable[str] = ("a", "b", "c", "d")) -> Iterator[Word]:
    """Every (unreduced) word over the alphabet up to the given length, shortlex order."""
    alphabet = [Letter(b) for b in alphabet]
    level = [()]
    for n in range(max_len + 1):
        for ls in level:
            yield Word(ls)
        level = [ls + (x,) for ls in level for x in alphabet]


def random_word(rng: random.Random, length: int, alphabet=("a", "b", "c", "d"), max_shift: int = 0) -> Word:
    out = []
    for _ in range(length):
        b = rng.choice(alphabet)
        s = 0 if b == "a" else rng.randint(0, max_shift)
        out.append(Letter(b, s))
    return Word(tuple(out))
