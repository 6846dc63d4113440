"""Words as automorphisms of the binary tree, parametrized by omega.

Convention: words act on vertices from the right, so the first letter acts
first and ``evaluate(u*v, om, x) == evaluate(v, om, evaluate(u, om, x))``.
This is the convention under which sections multiply as
``(gh)|_x = g|_x h|_{x.g}``, which the matrix embedding needs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .words import EMPTY, K_INDEX, Letter, Word, reduce, word

DEFAULT_NODE_BUDGET = 2_000_000


class InsufficientOmega(LookupError):
    def __init__(self, index: int):
        super().__init__(f"omega is not defined at index {index}")
        self.index = index


class ResourceCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OmegaPrefix:
    """A finite word over {0,1,2}, optionally followed by a period repeated forever.

    Indices are 1-based: ``letter(1)`` is omega_1.
    """

    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] | None = None

    def __post_init__(self):
        for v in self.prefix + (self.period or ()):
            if v not in (0, 1, 2):
                raise ValueError(f"omega letters must be 0, 1 or 2, got {v!r}")
        if self.period is not None and len(self.period) == 0:
            raise ValueError("period must be nonempty")

    @classmethod
    def parse(cls, text: str) -> "OmegaPrefix":
        text = text.strip()
        if "/" in text:
            pre, per = text.split("/", 1)
            if not per:
                raise ValueError(f"empty period in {text!r}")
            return cls(tuple(map(int, pre)), tuple(map(int, per)))
        return cls(tuple(map(int, text)))

    def __str__(self) -> str:
        pre = "".join(map(str, self.prefix))
        if self.period is None:
            return pre
        return pre + "/" + "".join(map(str, self.period))

    @property
    def periodic(self) -> bool:
        return self.period is not None

    def defined(self, i: int) -> bool:
        return i >= 1 and (self.period is not None or i <= len(self.prefix))

    def letter(self, i: int) -> int:
        if i < 1:
            raise IndexError(i)
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        if self.period is None:
            raise InsufficientOmega(i)
        return self.period[(i - 1 - len(self.prefix)) % len(self.period)]

    def head(self, n: int) -> tuple[int, ...]:
        return tuple(self.letter(i) for i in range(1, n + 1))

    def suffix_key(self, base: int):
        """Identifies sigma^base(omega) among the suffixes of this omega."""
        L = len(self.prefix)
        if self.period is None or base < L:
            return base
        return L + (base - L) % len(self.period)


def omega(x) -> OmegaPrefix:
    if isinstance(x, OmegaPrefix):
        return x
    if isinstance(x, str):
        return OmegaPrefix.parse(x)
    return OmegaPrefix(tuple(x))


# ---------------------------------------------------------------- evaluation


def _apply_letter(l: Letter, om: OmegaPrefix, v: list[str]) -> None:
    base, s = l.base, l.shift
    for i in range(len(v)):
        if base == "a":
            v[i] = "1" if v[i] == "0" else "0"
            return
        if base[0] == "t":
            if om.letter(s + 1) != int(base[1]):
                v[i] = "1" if v[i] == "0" else "0"
            return
        if v[i] == "0":
            base = "t%d" % K_INDEX[base]
        else:
            s += 1


def evaluate(w, om, v: str) -> str:
    """Image of the vertex ``v`` (a string over 01) under ``w`` for this omega."""
    w, om = word(w), omega(om)
    if set(v) - {"0", "1"}:
        raise ValueError(f"vertex must be a binary string, got {v!r}")
    out = list(v)
    for l in w:
        _apply_letter(l, om, out)
    return "".join(out)


@lru_cache(maxsize=65536)
def _letter_perm(base: str, shift: int, om: OmegaPrefix, depth: int) -> np.ndarray:
    n = 1 << depth
    idx = np.arange(n, dtype=np.int32)
    if depth == 0:
        return idx
    half = n >> 1
    if base == "a":
        return idx ^ half
    if base[0] == "t":
        return idx ^ half if om.letter(shift + 1) != int(base[1]) else idx
    out = np.empty(n, dtype=np.int32)
    out[:half] = _letter_perm("t%d" % K_INDEX[base], shift, om, depth - 1)
    out[half:] = half + _letter_perm(base, shift + 1, om, depth - 1)
    out.flags.writeable = False
    return out


def leaf_permutation(w, om, depth: int) -> np.ndarray:
    """Action on the 2**depth leaves; leaf ``k`` is the binary expansion of ``k``, MSB first."""
    w, om = word(w), omega(om)
    res = np.arange(1 << depth, dtype=np.int32)
    for l in w:
        res = _letter_perm(l.base, l.shift, om, depth)[res]
    return res


@dataclass(frozen=True)
class Portrait:
    depth: int
    bits: dict = field(default_factory=dict)  # vertex -> swap bit

    def is_trivial(self) -> bool:
        return not any(self.bits.values())


def portrait(w, om, depth: int) -> Portrait:
    w, om = word(w), omega(om)
    bits = {}
    for n in range(depth):
        for t in itertools.product("01", repeat=n):
            v = "".join(t)
            bits[v] = int(evaluate(w, om, v + "0")[-1])
    return Portrait(depth, bits)


# ---------------------------------------------------------------- sections


@dataclass(frozen=True)
class SectionResult:
    left: Word
    right: Word
    root_swap: int


@dataclass(frozen=True)
class NeedsOmega:
    index: int


def sections(w, assign=None) -> SectionResult | NeedsOmega:
    """Wreath recursion ``w -> (w|_0, w|_1, swap)`` under a partial omega assignment.

    ``assign`` maps 1-based omega indices to values; an OmegaPrefix also works.
    """
    w = reduce(w)
    lookup = _lookup(assign)
    secs: list[list[Letter]] = [[], []]
    swap = 0
    for l in w:
        if l.base == "a":
            swap ^= 1
        elif l.is_t:
            v = lookup(l.shift + 1)
            if v is None:
                return NeedsOmega(l.shift + 1)
            if v != int(l.base[1]):
                swap ^= 1
        else:
            t = Letter("t%d" % K_INDEX[l.base], l.shift)
            k = Letter(l.base, l.shift + 1)
            secs[0].append(k if swap else t)
            secs[1].append(t if swap else k)
    left, right = reduce(Word(tuple(secs[0]))), reduce(Word(tuple(secs[1])))
    if __debug__ and all(l.base in "abcd" for l in w):
        ks = {l.shift for l in w if l.is_k}
        if len(ks) <= 1:
            bound = -(-(len(w) + 1) // 2)
            assert len(left) <= bound and len(right) <= bound, (str(w), str(left), str(right))
    return SectionResult(left, right, swap)


def _lookup(assign):
    if assign is None:
        return lambda i: None
    if isinstance(assign, OmegaPrefix):
        return lambda i: assign.letter(i) if assign.defined(i) else None
    return assign.get


def resolve_t(w, lookup) -> Word:
    """Replace each ``t_j@s`` by ``a`` or nothing, using ``lookup(s+1)``."""
    out = []
    for l in word(w):
        if l.is_t:
            if lookup(l.shift + 1) != int(l.base[1]):
                out.append(Letter("a", 0))
        else:
            out.append(l)
    return reduce(Word(tuple(out)))


# ---------------------------------------------------------------- word problem


@dataclass(frozen=True)
class Move:
    """A vertex whose image under the word differs from itself, for some omega."""

    assignment: dict
    vertex: str

    def omega_prefix(self) -> OmegaPrefix:
        n = max(self.assignment, default=0)
        return OmegaPrefix(tuple(self.assignment.get(i, 0) for i in range(1, n + 1)))


def _state_key(w: Word, assign, om: OmegaPrefix | None):
    shifts = [l.shift for l in w if l.base != "a"]
    base = min(shifts, default=0)
    rel = tuple((l.base, l.shift - base if l.base != "a" else 0) for l in w)
    if om is not None:
        return rel, om.suffix_key(base)
    window = tuple(sorted((i - base, v) for i, v in assign.items() if i > base))
    return rel, window


def find_move(w, om=None, budget: int = DEFAULT_NODE_BUDGET) -> Move | None:
    """Search for an (omega, vertex) pair moved by ``w``.

    With ``om`` given, omega is fixed; otherwise every omega index is branched
    over {0,1,2} the first time it is consulted.  States are memoized on the
    shift-normalized word plus the omega data that can still be consulted, so
    the search terminates for periodic omega and for the universal group.
    """
    om = omega(om) if om is not None else None
    stack = [(reduce(w), {}, "")]
    seen = set()
    while stack:
        cur, assign, path = stack.pop()
        if not cur.letters:
            continue
        key = _state_key(cur, assign, om)
        if key in seen:
            continue
        seen.add(key)
        if len(seen) > budget:
            raise ResourceCapExceeded(f"word problem exceeded node budget {budget}")
        needed = sorted({l.shift + 1 for l in cur if l.is_t})
        if om is not None:
            choices = [dict(zip(needed, (om.letter(i) for i in needed)))]
        else:
            free = [i for i in needed if i not in assign]
            choices = [dict(zip(free, vals)) for vals in itertools.product(range(3), repeat=len(free))]
        pushes = []
        for ch in choices:
            a2 = {**assign, **ch} if om is None else assign
            res = resolve_t(cur, ch.get if om is not None else a2.get)
            sec = sections(res)
            if sec.root_swap:
                return Move(a2 if om is None else {i: om.letter(i) for i in needed}, path)
            pushes.append((sec.left, a2, path + "0"))
            pushes.append((sec.right, a2, path + "1"))
        stack.extend(reversed(pushes))
    return None


@lru_cache(maxsize=200_000)
def _trivial_gw(w: Word, om: OmegaPrefix) -> bool:
    return find_move(w, om) is None


def is_trivial_gw(w, om) -> bool:
    """Word problem in G_omega.  Raises InsufficientOmega if omega runs out."""
    return _trivial_gw(reduce(w), omega(om))


def generator_word(base: str, shift: int = 0) -> Word:
    return Word((Letter(base, shift),), reduced=True)


__all__ = [
    "EMPTY",
    "InsufficientOmega",
    "Move",
    "NeedsOmega",
    "OmegaPrefix",
    "Portrait",
    "ResourceCapExceeded",
    "SectionResult",
    "evaluate",
    "find_move",
    "is_trivial_gw",
    "leaf_permutation",
    "omega",
    "portrait",
    "resolve_t",
    "sections",
]
