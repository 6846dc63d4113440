"""The universal group Gr_2 and the groups G_omega as equality oracles.

An element of Gr_2 is trivial exactly when it is trivial in every G_omega;
``find_move`` decides this by branching over omega lazily.  On top of the
word problem sit a canonicalizer (portrait fingerprints plus exact
confirmation), ball enumeration and Folner ratios.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .action import (
    InsufficientOmega,
    OmegaPrefix,
    _letter_perm,
    find_move,
    is_trivial_gw,
    omega,
)
from .words import EMPTY, GENERATORS, Word, inverse, parse, reduce, word

MAX_RADIUS_UNIVERSAL = 8
MAX_RADIUS_GW = 10
FINGERPRINT_DEPTH = 6
PROBE_SEED = 20240601


@lru_cache(maxsize=200_000)
def _trivial_universal(w: Word) -> bool:
    return find_move(w) is None


def is_trivial_universal(w) -> bool:
    """True iff ``w`` acts trivially for every omega, i.e. ``w == 1`` in Gr_2."""
    return _trivial_universal(reduce(w))


def witness_omega(w) -> OmegaPrefix | None:
    """An omega prefix on which ``w`` moves some vertex, or None if ``w`` is trivial in Gr_2.

    Any continuation of the returned prefix is also a witness.
    """
    m = find_move(reduce(w))
    return None if m is None else m.omega_prefix()


@dataclass(frozen=True)
class GroupSpec:
    kind: str = "universal"  # "universal" or "gw"
    omega: OmegaPrefix | None = None

    @classmethod
    def universal(cls) -> "GroupSpec":
        return cls("universal")

    @classmethod
    def gw(cls, om) -> "GroupSpec":
        return cls("gw", omega(om))

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        t = text.strip()
        if t.lower() in ("universal", "gr2", "u"):
            return cls.universal()
        return cls.gw(t)

    def __str__(self) -> str:
        return "universal" if self.kind == "universal" else f"G[{self.omega}]"

    def is_trivial(self, w) -> bool:
        if self.kind == "universal":
            return is_trivial_universal(w)
        return is_trivial_gw(w, self.omega)

    def equal(self, u, v) -> bool:
        return self.is_trivial(word(u) * inverse(word(v)))

    @property
    def canon(self) -> "Canonicalizer":
        return canonicalizer(self)

    def canonical(self, w) -> Word:
        return canonicalizer(self).canonical(w)

    def max_radius(self) -> int:
        return MAX_RADIUS_UNIVERSAL if self.kind == "universal" else MAX_RADIUS_GW


UNIVERSAL = GroupSpec.universal()


def equal(spec: GroupSpec, u, v) -> bool:
    return spec.equal(u, v)


def _probe_omegas() -> list[OmegaPrefix]:
    probes = [
        OmegaPrefix((i, j, k), (0, 1, 2)) for i in range(3) for j in range(3) for k in range(3)
    ]
    rng = random.Random(PROBE_SEED)
    for _ in range(8):
        pre = tuple(rng.randrange(3) for _ in range(rng.randint(3, 8)))
        per = tuple(rng.randrange(3) for _ in range(rng.randint(2, 5)))
        probes.append(OmegaPrefix(pre, per))
    return probes


class Canonicalizer:
    """Maps words to one fixed representative per group element.

    Fingerprints are leaf permutations at a fixed depth over a probe set of
    omegas; different fingerprints prove inequality, equal fingerprints are
    confirmed with the exact word problem.  The first word seen in a class
    becomes its representative.
    """

    def __init__(self, spec: GroupSpec, depth: int = FINGERPRINT_DEPTH, probes=None):
        self.spec = spec
        if probes is None:
            probes = _probe_omegas() if spec.kind == "universal" else [spec.omega]
        self.probes = list(probes)
        self.depth = depth
        if spec.kind == "gw" and not spec.omega.periodic:
            self.depth = min(depth, len(spec.omega.prefix))
        self._letter_cache: dict = {}
        self._buckets: dict[bytes, list[Word]] = {}
        self._cache: dict[Word, Word] = {}
        for s in ("", "a", "b", "c", "d", "t0", "t1", "t2"):
            self.canonical(parse(s))

    def _letter_stack(self, l):
        arr = self._letter_cache.get(l)
        if arr is None:
            arr = np.stack([_letter_perm(l.base, l.shift, om, self.depth) for om in self.probes])
            self._letter_cache[l] = arr
        return arr

    def fingerprint(self, w) -> bytes:
        w = word(w)
        res = np.tile(np.arange(1 << self.depth, dtype=np.int32), (len(self.probes), 1))
        try:
            for l in w:
                res = np.take_along_axis(self._letter_stack(l), res, axis=1)
        except InsufficientOmega:
            return b""
        return res.astype(np.uint16).tobytes()

    def canonical(self, w) -> Word:
        w = reduce(w)
        rep = self._cache.get(w)
        if rep is not None:
            return rep
        bucket = self._buckets.setdefault(self.fingerprint(w), [])
        for r in bucket:
            if self.spec.equal(w, r):
                rep = r
                break
        else:
            rep = w
            bucket.append(w)
        self._cache[w] = rep
        return rep

    def __len__(self) -> int:
        return sum(map(len, self._buckets.values()))


_CANON: dict[GroupSpec, Canonicalizer] = {}


def canonicalizer(spec: GroupSpec) -> Canonicalizer:
    c = _CANON.get(spec)
    if c is None:
        c = _CANON[spec] = Canonicalizer(spec)
    return c


# ---------------------------------------------------------------- balls


@dataclass
class BallReport:
    spec: GroupSpec
    radius: int
    counts: list[int]  # |B(n)| for n = 0..radius
    spheres: list[list[Word]] = field(default_factory=list)  # shortlex-first reps per length

    @property
    def elements(self) -> list[Word]:
        return [w for s in self.spheres for w in s]

    def ratios(self) -> list[Fraction | None]:
        return [None] + [Fraction(b, a) for a, b in zip(self.counts, self.counts[1:])]


def ball(spec: GroupSpec, radius: int) -> BallReport:
    """Breadth-first ball with shortlex-first representatives.

    Spheres are kept in shortlex order and extended by a, b, c, d in order,
    so the first word reaching a class is its shortlex minimum.
    """
    if radius < 0 or radius > spec.max_radius():
        raise ValueError(f"radius {radius} outside 0..{spec.max_radius()} for {spec}")
    canon = Canonicalizer(spec)
    buckets: dict[bytes, list[Word]] = {canon.fingerprint(EMPTY): [EMPTY]}
    spheres = [[EMPTY]]
    counts = [1]
    for _ in range(radius):
        new = []
        for u in spheres[-1]:
            for g in GENERATORS:
                w = u * g
                bucket = buckets.setdefault(canon.fingerprint(w), [])
                if any(spec.equal(w, x) for x in bucket):
                    continue
                bucket.append(w)
                new.append(w)
        spheres.append(new)
        counts.append(counts[-1] + len(new))
    return BallReport(spec, radius, counts, spheres)


def growth_table(spec: GroupSpec, max_radius: int) -> list[tuple[int, int, Fraction | None]]:
    rep = ball(spec, max_radius)
    return list(zip(range(max_radius + 1), rep.counts, rep.ratios()))


def folner_ratio(spec: GroupSpec, A, g) -> Fraction:
    """|Ag symmetric-difference A| / |A|."""
    A = [word(a) for a in A]
    if not A:
        raise ValueError("A must be nonempty")
    canon = Canonicalizer(spec)
    base = {canon.canonical(a) for a in A}
    if len(base) != len(A):
        raise ValueError("elements of A are not pairwise distinct in the group")
    moved = {canon.canonical(a * word(g)) for a in A}
    return Fraction(len(base ^ moved), len(base))


def folner_scan(spec: GroupSpec, max_radius: int) -> list[tuple[int, str, Fraction]]:
    rep = ball(spec, max_radius)
    rows = []
    for r in range(max_radius + 1):
        A = [w for s in rep.spheres[: r + 1] for w in s]
        for g in GENERATORS:
            rows.append((r, str(g), folner_ratio(spec, A, g)))
    return rows
