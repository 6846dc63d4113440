"""Coefficient dynamics of repeated induction on the left subtree.

The family ``c0 e + cA A + cg (B@n + C@n + D@n)`` is closed under one
induction step (after substituting ``t0 + t1 + t2 -> 2A + e``): the new
state sits at level n+1 with

    cA' = 2 cg,    cg' = cA cg / (cA + 4 cg),    c0' = 1 - cA' - 3 cg'.

``step`` computes the induced measure exactly and checks it against this
closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import entropy
from .nested import build_matrix, grig_nested, induced_measure, substitute_t_identity, uniform_mu0
from .universal import UNIVERSAL
from .words import EMPTY, MAX_SHIFT, Letter, Word, parse

CSV_HEADER = "level,c0_num,c0_den,cA_num,cA_den,cg_num,cg_den,entropy"


class NotSymmetric(ArithmeticError):
    pass


@dataclass(frozen=True)
class CoeffState:
    c0: Fraction
    cA: Fraction
    cg: Fraction
    level: int = 0

    def __post_init__(self):
        for name in ("c0", "cA", "cg"):
            v = Fraction(getattr(self, name))
            object.__setattr__(self, name, v)
            if not 0 <= v <= 1:
                raise ValueError(f"{name}={v} outside [0, 1]")
        if self.c0 + self.cA + 3 * self.cg != 1:
            raise ValueError("c0 + cA + 3 cg must equal 1")

    @classmethod
    def parse(cls, text: str, level: int = 0) -> "CoeffState":
        c0, cA, cg = (Fraction(p.strip()) for p in text.split(","))
        return cls(c0, cA, cg, level)

    @property
    def degenerate(self) -> bool:
        return self.cA == 0 and self.cg == 0

    def measure(self):
        return uniform_mu0(self.c0, self.cA, self.cg, self.level)

    def masses(self) -> list[Fraction]:
        return [self.c0, self.cA, self.cg, self.cg, self.cg]

    def entropy(self) -> float:
        return entropy(self.masses())

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.c0, self.cA, self.cg)


def closed_form(s: CoeffState) -> CoeffState:
    if s.degenerate:
        return s
    cA = 2 * s.cg
    cg = s.cA * s.cg / (s.cA + 4 * s.cg)
    return CoeffState(1 - cA - 3 * cg, cA, cg, s.level + 1)


def _read_symmetric(mu, level: int) -> CoeffState:
    canon = UNIVERSAL.canon
    e, a = canon.canonical(EMPTY), canon.canonical(parse("a"))
    ks = [canon.canonical(Word((Letter(x, level),))) for x in "bcd"]
    extra = set(mu.atoms) - {e, a, *ks}
    if extra:
        raise NotSymmetric(f"unexpected atoms {sorted(map(str, extra))}")
    kmass = {mu.atoms.get(k, Fraction(0)) for k in ks}
    if len(kmass) != 1:
        raise NotSymmetric(f"unequal masses on B, C, D at level {level}")
    return CoeffState(mu.atoms.get(e, Fraction(0)), mu.atoms.get(a, Fraction(0)), kmass.pop(), level)


def induce(s: CoeffState):
    """The exact induced measure on the left subtree (state 0) of ``s.measure()``."""
    M = substitute_t_identity(build_matrix(s.measure(), grig_nested(s.level)))
    return induced_measure(M, 0, "exact")


def step(s: CoeffState) -> CoeffState:
    if s.degenerate:
        return s
    if s.level + 1 > MAX_SHIFT - 1:
        raise OverflowError("level exceeds the maximum letter shift")
    exact = _read_symmetric(induce(s), s.level + 1)
    expected = closed_form(s)
    if exact != expected:
        raise AssertionError(f"closed form {expected} disagrees with exact induction {exact}")
    return exact


def iterate(s0: CoeffState, n: int, exact: bool = True) -> list[tuple[CoeffState, float]]:
    """States s_0 .. s_n with their entropies (nats)."""
    f = step if exact else closed_form
    out = [(s0, s0.entropy())]
    s = s0
    for _ in range(n):
        s = f(s)
        out.append((s, s.entropy()))
    return out


def slack_terms(s: CoeffState) -> tuple[Fraction, Fraction]:
    """The slack terms of the first two induction steps.

    After one step the e-coefficient is ``c0 + cg + x`` and the K-coefficient
    ``(cA - x)/3``; after two steps the K-coefficient is ``(cA' - y)/3``.
    """
    s1 = closed_form(s)
    s2 = closed_form(s1)
    return s.cA - 3 * s1.cg, s1.cA - 3 * s2.cg


def csv_rows(seq) -> list[str]:
    rows = [CSV_HEADER]
    for s, h in seq:
        rows.append(
            f"{s.level},{s.c0.numerator},{s.c0.denominator},{s.cA.numerator},{s.cA.denominator},"
            f"{s.cg.numerator},{s.cg.denominator},{h:.17g}"
        )
    return rows


@dataclass
class ComparisonRow:
    level: int
    entropy_substituted: float
    entropy_unsubstituted: float | None
    support_substituted: int
    support_unsubstituted: int | None
    mass_substituted: Fraction
    mass_unsubstituted: Fraction | None
    note: str = ""


def honest_comparison(s0: CoeffState, n: int) -> list[ComparisonRow]:
    """Substituted vs unsubstituted induced measures, level by level.

    Without the substitution the induced measure keeps the t-atoms, whose root
    permutation depends on omega; the recursion cannot be applied to it again,
    so the unsubstituted column stops after level 1.
    """
    mu = s0.measure()
    rows = [ComparisonRow(s0.level, entropy(mu), entropy(mu), len(mu), len(mu), mu.mass, mu.mass)]
    s = s0
    for k in range(1, n + 1):
        if k == 1:
            raw = induced_measure(build_matrix(mu, grig_nested(s0.level)), 0, "exact")
            un = (entropy(raw), len(raw), raw.mass, "")
        else:
            un = (None, None, None, "t-atoms have an omega-dependent root permutation")
        s = step(s)
        sub = s.measure()
        rows.append(ComparisonRow(s.level, entropy(sub), un[0], len(sub), un[1], sub.mass, un[2], un[3]))
    return rows
