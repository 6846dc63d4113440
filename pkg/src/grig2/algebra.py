"""Exact group-algebra arithmetic over Gr_2.

Measures are finitely supported maps from canonical words to positive
Fractions.  Matrices of measures multiply with group-algebra entries.  The
inverse ``(I - M)^{-1}`` is computed exactly through the regular
representation of a finite subgroup, or approximately as a truncated
geometric series.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .universal import UNIVERSAL, GroupSpec
from .words import EMPTY, Word, parse, reduce, word

DEFAULT_TOLERANCE = Fraction(1, 10**12)
MAX_SUPPORT = 200_000


class TooLarge(RuntimeError):
    pass


class NonConvergent(ArithmeticError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class GroupMeasure:
    """Finitely supported positive measure on a group (an element of its real group algebra).

    Keys are canonical representatives, so no two atoms are equal in the group.
    """

    __slots__ = ("atoms", "spec")

    def __init__(self, atoms: Mapping | Iterable = (), spec: GroupSpec = UNIVERSAL):
        self.spec = spec
        canon = spec.canon
        acc: dict[Word, Fraction] = {}
        items = atoms.items() if isinstance(atoms, Mapping) else atoms
        for w, m in items:
            m = _frac(m)
            if m == 0:
                continue
            if m < 0:
                raise ValueError(f"negative mass {m} on {w}")
            k = canon.canonical(word(w))
            acc[k] = acc.get(k, Fraction(0)) + m
        self.atoms = acc

    @classmethod
    def _raw(cls, atoms: dict, spec: GroupSpec) -> "GroupMeasure":
        obj = cls.__new__(cls)
        obj.spec = spec
        obj.atoms = atoms
        return obj

    @classmethod
    def point(cls, w, mass=1, spec: GroupSpec = UNIVERSAL) -> "GroupMeasure":
        return cls({word(w): mass}, spec)

    @classmethod
    def zero(cls, spec: GroupSpec = UNIVERSAL) -> "GroupMeasure":
        return cls._raw({}, spec)

    @property
    def mass(self) -> Fraction:
        return sum(self.atoms.values(), Fraction(0))

    def is_probability(self) -> bool:
        return self.mass == 1

    def is_subprobability(self) -> bool:
        return self.mass <= 1

    def __len__(self) -> int:
        return len(self.atoms)

    def __getitem__(self, w) -> Fraction:
        return self.atoms.get(self.spec.canonical(word(w)), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupMeasure) and self.spec == other.spec and self.atoms == other.atoms

    def __add__(self, other: "GroupMeasure") -> "GroupMeasure":
        acc = dict(self.atoms)
        for w, m in other.atoms.items():
            acc[w] = acc.get(w, Fraction(0)) + m
        return GroupMeasure._raw(acc, self.spec)

    def scale(self, c) -> "GroupMeasure":
        c = _frac(c)
        if c < 0:
            raise ValueError("negative scale")
        if c == 0:
            return GroupMeasure.zero(self.spec)
        return GroupMeasure._raw({w: m * c for w, m in self.atoms.items()}, self.spec)

    def __rmul__(self, c) -> "GroupMeasure":
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, GroupMeasure):
            return convolve(self, other)
        return self.scale(other)

    def sorted_items(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.atoms.items(), key=lambda kv: kv[0].shortlex_key())

    def __repr__(self) -> str:
        body = " + ".join(f"{m}*{w}" for w, m in self.sorted_items()) or "0"
        return f"GroupMeasure({body})"

    def to_json(self) -> str:
        return json.dumps(
            [
                {"word": str(w), "mass_numerator": m.numerator, "mass_denominator": m.denominator}
                for w, m in self.sorted_items()
            ]
        )

    @classmethod
    def from_json(cls, text: str, spec: GroupSpec = UNIVERSAL) -> "GroupMeasure":
        return cls(
            [(parse(d["word"]), Fraction(d["mass_numerator"], d["mass_denominator"])) for d in json.loads(text)],
            spec,
        )


def convolve(mu: GroupMeasure, nu: GroupMeasure) -> GroupMeasure:
    """Group-algebra product; for probability measures, the law of the product of independent steps."""
    if mu.spec != nu.spec:
        raise ValueError("measures live on different groups")
    canon = mu.spec.canon
    acc: dict[Word, Fraction] = {}
    for g, p in mu.atoms.items():
        for h, q in nu.atoms.items():
            k = canon.canonical(g * h)
            acc[k] = acc.get(k, Fraction(0)) + p * q
        if len(acc) > MAX_SUPPORT:
            raise TooLarge(f"convolution support exceeds {MAX_SUPPORT}")
    return GroupMeasure._raw(acc, mu.spec)


def convolution_power(mu: GroupMeasure, n: int) -> GroupMeasure:
    out = GroupMeasure.point(EMPTY, 1, mu.spec)
    for _ in range(n):
        out = convolve(out, mu)
    return out


def entropy(mu: GroupMeasure | Iterable, check: bool = True) -> float:
    """Shannon entropy in nats."""
    masses = list(mu.atoms.values()) if isinstance(mu, GroupMeasure) else [_frac(p) for p in mu]
    if check and sum(masses, Fraction(0)) != 1:
        raise ValueError("entropy needs a probability measure")
    return -math.fsum(float(p) * math.log(p) for p in masses if p > 0)


# ---------------------------------------------------------------- matrices


@dataclass(frozen=True)
class StochasticMatrix:
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def d(self) -> int:
        return len(self.rows)

    def row_sums(self) -> list[Fraction]:
        return [sum(r, Fraction(0)) for r in self.rows]

    def is_stochastic(self) -> bool:
        return all(x >= 0 for r in self.rows for x in r) and all(s == 1 for s in self.row_sums())

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]

    def __matmul__(self, other: "StochasticMatrix") -> "StochasticMatrix":
        return StochasticMatrix(tuple(tuple(x) for x in _matmul_q(self.tolist(), other.tolist())))

    def stationary(self) -> list[Fraction]:
        """Stationary row vector (exact), for an irreducible chain."""
        n = self.d
        A = [[(Fraction(int(i == j)) - self.rows[j][i]) for j in range(n)] for i in range(n)]
        A[-1] = [Fraction(1)] * n
        inv = bareiss_inverse(A)
        return [inv[i][-1] for i in range(n)]


class MeasureMatrix:
    """Square matrix whose entries are group-algebra elements."""

    def __init__(self, rows, spec: GroupSpec = UNIVERSAL):
        self.rows = tuple(tuple(rows[i]) for i in range(len(rows)))
        self.spec = spec
        for r in self.rows:
            if len(r) != len(self.rows):
                raise ValueError("measure matrix must be square")

    @property
    def d(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> GroupMeasure:
        i, j = ij
        return self.rows[i][j]

    @classmethod
    def identity(cls, d: int, spec: GroupSpec = UNIVERSAL) -> "MeasureMatrix":
        return cls(
            [[GroupMeasure.point(EMPTY, 1, spec) if i == j else GroupMeasure.zero(spec) for j in range(d)] for i in range(d)],
            spec,
        )

    def __matmul__(self, other: "MeasureMatrix") -> "MeasureMatrix":
        d = self.d
        out = []
        for i in range(d):
            row = []
            for k in range(d):
                acc = GroupMeasure.zero(self.spec)
                for j in range(d):
                    if self.rows[i][j].atoms and other.rows[j][k].atoms:
                        acc = acc + convolve(self.rows[i][j], other.rows[j][k])
                row.append(acc)
            out.append(row)
        return MeasureMatrix(out, self.spec)

    def __add__(self, other: "MeasureMatrix") -> "MeasureMatrix":
        return MeasureMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.spec
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, MeasureMatrix) and self.rows == other.rows

    def submatrix(self, idx: list[int]) -> "MeasureMatrix":
        return MeasureMatrix([[self.rows[i][j] for j in idx] for i in idx], self.spec)

    def row_masses(self) -> list[Fraction]:
        return [sum((m.mass for m in r), Fraction(0)) for r in self.rows]

    def __repr__(self) -> str:
        return "MeasureMatrix(" + "; ".join(", ".join(map(repr, r)) for r in self.rows) + ")"


def augmentation(M: MeasureMatrix) -> StochasticMatrix:
    """Send every group element to 1: entries become total masses."""
    return StochasticMatrix(tuple(tuple(m.mass for m in r) for r in M.rows))


# ---------------------------------------------------------------- exact linear algebra


def _matmul_q(A, B):
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), Fraction(0)) for j in range(len(B[0]))] for i in range(len(A))]


def bareiss_inverse(rows) -> list[list[Fraction]]:
    """Exact inverse by fraction-free Gauss-Jordan elimination on integers."""
    n = len(rows)
    den = 1
    for r in rows:
        for x in r:
            den = math.lcm(den, _frac(x).denominator)
    A = [[int(_frac(x) * den) for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if A[r][k] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        A[k], A[piv] = A[piv], A[k]
        rk = A[k]
        akk = rk[k]
        for i in range(n):
            if i == k:
                continue
            ri = A[i]
            aik = ri[k]
            for j in range(2 * n):
                q, r = divmod(akk * ri[j] - aik * rk[j], prev)
                assert r == 0, "fraction-free step lost exactness"
                ri[j] = q
        prev = akk
    return [[Fraction(A[i][n + j] * den, A[i][i]) for j in range(n)] for i in range(n)]


@dataclass
class FiniteGroup:
    elements: list[Word]  # elements[0] is the identity
    table: list[list[int]]  # table[i][j] = index of elements[i] * elements[j]

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, w) -> int:
        return self.elements.index(w)


def finite_closure(S, spec: GroupSpec = UNIVERSAL, cap: int = 64) -> FiniteGroup:
    """Subgroup generated by S with its multiplication table; TooLarge past ``cap`` elements."""
    canon = spec.canon
    gens = [canon.canonical(word(s)) for s in S]
    e = canon.canonical(EMPTY)
    elements = [e]
    index = {e: 0}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = canon.canonical(x * s)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    nxt.append(y)
                    if len(elements) > cap:
                        raise TooLarge(f"subgroup has more than {cap} elements")
        frontier = nxt
    table = [[index[canon.canonical(x * y)] for y in elements] for x in elements]
    return FiniteGroup(elements, table)


@dataclass
class NeumannResult:
    matrix: MeasureMatrix
    defect: Fraction  # max row mass missing from the truncated series (0 in exact mode)
    terms: int | None = None
    group_order: int | None = None


def spectral_radius(P: StochasticMatrix) -> float:
    if P.d == 0:
        return 0.0
    return float(max(abs(np.linalg.eigvals(np.array([[float(x) for x in r] for r in P.rows])))))


def is_convergent(P: StochasticMatrix) -> bool:
    """Exact test of spectral radius < 1 for a nonnegative matrix: I - P has a nonnegative inverse."""
    d = P.d
    try:
        R = bareiss_inverse([[Fraction(int(i == j)) - P.rows[i][j] for j in range(d)] for i in range(d)])
    except ZeroDivisionError:
        return False
    return all(x >= 0 for r in R for x in r)


def neumann_inverse(
    Msub: MeasureMatrix,
    mode: str = "exact",
    eps=DEFAULT_TOLERANCE,
    cap: int = 64,
    renormalize: bool = False,
) -> NeumannResult:
    """``(I - Msub)^{-1} = I + Msub + Msub^2 + ...`` in the group algebra.

    ``mode="exact"`` needs the atoms of Msub to generate a finite subgroup of
    order at most ``cap`` and inverts its regular representation exactly.
    ``mode="truncated"`` sums the series until the remaining mass is below ``eps``.
    """
    P = augmentation(Msub)
    if not is_convergent(P):
        raise NonConvergent("augmentation has spectral radius >= 1")
    if mode == "exact":
        return _neumann_exact(Msub, cap)
    if mode == "truncated":
        return _neumann_truncated(Msub, P, _frac(eps), renormalize)
    raise ValueError(f"unknown mode {mode!r}")


def _neumann_exact(Msub: MeasureMatrix, cap: int) -> NeumannResult:
    spec, d = Msub.spec, Msub.d
    support = sorted({w for r in Msub.rows for m in r for w in m.atoms}, key=Word.shortlex_key)
    G = finite_closure(support, spec, cap)
    k = G.order
    idx = {w: i for i, w in enumerate(G.elements)}
    N = [[Fraction(int(i == j)) for j in range(d * k)] for i in range(d * k)]
    for bi in range(d):
        for bj in range(d):
            for g, c in Msub.rows[bi][bj].atoms.items():
                gi = idx[g]
                for h in range(k):
                    N[bi * k + G.table[gi][h]][bj * k + h] -= c
    inv = bareiss_inverse(N)
    rows = []
    for bi in range(d):
        row = []
        for bj in range(d):
            atoms = {}
            for g in range(k):
                c = inv[bi * k + g][bj * k]
                if c < 0:
                    raise ArithmeticError("negative coefficient in a Neumann series")
                if c:
                    atoms[G.elements[g]] = c
            row.append(GroupMeasure._raw(atoms, spec))
        rows.append(row)
    return NeumannResult(MeasureMatrix(rows, spec), Fraction(0), None, k)


def _neumann_truncated(Msub: MeasureMatrix, P: StochasticMatrix, eps: Fraction, renormalize: bool) -> NeumannResult:
    d = Msub.d
    I = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    R = bareiss_inverse([[I[i][j] - P.rows[i][j] for j in range(d)] for i in range(d)])
    Pt = I
    total = MeasureMatrix.identity(d, Msub.spec)
    term = MeasureMatrix.identity(d, Msub.spec)
    T = 0
    while True:
        tail = max(sum(r) for r in _matmul_q(Pt, R))
        if tail < eps:
            break
        if T > 0:
            total = total + term
        term = term @ Msub
        Pt = _matmul_q(Pt, P.tolist())
        T += 1
        if T > 100_000:
            raise NonConvergent("series did not reach tolerance")
    # total holds I + Msub + ... + Msub^(T-1); the tail is P^T (I-P)^{-1}
    if T == 0:
        total = MeasureMatrix([[GroupMeasure.zero(Msub.spec)] * d for _ in range(d)], Msub.spec)
    defect = tail
    if renormalize:
        target = [sum(r) for r in R]
        have = total.row_masses()
        total = MeasureMatrix(
            [[m.scale(target[i] / have[i]) if have[i] else m for m in r] for i, r in enumerate(total.rows)],
            Msub.spec,
        )
        defect = Fraction(0)
    return NeumannResult(total, defect, T, None)
