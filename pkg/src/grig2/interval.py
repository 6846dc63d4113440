"""Grigorchuk's interval picture of G_omega and its match with the tree model.

Each omega_k becomes a column of the 3-row matrix ``omega-bar``:
``0 -> (T,T,I)``, ``1 -> (T,I,T)``, ``2 -> (I,T,T)``.  A point of the interval
is a finite binary expansion; the k-th dyadic piece is the set of points
``1^(k-1) 0 x``, on which b, c, d apply the k-th symbol of rows U, V, W to x.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .action import OmegaPrefix, evaluate, omega

COLUMNS = {0: ("T", "T", "I"), 1: ("T", "I", "T"), 2: ("I", "T", "T")}
ROW_OF = {"b": 0, "c": 1, "d": 2}


class PieceUndetermined(ValueError):
    pass


class Mismatch(AssertionError):
    pass


@dataclass(frozen=True)
class RowTriple:
    U: tuple[str, ...]
    V: tuple[str, ...]
    W: tuple[str, ...]

    def column(self, k: int) -> tuple[str, str, str]:
        return (self.U[k - 1], self.V[k - 1], self.W[k - 1])

    def row(self, i: int) -> tuple[str, ...]:
        return (self.U, self.V, self.W)[i]


def build_rows(om, length: int) -> RowTriple:
    cols = [COLUMNS[omega(om).letter(k)] for k in range(1, length + 1)]
    return RowTriple(*(tuple(c[i] for c in cols) for i in range(3)))


def _flip(bit: str) -> str:
    return "1" if bit == "0" else "0"


def interval_apply(gen: str, om, point: str) -> str:
    """Image of a binary expansion prefix under an interval generator."""
    if not point:
        return point
    if gen == "a":
        return _flip(point[0]) + point[1:]
    if gen not in ROW_OF:
        raise ValueError(f"unknown generator {gen!r}")
    k = point.find("0") + 1
    if k == 0:
        raise PieceUndetermined(f"{point!r} does not locate a dyadic piece")
    sym = COLUMNS[omega(om).letter(k)][ROW_OF[gen]]
    if sym == "I" or k == len(point):
        return point
    return point[:k] + _flip(point[k]) + point[k + 1 :]


def crosscheck(omegas, depth: int, points=None, relabel: dict[str, str] | None = None) -> dict[str, str]:
    """The relabeling interval generator -> tree generator valid for every omega and point tested.

    Points default to every binary word of length ``depth`` except the
    all-ones word, whose dyadic piece is not visible at that depth.
    With ``relabel`` given, only that relabeling is tried; this matters for
    degenerate omega such as 0^inf, where c and d coincide and the
    relabeling is not determined by the data.
    """
    if isinstance(omegas, (str, OmegaPrefix)):
        omegas = [omegas]
    omegas = [omega(o) for o in omegas]
    if points is None:
        points = ["".join(p) for p in itertools.product("01", repeat=depth)]
    points = [p for p in points if "0" in p]
    rho = {}
    for g in "abcd":
        cands = [relabel[g]] if relabel else [h for h in "abcd" if (g == "a") == (h == "a")]
        cands = [
            h
            for h in cands
            if all(interval_apply(g, om, p) == evaluate(h, om, p) for om in omegas for p in points)
        ]
        if len(cands) != 1:
            raise Mismatch(f"interval generator {g} matches tree generators {cands}")
        rho[g] = cands[0]
    if sorted(rho.values()) != ["a", "b", "c", "d"]:
        raise Mismatch(f"relabeling {rho} is not a bijection")
    return rho
