"""Nested structure of Gr_2, the matrix embedding, induced measures and simulators.

The wreath recursion of Gr_2 sends ``A -> (e, e, swap)`` and
``B -> (t0, B@1, id)`` (likewise C with t1 and D with t2).  A word ``g``
becomes the 2x2 matrix ``M^g`` with ``M^g[x, x.g] = g|_x``; a measure ``mu``
becomes ``M^mu = sum mu(g) M^g``, the transition matrix of a random walk
with internal degrees of freedom on the section group H.
"""

from __future__ import annotations

import bisect
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import (
    DEFAULT_TOLERANCE,
    GroupMeasure,
    MeasureMatrix,
    augmentation,
    convolution_power,
    entropy,
    neumann_inverse,
)
from .universal import UNIVERSAL, GroupSpec
from .words import EMPTY, K_INDEX, Letter, Word, parse, reduce, word

REPLICAS = 8
MAX_BLOCK = 10**6


class DegenerateBlock(RuntimeError):
    pass


@dataclass(frozen=True)
class NestedStructure:
    """``(G, H, X, phi)`` with X = {0, 1}; phi sends a letter to (sections, permutation)."""

    level: int
    X: tuple[int, ...]
    table: dict = field(hash=False, compare=False)

    def phi(self, l: Letter) -> tuple[tuple[Word, Word], tuple[int, int]]:
        if l in self.table:
            return self.table[l]
        return _phi_letter(l)

    def image(self, g) -> tuple[tuple[Word, ...], tuple[int, ...]]:
        """phi of a word, multiplied out in the wreath product (no prior reduction)."""
        secs = {x: [] for x in self.X}
        pos = {x: x for x in self.X}
        for l in word(g):
            (s0, s1), perm = self.phi(l)
            s = (s0, s1)
            for x in self.X:
                secs[x].extend(s[pos[x]].letters)
                pos[x] = perm[pos[x]]
        return tuple(reduce(Word(tuple(secs[x]))) for x in self.X), tuple(pos[x] for x in self.X)

    def relations(self) -> list[Word]:
        s = self.level
        b, c, d = (Letter(x, s) for x in "bcd")
        a = Letter("a", 0)
        return [Word(r) for r in [(a, a), (b, b), (c, c), (d, d), (b, c, d)]]

    def check(self, spec: GroupSpec = UNIVERSAL) -> bool:
        """Relations map to the identity and the permutation image is transitive on X."""
        for r in self.relations():
            secs, perm = self.image(r)
            if perm != tuple(self.X) or not all(spec.is_trivial(w) for w in secs):
                return False
        orbit = {self.X[0]}
        perms = [self.phi(l)[1] for l in self.table]
        while True:
            new = orbit | {p[x] for p in perms for x in orbit}
            if new == orbit:
                break
            orbit = new
        return orbit == set(self.X)


def _phi_letter(l: Letter):
    if l.base == "a":
        return (EMPTY, EMPTY), (1, 0)
    if l.is_t:
        raise ValueError(f"{l} has an omega-dependent root permutation; it has no image under phi")
    t = Word((Letter("t%d" % K_INDEX[l.base], l.shift),), reduced=True)
    k = Word((Letter(l.base, l.shift + 1),), reduced=True)
    return (t, k), (0, 1)


def grig_nested(level: int = 0) -> NestedStructure:
    table = {Letter("a", 0): _phi_letter(Letter("a", 0))}
    for x in "bcd":
        l = Letter(x, level)
        table[l] = _phi_letter(l)
    return NestedStructure(level, (0, 1), table)


def mg_matrix(g, ns: NestedStructure | None = None, spec: GroupSpec = UNIVERSAL) -> MeasureMatrix:
    ns = ns or grig_nested()
    secs, perm = ns.image(g)
    d = len(ns.X)
    rows = [[GroupMeasure.zero(spec) for _ in range(d)] for _ in range(d)]
    for x in ns.X:
        rows[x][perm[x]] = GroupMeasure.point(secs[x], 1, spec)
    return MeasureMatrix(rows, spec)


def build_matrix(mu: GroupMeasure, ns: NestedStructure | None = None) -> MeasureMatrix:
    ns = ns or grig_nested()
    d = len(ns.X)
    acc: list[list[dict]] = [[{} for _ in range(d)] for _ in range(d)]
    for g, p in mu.atoms.items():
        secs, perm = ns.image(g)
        for x in ns.X:
            cell = acc[x][perm[x]]
            cell[secs[x]] = cell.get(secs[x], Fraction(0)) + p
    return MeasureMatrix([[GroupMeasure(c, mu.spec) for c in r] for r in acc], mu.spec)


def _t_atoms(m: GroupMeasure) -> dict[int, dict[int, Word]]:
    canon = m.spec.canon
    shifts = {l.shift for w in m.atoms for l in w if l.is_t}
    out = {}
    for s in sorted(shifts):
        out[s] = {j: canon.canonical(Word((Letter("t%d" % j, s),))) for j in range(3)}
    return out


def substitute_t_identity(M: MeasureMatrix) -> MeasureMatrix:
    """Replace ``m(t0@s + t1@s + t2@s)`` by ``2m A + m e`` in every entry."""
    spec = M.spec
    A = spec.canonical(parse("a"))
    E = spec.canonical(EMPTY)
    rows = []
    for r in M.rows:
        row = []
        for m in r:
            atoms = dict(m.atoms)
            for s, ts in _t_atoms(m).items():
                masses = [atoms.get(ts[j], Fraction(0)) for j in range(3)]
                if not any(masses):
                    continue
                if len(set(masses)) != 1:
                    raise ValueError(f"unequal masses on t0,t1,t2 at shift {s}: {masses}")
                mm = masses[0]
                for j in range(3):
                    del atoms[ts[j]]
                atoms[A] = atoms.get(A, Fraction(0)) + 2 * mm
                atoms[E] = atoms.get(E, Fraction(0)) + mm
            row.append(GroupMeasure._raw(atoms, spec))
        rows.append(row)
    return MeasureMatrix(rows, spec)


def induced_measure(
    M: MeasureMatrix, x: int, mode: str = "exact", eps=DEFAULT_TOLERANCE, renormalize: bool = False
) -> GroupMeasure:
    """Law of the H-increment between successive visits of the RWIDF to internal state x.

    ``mu^x = M[x,x] + M[x,~x] (I - M[~x,~x])^{-1} M[~x,x]``.
    """
    d = M.d
    rest = [y for y in range(d) if y != x]
    out = M[x, x]
    if rest and any(M[x, y].atoms for y in rest) and any(M[y, x].atoms for y in rest):
        inv = neumann_inverse(M.submatrix(rest), mode, eps, renormalize=renormalize).matrix
        for i, yi in enumerate(rest):
            if not M[x, yi].atoms:
                continue
            for j, yj in enumerate(rest):
                if inv[i, j].atoms and M[yj, x].atoms:
                    out = out + M[x, yi] * inv[i, j] * M[yj, x]
    if mode == "exact" and out.mass != 1:
        raise ArithmeticError(f"exact induced measure has mass {out.mass}")
    return out


# ---------------------------------------------------------------- simulation


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.Philox(seed))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


def _replica_seeds(seed: int, n: int = REPLICAS) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(int(seed)).spawn(n)


def _split(total: int, n: int) -> list[int]:
    return [total // n + (i < total % n) for i in range(n)]


def _map(fn, args, jobs: int):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            return list(ex.map(fn, *zip(*args)))
    return [fn(*a) for a in args]


@dataclass
class WalkPath:
    seed: int
    increments: list[Word]
    positions: list[Word]


def _atoms_and_cdf(mu: GroupMeasure):
    items = mu.sorted_items()
    if mu.mass != 1:
        raise ValueError("walk needs a probability measure")
    cdf = np.cumsum([float(m) for _, m in items])
    cdf[-1] = 1.0
    return [w for w, _ in items], cdf


def walk_simulate(mu: GroupMeasure, steps: int, seed: int = 0) -> WalkPath:
    """One sample path ``g_n = k_1 ... k_n`` of the right random walk."""
    atoms, cdf = _atoms_and_cdf(mu)
    ks = np.searchsorted(cdf, _rng(seed).random(steps), side="right")
    g = EMPTY
    incs, pos = [], [EMPTY]
    for k in ks:
        incs.append(atoms[k])
        g = reduce(g * atoms[k])
        pos.append(g)
    return WalkPath(seed, incs, pos)


def _walk_worker(atom_strs, cdf, steps, paths, seed):
    atoms = [parse(s) for s in atom_strs]
    ks = np.searchsorted(cdf, _rng(seed).random((paths, steps)), side="right")
    counts = Counter()
    memo = {}
    for row in map(tuple, ks):
        s = memo.get(row)
        if s is None:
            w = EMPTY
            for k in row:
                w = w * atoms[k]
            s = memo[row] = str(reduce(w))
        counts[s] += 1
    return counts


def walk_distribution(mu: GroupMeasure, steps: int, paths: int, seed: int = 0, jobs: int = 1) -> dict[Word, int]:
    """Empirical law of g_steps over independent paths (counts keyed by canonical word)."""
    atoms, cdf = _atoms_and_cdf(mu)
    strs = [str(w) for w in atoms]
    args = [(strs, cdf, steps, n, s) for n, s in zip(_split(paths, REPLICAS), _replica_seeds(seed))]
    total = Counter()
    for c in _map(_walk_worker, args, jobs):
        total.update(c)
    canon = mu.spec.canon
    out: dict[Word, int] = {}
    for s in sorted(total):
        k = canon.canonical(parse(s))
        out[k] = out.get(k, 0) + total[s]
    return out


def _chain_tables(M: MeasureMatrix):
    rows = []
    for z in range(M.d):
        outcomes, probs = [], []
        for y in range(M.d):
            for w, m in M[z, y].sorted_items():
                outcomes.append((y, str(w)))
                probs.append(float(m))
        if not outcomes:
            raise ValueError(f"row {z} of the measure matrix is empty")
        cdf = list(np.cumsum(probs) / sum(probs))
        cdf[-1] = 1.0
        rows.append((cdf, outcomes))
    return rows


def _trace_worker(tables, x, nblocks, seed, max_block):
    rng = _rng(seed)
    counts = Counter()
    occupation = [0] * len(tables)
    memo = {}
    z, blen, acc = x, 0, []
    done = steps = 0
    buf, pos = rng.random(1 << 16), 0
    while done < nblocks:
        if pos == len(buf):
            buf, pos = rng.random(1 << 16), 0
        cdf, outcomes = tables[z]
        y, w = outcomes[bisect.bisect_right(cdf, buf[pos])]
        pos += 1
        occupation[z] += 1
        steps += 1
        if w != "e":
            acc.append(w)
        z = y
        blen += 1
        if z == x:
            key = "".join(acc)
            s = memo.get(key)
            if s is None:
                s = memo[key] = str(reduce(parse(key)))
            counts[s] += 1
            done += 1
            acc, blen = [], 0
        elif blen > max_block:
            raise DegenerateBlock(f"no return to state {x} within {max_block} steps")
    return counts, occupation, steps


@dataclass
class TraceResult:
    x: int
    blocks: int
    steps: int
    counts: dict  # canonical Word -> number of return blocks with that increment
    occupation: list[int]  # time steps spent in each internal state

    def frequencies(self) -> dict:
        return {w: Fraction(c, self.blocks) for w, c in self.counts.items()}

    def occupancy(self) -> list[float]:
        return [c / self.steps for c in self.occupation]


def rwidf_simulate_trace(
    M: MeasureMatrix, x: int, blocks: int, seed: int = 0, jobs: int = 1, max_block: int = MAX_BLOCK
) -> TraceResult:
    """Run the chain ``(g, z) -> (g h, y)`` with ``h ~ M[z, y]`` and record increments between returns to x."""
    tables = _chain_tables(M)
    args = [(tables, x, n, s, max_block) for n, s in zip(_split(blocks, REPLICAS), _replica_seeds(seed))]
    total = Counter()
    occ = [0] * M.d
    steps = 0
    for c, o, s in _map(_trace_worker, args, jobs):
        total.update(c)
        occ = [a + b for a, b in zip(occ, o)]
        steps += s
    canon = M.spec.canon
    counts: dict[Word, int] = {}
    for s in sorted(total):
        k = canon.canonical(parse(s))
        counts[k] = counts.get(k, 0) + total[s]
    return TraceResult(x, blocks, steps, counts, occ)


def quotient_occupancy(M: MeasureMatrix, steps: int, seed: int = 0, start: int = 0) -> list[float]:
    """Fraction of time the quotient chain on X (transition matrix = augmentation of M) spends in each state."""
    P = np.array([[float(p) for p in r] for r in augmentation(M).rows])
    cdf = np.cumsum(P, axis=1)
    cdf[:, -1] = 1.0
    u = _rng(seed).random(steps)
    occ = [0] * M.d
    z = start
    for v in u:
        occ[z] += 1
        z = int(np.searchsorted(cdf[z], v, side="right"))
    return [c / steps for c in occ]


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(float(p.get(k, 0)) - float(q.get(k, 0))) for k in keys)


def entropy_report(
    mu: GroupMeasure,
    ns: NestedStructure | None = None,
    x: int = 0,
    kmax: int = 5,
    substitute: bool = True,
) -> list[tuple[int, float, float]]:
    """Rows ``(k, H(mu^k)/k, H((mu^x)^k)/k)`` with exact convolution powers, natural log."""
    ns = ns or grig_nested()
    M = build_matrix(mu, ns)
    if substitute:
        M = substitute_t_identity(M)
    mux = induced_measure(M, x)
    rows = []
    base, ind = GroupMeasure.point(EMPTY, 1, mu.spec), GroupMeasure.point(EMPTY, 1, mu.spec)
    for k in range(1, kmax + 1):
        base = base * mu
        ind = ind * mux
        rows.append((k, entropy(base) / k, entropy(ind) / k))
    return rows


def uniform_mu0(alpha=Fraction(1, 5), beta=Fraction(1, 5), m=Fraction(1, 5), level: int = 0) -> GroupMeasure:
    """``alpha e + beta A + m (B + C + D)`` with B, C, D taken at the given shift."""
    atoms = [(EMPTY, alpha), (parse("a"), beta)]
    atoms += [(Word((Letter(x, level),)), m) for x in "bcd"]
    return GroupMeasure(atoms)


__all__ = [
    "NestedStructure",
    "TraceResult",
    "WalkPath",
    "build_matrix",
    "convolution_power",
    "entropy_report",
    "grig_nested",
    "induced_measure",
    "mg_matrix",
    "quotient_occupancy",
    "rwidf_simulate_trace",
    "substitute_t_identity",
    "total_variation",
    "uniform_mu0",
    "walk_distribution",
    "walk_simulate",
]
