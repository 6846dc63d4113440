"""The acceptance criteria as runnable checks.

Each ``criterion_N`` returns a :class:`Result`; ``run_all`` drives them for
``grig2 selftest`` and for ``tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import math
import random
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import report
from .action import OmegaPrefix, evaluate, find_move, is_trivial_gw, leaf_permutation
from .algebra import GroupMeasure, augmentation, convolution_power, entropy
from .interval import crosscheck
from .munchhausen import CoeffState, closed_form, iterate, slack_terms
from .nested import (
    build_matrix,
    entropy_report,
    induced_measure,
    mg_matrix,
    quotient_occupancy,
    rwidf_simulate_trace,
    substitute_t_identity,
    total_variation,
    uniform_mu0,
    walk_distribution,
)
from .universal import UNIVERSAL, GroupSpec, ball, is_trivial_universal, witness_omega
from .words import EMPTY, Letter, Word, all_words, parse, reduce

SEED = 0


@dataclass
class Result:
    number: int
    name: str
    passed: bool = True
    details: list[str] = field(default_factory=list)
    seconds: float = 0.0

    def check(self, ok: bool, what: str) -> bool:
        self.details.append(("ok   " if ok else "FAIL ") + what)
        self.passed = self.passed and bool(ok)
        return ok

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.name} ({self.seconds:.1f}s)"


def _timed(number, name, limit=None):
    def deco(fn):
        def run(**kw) -> Result:
            res = Result(number, name)
            t = time.perf_counter()
            try:
                fn(res, **kw)
            except Exception as exc:  # a crash is a failed criterion, not an aborted run
                res.check(False, f"raised {type(exc).__name__}: {exc}")
            res.seconds = time.perf_counter() - t
            if limit is not None:
                res.check(res.seconds < limit, f"runtime {res.seconds:.1f}s < {limit}s")
            return res

        run.__name__ = fn.__name__
        run.number = number
        return run

    return deco


def mu0() -> GroupMeasure:
    return uniform_mu0()


def brute_force_trivial(words, prefix_len: int = 5, depth: int = 6) -> list[bool]:
    """Triviality by direct action on all leaves at ``depth`` for every omega prefix of ``prefix_len``."""
    prefixes = [OmegaPrefix(p) for p in itertools.product(range(3), repeat=prefix_len)]
    perms = {g: np.stack([leaf_permutation(g, o, depth) for o in prefixes]) for g in "abcd"}
    ident = np.arange(1 << depth)
    out = []
    for w in words:
        r = np.tile(ident, (len(prefixes), 1))
        for l in w:
            r = np.take_along_axis(perms[l.base], r, axis=1)
        out.append(bool((r == ident).all()))
    return out


@_timed(1, "relations and the universal word problem", limit=60)
def criterion_1(res: Result):
    for s in ["aa", "bb", "cc", "dd", "bcd", "bcddd"]:
        res.check(is_trivial_universal(parse(s)), f"{s} trivial in Gr2")
    for s in ["abab", "b", "a"]:
        w = parse(s)
        wit = witness_omega(w)
        move = find_move(w)
        ok = wit is not None and not is_trivial_universal(w)
        if ok:
            om = OmegaPrefix(wit.prefix, (0, 1, 2))
            v = move.vertex + "0"
            ok = not is_trivial_gw(w, om) and evaluate(w, om, v) != v
        res.check(ok, f"{s} nontrivial, witness omega prefix {wit!s:>3} moves a vertex")
    words = list(all_words(5))
    brute = brute_force_trivial(words)
    fast = [is_trivial_universal(w) for w in words]
    bad = [str(w) for w, x, y in zip(words, brute, fast) if x != y]
    res.check(not bad, f"{len(words)} words of length <= 5 agree with brute force over 3^5 prefixes ({len(bad)} disagreements)")


@_timed(2, "induced measure at x=0 (exact, truncated, Monte Carlo)", limit=120)
def criterion_2(res: Result, blocks: int = 10**6, seed: int = SEED):
    S = substitute_t_identity(build_matrix(mu0()))
    expected = GroupMeasure(
        {"": Fraction(12, 25), "a": Fraction(2, 5), "b@1": Fraction(1, 25), "c@1": Fraction(1, 25), "d@1": Fraction(1, 25)}
    )
    exact = induced_measure(S, 0, "exact")
    res.check(exact == expected, f"exact: {exact}")
    res.check(exact.mass == 1, "exact total mass is exactly 1")
    trunc = induced_measure(S, 0, "truncated", Fraction(1, 10**12))
    err = max(abs(float(trunc[w] - expected[w])) for w in set(expected.atoms) | set(trunc.atoms))
    res.check(err < 1e-9, f"truncated series (eps 1e-12) within 1e-9 per atom (max err {err:.2e})")
    tr = rwidf_simulate_trace(S, 0, blocks, seed)
    for w, p in expected.sorted_items():
        c = tr.counts.get(w, 0)
        sd = math.sqrt(blocks * float(p) * (1 - float(p)))
        z = (c - blocks * float(p)) / sd
        res.check(abs(z) <= 3, f"Monte Carlo {w}: {c}/{blocks} vs {p}, z={z:+.2f}")
    extra = set(tr.counts) - set(expected.atoms)
    res.check(not extra, "no Monte Carlo increments outside the exact support")


@_timed(3, "induced measure at x=1 (exact)")
def criterion_3(res: Result):
    S = substitute_t_identity(build_matrix(mu0()))
    expected = GroupMeasure(
        {"": Fraction(8, 25), "a": Fraction(2, 25), "b@1": Fraction(1, 5), "c@1": Fraction(1, 5), "d@1": Fraction(1, 5)}
    )
    got = induced_measure(S, 1, "exact")
    res.check(got == expected, f"exact: {got}")
    res.check(got.mass == 1, "total mass is exactly 1")


@_timed(4, "matrix embedding is multiplicative")
def criterion_4(res: Result, pairs: int = 100, seed: int = SEED):
    elems = ball(UNIVERSAL, 3).elements
    rng = random.Random(seed)
    fails = 0
    for _ in range(pairs):
        g, h = rng.choice(elems), rng.choice(elems)
        if mg_matrix(g * h) != mg_matrix(g) @ mg_matrix(h):
            fails += 1
    res.check(fails == 0, f"M^(gh) = M^g M^h on {pairs} random pairs from the radius-3 ball ({fails} failures)")


def random_state(rng: random.Random, den: int = 1000) -> CoeffState:
    while True:
        cA = Fraction(rng.randint(0, den), den)
        cg = Fraction(rng.randint(0, den), 3 * den)
        if cA + 3 * cg <= 1 and (cA or cg):
            return CoeffState(1 - cA - 3 * cg, cA, cg)


@_timed(5, "Munchhausen contraction", limit=60)
def criterion_5(res: Result, starts: int = 1000, seed: int = SEED):
    seq = iterate(CoeffState(Fraction(1, 5), Fraction(1, 5), Fraction(1, 5)), 60)
    res.check(True, "exact induction agreed with the closed form at all 60 steps")
    states = [s for s, _ in seq]
    worst_a = max(states[k + 2].cA / states[k].cA for k in range(59) if states[k].cA)
    worst_g = max(states[k + 2].cg / states[k].cg for k in range(59) if states[k].cg)
    res.check(worst_a <= Fraction(2, 3), f"max cA(k+2)/cA(k) over k<=58 is {float(worst_a):.4f} <= 2/3")
    res.check(worst_g <= Fraction(2, 3), f"max cg(k+2)/cg(k) over k<=58 is {float(worst_g):.4f} <= 2/3")
    first = next((k for k, (_, h) in enumerate(seq) if h < 0.01), None)
    res.check(first is not None, f"H(mu_n) < 0.01 first at n = {first}")
    rng = random.Random(seed)
    neg = 0
    for _ in range(starts):
        x, y = slack_terms(random_state(rng))
        neg += x < 0 or y < 0
    res.check(neg == 0, f"x >= 0 and y >= 0 on {starts} random starts ({neg} violations)")


@_timed(6, "t0+t1+t2 versus 2A+e")
def criterion_6(res: Result):
    m = Fraction(1, 5)
    lhs = GroupMeasure({"t0": m, "t1": m, "t2": m})
    rhs = GroupMeasure({"a": 2 * m, "": m})
    res.check(lhs.mass == rhs.mass, f"augmentations equal ({lhs.mass} = {rhs.mass})")
    for j in range(3):
        # any tail will do: only omega_1 enters the action of these atoms
        spec = GroupSpec.gw(OmegaPrefix((j,), (0, 1, 2)))
        pl = GroupMeasure(lhs.atoms.items(), spec)
        pr = GroupMeasure(rhs.atoms.items(), spec)
        res.check(pl == pr, f"pushforwards agree at omega_1 = {j}: {pl}")
    res.check(lhs != rhs, "as formal elements of the group algebra the two sides differ")
    M = build_matrix(mu0())
    S = substitute_t_identity(M)
    res.check(augmentation(M) == augmentation(S), "substitution preserves the augmentation of M")


@_timed(7, "entropy machinery")
def criterion_7(res: Result, kmax: int = 5, out_dir: str | None = None):
    res.check(entropy(GroupMeasure.point(EMPTY)) == 0, "H(delta_e) = 0")
    u5 = GroupMeasure({"": Fraction(1, 5), "a": Fraction(1, 5), "b": Fraction(1, 5), "c": Fraction(1, 5), "d": Fraction(1, 5)})
    res.check(abs(entropy(u5) - math.log(5)) < 1e-12, "H(uniform on 5 atoms) = log 5 to 1e-12")
    mu = mu0()
    H = {0: 0.0}
    for k in range(1, 7):
        H[k] = entropy(convolution_power(mu, k))
    bad = [(a, b) for a in range(1, 6) for b in range(1, 6) if a + b <= 6 and H[a + b] > H[a] + H[b] + 1e-12]
    res.check(not bad, f"H_(m+n) <= H_m + H_n for m+n <= 6 ({len(bad)} violations)")
    rows = entropy_report(mu, kmax=kmax)
    text = report.entropy_csv(rows)
    path = Path(out_dir or tempfile.mkdtemp(prefix="grig2-")) / "entropy_report.csv"
    path.write_text(text)
    res.check(len(rows) == kmax and path.exists(), f"entropy report with k <= {kmax} written to {path}")


def random_generic_omega(rng: random.Random, head: tuple[int, ...]) -> OmegaPrefix:
    """Random eventually periodic omega starting with ``head`` whose period is not constant."""
    while True:
        per = tuple(rng.randrange(3) for _ in range(rng.randint(2, 5)))
        if len(set(per)) > 1:
            break
    extra = tuple(rng.randrange(3) for _ in range(rng.randint(0, 3)))
    return OmegaPrefix(head + extra, per)


@_timed(8, "growth of G_omega versus Gr2", limit=300)
def criterion_8(res: Result, pairs: int = 20, seed: int = SEED):
    uni = ball(UNIVERSAL, 6).counts
    res.check(uni[1] == 5, f"|B_Gr2(1)| = {uni[1]}")
    for om in ["/0", "/01", "/012"]:
        counts = ball(GroupSpec.gw(om), 6).counts
        res.check(all(c <= u for c, u in zip(counts, uni)), f"|B_G[{om}](n)| <= |B_Gr2(n)| for n <= 6: {counts} vs {uni}")
        res.check(counts[1] == 5, f"|B_G[{om}](1)| = {counts[1]}")
    rng = random.Random(seed)
    diffs = []
    for i in range(pairs):
        n = 1 + i % 6
        head = tuple(rng.randrange(3) for _ in range(n))
        o1, o2 = random_generic_omega(rng, head), random_generic_omega(rng, head)
        c1, c2 = ball(GroupSpec.gw(o1), n).counts[-1], ball(GroupSpec.gw(o2), n).counts[-1]
        if c1 != c2:
            diffs.append(f"{o1} vs {o2} at n={n}: {c1} != {c2}")
    res.check(not diffs, f"{pairs} random omega pairs agreeing to depth n have equal |B(n)| {diffs[:3]}")


@_timed(9, "interval and tree descriptions agree")
def criterion_9(res: Result, samples: int = 1000, seed: int = SEED):
    prefixes = ["".join(p) for p in itertools.product("012", repeat=3)]
    rho = crosscheck(prefixes, 3)
    res.check(rho == {"a": "a", "b": "d", "c": "c", "d": "b"}, f"exhaustive depth-3 relabeling {rho}")
    rng = random.Random(seed)
    for om in ["/0", "/01", "/012"]:
        pts = ["".join(rng.choice("01") for _ in range(12)) for _ in range(samples)]
        res.check(crosscheck([om], 12, pts, rho) == rho, f"same relabeling at depth 12 on {samples} points for {om}")


@_timed(10, "simulation fidelity")
def criterion_10(res: Result, paths: int = 10**5, steps: int = 10**6, seed: int = SEED):
    mu = mu0()
    exact = convolution_power(mu, 2)
    emp = walk_distribution(mu, 2, paths, seed)
    tv = total_variation({w: Fraction(c, paths) for w, c in emp.items()}, exact.atoms)
    res.check(tv < 0.01, f"n=2 walk over {paths} paths: total variation {tv:.4f} < 0.01")
    occ = quotient_occupancy(build_matrix(mu), steps, seed)
    res.check(max(abs(o - 0.5) for o in occ) < 0.01, f"quotient chain occupancy {occ[0]:.4f}, {occ[1]:.4f} within 0.01 of 1/2")
    S = substitute_t_identity(build_matrix(mu))
    exact_ind = induced_measure(S, 0)

    def render():
        return report.trace_csv(rwidf_simulate_trace(S, 0, 20000, seed), exact_ind) + report.walk_csv(
            walk_distribution(mu, 3, 20000, seed), 20000
        )

    res.check(render().encode() == render().encode(), "fixed seed reruns are byte-identical")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(only=None, verbose: bool = True, echo=print) -> list[Result]:
    results = []
    for c in CRITERIA:
        if only and c.number not in only:
            continue
        r = c()
        results.append(r)
        if verbose:
            echo(r.line())
            for d in r.details:
                echo("    " + d)
    return results
