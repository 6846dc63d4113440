from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from grig2.action import OmegaPrefix, evaluate, leaf_permutation
from grig2.universal import (
    UNIVERSAL,
    GroupSpec,
    ball,
    canonicalizer,
    equal,
    folner_ratio,
    growth_table,
    is_trivial_universal,
    witness_omega,
)
from grig2.words import all_words, parse, reduce

# ball sizes for radius 0..6, frozen from the brute-force oracle below
UNIVERSAL_COUNTS = [1, 5, 11, 23, 41, 77, 131]
GW_COUNTS = {
    "/012": [1, 5, 11, 23, 40, 68, 108],
    "/01": [1, 5, 11, 23, 40, 68, 108],
    "/0": [1, 3, 5, 7, 9, 11, 13],
}


def _oracle_count(radius: int, omegas, depth: int) -> int:
    """Distinct tuples of leaf permutations over ``omegas`` among all words of length <= radius."""
    perms = {g: np.stack([leaf_permutation(g, o, depth) for o in omegas]) for g in "abcd"}
    ident = np.tile(np.arange(1 << depth, dtype=perms["a"].dtype), (len(omegas), 1))
    seen = {ident.tobytes()}
    layer = [ident]
    for _ in range(radius):
        nxt = []
        for r in layer:
            for g in "abcd":
                s = np.take_along_axis(perms[g], r, axis=1)
                k = s.tobytes()
                if k not in seen:
                    seen.add(k)
                    nxt.append(s)
        layer = nxt
    return len(seen)


def test_universal_counts_against_oracle():
    omegas = [OmegaPrefix(p, (0, 1, 2)) for p in itertools.product(range(3), repeat=5)]
    for n in range(7):
        assert _oracle_count(n, omegas, 8) == UNIVERSAL_COUNTS[n]


@pytest.mark.parametrize("om", sorted(GW_COUNTS))
def test_gw_counts_against_oracle(om):
    for n in range(7):
        assert _oracle_count(n, [OmegaPrefix.parse(om)], 12) == GW_COUNTS[om][n]


def test_ball_counts():
    assert ball(UNIVERSAL, 6).counts == UNIVERSAL_COUNTS
    for om, counts in GW_COUNTS.items():
        assert ball(GroupSpec.gw(om), 6).counts == counts


def test_ball_representatives_are_shortlex_minimal_and_distinct():
    rep = ball(UNIVERSAL, 4)
    elems = rep.elements
    assert len(elems) == rep.counts[-1]
    for u, v in itertools.combinations(elems, 2):
        assert not equal(UNIVERSAL, u, v)
    canon = canonicalizer(UNIVERSAL)
    for w in all_words(4):
        c = canon.canonical(w)
        assert c.shortlex_key() <= reduce(w).shortlex_key()


def test_quotient_counts_bounded_by_universal():
    for counts in GW_COUNTS.values():
        assert all(c <= u for c, u in zip(counts, UNIVERSAL_COUNTS))


def test_growth_table_ratios():
    table = growth_table(UNIVERSAL, 3)
    assert table[0] == (0, 1, None)
    assert table[2][2] == Fraction(11, 5)


def test_witness_moves_something():
    rng = random.Random(3)
    for w in all_words(4):
        wit = witness_omega(w)
        assert (wit is None) == is_trivial_universal(w)
        if wit is not None:
            om = OmegaPrefix(wit.prefix, tuple(rng.randrange(3) for _ in range(3)) or (0,))
            assert any(evaluate(w, om, format(k, "06b")) != format(k, "06b") for k in range(64))


def test_universal_relation_fails_in_no_quotient():
    # trivial in Gr2 => trivial in every G_omega
    for w in all_words(4):
        if is_trivial_universal(w):
            for om in ["/0", "/01", "/012", "2/10"]:
                assert GroupSpec.gw(om).is_trivial(w)


def test_folner_ratio_range():
    A = ball(GroupSpec.gw("/012"), 4).elements
    r = folner_ratio(GroupSpec.gw("/012"), A, parse("a"))
    assert 0 <= r <= 2
    assert folner_ratio(UNIVERSAL, [parse("")], parse("a")) == 2


def test_group_spec_parse():
    assert GroupSpec.parse("universal") == UNIVERSAL
    assert GroupSpec.parse("/012").omega == OmegaPrefix.parse("/012")
    with pytest.raises(ValueError):
        ball(UNIVERSAL, 99)


def test_shift_endo_preserves_inequality():
    from grig2.words import shift_endo

    elems = ball(UNIVERSAL, 4).elements
    shifted = [shift_endo(w) for w in elems]
    for i in range(len(elems)):
        for j in range(i):
            assert not equal(UNIVERSAL, shifted[i], shifted[j])


def test_short_portrait_does_not_decide_triviality():
    # b on (012)^inf fixes everything above depth 2 yet is nontrivial
    from grig2.action import portrait

    om = OmegaPrefix.parse("/012")
    assert portrait(parse("b"), om, 2).is_trivial()
    assert not GroupSpec.gw(om).is_trivial(parse("b"))
