"""Runs every acceptance criterion and prints one PASS/FAIL line for each."""

from __future__ import annotations

import pytest

from grig2 import acceptance

from .conftest import ACCEPTANCE_LINES

# |B(1)| = 5 cannot hold for omega = 0^inf: there b acts trivially and c = d,
# so the ball of radius 1 is {e, a, c}.  The check is kept and expected to fail.
KNOWN_FAILURES = {8: "|B(1)| = 3 for omega = 0^inf, since b = e and c = d there"}


def _run(crit) -> acceptance.Result:
    res = crit()
    ACCEPTANCE_LINES.append(res.line())
    print(res.line())
    for d in res.details:
        print("    " + d)
    return res


@pytest.mark.parametrize(
    "crit",
    [
        pytest.param(c, marks=pytest.mark.xfail(strict=True, reason=KNOWN_FAILURES[c.number]))
        if c.number in KNOWN_FAILURES
        else c
        for c in acceptance.CRITERIA
    ],
    ids=[f"criterion_{c.number}" for c in acceptance.CRITERIA],
)
def test_criterion(crit):
    res = _run(crit)
    assert res.passed, "\n".join(d for d in res.details if d.startswith("FAIL"))


def test_criterion_8_fails_only_on_degenerate_omega():
    res = acceptance.criterion_8()
    failing = [d for d in res.details if d.startswith("FAIL")]
    assert failing == ["FAIL |B_G[/0](1)| = 3"]
