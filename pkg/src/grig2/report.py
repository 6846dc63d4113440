"""CSV renderers for every table the CLI emits."""

from __future__ import annotations

from fractions import Fraction

from . import munchhausen


def _csv(header: str, rows, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append(header)
    lines.extend(",".join(map(str, r)) for r in rows)
    return "\n".join(lines) + "\n"


def _f(x) -> str:
    return "" if x is None else f"{float(x):.12g}"


def growth_csv(table, group: str = "") -> str:
    return _csv(
        "radius,count,ratio",
        [(r, c, _f(q)) for r, c, q in table],
        f"ball sizes |B(n)| of {group} w.r.t. a,b,c,d; ratio = count(n)/count(n-1)",
    )


def folner_csv(rows, group: str = "") -> str:
    return _csv(
        "radius,generator,ratio",
        [(r, g, _f(q)) for r, g, q in rows],
        f"|A g symdiff A| / |A| with A = B(radius) in {group}",
    )


def trace_csv(trace, exact) -> str:
    words = sorted(set(trace.counts) | set(exact.atoms), key=lambda w: w.shortlex_key())
    rows = []
    for w in words:
        c = trace.counts.get(w, 0)
        rows.append((w, c, _f(Fraction(c, trace.blocks)), exact[w]))
    return _csv(
        "word,count,frequency,exact_mass",
        rows,
        f"return-block increments at state {trace.x}: {trace.blocks} blocks, {trace.steps} steps",
    )


def induce_csv(exact, truncated, trace=None) -> str:
    words = set(exact.atoms) | set(truncated.atoms)
    if trace is not None:
        words |= set(trace.counts)
    rows = []
    for w in sorted(words, key=lambda w: w.shortlex_key()):
        row = [w, exact[w], _f(truncated[w])]
        if trace is not None:
            c = trace.counts.get(w, 0)
            row += [c, _f(Fraction(c, trace.blocks))]
        rows.append(row)
    header = "word,exact_mass,truncated_mass"
    if trace is not None:
        header += ",count,frequency"
    return _csv(header, rows, "induced measure: exact (regular representation), truncated series, Monte Carlo trace")


def entropy_csv(rows) -> str:
    return _csv(
        "k,H_base_over_k,H_induced_over_k",
        [(k, f"{a:.15g}", f"{b:.15g}") for k, a, b in rows],
        "entropy of k-fold convolutions divided by k, natural log (nats)",
    )


def iterate_csv(seq) -> str:
    return "# exact coefficients per induction level; entropy in nats\n" + "\n".join(munchhausen.csv_rows(seq)) + "\n"


def walk_csv(counts: dict, paths: int, exact=None) -> str:
    words = set(counts) | (set(exact.atoms) if exact is not None else set())
    rows = []
    for w in sorted(words, key=lambda w: w.shortlex_key()):
        c = counts.get(w, 0)
        rows.append((w, c, _f(Fraction(c, paths)), "" if exact is None else exact[w]))
    return _csv("word,count,frequency,exact_mass", rows, f"empirical position law over {paths} paths")


def comparison_csv(rows) -> str:
    return _csv(
        "level,H_substituted,H_unsubstituted,support_substituted,support_unsubstituted,note",
        [
            (
                r.level,
                f"{r.entropy_substituted:.15g}",
                "" if r.entropy_unsubstituted is None else f"{r.entropy_unsubstituted:.15g}",
                r.support_substituted,
                "" if r.support_unsubstituted is None else r.support_unsubstituted,
                r.note,
            )
            for r in rows
        ],
        "entropy (nats) of induced measures with and without t0+t1+t2 -> 2A+e",
    )
