"""Bipartition diagnostics: bad and missing edges, max-cut search, bounds.

For a partition V1 and V2 of the vertex set, edges are classified by how
many of their vertices fall in V1: exactly 2 is a cross edge, 1 or 3 is a
bad edge, 0 is an inner edge of V2.  Missing edges are the absent triples
with exactly 2 vertices in V1.  Two exact identities follow directly and
are enforced throughout:

    |H| = cross_present + |B| + inner2
    cross_present + |M| = C(|V1|, 2) * |V2|
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from decimal import Decimal, localcontext, ROUND_FLOOR
from fractions import Fraction
from math import comb
from typing import Sequence

from .graphs import Hypergraph3, Triple


@dataclass(frozen=True)
class PartitionStats:
    v1: frozenset[int]
    v2: frozenset[int]
    bad: tuple[Triple, ...]
    missing: tuple[Triple, ...]
    cross_present: int
    inner2: int


def _check_partition(h: Hypergraph3, v1, v2) -> tuple[frozenset[int], frozenset[int]]:
    s1, s2 = frozenset(v1), frozenset(v2)
    if s1 & s2:
        raise ValueError(f"parts overlap on {sorted(s1 & s2)}")
    if s1 | s2 != frozenset(range(h.n)):
        raise ValueError("parts do not cover the vertex set")
    return s1, s2


def bad_missing(h: Hypergraph3, v1, v2) -> PartitionStats:
    """Classify all edges and absent cross triples for the given partition."""
    s1, s2 = _check_partition(h, v1, v2)
    bad = []
    cross = 0
    inner2 = 0
    for e in h.edges:
        k = (e[0] in s1) + (e[1] in s1) + (e[2] in s1)
        if k == 2:
            cross += 1
        elif k == 0:
            inner2 += 1
        else:
            bad.append(e)
    missing = []
    ordered1 = sorted(s1)
    edge_set = h.edge_set
    for i, a in enumerate(ordered1):
        for b in ordered1[i + 1 :]:
            for c in sorted(s2):
                t = tuple(sorted((a, b, c)))
                if t not in edge_set:
                    missing.append(t)
    return PartitionStats(
        v1=s1,
        v2=s2,
        bad=tuple(bad),
        missing=tuple(sorted(missing)),
        cross_present=cross,
        inner2=inner2,
    )


def cross_edge_count(h: Hypergraph3, s1: frozenset[int] | set[int]) -> int:
    """Number of edges with exactly two vertices in s1."""
    return sum(
        1 for e in h.edges if (e[0] in s1) + (e[1] in s1) + (e[2] in s1) == 2
    )


def _move_deltas(h: Hypergraph3, in_v1: Sequence[bool]) -> list[int]:
    """Change in cross count if each single vertex switched sides."""
    deltas = [0] * h.n
    for e in h.edges:
        k = in_v1[e[0]] + in_v1[e[1]] + in_v1[e[2]]
        gain_now = 1 if k == 2 else 0
        for v in e:
            k_after = k - 1 if in_v1[v] else k + 1
            deltas[v] += (1 if k_after == 2 else 0) - gain_now
    return deltas


def is_locally_maximal(h: Hypergraph3, v1, v2) -> bool:
    """True iff no single-vertex move increases the cross-edge count."""
    s1, _ = _check_partition(h, v1, v2)
    in_v1 = [v in s1 for v in range(h.n)]
    return all(d <= 0 for d in _move_deltas(h, in_v1))


@dataclass(frozen=True)
class MaxcutResult:
    v1: frozenset[int]
    v2: frozenset[int]
    cross_present: int
    mu_lower: Fraction  # 6 * cross / n^3, a certified lower bound on mu(H)


def maxcut_local_search(
    h: Hypergraph3, restarts: int = 32, seed: int = 0
) -> MaxcutResult:
    """Best locally maximal partition over random restarts.

    Steepest single-vertex ascent from each random start; the returned
    partition admits no improving single move, so 6*cross/n^3 is a certified
    lower bound on the max-cut ratio.
    """
    if h.n < 1:
        raise ValueError("need at least one vertex")
    rng = random.Random(seed)
    best_cross = -1
    best_assign: list[bool] = []
    for _ in range(max(1, restarts)):
        in_v1 = [rng.random() < 0.5 for _ in range(h.n)]
        cross = cross_edge_count(h, {v for v in range(h.n) if in_v1[v]})
        while True:
            deltas = _move_deltas(h, in_v1)
            v_best = max(range(h.n), key=lambda v: (deltas[v], -v))
            if deltas[v_best] <= 0:
                break
            in_v1[v_best] = not in_v1[v_best]
            cross += deltas[v_best]
        if cross > best_cross:
            best_cross = cross
            best_assign = list(in_v1)
    s1 = frozenset(v for v in range(h.n) if best_assign[v])
    s2 = frozenset(range(h.n)) - s1
    return MaxcutResult(
        v1=s1,
        v2=s2,
        cross_present=best_cross,
        mu_lower=Fraction(6 * best_cross, h.n**3),
    )


def maxcut_exact(h: Hypergraph3) -> tuple[int, frozenset[int]]:
    """Exhaustive max over all 2^n choices of V1.  Guarded to n <= 14."""
    if h.n > 14:
        raise ValueError("exhaustive max-cut is limited to 14 vertices")
    edge_masks = [(1 << a) | (1 << b) | (1 << c) for a, b, c in h.edges]
    best = -1
    best_mask = 0
    for mask in range(1 << h.n):
        cross = 0
        for em in edge_masks:
            if (mask & em).bit_count() == 2:
                cross += 1
        if cross > best:
            best = cross
            best_mask = mask
    v1 = frozenset(v for v in range(h.n) if best_mask >> v & 1)
    return best, v1


# ---------------------------------------------------------------------------
# Inequalities


def lemma22_gap(h: Hypergraph3, v1, v2, xi) -> tuple[int, Fraction, bool]:
    """Evaluate |H| against C(|V1|,2)|V2| + |H[V2]| + xi n^3 - max(|B|/3999, |M|/4000).

    Returns (lhs, rhs, lhs <= rhs), all exact; no clamping is performed.
    """
    stats = bad_missing(h, v1, v2)
    xi = Fraction(xi)
    lhs = len(h.edges)
    penalty = max(Fraction(len(stats.bad), 3999), Fraction(len(stats.missing), 4000))
    rhs = (
        comb(len(stats.v1), 2) * len(stats.v2)
        + stats.inner2
        + xi * h.n**3
        - penalty
    )
    return lhs, rhs, lhs <= rhs


def prop33_expr(h: Hypergraph3, v1, v2) -> Fraction:
    """|B| - (3999/4000) |M|, exactly."""
    stats = bad_missing(h, v1, v2)
    return Fraction(len(stats.bad)) - Fraction(3999, 4000) * len(stats.missing)


def low_degree_set(h: Hypergraph3, delta, pi_val) -> tuple[tuple[int, ...], Decimal]:
    """Vertices of degree at most (pi/2 - 4 sqrt(delta)) n^2, and that threshold.

    The threshold is evaluated with 50-digit precision, rounding down at
    every step, so the returned set can only err on the small side.
    """
    with localcontext() as ctx:
        ctx.prec = 50
        ctx.rounding = ROUND_FLOOR
        d = _as_decimal(delta)
        if d <= 0:
            raise ValueError("delta must be positive")
        pi = _as_decimal(pi_val)
        threshold = (pi / 2 - 4 * d.sqrt()) * h.n * h.n
    degs = h.degrees
    members = tuple(v for v in range(h.n) if degs[v] <= threshold)
    return members, threshold


def _as_decimal(x) -> Decimal:
    if isinstance(x, Decimal):
        return +x
    if isinstance(x, Fraction):
        return Decimal(x.numerator) / Decimal(x.denominator)
    if isinstance(x, int):
        return Decimal(x)
    return Decimal(str(x))


def degree_gap_check(h: Hypergraph3) -> tuple[int, int, bool]:
    """(max degree - min degree, n - 2, whether the gap is within the bound)."""
    degs = h.degrees if h.n else (0,)
    gap = max(degs) - min(degs)
    bound = h.n - 2
    return gap, bound, gap <= bound
