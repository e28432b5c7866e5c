"""Lower-bound constructions and the simplex inequalities they optimize.

Four generators are provided:

  * BRec: recursive layered construction.  Each level splits the current
    vertex set into V1 and V2, takes every triple with exactly two vertices
    in V1, and recurses into V2; tails of at most 2 vertices are empty.
  * SemiBipartite: a single such layer.
  * Partite3: complete 3-partite (one vertex per part in every edge).
  * K4Blowup: blow-up of the complete 3-graph on 4 vertices.

The recursion value b_rec(n) is the maximum edge count over all split
sequences; the exact DP below also returns the maximizing sequence, with
ties broken toward a larger first part.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import comb
from typing import Union

from .graphs import Hypergraph3, blow_up, from_edges, named_graph

# Correctly rounded to 50 fractional digits.
TWO_SQRT3_MINUS_3 = "0.46410161513775458705489268301174473388561050762076"
LIMIT_BREC_SIXTH = "0.07735026918962576450914878050195745564760175127013"
OPTIMAL_SPLIT_RATIO = "0.63397459621556135323627682924706381652859737309481"

_PRECISION = 60


@dataclass(frozen=True)
class BRec:
    """Recursive construction on n vertices with the given level splits."""

    n: int
    splits: tuple[int, ...]


@dataclass(frozen=True)
class Partite3:
    n1: int
    n2: int
    n3: int


@dataclass(frozen=True)
class K4Blowup:
    s1: int
    s2: int
    s3: int
    s4: int


@dataclass(frozen=True)
class SemiBipartite:
    n1: int
    n2: int


ConstructionSpec = Union[BRec, Partite3, K4Blowup, SemiBipartite]


def _validate_brec(spec: BRec) -> None:
    remaining = spec.n
    for s in spec.splits:
        if s < 1:
            raise ValueError(f"split {s} must be at least 1")
        if s > remaining:
            raise ValueError(f"split {s} exceeds the {remaining} remaining vertices")
        remaining -= s
    if remaining > 2:
        raise ValueError(
            f"{remaining} vertices left unsplit; tails above 2 vertices need a split"
        )


def semi_bipartite_edges(v1: range, v2: range) -> list[tuple[int, int, int]]:
    out = []
    v1_list = list(v1)
    for i, a in enumerate(v1_list):
        for b in v1_list[i + 1 :]:
            for c in v2:
                out.append((a, b, c))
    return out


def build(spec: ConstructionSpec) -> Hypergraph3:
    """Materialize a construction spec as a concrete graph."""
    if isinstance(spec, BRec):
        _validate_brec(spec)
        edges = []
        offset = 0
        for s in spec.splits:
            edges.extend(
                semi_bipartite_edges(
                    range(offset, offset + s), range(offset + s, spec.n)
                )
            )
            offset += s
        return from_edges(spec.n, edges)
    if isinstance(spec, Partite3):
        return blow_up(from_edges(3, [(0, 1, 2)]), [spec.n1, spec.n2, spec.n3])
    if isinstance(spec, K4Blowup):
        return blow_up(named_graph("K4_3"), [spec.s1, spec.s2, spec.s3, spec.s4])
    if isinstance(spec, SemiBipartite):
        return from_edges(
            spec.n1 + spec.n2,
            semi_bipartite_edges(range(spec.n1), range(spec.n1, spec.n1 + spec.n2)),
        )
    raise TypeError(f"unknown construction spec {spec!r}")


def b_rec(n: int) -> tuple[int, tuple[int, ...]]:
    """Maximum edge count over split sequences, and one maximizing sequence.

    Exact DP over all tail sizes; ties go to the larger first part, which
    makes the returned sequence deterministic.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    values = [0] * (n + 1)
    first = [0] * (n + 1)
    for k in range(3, n + 1):
        best = -1
        arg = 0
        for n1 in range(1, k + 1):
            v = n1 * (n1 - 1) // 2 * (k - n1) + values[k - n1]
            if v > best or (v == best and n1 > arg):
                best = v
                arg = n1
        values[k] = best
        first[k] = arg
    splits = []
    k = n
    while k >= 3:
        splits.append(first[k])
        k -= first[k]
    return values[n], tuple(splits)


def optimal_brec(n: int) -> BRec:
    return BRec(n, b_rec(n)[1])


# ---------------------------------------------------------------------------
# Simplex inequalities


@dataclass(frozen=True)
class Fact21Result:
    lhs1: Decimal
    bound1: Decimal
    holds1: bool
    lhs2: Decimal | None
    bound2: Decimal | None
    holds2: bool | None

    @property
    def ok(self) -> bool:
        return self.holds1 and (self.holds2 is not False)


def _to_decimal(x) -> Decimal:
    if isinstance(x, Decimal):
        return +x
    if isinstance(x, Fraction):
        return Decimal(x.numerator) / Decimal(x.denominator)
    if isinstance(x, int):
        return Decimal(x)
    return Decimal(str(x))


def fact21_check(x1, x2) -> Fact21Result:
    """Evaluate both simplex inequalities at (x1, x2) with 60-digit precision.

    Part 1: x1^2 x2 / (2 (1 - x2^3)) <= (2 sqrt(3) - 3) / 6, for x2 < 1.
    Part 2 (only evaluated when x1 in [1/2, 1], as stated):
      x1^2 x2 / 2 + c x2^3 <= c - (x1 - (3 - sqrt(3))/12)^2 / 4,
    with c = (2 sqrt(3) - 3) / 6, written here with the quadratic centered at
    (3 - sqrt(3))/12 exactly as stated.  That center makes part 2 false on
    part of its domain (x1 = 1/2 and x1 = 1 are counterexamples), so callers
    should treat part-2 reports as a diagnostic, not a theorem check.

    Each inequality "holds" when lhs <= bound + 1e-30.
    """
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        a = _to_decimal(x1)
        b = _to_decimal(x2)
        if a < 0 or b < 0 or a + b != 1:
            raise ValueError(f"({x1}, {x2}) is not on the unit simplex")
        if b >= 1:
            raise ValueError("x2 must be below 1")
        margin = Decimal("1e-30")
        c = (2 * Decimal(3).sqrt() - 3) / 6
        lhs1 = a * a * b / (2 * (1 - b**3))
        holds1 = lhs1 <= c + margin
        lhs2 = bound2 = holds2 = None
        if Decimal("0.5") <= a <= 1:
            center = (3 - Decimal(3).sqrt()) / 12
            lhs2 = a * a * b / 2 + c * b**3
            bound2 = c - (a - center) ** 2 / 4
            holds2 = lhs2 <= bound2 + margin
        return Fact21Result(+lhs1, +c, holds1, lhs2, bound2, holds2)


def fact21_grid_max(steps: int = 10000) -> tuple[Decimal, Fraction]:
    """Maximum of the part-1 expression on the grid x1 = k/steps, k = 0..steps.

    Returns (max value, argmax x1).  The x1 = 0 endpoint is the limit 0, so
    the scan starts at k = 1; the computation is inlined rather than calling
    fact21_check per point to keep the full grid fast.
    """
    with localcontext() as ctx:
        ctx.prec = _PRECISION
        best = Decimal(0)
        arg = 0
        for k in range(1, steps + 1):
            x1 = Decimal(k) / steps
            x2 = 1 - x1
            val = x1 * x1 * x2 / (2 * (1 - x2**3))
            if val > best:
                best = val
                arg = k
        return +best, Fraction(arg, steps)


# ---------------------------------------------------------------------------
# Density reports


@dataclass(frozen=True)
class DensityReport:
    kind: str
    n: int
    edges: int
    density: Fraction  # edges / C(n, 3)
    limit: Union[Fraction, str]  # analytic limit for the construction family


def vertex_count(spec: ConstructionSpec) -> int:
    if isinstance(spec, BRec):
        return spec.n
    if isinstance(spec, Partite3):
        return spec.n1 + spec.n2 + spec.n3
    if isinstance(spec, K4Blowup):
        return spec.s1 + spec.s2 + spec.s3 + spec.s4
    if isinstance(spec, SemiBipartite):
        return spec.n1 + spec.n2
    raise TypeError(f"unknown construction spec {spec!r}")


def edge_count(spec: ConstructionSpec) -> int:
    """Closed-form edge count; never materializes the graph."""
    if isinstance(spec, BRec):
        _validate_brec(spec)
        total = 0
        remaining = spec.n
        for s in spec.splits:
            total += comb(s, 2) * (remaining - s)
            remaining -= s
        return total
    if isinstance(spec, Partite3):
        return spec.n1 * spec.n2 * spec.n3
    if isinstance(spec, K4Blowup):
        a, b, c, d = spec.s1, spec.s2, spec.s3, spec.s4
        return a * b * c + a * b * d + a * c * d + b * c * d
    if isinstance(spec, SemiBipartite):
        return comb(spec.n1, 2) * spec.n2
    raise TypeError(f"unknown construction spec {spec!r}")


def density_report(spec: ConstructionSpec) -> DensityReport:
    """Exact edge count, finite density and the analytic limiting density.

    Limits: 2/9 for 3-partite, 3/8 for the 4-class blow-up, 4/9 for a single
    semi-bipartite layer, and the 50-digit decimal for the full recursion
    (all stated for the balanced / optimal shape of each family).  Edge
    counts come from the closed forms, so reports stay cheap at any n.
    """
    n = vertex_count(spec)
    edges = edge_count(spec)
    density = Fraction(edges, comb(n, 3)) if n >= 3 else Fraction(0)
    if isinstance(spec, BRec):
        limit: Union[Fraction, str] = TWO_SQRT3_MINUS_3
        kind = "brec"
    elif isinstance(spec, Partite3):
        limit = Fraction(2, 9)
        kind = "partite3"
    elif isinstance(spec, K4Blowup):
        limit = Fraction(3, 8)
        kind = "k4blowup"
    else:
        limit = Fraction(4, 9)
        kind = "semibipartite"
    return DensityReport(kind=kind, n=n, edges=edges, density=density, limit=limit)
