"""Exact induced-subgraph densities and typed flag pair densities.

Everything in this module is computed in rational arithmetic; no floats
anywhere.  The certificate verifier depends on that exactness.

Pair-density convention.  For a type sigma (s vertices, all rooted), flag
size m', and an m-vertex target F, the table entry for flags (F1, F2) is the
probability that a uniformly random ordered injective s-tuple theta of V(F),
together with a uniformly random ordered pair of disjoint (m'-s)-subsets
A1, A2 of V(F) minus theta, satisfies all three of:

  * theta induces sigma exactly (edge positions match the type's labels),
  * the rooted graph on theta + A1 is isomorphic to F1 (roots in theta order),
  * the rooted graph on theta + A2 is isomorphic to F2.

With this convention the following identity holds exactly, for every host H
with at least m vertices and any m >= 2m' - s (it is what the assembler and
the tests rely on): sampling (theta, A1, A2) directly in H gives

  Pr[sigma and F1 and F2 in H] = sum over targets F of entry(F1, F2; F) * p(F, H)

because conditioning on the induced graph of a uniform random m-set through
(theta, A1, A2) is distribution-preserving.  Matrices are symmetric since
the pair (A1, A2) is exchangeable.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, perm
from typing import Sequence

from . import families as families_mod
from .enumeration import (
    Flag,
    FlagType,
    enumerate_flags,
    enumerate_free,
    rooted_canonical_key,
    type_embeddings,
)
from .families import Family
from .graphs import Hypergraph3, decode_key, from_edges, induced_subgraph

CACHE_ENV_VAR = "TURAN3_CACHE_DIR"

SINGLE_EDGE = from_edges(3, [(0, 1, 2)])


def p(f: Hypergraph3, h: Hypergraph3) -> Fraction:
    """Density of |V(f)|-subsets of V(h) spanning an induced copy of f."""
    k = f.n
    if k > h.n:
        raise ValueError(f"pattern on {k} vertices cannot fit in {h.n}")
    want = len(f.edges)
    f_key = f.canon_key
    f_degs = sorted(f.degrees)
    h_edges = h.edge_set
    hits = 0
    for sub in combinations(range(h.n), k):
        count = 0
        for t in combinations(sub, 3):
            if t in h_edges:
                count += 1
        if count != want:
            continue
        g = induced_subgraph(h, sub)
        if sorted(g.degrees) == f_degs and g.canon_key == f_key:
            hits += 1
    return Fraction(hits, comb(h.n, k))


def spanning_profile(h: Hypergraph3, m: int) -> dict[bytes, int]:
    """Counts of m-subsets of V(h) keyed by induced canonical key.

    The values sum to C(n, m); dividing by that gives every p(F, h) at once.
    """
    if m > h.n:
        raise ValueError(f"profile size {m} exceeds {h.n} vertices")
    out: dict[bytes, int] = {}
    for sub in combinations(range(h.n), m):
        key = induced_subgraph(h, sub).canon_key
        out[key] = out.get(key, 0) + 1
    return out


def edge_density(h: Hypergraph3) -> Fraction:
    """|H| / C(n, 3).  Requires n >= 3."""
    if h.n < 3:
        raise ValueError("edge density needs at least 3 vertices")
    return Fraction(len(h.edges), comb(h.n, 3))


# ---------------------------------------------------------------------------
# Pair density tables


@dataclass(frozen=True)
class PairDensityTable:
    ftype: FlagType
    m_prime: int
    m: int
    family_key: str
    flags: tuple[Flag, ...]
    targets: tuple[Hypergraph3, ...]
    matrices: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def matrix_for(self, target_index: int) -> tuple[tuple[Fraction, ...], ...]:
        return self.matrices[target_index]


_memory_cache: dict[tuple, PairDensityTable] = {}


def _family_signature(family: Family) -> tuple:
    return tuple((m.graph.canon_key, m.induced) for m in family)


def pair_density_table(
    ftype: FlagType, m_prime: int, m: int, family: Family = ()
) -> PairDensityTable:
    """Symmetric rational pair-density matrices, one per admissible target."""
    s = ftype.size
    if 2 * m_prime - s > m:
        raise ValueError(
            f"two flags of size {m_prime} over a type of size {s} need "
            f"{2 * m_prime - s} vertices, more than m={m}"
        )
    if m_prime < s:
        raise ValueError("flag size below type size")
    cache_key = (ftype.key, m_prime, m, _family_signature(family))
    hit = _memory_cache.get(cache_key)
    if hit is not None:
        return hit
    table = _load_disk_cache(cache_key, family)
    if table is None:
        table = _build_table(ftype, m_prime, m, family)
        _store_disk_cache(cache_key, table)
    _memory_cache[cache_key] = table
    return table


def _build_table(
    ftype: FlagType, m_prime: int, m: int, family: Family
) -> PairDensityTable:
    members = [fm.graph for fm in family]
    flags_ind = [fm.induced for fm in family]
    flag_list = enumerate_flags(ftype, m_prime, members, flags_ind)
    targets = enumerate_free(m, members, flags_ind)
    flag_index = {f.key: i for i, f in enumerate(flag_list)}
    s = ftype.size
    t = m_prime - s
    sigma = ftype.sigma
    nf = len(flag_list)
    denominator = perm(m, s) * comb(m - s, t) * comb(m - s - t, t)
    matrices = []
    for target in targets:
        counts = [[0] * nf for _ in range(nf)]
        for theta in type_embeddings(target, sigma):
            others = [v for v in range(m) if v not in theta]
            for a1 in combinations(others, t):
                rest = [v for v in others if v not in a1]
                i = _flag_slot(target, theta, a1, flag_index)
                for a2 in combinations(rest, t):
                    j = _flag_slot(target, theta, a2, flag_index)
                    counts[i][j] += 1
        matrices.append(
            tuple(
                tuple(Fraction(counts[i][j], denominator) for j in range(nf))
                for i in range(nf)
            )
        )
    return PairDensityTable(
        ftype=ftype,
        m_prime=m_prime,
        m=m,
        family_key=families_mod.family_key(family),
        flags=tuple(flag_list),
        targets=tuple(targets),
        matrices=tuple(matrices),
    )


def _flag_slot(
    target: Hypergraph3,
    theta: Sequence[int],
    extension: Sequence[int],
    flag_index: dict[bytes, int],
) -> int:
    vertices = list(theta) + sorted(extension)
    sub = induced_subgraph(target, vertices)
    return flag_index[rooted_canonical_key(sub, range(len(theta)))]


# ---------------------------------------------------------------------------
# Text serialization and optional disk cache


def table_to_text(table: PairDensityTable) -> str:
    lines = [
        f"type {table.ftype.sigma.canon_key.hex()}",
        f"m_prime {table.m_prime}",
        f"m {table.m}",
        f"family {table.family_key if table.family_key else 'none'}",
        f"nflags {len(table.flags)}",
        f"ntargets {len(table.targets)}",
    ]
    for fi, mat in enumerate(table.matrices):
        for i in range(len(table.flags)):
            for j in range(i, len(table.flags)):
                q = mat[i][j]
                if q:
                    lines.append(f"{fi} {i} {j} {q.numerator}/{q.denominator}")
    return "\n".join(lines) + "\n"


def table_from_text(text: str, family: Family | None = None) -> PairDensityTable:
    """Rebuild a table from its text form.

    Flags and targets are re-derived from (type, sizes, family), so the type
    graph named in the header must be reachable from the family universe;
    entries are then checked against the declared counts.
    """
    header: dict[str, str] = {}
    entries: list[tuple[int, int, int, Fraction]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] in {"type", "m_prime", "m", "family", "nflags", "ntargets"}:
            header[parts[0]] = " ".join(parts[1:])
        else:
            fi, i, j = int(parts[0]), int(parts[1]), int(parts[2])
            entries.append((fi, i, j, Fraction(parts[3])))
    if family is None:
        family = families_mod.parse_family(header.get("family", ""))
    m_prime = int(header["m_prime"])
    m = int(header["m"])
    members = [fm.graph for fm in family]
    flags_ind = [fm.induced for fm in family]
    sigma = _sigma_from_hex(header["type"])
    ftype = FlagType(sigma)
    flag_list = enumerate_flags(ftype, m_prime, members, flags_ind)
    targets = enumerate_free(m, members, flags_ind)
    if len(flag_list) != int(header["nflags"]) or len(targets) != int(header["ntargets"]):
        raise ValueError("table header counts do not match the derived basis")
    nf = len(flag_list)
    mats = [[[Fraction(0)] * nf for _ in range(nf)] for _ in targets]
    for fi, i, j, q in entries:
        mats[fi][i][j] = q
        mats[fi][j][i] = q
    return PairDensityTable(
        ftype=ftype,
        m_prime=m_prime,
        m=m,
        family_key=families_mod.family_key(family),
        flags=tuple(flag_list),
        targets=tuple(targets),
        matrices=tuple(tuple(tuple(row) for row in mat) for mat in mats),
    )


def _sigma_from_hex(hex_key: str) -> Hypergraph3:
    return decode_key(bytes.fromhex(hex_key))


def _cache_path(cache_key: tuple) -> str | None:
    root = os.environ.get(CACHE_ENV_VAR)
    if not root:
        return None
    digest = hashlib.sha256(repr(cache_key).encode()).hexdigest()[:24]
    return os.path.join(root, f"pairdensity-{digest}.txt")


def _load_disk_cache(cache_key: tuple, family: Family) -> PairDensityTable | None:
    path = _cache_path(cache_key)
    if path is None or not os.path.exists(path):
        return None
    with open(path, "r", encoding="utf-8") as fh:
        return table_from_text(fh.read(), family)


def _store_disk_cache(cache_key: tuple, table: PairDensityTable) -> None:
    path = _cache_path(cache_key)
    if path is None:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(table_to_text(table))
