"""Isomorph-free generation of family-free 3-graphs and typed flags.

Generation is by canonical augmentation: graphs grow one vertex at a time,
attachments (the new vertex's link, a set of vertex pairs) are taken one per
orbit of the parent's automorphism group, and a child survives only when its
newly added vertex lies in the same automorphism orbit as the canonical
deletion vertex.  Together these two filters produce every isomorphism class
exactly once, so no global seen-set is needed.

Non-induced forbidden members prune at every level (their absence is
hereditary under vertex deletion); induced members are filtered at the final
size only, following the conservative policy.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .graphs import (
    CanonicalData,
    Hypergraph3,
    Triple,
    _cell_consistent_perms,
    _encode,
    _refine_colors,
    _relabeled_edges,
    contains_induced,
    contains_sub,
)

SOFT_VERTEX_LIMIT = 7


def _split_family(
    family: Sequence[Hypergraph3], induced_flags: Sequence[bool] | None
) -> tuple[list[Hypergraph3], list[Hypergraph3]]:
    if induced_flags is None:
        induced_flags = [False] * len(family)
    if len(induced_flags) != len(family):
        raise ValueError("induced_flags length must match family length")
    noninduced = [f for f, ind in zip(family, induced_flags) if not ind]
    induced = [f for f, ind in zip(family, induced_flags) if ind]
    return noninduced, induced


def _attachment_orbit_reps(k: int, auts: Sequence[tuple[int, ...]]) -> Iterable[int]:
    """Bitmask representatives of link-sets (pair subsets) up to Aut(parent).

    A mask is kept iff it is the numerically smallest in its orbit.
    """
    pairs = list(combinations(range(k), 2))
    npairs = len(pairs)
    index = {p: i for i, p in enumerate(pairs)}
    # pair image table per nontrivial automorphism
    tables = []
    for a in auts:
        tbl = [0] * npairs
        changed = False
        for i, (u, v) in enumerate(pairs):
            x, y = a[u], a[v]
            j = index[(x, y) if x < y else (y, x)]
            tbl[i] = j
            changed = changed or j != i
        if changed:
            tables.append(tbl)
    for mask in range(1 << npairs):
        minimal = True
        for tbl in tables:
            img = 0
            rest = mask
            while rest:
                low = rest & -rest
                img |= 1 << tbl[low.bit_length() - 1]
                rest ^= low
            if img < mask:
                minimal = False
                break
        if minimal:
            yield mask


def _extend(parent: Hypergraph3, mask: int, pairs: Sequence[tuple[int, int]]) -> Hypergraph3:
    new = parent.n
    edges = list(parent.edges)
    rest = mask
    while rest:
        low = rest & -rest
        u, v = pairs[low.bit_length() - 1]
        edges.append((u, v, new))
        rest ^= low
    return Hypergraph3(new + 1, tuple(sorted(edges)))


def _new_vertex_is_canonical(child: Hypergraph3, data: CanonicalData) -> bool:
    """Accept iff the last-added vertex sits in the canonical deletion orbit.

    The deletion vertex is the one mapped to the highest canonical label; the
    choice is isomorphism-invariant up to automorphism, which is exactly the
    orbit test below.
    """
    last = child.n - 1
    target = data.to_canonical.index(last)  # vertex occupying canonical slot n-1
    if target == last:
        return True
    return any(a[target] == last for a in data.automorphisms)


def enumerate_free(
    m: int,
    family: Sequence[Hypergraph3] = (),
    induced_flags: Sequence[bool] | None = None,
    allow_large: bool = False,
) -> list[Hypergraph3]:
    """All family-free 3-graphs on m vertices, one canonical form per class.

    Output is sorted by canonical key and is exhaustive: every family-free
    m-vertex graph is isomorphic to exactly one member.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m > SOFT_VERTEX_LIMIT and not allow_large:
        raise ValueError(
            f"m={m} exceeds the soft limit {SOFT_VERTEX_LIMIT}; pass allow_large=True"
        )
    noninduced, induced = _split_family(family, induced_flags)
    noninduced = [f for f in noninduced if f.n <= m]
    induced = [f for f in induced if f.n <= m]

    level = [Hypergraph3(0, ())]
    for k in range(m):
        pairs = list(combinations(range(k), 2))
        next_level: list[Hypergraph3] = []
        for parent in level:
            auts = parent.canonical.automorphisms
            for mask in _attachment_orbit_reps(k, auts):
                child = _extend(parent, mask, pairs)
                if any(
                    f.n <= child.n and contains_sub(child, f) for f in noninduced
                ):
                    continue
                data = child.canonical
                if _new_vertex_is_canonical(child, data):
                    next_level.append(data.graph)
        level = sorted(next_level, key=lambda g: g.canon_key)
    if induced:
        level = [
            g for g in level if not any(contains_induced(g, f) for f in induced)
        ]
    return level


# ---------------------------------------------------------------------------
# Typed flags


@dataclass(frozen=True)
class FlagType:
    """A fully labeled small graph; every vertex is a root, in label order."""

    sigma: Hypergraph3

    @property
    def size(self) -> int:
        return self.sigma.n

    @property
    def key(self) -> bytes:
        return self.sigma.canon_key


@dataclass(frozen=True)
class Flag:
    """A graph with an ordered root tuple inducing the type exactly."""

    graph: Hypergraph3
    roots: tuple[int, ...]

    @property
    def key(self) -> bytes:
        return rooted_canonical_key(self.graph, self.roots)


def rooted_canonical_key(h: Hypergraph3, roots: Sequence[int]) -> bytes:
    """Canonical key with the roots pinned, in order, to labels 0..s-1.

    Equal keys exactly when there is an isomorphism carrying root i to root i.
    """
    s = len(roots)
    if len(set(roots)) != s:
        raise ValueError("roots must be distinct")
    root_pos = {v: i for i, v in enumerate(roots)}
    # Seed refinement with singleton colors for the roots: they stay the
    # smallest colors, so every candidate relabeling pins root i to label i.
    colors = _refine_colors(h.n, h.edges, [root_pos.get(v, s) for v in range(h.n)])
    best: tuple[Triple, ...] | None = None
    for perm in _cell_consistent_perms(h.n, colors):
        rel = _relabeled_edges(h.edges, perm)
        if best is None or rel < best:
            best = rel
    assert best is not None
    return bytes([s]) + _encode(h.n, best)


def type_embeddings(target: Hypergraph3, sigma: Hypergraph3) -> list[tuple[int, ...]]:
    """All ordered injections of the labeled type into target, exact on edges.

    theta qualifies iff for every triple of root positions, the image triple
    is a target edge exactly when the positions form a sigma edge.
    """
    s = sigma.n
    sigma_edges = sigma.edge_set
    target_edges = target.edge_set
    out = []
    for theta in permutations(range(target.n), s):
        ok = True
        for tri in combinations(range(s), 3):
            a, b, c = (theta[i] for i in tri)
            present = tuple(sorted((a, b, c))) in target_edges
            if present != (tri in sigma_edges):
                ok = False
                break
        if ok:
            out.append(theta)
    return out


def enumerate_flags(
    ftype: FlagType,
    m_prime: int,
    family: Sequence[Hypergraph3] = (),
    induced_flags: Sequence[bool] | None = None,
    allow_large: bool = False,
) -> list[Flag]:
    """All flags on m_prime vertices over the given type, family-free.

    Flags are pairwise non-isomorphic as rooted structures; each is returned
    with roots relabeled to 0..s-1.  Raises if the type graph itself is not
    family-free (no flags can exist and the inputs are contradictory).
    """
    s = ftype.size
    if s > m_prime:
        raise ValueError(f"type size {s} exceeds flag size {m_prime}")
    noninduced, induced = _split_family(family, induced_flags)
    sigma = ftype.sigma
    if any(f.n <= s and contains_sub(sigma, f) for f in noninduced) or any(
        f.n <= s and contains_induced(sigma, f) for f in induced
    ):
        raise ValueError("type graph is not family-free; no flags exist")

    flags: dict[bytes, Flag] = {}
    for g in enumerate_free(m_prime, family, induced_flags, allow_large):
        for theta in type_embeddings(g, sigma):
            key = rooted_canonical_key(g, theta)
            if key in flags:
                continue
            flags[key] = _relabel_flag(g, theta)
    return [flags[k] for k in sorted(flags)]


def _relabel_flag(g: Hypergraph3, roots: Sequence[int]) -> Flag:
    order = list(roots) + [v for v in range(g.n) if v not in set(roots)]
    perm = [0] * g.n
    for new, old in enumerate(order):
        perm[old] = new
    relabeled = Hypergraph3(g.n, _relabeled_edges(g.edges, perm))
    return Flag(relabeled, tuple(range(len(roots))))
