"""3-uniform hypergraphs: exact construction, canonical labeling, containment.

Vertices are always 0-based integers 0..n-1.  Edges are 3-element subsets
stored as sorted triples in a sorted tuple, so two equal graphs compare equal
as values.  Graphs are immutable; every operation returns a new graph.

Canonical labeling is meant for small graphs (the enumeration scale, n <= 12
or so).  It uses iterative color refinement followed by exhaustive search
over the refined cells, which also yields the full automorphism group; that
group is what the isomorph-free generator needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

Triple = tuple[int, int, int]
Perm = tuple[int, ...]


def _sorted_triple(a: int, b: int, c: int) -> Triple:
    if a > b:
        a, b = b, a
    if b > c:
        b, c = c, b
    if a > b:
        a, b = b, a
    return (a, b, c)


@dataclass(frozen=True)
class Hypergraph3:
    """An n-vertex 3-uniform hypergraph with a deterministic edge order."""

    n: int
    edges: tuple[Triple, ...]

    @cached_property
    def edge_set(self) -> frozenset[Triple]:
        return frozenset(self.edges)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.n
        for a, b, c in self.edges:
            d[a] += 1
            d[b] += 1
            d[c] += 1
        return tuple(d)

    @cached_property
    def canonical(self) -> "CanonicalData":
        return canonical_data(self)

    @property
    def canon_key(self) -> bytes:
        return self.canonical.key

    def has_edge(self, a: int, b: int, c: int) -> bool:
        return _sorted_triple(a, b, c) in self.edge_set

    def __len__(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:  # pragma: no cover - debug aid
        return f"Hypergraph3(n={self.n}, edges={list(self.edges)})"


def from_edges(n: int, triples: Iterable[Sequence[int]]) -> Hypergraph3:
    """Build a graph on n vertices from vertex triples, deduplicating.

    Rejects triples with repeated vertices or vertices outside 0..n-1.
    """
    if n < 0:
        raise ValueError(f"vertex count must be nonnegative, got {n}")
    seen: set[Triple] = set()
    for t in triples:
        if len(t) != 3:
            raise ValueError(f"edge {tuple(t)} does not have 3 vertices")
        a, b, c = t
        if a == b or b == c or a == c:
            raise ValueError(f"edge {tuple(t)} repeats a vertex")
        if not (0 <= a < n and 0 <= b < n and 0 <= c < n):
            raise ValueError(f"edge {tuple(t)} has a vertex outside 0..{n - 1}")
        seen.add(_sorted_triple(a, b, c))
    return Hypergraph3(n, tuple(sorted(seen)))


def _relabeled_edges(edges: Sequence[Triple], perm: Sequence[int]) -> tuple[Triple, ...]:
    return tuple(sorted(_sorted_triple(perm[a], perm[b], perm[c]) for a, b, c in edges))


def relabel(h: Hypergraph3, perm: Sequence[int]) -> Hypergraph3:
    """Apply the vertex relabeling v -> perm[v]."""
    if sorted(perm) != list(range(h.n)):
        raise ValueError("perm is not a permutation of the vertex set")
    return Hypergraph3(h.n, _relabeled_edges(h.edges, perm))


# ---------------------------------------------------------------------------
# Canonical labeling


def _refine_colors(
    n: int, edges: Sequence[Triple], initial: Sequence[int] | None = None
) -> list[int]:
    """Iteratively refine vertex colors by the multiset of incident pair colors.

    The result is a label-invariant coloring: isomorphic graphs produce the
    same color for corresponding vertices.  Distinctions present in the
    initial coloring persist, and their relative order is preserved.
    """
    incident: list[list[Triple]] = [[] for _ in range(n)]
    for e in edges:
        for v in e:
            incident[v].append(e)
    colors = [0] * n if initial is None else list(initial)
    while True:
        sigs = []
        for v in range(n):
            pair_colors = sorted(
                tuple(sorted(colors[u] for u in e if u != v)) for e in incident[v]
            )
            sigs.append((colors[v], tuple(pair_colors)))
        order = sorted(set(sigs))
        rank = {s: i for i, s in enumerate(order)}
        new_colors = [rank[s] for s in sigs]
        if new_colors == colors:
            return colors
        colors = new_colors


def _cell_consistent_perms(n: int, colors: Sequence[int]) -> Iterable[Perm]:
    """All relabelings that sort vertices by color, free within each cell.

    perm[v] is the new label of v.  Cells are laid out in increasing color
    order, so the candidate set is the same for any isomorphic input.
    """
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    ordered = [cells[c] for c in sorted(cells)]
    offsets = []
    pos = 0
    for cell in ordered:
        offsets.append(pos)
        pos += len(cell)
    for arrangement in product(*(permutations(cell) for cell in ordered)):
        perm = [0] * n
        for cell_order, off in zip(arrangement, offsets):
            for i, v in enumerate(cell_order):
                perm[v] = off + i
        yield tuple(perm)


@dataclass(frozen=True)
class CanonicalData:
    """Canonical representative plus the symmetry data the generator needs."""

    key: bytes
    graph: Hypergraph3
    to_canonical: Perm  # one relabeling achieving the key
    automorphisms: tuple[Perm, ...]  # full automorphism group


def _encode(n: int, edges: Sequence[Triple]) -> bytes:
    flat = bytearray([n])
    for a, b, c in edges:
        flat += bytes((a, b, c))
    return bytes(flat)


def canonical_data(h: Hypergraph3) -> CanonicalData:
    if h.n > 255:
        raise ValueError("canonical labeling supports at most 255 vertices")
    colors = _refine_colors(h.n, h.edges)
    best: tuple[Triple, ...] | None = None
    best_perms: list[Perm] = []
    for perm in _cell_consistent_perms(h.n, colors):
        rel = _relabeled_edges(h.edges, perm)
        if best is None or rel < best:
            best = rel
            best_perms = [perm]
        elif rel == best:
            best_perms.append(perm)
    assert best is not None
    p0 = best_perms[0]
    inv0 = [0] * h.n
    for v, img in enumerate(p0):
        inv0[img] = v
    auts = tuple(tuple(inv0[q[v]] for v in range(h.n)) for q in best_perms)
    return CanonicalData(
        key=_encode(h.n, best),
        graph=Hypergraph3(h.n, best),
        to_canonical=p0,
        automorphisms=auts,
    )


def canonical_form(h: Hypergraph3) -> tuple[Hypergraph3, bytes]:
    """Canonically relabeled copy of h and its canonical key.

    Two graphs get equal keys exactly when they are isomorphic.
    """
    data = h.canonical
    return data.graph, data.key


def decode_key(raw: bytes) -> Hypergraph3:
    """Rebuild the graph a canonical key encodes (inverse of the key layout)."""
    if not raw:
        raise ValueError("empty key")
    n = raw[0]
    body = raw[1:]
    if len(body) % 3:
        raise ValueError("malformed key body")
    edges = tuple(
        (body[i], body[i + 1], body[i + 2]) for i in range(0, len(body), 3)
    )
    if any(not (a < b < c < n) for a, b, c in edges):
        raise ValueError("malformed key edges")
    return Hypergraph3(n, edges)


def automorphism_orbits(h: Hypergraph3) -> list[set[int]]:
    """Vertex orbits under the full automorphism group."""
    parent = list(range(h.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in h.canonical.automorphisms:
        for v in range(h.n):
            ra, rb = find(v), find(a[v])
            if ra != rb:
                parent[ra] = rb
    orbits: dict[int, set[int]] = {}
    for v in range(h.n):
        orbits.setdefault(find(v), set()).add(v)
    return list(orbits.values())


# ---------------------------------------------------------------------------
# Containment


def contains_sub(h: Hypergraph3, f: Hypergraph3) -> bool:
    """Non-induced containment: some injection V(f) -> V(h) maps edges to edges."""
    if f.n > h.n:
        return False
    if not f.edges:
        return True
    f_deg = f.degrees
    # Place high-degree vertices first; a placed vertex must immediately
    # complete every f-edge whose vertices are all placed.
    order = sorted(range(f.n), key=lambda v: -f_deg[v])
    pos_in_order = {v: i for i, v in enumerate(order)}
    edges_closing_at: list[list[Triple]] = [[] for _ in range(f.n)]
    for e in f.edges:
        last = max(pos_in_order[v] for v in e)
        edges_closing_at[last].append(e)
    h_deg = h.degrees
    h_edges = h.edge_set
    assignment: dict[int, int] = {}
    used = [False] * h.n

    def place(i: int) -> bool:
        if i == f.n:
            return True
        v = order[i]
        need = f_deg[v]
        for cand in range(h.n):
            if used[cand] or h_deg[cand] < need:
                continue
            assignment[v] = cand
            ok = True
            for a, b, c in edges_closing_at[i]:
                if _sorted_triple(assignment[a], assignment[b], assignment[c]) not in h_edges:
                    ok = False
                    break
            if ok:
                used[cand] = True
                if place(i + 1):
                    return True
                used[cand] = False
            del assignment[v]
        return False

    return place(0)


def induced_subgraph(h: Hypergraph3, vertices: Sequence[int]) -> Hypergraph3:
    """Induced graph on the given vertices, relabeled 0..k-1 in listed order."""
    idx = {v: i for i, v in enumerate(vertices)}
    if len(idx) != len(vertices):
        raise ValueError("vertex list has repeats")
    vset = set(vertices)
    edges = [
        _sorted_triple(idx[a], idx[b], idx[c])
        for a, b, c in h.edges
        if a in vset and b in vset and c in vset
    ]
    return Hypergraph3(len(vertices), tuple(sorted(edges)))


def _isomorphic_small(g: Hypergraph3, f: Hypergraph3) -> bool:
    if g.n != f.n or len(g.edges) != len(f.edges):
        return False
    if sorted(g.degrees) != sorted(f.degrees):
        return False
    return g.canon_key == f.canon_key


def contains_induced(h: Hypergraph3, f: Hypergraph3) -> bool:
    """True iff some |V(f)|-subset of V(h) spans a copy of f."""
    if f.n > h.n:
        return False
    want_edges = len(f.edges)
    f_degs = sorted(f.degrees)
    h_edge_set = h.edge_set
    for sub in combinations(range(h.n), f.n):
        count = 0
        for t in combinations(sub, 3):
            if t in h_edge_set:
                count += 1
        if count != want_edges:
            continue
        g = induced_subgraph(h, sub)
        if sorted(g.degrees) == f_degs and g.canon_key == f.canon_key:
            return True
    return False


def is_family_free(
    h: Hypergraph3,
    family: Sequence[Hypergraph3],
    induced_flags: Sequence[bool] | None = None,
) -> bool:
    """True iff h contains no family member, each under its own notion.

    induced_flags[i] selects induced containment for family[i]; default is
    non-induced for every member.
    """
    if induced_flags is None:
        induced_flags = [False] * len(family)
    if len(induced_flags) != len(family):
        raise ValueError("induced_flags length must match family length")
    for f, ind in zip(family, induced_flags):
        if ind:
            if contains_induced(h, f):
                return False
        else:
            if contains_sub(h, f):
                return False
    return True


def exhaustive_containment_scan(
    h: Hypergraph3, f: Hypergraph3, induced: bool = False
) -> tuple[bool, tuple[int, ...] | None]:
    """Scan every |V(f)|-subset of V(h) for a copy of f; return (found, witness).

    This is the slow, direct check used to audit freeness claims: it visits
    all C(n, k) subsets, filtering by induced edge count before attempting a
    vertex bijection.
    """
    k = f.n
    if k > h.n:
        return False, None
    want = len(f.edges)
    h_edge_set = h.edge_set
    f_degs_sorted = sorted(f.degrees)
    for sub in combinations(range(h.n), k):
        count = 0
        for t in combinations(sub, 3):
            if t in h_edge_set:
                count += 1
        if induced:
            if count != want:
                continue
            g = induced_subgraph(h, sub)
            if sorted(g.degrees) == f_degs_sorted and g.canon_key == f.canon_key:
                return True, sub
        else:
            if count < want:
                continue
            g = induced_subgraph(h, sub)
            if _spanning_embeds(f, g):
                return True, sub
    return False, None


def _spanning_embeds(f: Hypergraph3, g: Hypergraph3) -> bool:
    """Some bijection V(f) -> V(g) maps every f-edge onto a g-edge."""
    if f.n != g.n:
        return False
    f_degs = sorted(f.degrees)
    g_degs = sorted(g.degrees)
    if any(fd > gd for fd, gd in zip(f_degs, g_degs)):
        return False
    g_edges = g.edge_set
    for p in permutations(range(g.n)):
        good = True
        for a, b, c in f.edges:
            if _sorted_triple(p[a], p[b], p[c]) not in g_edges:
                good = False
                break
        if good:
            return True
    return False


# ---------------------------------------------------------------------------
# Derived graphs


def complement(h: Hypergraph3) -> Hypergraph3:
    edge_set = h.edge_set
    edges = tuple(t for t in combinations(range(h.n), 3) if t not in edge_set)
    return Hypergraph3(h.n, edges)


def blow_up(h: Hypergraph3, sizes: Sequence[int]) -> Hypergraph3:
    """Replace vertex v by a class of sizes[v] vertices.

    A triple is an edge iff its vertices lie in three distinct classes whose
    originals form an edge of h.
    """
    if len(sizes) != h.n:
        raise ValueError(f"need {h.n} class sizes, got {len(sizes)}")
    if any(s <= 0 for s in sizes):
        raise ValueError("class sizes must be positive")
    offsets = []
    pos = 0
    for s in sizes:
        offsets.append(pos)
        pos += s
    classes = [range(offsets[v], offsets[v] + sizes[v]) for v in range(h.n)]
    edges = []
    for a, b, c in h.edges:
        for x in classes[a]:
            for y in classes[b]:
                for z in classes[c]:
                    edges.append(_sorted_triple(x, y, z))
    return Hypergraph3(pos, tuple(sorted(edges)))


def degree_stats(h: Hypergraph3) -> tuple[int, int, int]:
    """(min degree, max degree, gap)."""
    if h.n == 0:
        return (0, 0, 0)
    d = h.degrees
    lo, hi = min(d), max(d)
    return (lo, hi, hi - lo)


# ---------------------------------------------------------------------------
# Named graphs

_C5_EDGES = [(i, (i + 1) % 5, (i + 2) % 5) for i in range(5)]

_NAMED_BUILDERS = {
    # All 1-based definitions from the literature are translated to 0-based here.
    "C4_3": lambda: from_edges(4, list(combinations(range(4), 3))),
    "K4_3": lambda: from_edges(4, list(combinations(range(4), 3))),
    "F5": lambda: from_edges(5, [(0, 1, 2), (0, 3, 4), (1, 3, 4)]),
    "F5_BAR": lambda: complement(from_edges(5, [(0, 1, 2), (0, 3, 4), (1, 3, 4)])),
    "F32": lambda: from_edges(5, [(0, 1, 2), (0, 3, 4), (1, 3, 4), (2, 3, 4)]),
    "F32_BAR": lambda: complement(
        from_edges(5, [(0, 1, 2), (0, 3, 4), (1, 3, 4), (2, 3, 4)])
    ),
    "C5_3": lambda: from_edges(5, _C5_EDGES),
    "C5_3_MINUS": lambda: from_edges(5, _C5_EDGES[:-1]),
}

NAMED_GRAPHS = tuple(sorted(_NAMED_BUILDERS))


def named_graph(name: str) -> Hypergraph3:
    """Resolve a built-in graph name (C4_3, F5, F5_BAR, F32, F32_BAR, ...)."""
    try:
        builder = _NAMED_BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown graph name {name!r}; known names: {', '.join(NAMED_GRAPHS)}"
        ) from None
    return builder()


# ---------------------------------------------------------------------------
# Text format: first line "n <count>", one edge per line, '#' comments.


def graph_to_text(h: Hypergraph3) -> str:
    lines = [f"n {h.n}"]
    lines.extend(f"{a} {b} {c}" for a, b, c in h.edges)
    return "\n".join(lines) + "\n"


def parse_graph_text(text: str) -> Hypergraph3:
    n: int | None = None
    triples: list[tuple[int, int, int]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ValueError(f"expected header 'n <count>', got {raw!r}")
            n = int(parts[1])
            continue
        if len(parts) != 3:
            raise ValueError(f"expected 3 vertex ids per edge line, got {raw!r}")
        triples.append((int(parts[0]), int(parts[1]), int(parts[2])))
    if n is None:
        raise ValueError("missing 'n <count>' header line")
    return from_edges(n, triples)


def load_graph(path: str) -> Hypergraph3:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def save_graph(h: Hypergraph3, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(graph_to_text(h))
