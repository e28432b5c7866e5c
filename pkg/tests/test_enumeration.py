import time

import pytest

from turan3.enumeration import (
    FlagType,
    enumerate_flags,
    enumerate_free,
    rooted_canonical_key,
    type_embeddings,
)
from turan3.graphs import Hypergraph3, from_edges, named_graph

import oracles


FAMILIES = {
    "empty": ([], []),
    "C4_3": ([named_graph("C4_3")], [False]),
    "C4_3+F5_BAR": ([named_graph("C4_3"), named_graph("F5_BAR")], [False, False]),
    "F32+C5_3_MINUS": ([named_graph("F32"), named_graph("C5_3_MINUS")], [False, False]),
}


def check_against_oracle(m, members, flags):
    got = enumerate_free(m, members, flags)
    # pairwise distinct canonical keys
    keys = [g.canon_key for g in got]
    assert len(set(keys)) == len(keys)
    # every output is family-free by the brute-force containment oracle
    for g in got:
        assert oracles.family_free_brute(g, members, flags)
    # counts and membership match the classify-after-generate oracle
    reps = oracles.enumerate_free_brute(m, members, flags)
    assert len(reps) == len(got)
    key_set = set(keys)
    for r in reps:
        assert r.canon_key in key_set
    return got


@pytest.mark.parametrize("famname", sorted(FAMILIES))
@pytest.mark.parametrize("m", [3, 4])
def test_enumerate_small_vs_oracle(m, famname):
    members, flags = FAMILIES[famname]
    check_against_oracle(m, members, flags)


@pytest.mark.parametrize("famname", sorted(FAMILIES))
def test_enumerate_m5_vs_oracle(famname):
    members, flags = FAMILIES[famname]
    check_against_oracle(5, members, flags)


def test_known_counts():
    assert len(enumerate_free(4)) == 5
    assert len(enumerate_free(5)) == 34
    # forbidding C4_3 at m=4 removes exactly the complete graph
    full = enumerate_free(4)
    free = enumerate_free(4, [named_graph("C4_3")])
    assert len(free) == 4
    assert named_graph("C4_3").canon_key not in {g.canon_key for g in free}
    assert {g.canon_key for g in free} <= {g.canon_key for g in full}


def test_monotone_in_family():
    small = enumerate_free(5, [named_graph("C4_3")])
    large = enumerate_free(5, [named_graph("C4_3"), named_graph("F5_BAR")])
    assert len(large) <= len(small)
    assert {g.canon_key for g in large} <= {g.canon_key for g in small}


def test_induced_member_filtering():
    # Forbidding induced F32_BAR keeps graphs that contain it only non-induced.
    members = [named_graph("F32_BAR")]
    got_ind = enumerate_free(5, members, [True])
    got_non = enumerate_free(5, members, [False])
    assert len(got_non) < len(got_ind) < 34
    for g in got_ind:
        assert oracles.family_free_brute(g, members, [True])
    reps = oracles.enumerate_free_brute(5, members, [True])
    assert len(reps) == len(got_ind)


def test_deterministic_order():
    a = enumerate_free(5, [named_graph("C4_3")])
    b = enumerate_free(5, [named_graph("C4_3")])
    assert [g.edges for g in a] == [g.edges for g in b]
    keys = [g.canon_key for g in a]
    assert keys == sorted(keys)


def test_soft_guard():
    with pytest.raises(ValueError):
        enumerate_free(8)


def test_enumerate_m6_spot_family():
    # Spot check at m=6 for a restrictive family: every member free and
    # distinct, and 300 random labeled free graphs all land in the list.
    import random

    from itertools import combinations

    members = [named_graph("C4_3"), named_graph("F5_BAR")]
    flags = [False, False]
    t0 = time.perf_counter()
    got = enumerate_free(6, members, flags)
    elapsed = time.perf_counter() - t0
    keys = {g.canon_key for g in got}
    assert len(keys) == len(got)
    for g in got:
        assert g.n == 6
        assert oracles.family_free_brute(g, members, flags)
    rng = random.Random(99)
    triples = list(combinations(range(6), 3))
    hits = 0
    while hits < 300:
        edges = [t for t in triples if rng.random() < rng.choice((0.15, 0.3, 0.45))]
        g = Hypergraph3(6, tuple(edges))
        if not oracles.family_free_brute(g, members, flags):
            continue
        hits += 1
        assert g.canon_key in keys
    assert elapsed < 60


def test_enumerate_m6_empty_family_count_burnside():
    # Independent class count via Burnside's lemma over S6 acting on triples.
    from itertools import combinations, permutations

    triples = list(combinations(range(6), 3))
    index = {t: i for i, t in enumerate(triples)}
    total = 0
    for p in permutations(range(6)):
        seen = [False] * len(triples)
        cycles = 0
        for i, t in enumerate(triples):
            if seen[i]:
                continue
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                a, b, c = triples[j]
                j = index[tuple(sorted((p[a], p[b], p[c])))]
        total += 1 << cycles
    expected = total // 720
    assert len(enumerate_free(6)) == expected


# ---------------------------------------------------------------------------
# Flags


def test_single_vertex_type_m2():
    t = FlagType(from_edges(1, []))
    flags = enumerate_flags(t, 2)
    assert len(flags) == 1
    assert flags[0].roots == (0,)


def test_flag_counts_vs_rooted_oracle():
    # type = one labeled edge on 3 vertices, flags on 4 vertices, no family
    sigma = from_edges(3, [(0, 1, 2)])
    t = FlagType(sigma)
    flags = enumerate_flags(t, 4)
    # oracle: all labeled graphs on 4 vertices x all root embeddings,
    # classified by rooted isomorphism
    found = []
    for g in oracles.all_labeled_graphs(4):
        for theta in type_embeddings(g, sigma):
            for fg, fr in found:
                if oracles.rooted_iso_brute(g, theta, fg, fr):
                    break
            else:
                found.append((g, theta))
    assert len(flags) == len(found)
    # cross-check keys: every oracle rep matches exactly one flag key
    flag_keys = {f.key for f in flags}
    assert len(flag_keys) == len(flags)
    for fg, fr in found:
        assert rooted_canonical_key(fg, fr) in flag_keys


def test_flag_roots_induce_type():
    sigma = from_edges(3, [(0, 1, 2)])
    for f in enumerate_flags(FlagType(sigma), 5, [named_graph("C4_3")]):
        assert f.roots == (0, 1, 2)
        assert (0, 1, 2) in f.graph.edge_set


def test_flags_with_contradictory_type():
    with pytest.raises(ValueError):
        enumerate_flags(FlagType(named_graph("C4_3")), 5, [named_graph("C4_3")])


def test_flag_type_too_big():
    with pytest.raises(ValueError):
        enumerate_flags(FlagType(from_edges(4, [])), 3)


def test_rooted_key_respects_root_order():
    # Two root orderings of an asymmetric rooted structure differ as flags.
    g = from_edges(4, [(0, 1, 2), (0, 1, 3)])
    k1 = rooted_canonical_key(g, (0, 2))
    k2 = rooted_canonical_key(g, (2, 0))
    assert k1 != k2
    assert rooted_canonical_key(g, (0, 1)) == rooted_canonical_key(g, (1, 0))
