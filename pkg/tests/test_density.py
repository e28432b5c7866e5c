import random
from fractions import Fraction
from itertools import combinations, permutations
from math import comb

import pytest

from turan3 import families
from turan3.density import (
    SINGLE_EDGE,
    edge_density,
    p,
    pair_density_table,
    spanning_profile,
    table_from_text,
    table_to_text,
)
from turan3.enumeration import FlagType, enumerate_free, rooted_canonical_key
from turan3.graphs import blow_up, from_edges, induced_subgraph, named_graph


def random_graph(n, prob, rng):
    edges = [t for t in combinations(range(n), 3) if rng.random() < prob]
    return from_edges(n, edges)


# ---------------------------------------------------------------------------
# p and edge_density


def test_p_identity():
    for name in ("F5", "C5_3", "F32"):
        f = named_graph(name)
        assert p(f, f) == 1


def test_p_on_complete_graph():
    k4 = named_graph("K4_3")
    # every 3-subset of K4_3 spans an edge, so the single-edge pattern is
    # induced everywhere and the empty pattern nowhere
    assert p(SINGLE_EDGE, k4) == 1
    assert p(from_edges(3, []), k4) == 0


def test_p_blowup_example():
    b = blow_up(named_graph("K4_3"), [2, 2, 2, 2])
    # oracle: count 4-subsets inducing K4_3 directly
    hits = 0
    for sub in combinations(range(8), 4):
        g = induced_subgraph(b, sub)
        if len(g.edges) == 4:
            hits += 1
    assert hits == 16
    assert p(named_graph("K4_3"), b) == Fraction(16, comb(8, 4)) == Fraction(8, 35)


def test_p_rejects_oversized_pattern():
    with pytest.raises(ValueError):
        p(named_graph("F5"), named_graph("K4_3"))


def test_edge_density_values():
    partite = blow_up(from_edges(3, [(0, 1, 2)]), [10, 10, 10])
    assert edge_density(partite) == Fraction(1000, comb(30, 3)) == Fraction(50, 203)
    assert edge_density(named_graph("K4_3")) == 1
    assert edge_density(from_edges(5, [])) == 0
    with pytest.raises(ValueError):
        edge_density(from_edges(2, []))


def test_sum_over_classes_is_one():
    rng = random.Random(5)
    classes = enumerate_free(4)
    for _ in range(10):
        h = random_graph(6, rng.random(), rng)
        assert sum(p(g, h) for g in classes) == 1
        prof = spanning_profile(h, 4)
        assert sum(prof.values()) == comb(6, 4)


def test_chain_rule_exact():
    rng = random.Random(6)
    mids = enumerate_free(5)
    smalls = enumerate_free(3) + enumerate_free(4)
    for _ in range(10):
        h = random_graph(7, rng.random(), rng)
        prof = spanning_profile(h, 5)
        total = comb(7, 5)
        for f in smalls:
            direct = p(f, h)
            via = sum(
                p(f, g) * Fraction(prof.get(g.canon_key, 0), total) for g in mids
            )
            assert direct == via


# ---------------------------------------------------------------------------
# Pair density tables


def _pair_probability_in_host(host, sigma, t, flag_key_1, flag_key_2):
    """Embedding oracle: scan every (theta, A1, A2) in the host directly."""
    s = sigma.n
    hits = 0
    total = 0
    sigma_edges = sigma.edge_set
    host_edges = host.edge_set
    for theta in permutations(range(host.n), s):
        others = [v for v in range(host.n) if v not in theta]
        for a1 in combinations(others, t):
            rest = [v for v in others if v not in a1]
            for a2 in combinations(rest, t):
                total += 1
                ok = True
                for tri in combinations(range(s), 3):
                    x, y, z = (theta[i] for i in tri)
                    present = tuple(sorted((x, y, z))) in host_edges
                    if present != (tri in sigma_edges):
                        ok = False
                        break
                if not ok:
                    continue
                k1 = rooted_canonical_key(
                    induced_subgraph(host, list(theta) + sorted(a1)), range(s)
                )
                k2 = rooted_canonical_key(
                    induced_subgraph(host, list(theta) + sorted(a2)), range(s)
                )
                if k1 == flag_key_1 and k2 == flag_key_2:
                    hits += 1
    return Fraction(hits, total)


def test_empty_type_entries_sum_to_one():
    table = pair_density_table(FlagType(from_edges(0, [])), 3, 6)
    for mat in table.matrices:
        assert sum(sum(row) for row in mat) == 1


def test_matrices_symmetric():
    fam = families.make_family(named_graph("C4_3"), named_graph("F5_BAR"))
    table = pair_density_table(FlagType(from_edges(1, [])), 3, 5, fam)
    for mat in table.matrices:
        n = len(mat)
        for i in range(n):
            for j in range(n):
                assert mat[i][j] == mat[j][i]
                assert 0 <= mat[i][j] <= 1


def test_table_against_embedding_oracle():
    # single-vertex type, flags of size 3, targets of size 5
    fam = families.make_family(named_graph("C4_3"), named_graph("F5_BAR"))
    ftype = FlagType(from_edges(1, []))
    table = pair_density_table(ftype, 3, 5, fam)
    t = 2
    for target_idx in (0, len(table.targets) // 2, len(table.targets) - 1):
        target = table.targets[target_idx]
        mat = table.matrices[target_idx]
        for i in range(len(table.flags)):
            for j in range(len(table.flags)):
                want = _pair_probability_in_host(
                    target, ftype.sigma, t, table.flags[i].key, table.flags[j].key
                )
                assert mat[i][j] == want


def test_host_identity_from_docstring():
    # Pr[sigma and F1 and F2 in H] == sum_F entry(F1,F2;F) p(F,H), exactly.
    rng = random.Random(9)
    ftype = FlagType(from_edges(1, []))
    table = pair_density_table(ftype, 3, 5)
    t = 2
    host = random_graph(6, 0.5, rng)
    prof = spanning_profile(host, 5)
    total = comb(6, 5)
    for i in (0, 1):
        for j in (0, 1):
            lhs = _pair_probability_in_host(
                host, ftype.sigma, t, table.flags[i].key, table.flags[j].key
            )
            rhs = sum(
                table.matrices[fi][i][j]
                * Fraction(prof.get(g.canon_key, 0), total)
                for fi, g in enumerate(table.targets)
            )
            assert lhs == rhs


def test_size_validation():
    with pytest.raises(ValueError):
        pair_density_table(FlagType(from_edges(1, [])), 4, 5)  # 2*4-1 = 7 > 5


def test_table_round_trip():
    fam = families.make_family(named_graph("C4_3"))
    table = pair_density_table(FlagType(from_edges(1, [])), 3, 5, fam)
    text = table_to_text(table)
    back = table_from_text(text)
    assert back.matrices == table.matrices
    assert back.family_key == table.family_key
    assert [f.key for f in back.flags] == [f.key for f in table.flags]


def test_disk_cache(tmp_path, monkeypatch):
    import turan3.density as density_mod

    monkeypatch.setenv(density_mod.CACHE_ENV_VAR, str(tmp_path))
    density_mod._memory_cache.clear()
    fam = families.make_family(named_graph("F32"), named_graph("C5_3_MINUS"))
    t1 = pair_density_table(FlagType(from_edges(1, [])), 3, 5, fam)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    density_mod._memory_cache.clear()
    t2 = pair_density_table(FlagType(from_edges(1, [])), 3, 5, fam)
    assert t1.matrices == t2.matrices
    density_mod._memory_cache.clear()
