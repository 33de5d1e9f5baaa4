import itertools
import math
import random
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from totaldom import graph as gr
from totaldom.graph import (
    GraphError,
    InstanceTooLarge,
    NoTotalDominatingSet,
    Pseudograph,
    brute_force_gamma_t,
    complete,
    complete_bipartite,
    cycle,
    from_pairing,
    girth,
    petersen,
    verify_tds,
)
from totaldom.pairing import PairingState


# ---- independent oracles (plain enumeration / edge-deletion BFS)


def gamma_t_by_combinations(g: Pseudograph) -> int:
    nbrs = g.neighbor_sets()
    for k in range(1, g.n + 1):
        for S in itertools.combinations(range(g.n), k):
            S = set(S)
            if all(nbrs[v] & S for v in range(g.n)):
                return k
    raise AssertionError("no TDS")


def girth_by_edge_removal(g: Pseudograph) -> float:
    """Shortest cycle through each edge = 1 + distance between its ends without it."""
    best = math.inf
    for idx, (a, b) in enumerate(g.edges):
        rest = [e for i, e in enumerate(g.edges) if i != idx]
        adj = {v: [] for v in range(g.n)}
        for u, v in rest:
            adj[u].append(v)
            adj[v].append(u)
        dist = {a: 0}
        q = deque([a])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    q.append(y)
        if b in dist:
            best = min(best, dist[b] + 1)
    return best


# ---- construction


def test_from_pairing_double_edge():
    s = PairingState(2, 2, strict=False)
    s.pool.clear()
    s.pairs[:] = [(0, 2), (1, 3)]
    g = from_pairing(s)
    assert g.edges == [(0, 1), (0, 1)]
    assert g.degrees() == [2, 2]
    assert not g.is_simple()


def test_from_pairing_rejects_incomplete():
    s = PairingState(6, 3)
    with pytest.raises(GraphError):
        from_pairing(s)


@pytest.mark.parametrize("seed", range(5))
def test_from_pairing_regular(seed):
    rng = random.Random(seed)
    s = PairingState(30, 5)
    s.complete(rng)
    g = from_pairing(s)
    assert g.is_regular(5)
    assert sum(g.degrees()) == 2 * g.m


def test_generators():
    assert complete(6).m == 15
    assert complete_bipartite(5, 5).is_regular(5)
    c4 = cycle(4)
    assert c4.is_regular(2) and girth(c4) == 4
    assert petersen().is_regular(3) and petersen().m == 15
    assert gr.from_spec("complete_bipartite:2,3").n == 5
    with pytest.raises(GraphError):
        gr.from_spec("nonsense")


def test_loop_degree_counts_twice():
    g = Pseudograph(2, [(0, 0), (0, 1)])
    assert g.degree(0) == 3
    assert sum(g.degrees()) == 2 * g.m


def test_edgelist_roundtrip(tmp_path):
    g = Pseudograph(3, [(0, 1), (1, 2), (2, 2)])
    path = tmp_path / "g.txt"
    gr.write_edgelist(g, path)
    assert path.read_text().splitlines()[0] == "3 3"
    h = gr.read_edgelist(path)
    assert h.edges == g.edges


@pytest.mark.parametrize("text", ["", "3\n0 1\n", "2 2\n0 1\n", "2 1\n0 x\n", "2 1\n0 5\n"])
def test_edgelist_malformed(text):
    with pytest.raises(GraphError):
        gr.parse_edgelist(text)


# ---- verification


def test_verify_c4():
    assert verify_tds(cycle(4), {0, 1}).is_tds


def test_verify_k33_one_per_side():
    assert verify_tds(complete_bipartite(3, 3), {0, 3})
    assert not verify_tds(complete_bipartite(3, 3), {0, 1})


def test_verify_c6_witness():
    v = verify_tds(cycle(6), {0, 1, 2})
    assert not v.is_tds and v.witness == 4


def test_verify_out_of_range():
    with pytest.raises(GraphError):
        verify_tds(cycle(4), {7})


def test_loop_self_domination():
    g = Pseudograph(2, [(0, 0), (0, 1)])
    assert verify_tds(g, {0})
    assert not verify_tds(Pseudograph(2, [(0, 1)]), {0})


def test_full_vertex_set_and_isolated_vertex():
    assert verify_tds(petersen(), range(10))
    g = Pseudograph(3, [(0, 1)])
    v = verify_tds(g, range(3))
    assert not v and v.witness == 2


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6), extra=st.integers(0, 9))
def test_monotone_under_additions(seed, extra):
    rng = random.Random(seed)
    g = gr.random_simple_regular(10, 3, rng)
    _, best = brute_force_gamma_t(g)
    bigger = set(best) | {extra}
    assert verify_tds(g, bigger)


# ---- exact oracle


@pytest.mark.parametrize("d", [3, 4, 5])
def test_gamma_t_extremal_families(d):
    assert brute_force_gamma_t(complete(d + 1))[0] == 2
    assert brute_force_gamma_t(complete_bipartite(d, d))[0] == 2


def test_gamma_t_petersen():
    size, best = brute_force_gamma_t(petersen())
    assert size == gamma_t_by_combinations(petersen()) == 4
    assert verify_tds(petersen(), best)


@pytest.mark.parametrize("n", range(4, 13))
def test_gamma_t_cycles(n):
    size, best = brute_force_gamma_t(cycle(n))
    assert size == gamma_t_by_combinations(cycle(n))
    assert len(best) == size and verify_tds(cycle(n), best)


def test_gamma_t_c6_c8_c11():
    assert brute_force_gamma_t(cycle(6))[0] == 4
    assert brute_force_gamma_t(cycle(8))[0] == 4
    assert brute_force_gamma_t(cycle(11))[0] == 6


def test_gamma_t_disjoint_components():
    g = gr.disjoint_union(complete(4), complete(4), complete_bipartite(3, 3))
    assert brute_force_gamma_t(g)[0] == 6


def test_gamma_t_errors():
    with pytest.raises(InstanceTooLarge):
        brute_force_gamma_t(cycle(30))
    with pytest.raises(NoTotalDominatingSet):
        brute_force_gamma_t(Pseudograph(3, [(0, 1)]))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.sampled_from([8, 10, 12]))
def test_gamma_t_matches_enumeration_on_random_cubic(seed, n):
    g = gr.random_simple_regular(n, 3, random.Random(seed))
    size, best = brute_force_gamma_t(g)
    assert size == gamma_t_by_combinations(g)
    assert verify_tds(g, best)


# ---- girth


def test_girth_values():
    assert girth(petersen()) == girth_by_edge_removal(petersen()) == 5
    assert girth(cycle(9)) == 9
    assert girth(Pseudograph(3, [(0, 1), (1, 1), (1, 2)])) == 1
    assert girth(Pseudograph(2, [(0, 1), (0, 1)])) == 2
    assert girth(Pseudograph(4, [(0, 1), (1, 2), (1, 3)])) == math.inf
    assert girth(complete(4)) == 3
    assert girth(complete_bipartite(3, 3)) == 4


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.sampled_from([10, 16, 24]))
def test_girth_matches_edge_removal_oracle(seed, n):
    g = gr.random_simple_regular(n, 3, random.Random(seed))
    assert girth(g) == girth_by_edge_removal(g)


def test_random_simple_regular_is_simple():
    g = gr.random_simple_regular(50, 4, random.Random(8))
    assert g.is_simple() and g.is_regular(4)
