import random

import pytest

from topodyn.chains import (
    ChainGraph,
    build_chain_graph,
    chain_components,
    chain_recurrent_set,
    component_report,
    is_chain,
    nonwandering_set,
    strong_chain_reachable,
    strong_chain_recurrent_set,
    torus_grid_graph,
)
from topodyn.entourage import finite_relation, gauge_entourage, metric_ball
from topodyn.systems import (
    catalog,
    harmonic_points,
    permutation_from_cycles,
    sft_shift,
    torus_automorphism,
    torus_grid,
)

CAT = torus_automorphism(((2, 1), (1, 1)), name="cat-map")


def reach_closure(adjacency):
    """Boolean transitive closure by repeated squaring-free relaxation.

    Deliberately naive; this is the oracle the SCC machinery is checked
    against, so it shares no code with it.
    """
    n = len(adjacency)
    reach = [[bool(v) for v in row] for row in adjacency]
    for _ in range(n):
        for a in range(n):
            for c in range(n):
                if reach[a][c]:
                    for b in range(n):
                        if reach[c][b]:
                            reach[a][b] = True
    return reach


def oracle_partition(adjacency):
    """Cycle-containing mutual-reachability classes, straight from the
    definitions."""
    n = len(adjacency)
    reach = reach_closure(adjacency)
    recurrent = [a for a in range(n) if reach[a][a]]
    classes = set()
    for a in recurrent:
        members = frozenset(
            b for b in recurrent if reach[a][b] and reach[b][a]
        ) | {a}
        classes.add(frozenset(members))
    return frozenset(classes), frozenset(recurrent)


def random_digraph(rng, n):
    return tuple(
        tuple(1 if rng.random() < 0.25 else 0 for _ in range(n))
        for _ in range(n)
    )


def as_successor_lists(matrix):
    return tuple(
        tuple(j for j, v in enumerate(row) if v) for row in matrix
    )


def test_scc_matches_reachability_oracle():
    rng = random.Random(42)
    for trial in range(60):
        n = rng.randint(1, 12)
        matrix = random_digraph(rng, n)
        graph = ChainGraph(nodes=tuple(range(n)),
                           adjacency=as_successor_lists(matrix),
                           entourage_id="test")
        classes, recurrent = oracle_partition(matrix)
        assert graph.recurrent_indices() == recurrent, trial
        got = frozenset(
            frozenset(c) for c in graph.scc()
            if any(i in recurrent for i in c)
        )
        assert got == classes, trial


def test_scc_handles_long_path_iteratively():
    # a path of 30000 nodes would blow the recursion limit if Tarjan
    # recursed; the iterative form must cope
    n = 30000
    graph = ChainGraph(
        nodes=tuple(range(n)),
        adjacency=tuple((i + 1,) if i < n - 1 else () for i in range(n)),
        entourage_id="path",
    )
    assert graph.recurrent_indices() == frozenset()
    assert len(graph.scc()) == n


def test_build_chain_graph_matches_definition():
    nodes = torus_grid(6)
    D = metric_ball(CAT, 0.21)
    graph = build_chain_graph(CAT, nodes, D)
    for i, u in enumerate(nodes):
        fu = CAT.forward(u)
        for j, v in enumerate(nodes):
            want = D.accepts(fu, v)
            assert graph.has_edge(i, j) == want, (u, v)


def test_torus_grid_graph_agrees_with_generic_builder():
    # the integer-arithmetic fast path and the float path must produce the
    # same edges when the radius avoids exact grid distances
    n, delta = 8, 0.13
    fast = torus_grid_graph(CAT, n, delta)
    slow = build_chain_graph(CAT, torus_grid(n), metric_ball(CAT, delta))
    assert fast.nodes == slow.nodes
    assert fast.adjacency == slow.adjacency


def test_is_chain():
    D = metric_ball(CAT, 0.05)
    x = (0.2, 0.7)
    seq = [x, CAT.forward(x), CAT.forward(CAT.forward(x))]
    assert is_chain(CAT, seq, D)
    seq[2] = ((seq[2][0] + 0.2) % 1.0, seq[2][1])
    assert not is_chain(CAT, seq, D)


def test_two_block_symbol_recurrence():
    sft = sft_shift(("110001", "110000", "000100", "000010", "001000",
                     "001000"), name="two-block-sft")
    graph = ChainGraph(
        nodes=tuple(range(6)),
        adjacency=sft.symbol_graph(),
        entourage_id="symbol-transitions",
    )
    assert chain_recurrent_set(graph) == frozenset({0, 1, 2, 3, 4})


def test_chain_components_ladder_stabilization():
    graphs = [torus_grid_graph(CAT, 16, r) for r in (0.25, 0.125, 0.0625)]
    ccs = chain_components(graphs)
    assert len(ccs.recurrent_nodes) == 256
    assert ccs.stabilization_index == 1
    assert ccs.history[0] == (256, 1)
    assert ccs.history[1] == (256, 1)
    # .components accumulates every ladder step; the partition at the
    # stabilized scale comes from truncating the ladder there
    stabilized = chain_components(graphs[:ccs.stabilization_index + 1])
    assert len(stabilized.components) == 1


def test_chain_components_needs_shared_nodes():
    g1 = torus_grid_graph(CAT, 8, 0.2)
    g2 = torus_grid_graph(CAT, 16, 0.2)
    with pytest.raises(ValueError):
        chain_components([g1, g2])


def test_nonwandering_three_cycle():
    perm = permutation_from_cycles([("a", "b", "c")])
    probe = finite_relation({(x, x) for x in perm.points},
                            space_id=perm.space_id, points=perm.points)
    omega = nonwandering_set(perm, perm.points, probe, horizon=4)
    assert omega == frozenset(perm.points)


def test_nonwandering_torus_fast_path_matches_direct():
    nodes = torus_grid(8)
    probe = metric_ball(CAT, 0.26)
    fast = nonwandering_set(CAT, nodes, probe, horizon=12)

    def direct():
        out = []
        for x in nodes:
            near = [u for u in nodes if probe.accepts(x, u)]
            hit = False
            for u in near:
                z = u
                for _ in range(12):
                    z = CAT.forward(z)
                    if probe.accepts(x, z):
                        hit = True
                        break
                if hit:
                    break
            if hit:
                out.append(x)
        return frozenset(out)

    assert fast == direct()


def test_nonwandering_rejects_zero_horizon():
    with pytest.raises(ValueError):
        nonwandering_set(CAT, torus_grid(4), metric_ball(CAT, 0.3), horizon=0)


# ---------------------------------------------------------------------------
# strong chain recurrence


def test_harmonic_neighbor_jumps_blocked():
    """The identity on the harmonic points is strong chain recurrent at
    every point, but no point reaches a different one: each jump must beat
    the local gauge, and the gauge shrinks with the gaps."""
    h = harmonic_points()
    samples = h.points(30)
    gauge = lambda x: 0.4 * h.gap_after(h.index_of(x))
    assert strong_chain_recurrent_set(h, samples, gauge) == frozenset(samples)
    assert not strong_chain_reachable(h, samples[0], samples[1], gauge,
                                      samples)
    assert strong_chain_reachable(h, samples[3], samples[3], gauge, samples)


def test_strong_chains_cross_when_gauge_is_generous():
    h = harmonic_points()
    samples = h.points(10)
    gauge = lambda x: 1.5  # larger than every gap in the sample range
    assert strong_chain_reachable(h, samples[0], samples[5], gauge, samples)


def test_gauge_graph_equals_strong_chains_on_a_seeded_mix():
    # two implementations of the same definition: edge iff the jump lands
    # within the gauge read at the arrival image
    ns = catalog()["north-south"].build()
    rng = random.Random(13)
    samples = tuple(sorted(rng.uniform(-1.0, 1.0) for _ in range(40)))
    gauge = lambda x: 0.04 + 0.03 * abs(x)
    D = gauge_entourage(ns, gauge)
    graph = build_chain_graph(ns, samples, D)
    via_graph = chain_recurrent_set(graph)
    direct = strong_chain_recurrent_set(ns, samples, gauge)
    assert via_graph == direct


def test_component_report_renders():
    graphs = [torus_grid_graph(CAT, 8, r) for r in (0.25, 0.125)]
    ccs = chain_components(graphs)
    rep = component_report(CAT, ccs)
    text = rep.to_text()
    assert "recurrent" in text and "[table" in text
