"""Decomposition into basic sets, and the certificates that back it."""

import dataclasses
import random

import pytest

from topodyn import (
    Certificate,
    Report,
    parse_report,
    periodic_density_certificate,
    permutation_from_cycles,
    sft_shift,
    spectral_decompose,
    symbol_graph_chain,
    torus_automorphism,
    transitivity_certificate,
)
from topodyn.spectral import CertificateError, WalkDemo
from topodyn.systems import _north_south

GOLDEN = sft_shift(("11", "10"), name="golden-mean")
TWO_BLOCK = sft_shift(
    ("110001", "110000", "000100", "000010", "001000", "001000"),
    name="two-block-sft",
)
CAT = torus_automorphism(((2, 1), (1, 1)), name="cat-map")


# ---------------------------------------------------------------------------
# the brute-force oracle: reachability by boolean closure, nothing shared
# with the library's SCC route


def _closure(size, allowed):
    reach = [[allowed(a, b) for b in range(size)] for a in range(size)]
    for _ in range(size):
        for a in range(size):
            row = reach[a]
            for b in range(size):
                if row[b]:
                    other = reach[b]
                    for c in range(size):
                        if other[c]:
                            row[c] = True
    return reach


def _oracle_basic_sets(system):
    reach = _closure(system.size, system.allowed)
    recurrent = {a for a in range(system.size) if reach[a][a]}
    seen, parts = set(), []
    for a in sorted(recurrent):
        if a in seen:
            continue
        part = {b for b in recurrent if reach[a][b] and reach[b][a]} | {a}
        seen |= part
        parts.append(frozenset(part))
    return recurrent, set(parts)


# ---------------------------------------------------------------------------
# exact symbolic decompositions


def test_two_block_decomposition_frozen():
    dec = spectral_decompose(TWO_BLOCK, seed=0)
    assert dec.exact and dec.finite_flag
    assert dec.component_count == 2
    assert {frozenset(bs.nodes) for bs in dec.basic_sets} == {
        frozenset({0, 1}), frozenset({2, 3, 4})
    }
    assert dec.recurrent_nodes == (0, 1, 2, 3, 4)  # symbol 5 is transient
    assert dec.validate(TWO_BLOCK) == []
    assert dec.to_report().exit_code == 0


def test_walk_demos_visit_their_targets():
    dec = spectral_decompose(TWO_BLOCK, seed=3)
    for bs in dec.basic_sets:
        assert bs.transitivity.kind == "transitivity"
        for demo in bs.transitivity.demos:
            assert demo.walk[0] == demo.x and demo.walk[-1] == demo.x
            assert demo.walk[demo.y_pos] == demo.y
            assert demo.traced.symbol_at(0) == demo.x
            assert demo.traced.symbol_at(demo.y_pos) == demo.y
        for demo in bs.periodic_density.demos:
            assert demo.traced.symbol_at(0) == demo.node


def test_random_sfts_match_bruteforce_oracle():
    rng = random.Random(99)
    for trial in range(12):
        size = rng.randint(2, 6)
        rows = [[rng.random() < 0.4 for _ in range(size)] for _ in range(size)]
        for i in range(size):  # every symbol needs an exit and an entry
            if not any(rows[i]):
                rows[i][rng.randrange(size)] = True
        for j in range(size):
            if not any(rows[i][j] for i in range(size)):
                rows[rng.randrange(size)][j] = True
        spec = tuple("".join("1" if v else "0" for v in row) for row in rows)
        system = sft_shift(spec, name=f"random-{trial}")
        recurrent, parts = _oracle_basic_sets(system)

        dec = spectral_decompose(system, seed=trial)
        assert set(dec.recurrent_nodes) == recurrent
        assert {frozenset(bs.nodes) for bs in dec.basic_sets} == parts
        assert dec.validate(system) == []


def test_decomposition_report_roundtrip():
    dec = spectral_decompose(GOLDEN, seed=1)
    text = dec.to_report().to_text()
    rep = parse_report(text)
    assert rep.header["basic_sets"] == "1"
    assert rep.header["exact"] == "True"
    assert "ladder-history" in rep.tables


# ---------------------------------------------------------------------------
# corrupted certificates must fail revalidation


def test_corrupted_walk_is_rejected():
    dec = spectral_decompose(TWO_BLOCK, seed=0)
    bs = dec.basic_sets[0]
    cert = bs.transitivity
    demo = cert.demos[0]
    wrong_walk = demo.walk[:-1] + (demo.walk[0] ^ 1,)
    broken = dataclasses.replace(demo, walk=wrong_walk)
    bad_cert = dataclasses.replace(cert, demos=(broken,) + cert.demos[1:])
    assert any("not closed" in msg for msg in bad_cert.revalidate(TWO_BLOCK))


def test_corrupted_traced_point_is_rejected():
    dec = spectral_decompose(TWO_BLOCK, seed=0)
    by_nodes = {frozenset(bs.nodes): bs for bs in dec.basic_sets}
    cert = by_nodes[frozenset({2, 3, 4})].transitivity
    demo = cert.demos[0]
    impostor = TWO_BLOCK.periodic_point(
        tuple(reversed(demo.walk[:-1]))
    ) if _admissible(TWO_BLOCK, tuple(reversed(demo.walk[:-1]))) else \
        TWO_BLOCK.periodic_point((2, 3, 4))
    if impostor == demo.traced:
        impostor = TWO_BLOCK.periodic_point((3, 4, 2))
    broken = dataclasses.replace(demo, traced=impostor)
    bad_cert = dataclasses.replace(cert, demos=(broken,) + cert.demos[1:])
    assert bad_cert.revalidate(TWO_BLOCK)


def _admissible(system, block):
    pairs = list(zip(block, block[1:])) + [(block[-1], block[0])]
    return all(system.allowed(a, b) for a, b in pairs)


def test_uncovered_node_is_rejected():
    dec = spectral_decompose(TWO_BLOCK, seed=0)
    slim = dec.basic_sets[0]
    pruned = dataclasses.replace(
        dec,
        basic_sets=(slim,),  # drop the other component entirely
    )
    failures = pruned.validate(TWO_BLOCK)
    assert any("cover" in msg for msg in failures)


def test_corrupted_lattice_cycle_is_rejected():
    dec = spectral_decompose(CAT, resolution=16, seed=0)
    cert = dec.basic_sets[0].periodic_density
    demo = next(d for d in cert.demos if d.cycle_length > 1)
    broken = dataclasses.replace(demo, cycle_length=demo.cycle_length + 1)
    bad_cert = dataclasses.replace(cert, demos=(broken,))
    failures = bad_cert.revalidate(CAT)
    assert any("does not close" in msg for msg in failures)


# ---------------------------------------------------------------------------
# finite systems


def test_three_cycle_decomposition():
    perm = permutation_from_cycles([("a", "b", "c")], name="three-cycle")
    dec = spectral_decompose(perm, seed=0)
    assert dec.exact
    assert dec.component_count == 1
    assert set(dec.basic_sets[0].nodes) == {"a", "b", "c"}
    assert dec.validate(perm) == []
    dens = dec.basic_sets[0].periodic_density
    assert all(d.cycle_length == 3 and d.gap == 0.0 for d in dens.demos)


def test_two_fixed_points_make_two_basic_sets():
    perm = permutation_from_cycles([("a",), ("b",)], name="two-fixed")
    dec = spectral_decompose(perm)
    assert dec.component_count == 2
    assert dec.validate(perm) == []


# ---------------------------------------------------------------------------
# torus grids


def test_cat_grid_decomposition_stabilizes():
    dec = spectral_decompose(CAT, resolution=32, seed=0)
    assert dec.component_count == 1
    assert len(dec.recurrent_nodes) == 32 * 32
    assert dec.stabilization_index is not None
    assert dec.stabilization_index <= 1
    assert dec.history[0] == (1024, 1)
    assert dec.history[1] == (1024, 1)
    assert dec.to_report().exit_code == 0


def test_cat_grid_certificates_revalidate():
    dec = spectral_decompose(CAT, resolution=16, seed=2, pairs=4)
    assert dec.validate(CAT) == []
    dens = dec.basic_sets[0].periodic_density
    assert dens.mode == "lattice-cycle"
    assert dens.params["resolution"] == 16
    assert all(d.gap == 0.0 for d in dens.demos)
    trans = dec.basic_sets[0].transitivity
    assert trans.mode == "metric-walk"
    for demo in trans.demos:
        assert len(demo.traced) == demo.period
        # stored loops are exact rational orbits
        for k in range(demo.period):
            z = CAT.forward(demo.traced[k])
            assert z == demo.traced[(k + 1) % demo.period]


# ---------------------------------------------------------------------------
# guards


def test_unsupported_system_raises():
    with pytest.raises(TypeError):
        spectral_decompose(_north_south())


def test_transitivity_needs_a_whole_scc():
    graph = symbol_graph_chain(GOLDEN)
    with pytest.raises(ValueError):
        transitivity_certificate(graph, [0], GOLDEN, E=None)
    with pytest.raises(ValueError):
        transitivity_certificate(graph, [], GOLDEN, E=None)


def test_symbol_graph_chain_mirrors_transitions():
    graph = symbol_graph_chain(TWO_BLOCK)
    assert graph.nodes == (0, 1, 2, 3, 4, 5)
    assert graph.adjacency[0] == (0, 1, 5)
    assert graph.adjacency[5] == (2,)


def test_density_certificate_needs_resolution_on_torus():
    with pytest.raises(ValueError):
        periodic_density_certificate(CAT, ((0.0, 0.0),), radii=(0.1,))
