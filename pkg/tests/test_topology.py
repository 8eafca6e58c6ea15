import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gqaa.ising import IsingProblem, energy
from gqaa.topology import (
    ColumnGraph,
    PolyandryConfig,
    TopologyError,
    build_column,
    build_islands,
    build_nearest_neighbor,
    expand_to_population,
    hub_count,
    load_edge_list,
    population_index,
)


def test_nearest_neighbor_chain():
    g = build_nearest_neighbor(4, 0.07)
    assert g.edges == {(0, 1): -0.07, (1, 2): -0.07, (2, 3): -0.07}
    with pytest.raises(TopologyError):
        build_nearest_neighbor(1, 0.07)


def test_table_values_give_two_hubs():
    cfg = PolyandryConfig(base_j=0.07, rho=0.5, rho_prime=0.064, kappa=-0.15, seed=0)
    g = build_islands(30, cfg)
    hubs = {k: v for k, v in g.edges.items() if 29 in k and v == -0.15}
    assert hub_count(30, 0.064) == 2
    assert len(hubs) == 2


def test_islands_structure():
    cfg = PolyandryConfig(rho_prime=0.0, island_size=4, seed=3)
    g = build_islands(10, cfg)
    # islands {0..3}, {4..7}, {8, 9}: 6 + 6 + 1 edges
    assert len(g) == 13
    for i, j in g.edges:
        assert i // 4 == j // 4
    assert set(np.abs(list(g.edges.values()))) == {cfg.base_j}


def test_rho_zero_all_attractive():
    g = build_islands(20, PolyandryConfig(rho=0.0, rho_prime=0.0))
    assert all(v < 0 for v in g.edges.values())


def test_builder_is_deterministic_in_seed():
    cfg = PolyandryConfig(seed=42)
    assert build_islands(70, cfg).edges == build_islands(70, cfg).edges
    other = build_islands(70, PolyandryConfig(seed=43)).edges
    assert other != build_islands(70, cfg).edges


def test_repulsive_fraction_converges_to_rho():
    counts = []
    for seed in range(200):
        g = build_islands(30, PolyandryConfig(rho=0.3, rho_prime=0.0, seed=seed))
        counts.extend(v > 0 for v in g.edges.values())
    counts = np.array(counts)
    assert abs(counts.mean() - 0.3) < 4 * np.sqrt(0.3 * 0.7 / counts.size)


def test_hub_targets_distinct_and_weaker():
    g = build_islands(70, PolyandryConfig(rho_prime=0.2, kappa=-0.3, seed=1))
    hubs = [k for k, v in g.edges.items() if v == -0.3]
    assert len(hubs) == hub_count(70, 0.2) == 14
    assert all(j == 69 and i < 69 for i, j in hubs)


def test_config_validation():
    with pytest.raises(TopologyError):
        PolyandryConfig(kappa=0.1)
    with pytest.raises(TopologyError):
        PolyandryConfig(island_size=1)
    with pytest.raises(TopologyError):
        build_islands(3, PolyandryConfig(island_size=5))
    with pytest.raises(TopologyError):
        ColumnGraph(3, {(0, 0): 1.0})
    with pytest.raises(TopologyError):
        ColumnGraph(3, {(0, 1): 1.0, (1, 0): 1.0})


def test_build_column_none():
    assert len(build_column(10, None)) == 0
    assert len(build_column(10, PolyandryConfig(topology="none"))) == 0
    assert len(build_column(10, PolyandryConfig(topology="nearest-neighbor"))) == 9


def test_load_edge_list(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("# custom\n0 1 -0.1\n1, 2, 0.2\n\n")
    g = load_edge_list(path, 3)
    assert g.edges == {(0, 1): -0.1, (1, 2): 0.2}


def test_expand_indexing_and_shape():
    g = ColumnGraph(3, {(0, 2): -0.5})
    h = np.arange(12, dtype=float).reshape(3, 4)
    p = expand_to_population(g, 4, h)
    assert p.n_spins == 12
    assert p.h[population_index(2, 1, 4)] == h[2, 1]
    assert p.J == {(a, 8 + a): -0.5 for a in range(4)}
    with pytest.raises(TopologyError):
        expand_to_population(g, 5, h)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.integers(2, 12), st.integers(1, 6))
def test_components_stay_within_allele_columns(seed, P, N):
    cfg = PolyandryConfig(island_size=min(P, 3), rho_prime=0.3, seed=seed)
    p = expand_to_population(build_islands(P, cfg), N, np.zeros((P, N)))
    for comp in p.components():
        assert len(set(int(s) % N for s in comp)) == 1


def test_population_energy_is_sum_of_column_energies():
    rng = np.random.default_rng(0)
    for _ in range(25):
        P, N = 4, 4
        # dyadic values keep every partial sum exact, so equality is exact
        g = ColumnGraph(P, {(i, j): rng.integers(-16, 17) / 8 for i in range(P)
                            for j in range(i + 1, P) if rng.random() < 0.6})
        h = rng.integers(-16, 17, size=(P, N)) / 8
        sigma = rng.choice([-1, 1], size=(P, N))
        full = energy(expand_to_population(g, N, h), sigma.reshape(-1))
        cols = sum(energy(IsingProblem(h[:, l], g.edges), sigma[:, l]) for l in range(N))
        assert full == cols
