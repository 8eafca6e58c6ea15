"""Polyandric coupling graphs over rank positions and their population expansion.

A column graph couples rank positions ``0..P-1`` (``P-1`` is the fittest).
The same graph is repeated in every allele column when the population Ising
model is assembled, so there are never couplings across alleles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .ising import IsingProblem

ISLANDS = "islands"
NEAREST_NEIGHBOR = "nearest-neighbor"
NO_TOPOLOGY = "none"
TOPOLOGIES = (ISLANDS, NEAREST_NEIGHBOR, NO_TOPOLOGY)


class TopologyError(ValueError):
    pass


@dataclass(frozen=True)
class ColumnGraph:
    n_nodes: int
    edges: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (i, j), v in dict(self.edges).items():
            i, j = int(i), int(j)
            if i == j:
                raise TopologyError(f"self-edge at node {i}")
            if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
                raise TopologyError(f"edge ({i}, {j}) outside {self.n_nodes} nodes")
            key = (min(i, j), max(i, j))
            if key in clean:
                raise TopologyError(f"edge {key} given twice")
            clean[key] = float(v)
        object.__setattr__(self, "edges", clean)

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class PolyandryConfig:
    """Parameters of the islands topology.

    ``kappa`` is the hub coupling from the fittest rank position and must be
    attractive (``<= 0``).
    """

    base_j: float = 0.07
    rho: float = 0.5
    rho_prime: float = 0.064
    kappa: float = -0.15
    island_size: int = 5
    seed: int = 0
    topology: str = ISLANDS

    def __post_init__(self):
        if self.base_j <= 0:
            raise TopologyError("base_j must be positive")
        if not (0 <= self.rho <= 1 and 0 <= self.rho_prime <= 1):
            raise TopologyError("rho and rho_prime must lie in [0, 1]")
        if self.kappa > 0:
            raise TopologyError("kappa must be <= 0 (attractive)")
        if self.island_size < 2:
            raise TopologyError("island_size must be at least 2")
        if self.topology not in TOPOLOGIES:
            raise TopologyError(f"unknown topology {self.topology!r}")

    def to_dict(self):
        return asdict(self)


def build_nearest_neighbor(P: int, base_j: float) -> ColumnGraph:
    if P < 2:
        raise TopologyError("nearest-neighbour chain needs P >= 2")
    return ColumnGraph(P, {(i, i + 1): -base_j for i in range(P - 1)})


def hub_count(P: int, rho_prime: float) -> int:
    # guard against ceil(4.000000001)
    return min(P - 1, math.ceil(rho_prime * P - 1e-9))


def build_islands(P: int, cfg: PolyandryConfig) -> ColumnGraph:
    """Complete islands over consecutive rank positions plus hub edges.

    Each within-island edge is repulsive (``+base_j``) with probability
    ``rho``, otherwise attractive. Hub edges of strength ``kappa`` join the
    fittest position ``P-1`` to ``ceil(rho_prime * P)`` distinct other
    positions, overriding any island edge already there.
    """
    if cfg.island_size > P:
        raise TopologyError(f"island_size {cfg.island_size} exceeds P={P}")
    rng = np.random.default_rng(cfg.seed)
    edges: dict[tuple[int, int], float] = {}
    for start in range(0, P, cfg.island_size):
        members = range(start, min(start + cfg.island_size, P))
        for a in members:
            for b in members:
                if a < b:
                    repulsive = rng.random() < cfg.rho
                    edges[(a, b)] = cfg.base_j if repulsive else -cfg.base_j
    n_hubs = hub_count(P, cfg.rho_prime)
    if n_hubs:
        targets = rng.choice(P - 1, size=n_hubs, replace=False)
        for t in sorted(int(x) for x in targets):
            edges[(t, P - 1)] = cfg.kappa
    return ColumnGraph(P, edges)


def build_column(P: int, cfg: PolyandryConfig | None) -> ColumnGraph:
    """Column graph for a config; ``None`` or topology ``none`` gives no edges."""
    if cfg is None or cfg.topology == NO_TOPOLOGY:
        return ColumnGraph(P, {})
    if cfg.topology == NEAREST_NEIGHBOR:
        return build_nearest_neighbor(P, cfg.base_j)
    return build_islands(P, cfg)


def load_edge_list(path, n_nodes: int) -> ColumnGraph:
    """Read ``i j value`` lines (``#`` comments allowed) into a column graph."""
    edges = {}
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        i, j, v = line.replace(",", " ").split()
        edges[(int(i), int(j))] = float(v)
    return ColumnGraph(n_nodes, edges)


def population_index(i, allele, N: int):
    return i * N + allele


def expand_to_population(column: ColumnGraph, N: int, h_matrix) -> IsingProblem:
    """Population Ising model: spin ``(i, l)`` is index ``i*N + l``."""
    h = np.asarray(h_matrix, dtype=float)
    if h.ndim != 2 or h.shape != (column.n_nodes, N):
        raise TopologyError(
            f"h_matrix shape {h.shape} does not match ({column.n_nodes}, {N})"
        )
    couplings = {}
    for (i, j), v in column.edges.items():
        for allele in range(N):
            couplings[(i * N + allele, j * N + allele)] = v
    return IsingProblem(h.reshape(-1), couplings)
