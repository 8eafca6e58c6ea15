"""Classical Ising model: data type, energy, classical-genotype, brute-force ground state.

Spin configurations are plain numpy arrays of ``int8`` with entries in {-1, +1}.
Couplings follow the convention that a negative ``J`` is ferromagnetic
(aligned spins lower the energy).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

MAX_BRUTEFORCE_SPINS = 24


class IsingError(ValueError):
    """Raised when an Ising object or operation violates its contract."""


def as_spins(values, n_spins: int | None = None) -> np.ndarray:
    """Validate ``values`` as a ±1 spin vector and return it as ``int8``."""
    spins = np.asarray(values)
    if spins.ndim != 1:
        raise IsingError(f"spin configuration must be 1-D, got shape {spins.shape}")
    if spins.size and not np.all((spins == 1) | (spins == -1)):
        raise IsingError("spin entries must be exactly -1 or +1")
    if n_spins is not None and spins.size != n_spins:
        raise IsingError(f"expected {n_spins} spins, got {spins.size}")
    return spins.astype(np.int8)


def spins_to_bits(spins) -> np.ndarray:
    """Map spins to binary digits via tau = (1 + sigma) / 2."""
    return ((np.asarray(spins) + 1) // 2).astype(np.int8)


def bits_to_spins(bits) -> np.ndarray:
    return (2 * np.asarray(bits, dtype=np.int8) - 1).astype(np.int8)


@dataclass(frozen=True, eq=False)
class IsingProblem:
    """Linear biases ``h`` and pairwise couplings ``J`` over indexed spins.

    ``J`` maps an unordered spin pair to its coupling. Keys are normalised so
    that ``i < j``; giving both orientations of a pair or a self-pair raises.
    """

    h: np.ndarray
    J: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float).reshape(-1)
        n = h.size
        couplings: dict[tuple[int, int], float] = {}
        for (i, j), value in dict(self.J).items():
            i, j = int(i), int(j)
            if i == j:
                raise IsingError(f"self-coupling ({i}, {i}) is not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise IsingError(f"coupling ({i}, {j}) out of range for {n} spins")
            key = (i, j) if i < j else (j, i)
            if key in couplings:
                raise IsingError(f"pair {key} given more than once")
            couplings[key] = float(value)
        h.setflags(write=False)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "J", couplings)
        if couplings:
            pairs = np.array(list(couplings), dtype=np.int64)
            values = np.array(list(couplings.values()), dtype=float)
        else:
            pairs = np.empty((0, 2), dtype=np.int64)
            values = np.empty(0, dtype=float)
        pairs.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "_pairs", pairs)
        object.__setattr__(self, "_values", values)

    @property
    def n_spins(self) -> int:
        return self.h.size

    @property
    def edge_pairs(self) -> np.ndarray:
        """``(E, 2)`` array of coupled pairs with ``i < j``."""
        return self._pairs

    @property
    def edge_values(self) -> np.ndarray:
        return self._values

    def with_h(self, h) -> "IsingProblem":
        """Same couplings, new biases. Skips re-validating ``J``."""
        h = np.asarray(h, dtype=float).reshape(-1)
        if h.size != self.n_spins:
            raise IsingError(f"expected {self.n_spins} biases, got {h.size}")
        new = object.__new__(IsingProblem)
        h = h.copy()
        h.setflags(write=False)
        object.__setattr__(new, "h", h)
        object.__setattr__(new, "J", self.J)
        object.__setattr__(new, "_pairs", self._pairs)
        object.__setattr__(new, "_values", self._values)
        return new

    def neighbours(self):
        """CSR adjacency ``(indptr, indices, values)`` with both orientations."""
        n = self.n_spins
        i, j = self._pairs[:, 0], self._pairs[:, 1]
        rows = np.concatenate([i, j])
        cols = np.concatenate([j, i])
        vals = np.concatenate([self._values, self._values])
        order = np.argsort(rows, kind="stable")
        rows, cols, vals = rows[order], cols[order], vals[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        return np.cumsum(indptr), cols.astype(np.int64), vals

    def components(self) -> list[np.ndarray]:
        """Connected components of the coupling graph, each a sorted index array."""
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        n = self.n_spins
        if n == 0:
            return []
        i, j = self._pairs[:, 0], self._pairs[:, 1]
        graph = coo_matrix((np.ones(i.size), (i, j)), shape=(n, n))
        count, labels = connected_components(graph, directed=False)
        return [np.flatnonzero(labels == c) for c in range(count)]

    def __repr__(self):
        return f"IsingProblem(n_spins={self.n_spins}, n_couplings={len(self.J)})"


def energy(problem: IsingProblem, config) -> float:
    """Evaluate ``sum_l h_l s_l + sum_{l<m} J_lm s_l s_m``."""
    spins = np.asarray(config)
    if spins.ndim != 1 or spins.size != problem.n_spins:
        raise IsingError(
            f"configuration of length {spins.size} does not match "
            f"{problem.n_spins} spins"
        )
    spins = spins.astype(float)
    pairs = problem.edge_pairs
    e = float(problem.h @ spins)
    if pairs.size:
        e += float(problem.edge_values @ (spins[pairs[:, 0]] * spins[pairs[:, 1]]))
    return e


def energies(problem: IsingProblem, configs) -> np.ndarray:
    """Vectorised :func:`energy` over the rows of ``configs``."""
    spins = np.asarray(configs, dtype=float)
    if spins.ndim != 2 or spins.shape[1] != problem.n_spins:
        raise IsingError(f"expected (k, {problem.n_spins}) configs, got {spins.shape}")
    pairs = problem.edge_pairs
    e = spins @ problem.h
    if pairs.size:
        e = e + (spins[:, pairs[:, 0]] * spins[:, pairs[:, 1]]) @ problem.edge_values
    return e


def classical_genotype(h, tie_rng: np.random.Generator | None = None) -> np.ndarray:
    """Spins the biases alone would enforce: ``-sign(h)``.

    Zero biases are resolved by a fair coin from ``tie_rng``.
    """
    h = np.asarray(h, dtype=float)
    spins = -np.sign(h).astype(np.int8)
    zeros = spins == 0
    if np.any(zeros):
        rng = tie_rng if tie_rng is not None else np.random.default_rng()
        spins[zeros] = rng.choice(np.array([-1, 1], dtype=np.int8), size=int(zeros.sum()))
    return spins


def index_to_spins(index: np.ndarray, n_spins: int) -> np.ndarray:
    """Configurations for integer indices; spin 0 is the most significant bit."""
    shifts = np.arange(n_spins - 1, -1, -1, dtype=np.int64)
    bits = (np.asarray(index, dtype=np.int64)[..., None] >> shifts) & 1
    return bits_to_spins(bits)


def ground_state_bruteforce(problem: IsingProblem) -> tuple[np.ndarray, float]:
    """Exhaustive minimum over all ``2**n`` configurations.

    Ties go to the lowest index in the MSB-first encoding of ``tau=(1+s)/2``.
    """
    n = problem.n_spins
    if n > MAX_BRUTEFORCE_SPINS:
        raise IsingError(f"brute force refused for {n} > {MAX_BRUTEFORCE_SPINS} spins")
    if n == 0:
        return np.empty(0, dtype=np.int8), 0.0
    best_index, best_energy = -1, np.inf
    chunk = 1 << min(n, 16)
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        e = energies(problem, index_to_spins(idx, n))
        k = int(np.argmin(e))
        if e[k] < best_energy:
            best_index, best_energy = int(idx[k]), float(e[k])
    return index_to_spins(np.array(best_index), n), best_energy
