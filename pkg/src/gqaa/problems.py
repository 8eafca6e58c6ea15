"""Benchmark problems: the 2-D trigonometric function and Taxicab searches.

A problem maps a ±1 genotype to a phenotype, scores it and says whether it
solves the task. Spins become bits via ``tau = (1 + sigma) / 2`` and every
field is read most-significant bit first.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from .ising import spins_to_bits

DEFAULT_PENALTY = 1e6
FUNCTION_THRESHOLDS = {1.0: 6.13503, 20.0: 6.23}
BRUTEFORCE_BUDGET = 10**8


class ProblemError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemSpec:
    """Black-box problem seen by both GA loops.

    ``batch`` optionally scores a whole ``(P, N)`` spin population at once and
    returns ``(fitness, solved)`` arrays; it must agree with the scalar path.
    """

    name: str
    genotype_length: int
    decode: Callable[[np.ndarray], Any]
    fitness: Callable[[Any], float]
    is_solution: Callable[[Any], bool]
    batch: Optional[Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]] = None

    def evaluate(self, population) -> tuple[np.ndarray, np.ndarray]:
        population = np.asarray(population)
        if population.ndim != 2 or population.shape[1] != self.genotype_length:
            raise ProblemError(
                f"population shape {population.shape} does not match "
                f"genotype length {self.genotype_length}"
            )
        if self.batch is not None:
            fit, solved = self.batch(population)
            return np.asarray(fit, dtype=float), np.asarray(solved, dtype=bool)
        phenotypes = [self.decode(row) for row in population]
        fit = np.array([self.fitness(p) for p in phenotypes], dtype=float)
        solved = np.array([bool(self.is_solution(p)) for p in phenotypes])
        return fit, solved


# ---------------------------------------------------------------------------
# fixed-point encoding


@dataclass(frozen=True)
class FixedPointEncoding:
    sign_bits: int = 1
    int_bits: int = 2
    frac_bits: int = 10

    def __post_init__(self):
        if self.sign_bits not in (0, 1):
            raise ProblemError("sign_bits must be 0 or 1")
        if self.int_bits < 0 or self.frac_bits < 0 or self.n_bits < 1:
            raise ProblemError("encoding needs at least one bit")

    @property
    def n_bits(self) -> int:
        return self.sign_bits + self.int_bits + self.frac_bits

    @property
    def magnitude_weights(self) -> np.ndarray:
        powers = np.arange(self.int_bits - 1, -self.frac_bits - 1, -1, dtype=float)
        return 2.0**powers


def decode_fixed_point_batch(bits, enc: FixedPointEncoding) -> np.ndarray:
    """Decode the last axis of ``bits`` (values 0/1)."""
    bits = np.asarray(bits)
    if bits.shape[-1] != enc.n_bits:
        raise ProblemError(f"expected {enc.n_bits} bits, got {bits.shape[-1]}")
    magnitude = bits[..., enc.sign_bits:] @ enc.magnitude_weights
    if enc.sign_bits:
        magnitude = np.where(bits[..., 0] == 1, -magnitude, magnitude)
    return magnitude


def decode_fixed_point(bits, enc: FixedPointEncoding = FixedPointEncoding()) -> float:
    """Sign-magnitude fixed point: ``(-1)**sign * (int + frac / 2**frac_bits)``."""
    return float(decode_fixed_point_batch(np.asarray(bits).reshape(-1), enc))


def encode_fixed_point(value: float, enc: FixedPointEncoding = FixedPointEncoding()) -> np.ndarray:
    """Bits of the representable value nearest to ``value`` (magnitude clipped)."""
    scale = 2**enc.frac_bits
    top = 2 ** (enc.int_bits + enc.frac_bits) - 1
    q = min(int(round(abs(value) * scale)), top)
    magnitude_bits = [(q >> k) & 1 for k in range(enc.int_bits + enc.frac_bits - 1, -1, -1)]
    sign = [1 if value < 0 and q else 0] if enc.sign_bits else []
    return np.array(sign + magnitude_bits, dtype=np.int8)


# ---------------------------------------------------------------------------
# 2-D function maximisation


def u_kappa(x, y, kappa):
    """``U_kappa(x, y) = (x(1-x) + y(1-y) + 12 cos(kappa x y) sin(2x + y)) / 2``.

    The overall factor of one half reproduces the known maxima
    ``U_1(0.68708, 0.170864) = 6.13506`` and ``U_20(0.488397, 0.642488) = 6.23257``.
    """
    return 0.5 * (x * (1 - x) + y * (1 - y) + 12.0 * np.cos(kappa * x * y) * np.sin(2 * x + y))


def function_problem(
    kappa: float = 1.0,
    threshold: float | None = None,
    enc: FixedPointEncoding = FixedPointEncoding(),
) -> ProblemSpec:
    """Maximise ``U_kappa`` over two fixed-point coordinates."""
    if threshold is None:
        try:
            threshold = FUNCTION_THRESHOLDS[float(kappa)]
        except KeyError:
            raise ProblemError(f"no default threshold for kappa={kappa}") from None
    nb = enc.n_bits

    def decode(spins):
        bits = spins_to_bits(spins)
        return (
            decode_fixed_point(bits[:nb], enc),
            decode_fixed_point(bits[nb:], enc),
        )

    def fitness(phenotype):
        return float(u_kappa(phenotype[0], phenotype[1], kappa))

    def is_solution(phenotype):
        return fitness(phenotype) > threshold

    def batch(population):
        bits = spins_to_bits(population)
        x = decode_fixed_point_batch(bits[:, :nb], enc)
        y = decode_fixed_point_batch(bits[:, nb:], enc)
        fit = u_kappa(x, y, kappa)
        return fit, fit > threshold

    return ProblemSpec(f"function-k{kappa:g}", 2 * nb, decode, fitness, is_solution, batch)


def encode_point(x: float, y: float, enc: FixedPointEncoding = FixedPointEncoding()) -> np.ndarray:
    """Spin genotype for the grid point nearest ``(x, y)``."""
    bits = np.concatenate([encode_fixed_point(x, enc), encode_fixed_point(y, enc)])
    return (2 * bits - 1).astype(np.int8)


# ---------------------------------------------------------------------------
# Taxicab numbers


@dataclass(frozen=True)
class TaxicabSpec:
    """``(k, n, m)`` search: ``n`` terms on the left, ``m`` on the right."""

    k: int = 3
    n: int = 6
    m: int = 6
    bits_per_integer: int = 5
    value_offset: int = 0

    @property
    def genotype_length(self) -> int:
        return self.bits_per_integer * (self.n + self.m)

    @property
    def max_value(self) -> int:
        return self.value_offset + 2**self.bits_per_integer - 1


def taxicab_fitness(a, b, penalty_weight: float = DEFAULT_PENALTY, k: int = 3) -> float:
    """``-(sum a**k - sum b**k)**2 - penalty * #{(i, j): a_i == b_j}``."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    diff = int(np.sum(a**k)) - int(np.sum(b**k))
    collisions = int(np.sum(a[:, None] == b[None, :]))
    return -float(diff * diff) - penalty_weight * collisions


def verify_taxicab(a, b, k: int = 3) -> bool:
    """Equal power sums and no value shared between the two sides."""
    a = [int(v) for v in a]
    b = [int(v) for v in b]
    return sum(v**k for v in a) == sum(v**k for v in b) and not set(a) & set(b)


def decode_taxicab(spins, spec: TaxicabSpec) -> tuple[np.ndarray, np.ndarray]:
    ints = _decode_integers(np.asarray(spins)[None, :], spec)[0]
    return ints[: spec.n], ints[spec.n:]


def encode_taxicab(a, b, spec: TaxicabSpec) -> np.ndarray:
    values = [int(v) - spec.value_offset for v in list(a) + list(b)]
    w = spec.bits_per_integer
    if any(v < 0 or v >= 2**w for v in values):
        raise ProblemError(f"values must fit in {w} bits after the offset")
    bits = [(v >> s) & 1 for v in values for s in range(w - 1, -1, -1)]
    return (2 * np.array(bits, dtype=np.int8) - 1).astype(np.int8)


def _decode_integers(population, spec: TaxicabSpec) -> np.ndarray:
    w = spec.bits_per_integer
    bits = spins_to_bits(population).reshape(population.shape[0], spec.n + spec.m, w)
    weights = 1 << np.arange(w - 1, -1, -1, dtype=np.int64)
    return bits.astype(np.int64) @ weights + spec.value_offset


def taxicab_problem(spec: TaxicabSpec = TaxicabSpec(), penalty_weight: float = DEFAULT_PENALTY) -> ProblemSpec:
    k = spec.k

    def decode(spins):
        return decode_taxicab(spins, spec)

    def fitness(phenotype):
        return taxicab_fitness(phenotype[0], phenotype[1], penalty_weight, k)

    def is_solution(phenotype):
        return verify_taxicab(phenotype[0], phenotype[1], k)

    def batch(population):
        ints = _decode_integers(population, spec)
        a, b = ints[:, : spec.n], ints[:, spec.n:]
        diff = (a**k).sum(axis=1) - (b**k).sum(axis=1)
        collisions = (a[:, :, None] == b[:, None, :]).sum(axis=(1, 2))
        fit = -(diff.astype(float) ** 2) - penalty_weight * collisions
        return fit, (diff == 0) & (collisions == 0)

    return ProblemSpec(
        f"taxicab-{spec.k}-{spec.n}-{spec.m}", spec.genotype_length, decode, fitness, is_solution, batch
    )


def taxicab_bruteforce(k: int, n: int, m: int, max_value: int) -> list[tuple[int, tuple[int, ...], tuple[int, ...]]]:
    """Every ``(sum, left, right)`` with terms in ``1..max_value``.

    Sides are sorted; when ``n == m`` only the ordering ``left < right`` is
    kept. Sides are matched through a table of power sums.
    """
    sizes = math.comb(max_value + n - 1, n) + math.comb(max_value + m - 1, m)
    if sizes > BRUTEFORCE_BUDGET:
        raise ProblemError(f"search of {sizes} tuples exceeds budget {BRUTEFORCE_BUDGET}")
    values = range(1, max_value + 1)
    right_by_sum = defaultdict(list)
    for combo in itertools.combinations_with_replacement(values, m):
        right_by_sum[sum(v**k for v in combo)].append(combo)
    found = []
    for left in itertools.combinations_with_replacement(values, n):
        total = sum(v**k for v in left)
        for right in right_by_sum.get(total, ()):
            if n == m and not left < right:
                continue
            if set(left) & set(right):
                continue
            found.append((total, left, right))
    found.sort()
    return found
