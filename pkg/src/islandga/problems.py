"""Benchmark fitness landscapes: the block-deceptive MMDP and the P-Peaks generator.

Both problems expose the same evaluation contract (``evaluate``, ``length``,
``optimum``) so the GA engine stays problem-agnostic.
"""

from __future__ import annotations

import os
import random
from typing import Sequence

from .bitgenome import Genotype, random_genotype

# Fitness of one 6-bit MMDP block by unitation (number of ones in the block).
# Bimodal with the global optima at unitation 0 and 6 and a deceptive local
# attractor at unitation 3.
MMDP_SUBFITNESS = (1.0, 0.0, 0.360384, 0.640576, 0.360384, 0.0, 1.0)

# Same table in exact integer micro-units; block sums are accumulated as ints
# and divided once, so a genotype's fitness does not depend on block order.
_SUBFITNESS_MICRO = (1_000_000, 0, 360_384, 640_576, 360_384, 0, 1_000_000)
_BLOCK_MICRO = tuple(_SUBFITNESS_MICRO[block.bit_count()] for block in range(64))
_MICRO = 1_000_000.0


def mmdp_subfitness(unitation: int) -> float:
    """Fitness contribution of a single 6-bit block with the given unitation."""
    if not 0 <= unitation <= 6:
        raise ValueError(f"unitation must be in 0..6, got {unitation}")
    return MMDP_SUBFITNESS[unitation]


class MmdpProblem:
    """Sum of k deceptive 6-bit block subfunctions; the optimum value is k."""

    __slots__ = ("k", "length", "optimum", "_shifts")

    def __init__(self, k: int):
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = k
        self.length = 6 * k
        self.optimum = float(k)
        self._shifts = tuple(range(0, self.length, 6))

    def evaluate(self, genotype: Genotype) -> float:
        if genotype.length != self.length:
            raise ValueError(f"genotype length {genotype.length} != {self.length}")
        bits = genotype.bits
        micro = 0
        for shift in self._shifts:
            micro += _BLOCK_MICRO[(bits >> shift) & 63]
        return micro / _MICRO

    def __repr__(self) -> str:
        return f"MmdpProblem(k={self.k})"


class PPeaksProblem:
    """Nearest-peak similarity landscape over P random N-bit peak strings.

    Fitness is the fraction of bits shared with the nearest peak, so every
    peak scores exactly 1.0 and all values lie in [0, 1].
    """

    __slots__ = ("peaks", "length", "optimum", "_peak_bits")

    def __init__(self, peaks: Sequence[Genotype]):
        if not peaks:
            raise ValueError("a P-Peaks instance needs at least one peak")
        length = peaks[0].length
        if any(p.length != length for p in peaks):
            raise ValueError("all peaks must share one length")
        self.peaks = tuple(peaks)
        self.length = length
        self.optimum = 1.0
        self._peak_bits = tuple(p.bits for p in peaks)

    @classmethod
    def generate(cls, peaks: int, length: int, rng: random.Random) -> "PPeaksProblem":
        """Draw P independent uniform random N-bit peaks from ``rng``."""
        if peaks < 1:
            raise ValueError(f"peak count must be >= 1, got {peaks}")
        if length < 1:
            raise ValueError(f"bit length must be >= 1, got {length}")
        return cls([random_genotype(length, rng) for _ in range(peaks)])

    def nearest_peak_distance(self, genotype: Genotype) -> int:
        if genotype.length != self.length:
            raise ValueError(f"genotype length {genotype.length} != {self.length}")
        bits = genotype.bits
        best = self.length
        for peak in self._peak_bits:
            d = (bits ^ peak).bit_count()
            if d < best:
                best = d
                if d == 0:
                    break
        return best

    def evaluate(self, genotype: Genotype) -> float:
        return (self.length - self.nearest_peak_distance(genotype)) / self.length

    def dump(self, path: str | os.PathLike) -> None:
        """Write the instance as text: a "P N" header then one peak per line."""
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"{len(self.peaks)} {self.length}\n")
            for peak in self.peaks:
                fh.write(peak.to01() + "\n")

    @classmethod
    def load(cls, path: str | os.PathLike) -> "PPeaksProblem":
        with open(path, "r", encoding="ascii") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"malformed P-Peaks header in {path}")
            count, length = int(header[0]), int(header[1])
            peaks = [Genotype.from01(fh.readline().strip()) for _ in range(count)]
        if any(p.length != length for p in peaks):
            raise ValueError(f"peak length disagrees with header in {path}")
        return cls(peaks)

    def __repr__(self) -> str:
        return f"PPeaksProblem(P={len(self.peaks)}, N={self.length})"
