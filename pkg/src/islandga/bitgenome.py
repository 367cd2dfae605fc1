"""Fixed-length bit-string genotypes: construction, Hamming distance, consensus.

Alleles are packed into a single Python int; position 0 is the most
significant bit, matching the '0'/'1' text serialization used in logs and
problem files.
"""

from __future__ import annotations

import random
from typing import Iterable


class Genotype:
    """An immutable string of 0/1 alleles with a fixed length."""

    __slots__ = ("length", "bits")

    def __init__(self, length: int, bits: int):
        if length < 1:
            raise ValueError(f"genotype length must be >= 1, got {length}")
        if bits < 0 or bits >> length:
            raise ValueError(f"bit pattern does not fit in {length} positions")
        self.length = length
        self.bits = bits

    @classmethod
    def from01(cls, text: str) -> "Genotype":
        """Parse an ASCII string of '0'/'1' characters (position 0 first)."""
        if not text or text.strip("01"):
            raise ValueError(f"not a 0/1 string: {text!r}")
        return cls(len(text), int(text, 2))

    def to01(self) -> str:
        """Serialize to an ASCII string of '0'/'1' characters (position 0 first)."""
        return format(self.bits, f"0{self.length}b")

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, position: int) -> int:
        if not 0 <= position < self.length:
            raise IndexError(f"position {position} out of range for length {self.length}")
        return (self.bits >> (self.length - 1 - position)) & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, Genotype):
            return NotImplemented
        return self.length == other.length and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.length, self.bits))

    def __repr__(self) -> str:
        text = self.to01()
        if self.length > 24:
            text = text[:24] + "..."
        return f"Genotype({text}, length={self.length})"


def random_genotype(length: int, rng: random.Random) -> Genotype:
    """Draw a genotype whose alleles are independent fair coin flips."""
    if length < 1:
        raise ValueError(f"genotype length must be >= 1, got {length}")
    return Genotype(length, rng.getrandbits(length))


def hamming_distance(a: Genotype, b: Genotype) -> int:
    """Number of positions at which two equal-length genotypes differ."""
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} vs {b.length}")
    return (a.bits ^ b.bits).bit_count()


def consensus(genotypes: Iterable[Genotype]) -> Genotype:
    """Majority allele per position across a non-empty population.

    An exact tie at a position resolves to allele 1; this convention is fixed
    so runs are reproducible.
    """
    genos = list(genotypes)
    if not genos:
        raise ValueError("consensus of an empty population is undefined")
    length = genos[0].length
    if any(g.length != length for g in genos):
        raise ValueError("consensus requires genotypes of equal length")
    size = len(genos)
    columns = zip(*(g.to01() for g in genos))
    text = "".join("1" if 2 * column.count("1") >= size else "0" for column in columns)
    return Genotype.from01(text)
