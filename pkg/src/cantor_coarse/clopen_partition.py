"""Inductive clopen partitions of the code space.

Any clopen carrier splits into any number of non-empty clopen blocks by
repeatedly carving a cylinder out of the last block: take the
lexicographically least and greatest points a and b of the block, then the
shallowest cylinder inside the block that contains a but not b, and replace
the block by that cylinder and its complement.  The choice of a, b and the
cylinder is fixed, so outputs are reproducible, and every step stays inside
the exact cylinder algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .code_space import Address, ClopenSet, clopen_complement, clopen_union

__all__ = [
    "Partition",
    "build_partition",
    "flatten_refinement",
    "refine_block",
]


def _disjoint(x: ClopenSet, y: ClopenSet) -> bool:
    return all(cx.disjoint(cy) for cx in x.cylinders for cy in y.cylinders)


@dataclass(frozen=True)
class Partition:
    """An ordered split of a clopen carrier into disjoint non-empty blocks."""

    carrier: ClopenSet
    blocks: tuple[ClopenSet, ...]

    def __post_init__(self) -> None:
        if not self.blocks:
            raise ValueError("a partition needs at least one block")
        for b in self.blocks:
            if b.is_empty:
                raise ValueError("empty block")
        for i, b in enumerate(self.blocks):
            for other in self.blocks[i + 1:]:
                if not _disjoint(b, other):
                    raise ValueError("blocks overlap")
        if clopen_union(*self.blocks) != self.carrier:
            raise ValueError("blocks do not cover the carrier")

    @property
    def size(self) -> int:
        return len(self.blocks)


def _first_difference(a: Address, b: Address) -> int:
    n = max(len(a.prefix), len(b.prefix)) + 1
    sa, sb = a.symbols(n), b.symbols(n)
    for i in range(n):
        if sa[i] != sb[i]:
            return i
    raise ValueError("addresses coincide")


def _split_block(block: ClopenSet) -> tuple[ClopenSet, ClopenSet]:
    """Carve the canonical cylinder v out of ``block``: returns (v, block - v)."""
    a = block.min_address()
    b = block.max_address()
    if a == b:
        raise ValueError("cannot split singleton")
    # a prefix of a deep enough to sit inside the block and exclude b
    # always exists; scan shallowest first so v has minimal depth
    limit = max(len(w) for w in block.words) + _first_difference(a, b) + 2
    for depth in range(limit + 1):
        word = a.symbols(depth)
        if b.starts_with(word):
            continue
        v = ClopenSet.from_words([word])
        if v.subset_of(block):
            return v, clopen_complement(v, block)
    raise AssertionError("no splitting cylinder found")


def build_partition(carrier: ClopenSet, n: int) -> Partition:
    """Split ``carrier`` into ``n`` non-empty clopen blocks.

    Induction on n: keep the first n-2 blocks and split the last one.
    """
    if n < 1:
        raise ValueError("block count must be at least 1")
    if carrier.is_empty:
        raise ValueError("empty carrier")
    blocks = [carrier]
    for _ in range(n - 1):
        v, rest = _split_block(blocks[-1])
        blocks[-1:] = [v, rest]
    return Partition(carrier, tuple(blocks))


def refine_block(p: Partition, index: int, n: int) -> Partition:
    """Partition block ``index`` (1-based) of ``p`` into ``n`` sub-blocks."""
    if not 1 <= index <= p.size:
        raise ValueError(f"block index {index} out of range 1..{p.size}")
    return build_partition(p.blocks[index - 1], n)


def flatten_refinement(p: Partition, index: int, refinement: Partition) -> Partition:
    """Splice a refinement of block ``index`` back into ``p``."""
    if refinement.carrier != p.blocks[index - 1]:
        raise ValueError("refinement does not match the chosen block")
    blocks = p.blocks[: index - 1] + refinement.blocks + p.blocks[index:]
    return Partition(p.carrier, blocks)
