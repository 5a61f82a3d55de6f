"""Clopen partitions of the code space, split and refined on demand."""

from cantor_coarse import FULL_SPACE, build_partition, flatten_refinement, refine_block
from cantor_coarse.code_space import clopen_union

print("partitions of the full code space:")
for n in (1, 2, 3, 4, 6):
    p = build_partition(FULL_SPACE, n)
    print(f"  n={n}: " + "  ".join("{" + ",".join(f"[{w}]" for w in b.words) + "}" for b in p.blocks))

p = build_partition(FULL_SPACE, 3)
print("\nrefining block 1 of the 3-part split into 3:")
sub = refine_block(p, 1, 3)
print("  sub-blocks:", [b.words for b in sub.blocks])

flat = flatten_refinement(p, 1, sub)
print(f"  spliced back in: a valid {flat.size}-part partition")
print("  union equals carrier:", clopen_union(*flat.blocks) == FULL_SPACE)

print("\nthe construction never stops: blocks of the 64-part split (first 5, last 1):")
p64 = build_partition(FULL_SPACE, 64)
for b in list(p64.blocks)[:5]:
    print("  ", b.words)
print("   ...")
print("  ", p64.blocks[-1].words)
print("all 64 blocks disjoint, non-empty, covering:", clopen_union(*p64.blocks) == FULL_SPACE)
