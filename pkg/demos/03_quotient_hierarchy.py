"""Coarse graining: collapse a partition, transport the metric, stack levels."""

from cantor_coarse import (
    FULL_SPACE,
    QuadraticParams,
    QuotientSpec,
    build_hierarchy,
    build_partition,
    build_quotient,
    code_distance,
    default_representatives,
    quotient_map,
    quotient_metric,
    verify_self_similarity,
)
from cantor_coarse.code_space import Address

partition = build_partition(FULL_SPACE, 2)
spec = QuotientSpec(partition, default_representatives(partition))
q2 = spec.representatives[0]
print("two-block collapse: identity on [0], constant on [1]")
print(f"  representative q2 = {q2}")
for pt in (Address("00", "0"), Address("", "1"), Address("1", "0")):
    print(f"  f({pt}) = {quotient_map(spec, pt)}")

space = build_quotient(spec)
print(f"\nmulti-point fibers: {[(str(f.label), f.block_indices) for f in space.multi_fibers]}")
x1, x2 = Address("001", "0"), Address("010", "1")
print("fiber distance equals point distance, exactly:")
print(f"  rho(h(x1), h(x2)) = {quotient_metric(space, space.fiber(x1), space.fiber(x2))}")
print(f"  d(x1, x2)         = {code_distance(x1, x2)}")

print("\nstacking three levels over the mu=5 invariant set:")
tower = build_hierarchy(QuadraticParams(5.0), 3)
for level in tower:
    name = "S" if level.level == 0 else f"D{level.level}"
    rep = verify_self_similarity(level, depth=8, samples=200, seed=0)
    print(
        f"  {name:3s} carrier {level.carrier.words}  coverage exact: {rep.coverage_exact}"
        f"  max contraction ratio: {max(rep.max_ratio):.6f} (bound {max(rep.ratio_bound):.6f})"
    )

level1 = tower[1]
x = Address("10", "1")
fiber = level1.h(x)
print(f"\nthe floor map h^1 sends {x} to the singleton fiber labeled {fiber.label}")
glued = level1.quotient.multi_fibers[0]
print(f"the one multi-point fiber sits at {glued.label} and glues in "
      f"partition block {glued.block_indices[0]}")
