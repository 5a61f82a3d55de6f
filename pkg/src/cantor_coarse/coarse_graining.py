"""Quotients of the code space and the tower of coarse grainings.

A quotient collapses every block of a clopen partition except the first
onto a chosen representative inside the first block.  Its fibers form a
decomposition space whose points are labeled by first-block points; the
labeling is a bijection, so transporting the metric across it is exact and
turns the labeling into an isometry.  Conjugating the branch maps through
the label coordinates makes each decomposition space self-similar again
with the same modulus bound, and the construction stacks indefinitely:
space, first quotient, quotient of the quotient, and so on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .clopen_partition import Partition, build_partition
from .code_space import (
    Address,
    AddressMap,
    ClopenSet,
    FULL_SPACE,
    code_distance,
    compose,
    identity_map,
    map_clopen,
    prepend_map,
    push_word,
    random_address,
    recode_between,
)
from .quadratic_system import (
    IDENTITY_TOL,
    QuadraticParams,
    WeakContractionSystem,
    hausdorff_distance,
    invariant_cover,
    inverse_branches,
    refine_cover,
    verify_statement_conditions,
)

__all__ = [
    "Fiber",
    "HierarchyLevel",
    "HierarchyPolicy",
    "QuotientSpace",
    "QuotientSpec",
    "RATIO_SLACK",
    "SelfSimilarityReport",
    "SymbolicSystem",
    "base_system",
    "build_hierarchy",
    "build_quotient",
    "check_conjugation",
    "check_isometry",
    "conjugate_system",
    "default_representatives",
    "merged_representatives",
    "quotient_map",
    "quotient_metric",
    "verify_self_similarity",
]

RATIO_SLACK = 1e-9

Metric = Callable[[Address, Address], Fraction]


@dataclass(frozen=True)
class QuotientSpec:
    """The collapse map: identity on block 1, constant q_i on block i."""

    partition: Partition
    representatives: tuple[Address, ...]
    allow_coincident: bool = False

    def __post_init__(self) -> None:
        expected = self.partition.size - 1
        if len(self.representatives) != expected:
            raise ValueError(f"need {expected} representatives, got {len(self.representatives)}")
        first = self.partition.blocks[0]
        for q in self.representatives:
            if not first.contains(q):
                raise ValueError(f"representative {q} lies outside the first block")
        if not self.allow_coincident and len(set(self.representatives)) != expected:
            raise ValueError("coincident representatives")


def default_representatives(partition: Partition) -> tuple[Address, ...]:
    """q_i = c + 1^(i-1) + 0^inf with c the first cylinder word of block 1.

    Distinct by construction, one per collapsed block.
    """
    word = partition.blocks[0].words[0]
    return tuple(Address(word + "1" * (i - 1), "0") for i in range(2, partition.size + 1))


def merged_representatives(partition: Partition) -> tuple[Address, ...]:
    """All collapsed blocks share one representative, merging their fibers."""
    word = partition.blocks[0].words[0]
    q = Address(word + "1", "0")
    return tuple(q for _ in range(2, partition.size + 1))


def quotient_map(spec: QuotientSpec, x: Address) -> Address:
    """Collapse a point: identity on the first block, q_i on block i."""
    blocks = spec.partition.blocks
    if blocks[0].contains(x):
        return x
    for i, block in enumerate(blocks[1:]):
        if block.contains(x):
            return spec.representatives[i]
    raise ValueError(f"{x} lies outside the carrier")


@dataclass(frozen=True)
class Fiber:
    """One preimage class of the collapse, named by its first-block point.

    ``block_indices`` lists the 1-based collapsed blocks glued onto the
    label; an empty tuple marks a singleton fiber.
    """

    label: Address
    block_indices: tuple[int, ...]
    spec: QuotientSpec = field(repr=False)

    @property
    def is_singleton(self) -> bool:
        return not self.block_indices

    def contains(self, y: Address) -> bool:
        return quotient_map(self.spec, y) == self.label


@dataclass(frozen=True)
class QuotientSpace:
    """The decomposition of the carrier into fibers of the collapse map.

    Fibers are represented by their first-block labels, never materialized
    as point sets; membership resolves lazily through the collapse map.
    """

    spec: QuotientSpec
    base_metric: Metric = field(repr=False, compare=False)
    multi_fibers: tuple[Fiber, ...] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        groups: dict[Address, list[int]] = {}
        for i, q in enumerate(self.spec.representatives, start=2):
            groups.setdefault(q, []).append(i)
        fibers = tuple(
            Fiber(label, tuple(ix), self.spec) for label, ix in sorted(groups.items())
        )
        object.__setattr__(self, "multi_fibers", fibers)

    def fiber(self, label: Address) -> Fiber:
        """The fiber through a first-block point (the map x -> f^-1(x))."""
        if not self.spec.partition.blocks[0].contains(label):
            raise ValueError(f"{label} lies outside the first block")
        for f in self.multi_fibers:
            if f.label == label:
                return f
        return Fiber(label, (), self.spec)

    def fiber_of_point(self, y: Address) -> Fiber:
        """The fiber containing an arbitrary carrier point."""
        return self.fiber(quotient_map(self.spec, y))

    def label_of(self, fiber: Fiber) -> Address:
        """Inverse of ``fiber``: recover the first-block label."""
        self.check_member(fiber)
        return fiber.label

    def check_member(self, fiber: Fiber) -> None:
        if fiber.spec != self.spec:
            raise ValueError("foreign fiber")


def build_quotient(spec: QuotientSpec, base_metric: Metric = code_distance) -> QuotientSpace:
    """Build the decomposition space of the collapse map.

    Rejects the one-block case: the collapse would be the identity and the
    decomposition trivial.
    """
    if spec.partition.size < 2:
        raise ValueError("trivial quotient")
    q = QuotientSpace(spec, base_metric)
    if not any(not f.is_singleton for f in q.multi_fibers):
        raise AssertionError("quotient has no multi-point fiber")
    return q


def quotient_metric(q: QuotientSpace, d1: Fiber, d2: Fiber) -> Fraction:
    """Distance between fibers: the base distance of their labels.

    This is exactly what makes the labeling an isometry.
    """
    q.check_member(d1)
    q.check_member(d2)
    return q.base_metric(d1.label, d2.label)


@dataclass(frozen=True)
class SymbolicSystem:
    """Branch maps acting on a clopen carrier of the code space."""

    maps: tuple[AddressMap, ...]
    carrier: ClopenSet
    modulus_bound: tuple[float, ...]

    @property
    def branch_count(self) -> int:
        return len(self.maps)


def base_system(sys: WeakContractionSystem) -> SymbolicSystem:
    """The branch system in exact symbolic coordinates.

    Under the coding map the inverse branches act on addresses by
    prepending one symbol, so the symbolic model is exact; the recorded
    bounds are the branch moduli.
    """
    if sys.branch_count != 2:
        raise ValueError("the symbolic model covers two-branch systems")
    return SymbolicSystem(
        maps=(prepend_map("0"), prepend_map("1")),
        carrier=FULL_SPACE,
        modulus_bound=tuple(sys.modulus_inf),
    )


def conjugate_system(sys: SymbolicSystem, hom: AddressMap) -> SymbolicSystem:
    """Transport a branch system through a homeomorphism: q_j = h o p_j o h^-1.

    In the transported metric each conjugate contracts exactly as its
    source does, so the modulus bounds carry over unchanged, and the
    coverage identity transports along with it.
    """
    inv = hom.inverse()
    maps = tuple(compose(inv, m, hom) for m in sys.maps)
    return SymbolicSystem(
        maps=maps,
        carrier=map_clopen(hom, sys.carrier),
        modulus_bound=sys.modulus_bound,
    )


@dataclass(frozen=True)
class HierarchyLevel:
    """One floor of the coarse-graining tower, in label coordinates.

    ``hom`` recodes the previous carrier onto this one (composing it with
    the fiber map of ``quotient`` gives the floor-to-floor homeomorphism),
    and ``to_base`` pulls label coordinates all the way back to the ground
    space, which is how the transported metric is evaluated.
    """

    level: int
    system: SymbolicSystem
    quotient: QuotientSpace | None
    hom: AddressMap | None
    to_base: AddressMap
    real_system: WeakContractionSystem = field(repr=False, compare=False)

    @property
    def carrier(self) -> ClopenSet:
        return self.system.carrier

    def metric(self, y1: Address, y2: Address) -> Fraction:
        """Transported ground metric; the tower maps are isometries for it."""
        return code_distance(self.to_base(y1), self.to_base(y2))

    def h(self, x: Address) -> Fiber:
        """The floor map: recode into the first block, then take the fiber."""
        if self.quotient is None or self.hom is None:
            raise ValueError("the ground level has no quotient")
        return self.quotient.fiber(self.hom(x))


@dataclass(frozen=True)
class HierarchyPolicy:
    """How each floor of the tower is built.

    With ``verify_depth`` set, every floor is checked on construction (exact
    coverage, interval realization, contraction ratios) and a failure raises;
    left None, verification stays on demand through verify_self_similarity.
    """

    blocks_per_level: int = 2
    representative_policy: str = "distinct"  # distinct | merged | explicit
    explicit_representatives: tuple[tuple[Address, ...], ...] | None = None
    verify_depth: int | None = None
    verify_samples: int = 200
    seed: int = 0

    def representatives_for(self, level: int, partition: Partition) -> tuple[tuple[Address, ...], bool]:
        if self.representative_policy == "explicit":
            reps = self.explicit_representatives
            if reps is None or len(reps) < level:
                raise ValueError(f"no explicit representatives for level {level}")
            chosen = reps[level - 1]
            return chosen, len(set(chosen)) != len(chosen)
        if self.representative_policy == "merged":
            return merged_representatives(partition), True
        if self.representative_policy == "distinct":
            return default_representatives(partition), False
        raise ValueError(f"unknown representative policy {self.representative_policy!r}")


def build_hierarchy(
    params: QuadraticParams,
    levels: int,
    policy: HierarchyPolicy = HierarchyPolicy(),
) -> list[HierarchyLevel]:
    """Stack ``levels`` coarse grainings over the invariant set of ``params``.

    The quadratic system must pass the three contraction conditions first.
    Each new floor partitions the previous carrier, collapses everything
    onto the first block, and conjugates the branch maps through the
    recoding onto that block.
    """
    if levels < 0:
        raise ValueError("levels must be non-negative")
    real = inverse_branches(params)
    report = verify_statement_conditions(real)
    if not report.all_pass:
        raise ValueError(
            "base system fails the contraction conditions: "
            f"injective={report.injective} fixed_points={report.not_singleton} "
            f"modulus_sum={report.modulus_sum:.6f}"
        )
    tower = [
        HierarchyLevel(
            level=0,
            system=base_system(real),
            quotient=None,
            hom=None,
            to_base=identity_map(),
            real_system=real,
        )
    ]
    for k in range(1, levels + 1):
        prev = tower[-1]
        partition = build_partition(prev.carrier, policy.blocks_per_level)
        reps, coincident = policy.representatives_for(k, partition)
        spec = QuotientSpec(partition, reps, allow_coincident=coincident)
        quot = build_quotient(spec, base_metric=prev.metric)
        g = recode_between(prev.carrier, partition.blocks[0])
        tower.append(
            HierarchyLevel(
                level=k,
                system=conjugate_system(prev.system, g),
                quotient=quot,
                hom=g,
                to_base=compose(g.inverse(), prev.to_base),
                real_system=real,
            )
        )
    if policy.verify_depth is not None:
        for level in tower:
            rep = verify_self_similarity(
                level, policy.verify_depth, samples=policy.verify_samples, seed=policy.seed
            )
            if not rep.all_pass:
                raise AssertionError(
                    f"level {level.level} fails self-similarity verification: "
                    f"coverage_exact={rep.coverage_exact} hausdorff={rep.hausdorff} "
                    f"max_ratio={rep.max_ratio}"
                )
    return tower


@dataclass(frozen=True)
class SelfSimilarityReport:
    """Checkable self-similarity content of one floor: coverage + contraction."""

    level: int
    depth: int
    coverage_exact: bool
    cylinders_enumerated: int
    hausdorff: float
    max_ratio: tuple[float, ...]
    ratio_bound: tuple[float, ...]
    ratio_samples: int
    tolerance: float

    @property
    def coverage_pass(self) -> bool:
        return self.coverage_exact and self.hausdorff <= self.tolerance

    @property
    def ratio_pass(self) -> bool:
        return all(r <= b for r, b in zip(self.max_ratio, self.ratio_bound))

    @property
    def all_pass(self) -> bool:
        return self.coverage_pass and self.ratio_pass


def verify_self_similarity(
    level: HierarchyLevel,
    depth: int,
    samples: int = 400,
    seed: int = 0,
    tolerance: float = IDENTITY_TOL,
) -> SelfSimilarityReport:
    """Machine-check one floor of the tower.

    Coverage is checked twice: the branch images of the carrier, pushed
    through the composed label maps, must union back to the carrier as an
    exact cylinder identity; and in the interval realization the branch
    images of the depth-``depth`` cover must match the next cover in
    Hausdorff distance.  Contraction is checked by sampling address pairs
    and measuring the transported metric before and after each branch.
    """
    carrier = level.carrier
    base_len = max((len(w) for w in carrier.words), default=0)
    refined = carrier.refine(base_len + max(depth, 1))
    image_words: list[str] = []
    for branch in level.system.maps:
        for w in refined:
            image_words.extend(push_word(branch, w))
    coverage_exact = ClopenSet.from_words(image_words) == carrier

    cover_n = invariant_cover(level.real_system, depth)
    cover_next = invariant_cover(level.real_system, depth + 1)
    hausdorff = hausdorff_distance(refine_cover(level.real_system, cover_n), cover_next)

    rng = random.Random(seed)
    max_ratio = [0.0] * level.system.branch_count
    used = 0
    while used < samples:
        y1 = random_address(rng, 20, carrier)
        y2 = random_address(rng, 20, carrier)
        if y1 == y2:
            continue
        used += 1
        dy = level.metric(y1, y2)
        for j, branch in enumerate(level.system.maps):
            ratio = level.metric(branch(y1), branch(y2)) / dy
            max_ratio[j] = max(max_ratio[j], float(ratio))
    return SelfSimilarityReport(
        level=level.level,
        depth=depth,
        coverage_exact=coverage_exact,
        cylinders_enumerated=len(refined) * level.system.branch_count,
        hausdorff=hausdorff,
        max_ratio=tuple(max_ratio),
        ratio_bound=tuple(b + RATIO_SLACK for b in level.system.modulus_bound),
        ratio_samples=used,
        tolerance=tolerance,
    )


def check_conjugation(level: HierarchyLevel, prev: HierarchyLevel, samples: int = 100, seed: int = 0) -> bool:
    """Pointwise round trip h^-1 o f^k o h = f^(k-1) on sampled points."""
    if level.hom is None:
        raise ValueError("the ground level has no conjugation to check")
    rng = random.Random(seed)
    inv = level.hom.inverse()
    for _ in range(samples):
        x = random_address(rng, 20, prev.carrier)
        for p_prev, p_conj in zip(prev.system.maps, level.system.maps):
            if inv(p_conj(level.hom(x))) != p_prev(x):
                return False
    return True


def check_isometry(
    q: QuotientSpace,
    pairs: int = 1000,
    seed: int = 0,
    max_prefix: int = 12,
    expected: Metric = code_distance,
) -> bool:
    """Fiber distance equals the expected point distance, exactly."""
    first = q.spec.partition.blocks[0]
    rng = random.Random(seed)
    for _ in range(pairs):
        x1 = random_address(rng, max_prefix, first)
        x2 = random_address(rng, max_prefix, first)
        if quotient_metric(q, q.fiber(x1), q.fiber(x2)) != expected(x1, x2):
            return False
    return True
