"""Tests for quotient construction, metric transport and the hierarchy."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from cantor_coarse.clopen_partition import build_partition
from cantor_coarse.code_space import (
    Address,
    ClopenSet,
    FULL_SPACE,
    code_distance,
    compose,
    identity_map,
    map_clopen,
    prepend_map,
    random_address,
    recode_homeomorphism,
)
from cantor_coarse.coarse_graining import (
    HierarchyPolicy,
    QuotientSpec,
    base_system,
    build_hierarchy,
    build_quotient,
    check_conjugation,
    check_isometry,
    conjugate_system,
    default_representatives,
    merged_representatives,
    quotient_map,
    quotient_metric,
    verify_self_similarity,
)
from cantor_coarse.quadratic_system import QuadraticParams, inverse_branches

MU5 = QuadraticParams(5.0)


def two_block_spec() -> QuotientSpec:
    p = build_partition(FULL_SPACE, 2)
    return QuotientSpec(p, default_representatives(p))


def three_block_spec() -> QuotientSpec:
    p = build_partition(FULL_SPACE, 3)
    return QuotientSpec(p, default_representatives(p))


class TestQuotientSpec:
    def test_default_representatives(self):
        assert default_representatives(build_partition(FULL_SPACE, 2)) == (Address("01", "0"),)
        assert default_representatives(build_partition(FULL_SPACE, 3)) == (
            Address("01", "0"),
            Address("011", "0"),
        )

    def test_representative_must_lie_in_first_block(self):
        p = build_partition(FULL_SPACE, 2)
        with pytest.raises(ValueError, match="outside the first block"):
            QuotientSpec(p, (Address("1", "0"),))

    def test_coincident_representatives_rejected_by_default(self):
        p = build_partition(FULL_SPACE, 3)
        q = Address("01", "0")
        with pytest.raises(ValueError, match="coincident"):
            QuotientSpec(p, (q, q))
        QuotientSpec(p, (q, q), allow_coincident=True)  # explicit opt-in

    def test_wrong_count_rejected(self):
        p = build_partition(FULL_SPACE, 3)
        with pytest.raises(ValueError, match="representatives"):
            QuotientSpec(p, (Address("01", "0"),))


class TestQuotientMap:
    def test_identity_on_first_block(self):
        spec = two_block_spec()
        x = Address("00", "0")
        assert quotient_map(spec, x) == x

    def test_constant_on_collapsed_blocks(self):
        spec = two_block_spec()
        q2 = spec.representatives[0]
        assert quotient_map(spec, Address("", "1")) == q2
        assert quotient_map(spec, Address("1", "0")) == q2

    def test_outside_carrier_rejected(self):
        p = build_partition(ClopenSet.from_words(["0"]), 2)
        spec = QuotientSpec(p, default_representatives(p))
        with pytest.raises(ValueError, match="outside the carrier"):
            quotient_map(spec, Address("", "1"))


class TestQuotientSpace:
    def test_trivial_quotient_rejected(self):
        p = build_partition(FULL_SPACE, 1)
        with pytest.raises(ValueError, match="trivial quotient"):
            build_quotient(QuotientSpec(p, ()))

    def test_fiber_enumeration_two_blocks(self):
        spec = two_block_spec()
        space = build_quotient(spec)
        q2 = spec.representatives[0]
        # oracle: group the endpoints of every depth-4 cylinder by image
        members: dict[Address, set[Address]] = {}
        for w in FULL_SPACE.refine(4):
            for pt in (Address(w, "0"), Address(w, "1")):
                members.setdefault(quotient_map(spec, pt), set()).add(pt)
        multi = {label for label, pts in members.items() if len(pts) > 1}
        assert multi == {q2}
        assert [f.label for f in space.multi_fibers] == [q2]
        assert space.multi_fibers[0].block_indices == (2,)
        # singleton fibers only for first-block points away from q2
        for label, pts in members.items():
            if label != q2:
                assert space.fiber(label).is_singleton

    def test_fiber_count_three_blocks(self):
        space = build_quotient(three_block_spec())
        assert len([f for f in space.multi_fibers if not f.is_singleton]) == 2

    def test_merged_representatives_merge_fibers(self):
        p = build_partition(FULL_SPACE, 3)
        spec = QuotientSpec(p, merged_representatives(p), allow_coincident=True)
        space = build_quotient(spec)
        assert len(space.multi_fibers) == 1
        assert space.multi_fibers[0].block_indices == (2, 3)

    def test_fiber_membership_and_labels(self):
        spec = two_block_spec()
        space = build_quotient(spec)
        fib = space.fiber_of_point(Address("10", "1"))
        assert fib.contains(Address("1", "0"))
        assert fib.contains(spec.representatives[0])
        assert not fib.contains(Address("00", "0"))
        assert space.label_of(fib) == spec.representatives[0]

    def test_fiber_requires_first_block_point(self):
        space = build_quotient(two_block_spec())
        with pytest.raises(ValueError, match="outside the first block"):
            space.fiber(Address("1", "0"))


class TestQuotientMetric:
    def test_zero_on_equal_fibers(self):
        space = build_quotient(two_block_spec())
        f = space.fiber(Address("00", "0"))
        assert quotient_metric(space, f, f) == 0

    def test_matches_code_distance(self):
        space = build_quotient(two_block_spec())
        x1, x2 = Address("001", "0"), Address("010", "1")
        d = quotient_metric(space, space.fiber(x1), space.fiber(x2))
        assert d == code_distance(x1, x2)

    def test_distance_between_representative_fibers(self):
        spec = three_block_spec()
        space = build_quotient(spec)
        q2, q3 = spec.representatives
        lhs = quotient_metric(space, space.fiber(q2), space.fiber(q3))
        # independent evaluation through the embedding
        from cantor_coarse.code_space import embed_cmts

        assert lhs == abs(embed_cmts(q2) - embed_cmts(q3))

    def test_foreign_fiber_rejected(self):
        space2 = build_quotient(two_block_spec())
        space3 = build_quotient(three_block_spec())
        foreign = space3.fiber(Address("00", "0"))
        with pytest.raises(ValueError, match="foreign fiber"):
            quotient_metric(space2, foreign, foreign)

    def test_isometry_on_random_pairs(self):
        assert check_isometry(build_quotient(two_block_spec()), pairs=1000, seed=0)


class TestConjugateSystem:
    def test_identity_hom_keeps_the_maps(self):
        sys_ = base_system(inverse_branches(MU5))
        conj = conjugate_system(sys_, identity_map())
        rng = random.Random(2)
        for _ in range(50):
            x = random_address(rng, 15)
            for p, q in zip(sys_.maps, conj.maps):
                assert p(x) == q(x)

    def test_composition_order(self):
        sys_ = base_system(inverse_branches(MU5))
        hom = recode_homeomorphism(ClopenSet.from_words(["0"]))
        conj = conjugate_system(sys_, hom)
        inv = hom.inverse()
        rng = random.Random(3)
        for _ in range(100):
            y = random_address(rng, 20, conj.carrier)
            for p, q in zip(sys_.maps, conj.maps):
                assert q(y) == hom(p(inv(y)))

    def test_carrier_transported(self):
        sys_ = base_system(inverse_branches(MU5))
        hom = recode_homeomorphism(ClopenSet.from_words(["0"]))
        conj = conjugate_system(sys_, hom)
        assert conj.carrier == ClopenSet.from_words(["0"])
        assert conj.modulus_bound == sys_.modulus_bound

    def test_points_outside_the_target_are_rejected(self):
        sys_ = base_system(inverse_branches(MU5))
        hom = recode_homeomorphism(ClopenSet.from_words(["0"]))
        conj = conjugate_system(sys_, hom)
        from cantor_coarse.code_space import OutsideDomainError

        with pytest.raises(OutsideDomainError):
            conj.maps[0](Address("1", "0"))  # not in the transported carrier

    def test_contraction_ratio_in_transported_metric(self):
        tower = build_hierarchy(MU5, 1)
        level = tower[1]
        rng = random.Random(4)
        alpha = level.system.modulus_bound[0]
        for _ in range(500):
            y1 = random_address(rng, 20, level.carrier)
            y2 = random_address(rng, 20, level.carrier)
            if y1 == y2:
                continue
            dy = level.metric(y1, y2)
            for branch in level.system.maps:
                ratio = level.metric(branch(y1), branch(y2)) / dy
                assert ratio == Fraction(1, 3)  # exact for the symbolic branches
                assert float(ratio) <= alpha + 1e-9


class TestHierarchy:
    def test_level_zero_only(self):
        tower = build_hierarchy(MU5, 0)
        assert len(tower) == 1
        assert tower[0].carrier == FULL_SPACE
        assert tower[0].quotient is None

    def test_three_levels(self):
        tower = build_hierarchy(MU5, 3)
        assert [lv.level for lv in tower] == [0, 1, 2, 3]
        assert [lv.carrier.words for lv in tower] == [("",), ("0",), ("00",), ("000",)]

    def test_precondition_on_the_base_system(self):
        with pytest.raises(ValueError, match="contraction conditions"):
            build_hierarchy(QuadraticParams(4.5), 1)

    def test_conjugation_identity_at_every_level(self):
        tower = build_hierarchy(MU5, 3)
        for k in range(1, 4):
            assert check_conjugation(tower[k], tower[k - 1], samples=60, seed=k)

    def test_floor_map_h_lands_on_fibers(self):
        tower = build_hierarchy(MU5, 1)
        level = tower[1]
        x = Address("10", "1")
        fib = level.h(x)
        assert fib.label == level.hom(x)
        assert level.quotient.spec.partition.blocks[0].contains(fib.label)

    def test_base_level_has_no_quotient(self):
        tower = build_hierarchy(MU5, 1)
        with pytest.raises(ValueError, match="no quotient"):
            tower[0].h(Address("", "0"))

    def test_three_block_policy(self):
        tower = build_hierarchy(MU5, 2, HierarchyPolicy(blocks_per_level=3))
        for level in tower[1:]:
            assert level.quotient.spec.partition.size == 3
            assert len(level.quotient.multi_fibers) == 2

    def test_merged_policy(self):
        tower = build_hierarchy(MU5, 1, HierarchyPolicy(representative_policy="merged", blocks_per_level=3))
        assert len(tower[1].quotient.multi_fibers) == 1

    def test_explicit_policy(self):
        reps = ((Address("000", "0"),),)
        tower = build_hierarchy(
            MU5,
            1,
            HierarchyPolicy(representative_policy="explicit", explicit_representatives=reps),
        )
        assert tower[1].quotient.spec.representatives == reps[0]

    def test_verifying_policy_checks_every_level_on_build(self):
        tower = build_hierarchy(MU5, 2, HierarchyPolicy(verify_depth=6, verify_samples=50))
        assert len(tower) == 3  # a failure would have raised

    def test_isometry_at_level_one_is_exact(self):
        tower = build_hierarchy(MU5, 1)
        assert check_isometry(tower[1].quotient, pairs=1000, seed=0, expected=code_distance)

    def test_fibers_partition_the_carrier(self):
        tower = build_hierarchy(MU5, 1)
        level = tower[1]
        spec = level.quotient.spec
        # every depth-5 endpoint belongs to exactly one fiber, keyed by label
        seen: dict[Address, Address] = {}
        for w in FULL_SPACE.refine(5):
            for pt in (Address(w, "0"), Address(w, "1")):
                label = quotient_map(spec, pt)
                fib = level.quotient.fiber(label)
                assert fib.contains(pt)
                seen[pt] = label
        multi_labels = {f.label for f in level.quotient.multi_fibers}
        assert multi_labels <= set(seen.values())


class TestSelfSimilarity:
    def test_reports_pass_on_all_levels(self):
        tower = build_hierarchy(MU5, 3)
        for level in tower:
            report = verify_self_similarity(level, 8, samples=150, seed=0)
            assert report.coverage_exact
            assert report.hausdorff <= 1e-12
            assert report.ratio_pass
            assert all(r <= 1.0 / 5.0**0.5 + 1e-9 for r in report.max_ratio)

    def test_coverage_detects_a_broken_system(self):
        from cantor_coarse.coarse_graining import SymbolicSystem, HierarchyLevel

        broken = SymbolicSystem(
            maps=(prepend_map("0"), compose(prepend_map("0"), prepend_map("1"))),
            carrier=FULL_SPACE,
            modulus_bound=(0.45, 0.45),
        )
        level = HierarchyLevel(
            level=0,
            system=broken,
            quotient=None,
            hom=None,
            to_base=identity_map(),
            real_system=inverse_branches(MU5),
        )
        report = verify_self_similarity(level, 4, samples=30, seed=0)
        assert not report.coverage_exact

    def test_union_of_branch_images_is_the_carrier(self):
        tower = build_hierarchy(MU5, 2)
        for level in tower:
            images = [map_clopen(m, level.carrier) for m in level.system.maps]
            from cantor_coarse.code_space import clopen_union

            assert clopen_union(*images) == level.carrier
