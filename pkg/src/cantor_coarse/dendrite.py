"""Finite dendrites and the surjection from the code space onto them.

The dendrite is realized as a complete binary tree with level-l edges of
length 3**-l, walked by the closed depth-first tour that descends and
reascends every edge.  Composing binary expansion of an address with arc
length along the tour gives a continuous map of the whole code space onto
the whole tree; the point fibers of that map realize the tree as a
decomposition of the code space.  Tour arithmetic is rational throughout,
so dyadic tour times invert exactly.
"""

from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .code_space import Address, ClopenSet, Cylinder, map_clopen, random_address
from .coarse_graining import HierarchyLevel

__all__ = [
    "DendriteFiber",
    "DendriteGraph",
    "DendritePoint",
    "LevelDendriteMap",
    "WITNESS_DEPTH",
    "binary_expansion",
    "check_continuity_modulus",
    "check_surjectivity",
    "dendrite_map",
    "euler_tour",
    "fiber_of",
    "lift_to_level",
]

# tour length stays below 4, so 4 * 2**-40 keeps truncated witnesses
# within 1e-9 of their targets
WITNESS_DEPTH = 40


@dataclass(frozen=True)
class DendritePoint:
    """A point on the tree: ``offset`` from the parent end of the edge into
    ``edge_child``.

    Canonical form: a non-root vertex sits at full offset on its own parent
    edge, and the root is (1, 0); interior points keep 0 < offset < length.
    """

    edge_child: int
    offset: Fraction


@dataclass(frozen=True)
class DendriteGraph:
    """Complete binary tree of the given depth, heap-indexed from 1.

    The edge into a level-l vertex has length 3**-l; the planar embedding
    fans children out inside their parent's angular slot.
    """

    depth: int

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise ValueError("depth must be non-negative")

    @property
    def vertex_count(self) -> int:
        return 2 ** (self.depth + 1) - 1

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def level(self, v: int) -> int:
        return v.bit_length() - 1

    def parent(self, v: int) -> int:
        return v // 2

    def children(self, v: int) -> tuple[int, ...]:
        if self.level(v) >= self.depth:
            return ()
        return (2 * v, 2 * v + 1)

    def is_leaf(self, v: int) -> bool:
        return self.level(v) == self.depth

    def edge_length(self, child: int) -> Fraction:
        if not 2 <= child <= self.vertex_count:
            raise ValueError(f"vertex {child} carries no edge")
        return Fraction(1, 3 ** self.level(child))

    @cached_property
    def total_edge_length(self) -> Fraction:
        return sum((self.edge_length(v) for v in range(2, self.vertex_count + 1)), Fraction(0))

    @cached_property
    def _root_distance(self) -> dict[int, Fraction]:
        dist = {1: Fraction(0)}
        for v in range(2, self.vertex_count + 1):
            dist[v] = dist[v // 2] + self.edge_length(v)
        return dist

    def root_distance(self, v: int) -> Fraction:
        return self._root_distance[v]

    # -- points ----------------------------------------------------------

    def point(self, edge_child: int, offset) -> DendritePoint:
        """Canonical point at ``offset`` from the parent end of an edge."""
        off = Fraction(offset)
        if edge_child == 1:
            if off != 0:
                raise ValueError("the root carries no edge")
            return DendritePoint(1, Fraction(0))
        length = self.edge_length(edge_child)
        if not 0 <= off <= length:
            raise ValueError(f"offset {off} off the edge into {edge_child}")
        if off == 0:
            return self.vertex_point(self.parent(edge_child))
        return DendritePoint(edge_child, off)

    def vertex_point(self, v: int) -> DendritePoint:
        if v == 1:
            return DendritePoint(1, Fraction(0))
        return DendritePoint(v, self.edge_length(v))

    def as_vertex(self, p: DendritePoint) -> int | None:
        """The vertex a point sits on, or None for interior edge points."""
        if p.edge_child == 1:
            return 1
        if p.offset == self.edge_length(p.edge_child):
            return p.edge_child
        return None

    def _validate(self, p: DendritePoint) -> None:
        if p.edge_child == 1:
            if p.offset != 0:
                raise ValueError("point off the tree")
            return
        if not 2 <= p.edge_child <= self.vertex_count:
            raise ValueError("point off the tree")
        if not 0 < p.offset <= self.edge_length(p.edge_child):
            raise ValueError("point off the tree")

    def point_root_distance(self, p: DendritePoint) -> Fraction:
        if p.edge_child == 1:
            return Fraction(0)
        return self.root_distance(self.parent(p.edge_child)) + p.offset

    def distance(self, p: DendritePoint, q: DendritePoint) -> Fraction:
        """Tree geodesic distance between two points."""
        self._validate(p)
        self._validate(q)
        if p.edge_child == q.edge_child:
            return abs(p.offset - q.offset)
        a, b = p.edge_child, q.edge_child
        while a != b:  # lowest common ancestor in heap indexing
            if a > b:
                a //= 2
            else:
                b //= 2
        anc = a
        dp = self.point_root_distance(p)
        dq = self.point_root_distance(q)
        if anc == p.edge_child:  # p's edge lies on q's root path
            return dq - dp
        if anc == q.edge_child:
            return dp - dq
        return dp + dq - 2 * self.root_distance(anc)

    # -- the closed tour ---------------------------------------------------

    @cached_property
    def tour_segments(self) -> tuple[tuple[int, str], ...]:
        """Depth-first segments (edge child, 'down'|'up') of the closed tour."""
        segs: list[tuple[int, str]] = []

        def walk(v: int) -> None:
            for c in self.children(v):
                segs.append((c, "down"))
                walk(c)
                segs.append((c, "up"))

        walk(1)
        return tuple(segs)

    @cached_property
    def tour_breaks(self) -> tuple[Fraction, ...]:
        """Cumulative arc length at the segment boundaries; last entry is the
        full (unnormalized) tour length."""
        acc = [Fraction(0)]
        for child, _ in self.tour_segments:
            acc.append(acc[-1] + self.edge_length(child))
        return tuple(acc)

    @property
    def tour_length(self) -> Fraction:
        return self.tour_breaks[-1]

    def tour_point(self, t) -> DendritePoint:
        """The point at normalized arc length ``t`` along the closed tour."""
        t = Fraction(t)
        if not 0 <= t <= 1:
            raise ValueError("tour parameter outside [0, 1]")
        if self.depth == 0:
            return self.vertex_point(1)
        arc = t * self.tour_length
        i = bisect.bisect_right(self.tour_breaks, arc) - 1
        if i >= len(self.tour_segments):  # t == 1 closes the tour
            return self.vertex_point(1)
        child, direction = self.tour_segments[i]
        delta = arc - self.tour_breaks[i]
        if direction == "down":
            return self.point(child, delta)
        return self.point(child, self.edge_length(child) - delta)

    @cached_property
    def _vertex_visits(self) -> dict[int, tuple[Fraction, ...]]:
        """Arc values at which the tour sits on each vertex."""
        visits: dict[int, list[Fraction]] = {v: [] for v in self.vertices}
        visits[1].append(Fraction(0))
        for (child, direction), arc in zip(self.tour_segments, self.tour_breaks[1:]):
            pos = child if direction == "down" else self.parent(child)
            visits[pos].append(arc)
        return {v: tuple(a) for v, a in visits.items()}

    @cached_property
    def _segment_index(self) -> dict[tuple[int, str], int]:
        return {seg: i for i, seg in enumerate(self.tour_segments)}

    def tour_parameters(self, p: DendritePoint) -> tuple[Fraction, ...]:
        """All normalized tour times landing on ``p``.

        Interior edge points are hit twice (down pass and up pass), leaves
        once, and a vertex of out-degree d is hit 1 + d times.
        """
        self._validate(p)
        if self.depth == 0:
            return (Fraction(0),)
        total = self.tour_length
        v = self.as_vertex(p)
        if v is not None:
            return tuple(arc / total for arc in self._vertex_visits[v])
        child = p.edge_child
        down = self.tour_breaks[self._segment_index[(child, "down")]] + p.offset
        up_start = self.tour_breaks[self._segment_index[(child, "up")]]
        up = up_start + self.edge_length(child) - p.offset
        return tuple(sorted((down / total, up / total)))

    # -- planar embedding --------------------------------------------------

    @cached_property
    def coordinates(self) -> dict[int, tuple[float, float]]:
        """Planar positions: children fan out inside the parent's angular slot."""
        pos = {1: (0.0, 0.0)}

        def place(v: int, lo: float, hi: float) -> None:
            kids = self.children(v)
            for i, c in enumerate(kids):
                a = lo + (hi - lo) * i / len(kids)
                b = lo + (hi - lo) * (i + 1) / len(kids)
                theta = 0.5 * (a + b)
                length = float(self.edge_length(c))
                x, y = pos[v]
                pos[c] = (x + length * math.sin(theta), y + length * math.cos(theta))
                place(c, a, b)

        place(1, -math.pi / 3, math.pi / 3)
        return pos


def euler_tour(tree: DendriteGraph, t) -> DendritePoint:
    """The closed depth-first tour as a map [0, 1] -> tree."""
    return tree.tour_point(t)


def binary_expansion(a: Address) -> Fraction:
    """The value sum s_i * 2**-i of an address; continuous and onto [0, 1]."""
    total = Fraction(0)
    for i, sym in enumerate(a.prefix, start=1):
        if sym == "1":
            total += Fraction(1, 2**i)
    if a.tail == "1":
        total += Fraction(1, 2 ** len(a.prefix))
    return total


def dendrite_map(tree: DendriteGraph, a: Address) -> DendritePoint:
    """The surjection code space -> dendrite: tour point at the binary value."""
    return tree.tour_point(binary_expansion(a))


@dataclass(frozen=True)
class DendriteFiber:
    """Preimage data of one tree point at a fixed cylinder depth.

    ``cylinders`` are all depth-n cylinders whose image interval covers the
    target; ``witnesses`` are eventually constant addresses mapping onto
    (dyadic tour times) or within tolerance of (all other times) the
    target.
    """

    target: DendritePoint
    cylinders: tuple[Cylinder, ...]
    witnesses: tuple[Address, ...]


def _time_addresses(t: Fraction, depth: int) -> list[Address]:
    if t == 0:
        return [Address("", "0")]
    if t == 1:
        return [Address("", "1")]
    den = t.denominator
    if den & (den - 1) == 0:  # dyadic: both exact binary expansions
        m = den.bit_length() - 1
        num = t.numerator
        return [
            Address(format(num, f"0{m}b"), "0"),
            Address(format(num - 1, f"0{m}b"), "1"),
        ]
    w = max(depth, WITNESS_DEPTH)
    digits = int(t * 2**w)
    return [Address(format(digits, f"0{w}b"), "0")]


def fiber_of(tree: DendriteGraph, p: DendritePoint, depth: int) -> DendriteFiber:
    """All depth-``depth`` cylinders whose tour image covers ``p``.

    A cylinder [w] maps to the tour arc over the dyadic interval of width
    2**-len(w) starting at the binary value of w, so membership of each
    tour time of ``p`` is decided exactly.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    params = tree.tour_parameters(p)
    scale = 2**depth
    words: set[str] = set()
    witnesses: set[Address] = set()
    for t in params:
        x = t * scale
        i = int(x)
        if i == scale:
            i -= 1
        words.add(format(i, f"0{depth}b") if depth else "")
        if x == i and i > 0:  # boundary time also belongs to the left cylinder
            words.add(format(i - 1, f"0{depth}b"))
        witnesses.update(_time_addresses(t, depth))
    return DendriteFiber(
        target=p,
        cylinders=tuple(Cylinder(w) for w in sorted(words)),
        witnesses=tuple(sorted(witnesses)),
    )


def check_surjectivity(tree: DendriteGraph, depth: int) -> bool:
    """Every vertex and every edge midpoint owns a non-empty fiber."""
    points = [tree.vertex_point(v) for v in tree.vertices]
    points += [
        tree.point(v, tree.edge_length(v) / 2) for v in range(2, tree.vertex_count + 1)
    ]
    return all(fiber_of(tree, p, depth).cylinders for p in points)


def check_continuity_modulus(
    tree: DendriteGraph,
    pairs: int = 10_000,
    seed: int = 0,
    max_prefix: int = 24,
) -> bool:
    """Sampled modulus of continuity: pairs agreeing on their first m symbols
    land within tour_length * 2**-m of each other on the tree."""
    rng = random.Random(seed)
    total = tree.tour_length
    done = 0
    while done < pairs:
        shared = "".join(rng.choice("01") for _ in range(rng.randrange(max_prefix)))
        a = Address(shared + "".join(rng.choice("01") for _ in range(4)), rng.choice("01"))
        b = Address(shared + "".join(rng.choice("01") for _ in range(4)), rng.choice("01"))
        if a == b:
            continue
        done += 1
        m = _agreement(a, b)
        bound = total * Fraction(1, 2**m)
        d = tree.distance(dendrite_map(tree, a), dendrite_map(tree, b))
        if d > bound:
            return False
    return True


def _agreement(a: Address, b: Address) -> int:
    n = max(len(a.prefix), len(b.prefix)) + 1
    sa, sb = a.symbols(n), b.symbols(n)
    for i in range(n):
        if sa[i] != sb[i]:
            return i
    raise ValueError("addresses coincide")


@dataclass(frozen=True)
class LevelDendriteMap:
    """The dendrite surjection carried up to one coarse-graining floor.

    Labels pull back to ground addresses through the tower, then map to the
    tree; the fibers realize the tree as a decomposition of the floor.
    """

    tree: DendriteGraph
    level: HierarchyLevel

    def __call__(self, label: Address) -> DendritePoint:
        return dendrite_map(self.tree, self.level.to_base(label))

    def fiber(self, p: DendritePoint, depth: int) -> tuple[Cylinder, ...]:
        """Carrier cylinders over ``p``: the ground fiber pushed up the tower."""
        ground = fiber_of(self.tree, p, depth)
        forward = self.level.to_base.inverse()
        image = map_clopen(forward, ClopenSet(ground.cylinders))
        return image.cylinders


def lift_to_level(level: HierarchyLevel, tree: DendriteGraph) -> LevelDendriteMap:
    """The dendrite map on a hierarchy floor; floor 0 gives the map itself."""
    return LevelDendriteMap(tree=tree, level=level)
