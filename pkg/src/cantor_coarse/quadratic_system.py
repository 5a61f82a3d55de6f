"""The quadratic family mu*x*(1-x) above the escape threshold.

For mu > 4 the parabola leaves the unit square, its two inverse branches
contract [0, 1] into itself, and iterating them produces the nested
interval covers of the invariant Cantor-type set.  This module is the
double-precision side of the artifact: identities here hold to 1e-12 at
the working depths, while the exact arithmetic lives in the symbolic
layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .code_space import Address

__all__ = [
    "IDENTITY_TOL",
    "IntervalCover",
    "PointEstimate",
    "QuadraticParams",
    "StatementReport",
    "WeakContractionSystem",
    "hausdorff_distance",
    "inverse_branches",
    "invariant_cover",
    "itinerary_point",
    "logistic",
    "modulus_sum_threshold",
    "verify_statement_conditions",
]

IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class QuadraticParams:
    """Rate constant of the map mu*x*(1-x)."""

    mu: float

    def __post_init__(self) -> None:
        # the inverse branches are defined on all of [0, 1] only past the
        # escape threshold
        if not self.mu > 4:
            raise ValueError("mu must exceed 4: branch domain does not cover [0, 1]")


def logistic(p: QuadraticParams, x):
    """Evaluate mu*x*(1-x); accepts scalars or numpy arrays."""
    return p.mu * x * (1.0 - x)


@dataclass(frozen=True)
class WeakContractionSystem:
    """Finitely many one-to-one contracting branches of an interval.

    ``modulus`` holds one function eta -> alpha_j(eta) per branch and
    ``modulus_inf`` its infimum over eta > 0.  Smooth branches carry their
    constant Lipschitz bound, which satisfies the eta-dependent form
    vacuously.
    """

    branches: tuple[Callable, ...]
    modulus: tuple[Callable[[float], float], ...]
    modulus_inf: tuple[float, ...]
    fixed_points: tuple[float, ...]
    carrier: tuple[float, float] = (0.0, 1.0)
    fixed_point_tol: float = 1e-9

    def __post_init__(self) -> None:
        m = len(self.branches)
        if m < 2:
            raise ValueError("need at least two branches")
        if not (len(self.modulus) == len(self.modulus_inf) == m):
            raise ValueError("per-branch fields disagree on the branch count")
        for j in range(m):
            if not self.modulus_inf[j] > 0.0:
                raise ValueError(f"branch {j}: infimum modulus must be positive")
            for eta in (0.5, 1.0, 2.0):
                alpha = self.modulus[j](eta)
                if not 0.0 < alpha < 1.0:
                    raise ValueError(f"branch {j}: modulus {alpha} at eta={eta} not in (0, 1)")
        for z in self.fixed_points:
            residual = min(abs(float(b(z)) - z) for b in self.branches)
            if residual > self.fixed_point_tol:
                raise ValueError(f"recorded fixed point {z} has residual {residual}")

    @property
    def branch_count(self) -> int:
        return len(self.branches)


def inverse_branches(p: QuadraticParams) -> WeakContractionSystem:
    """The two inverse branches of the quadratic map as a contraction system.

    Solving mu*x*(1-x) = y gives x = (1 -+ sqrt(1 - 4y/mu))/2.  The low
    branch takes values in [0, 1/2] and the high branch in [1/2, 1], which
    fixes the symbolic coding orientation.  |f'| peaks at y = 1 with value
    1/sqrt(mu*(mu-4)), recorded as the constant modulus; the fixed points
    are 0 (low branch) and 1 - 1/mu (high branch).
    """
    mu = p.mu

    def low(y):
        return 0.5 * (1.0 - np.sqrt(1.0 - 4.0 * y / mu))

    def high(y):
        return 0.5 * (1.0 + np.sqrt(1.0 - 4.0 * y / mu))

    alpha = 1.0 / math.sqrt(mu * (mu - 4.0))

    def constant_modulus(eta: float, _alpha=alpha) -> float:
        return _alpha

    return WeakContractionSystem(
        branches=(low, high),
        modulus=(constant_modulus, constant_modulus),
        modulus_inf=(alpha, alpha),
        fixed_points=(0.0, 1.0 - 1.0 / mu),
    )


def modulus_sum_threshold() -> float:
    """The mu above which the two branch moduli sum below one: 2 + 2*sqrt(2)."""
    return 2.0 + 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class BranchCheck:
    branch: int
    strictly_monotone: bool
    derivative_sign_constant: bool
    direction: int  # +1 increasing, -1 decreasing, 0 neither


@dataclass(frozen=True)
class StatementReport:
    """Evidence for the injectivity / fixed-point / modulus-sum conditions."""

    branch_checks: tuple[BranchCheck, ...]
    injective: bool
    fixed_points: tuple[float, ...]
    distinct_fixed_points: int
    fixed_point_residual: float
    not_singleton: bool
    modulus_sum: float
    modulus_sum_below_one: bool

    @property
    def conditions(self) -> tuple[bool, bool, bool]:
        return (self.injective, self.not_singleton, self.modulus_sum_below_one)

    @property
    def all_pass(self) -> bool:
        return all(self.conditions)


def _distinct_count(values: tuple[float, ...], tol: float) -> int:
    if not values:
        return 0
    xs = sorted(values)
    return 1 + sum(1 for a, b in zip(xs, xs[1:]) if b - a > tol)


def verify_statement_conditions(
    sys: WeakContractionSystem,
    grid: int = 200_001,
    tol: float = IDENTITY_TOL,
) -> StatementReport:
    """Check the three contraction-system conditions; failures are reported,
    not raised.

    Injectivity is decided by strict monotonicity of each branch on a dense
    grid together with sign-constant centered difference quotients.
    """
    lo, hi = sys.carrier
    ys = np.linspace(lo, hi, grid)
    checks = []
    for j, branch in enumerate(sys.branches):
        vals = np.asarray(branch(ys), dtype=float)
        diffs = np.diff(vals)
        increasing = bool(np.all(diffs > 0))
        decreasing = bool(np.all(diffs < 0))
        slopes = vals[2:] - vals[:-2]
        sign_constant = bool(np.all(slopes > 0) or np.all(slopes < 0))
        checks.append(
            BranchCheck(
                branch=j,
                strictly_monotone=increasing or decreasing,
                derivative_sign_constant=sign_constant,
                direction=1 if increasing else (-1 if decreasing else 0),
            )
        )
    injective = all(c.strictly_monotone and c.derivative_sign_constant for c in checks)
    residual = max(
        (min(abs(float(b(z)) - z) for b in sys.branches) for z in sys.fixed_points),
        default=0.0,
    )
    distinct = _distinct_count(sys.fixed_points, tol)
    modulus_sum = float(sum(sys.modulus_inf))
    return StatementReport(
        branch_checks=tuple(checks),
        injective=injective,
        fixed_points=sys.fixed_points,
        distinct_fixed_points=distinct,
        fixed_point_residual=residual,
        not_singleton=distinct >= 2,
        modulus_sum=modulus_sum,
        modulus_sum_below_one=modulus_sum < 1.0,
    )


@dataclass(frozen=True, eq=False)
class IntervalCover:
    """Sorted disjoint closed subintervals of [0, 1] approximating the
    invariant set at one truncation depth."""

    depth: int
    intervals: np.ndarray  # shape (m, 2)

    def __post_init__(self) -> None:
        arr = np.array(self.intervals, dtype=float, copy=True)
        arr = np.atleast_2d(arr)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] == 0:
            raise ValueError("intervals must form a non-empty (m, 2) array")
        if np.any(arr[:, 0] > arr[:, 1]):
            raise ValueError("interval with negative length")
        if np.any(arr[1:, 0] <= arr[:-1, 1]):
            raise ValueError("intervals overlap or are unsorted")
        arr.flags.writeable = False
        object.__setattr__(self, "intervals", arr)

    def __len__(self) -> int:
        return int(self.intervals.shape[0])

    def subset_of(self, other: "IntervalCover") -> bool:
        """Every interval of self contained in a single interval of other."""
        lo, hi = self.intervals[:, 0], self.intervals[:, 1]
        idx = np.searchsorted(other.intervals[:, 0], lo, side="right") - 1
        if np.any(idx < 0):
            return False
        return bool(np.all(hi <= other.intervals[idx, 1]))

    def endpoint_distance(self, other: "IntervalCover") -> float:
        """Max absolute endpoint difference; requires equal interval counts."""
        if len(self) != len(other):
            raise ValueError("covers have different interval counts")
        return float(np.max(np.abs(self.intervals - other.intervals)))


def _branch_images(sys: WeakContractionSystem, intervals: np.ndarray) -> np.ndarray:
    """Images of the intervals under every branch, sorted and disjoint."""
    pieces = []
    for branch in sys.branches:
        ends = np.asarray(branch(intervals), dtype=float)
        pieces.append(np.sort(ends, axis=1))  # monotone branches map endpoints
    arr = np.vstack(pieces)
    arr = arr[np.argsort(arr[:, 0])]
    if np.any(arr[1:, 0] <= arr[:-1, 1]):
        raise ValueError("open set condition violated")
    return arr


def invariant_cover(sys: WeakContractionSystem, n: int) -> IntervalCover:
    """Depth-n cover of the invariant set: n-fold branch images of the carrier."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    ivs = np.array([[sys.carrier[0], sys.carrier[1]]], dtype=float)
    for _ in range(n):
        ivs = _branch_images(sys, ivs)
    return IntervalCover(n, ivs)


def refine_cover(sys: WeakContractionSystem, cover: IntervalCover) -> IntervalCover:
    """One more branch application: the union of branch images of ``cover``."""
    return IntervalCover(cover.depth + 1, _branch_images(sys, cover.intervals))


@dataclass(frozen=True)
class PointEstimate:
    """A point located to within ``radius`` of ``value``."""

    value: float
    radius: float

    @property
    def interval(self) -> tuple[float, float]:
        return (self.value - self.radius, self.value + self.radius)


def itinerary_point(sys: WeakContractionSystem, a: Address, n: int) -> PointEstimate:
    """Locate the point coded by ``a`` at depth ``n``.

    Applies the branches named by the first n symbols to the carrier,
    innermost symbol first, and returns the midpoint and half-width of the
    resulting interval.  The radius shrinks like modulus**n.
    """
    if n < 1:
        raise ValueError("depth must be at least 1")
    word = a.symbols(n)
    lo, hi = sys.carrier
    for sym in reversed(word):
        branch = sys.branches[int(sym)]
        lo, hi = sorted((float(branch(lo)), float(branch(hi))))
    return PointEstimate(0.5 * (lo + hi), 0.5 * (hi - lo))


def _distance_to_union(xs: np.ndarray, ivs: np.ndarray) -> np.ndarray:
    """Distance from each point to a sorted disjoint closed interval union."""
    flat = ivs.ravel()
    idx = np.searchsorted(flat, xs, side="left")
    left = np.where(idx > 0, xs - flat[np.maximum(idx - 1, 0)], np.inf)
    right = np.where(idx < flat.size, flat[np.minimum(idx, flat.size - 1)] - xs, np.inf)
    on_endpoint = (idx < flat.size) & (flat[np.minimum(idx, flat.size - 1)] == xs)
    inside = (idx % 2 == 1) | on_endpoint
    return np.where(inside, 0.0, np.minimum(left, right))


def _directed_hausdorff(A: np.ndarray, B: np.ndarray) -> float:
    # d(., B) is piecewise linear with slope +-1, so its sup over the
    # closed union A is attained at an endpoint of A or at a gap midpoint
    # of B lying inside A
    candidates = [A.ravel()]
    if B.shape[0] > 1:
        mids = 0.5 * (B[:-1, 1] + B[1:, 0])
        inside_a = _distance_to_union(mids, A) == 0.0
        candidates.append(mids[inside_a])
    xs = np.concatenate(candidates)
    return float(np.max(_distance_to_union(xs, B)))


def hausdorff_distance(c1: IntervalCover, c2: IntervalCover) -> float:
    """Exact Hausdorff distance between two closed interval unions."""
    return max(
        _directed_hausdorff(c1.intervals, c2.intervals),
        _directed_hausdorff(c2.intervals, c1.intervals),
    )
