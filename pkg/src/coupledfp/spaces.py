"""Concrete ordered metric spaces: R^d with a norm metric and the
coordinatewise partial order, plus the reversed-second-component order on
pairs.

Points are plain 1-D float arrays (scalars are promoted to 1-vectors).
All functions here are pure and safe to call from any thread.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InputError

METRICS = ("euclidean", "max", "l1")

_NORM_ORDER = {"euclidean": 2, "max": np.inf, "l1": 1}


def as_point(coords, dim: int | None = None) -> np.ndarray:
    """Validate and normalize a point to a finite 1-D float array.

    Scalars become 1-vectors. Raises :class:`InputError` on non-finite
    coordinates and :class:`DimensionMismatchError` when ``dim`` is given
    and does not match.
    """
    arr = np.atleast_1d(np.asarray(coords, dtype=float))
    if arr.ndim != 1:
        raise InputError(f"a point must be a flat sequence, got shape {arr.shape}")
    if arr.size == 0:
        raise InputError("a point needs at least one coordinate")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"point has non-finite coordinates: {arr!r}")
    if dim is not None and arr.size != dim:
        raise DimensionMismatchError(f"expected dimension {dim}, got {arr.size}")
    return arr


@dataclass(frozen=True, eq=False)
class Pair:
    """An element of the product space: two points of equal dimension."""

    first: np.ndarray
    second: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "first", as_point(self.first))
        object.__setattr__(self, "second", as_point(self.second, dim=self.first.size))

    @property
    def dim(self) -> int:
        return self.first.size

    def swapped(self) -> "Pair":
        return Pair(self.second, self.first)

    def __repr__(self):
        return f"Pair({self.first.tolist()}, {self.second.tolist()})"


@dataclass(frozen=True)
class SpaceDescriptor:
    """The ambient space (X, d, <=): dimension, metric, order tolerance.

    ``order_slack`` widens the coordinatewise order to ``p_i <= q_i + slack``.
    With slack 0 (the default) the relation is a genuine partial order;
    nonzero slack breaks transitivity and antisymmetry and is meant only for
    diagnostics, never for the solver's correctness arguments.
    """

    dim: int
    metric: str = "euclidean"
    order_slack: float = 0.0

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise InputError(f"dim must be a positive integer, got {self.dim!r}")
        if self.metric not in METRICS:
            raise InputError(f"unknown metric {self.metric!r}; choose from {METRICS}")
        slack = float(self.order_slack)
        if not np.isfinite(slack) or slack < 0:
            raise InputError(f"order_slack must be finite and >= 0, got {self.order_slack!r}")
        object.__setattr__(self, "order_slack", slack)


def _check_dims(space: SpaceDescriptor, *points: np.ndarray) -> None:
    for p in points:
        if p.size != space.dim:
            raise DimensionMismatchError(
                f"point of dimension {p.size} in a space of dimension {space.dim}"
            )


def distance(space: SpaceDescriptor, p, q) -> float:
    """Metric distance between two points: the chosen norm of p - q."""
    p = as_point(p)
    q = as_point(q)
    _check_dims(space, p, q)
    return float(np.linalg.norm(p - q, ord=_NORM_ORDER[space.metric]))


def leq(space: SpaceDescriptor, p, q) -> bool:
    """Coordinatewise order: p <= q iff p_i <= q_i + order_slack for all i."""
    p = as_point(p)
    q = as_point(q)
    _check_dims(space, p, q)
    return bool(np.all(p <= q + space.order_slack))


def product_leq(space: SpaceDescriptor, a: Pair, b: Pair) -> bool:
    """Order on pairs with the second component reversed.

    (u, v) <= (x, y) holds iff u <= x and y <= v, so a pair grows when its
    first component rises and its second component falls.
    """
    _check_dims(space, a.first, b.first)
    return leq(space, a.first, b.first) and leq(space, b.second, a.second)


def comparable(space: SpaceDescriptor, a: Pair, b: Pair) -> bool:
    """True when the two pairs are ordered in either direction."""
    return product_leq(space, a, b) or product_leq(space, b, a)


def find_bridge(space: SpaceDescriptor, a: Pair, b: Pair) -> Pair:
    """A pair that dominates both inputs in the pair order.

    Takes the coordinatewise max of the first components and min of the
    second, so the result is >= both inputs and hence comparable to both.
    In a coordinatewise-ordered R^d such an element always exists, which is
    what makes the uniqueness hypothesis checkable here.
    """
    _check_dims(space, a.first, b.first, b.second)
    return Pair(np.maximum(a.first, b.first), np.minimum(a.second, b.second))
