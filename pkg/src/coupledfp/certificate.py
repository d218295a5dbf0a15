"""Sampled certification of the rational contraction hypothesis.

The hypothesis quantifies over every ordered pair of pairs in X x X, which
no finite procedure can prove. This module does the honest finite thing:
draw ordered pairs, measure the inequality's margin at each, report the
worst, and (going the other way) search for the smallest geometric ratio
r = beta / (1 - alpha) whose parameters survive all drawn samples. A clean
report reads "not falsified at N samples, worst margin m" -- never "holds".

Violations like to hide near thin sets where the rational term vanishes, so
`certify_region` always mixes a deterministic family of directed pairs
(diagonals, box extremes, short iteration segments, user-registered
adversaries) into the uniform draw.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError
from .maps import ContractionParams, CoupledMap, rational_min_term
from .parallel import pmap
from .spaces import Pair, SpaceDescriptor, as_point, distance, product_leq

# Resolution of the bisection search for the minimal feasible ratio.
RATIO_TOL = 1e-6
# Witness alpha is pulled this far inside its feasible interval so that the
# reported params re-certify with strictly nonnegative float margins.
ALPHA_INSET = 1e-9


@dataclass(frozen=True, eq=False)
class SamplePair:
    """One ordered pair of pairs with its cached inequality ingredients.

    ``b <= a`` in the pair order always holds. ``image_distance`` is
    d(F(x,y), F(u,v)), ``rational_term`` the min rational quantity, and
    ``distance_sum`` d(x,u) + d(y,v); together they determine the margin
    alpha * rational_term + (beta/2) * distance_sum - image_distance for
    any parameter choice.
    """

    a: Pair
    b: Pair
    image_distance: float
    rational_term: float
    distance_sum: float

    def margin(self, params: ContractionParams) -> float:
        return (
            params.alpha * self.rational_term
            + 0.5 * params.beta * self.distance_sum
            - self.image_distance
        )


def make_sample_pair(space: SpaceDescriptor, F: CoupledMap, a: Pair, b: Pair) -> SamplePair:
    """Cache the margin ingredients for an ordered pair of pairs."""
    if not product_leq(space, b, a):
        raise InputError("sample pairs require b <= a in the pair order")
    image_distance = distance(
        space, F.evaluate(a.first, a.second), F.evaluate(b.first, b.second)
    )
    return SamplePair(
        a=a,
        b=b,
        image_distance=image_distance,
        rational_term=rational_min_term(space, F, a, b),
        distance_sum=distance(space, a.first, b.first)
        + distance(space, a.second, b.second),
    )


def _region_bounds(F: CoupledMap, region_box) -> tuple[np.ndarray, np.ndarray]:
    if region_box is None:
        return F.lower.copy(), F.upper.copy()
    lo, hi = region_box
    lo = as_point(lo, dim=F.dim)
    hi = as_point(hi, dim=F.dim)
    if np.any(lo > hi):
        raise InputError("region box has lower > upper")
    if np.any(lo < F.lower) or np.any(hi > F.upper):
        raise InputError("region box must lie inside the map's domain box")
    return lo, hi


def sample_comparable_pairs(
    space: SpaceDescriptor,
    F: CoupledMap,
    region_box,
    count: int,
    rng_seed: int,
) -> list[SamplePair]:
    """Draw ``count`` ordered pairs of pairs uniformly-ish over the region.

    b is uniform in the box; a adds a nonnegative offset to the first
    component and a nonpositive one to the second, clipped back to the box,
    so b <= a holds by construction. Deterministic for a given seed: all
    randomness is drawn in one fixed-layout block up front.
    """
    if count < 0:
        raise InputError(f"count must be >= 0, got {count}")
    lo, hi = _region_bounds(F, region_box)
    if count == 0:
        return []
    rng = np.random.default_rng(rng_seed)
    width = hi - lo
    b_first = rng.uniform(lo, hi, size=(count, F.dim))
    b_second = rng.uniform(lo, hi, size=(count, F.dim))
    up = rng.uniform(0.0, 1.0, size=(count, F.dim)) * width
    down = rng.uniform(0.0, 1.0, size=(count, F.dim)) * width
    a_first = np.minimum(b_first + up, hi)
    a_second = np.maximum(b_second - down, lo)

    def build(k: int) -> SamplePair:
        return make_sample_pair(
            space, F, Pair(a_first[k], a_second[k]), Pair(b_first[k], b_second[k])
        )

    return pmap(build, range(count))


def directed_pairs(
    space: SpaceDescriptor, F: CoupledMap, region_box=None, walk_steps: int = 8
) -> list[SamplePair]:
    """Deterministic pairs aimed at the places uniform sampling misses.

    Three families: diagonal pairs a = b at box extremes and center (their
    margin degenerates to alpha * rational_term), the extreme ordered pair
    (top, bottom) vs (bottom, top) and its half-way variants, and
    consecutive iterates of a short walk started from (bottom, top), whose
    rational term shrinks with the displacement. Non-comparable or
    out-of-domain candidates are silently skipped.
    """
    lo, hi = _region_bounds(F, region_box)
    mid = 0.5 * (lo + hi)
    pairs: list[tuple[Pair, Pair]] = []
    for p in (lo, mid, hi):
        for q in (lo, mid, hi):
            pairs.append((Pair(p, q), Pair(p, q)))
    extremes = [
        (Pair(hi, lo), Pair(lo, hi)),
        (Pair(mid, mid), Pair(lo, hi)),
        (Pair(hi, lo), Pair(mid, mid)),
    ]
    pairs.extend(extremes)

    x, y = lo, hi
    try:
        for _ in range(walk_steps):
            x_next, y_next = F.evaluate(x, y), F.evaluate(y, x)
            pairs.append((Pair(x_next, y_next), Pair(x, y)))
            x, y = x_next, y_next
    except DomainError:
        pass  # walk left the box; keep what we have

    out = []
    for a, b in pairs:
        if product_leq(space, b, a):
            out.append(make_sample_pair(space, F, a, b))
    return out


@dataclass(frozen=True, eq=False)
class CertificateReport:
    """Aggregated margins of one parameter choice over a sample set."""

    sample_count: int
    violations: int
    worst_margin: float | None
    min_margin_pair: SamplePair | None
    params: ContractionParams

    @property
    def falsified(self) -> bool:
        return self.violations > 0

    def to_jsonable(self) -> dict:
        worst = self.min_margin_pair
        return {
            "sample_count": self.sample_count,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "min_margin_pair": None
            if worst is None
            else {
                "a_first": worst.a.first.tolist(),
                "a_second": worst.a.second.tolist(),
                "b_first": worst.b.first.tolist(),
                "b_second": worst.b.second.tolist(),
                "image_distance": worst.image_distance,
                "rational_term": worst.rational_term,
                "distance_sum": worst.distance_sum,
            },
            "params": {"alpha": self.params.alpha, "beta": self.params.beta},
        }


def evaluate_samples(
    params: ContractionParams, samples: list[SamplePair]
) -> CertificateReport:
    """Margins of a fixed sample set under one parameter choice.

    Aggregation is a count and a min, so it is order independent.
    """
    margins = pmap(lambda s: s.margin(params), samples)
    violations = sum(1 for m in margins if m < 0)
    if margins:
        worst_idx = int(np.argmin(margins))
        worst_margin: float | None = float(margins[worst_idx])
        worst_pair: SamplePair | None = samples[worst_idx]
    else:
        worst_margin = None
        worst_pair = None
    return CertificateReport(
        sample_count=len(samples),
        violations=violations,
        worst_margin=worst_margin,
        min_margin_pair=worst_pair,
        params=params,
    )


def certify_region(
    space: SpaceDescriptor,
    F: CoupledMap,
    params: ContractionParams,
    region_box=None,
    count: int = 10_000,
    rng_seed: int = 0,
    adversarial_pairs: list[tuple[Pair, Pair]] | None = None,
    include_directed: bool = True,
) -> CertificateReport:
    """Falsification-style certificate for (alpha, beta) over a region.

    Draws ``count`` random ordered pairs, adds the deterministic directed
    family and any user-registered adversarial pairs, and aggregates the
    margins. Zero violations means the hypothesis survived this sample set,
    nothing stronger.
    """
    samples = sample_comparable_pairs(space, F, region_box, count, rng_seed)
    if include_directed:
        samples.extend(directed_pairs(space, F, region_box))
    for a, b in adversarial_pairs or []:
        samples.append(make_sample_pair(space, F, a, b))
    return evaluate_samples(params, samples)


@dataclass(frozen=True)
class ParamEstimate:
    """Smallest-ratio parameters consistent with a sample set.

    ``feasible`` is False when no (alpha, beta) in the admissible triangle
    satisfies every sample, in which case the other fields are None.
    """

    feasible: bool
    ratio: float | None
    alpha: float | None
    beta: float | None
    sample_count: int
    ratio_tol: float = RATIO_TOL

    def to_jsonable(self) -> dict:
        return {
            "feasible": self.feasible,
            "ratio": self.ratio,
            "alpha": self.alpha,
            "beta": self.beta,
            "sample_count": self.sample_count,
            "ratio_tol": self.ratio_tol,
        }


def _alpha_interval(
    r: float, image_distance: np.ndarray, rational_term: np.ndarray, distance_sum: np.ndarray
) -> tuple[float, float]:
    """Feasible alpha interval at fixed ratio r (empty when lo > hi).

    Substituting beta = r * (1 - alpha) turns each sample constraint into
    alpha * (rational_term - r * distance_sum / 2) >= image_distance
    - r * distance_sum / 2, a one-dimensional inequality whose solutions
    form a half-line; the feasible set is the intersection over samples,
    clipped to [0, 1).
    """
    slope = rational_term - 0.5 * r * distance_sum
    offset = image_distance - 0.5 * r * distance_sum
    lo, hi = 0.0, 1.0 - ALPHA_INSET
    pos = slope > 0
    neg = slope < 0
    zero = ~pos & ~neg
    if np.any(offset[zero] > 0):
        return 1.0, 0.0
    if np.any(pos):
        lo = max(lo, float(np.max(offset[pos] / slope[pos])))
    if np.any(neg):
        hi = min(hi, float(np.min(offset[neg] / slope[neg])))
    return lo, hi


def estimate_params(samples: list[SamplePair]) -> ParamEstimate:
    """Invert the contraction inequality: minimal ratio over the samples.

    The constraints are linear in (alpha, beta) and feasibility is monotone
    in the ratio, so a bisection on r in (0, 1) with an exact interval
    intersection in alpha at each candidate finds the minimum to RATIO_TOL.
    When even arbitrarily small ratios are feasible the bisection floor is
    reported; when no ratio below 1 works the estimate is infeasible.
    """
    if not samples:
        raise InputError("estimate_params needs at least one sample")
    image_distance = np.array([s.image_distance for s in samples])
    rational_term = np.array([s.rational_term for s in samples])
    distance_sum = np.array([s.distance_sum for s in samples])

    def feasible(r: float) -> bool:
        lo, hi = _alpha_interval(r, image_distance, rational_term, distance_sum)
        return lo <= hi

    r_hi = 1.0 - RATIO_TOL
    if not feasible(r_hi):
        return ParamEstimate(False, None, None, None, len(samples))
    r_lo = 0.0
    while r_hi - r_lo > RATIO_TOL:
        mid = 0.5 * (r_lo + r_hi)
        if feasible(mid):
            r_hi = mid
        else:
            r_lo = mid

    r_star = max(r_hi, RATIO_TOL)  # beta must stay positive
    lo, hi = _alpha_interval(r_star, image_distance, rational_term, distance_sum)
    alpha = min(hi, lo + ALPHA_INSET) if lo > 0 else lo
    beta = r_star * (1.0 - alpha)
    return ParamEstimate(True, r_star, float(alpha), float(beta), len(samples))
