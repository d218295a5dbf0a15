"""Two-variable maps F: X x X -> X and the rational contraction machinery.

This is the core of the package: the rational quantity entering the
contraction inequality, the inequality's margin at a given pair of pairs,
the mixed-monotonicity falsification check, and the single-variable
Dass-Gupta margin recovered on the diagonal f(x) = F(x, x).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ComparabilityError, DomainError, InputError
from .spaces import Pair, SpaceDescriptor, as_point, distance, product_leq


@dataclass(frozen=True)
class ContractionParams:
    """Admissible contraction parameters (alpha, beta).

    Requires alpha >= 0, beta > 0 and alpha + beta < 1, so the derived
    ratio beta / (1 - alpha) lies strictly inside (0, 1). alpha = 0 is
    accepted as the conservative limit (the rational term only ever helps)
    but a warning is emitted because the hypothesis is stated with
    alpha > 0.
    """

    alpha: float
    beta: float

    def __post_init__(self):
        alpha = float(self.alpha)
        beta = float(self.beta)
        if not (np.isfinite(alpha) and np.isfinite(beta)):
            raise InputError("alpha and beta must be finite")
        if alpha < 0:
            raise InputError(f"alpha must be >= 0, got {alpha}")
        if beta <= 0:
            raise InputError(f"beta must be > 0, got {beta}")
        if alpha + beta >= 1:
            raise InputError(f"alpha + beta must be < 1, got {alpha + beta}")
        if alpha == 0.0:
            warnings.warn(
                "alpha = 0 is the degenerate limit of the contraction hypothesis",
                UserWarning,
                stacklevel=2,
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def ratio(self) -> float:
        """Geometric rate beta / (1 - alpha) governing the gap bounds."""
        return self.beta / (1.0 - self.alpha)


@dataclass(frozen=True, eq=False)
class CoupledMap:
    """A deterministic two-variable map together with its claimed domain box.

    ``evaluator`` takes two 1-D float arrays of length ``dim`` and returns
    one; it must be total and deterministic on the box. The box is the
    region on which the map's hypotheses (monotonicity, contraction) are
    claimed; evaluation outside it raises :class:`DomainError`.
    """

    name: str
    dim: int
    evaluator: Callable[[np.ndarray, np.ndarray], np.ndarray]
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = as_point(self.lower, dim=self.dim)
        upper = as_point(self.upper, dim=self.dim)
        if np.any(lower > upper):
            raise InputError(f"empty domain box for map {self.name!r}: lower > upper")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def box_width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, p: np.ndarray, padding: float = 1.0) -> bool:
        """Whether p lies in the box inflated about its center by ``padding``."""
        center = 0.5 * (self.lower + self.upper)
        half = 0.5 * padding * (self.upper - self.lower)
        return bool(np.all(p >= center - half) and np.all(p <= center + half))

    def evaluate(self, x, y, padding: float = 1.0) -> np.ndarray:
        """Apply the map, enforcing the (possibly padded) domain box."""
        x = as_point(x, dim=self.dim)
        y = as_point(y, dim=self.dim)
        for p in (x, y):
            if not self.contains(p, padding):
                raise DomainError(
                    f"input {p.tolist()} outside the domain box of {self.name!r}"
                )
        out = np.atleast_1d(np.asarray(self.evaluator(x, y), dtype=float))
        if out.shape != (self.dim,):
            raise DomainError(
                f"map {self.name!r} returned shape {out.shape}, expected ({self.dim},)"
            )
        if not np.all(np.isfinite(out)):
            raise DomainError(f"map {self.name!r} returned non-finite values: {out!r}")
        return out


def eval_map(F: CoupledMap, x, y) -> np.ndarray:
    """F(x, y) with the strict domain check."""
    return F.evaluate(x, y)


def rational_min_term(space: SpaceDescriptor, F: CoupledMap, a: Pair, b: Pair) -> float:
    """The rational quantity coupling the two self-displacements.

    With a = (x, y) and b = (u, v), returns

        min( d(x,F(x,y)) * (2 + d(u,F(u,v)) + d(v,F(v,u))) / D,
             d(u,F(u,v)) * (2 + d(x,F(x,y)) + d(y,F(y,x))) / D )

    where D = 2 + d(x,u) + d(y,v). It is always >= 0, the denominator is
    always >= 2, and it vanishes whenever either pair is a coupled fixed
    pair (one numerator's leading factor is zero).
    """
    x, y = a.first, a.second
    u, v = b.first, b.second
    disp_x = distance(space, x, F.evaluate(x, y))
    disp_y = distance(space, y, F.evaluate(y, x))
    disp_u = distance(space, u, F.evaluate(u, v))
    disp_v = distance(space, v, F.evaluate(v, u))
    denom = 2.0 + distance(space, x, u) + distance(space, y, v)
    term_a = disp_x * (2.0 + disp_u + disp_v) / denom
    term_b = disp_u * (2.0 + disp_x + disp_y) / denom
    return min(term_a, term_b)


def contraction_margin(
    space: SpaceDescriptor,
    F: CoupledMap,
    params: ContractionParams,
    a: Pair,
    b: Pair,
) -> float:
    """Slack in the rational contraction inequality at an ordered pair of pairs.

    Requires b <= a in the pair order (first components ordered up, second
    components ordered down); the inequality is only claimed there. Returns

        alpha * Q(a, b) + (beta / 2) * (d(x,u) + d(y,v)) - d(F(x,y), F(u,v))

    with Q the rational min term; >= 0 means the inequality holds at (a, b).
    """
    if not product_leq(space, b, a):
        raise ComparabilityError(
            "contraction margin needs b <= a in the pair order "
            "(a.first >= b.first and a.second <= b.second)"
        )
    x, y = a.first, a.second
    u, v = b.first, b.second
    lhs = distance(space, F.evaluate(x, y), F.evaluate(u, v))
    span = distance(space, x, u) + distance(space, y, v)
    rhs = params.alpha * rational_min_term(space, F, a, b) + 0.5 * params.beta * span
    return rhs - lhs


def dass_gupta_margin(
    space: SpaceDescriptor,
    F: CoupledMap,
    params: ContractionParams,
    x_hat,
    y_hat,
) -> float:
    """Slack in the Dass-Gupta rational inequality for f(x) = F(x, x).

    Returns

        alpha * d(yh, f(yh)) * (1 + d(xh, f(xh))) / (1 + d(xh, yh))
        + beta * d(xh, yh) - d(f(xh), f(yh)),

    the single-variable contraction the coupled condition reduces to on
    diagonal pairs.
    """
    x_hat = as_point(x_hat, dim=F.dim)
    y_hat = as_point(y_hat, dim=F.dim)
    f_x = F.evaluate(x_hat, x_hat)
    f_y = F.evaluate(y_hat, y_hat)
    gap = distance(space, x_hat, y_hat)
    rhs = (
        params.alpha
        * distance(space, y_hat, f_y)
        * (1.0 + distance(space, x_hat, f_x))
        / (1.0 + gap)
        + params.beta * gap
    )
    return rhs - distance(space, f_x, f_y)


@dataclass(frozen=True)
class MonotoneWitness:
    """A sampled configuration where a monotonicity requirement failed."""

    kind: str  # "first-argument" or "second-argument"
    lo: np.ndarray
    hi: np.ndarray
    other: np.ndarray
    excess: float


@dataclass(frozen=True)
class MonotoneReport:
    """Outcome of sampling the mixed-monotone property.

    ``violations`` counts samples where either direction failed;
    ``worst_excess`` is the largest coordinatewise overshoot seen (0 when
    nothing failed). Zero violations means "not falsified at this sample
    count", never a proof.
    """

    sample_count: int
    violations: int
    worst_excess: float
    worst_witness: MonotoneWitness | None
    rng_seed: int

    @property
    def falsified(self) -> bool:
        return self.violations > 0


def mixed_monotone_check(
    space: SpaceDescriptor,
    F: CoupledMap,
    sample_count: int,
    rng_seed: int,
) -> MonotoneReport:
    """Sample the mixed-monotone property on the map's domain box.

    Each sample draws an ordered first-argument triple (x1 <= x2, y) and an
    ordered second-argument triple (x, y1 <= y2) uniformly in the box and
    checks F(x1, y) <= F(x2, y) and F(x, y1) >= F(x, y2) coordinatewise.
    Deterministic for a given ``rng_seed``.
    """
    if sample_count < 1:
        raise InputError(f"sample_count must be >= 1, got {sample_count}")
    rng = np.random.default_rng(rng_seed)
    lo, hi = F.lower, F.upper
    # One block draw so the stream layout is fixed regardless of evaluation
    # order.
    draws = rng.uniform(lo, hi, size=(sample_count, 6, F.dim))

    violations = 0
    worst_excess = 0.0
    worst: MonotoneWitness | None = None
    for k in range(sample_count):
        p, q, y_fix, x_fix, r, s = draws[k]
        x1, x2 = np.minimum(p, q), np.maximum(p, q)
        y1, y2 = np.minimum(r, s), np.maximum(r, s)
        excess_first = float(
            np.max(F.evaluate(x1, y_fix) - F.evaluate(x2, y_fix)) - space.order_slack
        )
        excess_second = float(
            np.max(F.evaluate(x_fix, y2) - F.evaluate(x_fix, y1)) - space.order_slack
        )
        bad = excess_first > 0 or excess_second > 0
        if bad:
            violations += 1
            if excess_first >= excess_second and excess_first > worst_excess:
                worst_excess = excess_first
                worst = MonotoneWitness("first-argument", x1, x2, y_fix, excess_first)
            elif excess_second > worst_excess:
                worst_excess = excess_second
                worst = MonotoneWitness("second-argument", y1, y2, x_fix, excess_second)
    return MonotoneReport(sample_count, violations, worst_excess, worst, rng_seed)
