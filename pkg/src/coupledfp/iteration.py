"""The coupled Picard iteration and its runtime-checkable conclusions.

Given a map F and a seed (x0, y0), the scheme alternates

    x_{n+1} = F(x_n, y_n),   y_{n+1} = F(y_n, x_n)

and, under the rational contraction hypothesis with ratio
r = beta / (1 - alpha), consecutive gaps obey the geometric bound
r^n * D0 with D0 the mean of the first two gaps. This module runs the
iteration, checks the seed condition, verifies the resulting pair, audits
the monotone chain structure, and probes uniqueness from several seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, TextIO

import numpy as np

from .errors import DivergenceError, DomainError, InputError
from .maps import ContractionParams, CoupledMap
from .parallel import pmap
from .spaces import (
    Pair,
    SpaceDescriptor,
    as_point,
    comparable,
    distance,
    find_bridge,
    leq,
)

# Iterates may drift past the strict domain box before divergence is called;
# the box is inflated by this factor about its center for the escape check.
DIVERGENCE_PADDING = 2.0


@dataclass(frozen=True)
class IterationConfig:
    """Solver knobs: iteration budget, target accuracy, optional params.

    When ``params`` is present the stopping rule is the a-posteriori
    geometric tail  max(gap_x, gap_y) * r / (1 - r) <= tol, a sound bound
    on the distance from the newest iterate to the limit; without params it
    falls back to max(gap_x, gap_y) <= tol. ``tol`` also drives the
    component-equality flag (see SolveResult).
    """

    max_iter: int = 200
    tol: float = 1e-10
    params: ContractionParams | None = None
    record_trace: bool = True

    def __post_init__(self):
        if not isinstance(self.max_iter, int) or self.max_iter < 1:
            raise InputError(f"max_iter must be a positive integer, got {self.max_iter!r}")
        if not (float(self.tol) > 0):
            raise InputError(f"tol must be > 0, got {self.tol!r}")


class TraceEntry(NamedTuple):
    n: int
    x: np.ndarray
    y: np.ndarray
    gap_x: float
    gap_y: float
    bound: float | None


@dataclass
class IterationTrace:
    """Recorded iterates with forward gaps and optional geometric bounds."""

    entries: list[TraceEntry] = field(default_factory=list)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def initial_mean_gap(self) -> float:
        """(gap_x + gap_y) / 2 at step 0: the base of the a-priori bounds."""
        if not self.entries:
            raise InputError("empty trace")
        first = self.entries[0]
        return 0.5 * (first.gap_x + first.gap_y)

    def write_csv(self, stream: TextIO) -> None:
        """Rows n,x_0..x_{d-1},y_0..y_{d-1},gap_x,gap_y,bound.

        The bound column is empty when no params were configured. Floats are
        written in decimal with 17 significant digits, enough to round-trip.
        """
        if not self.entries:
            raise InputError("empty trace")
        dim = self.entries[0].x.size
        cols = (
            ["n"]
            + [f"x_{i}" for i in range(dim)]
            + [f"y_{i}" for i in range(dim)]
            + ["gap_x", "gap_y", "bound"]
        )
        stream.write(",".join(cols) + "\n")
        for e in self.entries:
            cells = [str(e.n)]
            cells += [format(c, ".17g") for c in e.x]
            cells += [format(c, ".17g") for c in e.y]
            cells += [format(e.gap_x, ".17g"), format(e.gap_y, ".17g")]
            cells.append("" if e.bound is None else format(e.bound, ".17g"))
            stream.write(",".join(cells) + "\n")


@dataclass(frozen=True)
class SolveResult:
    """What the iteration produced and which conclusions were verified.

    ``converged`` is true only when the stopping rule fired *and* the
    returned pair passed the fixed-point verification at ``tol``, so
    ``converged`` implies ``final_residual <= tol``. ``seed_condition_held``
    records whether the starting hypothesis x0 <= F(x0,y0), y0 >= F(y0,x0)
    was satisfied; when it fails the run is still performed but its
    convergence is empirical rather than guaranteed.

    ``components_equal`` uses the threshold 2 * tol: the stop rule bounds
    each component's distance to the common limit by tol, so equal limit
    components are only guaranteed to land within 2 * tol of each other.
    """

    fixed_pair: Pair
    iterations_used: int
    final_residual: float
    converged: bool
    seed_condition_held: bool
    components_equal: bool


def check_seed_condition(space: SpaceDescriptor, F: CoupledMap, x0, y0) -> bool:
    """x0 <= F(x0, y0) and F(y0, x0) <= y0."""
    x0 = as_point(x0, dim=F.dim)
    y0 = as_point(y0, dim=F.dim)
    return leq(space, x0, F.evaluate(x0, y0)) and leq(space, F.evaluate(y0, x0), y0)


def verify_coupled_fixed_point(
    space: SpaceDescriptor,
    F: CoupledMap,
    pair: Pair,
    tol: float,
    padding: float = 1.0,
) -> tuple[bool, float]:
    """Residual max(d(F(x,y), x), d(F(y,x), y)) and whether it is <= tol."""
    residual = max(
        distance(space, F.evaluate(pair.first, pair.second, padding), pair.first),
        distance(space, F.evaluate(pair.second, pair.first, padding), pair.second),
    )
    return residual <= tol, residual


def _step(F: CoupledMap, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        x_next = F.evaluate(x, y, padding=DIVERGENCE_PADDING)
        y_next = F.evaluate(y, x, padding=DIVERGENCE_PADDING)
    except DomainError as exc:
        raise DivergenceError(f"iteration escaped the padded domain box: {exc}") from exc
    return x_next, y_next


def iterate(
    space: SpaceDescriptor,
    F: CoupledMap,
    x0,
    y0,
    config: IterationConfig | None = None,
) -> tuple[SolveResult, IterationTrace]:
    """Run the coupled iteration from (x0, y0) until the stopping rule fires.

    The seed condition is checked but not enforced: a failing seed is
    flagged in the result and the iteration proceeds anyway. Divergence
    (non-finite values or escape from the padded box) raises
    :class:`DivergenceError`. Deterministic: identical inputs give
    identical traces.
    """
    config = config or IterationConfig()
    x = as_point(x0, dim=F.dim)
    y = as_point(y0, dim=F.dim)
    seed_ok = check_seed_condition(space, F, x, y)

    params = config.params
    ratio = params.ratio if params is not None else None
    trace = IterationTrace()
    base_gap: float | None = None
    stopped = False
    iterations = 0

    for n in range(config.max_iter):
        x_next, y_next = _step(F, x, y)
        gap_x = distance(space, x_next, x)
        gap_y = distance(space, y_next, y)
        if base_gap is None:
            base_gap = 0.5 * (gap_x + gap_y)
        bound = None if ratio is None else ratio**n * base_gap
        if config.record_trace:
            trace.entries.append(TraceEntry(n, x, y, gap_x, gap_y, bound))
        x, y = x_next, y_next
        iterations = n + 1
        worst_gap = max(gap_x, gap_y)
        if ratio is None:
            stopped = worst_gap <= config.tol
        else:
            stopped = worst_gap * ratio / (1.0 - ratio) <= config.tol
        if stopped:
            break

    pair = Pair(x, y)
    try:
        ok, residual = verify_coupled_fixed_point(
            space, F, pair, config.tol, padding=DIVERGENCE_PADDING
        )
    except DomainError as exc:
        raise DivergenceError(
            f"final iterate escaped the padded domain box: {exc}"
        ) from exc
    result = SolveResult(
        fixed_pair=pair,
        iterations_used=iterations,
        final_residual=residual,
        converged=stopped and ok,
        seed_condition_held=seed_ok,
        components_equal=distance(space, x, y) <= 2.0 * config.tol,
    )
    return result, trace


def apriori_gap_bound(params: ContractionParams, initial_mean_gap: float, step: int) -> float:
    """Geometric bound ratio**step * D0 on the gap at the given step.

    D0 is the mean of the two first-step gaps; the claim covers steps >= 1
    (at step 0 an individual gap can exceed the mean of the two).
    """
    if initial_mean_gap < 0:
        raise InputError("initial_mean_gap must be >= 0")
    if step < 0:
        raise InputError("step must be >= 0")
    return params.ratio**step * initial_mean_gap


def apriori_iteration_count(
    params: ContractionParams, initial_mean_gap: float, eps: float
) -> int:
    """Smallest n with ratio**n * D0 / (1 - ratio) <= eps.

    Summing the geometric gap bounds gives the tail estimate
    d(limit, x_n) <= ratio**n * D0 / (1 - ratio); this inverts it.
    """
    if not (eps > 0):
        raise InputError(f"eps must be > 0, got {eps}")
    if initial_mean_gap < 0:
        raise InputError("initial_mean_gap must be >= 0")
    r = params.ratio
    tail0 = initial_mean_gap / (1.0 - r)
    if tail0 <= eps:
        return 0
    n = max(0, math.ceil(math.log(eps / tail0) / math.log(r)))
    # Guard the log against float rounding on either side.
    while r**n * tail0 > eps:
        n += 1
    while n > 0 and r ** (n - 1) * tail0 <= eps:
        n -= 1
    return n


@dataclass(frozen=True)
class ChainViolation:
    step: int
    kind: str  # "x-monotone", "y-monotone", "x-limit", "y-limit"


@dataclass(frozen=True)
class ChainReport:
    """Audit of the monotone chain structure of a recorded trace.

    ``monotone_ok``: x_n <= x_{n+1} and y_{n+1} <= y_n for consecutive
    recorded iterates and from the last iterate to the limit.
    ``limit_ok``: every x_n <= x_limit and y_limit <= y_n, the
    limit-comparison property that coordinatewise convergence makes
    automatic here.
    """

    entries_checked: int
    monotone_ok: bool
    limit_ok: bool
    first_violation: ChainViolation | None

    @property
    def passed(self) -> bool:
        return self.monotone_ok and self.limit_ok


def check_monotone_chain(
    space: SpaceDescriptor, trace: IterationTrace, limit: Pair
) -> ChainReport:
    """Check ascent of x_n, descent of y_n, and comparison with the limit."""
    if not trace.entries:
        raise InputError("empty trace")
    violations: list[ChainViolation] = []
    entries = trace.entries
    chain = [(e.n, e.x, e.y) for e in entries]
    chain.append((entries[-1].n + 1, limit.first, limit.second))
    for (n, x_cur, y_cur), (_, x_nxt, y_nxt) in zip(chain, chain[1:]):
        if not leq(space, x_cur, x_nxt):
            violations.append(ChainViolation(n, "x-monotone"))
        if not leq(space, y_nxt, y_cur):
            violations.append(ChainViolation(n, "y-monotone"))
    monotone_ok = not violations
    limit_violations: list[ChainViolation] = []
    for e in entries:
        if not leq(space, e.x, limit.first):
            limit_violations.append(ChainViolation(e.n, "x-limit"))
        if not leq(space, limit.second, e.y):
            limit_violations.append(ChainViolation(e.n, "y-limit"))
    all_violations = sorted(violations + limit_violations, key=lambda v: v.step)
    return ChainReport(
        entries_checked=len(entries),
        monotone_ok=monotone_ok,
        limit_ok=not limit_violations,
        first_violation=all_violations[0] if all_violations else None,
    )


@dataclass(frozen=True)
class SeedRun:
    """Outcome of one probe run: its seed, result, or divergence message."""

    seed: Pair
    result: SolveResult | None
    error: str | None


@dataclass(frozen=True)
class BridgeCheck:
    """Bridging witness for one pair of limits: comparable to both or not."""

    index_a: int
    index_b: int
    bridge: Pair
    comparable_to_both: bool


@dataclass(frozen=True)
class UniquenessReport:
    """Empirical uniqueness evidence from multiple seeds.

    Uniqueness is probed, not proved: the report says whether every
    converged run landed on the same pair and exhibits a bridging pair
    comparable to each pair of limits, the hypothesis a uniqueness
    argument needs. Agreement uses the threshold 2 * tol: each run only
    guarantees its result within tol of the true limit, so two runs on the
    same limit can sit up to 2 * tol apart.
    """

    runs: list[SeedRun]
    max_pairwise_distance: float | None
    all_agree: bool
    bridges: list[BridgeCheck]
    tol: float


def _pair_distance(space: SpaceDescriptor, a: Pair, b: Pair) -> float:
    return max(distance(space, a.first, b.first), distance(space, a.second, b.second))


def uniqueness_probe(
    space: SpaceDescriptor,
    F: CoupledMap,
    seeds: Sequence[Pair],
    config: IterationConfig | None = None,
) -> UniquenessReport:
    """Iterate from every seed and compare the limits pairwise.

    Seeds violating the seed condition are still run (and flagged in their
    SolveResult); a diverging run is recorded per-seed without aborting the
    probe. For every pair of converged limits a bridge element is produced
    and checked for comparability with both.
    """
    if not seeds:
        raise InputError("at least one seed is required")

    def run(seed: Pair) -> SeedRun:
        try:
            result, _ = iterate(space, F, seed.first, seed.second, config)
            return SeedRun(seed, result, None)
        except DivergenceError as exc:
            return SeedRun(seed, None, str(exc))

    runs = pmap(run, list(seeds))
    limits = [
        (i, r.result.fixed_pair)
        for i, r in enumerate(runs)
        if r.result is not None and r.result.converged
    ]
    tol = (config or IterationConfig()).tol
    max_dist: float | None = None
    bridges: list[BridgeCheck] = []
    for k, (i, pa) in enumerate(limits):
        for j, pb in limits[k + 1 :]:
            d = _pair_distance(space, pa, pb)
            max_dist = d if max_dist is None else max(max_dist, d)
            z = find_bridge(space, pa, pb)
            bridges.append(
                BridgeCheck(
                    i, j, z, comparable(space, z, pa) and comparable(space, z, pb)
                )
            )
    all_converged = all(r.result is not None and r.result.converged for r in runs)
    agree = all_converged and (max_dist is None or max_dist <= 2.0 * tol)
    return UniquenessReport(
        runs=list(runs),
        max_pairwise_distance=max_dist,
        all_agree=agree,
        bridges=bridges,
        tol=tol,
    )
