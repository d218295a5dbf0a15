import json

import numpy as np
import pytest

from coupledfp import (
    ContractionParams,
    CoupledMap,
    InputError,
    Pair,
    SpaceDescriptor,
    certify_region,
    contraction_margin,
    directed_pairs,
    distance,
    estimate_params,
    evaluate_samples,
    make_sample_pair,
    product_leq,
    rational_min_term,
    sample_comparable_pairs,
)

ADVERSARIAL = (Pair([0.1], [-0.29]), Pair([0.01], [-0.02]))


def grid_minimal_ratio(samples, resolution=1e-3):
    """Brute-force oracle: scan alpha on a grid, take the smallest grid beta
    feasible against every sample, minimize beta/(1-alpha) over the grid."""
    d_img = np.array([s.image_distance for s in samples])
    term = np.array([s.rational_term for s in samples])
    span = np.array([s.distance_sum for s in samples])
    best = None
    alphas = np.arange(0.0, 1.0, resolution)
    for alpha in alphas:
        need = d_img - alpha * term
        with np.errstate(divide="ignore", invalid="ignore"):
            beta_req = np.where(span > 0, 2.0 * need / span, np.where(need > 0, np.inf, 0.0))
        beta_min = float(np.max(beta_req)) if beta_req.size else 0.0
        beta = max(resolution, np.ceil(max(beta_min, 0.0) / resolution) * resolution)
        if alpha + beta >= 1.0:
            continue
        # re-verify the candidate on every sample before accepting it
        margins = alpha * term + 0.5 * beta * span - d_img
        if np.all(margins >= 0):
            ratio = beta / (1.0 - alpha)
            if best is None or ratio < best:
                best = ratio
    return best


class TestSampler:
    def test_count_zero(self, linear):
        assert sample_comparable_pairs(linear.space, linear.map, None, 0, 1) == []

    def test_negative_count(self, linear):
        with pytest.raises(InputError):
            sample_comparable_pairs(linear.space, linear.map, None, -1, 1)

    def test_all_ordered(self, linear):
        samples = sample_comparable_pairs(linear.space, linear.map, None, 500, 13)
        assert len(samples) == 500
        for s in samples:
            assert product_leq(linear.space, s.b, s.a)

    def test_deterministic(self, linear):
        s1 = sample_comparable_pairs(linear.space, linear.map, None, 50, 3)
        s2 = sample_comparable_pairs(linear.space, linear.map, None, 50, 3)
        for a, b in zip(s1, s2):
            assert np.array_equal(a.a.first, b.a.first)
            assert a.image_distance == b.image_distance

    def test_degenerate_box(self, linear):
        box = ([0.5], [0.5])
        samples = sample_comparable_pairs(linear.space, linear.map, box, 20, 1)
        params = ContractionParams(0.1, 0.5)
        for s in samples:
            assert np.array_equal(s.a.first, s.b.first)
            assert s.distance_sum == 0.0
            assert s.margin(params) == params.alpha * s.rational_term
            assert s.margin(params) >= 0

    def test_region_must_lie_inside_domain(self, linear):
        with pytest.raises(InputError):
            sample_comparable_pairs(linear.space, linear.map, ([-5.0], [5.0]), 10, 1)

    def test_cached_values_match_fresh(self, linear, rng):
        samples = sample_comparable_pairs(linear.space, linear.map, None, 100, 21)
        space, F = linear.space, linear.map
        for s in samples:
            fresh_img = distance(
                space, F.evaluate(s.a.first, s.a.second), F.evaluate(s.b.first, s.b.second)
            )
            fresh_term = rational_min_term(space, F, s.a, s.b)
            fresh_span = distance(space, s.a.first, s.b.first) + distance(
                space, s.a.second, s.b.second
            )
            assert s.image_distance == pytest.approx(fresh_img, rel=1e-15)
            assert s.rational_term == pytest.approx(fresh_term, rel=1e-15)
            assert s.distance_sum == pytest.approx(fresh_span, rel=1e-15)

    def test_rejects_unordered_pair(self, linear):
        with pytest.raises(InputError):
            make_sample_pair(linear.space, linear.map, Pair([-1.0], [1.0]), Pair([0.0], [0.0]))


class TestCertify:
    def test_linear_certified_params_clean(self, linear):
        report = certify_region(
            linear.space, linear.map, ContractionParams(0.1, 0.5), count=10_000, rng_seed=7
        )
        assert report.violations == 0
        assert report.worst_margin >= 0.0

    def test_linear_bad_params_falsified_by_adversarial_pair(self, linear):
        report = certify_region(
            linear.space,
            linear.map,
            ContractionParams(0.1, 0.4),
            count=0,
            rng_seed=7,
            adversarial_pairs=[ADVERSARIAL],
            include_directed=False,
        )
        assert report.sample_count == 1
        assert report.violations == 1
        assert report.worst_margin <= -0.015
        a, b = ADVERSARIAL
        direct = contraction_margin(
            linear.space, linear.map, ContractionParams(0.1, 0.4), a, b
        )
        assert report.worst_margin == pytest.approx(direct, rel=1e-15)

    def test_directed_family_catches_bad_params_alone(self, linear):
        report = certify_region(
            linear.space, linear.map, ContractionParams(0.1, 0.4), count=0, rng_seed=7
        )
        assert report.violations >= 1

    def test_empty_report(self, linear):
        report = certify_region(
            linear.space,
            linear.map,
            ContractionParams(0.1, 0.5),
            count=0,
            rng_seed=7,
            include_directed=False,
        )
        assert report.sample_count == 0
        assert report.violations == 0
        assert report.worst_margin is None
        assert report.min_margin_pair is None

    def test_worst_margin_monotone_in_params(self, linear):
        samples = sample_comparable_pairs(linear.space, linear.map, None, 2_000, 5)
        samples += directed_pairs(linear.space, linear.map)
        base = evaluate_samples(ContractionParams(0.1, 0.5), samples)
        more_beta = evaluate_samples(ContractionParams(0.1, 0.55), samples)
        more_alpha = evaluate_samples(ContractionParams(0.15, 0.5), samples)
        assert more_beta.worst_margin >= base.worst_margin
        assert more_alpha.worst_margin >= base.worst_margin

    def test_deterministic_reports(self, linear):
        params = ContractionParams(0.1, 0.5)
        r1 = certify_region(linear.space, linear.map, params, count=500, rng_seed=9)
        r2 = certify_region(linear.space, linear.map, params, count=500, rng_seed=9)
        assert r1.worst_margin == r2.worst_margin
        assert r1.violations == r2.violations

    def test_independent_of_thread_count(self, linear, monkeypatch):
        params = ContractionParams(0.1, 0.5)
        monkeypatch.setenv("COUPLED_FP_THREADS", "1")
        serial = certify_region(linear.space, linear.map, params, count=400, rng_seed=9)
        monkeypatch.setenv("COUPLED_FP_THREADS", "4")
        threaded = certify_region(linear.space, linear.map, params, count=400, rng_seed=9)
        assert serial.worst_margin == threaded.worst_margin
        assert serial.violations == threaded.violations
        assert np.array_equal(
            serial.min_margin_pair.a.first, threaded.min_margin_pair.a.first
        )

    def test_json_round_trip(self, linear):
        report = certify_region(
            linear.space, linear.map, ContractionParams(0.1, 0.5), count=50, rng_seed=2
        )
        doc = json.loads(json.dumps(report.to_jsonable()))
        assert doc["sample_count"] == report.sample_count
        assert doc["params"]["beta"] == 0.5
        assert doc["min_margin_pair"]["a_first"] == report.min_margin_pair.a.first.tolist()


class TestEstimate:
    def test_empty_rejected(self):
        with pytest.raises(InputError):
            estimate_params([])

    def test_linear_demo_ratio_near_half(self, linear):
        samples = sample_comparable_pairs(linear.space, linear.map, None, 10_000, 42)
        estimate = estimate_params(samples)
        assert estimate.feasible
        assert 0.49 <= estimate.ratio <= 0.51
        oracle = grid_minimal_ratio(samples)
        assert oracle is not None
        assert abs(estimate.ratio - oracle) <= 3e-3

    def test_self_consistency(self, linear):
        samples = sample_comparable_pairs(linear.space, linear.map, None, 3_000, 11)
        estimate = estimate_params(samples)
        with pytest.warns(UserWarning) if estimate.alpha == 0.0 else _noop():
            params = ContractionParams(estimate.alpha, estimate.beta)
        report = evaluate_samples(params, samples)
        assert report.violations == 0

    def test_expansive_map_infeasible(self):
        space = SpaceDescriptor(dim=1)
        F = CoupledMap("expand", 1, lambda x, y: 2.0 * x, [-1.0], [1.0])
        samples = sample_comparable_pairs(space, F, None, 200, 8)
        estimate = estimate_params(samples)
        assert not estimate.feasible
        assert estimate.ratio is None

    def test_expansive_map_single_witness(self):
        # one concrete sample already rules out every admissible choice:
        # (0,0) is a fixed pair so the rational term vanishes, leaving
        # 2 <= beta/2 * 1, impossible with beta < 1
        space = SpaceDescriptor(dim=1)
        F = CoupledMap("expand", 1, lambda x, y: 2.0 * x, [-1.0], [1.0])
        witness = make_sample_pair(space, F, Pair([1.0], [0.0]), Pair([0.0], [0.0]))
        assert witness.image_distance == 2.0
        assert witness.rational_term == 0.0
        assert witness.distance_sum == 1.0
        estimate = estimate_params([witness])
        assert not estimate.feasible

    def test_single_zero_sample_hits_floor(self, linear):
        s = make_sample_pair(linear.space, linear.map, Pair([0.0], [0.0]), Pair([0.0], [0.0]))
        assert s.image_distance == 0.0
        estimate = estimate_params([s])
        assert estimate.feasible
        assert estimate.ratio <= 2e-6  # bisection floor
        assert estimate.beta > 0


from contextlib import contextmanager


@contextmanager
def _noop():
    yield
