"""Point distributions, operation mixes, and the benchmark harness pieces."""

import math

import numpy as np
import pytest
from scipy import stats as sstats

from dynhull.errors import InputError
from dynhull.hulltree import Strategy
from dynhull.workload import (
    BenchResult,
    BenchRunSpec,
    Distribution,
    OperationMix,
    RunRecord,
    hull_vertex_count,
    run_static,
    sample,
)
from dynhull.oracle import oracle_hull


# -------------------------------------------------------------- distributions


def test_square_sample_bounds():
    pts = sample(Distribution.square(3), 100_000)
    assert pts.shape == (100_000, 2)
    assert pts.min() >= 0.0
    assert pts.max() <= 10.0


def test_circle_sample_is_area_uniform():
    # Area uniformity: a quarter of the mass falls inside half the radius.
    pts = sample(Distribution.circle(3), 1_000_000)
    r = np.hypot(pts[:, 0], pts[:, 1])
    assert r.max() <= 10.0
    frac = float(np.mean(r <= 5.0))
    assert abs(frac - 0.25) < 0.01


def test_annulus_sample_radius_band():
    pts = sample(Distribution.annulus(3), 100_000)
    r = np.hypot(pts[:, 0], pts[:, 1])
    assert r.min() >= 9.999
    assert r.max() <= 10.0


def test_sample_has_unique_y():
    pts = sample(Distribution.annulus(9), 100_000)
    assert np.unique(pts[:, 1]).size == pts.shape[0]


def test_sample_is_deterministic_per_seed():
    a = sample(Distribution.circle(42), 1000)
    b = sample(Distribution.circle(42), 1000)
    c = sample(Distribution.circle(43), 1000)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_distribution_validation():
    with pytest.raises(InputError):
        Distribution(kind="blob", seed=1)
    with pytest.raises(InputError):
        Distribution(kind="annulus", seed=1, r_min=11.0, r_max=10.0)
    with pytest.raises(InputError):
        Distribution(kind="square", seed=1, side=-1.0)


# ------------------------------------------------------------- operation mixes


def test_mix_parse_and_str():
    mix = OperationMix.parse("70,15,15")
    assert (mix.read_pct, mix.insert_pct, mix.delete_pct) == (70.0, 15.0, 15.0)
    assert str(mix) == "70/15/15"
    assert str(OperationMix.parse("0,50,50")) == "0/50/50"


@pytest.mark.parametrize("bad", ["", "50,50", "a,b,c", "10,10,10", "-5,55,50"])
def test_mix_rejects_malformed(bad):
    with pytest.raises(InputError):
        OperationMix.parse(bad)


# ----------------------------------------------------------------- CI summary


def _record(i, v):
    return RunRecord(
        rep=i, ops_total=0, seconds=1.0, ops_per_sec=v,
        retries=0, early_stops=0, audit_ok=None,
    )


def _spec():
    return BenchRunSpec(
        strategy=Strategy.FINER,
        mix=OperationMix(0, 50, 50),
        distribution=Distribution.annulus(1),
        threads=2,
    )


def test_bench_result_confidence_interval():
    vals = [100.0, 120.0, 110.0, 130.0]
    res = BenchResult(spec=_spec(), runs=[_record(i, v) for i, v in enumerate(vals)])
    assert res.ops_per_sec_mean == pytest.approx(np.mean(vals))
    want = sstats.t.ppf(0.975, 3) * np.std(vals, ddof=1) / math.sqrt(4)
    assert res.ci_half_width == pytest.approx(want)


def test_bench_result_single_rep_has_no_interval():
    res = BenchResult(spec=_spec(), runs=[_record(0, 50.0)])
    assert res.ci_half_width == 0.0


# ------------------------------------------------------------------ hull sizes


def test_hull_vertex_count_cases(rng):
    empty = oracle_hull([(0.0, 0.0)])  # reuse chain type via a singleton
    assert hull_vertex_count(*empty) == 1
    square = oracle_hull([(0.0, 0.0), (9.0, 0.1), (0.0, 9.0), (9.0, 9.1)])
    assert hull_vertex_count(*square) == 4
    from dynhull.chain import Chain, Side

    assert hull_vertex_count(Chain.empty(Side.LEFT), Chain.empty(Side.RIGHT)) == 0


# ------------------------------------------------------------------ run_static


def test_run_static_sequential_audits_against_oracle():
    res = run_static(Distribution.square(21), 2000, "sequential", threads=1)
    assert res.oracle_match is True
    assert res.n == 2000
    assert res.hull_size == hull_vertex_count(*res.hull)
    assert res.seconds > 0.0


def test_run_static_dynamic_engine_matches_oracle():
    res = run_static(Distribution.circle(22), 1500, "dynamic", threads=2)
    assert res.oracle_match is True


def test_run_static_accepts_explicit_points(rng):
    pts = sample(Distribution.square(5), 400)
    res = run_static(Distribution.square(5), 0, "parallel", threads=2, points=pts)
    assert res.n == 400
    assert res.oracle_match is True


def test_run_static_rejects_unknown_engine():
    with pytest.raises(InputError):
        run_static(Distribution.square(1), 100, "warp-drive", threads=1)


def test_run_static_can_skip_audit():
    res = run_static(Distribution.square(8), 500, "sequential", threads=1, audit=False)
    assert res.oracle_match is None
