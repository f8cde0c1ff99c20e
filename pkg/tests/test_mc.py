import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irpdf import mc
from irpdf.perm import parse_perm
from irpdf.thoma import REGULAR, ThomaParams, validate_params


def test_constant_sampler_exact():
    est = mc.estimate(mc.ConstantSampler(), parse_perm("(1 2)"), 1000, 0)
    assert est.mean == 1 and est.stderr == 0.0
    assert mc.compare(est, 1.0).passed


def test_vk_half_half_transposition():
    s = mc.VKSampler(validate_params([0.5, 0.5], []))
    g = parse_perm("(1 2)")
    est = mc.estimate(s, g, 20_000, 1)
    assert s.target(g) == pytest.approx(0.5)
    assert abs(est.mean - 0.5) <= 4 * est.stderr


def test_regular_is_exactly_zero_off_identity():
    s = mc.VKSampler(REGULAR)
    for txt in ("(1 2)", "(1 2 3)(4 5)"):
        est = mc.estimate(s, parse_perm(txt), 5000, 3)
        assert est.mean == 0 and est.stderr == 0.0


def test_irs_target_is_fixing_probability():
    p = validate_params([0.5, 0.2], [0.1])
    s = mc.VKSampler(p, twisted=False)
    g = parse_perm("(1 2)(3 4 5)")
    t2 = 0.25 + 0.04 + 0.01
    t3 = 0.125 + 0.008 + 0.001
    assert s.target(g) == pytest.approx(t2 * t3)
    est = mc.estimate(s, g, 50_000, 4)
    assert mc.compare(est, s.target(g)).passed


def test_compare_scores():
    est = mc.MCEstimate(0.5, 0.01, 1000, 0)
    assert mc.compare(est, 0.5).zscore == 0
    v = mc.compare(est, 1.5)
    assert v.zscore == pytest.approx(100) and not v.passed
    with pytest.raises(ValueError):
        mc.compare(est, 0.5, z=0)


def test_compare_zero_stderr_uses_floor():
    est = mc.MCEstimate(1.0, 0.0, 100, 0)
    assert mc.compare(est, 1.0 + 1e-13).passed
    assert not mc.compare(est, 1.0 + 1e-9).passed


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 200), min_size=1, max_size=5), st.integers(0, 2**32))
def test_merge_matches_pooled(sizes, seed):
    rng = np.random.default_rng(seed)
    chunks = [rng.normal(size=n) + 1j * rng.normal(size=n) for n in sizes]
    parts = [mc.summarize(c, 0) for c in chunks]
    pooled = mc.summarize(np.concatenate(chunks), 0)
    merged = mc.merge(parts)
    assert merged.samples == pooled.samples
    assert abs(merged.mean - pooled.mean) < 1e-12
    assert merged.stderr == pytest.approx(pooled.stderr, rel=1e-9)


def test_sample_values_prefix_and_workers():
    s = mc.VKSampler(validate_params([0.4], [0.3]))
    g = parse_perm("(1 3)(2 4)")
    a = mc.sample_values(s, g, 3000, 5)
    b = mc.sample_values(s, g, 1000, 5)
    assert np.array_equal(a[:1000], b)
    for w in (2, 3, 8):
        assert np.array_equal(a, mc.sample_values(s, g, 3000, 5, workers=w))


class Flaky:
    def values(self, g, seed, indices):
        if np.any(indices == 137):
            raise RuntimeError("boom")
        return np.ones(len(indices))

    def target(self, g):
        return 1.0


def test_sampler_error_reports_index():
    with pytest.raises(mc.SamplerError) as info:
        mc.estimate(Flaky(), None, 500, 0)
    assert info.value.index == 137
    with pytest.raises(mc.SamplerError) as info:
        mc.estimate(Flaky(), None, 500, 0, workers=4)
    assert info.value.index == 137


def test_estimate_needs_samples():
    with pytest.raises(ValueError, match="100"):
        mc.estimate(mc.ConstantSampler(), None, 99, 0)


@pytest.mark.parametrize("bad,field", [
    ({"sampler": {"id": "nope"}}, "sampler.id"),
    ({"sampler": []}, "sampler"),
    ({"elements": []}, "elements"),
    ({"samples": 10}, "samples"),
    ({"seed": -1}, "seed"),
    ({"z": 0}, "z"),
    ({"workers": 0}, "workers"),
    ({"targets": [1, 2]}, "targets"),
])
def test_config_validation(bad, field):
    d = {"sampler": {"id": "constant"}, "elements": ["(1 2)"], "samples": 100, "seed": 0}
    d.update(bad)
    with pytest.raises(ValueError, match=field):
        mc.ExperimentConfig.from_dict(d)


def test_config_missing_fields():
    with pytest.raises(ValueError, match="seed: required"):
        mc.ExperimentConfig.from_dict({"sampler": {"id": "vk"}, "elements": ["e"], "samples": 100})


def vk_config(tmp_path, name="out.csv", **kw):
    d = {
        "sampler": {"id": "vk", "alpha": [0.5, 0.2], "beta": [0.2]},
        "elements": ["e", "(1 2)", "(1 2 3)", "(1 2)(3 4)"],
        "samples": 20_000,
        "seed": 11,
        "output": str(tmp_path / name),
    }
    d.update(kw)
    return mc.ExperimentConfig.from_dict(d)


def test_run_experiment_outputs(tmp_path):
    rep = mc.run_experiment(vk_config(tmp_path))
    assert rep.passed
    text = (tmp_path / "out.csv").read_text()
    lines = text.strip().split("\n")
    assert lines[0].split(",") == mc.CSV_COLUMNS
    assert [ln.split(",")[0] for ln in lines[1:]] == ["e", "(1 2)", "(1 2 3)", "(1 2)(3 4)"]
    summary = json.loads((tmp_path / "out.json").read_text())
    assert summary == {"pass": True, "failures": [], "seed": 11, "samples": 20_000}


def test_run_experiment_byte_identical(tmp_path):
    mc.run_experiment(vk_config(tmp_path, "a.csv"))
    mc.run_experiment(vk_config(tmp_path, "b.csv"))
    mc.run_experiment(vk_config(tmp_path, "c.csv", workers=8))
    a = (tmp_path / "a.csv").read_bytes()
    assert a == (tmp_path / "b.csv").read_bytes() == (tmp_path / "c.csv").read_bytes()


def test_run_experiment_reports_failure(tmp_path):
    s = mc.VKSampler(validate_params([0.5, 0.2], [0.2]))
    targets = [s.target(parse_perm(x)) for x in ["e", "(1 2)", "(1 2 3)", "(1 2)(3 4)"]]
    targets[1] += 0.2
    cfg = vk_config(tmp_path, targets=targets)
    rep = mc.run_experiment(cfg)
    assert not rep.passed and rep.summary["failures"] == ["(1 2)"]
    assert "fail" in (tmp_path / "out.csv").read_text()


def test_rigidity_vs_non_rigidity():
    g = parse_perm("(1 2)")
    rigid = mc.sample_values(mc.VKSampler(ThomaParams((), ()), twisted=False), g, 10_000, 0)
    assert not rigid.any()
    fixing = mc.sample_values(mc.VKSampler(validate_params([0.5, 0.5], []), twisted=False), g, 10_000, 0)
    assert 0.46 <= fixing.mean() <= 0.54
    assert len(np.unique(fixing)) == 2


def test_clt_coverage():
    # over independent seeds the 4-sigma interval should essentially always cover
    s = mc.VKSampler(validate_params([0.3, 0.2], [0.25]))
    g = parse_perm("(1 2)(3 4 5)")
    t = s.target(g)
    z = [abs(mc.estimate(s, g, 2000, seed).mean - t) / mc.estimate(s, g, 2000, seed).stderr for seed in range(100)]
    assert sum(x <= 4 for x in z) >= 99
    # and the 2-sigma coverage is near 95%
    assert 85 <= sum(x <= 2 for x in z) <= 100


def test_sphere_and_circle_samplers():
    theta = 0.7
    R = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]], dtype=complex)
    s = mc.SphereSampler(2)
    est = mc.estimate(s, R, 20_000, 0)
    assert mc.compare(est, s.target(R)).passed
    c = mc.CircleSampler()
    assert mc.estimate(c, 0, 1000, 0).mean == 1
    assert mc.compare(mc.estimate(c, 2, 20_000, 0), 0).passed


def test_parse_matrix():
    m = mc.parse_matrix([[[0, 1], 0], [0, [1, 0]]])
    assert m[0, 0] == 1j and m[1, 1] == 1
