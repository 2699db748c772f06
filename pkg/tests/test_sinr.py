import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from ffrsfr.radio import make_partition
from ffrsfr.sinr import (AnglePolicy, BandLink, SinrContext, angle_policy_cdf, sample_sinr,
                         sample_sinr_batch, sinr_cdf, sinr_pdf)


@pytest.fixture(scope="module")
def links(profile, layout):
    out = {}
    for scheme, zeta in (("FFR", 0.49), ("SFR", 0.5)):
        part = make_partition(profile, scheme, zeta)
        for region in "CE":
            out[scheme, region] = BandLink(profile, layout, part, region)
    return out


def test_cdf_at_origin_and_noise_only():
    ctx = SinrContext(2.0, np.zeros(0), 0.5)
    assert sinr_cdf(ctx, 0.0) == 0.0
    x = np.array([0.1, 1.0, 10.0])
    assert np.allclose(sinr_cdf(ctx, x), 1 - np.exp(-x * 0.25))
    assert np.allclose(sinr_pdf(ctx, x), 0.25 * np.exp(-x * 0.25))


def test_one_equal_interferer():
    ctx = SinrContext(1.0, np.array([1.0]), 0.0)
    x = np.array([0.1, 1.0, 10.0])
    assert np.allclose(sinr_cdf(ctx, x), x / (1 + x), rtol=1e-14)
    assert np.allclose(sinr_pdf(ctx, x), 1 / (1 + x) ** 2, rtol=1e-14)
    # ratio of two unit exponentials
    rng = np.random.default_rng(1)
    r = rng.standard_exponential(10 ** 6) / rng.standard_exponential(10 ** 6)
    for xi in x:
        assert np.mean(r <= xi) == pytest.approx(xi / (1 + xi), abs=2e-3)


def test_negative_argument_rejected():
    ctx = SinrContext(1.0, np.array([1.0]), 0.1)
    with pytest.raises(ValueError):
        sinr_cdf(ctx, -1.0)
    with pytest.raises(ValueError):
        sinr_pdf(ctx, np.array([1.0, -0.1]))
    with pytest.raises(ValueError):
        SinrContext(0.0, np.zeros(1), 1.0)


def _context(link, d=300.0, theta=0.4):
    return link.context(d, theta)


def test_pdf_matches_finite_difference(links):
    for link in links.values():
        ctx = _context(link)
        for x in (0.1, 1.0, 10.0):
            h = 1e-5 * x
            fd = (sinr_cdf(ctx, x + h) - sinr_cdf(ctx, x - h)) / (2 * h)
            assert sinr_pdf(ctx, x) == pytest.approx(fd, rel=1e-6)


def test_pdf_integrates_to_one(links):
    from scipy.integrate import quad
    ctx = _context(links["FFR", "E"])
    val, _ = quad(lambda u: float(sinr_pdf(ctx, math.exp(u))) * math.exp(u), -30, 40, limit=400)
    assert val == pytest.approx(1.0, abs=1e-6)


def test_cdf_shape(links):
    x = np.geomspace(1e-4, 1e4, 100)
    for link in links.values():
        ctx = _context(link, 400.0)
        f = sinr_cdf(ctx, x)
        # the CDF saturates at 1.0 in double precision; -log(1 - F) does not
        assert np.all(np.diff(ctx.log_survival(x)) > 0)
        assert np.all(np.diff(f) >= 0)
        assert 0 < f[0] and f[-1] <= 1
        assert sinr_cdf(ctx, 1e6) > 1 - 1e-6


@given(scale=st.floats(1.01, 100.0), x=st.floats(1e-3, 1e3))
@settings(max_examples=50)
def test_stochastic_dominance(scale, x):
    inter = np.array([0.3, 0.1, 0.05])
    weak = SinrContext(1.0, inter, 0.01)
    strong = SinrContext(scale, inter, 0.01)
    assert sinr_cdf(strong, x) <= sinr_cdf(weak, x)


def test_sampler_mean_and_determinism():
    ctx = SinrContext(3.0, np.zeros(0), 0.5)
    s = sample_sinr(ctx, np.random.default_rng(7), 10 ** 6)
    assert s.mean() == pytest.approx(6.0, rel=0.01)
    ctx = SinrContext(1.0, np.array([0.2, 0.1]), 0.05)
    a = sample_sinr(ctx, np.random.default_rng(3), 1000)
    b = sample_sinr(ctx, np.random.default_rng(3), 1000)
    assert np.array_equal(a, b)


def test_sampler_ks(links):
    rng = np.random.default_rng(11)
    ctx = _context(links["SFR", "C"], 250.0, 1.0)
    s = sample_sinr(ctx, rng, 10 ** 5)
    ks = stats.kstest(s, lambda x: sinr_cdf(ctx, x)).statistic
    assert ks < 0.01


def test_batch_sampler_shapes():
    rng = np.random.default_rng(0)
    serving = np.ones((3, 4))
    inter = np.full((3, 4, 5), 0.1)
    assert sample_sinr_batch(serving, inter, 0.01, rng, (7,)).shape == (7, 3, 4)
    assert sample_sinr_batch(serving, inter[..., :0], 0.01, rng).shape == (3, 4)


def test_sfr_uniform_power_matches_ffr_reuse_one(profile, layout):
    ffr = BandLink(profile, layout, make_partition(profile, "FFR", 1.0), "C")
    sfr = BandLink(profile, layout, make_partition(profile, "SFR", 1.0), "C")
    x = np.geomspace(1e-3, 1e3, 50)
    for d in (50.0, 200.0, 400.0):
        assert np.allclose(ffr.cdf(x, d), sfr.cdf(x, d), rtol=1e-12, atol=0)


def test_angle_policies(links):
    link = links["FFR", "C"]
    x = np.geomspace(1e-3, 1e3, 60)
    avg = angle_policy_cdf(link, 35.0, x)
    for theta in (0.0, 0.3, 1.0, 2.5):
        fixed = angle_policy_cdf(link, 35.0, x, AnglePolicy("fixed", theta=theta))
        assert np.max(np.abs(avg - fixed)) < 1e-3
    for link in links.values():
        d = 0.9 * link.layout.hex_side * math.sqrt(3 * math.sqrt(3) / (2 * math.pi))
        coarse = link.cdf(x, d, AnglePolicy(n_theta=12))
        fine = link.cdf(x, d, AnglePolicy(n_theta=48))
        assert np.max(np.abs(coarse - fine)) < 1e-3
        assert link.cdf(np.zeros(1), d)[0] == 0.0
    with pytest.raises(ValueError):
        angle_policy_cdf(link, 400.0, x, bounds=(35.0, 300.0))
    with pytest.raises(ValueError):
        AnglePolicy(n_theta=10)


def test_bandlink_cdf_is_theta_average(links):
    link = links["SFR", "C"]
    x = np.array([0.05, 0.5, 5.0])
    d = 300.0
    thetas = np.arange(96) * 2 * math.pi / 96
    brute = np.mean([[sinr_cdf(link.context(d, t, v), x) for t in thetas]
                     for v in range(link.n_variants)], axis=(0, 1))
    assert np.allclose(link.cdf(x, d, AnglePolicy(n_theta=96)), brute, atol=1e-12)
    dens = link.pdf(x, d)
    h = 1e-6 * x
    fd = (link.cdf(x + h, d) - link.cdf(x - h, d)) / (2 * h)
    assert np.allclose(dens, fd, rtol=1e-5)
