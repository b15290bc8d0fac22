"""Closed-form CDFs against exact special cases, quadrature oracles,
Monte Carlo, and their structural properties."""
import dataclasses
import math

import numpy as np
import pytest

from fdrs import analytic as an
from fdrs import rayleigh as ray
from fdrs.channel import ConfigError, LinkSpec, NetworkConfig, Protocol, db_to_linear

dB = db_to_linear

X_GRID = np.geomspace(0.05, 80.0, 20)


def rayleigh_cfg(k=2, p=10.0, lam=1.0, pi_sr=10.0, pi_rd=10.0, pi_rr=1.0, pi_sd=None):
    sd = None if pi_sd is None else LinkSpec(1, pi_sd)
    return NetworkConfig(k=k, p_s=p, p_r=p, rsi_lambda=lam,
                         sr=LinkSpec(1, pi_sr), rd=LinkSpec(1, pi_rd),
                         rr=LinkSpec(1, pi_rr), sd=sd)


class TestRatioCdf:
    def test_zero_threshold(self):
        assert an.cdf_ratio_gamma(0.0, an.RatioParams(1, 1, 1, 1)) == 0.0

    def test_exponential_over_exponential(self):
        # P(Z > z) = e^-z/(1+z) for unit exponentials
        p = an.RatioParams(1, 1, 1, 1)
        assert an.cdf_ratio_gamma(1.0, p) == pytest.approx(1 - math.exp(-1) / 2, rel=1e-12)

    def test_erlang_over_exponential(self):
        # E[e^-t(1+t)] over Exp(0.5) at z=2 integrates to 1.75 e^-2
        p = an.RatioParams(2, 1, 1, 0.5)
        assert an.cdf_ratio_gamma(2.0, p) == pytest.approx(1 - 1.75 * math.exp(-2), rel=1e-12)

    def test_against_ratio_sampling(self):
        p = an.RatioParams(1.5, 2.0, 2, 0.8)
        rng = np.random.default_rng(8)
        n = 2 * 10 ** 6
        z = 1.3
        x1 = rng.gamma(p.m1, p.theta1, n)
        x2 = rng.gamma(p.m2, p.theta2, n)
        emp = np.mean(x1 / (x2 + 1.0) <= z)
        se = math.sqrt(emp * (1 - emp) / n)
        assert abs(an.cdf_ratio_gamma(z, p) - emp) < 4 * se

    def test_quadrature_agreement_over_shape_grid(self):
        # the full operating region: shapes 0.5..4, scales -10..20 dB
        for m1 in (0.5, 1.0, 1.5, 2.0, 3.0, 4.0):
            for m2 in (1, 2, 4):
                for th_db in (-10.0, 0.0, 20.0):
                    p = an.RatioParams(m1, dB(th_db), m2, dB(-th_db / 2))
                    for z in (0.1, 1.0, 15.0, 63.0):
                        closed = an.cdf_ratio_gamma(z, p)
                        oracle = an.cdf_ratio_gamma_quad(z, p)
                        assert abs(closed - oracle) <= 1e-8, (m1, m2, th_db, z)

    def test_monotone_and_bounded(self):
        p = an.RatioParams(2.5, 3.0, 3, 0.7)
        vals = [an.cdf_ratio_gamma(float(z), p) for z in np.linspace(0, 40, 80)]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert all(b >= a - 1e-13 for a, b in zip(vals, vals[1:]))

    def test_non_integer_m2_routes_to_quadrature(self):
        p = an.RatioParams(1.0, 1.0, 1.7, 1.0)
        with pytest.raises(ValueError, match="quad"):
            an.cdf_ratio_gamma(1.0, p)
        # the oracle itself supports it
        v = an.cdf_ratio_gamma_quad(1.0, p)
        assert 0.0 < v < 1.0

    def test_ccdf_complements_cdf(self):
        p = an.RatioParams(2, 1.5, 2, 0.5)
        for z in (0.1, 1.0, 10.0):
            assert an.ratio_ccdf(z, p) == pytest.approx(1 - an.cdf_ratio_gamma(z, p), abs=1e-14)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            an.RatioParams(0.4, 1, 1, 1)
        with pytest.raises(ValueError):
            an.RatioParams(1, 1, -1, 1)
        with pytest.raises(ValueError):
            an.RatioParams(1, 0, 1, 1)


class TestTailIntegralIdentity:
    def test_matches_literal_whittaker_composition(self):
        # the semi-infinite direct-link integral used inside cdf_idl,
        # integral_0^inf (t+1)^deg t^(m-1) e^(-eta t) dt, equals
        # e^(eta/2) eta^(-(m+deg+1)/2) Gamma(m) W_{(deg-m+1)/2, -(m+deg)/2}(eta);
        # the U-based route must agree with the literal W pairing
        from fdrs import specfun as sf
        from fdrs.analytic import _ln_tail_integral
        for deg in (0, 1, 2, 3):
            for m in (1.0, 2.0, 2.5):
                for eta in (0.3, 1.7, 12.0):
                    literal = (math.exp(eta / 2)
                               * eta ** (-(m + deg + 1) / 2)
                               * math.exp(sf.ln_gamma(m))
                               * sf.whittaker_w((deg - m + 1) / 2, -(m + deg) / 2, eta))
                    assert _ln_tail_integral(deg, m, eta) == pytest.approx(
                        math.log(literal), rel=1e-11), (deg, m, eta)


class TestNdlCdf:
    def test_zero(self, fig2a_cfg):
        assert an.cdf_ndl(0.0, fig2a_cfg, 3) == 0.0

    def test_product_form(self, fig2a_cfg):
        for x in (0.3, 3.0, 12.0):
            single = an.cdf_ndl(x, fig2a_cfg, 1)
            for relays in (2, 3, 5):
                assert an.cdf_ndl(x, fig2a_cfg, relays) == pytest.approx(
                    single ** relays, rel=1e-12)

    def test_rayleigh_value(self):
        # all m=1, P=10, pi_sr=pi_rd=10, pi_rr=1, lambda=1, x=3, 2 relays
        cfg = rayleigh_cfg()
        expect = (1 - math.exp(-0.06) / 1.3) ** 2
        assert an.cdf_ndl(3.0, cfg, 2) == pytest.approx(expect, rel=1e-12)
        assert expect == pytest.approx(0.075936, abs=5e-7)

    def test_quadrature(self, fig2a_cfg):
        for x in X_GRID:
            assert abs(an.cdf_ndl(float(x), fig2a_cfg, 3)
                       - an.cdf_ndl_quad(float(x), fig2a_cfg, 3)) <= 1e-8

    def test_ignores_direct_link_presence(self, fig2a_cfg):
        stripped = dataclasses.replace(fig2a_cfg, sd=None)
        assert an.cdf_ndl(3.0, fig2a_cfg, 3) == an.cdf_ndl(3.0, stripped, 3)

    def test_integrality_enforced(self, fig2a_cfg):
        bad = dataclasses.replace(fig2a_cfg, rr=LinkSpec(1.5, 2.0))
        with pytest.raises(ConfigError, match="m_rr"):
            an.cdf_ndl(1.0, bad, 3)


class TestDirectLinkCdfs:
    def test_zero(self, fig2a_cfg):
        for fn in (an.cdf_idl, an.cdf_idl_dt, an.cdf_sdf):
            assert fn(0.0, fig2a_cfg, 3) == 0.0

    def test_idl_rayleigh_value(self):
        cfg = rayleigh_cfg(k=1, pi_sd=1.0)
        expect = 1 - (math.exp(-0.06) / 1.3) / 1.3
        assert an.cdf_idl(3.0, cfg, 1) == pytest.approx(expect, rel=1e-12)
        assert expect == pytest.approx(0.442742, abs=1e-6)

    @pytest.mark.parametrize("fn,quad", [
        (an.cdf_idl, an.cdf_idl_quad),
        (an.cdf_idl_dt, an.cdf_idl_dt_quad),
        (an.cdf_sdf, an.cdf_sdf_quad),
    ])
    def test_quadrature_20_points(self, fig2a_cfg, fn, quad):
        for x in X_GRID:
            assert abs(fn(float(x), fig2a_cfg, 3) - quad(float(x), fig2a_cfg, 3)) <= 1e-8

    def test_dominance_ordering(self, fig2a_cfg):
        # pointwise SINR dominance: selective >= hybrid >= interference-only
        for x in X_GRID:
            s = an.cdf_sdf(float(x), fig2a_cfg, 3)
            h = an.cdf_idl_dt(float(x), fig2a_cfg, 3)
            i = an.cdf_idl(float(x), fig2a_cfg, 3)
            assert s <= h + 1e-12 and h <= i + 1e-12

    def test_vanishing_direct_link_reduces_to_ndl(self, fig2a_cfg):
        tiny = dataclasses.replace(fig2a_cfg, sd=LinkSpec(2, 1e-8))
        for x in (0.5, 3.0, 20.0):
            ndl = an.cdf_ndl(x, fig2a_cfg, 3)
            assert an.cdf_idl(x, tiny, 3) == pytest.approx(ndl, abs=1e-5)
            assert an.cdf_sdf(x, tiny, 3) == pytest.approx(ndl, abs=1e-5)

    def test_sdf_tends_to_one(self, fig2a_cfg):
        assert an.cdf_sdf(1e6, fig2a_cfg, 3) >= 1 - 1e-6

    def test_sdf_continuous_at_decay_sign_change(self):
        # P_S theta_SD = 1, P_R theta_RD = 2: the k=2 term's decay rate
        # crosses zero; the closed form must match quadrature through it
        cfg = NetworkConfig(k=3, p_s=1, p_r=1, rsi_lambda=1,
                            sr=LinkSpec(1, 8.0), rd=LinkSpec(1, 2.0),
                            rr=LinkSpec(1, 0.5), sd=LinkSpec(1, 1.0))
        for x in (0.5, 2.0, 6.0):
            assert an.cdf_sdf(x, cfg, 3) == pytest.approx(
                an.cdf_sdf_quad(x, cfg, 3), abs=1e-9)
        # nearby scenarios on both sides agree to first order
        lo = dataclasses.replace(cfg, rd=LinkSpec(1, 2.0 * (1 - 1e-7)))
        hi = dataclasses.replace(cfg, rd=LinkSpec(1, 2.0 * (1 + 1e-7)))
        assert an.cdf_sdf(2.0, lo, 3) == pytest.approx(an.cdf_sdf(2.0, hi, 3), rel=1e-5)

    def test_monotone_in_threshold(self, fig2a_cfg):
        for fn in (an.cdf_idl, an.cdf_idl_dt, an.cdf_sdf):
            vals = [fn(float(x), fig2a_cfg, 3) for x in np.linspace(0.01, 60, 40)]
            assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def test_rsi_scaling_monotone_in_lambda(self, fig2a_cfg):
        # P_R > 1 makes the RSI scale grow with lambda, degrading every CDF
        cfg10 = dataclasses.replace(fig2a_cfg, p_s=10.0, p_r=10.0)
        for x in (0.5, 3.0, 20.0):
            for fn in (an.cdf_ndl, an.cdf_idl, an.cdf_idl_dt, an.cdf_sdf):
                vals = [fn(x, dataclasses.replace(cfg10, rsi_lambda=lam), 3)
                        for lam in (0.0, 0.25, 0.5, 0.75, 1.0)]
                assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:])), fn


class TestRayleighReduction:
    # all shapes 1: the general Nakagami forms must collapse to the
    # elementary expressions within 1e-10 across the power grid
    PIS = dict(pi_sr=10.0, pi_rd=10.0, pi_rr=2.0, pi_sd=1.0)

    @pytest.mark.parametrize("lam", [0.0, 0.5, 1.0])
    def test_over_power_grid(self, lam):
        x = 3.0
        for p_db in np.linspace(0, 50, 50):
            p = dB(float(p_db))
            cfg = rayleigh_cfg(k=3, p=p, lam=lam, **self.PIS)
            assert abs(an.cdf_ndl(x, cfg, 3) - ray.outage_ndl(
                p, x, 3, lam, self.PIS["pi_sr"], self.PIS["pi_rd"],
                self.PIS["pi_rr"])) <= 1e-10
            assert abs(an.cdf_idl(x, cfg, 3) - ray.outage_idl(p, x, 3, lam, **self.PIS)) <= 1e-10
            assert abs(an.cdf_idl_dt(x, cfg, 3)
                       - ray.outage_idl_dt(p, x, 3, lam, **self.PIS)) <= 1e-10
            assert abs(an.cdf_sdf(x, cfg, 3) - ray.outage_sdf(p, x, 3, lam, **self.PIS)) <= 1e-10


class TestFeasibility:
    def test_erlang_single_relay(self):
        # unit-mean source and relay interference, cap 2:
        # P(feasible) = P(Exp + Exp <= 2) = 1 - 3 e^-2
        cfg = NetworkConfig(k=1, p_s=1, p_r=1, rsi_lambda=1,
                            sr=LinkSpec(1, 1), rd=LinkSpec(1, 1), rr=LinkSpec(1, 1),
                            sd=LinkSpec(1, 1), sp=LinkSpec(1, 1), rp=LinkSpec(1, 1),
                            i_th=2.0)
        f = an.feasibility_dist(cfg)
        assert f.p[1] == pytest.approx(1 - 3 * math.exp(-2), abs=1e-10)

    def test_sums_to_one(self, fig2b_cfg):
        f = an.feasibility_dist(fig2b_cfg)
        assert abs(math.fsum(f.p) - 1.0) <= 1e-9
        assert 0.0 <= f.p_tilde0 <= f.p[0]

    def test_quadrature_agreement(self, fig2b_cfg):
        f = an.feasibility_dist(fig2b_cfg)
        fq = an.feasibility_dist_quad(fig2b_cfg)
        assert max(abs(a - b) for a, b in zip(f.p, fq.p)) <= 1e-9
        assert abs(f.p_tilde0 - fq.p_tilde0) <= 1e-9

    def test_vacuous_constraint(self, fig2b_cfg):
        f = an.feasibility_dist(dataclasses.replace(fig2b_cfg, i_th=1e9))
        assert f.p[fig2b_cfg.k] == pytest.approx(1.0, abs=1e-9)

    def test_choking_constraint(self, fig2b_cfg):
        f = an.feasibility_dist(dataclasses.replace(fig2b_cfg, i_th=1e-9))
        assert f.p[0] == pytest.approx(1.0, abs=1e-9)

    def test_non_cognitive_rejected(self, fig2a_cfg):
        with pytest.raises(ConfigError):
            an.feasibility_dist(fig2a_cfg)

    def test_distribution_invariants_enforced(self):
        with pytest.raises(ValueError):
            an.FeasibilityDist(p=(0.5, 0.4), p_tilde0=0.1)
        with pytest.raises(ValueError):
            an.FeasibilityDist(p=(0.5, 0.5), p_tilde0=0.6)


class TestCognitiveMixture:
    def test_vacuous_cap_matches_unconstrained(self, fig2b_cfg):
        open_cfg = dataclasses.replace(fig2b_cfg, i_th=1e9)
        for proto in (Protocol.NDL, Protocol.IDL, Protocol.IDL_DT, Protocol.SDF):
            assert an.cdf_cognitive(3.0, open_cfg, proto) == pytest.approx(
                an.cdf_conditional(3.0, fig2b_cfg, proto, 3), abs=1e-6)

    def test_choking_cap_relay_only(self, fig2b_cfg):
        shut = dataclasses.replace(fig2b_cfg, i_th=1e-9)
        assert an.cdf_cognitive(3.0, shut, Protocol.NDL) == pytest.approx(1.0, abs=1e-8)

    def test_choking_cap_direct_branch(self, fig2b_cfg):
        # nearly-closed cap: only the direct-transmission term survives
        shut = dataclasses.replace(fig2b_cfg, i_th=1e-6)
        f = an.feasibility_dist(shut)
        x = 3.0
        from fdrs import specfun as sf
        expect = f.p[0] - sf.reg_upper_gamma(
            shut.sd.m, x / (shut.p_s * shut.sd.theta)) * f.p_tilde0
        assert an.cdf_cognitive(x, shut, Protocol.IDL_DT) == pytest.approx(expect, abs=1e-9)

    def test_delta_mixture_reduces_exactly(self, fig2b_cfg):
        delta = an.FeasibilityDist(p=(0.0, 0.0, 0.0, 1.0), p_tilde0=0.0)
        for proto in (Protocol.NDL, Protocol.IDL, Protocol.IDL_DT, Protocol.SDF):
            assert an.cdf_cognitive(3.0, fig2b_cfg, proto, feas=delta) == \
                an.cdf_conditional(3.0, fig2b_cfg, proto, 3)

    def test_jump_at_zero_for_direct_branch(self, fig2b_cfg):
        f = an.feasibility_dist(fig2b_cfg)
        assert an.cdf_cognitive(0.0, fig2b_cfg, Protocol.SDF) == pytest.approx(
            f.p[0] - f.p_tilde0, abs=1e-12)
        assert an.cdf_cognitive(0.0, fig2b_cfg, Protocol.NDL) == pytest.approx(
            f.p[0], abs=1e-12)


class TestOutageThroughput:
    def test_threshold_rule(self):
        assert an.outage_threshold(Protocol.NDL, 2.0) == 3.0
        assert an.outage_threshold(Protocol.HD_MRC, 2.0) == 15.0
        assert an.outage_threshold(Protocol.HD_MRC, 2.0, hd_equal_delivered_rate=False) == 3.0

    def test_outage_vanishes_at_zero_rate(self, fig2a_cfg):
        assert an.outage(fig2a_cfg, Protocol.NDL, 0.0) == 0.0

    def test_strict_inequality_at_zero_threshold_cognitive(self, fig2b_cfg):
        # the SINR atom at 0 is not an outage when the threshold is 0
        assert an.outage(fig2b_cfg, Protocol.SDF, 0.0, cognitive=True) == 0.0

    def test_ndl_rayleigh_outage(self):
        cfg = rayleigh_cfg()
        assert an.outage(cfg, Protocol.NDL, 2.0) == pytest.approx(0.075936, abs=5e-7)

    def test_throughput_identity(self, fig2a_cfg):
        for proto in (Protocol.NDL, Protocol.SDF):
            for rate in (0.5, 2.0, 4.0):
                p = an.outage(fig2a_cfg, proto, rate)
                t = an.throughput(fig2a_cfg, proto, rate)
                assert t == pytest.approx(rate * (1 - p), rel=1e-12)
                assert t <= rate

    def test_half_duplex_throughput_factor(self):
        assert an.throughput_from_outage(Protocol.HD_SDF, 2.0, 0.0) == 1.0
        assert an.throughput_from_outage(Protocol.SDF, 2.0, 0.0) == 2.0
