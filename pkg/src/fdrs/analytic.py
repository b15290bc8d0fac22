"""Closed-form end-to-end SINR CDFs, feasibility probabilities, outage
and throughput, plus adaptive-quadrature oracles for every closed form.

Notation used throughout: the first hop of each relayed path is the
ratio Z = X1 / (X2 + 1) of the desired-signal gain over the residual
self-interference, both Gamma distributed.  The second hop is Gamma,
conditioned on the direct-link SNR where one exists.  End-to-end CDFs
follow by binomial/multinomial expansion of the per-path CDF raised to
the number of relays; the surviving one-dimensional integrals reduce to
confluent hypergeometric and incomplete-Gamma terms.

Alternating outer sums are accumulated with math.fsum and every
inner positive block is assembled in log space, so the expressions stay
usable from deep-tail diversity sweeps (probabilities ~1e-18) up to
thresholds of 1e6.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import integrate

from fdrs import specfun as sf
from fdrs.channel import ConfigError, NetworkConfig, Protocol, validate_config

__all__ = [
    "RatioParams",
    "FeasibilityDist",
    "first_hop_ratio_params",
    "cdf_ratio_gamma",
    "cdf_ratio_gamma_quad",
    "cdf_ndl",
    "cdf_idl",
    "cdf_idl_dt",
    "cdf_sdf",
    "cdf_conditional",
    "cdf_ndl_quad",
    "cdf_idl_quad",
    "cdf_idl_dt_quad",
    "cdf_sdf_quad",
    "feasibility_dist",
    "feasibility_dist_quad",
    "cdf_cognitive",
    "outage_threshold",
    "outage",
    "throughput",
    "throughput_from_outage",
]


@dataclass(frozen=True)
class RatioParams:
    """Parameters of Z = X1/(X2 + 1) with Xi ~ Gamma(mi, thetai).

    The closed-form CDF additionally needs m2 to be a positive integer;
    non-integer m2 is representable here so the quadrature route can
    serve it.
    """

    m1: float
    theta1: float
    m2: float
    theta2: float

    def __post_init__(self):
        if not self.m1 >= 0.5:
            raise ValueError(f"m1 must be >= 0.5, got {self.m1}")
        if not self.m2 > 0:
            raise ValueError(f"m2 must be positive, got {self.m2}")
        if not (self.theta1 > 0 and self.theta2 > 0):
            raise ValueError("scale parameters must be positive")


@dataclass(frozen=True)
class FeasibilityDist:
    """Distribution of the number of relays meeting the interference cap.

    p[L] is the probability that exactly L of the K relays satisfy the
    combined source+relay constraint; p_tilde0 the probability that no
    relay does but the source alone would.
    """

    p: tuple[float, ...]
    p_tilde0: float

    def __post_init__(self):
        total = math.fsum(self.p)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"feasibility probabilities sum to {total}, not 1")
        if not -1e-12 <= self.p_tilde0 <= self.p[0] + 1e-12:
            raise ValueError("p_tilde0 must lie in [0, p[0]]")

    @property
    def k(self) -> int:
        return len(self.p) - 1


def first_hop_ratio_params(cfg: NetworkConfig) -> RatioParams:
    """Ratio parameters of the first hop: signal over scaled RSI."""
    return RatioParams(cfg.sr.m, cfg.p_s * cfg.sr.theta, cfg.rr.m, cfg.rsi_scale)


# ---------------------------------------------------------------------------
# ratio CDF (first hop)

def _ratio_whittaker_sum(z: float, p: RatioParams) -> float:
    """sum_k B c^-d theta2^-k W_{a,b}(c) of the ratio CDF, in [0, 1-ish].

    Equals F_Z(z) - P(m1, z/theta1) >= 0.  Each term is evaluated as
    exp(log prefactor) * W so the pairing of a decaying prefactor with a
    growing Whittaker magnitude (or vice versa) cannot overflow.
    """
    m1, th1, th2 = p.m1, p.theta1, p.theta2
    m2 = int(round(p.m2))
    zt = z / th1
    c = zt + 1.0 / th2
    ln_b = -0.5 * (zt - 1.0 / th2) + m1 * math.log(zt) - sf.ln_gamma(m1)
    terms = []
    for k in range(m2):
        a = 0.5 * (m1 - k - 1.0)
        b = -0.5 * (m1 + k)
        d = 0.5 * (m1 + k + 1.0)
        w = sf.whittaker_w(a, b, c)
        if w == 0.0:
            continue
        ln_pref = ln_b - d * math.log(c) - k * math.log(th2)
        terms.append(math.copysign(math.exp(ln_pref + math.log(abs(w))), w))
    return math.fsum(terms)


def _require_integer_m2(p: RatioParams):
    if abs(p.m2 - round(p.m2)) > 1e-9:
        raise ValueError(
            f"closed-form ratio CDF requires integer m2, got {p.m2}; "
            "use cdf_ratio_gamma_quad for non-integer shapes")


def cdf_ratio_gamma(z: float, p: RatioParams) -> float:
    """CDF of Z = X1/(X2+1) at z >= 0; real m1 >= 1/2, integer m2 >= 1.

    F_Z(z) = P(m1, z/theta1) + sum_{k<m2} B c^-d theta2^-k W_{a,b}(c)
    with a = (m1-k-1)/2, b = -(m1+k)/2, c = z/theta1 + 1/theta2,
    d = (m1+k+1)/2 and B = e^{-(z/theta1 - 1/theta2)/2} (z/theta1)^m1
    / Gamma(m1).
    """
    _require_integer_m2(p)
    if z < 0:
        raise ValueError("z must be >= 0")
    if z == 0:
        return 0.0
    val = sf.reg_lower_gamma(p.m1, z / p.theta1) + _ratio_whittaker_sum(z, p)
    return min(max(val, 0.0), 1.0)


def ratio_ccdf(z: float, p: RatioParams) -> float:
    """P(Z > z), assembled from the upper tail so it stays relatively
    accurate when close to 1 (needed by the high-power diversity sweeps)."""
    _require_integer_m2(p)
    if z <= 0:
        return 1.0
    val = sf.reg_upper_gamma(p.m1, z / p.theta1) - _ratio_whittaker_sum(z, p)
    return min(max(val, 0.0), 1.0)


def _gamma_pdf(t: float, m: float, theta: float) -> float:
    if t <= 0:
        return 0.0
    return math.exp((m - 1.0) * math.log(t) - t / theta
                    - sf.ln_gamma(m) - m * math.log(theta))


def cdf_ratio_gamma_quad(z: float, p: RatioParams, tol: float = 1e-10) -> float:
    """Quadrature oracle for the ratio CDF; supports non-integer m2.

    F_Z(z) = integral over x of P(m1, z(x+1)/theta1) dF_X2(x).
    """
    if z < 0:
        raise ValueError("z must be >= 0")
    if z == 0:
        return 0.0

    def integrand(x):
        return (sf.reg_lower_gamma(p.m1, z * (x + 1.0) / p.theta1)
                * _gamma_pdf(x, p.m2, p.theta2))

    val, err = integrate.quad(integrand, 0.0, math.inf,
                              epsabs=tol * 1e-2, epsrel=tol * 1e-1, limit=300)
    if err > 10 * tol * max(1.0, abs(val)):
        raise ArithmeticError(f"ratio CDF quadrature error estimate {err} too large")
    return min(max(val, 0.0), 1.0)


# ---------------------------------------------------------------------------
# log-space building blocks shared by the end-to-end CDFs

def _ln_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def _lse(values: list[float]) -> float:
    """log(sum(exp(values))) for possibly empty lists of finite/-inf logs."""
    m = max(values, default=-math.inf)
    if m == -math.inf:
        return -math.inf
    return m + math.log(math.fsum(math.exp(v - m) for v in values))


def _lse_signed(ln_mags: list[float], signs: list[float]) -> float:
    """log of a signed sum known to be nonnegative analytically."""
    m = max(ln_mags, default=-math.inf)
    if m == -math.inf:
        return -math.inf
    s = math.fsum(sg * math.exp(v - m) for v, sg in zip(ln_mags, signs))
    if s <= 0.0:
        return -math.inf
    return m + math.log(s)


@lru_cache(maxsize=None)
def _compositions_with_degree(total: int, parts: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Cached compositions paired with their degree sum_n k_n (n-1)."""
    out = []
    for comp in sf.compositions(total, parts):
        deg = sum(j * kn for j, kn in enumerate(comp))
        out.append((comp, deg))
    return tuple(out)


def _ln_multinomial_coeff(comp: tuple[int, ...], total: int) -> float:
    """ln of total! / prod_n (k_n! * Gamma(n)^k_n) for composition {k_n}."""
    val = math.lgamma(total + 1)
    for j, kn in enumerate(comp):
        val -= math.lgamma(kn + 1) + kn * math.lgamma(j + 1)
    return val


def _ln_tail_integral(deg: int, shape: float, rate: float) -> float:
    """ln of integral_0^inf (t+1)^deg t^(shape-1) e^(-rate t) dt.

    Equals Gamma(shape) rate^-(shape+deg) U(-deg, 1-shape-deg, rate);
    the Tricomi factor is an exact positive polynomial here.
    """
    u = sf.tricomi_u(-float(deg), 1.0 - shape - deg, rate) if deg else 1.0
    return sf.ln_gamma(shape) - (shape + deg) * math.log(rate) + math.log(u)


def _ln_trunc_integral(deg: int, shape: float, rate: float, upper: float) -> float:
    """ln of integral_0^upper (t+1)^deg t^(shape-1) e^(-rate t) dt, rate > 0."""
    w = rate * upper
    lns = []
    for r in range(deg + 1):
        plo = sf.reg_lower_gamma(r + shape, w)
        if plo == 0.0:
            continue
        lns.append(_ln_binom(deg, r) + sf.ln_gamma(r + shape)
                   - (r + shape) * math.log(rate) + math.log(plo))
    return _lse(lns)


_KUMMER_BRANCH_CAP = 30.0


def _ln_conv_integral(deg: int, shape: float, rate: float, upper: float) -> float:
    """ln of integral_0^upper (upper-t)^deg t^(shape-1) e^(-rate t) dt.

    rate may take either sign.  Near rate*upper = 0 both confluent
    branches collapse to upper^(deg+shape) B(deg+1, shape) since
    M(., ., 0) = 1; that common limit is evaluated directly.  Large
    |rate*upper| is rerouted to finite incomplete-Gamma sums so the
    Kummer series never has to chase a huge argument.
    """
    w = rate * upper
    ln_u = math.log(upper)
    if abs(w) < 1e-9:
        return (deg + shape) * ln_u + sf.ln_beta(deg + 1.0, shape)
    if 0 < w <= _KUMMER_BRANCH_CAP:
        return (-w + (deg + shape) * ln_u + sf.ln_beta(shape, deg + 1.0)
                + sf.ln_kummer_m(deg + 1.0, deg + shape + 1.0, w))
    if -_KUMMER_BRANCH_CAP <= w < 0:
        return ((deg + shape) * ln_u + sf.ln_beta(deg + 1.0, shape)
                + sf.ln_kummer_m(shape, deg + shape + 1.0, -w))
    if w > _KUMMER_BRANCH_CAP:
        # expand (upper-t)^deg binomially; leading r term dominates
        lns, signs = [], []
        for r in range(deg + 1):
            plo = sf.reg_lower_gamma(r + shape, w)
            if plo == 0.0:
                continue
            lns.append(_ln_binom(deg, r) + (deg - r) * ln_u
                       - (r + shape) * math.log(rate)
                       + sf.ln_gamma(r + shape) + math.log(plo))
            signs.append(-1.0 if r % 2 else 1.0)
        return _lse_signed(lns, signs)
    # w < -cap: for integer shape, substitute u = upper - t and expand
    if abs(shape - round(shape)) < 1e-9:
        n = int(round(shape))
        neg = -rate
        lns, signs = [], []
        for s in range(n):
            plo = sf.reg_lower_gamma(deg + s + 1.0, -w)
            if plo == 0.0:
                continue
            lns.append(_ln_binom(n - 1, s) + (n - 1 - s) * ln_u
                       - (deg + s + 1.0) * math.log(neg)
                       + sf.ln_gamma(deg + s + 1.0) + math.log(plo))
            signs.append(-1.0 if s % 2 else 1.0)
        return -w + _lse_signed(lns, signs)
    # non-integer shape with a strongly growing exponential: positive
    # Kummer series still converges, just slowly
    return ((deg + shape) * ln_u + sf.ln_beta(deg + 1.0, shape)
            + sf.ln_kummer_m(shape, deg + shape + 1.0, -w))


# ---------------------------------------------------------------------------
# end-to-end SINR CDFs without the interference constraint

def cdf_ndl(x: float, cfg: NetworkConfig, relays: int) -> float:
    """End-to-end SINR CDF with no direct link and `relays` relays.

    Product form: (1 - P(Z > x) P(hop2 > x))^relays, every factor a
    single per-path CDF thanks to i.i.d. paths.
    """
    validate_config(cfg, Protocol.NDL, "analytic")
    if relays < 1:
        raise ValueError("relays must be >= 1")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0:
        return 0.0
    p1 = first_hop_ratio_params(cfg)
    fz = cdf_ratio_gamma(x, p1)
    plow = sf.reg_lower_gamma(cfg.rd.m, x / (cfg.p_r * cfg.rd.theta))
    per_path = fz + (1.0 - fz) * plow
    return per_path ** relays


def _cdf_direct_link_family(x: float, cfg: NetworkConfig, relays: int,
                            ln_inner_integral) -> float:
    """Shared outer assembly of the three direct-link CDFs.

    ln_inner_integral(deg, eta) must return the log of the inner
    integral against the direct-link density for one multinomial
    composition degree.  The binomial-in-k outer sum alternates in
    sign and is accumulated with exact float summation.
    """
    if relays < 1:
        raise ValueError("relays must be >= 1")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0:
        return 0.0
    p1 = first_hop_ratio_params(cfg)
    fzbar = ratio_ccdf(x, p1)
    m_sd = cfg.sd.m
    m_rd = int(round(cfg.rd.m))
    th_sd = cfg.p_s * cfg.sd.theta
    th_rd = cfg.p_r * cfg.rd.theta
    ln_norm = -sf.ln_gamma(m_sd) - m_sd * math.log(th_sd)
    terms = []
    for k in range(relays + 1):
        if k > 0 and fzbar == 0.0:
            continue
        eta = 1.0 / th_sd + x * k / th_rd
        lns = []
        for comp, deg in _compositions_with_degree(k, m_rd):
            ln_c = (_ln_multinomial_coeff(comp, k)
                    + (deg * math.log(x / th_rd) if deg else 0.0))
            lns.append(ln_c + ln_inner_integral(deg, eta, k))
        ln_pos = -k * x / th_rd + ln_norm + _lse(lns)
        ln_mag = _ln_binom(relays, k) + (k * math.log(fzbar) if k else 0.0) + ln_pos
        terms.append((-1.0 if k % 2 else 1.0) * math.exp(ln_mag))
    return min(max(math.fsum(terms), 0.0), 1.0)


def cdf_idl(x: float, cfg: NetworkConfig, relays: int) -> float:
    """End-to-end SINR CDF when the direct link only interferes.

    The direct-link SNR is integrated out over (0, inf); each
    multinomial term reduces to a Whittaker factor of
    eta_k = 1/(P_S theta_SD) + x k/(P_R theta_RD), evaluated here
    through its exact Tricomi polynomial form.
    """
    validate_config(cfg, Protocol.IDL, "analytic")

    def inner(deg, eta, _k):
        return _ln_tail_integral(deg, cfg.sd.m, eta)

    return _cdf_direct_link_family(x, cfg, relays, inner)


def cdf_idl_dt(x: float, cfg: NetworkConfig, relays: int) -> float:
    """Hybrid CDF: direct link interferes, but direct transmission is a
    fallback decoding branch, so the integration stops at x."""
    validate_config(cfg, Protocol.IDL_DT, "analytic")

    def inner(deg, eta, _k):
        return _ln_trunc_integral(deg, cfg.sd.m, eta, x)

    return _cdf_direct_link_family(x, cfg, relays, inner)


def cdf_sdf(x: float, cfg: NetworkConfig, relays: int) -> float:
    """Selective-cooperation CDF: second hop is the relay-destination
    link MRC-combined with the direct signal (virtual two-transmitter
    array), and direct transmission is favored when sufficient.

    The inner integral carries the convolution kernel (x - beta)^deg
    and the sign-indefinite decay eta_k = 1/(P_S theta_SD) -
    k/(P_R theta_RD); both confluent branches, and the common limit at
    eta_k = 0, live in _ln_conv_integral.
    """
    # not routed through _cdf_direct_link_family: the selective form
    # pairs the multinomial weight (1/th_rd)^deg with the decay
    # eta_hat = 1/th_sd - k/th_rd instead of (x/th_rd)^deg with
    # eta_k = 1/th_sd + x k/th_rd
    validate_config(cfg, Protocol.SDF, "analytic")
    th_rd = cfg.p_r * cfg.rd.theta
    if relays < 1:
        raise ValueError("relays must be >= 1")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x == 0:
        return 0.0
    p1 = first_hop_ratio_params(cfg)
    fzbar = ratio_ccdf(x, p1)
    m_sd = cfg.sd.m
    m_rd = int(round(cfg.rd.m))
    th_sd = cfg.p_s * cfg.sd.theta
    ln_norm = -sf.ln_gamma(m_sd) - m_sd * math.log(th_sd)
    terms = []
    for k in range(relays + 1):
        if k > 0 and fzbar == 0.0:
            continue
        eta_hat = 1.0 / th_sd - k / th_rd
        lns = []
        for comp, deg in _compositions_with_degree(k, m_rd):
            ln_c = _ln_multinomial_coeff(comp, k) - deg * math.log(th_rd)
            lns.append(ln_c + _ln_conv_integral(deg, m_sd, eta_hat, x))
        ln_pos = -k * x / th_rd + ln_norm + _lse(lns)
        ln_mag = _ln_binom(relays, k) + (k * math.log(fzbar) if k else 0.0) + ln_pos
        terms.append((-1.0 if k % 2 else 1.0) * math.exp(ln_mag))
    return min(max(math.fsum(terms), 0.0), 1.0)


_CDF_BY_PROTOCOL = {
    Protocol.NDL: cdf_ndl,
    Protocol.IDL: cdf_idl,
    Protocol.IDL_DT: cdf_idl_dt,
    Protocol.SDF: cdf_sdf,
}


def cdf_conditional(x: float, cfg: NetworkConfig, protocol: Protocol,
                    relays: int) -> float:
    """CDF of the end-to-end SINR given `relays` usable relays."""
    try:
        fn = _CDF_BY_PROTOCOL[protocol]
    except KeyError:
        raise ConfigError([f"{protocol.value} has no closed-form CDF"])
    return fn(x, cfg, relays)


# ---------------------------------------------------------------------------
# quadrature oracles for the end-to-end CDFs

def _direct_link_quad(x, cfg, relays, hop2_tail, lo, hi, tol):
    fzbar = 1.0 - cdf_ratio_gamma_quad(x, first_hop_ratio_params(cfg), tol)
    m_sd = cfg.sd.m
    th_sd = cfg.p_s * cfg.sd.theta

    def integrand(beta):
        return ((1.0 - fzbar * hop2_tail(beta)) ** relays
                * _gamma_pdf(beta, m_sd, th_sd))

    kwargs = dict(epsabs=tol * 1e-2, epsrel=tol * 1e-1, limit=300)
    if math.isfinite(hi):
        scale = 50.0 * m_sd * th_sd
        if hi > scale:
            kwargs["points"] = [scale]
    val, _ = integrate.quad(integrand, lo, hi, **kwargs)
    return min(max(val, 0.0), 1.0)


def cdf_ndl_quad(x, cfg: NetworkConfig, relays: int, tol: float = 1e-10) -> float:
    """Oracle for cdf_ndl built on the ratio-CDF quadrature."""
    if x == 0:
        return 0.0
    fzbar = 1.0 - cdf_ratio_gamma_quad(x, first_hop_ratio_params(cfg), tol)
    q2 = sf.reg_upper_gamma(cfg.rd.m, x / (cfg.p_r * cfg.rd.theta))
    return (1.0 - fzbar * q2) ** relays


def cdf_idl_quad(x, cfg: NetworkConfig, relays: int, tol: float = 1e-10) -> float:
    """Direct numerical integration of the interfering-direct-link CDF."""
    if x == 0:
        return 0.0
    th_rd = cfg.p_r * cfg.rd.theta
    m_rd = cfg.rd.m
    tail = lambda beta: sf.reg_upper_gamma(m_rd, x * (beta + 1.0) / th_rd)
    return _direct_link_quad(x, cfg, relays, tail, 0.0, math.inf, tol)


def cdf_idl_dt_quad(x, cfg: NetworkConfig, relays: int, tol: float = 1e-10) -> float:
    """Oracle for the hybrid CDF: same integrand as IDL, truncated at x."""
    if x == 0:
        return 0.0
    th_rd = cfg.p_r * cfg.rd.theta
    m_rd = cfg.rd.m
    tail = lambda beta: sf.reg_upper_gamma(m_rd, x * (beta + 1.0) / th_rd)
    return _direct_link_quad(x, cfg, relays, tail, 0.0, x, tol)


def cdf_sdf_quad(x, cfg: NetworkConfig, relays: int, tol: float = 1e-10) -> float:
    """Oracle for the selective-cooperation CDF."""
    if x == 0:
        return 0.0
    th_rd = cfg.p_r * cfg.rd.theta
    m_rd = cfg.rd.m
    tail = lambda beta: sf.reg_upper_gamma(m_rd, max(x - beta, 0.0) / th_rd)
    return _direct_link_quad(x, cfg, relays, tail, 0.0, x, tol)


# ---------------------------------------------------------------------------
# feasibility under the interference constraint

def _require_cognitive(cfg: NetworkConfig):
    if not cfg.is_cognitive:
        raise ConfigError(["scenario has no interference constraint (sp/rp/ith absent)"])


def feasibility_dist(cfg: NetworkConfig) -> FeasibilityDist:
    """Exact distribution of the number of relays satisfying the cap.

    The source interference is common to all relays, so feasibility
    events are only conditionally independent given it; integrating the
    conditional binomial over the source-interference density yields
    finite sums of the convolution integrals in _ln_conv_integral.
    Requires integer m_rp (series expansion of the per-relay tail).
    """
    _require_cognitive(cfg)
    if not cfg.rp.integer_m:
        raise ConfigError([f"feasibility closed form requires integer m_rp (got {cfg.rp.m})"])
    k_total = cfg.k
    m_sp, m_rp = cfg.sp.m, int(round(cfg.rp.m))
    th_sp = cfg.p_s * cfg.sp.theta
    th_rp = cfg.p_r * cfg.rp.theta
    cap = cfg.i_th
    ln_norm = -sf.ln_gamma(m_sp) - m_sp * math.log(th_sp)

    @lru_cache(maxsize=None)
    def ln_block(q: int) -> float:
        """ln integral_0^cap Q(m_rp, (cap-b)/th_rp)^q f_I_SP(b) db (unnormalized)."""
        eta = 1.0 / th_sp - q / th_rp
        lns = []
        for comp, deg in _compositions_with_degree(q, m_rp):
            ln_c = _ln_multinomial_coeff(comp, q) - deg * math.log(th_rp)
            lns.append(ln_c + _ln_conv_integral(deg, m_sp, eta, cap))
        return -q * cap / th_rp + _lse(lns) + ln_norm

    probs = []
    p_tilde0 = math.exp(ln_block(k_total))
    p0 = sf.reg_upper_gamma(m_sp, cap / th_sp) + p_tilde0
    probs.append(min(p0, 1.0))
    for feasible in range(1, k_total + 1):
        terms = []
        for l in range(feasible + 1):
            ln_mag = (_ln_binom(k_total, feasible) + _ln_binom(feasible, l)
                      + ln_block(k_total - feasible + l))
            terms.append((-1.0 if l % 2 else 1.0) * math.exp(ln_mag))
        probs.append(min(max(math.fsum(terms), 0.0), 1.0))
    return FeasibilityDist(p=tuple(probs), p_tilde0=min(p_tilde0, probs[0]))


def feasibility_dist_quad(cfg: NetworkConfig, tol: float = 1e-10) -> FeasibilityDist:
    """Quadrature oracle for feasibility_dist; no integrality limits."""
    _require_cognitive(cfg)
    k_total = cfg.k
    m_sp, m_rp = cfg.sp.m, cfg.rp.m
    th_sp = cfg.p_s * cfg.sp.theta
    th_rp = cfg.p_r * cfg.rp.theta
    cap = cfg.i_th
    kwargs = dict(epsabs=tol * 1e-2, epsrel=tol * 1e-1, limit=300)

    def p_exactly(feasible):
        def integrand(beta):
            f = sf.reg_lower_gamma(m_rp, (cap - beta) / th_rp)
            return (math.comb(k_total, feasible) * f ** feasible
                    * (1.0 - f) ** (k_total - feasible)
                    * _gamma_pdf(beta, m_sp, th_sp))
        val, _ = integrate.quad(integrand, 0.0, cap, **kwargs)
        return val

    probs = [p_exactly(i) for i in range(k_total + 1)]
    p_tilde0 = probs[0]
    probs[0] += sf.reg_upper_gamma(m_sp, cap / th_sp)
    return FeasibilityDist(p=tuple(probs), p_tilde0=p_tilde0)


def cdf_cognitive(x: float, cfg: NetworkConfig, protocol: Protocol,
                  feas: FeasibilityDist | None = None) -> float:
    """End-to-end SINR CDF under the interference constraint.

    Total-probability mixture over the number L of feasible relays.
    Relay-only protocols are in outage whenever L = 0, so F(x|0) = 1.
    Protocols with a direct-transmission branch survive L = 0 when the
    source alone meets the cap, giving
    F(x) = P0 - Q_SD(x) P~0 + sum_{L>=1} F(x|L) P_L, which jumps by
    P0 - P~0 at x = 0 (communication is cut off outright when even the
    source violates the cap).
    """
    _require_cognitive(cfg)
    validate_config(cfg, protocol, "analytic")
    if feas is None:
        feas = feasibility_dist(cfg)
    parts = [feas.p[0]]
    if protocol.has_dt_branch:
        q_sd = sf.reg_upper_gamma(cfg.sd.m, x / (cfg.p_s * cfg.sd.theta))
        parts.append(-q_sd * feas.p_tilde0)
    for relays in range(1, feas.k + 1):
        if feas.p[relays] > 0.0:
            parts.append(feas.p[relays] * cdf_conditional(x, cfg, protocol, relays))
    return min(max(math.fsum(parts), 0.0), 1.0)


# ---------------------------------------------------------------------------
# outage and throughput

def outage_threshold(protocol: Protocol, rate: float,
                     hd_equal_delivered_rate: bool = True) -> float:
    """SINR threshold for a source rate in bpcu: 2^rate - 1.

    In outage comparisons at equal delivered rate, half-duplex
    protocols are charged the doubled source rate 2*rate instead.
    """
    if rate < 0:
        raise ValueError("rate must be >= 0")
    eff = 2.0 * rate if (protocol.half_duplex and hd_equal_delivered_rate) else rate
    return 2.0 ** eff - 1.0


def outage(cfg: NetworkConfig, protocol: Protocol, rate: float,
           cognitive: bool = False, hd_equal_delivered_rate: bool = True) -> float:
    """Closed-form outage probability P(SINR < threshold).

    The strict inequality matters only at threshold 0, where the atom
    the constraint puts at SINR = 0 does not count as outage.
    """
    gamma_th = outage_threshold(protocol, rate, hd_equal_delivered_rate)
    if gamma_th == 0.0:
        return 0.0
    if cognitive:
        return cdf_cognitive(gamma_th, cfg, protocol)
    validate_config(cfg, protocol, "analytic")
    return cdf_conditional(gamma_th, cfg, protocol, cfg.k)


def throughput_from_outage(protocol: Protocol, rate: float, p_out: float) -> float:
    """rate * (1 - P_out), halved for half-duplex protocols."""
    factor = 0.5 if protocol.half_duplex else 1.0
    return factor * rate * (1.0 - p_out)


def throughput(cfg: NetworkConfig, protocol: Protocol, rate: float,
               cognitive: bool = False) -> float:
    """Fixed-rate throughput in bpcu; both duplex classes run the same
    source rate, the half-duplex rate loss lands as the factor 1/2."""
    p = outage(cfg, protocol, rate, cognitive, hd_equal_delivered_rate=False)
    return throughput_from_outage(protocol, rate, p)
