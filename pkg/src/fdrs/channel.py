"""Scenario description, validation, and seeded channel-gain sampling.

A scenario is a relay cluster of K full-duplex decode-and-forward relays
between a source and a destination, with optional direct
source-destination link and optional spectrum-sharing constraint at a
primary receiver.  Every link class fades independently Nakagami-m, so
its power gain is Gamma(m, pi/m) with average power pi.  Noise
variances are fixed at 1 and all powers are stored linear; dB
conversion happens at configuration ingestion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Protocol(Enum):
    """Cooperation protocol whose end-to-end SINR is analyzed."""

    NDL = "ndl"          # relayed path only, no direct link used or present
    IDL = "idl"          # direct link present, treated purely as interference
    IDL_DT = "idl_dt"    # as IDL, plus direct transmission as a fallback branch
    SDF = "sdf"          # selective cooperation: relayed and direct paths combined
    HD_MRC = "hd_mrc"    # half-duplex baseline with MRC combining (simulation only)
    HD_SDF = "hd_sdf"    # half-duplex selective baseline (simulation only)

    @property
    def uses_direct_link(self) -> bool:
        return self is not Protocol.NDL

    @property
    def half_duplex(self) -> bool:
        return self in (Protocol.HD_MRC, Protocol.HD_SDF)

    @property
    def simulation_only(self) -> bool:
        return self.half_duplex

    @property
    def has_dt_branch(self) -> bool:
        """Protocols where the destination may decode the direct signal alone."""
        return self in (Protocol.IDL_DT, Protocol.SDF, Protocol.HD_SDF)

    @classmethod
    def parse(cls, name: str) -> "Protocol":
        key = name.strip().lower().replace("/", "_").replace("-", "_")
        aliases = {"mhdf_ndl": "ndl", "mhdf_idl": "idl", "mhdf_idl_dt": "idl_dt"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(p.value for p in cls)
            raise ValueError(f"unknown protocol {name!r}; expected one of {valid}")


FD_PROTOCOLS = (Protocol.NDL, Protocol.IDL, Protocol.IDL_DT, Protocol.SDF)


class ConfigError(ValueError):
    """Raised with the complete list of configuration violations."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


@dataclass(frozen=True)
class LinkSpec:
    """Nakagami fading parameters of one link class.

    m is the shape (>= 0.5) and avg_power the mean linear power gain;
    the Gamma scale theta = avg_power / m is derived.
    """

    m: float
    avg_power: float

    def __post_init__(self):
        if not self.m >= 0.5:
            raise ValueError(f"Nakagami shape m must be >= 0.5, got {self.m}")
        if not self.avg_power > 0:
            raise ValueError(f"average power must be > 0, got {self.avg_power}")

    @property
    def theta(self) -> float:
        return self.avg_power / self.m

    @property
    def integer_m(self) -> bool:
        return abs(self.m - round(self.m)) < 1e-9


@dataclass(frozen=True)
class NetworkConfig:
    """Full scenario: relay count, powers, RSI scaling, and link classes.

    Link classes: sr (source-relay), rd (relay-destination), rr (residual
    self-interference), optional sd (direct), and the cognitive pair
    sp/rp (source/relay to primary receiver) with interference threshold
    i_th.  sd absent means a no-direct-link scenario; sp/rp/i_th are
    all-present or all-absent.  rsi_lambda in [0, 1] scales the RSI
    power as p_r ** rsi_lambda.  relay_overrides optionally replaces a
    relay-indexed link class (sr, rd, rr, rp) by per-relay specs; it is
    accepted by the simulator only.
    """

    k: int
    p_s: float
    p_r: float
    rsi_lambda: float
    sr: LinkSpec
    rd: LinkSpec
    rr: LinkSpec
    sd: LinkSpec | None = None
    sp: LinkSpec | None = None
    rp: LinkSpec | None = None
    i_th: float | None = None
    relay_overrides: dict[str, tuple[LinkSpec, ...]] | None = None

    def __post_init__(self):
        errors = []
        if self.k < 1:
            errors.append(f"relay count k must be >= 1, got {self.k}")
        if not self.p_s > 0:
            errors.append(f"p_s must be > 0, got {self.p_s}")
        if not self.p_r > 0:
            errors.append(f"p_r must be > 0, got {self.p_r}")
        if not 0.0 <= self.rsi_lambda <= 1.0:
            errors.append(f"lambda must lie in [0, 1], got {self.rsi_lambda}")
        cognitive_fields = (self.sp, self.rp, self.i_th)
        if any(f is not None for f in cognitive_fields) and not all(
                f is not None for f in cognitive_fields):
            errors.append("cognitive fields sp, rp, ith must be all present or all absent")
        if self.i_th is not None and not self.i_th > 0:
            errors.append(f"ith must be > 0, got {self.i_th}")
        if self.relay_overrides:
            for name, specs in self.relay_overrides.items():
                if name not in ("sr", "rd", "rr", "rp"):
                    errors.append(f"relay_overrides key {name!r} is not a relay-indexed link class")
                elif len(specs) != self.k:
                    errors.append(
                        f"relay_overrides[{name!r}] has {len(specs)} entries, expected k={self.k}")
        if errors:
            raise ConfigError(errors)

    @property
    def is_cognitive(self) -> bool:
        return self.i_th is not None

    @property
    def rsi_scale(self) -> float:
        """Gamma scale of the first-hop self-interference term, p_r^lambda * theta_rr."""
        return self.p_r ** self.rsi_lambda * self.rr.theta


@dataclass(frozen=True)
class Realization:
    """One block-fading draw of all channel gains, linear units."""

    g_sr: np.ndarray
    g_rd: np.ndarray
    g_rr: np.ndarray
    g_sd: float = 0.0
    g_sp: float | None = None
    g_rp: np.ndarray | None = None

    def __post_init__(self):
        k = len(self.g_sr)
        if len(self.g_rd) != k or len(self.g_rr) != k:
            raise ValueError("gain arrays must all have length k")
        if self.g_rp is not None and len(self.g_rp) != k:
            raise ValueError("g_rp must have length k")
        arrays = [self.g_sr, self.g_rd, self.g_rr]
        if self.g_rp is not None:
            arrays.append(self.g_rp)
        if any(np.any(a < 0) for a in arrays) or self.g_sd < 0 or (
                self.g_sp is not None and self.g_sp < 0):
            raise ValueError("channel power gains must be non-negative")


def _integrality_requirements(protocol: Protocol, cognitive: bool) -> list[str]:
    req = {
        Protocol.NDL: ["rr"],
        Protocol.IDL: ["rr", "rd"],
        Protocol.IDL_DT: ["rr", "rd", "sd"],
        Protocol.SDF: ["rr", "rd", "sd"],
    }.get(protocol, [])
    if cognitive:
        req = req + ["rp"]
    return req


def config_violations(cfg: NetworkConfig, protocol: Protocol, method: str) -> list[str]:
    """All reasons (cfg, protocol, method) cannot be evaluated; empty if none.

    The closed forms put integrality conditions on some Nakagami shapes
    (m_rr always; m_rd for the direct-link protocols; m_sd additionally
    for the hybrid and selective ones; m_rp for the feasibility
    probabilities).  The simulator has no such limits but still needs
    the links a protocol references to exist in the scenario.
    """
    if method not in ("analytic", "mc"):
        raise ValueError(f"method must be 'analytic' or 'mc', got {method!r}")
    errors = []
    if protocol.uses_direct_link and cfg.sd is None:
        errors.append(f"protocol {protocol.value} requires an sd link in the scenario")
    if method == "analytic":
        if protocol.simulation_only:
            errors.append(f"{protocol.value} is a simulation-only baseline; no closed form")
        if cfg.relay_overrides:
            errors.append("per-relay overrides are simulation-only; analytic mode assumes "
                          "a symmetric cluster")
        for name in _integrality_requirements(protocol, cfg.is_cognitive):
            link: LinkSpec = getattr(cfg, name)
            if link is not None and not link.integer_m:
                errors.append(
                    f"{protocol.value} analytic requires integer m_{name} (got {link.m})")
    return errors


def validate_config(cfg: NetworkConfig, protocol: Protocol, method: str) -> NetworkConfig:
    """Return cfg unchanged if usable for (protocol, method), else raise ConfigError."""
    errors = config_violations(cfg, protocol, method)
    if errors:
        raise ConfigError(errors)
    return cfg


def sample_gamma(m: float, theta: float, rng: np.random.Generator, size=None):
    """Draw Gamma(m, theta) power gains; exact for every shape m >= 0.5."""
    if not m >= 0.5:
        raise ValueError(f"shape must be >= 0.5, got {m}")
    if not theta > 0:
        raise ValueError(f"scale must be > 0, got {theta}")
    return rng.gamma(m, theta, size)


def _draw_class(cfg: NetworkConfig, name: str, rng: np.random.Generator,
                n: int) -> np.ndarray:
    """(k, n) gains for a relay-indexed link class, honoring overrides."""
    overrides = (cfg.relay_overrides or {}).get(name)
    base: LinkSpec = getattr(cfg, name)
    if overrides is None:
        return rng.gamma(base.m, base.theta, (cfg.k, n))
    return np.stack([rng.gamma(s.m, s.theta, n) for s in overrides])


def draw_gains(cfg: NetworkConfig, rng: np.random.Generator, n: int) -> dict:
    """One batch of n independent realizations of every configured link.

    Draw order is fixed (sr, rd, rr, sd, sp, rp) so a given generator
    state always yields the same gains regardless of which protocol
    later consumes them.
    """
    gains = {
        "sr": _draw_class(cfg, "sr", rng, n),
        "rd": _draw_class(cfg, "rd", rng, n),
        "rr": _draw_class(cfg, "rr", rng, n),
    }
    if cfg.sd is not None:
        gains["sd"] = rng.gamma(cfg.sd.m, cfg.sd.theta, n)
    if cfg.is_cognitive:
        gains["sp"] = rng.gamma(cfg.sp.m, cfg.sp.theta, n)
        gains["rp"] = _draw_class(cfg, "rp", rng, n)
    return gains


def sample_realization(cfg: NetworkConfig, rng: np.random.Generator) -> Realization:
    """Draw one block-fading Realization of the whole scenario."""
    g = draw_gains(cfg, rng, 1)
    return Realization(
        g_sr=g["sr"][:, 0],
        g_rd=g["rd"][:, 0],
        g_rr=g["rr"][:, 0],
        g_sd=float(g["sd"][0]) if "sd" in g else 0.0,
        g_sp=float(g["sp"][0]) if "sp" in g else None,
        g_rp=g["rp"][:, 0] if "rp" in g else None,
    )


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)
