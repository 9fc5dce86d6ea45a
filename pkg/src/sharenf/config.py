"""Flat ``key = value`` run configuration.

Lines are ``key = value``; ``#`` starts a comment. Keys not listed in
:data:`FIELDS` are rejected. List-valued keys take comma-separated values.
Spacings are given either in meters (``d_m``, ``dp_m``) or in wavelengths
(``d_lambdas``, ``dp_lambdas``), never both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .compression import POLICIES
from .eval.montecarlo import ALGORITHMS, MonteCarloRun
from .geometry import ANGLE_CONVENTIONS, SPEED_OF_LIGHT, ArrayConfig, GridSpec
from .share import ShareParams
from .signal import SourceTruth


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    P: int = 4
    M0: int = 16
    fc: float = 60.48e9
    d_m: float | None = None
    d_lambdas: float | None = None
    dp_m: float | None = None
    dp_lambdas: float | None = None
    angle_convention: str = "broadside"
    K: tuple[int, ...] = (16,)
    combiner_policy: str = "first-k"
    N: int = 32
    snr_db: tuple[float, ...] = (10.0,)
    noiseless: bool = False
    sources: tuple[SourceTruth, ...] | None = None
    L: tuple[int, ...] = (1,)
    source_theta_min: float = -60.0
    source_theta_max: float = 60.0
    source_r_min: float = 1.0
    source_r_max: float = 10.0
    theta_min: float = -60.0
    theta_max: float = 60.0
    G_theta: int = 121
    r_min: float = 1.0
    r_max: float = 9.0
    G_r: int = 64
    coarse_G_theta: int = 41
    delta_theta: float = 3.0
    G_delta: int = 14
    guard_bins: int = 1
    algorithms: tuple[str, ...] = ALGORITHMS
    trials: int = 100
    seed: int = 0
    beampattern_points: int = 1201

    # -- derived objects -------------------------------------------------
    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.fc

    @property
    def d(self) -> float:
        if self.d_m is not None:
            return self.d_m
        return (0.5 if self.d_lambdas is None else self.d_lambdas) * self.wavelength

    @property
    def dp(self) -> float:
        if self.dp_m is not None:
            return self.dp_m
        return (16.0 if self.dp_lambdas is None else self.dp_lambdas) * self.wavelength

    def array(self) -> ArrayConfig:
        return ArrayConfig(self.P, self.M0, self.d, self.dp, self.fc, self.angle_convention)

    def global_grid(self) -> GridSpec:
        return GridSpec(self.theta_min, self.theta_max, self.G_theta, self.r_min, self.r_max, self.G_r)

    def share_params(self, L: int | None = None) -> ShareParams:
        g = self.global_grid()
        return ShareParams(
            coarse_grid=replace(g, G_theta=self.coarse_G_theta),
            guard_bins=self.guard_bins, delta_theta=self.delta_theta,
            G_delta=self.G_delta, range_grid=g, L=L or self.L[0])

    @property
    def snr_values(self) -> tuple[float, ...]:
        return (math.inf,) if self.noiseless else self.snr_db

    @property
    def L_values(self) -> tuple[int, ...]:
        return (len(self.sources),) if self.sources else self.L

    def runs(self) -> list[MonteCarloRun]:
        """One Monte Carlo batch per (snr, K, L) combination, in that nesting."""
        out = []
        for snr in self.snr_values:
            for K in self.K:
                for L in self.L_values:
                    out.append(MonteCarloRun(
                        cfg=self.array(), K=K, policy=self.combiner_policy,
                        sources=self.sources, L=L, N=self.N, snr_db=snr,
                        trials=self.trials, base_seed=self.seed,
                        algorithms=self.algorithms, global_grid=self.global_grid(),
                        share=self.share_params(L),
                        theta_span=(self.source_theta_min, self.source_theta_max),
                        range_span=(self.source_r_min, self.source_r_max),
                        scenario=f"snr={snr:g} K={K} L={L}"))
        return out

    # -- echo ------------------------------------------------------------
    def to_text(self) -> str:
        """Canonical config text; parsing it reproduces this configuration.

        Spacings are echoed in meters.
        """
        lines = []
        for f in fields(self):
            name = f.name
            if name in ("d_lambdas", "dp_lambdas"):
                continue
            if name == "d_m":
                value = self.d
            elif name == "dp_m":
                value = self.dp
            elif name == "L":
                value = self.L_values
            else:
                value = getattr(self, name)
            lines.append(f"{name} = {_format(name, value)}")
        return "\n".join(lines) + "\n"


def _format(name, value) -> str:
    if name == "sources":
        return "random" if value is None else ", ".join(f"{s.theta!r}:{s.r!r}" for s in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_format(name, v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


_INT = {"P", "M0", "N", "G_theta", "G_r", "coarse_G_theta", "G_delta", "guard_bins",
        "trials", "seed", "beampattern_points"}
_FLOAT = {"fc", "d_m", "d_lambdas", "dp_m", "dp_lambdas", "source_theta_min",
          "source_theta_max", "source_r_min", "source_r_max", "theta_min", "theta_max",
          "r_min", "r_max", "delta_theta"}
_INT_LIST = {"K", "L"}
FIELDS = {f.name for f in fields(RunConfig)}


def _parse_bool(text: str) -> bool:
    t = text.lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_sources(text: str):
    if text.strip().lower() == "random":
        return None
    out = []
    for item in text.split(","):
        theta, _, r = item.partition(":")
        if not _:
            raise ValueError(f"expected theta:range, got {item.strip()!r}")
        out.append(SourceTruth(float(theta), float(r)))
    return tuple(out)


def _split(text: str) -> list[str]:
    items = [t.strip() for t in text.split(",")]
    if not all(items):
        raise ValueError("empty list item")
    return items


def _convert(key: str, text: str):
    if key in _INT:
        return int(text)
    if key in _FLOAT:
        return float(text)
    if key in _INT_LIST:
        return tuple(int(t) for t in _split(text))
    if key == "snr_db":
        return tuple(float(t) for t in _split(text))
    if key == "noiseless":
        return _parse_bool(text)
    if key == "sources":
        return _parse_sources(text)
    if key == "algorithms":
        return tuple(_split(text))
    return text.strip()


def parse_text(text: str) -> dict:
    """Raw ``key -> typed value`` mapping; raises ConfigError with line numbers."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key not in FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _convert(key, value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {key}: {exc}") from None
    return values


def build_config(values: dict) -> RunConfig:
    unknown = set(values) - FIELDS
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]!r}")
    for a, b in (("d_m", "d_lambdas"), ("dp_m", "dp_lambdas")):
        if values.get(a) is not None and values.get(b) is not None:
            raise ConfigError(f"{a}: give either {a} or {b}, not both")
    sources = values.get("sources")
    if sources is not None and "L" in values and values["L"] != (len(sources),):
        raise ConfigError("L: does not match the number of sources")
    try:
        cfg = RunConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    def need(cond, field, msg):
        if not cond:
            raise ConfigError(f"{field}: {msg}")

    need(cfg.P >= 1, "P", "must be >= 1")
    need(cfg.M0 >= 1, "M0", "must be >= 1")
    need(cfg.fc > 0, "fc", "must be positive")
    need(cfg.d > 0, "d", "must be positive")
    need(cfg.dp >= cfg.M0 * cfg.d * (1 - 1e-12), "dp", "must satisfy dp >= M0*d")
    need(cfg.angle_convention in ANGLE_CONVENTIONS, "angle_convention",
         f"must be one of {', '.join(ANGLE_CONVENTIONS)}")
    for K in cfg.K:
        need(1 <= K <= cfg.M0, "K", f"must satisfy 1 <= K <= M0 (K={K}, M0={cfg.M0})")
    need(cfg.combiner_policy in POLICIES, "combiner_policy", f"must be one of {', '.join(POLICIES)}")
    need(cfg.N >= 1, "N", "must be >= 1")
    M = cfg.P * cfg.M0
    for L in cfg.L_values:
        need(1 <= L <= 6, "L", "must satisfy 1 <= L <= 6")
        need(L < M, "L", f"must be smaller than M={M}")
    need(cfg.source_theta_min < cfg.source_theta_max, "source_theta_min", "must be < source_theta_max")
    need(cfg.source_theta_min > -90 and cfg.source_theta_max < 90, "source_theta_min",
         "source angles must stay inside (-90, 90)")
    need(0 < cfg.source_r_min < cfg.source_r_max, "source_r_min", "must satisfy 0 < source_r_min < source_r_max")
    need(cfg.coarse_G_theta >= 2, "coarse_G_theta", "must be >= 2")
    need(cfg.G_delta >= 2, "G_delta", "must be >= 2")
    need(cfg.delta_theta > 0, "delta_theta", "must be positive")
    need(cfg.guard_bins >= 0, "guard_bins", "must be >= 0")
    need(cfg.trials >= 1, "trials", "must be >= 1")
    need(cfg.beampattern_points >= 2, "beampattern_points", "must be >= 2")
    need(len(cfg.algorithms) > 0 and set(cfg.algorithms) <= set(ALGORITHMS), "algorithms",
         f"must be drawn from {', '.join(ALGORITHMS)}")
    try:
        cfg.global_grid()
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from None


def parse_config(source: str | Path | None = None, text: str | None = None,
                 overrides: dict | None = None) -> RunConfig:
    """Load a config from a file path or inline ``text``; ``None`` gives defaults.

    ``overrides`` replaces parsed values before validation.
    """
    if source is not None and text is not None:
        raise ValueError("give a path or text, not both")
    if source is not None:
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {source}: {exc.strerror or exc}") from None
    values = parse_text(text or "")
    values.update(overrides or {})
    return build_config(values)


def config_from_comments(lines) -> RunConfig:
    """Rebuild a RunConfig from the ``config:`` block of a CSV header."""
    body = []
    inside = False
    for line in lines:
        if line == "config:":
            inside = True
            continue
        if inside:
            if not line.startswith("  "):
                break
            body.append(line[2:])
    return parse_config(text="\n".join(body))
