"""Flat ``key = value`` experiment configuration.

Lines starting with ``#`` are comments. Every file must carry
``schema_version = 1``; unknown or repeated keys are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from ..anneal import AnnealConfig
from ..decode import METHODS, DecoderConfig

SCHEMA_VERSION = 1
KINDS = ("scaling", "threshold", "demo", "ground_state_stats")
FIT_MODELS = ("power_law", "loglog")


class ConfigError(ValueError):
    pass


class ConfigReadError(ConfigError, OSError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    distances: tuple[int, ...]
    error_rates: tuple[float, ...]
    trials: int
    methods: tuple[str, ...]
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    seed: int = 0
    workers: int = 1
    out: str | None = None
    plot: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment {self.kind!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.distances or any(d < 2 for d in self.distances):
            raise ConfigError("distances must be a non-empty list of integers >= 2")
        if not self.error_rates or any(not 0.0 <= p <= 1.0 for p in self.error_rates):
            raise ConfigError("error_rates must lie in [0, 1]")
        if not self.methods or any(m not in METHODS for m in self.methods):
            raise ConfigError(f"methods must be drawn from {METHODS}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be >= 0")


@dataclass(frozen=True)
class FitSpec:
    input: str
    model: str = "power_law"
    method: str = "da"
    distances: tuple[int, ...] = ()  # empty: every distance in the input
    p_th: float | None = None  # None: midpoint of the measured crossing bracket
    p_min: float = 0.04
    p_max: float = 0.08
    out: str | None = None
    plot: str | None = None

    def __post_init__(self):
        if self.model not in FIT_MODELS:
            raise ConfigError(f"fit model must be one of {FIT_MODELS}")
        if not 0.0 <= self.p_min <= self.p_max <= 1.0:
            raise ConfigError("need 0 <= p_min <= p_max <= 1")
        if self.p_th is not None and not 0.0 < self.p_th < 1.0:
            raise ConfigError("p_th must lie in (0, 1)")


DEFAULT_DECODER = DecoderConfig(anneal=AnnealConfig(stall_iterations=5000))

DEFAULTS = {
    "scaling": ExperimentSpec(
        "scaling", tuple(range(4, 17)), (0.001, 0.01, 0.05), 100, ("da", "sa", "mwpm"), DEFAULT_DECODER
    ),
    "threshold": ExperimentSpec(
        "threshold", (5, 7, 9, 11), (0.07, 0.08, 0.09, 0.095, 0.10, 0.11, 0.12), 2000, ("da",), DEFAULT_DECODER
    ),
    "demo": ExperimentSpec(
        "demo", (41,), (0.02,), 1, ("da",),
        DecoderConfig(J=4, anneal=AnnealConfig(t_max=10.0, stall_iterations=20000)),
    ),
    "ground_state_stats": ExperimentSpec(
        "ground_state_stats", (3, 5, 7, 9, 11), (0.01, 0.05, 0.10), 100, ("da", "mwpm"), DEFAULT_DECODER
    ),
}

_ANNEAL_KEYS = {f.name for f in fields(AnnealConfig)} - {"mode", "seed", "debug"}
_DECODER_KEYS = {"J", "h", "alpha"}
_SPEC_KEYS = {"distances", "error_rates", "trials", "methods", "seed", "workers", "out", "plot"}
_FIT_KEYS = {"input", "model", "method", "distances", "p_th", "p_min", "p_max", "out", "plot"}
_OPTIONAL = {"alpha", "offset_increment", "stall_iterations", "p_th", "out", "plot"}


def read_pairs(path: str | Path) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigReadError(f"cannot read config {path}: {exc}") from exc
    return parse_pairs(text)


def parse_pairs(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {n}: empty key")
        if key in pairs:
            raise ConfigError(f"line {n}: duplicate key {key!r}")
        pairs[key] = value
    version = pairs.pop("schema_version", None)
    if version is None:
        raise ConfigError("missing schema_version")
    if version != str(SCHEMA_VERSION):
        raise ConfigError(f"unsupported schema_version {version}, expected {SCHEMA_VERSION}")
    return pairs


def _scalar(key: str, value: str, kind):
    if key in _OPTIONAL and value.lower() in ("", "none"):
        return None
    try:
        if kind is int:
            return int(value)
        if kind is float:
            return float(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r} as {kind.__name__}") from None
    return value


def _list(key: str, value: str, kind) -> tuple:
    items = [v.strip() for v in value.split(",") if v.strip()]
    if not items:
        raise ConfigError(f"{key}: empty list")
    return tuple(_scalar(key, v, kind) for v in items)


_TYPES = {
    "J": int, "h": int, "alpha": int, "replicas": int, "t_max": float, "t_min": float,
    "max_iterations": int, "exchange_interval": int, "offset_increment": int,
    "stall_iterations": int, "trials": int, "seed": int, "workers": int,
    "p_th": float, "p_min": float, "p_max": float,
}


def experiment_from_pairs(kind: str, pairs: dict[str, str]) -> ExperimentSpec:
    if kind not in KINDS:
        raise ConfigError(f"unknown experiment {kind!r}")
    pairs = dict(pairs)
    declared = pairs.pop("experiment", kind)
    if declared != kind:
        raise ConfigError(f"config is for experiment {declared!r}, not {kind!r}")
    unknown = set(pairs) - _SPEC_KEYS - _DECODER_KEYS - _ANNEAL_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    base = DEFAULTS[kind]
    spec_kw, dec_kw, ann_kw = {}, {}, {}
    for key, value in pairs.items():
        if key == "distances":
            spec_kw[key] = _list(key, value, int)
        elif key == "error_rates":
            spec_kw[key] = _list(key, value, float)
        elif key == "methods":
            spec_kw[key] = _list(key, value, str)
        elif key in _SPEC_KEYS:
            spec_kw[key] = _scalar(key, value, _TYPES.get(key, str))
        elif key in _DECODER_KEYS:
            dec_kw[key] = _scalar(key, value, int)
        else:
            ann_kw[key] = _scalar(key, value, _TYPES[key])
    try:
        anneal = replace(base.decoder.anneal, **ann_kw)
        decoder = replace(base.decoder, anneal=anneal, **dec_kw)
        return replace(base, decoder=decoder, **spec_kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def fit_from_pairs(pairs: dict[str, str]) -> FitSpec:
    pairs = dict(pairs)
    if pairs.pop("experiment", "fit") != "fit":
        raise ConfigError("config is not a fit config")
    unknown = set(pairs) - _FIT_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "input" not in pairs:
        raise ConfigError("fit config needs an input key")
    kw = {}
    for key, value in pairs.items():
        if key == "distances":
            kw[key] = _list(key, value, int)
        else:
            kw[key] = _scalar(key, value, _TYPES.get(key, str))
    return FitSpec(**kw)


def format_experiment(spec: ExperimentSpec) -> str:
    """Inverse of :func:`experiment_from_pairs`; handy for recording runs."""
    a, dec = spec.decoder.anneal, spec.decoder

    def fmt(v):
        return "none" if v is None else str(v)

    lines = [
        f"schema_version = {SCHEMA_VERSION}",
        f"experiment = {spec.kind}",
        "distances = " + ", ".join(map(str, spec.distances)),
        "error_rates = " + ", ".join(repr(p) for p in spec.error_rates),
        f"trials = {spec.trials}",
        "methods = " + ", ".join(spec.methods),
        f"seed = {spec.seed}",
        f"workers = {spec.workers}",
        f"J = {dec.J}",
        f"h = {dec.h}",
        f"alpha = {fmt(dec.alpha)}",
    ]
    for key in sorted(_ANNEAL_KEYS):
        lines.append(f"{key} = {fmt(getattr(a, key))}")
    if spec.out:
        lines.append(f"out = {spec.out}")
    if spec.plot:
        lines.append(f"plot = {spec.plot}")
    return "\n".join(lines) + "\n"
