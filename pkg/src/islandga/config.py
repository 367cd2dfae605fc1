"""Experiment configuration: schema, validation, presets, and file loading.

Config files are flat ``key = value`` text. A file may start from a named
preset (``preset = ppeaks-8x32``) and override individual keys; CLI flags
override the file in turn. Unknown keys are rejected.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, fields, replace

from .engine import GaParams
from .migration import POLICY_NAMES
from .problems import MmdpProblem, PPeaksProblem


class ConfigError(ValueError):
    """Base class for configuration problems."""


class ConfigParseError(ConfigError):
    """The config text could not be parsed."""


class ConfigValidationError(ConfigError):
    """A parsed config value violates the schema."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass
class ExperimentConfig:
    """Full declarative description of one experiment."""

    problem: str  # "mmdp" or "ppeaks"
    islands: int
    population_size: int
    selection_rate: float
    mutation_priority: float
    crossover_priority: float
    generations_to_migration: int
    max_evaluations: int
    policy: str
    replicates: int
    master_seed: int
    mmdp_k: int | None = None
    ppeaks_peaks: int | None = None
    ppeaks_length: int | None = None
    stop_on_optimum: bool = True

    def validate(self) -> "ExperimentConfig":
        if self.problem not in ("mmdp", "ppeaks"):
            raise ConfigValidationError("problem", f"must be 'mmdp' or 'ppeaks', got {self.problem!r}")
        if self.islands < 2:
            raise ConfigValidationError("islands", "ring topology needs at least 2 islands")
        if self.population_size < 1:
            raise ConfigValidationError("population_size", "must be >= 1")
        if not 0.0 < self.selection_rate <= 1.0:
            raise ConfigValidationError("selection_rate", "must be in (0, 1]")
        if self.mutation_priority < 0 or self.crossover_priority < 0:
            raise ConfigValidationError("mutation_priority", "priorities must be non-negative")
        if self.mutation_priority + self.crossover_priority <= 0:
            raise ConfigValidationError("crossover_priority", "at least one priority must be positive")
        if self.generations_to_migration < 1:
            raise ConfigValidationError("generations_to_migration", "must be >= 1")
        if self.max_evaluations < 1:
            raise ConfigValidationError("max_evaluations", "must be >= 1")
        if self.policy not in POLICY_NAMES:
            raise ConfigValidationError(
                "policy", f"unknown policy {self.policy!r}; expected one of {', '.join(POLICY_NAMES)}"
            )
        if self.replicates < 1:
            raise ConfigValidationError("replicates", "must be >= 1")
        if self.problem == "mmdp":
            if self.mmdp_k is None or self.mmdp_k < 1:
                raise ConfigValidationError("mmdp_k", "mmdp needs mmdp_k >= 1")
            if self.ppeaks_peaks is not None or self.ppeaks_length is not None:
                raise ConfigValidationError("ppeaks_peaks", "not applicable to the mmdp problem")
        else:
            if self.ppeaks_peaks is None or self.ppeaks_peaks < 1:
                raise ConfigValidationError("ppeaks_peaks", "ppeaks needs ppeaks_peaks >= 1")
            if self.ppeaks_length is None or self.ppeaks_length < 1:
                raise ConfigValidationError("ppeaks_length", "ppeaks needs ppeaks_length >= 1")
            if self.mmdp_k is not None:
                raise ConfigValidationError("mmdp_k", "not applicable to the ppeaks problem")
        return self

    @property
    def chromosome_length(self) -> int:
        if self.problem == "mmdp":
            return 6 * self.mmdp_k
        return self.ppeaks_length

    def ga_params(self) -> GaParams:
        return GaParams(
            population_size=self.population_size,
            selection_rate=self.selection_rate,
            mutation_priority=self.mutation_priority,
            crossover_priority=self.crossover_priority,
            generations_to_migration=self.generations_to_migration,
            max_evaluations=self.max_evaluations,
        )

    def build_problem(self, rng: random.Random):
        """Instantiate the fitness landscape; ppeaks draws its peaks from rng."""
        if self.problem == "mmdp":
            return MmdpProblem(self.mmdp_k)
        return PPeaksProblem.generate(self.ppeaks_peaks, self.ppeaks_length, rng)

    def setup_label(self) -> str:
        """Canonical descriptor of everything but policy/seed/replicates.

        Summaries carry this label so comparisons can refuse to mix results
        from different experimental setups.
        """
        varying = {"policy", "master_seed", "replicates"}
        parts = []
        for f in fields(self):
            if f.name in varying:
                continue
            value = getattr(self, f.name)
            if value is None:
                continue
            parts.append(f"{f.name}={value}")
        return ";".join(parts)


_INT_KEYS = {
    "islands", "population_size", "generations_to_migration", "max_evaluations",
    "replicates", "master_seed", "mmdp_k", "ppeaks_peaks", "ppeaks_length",
}
_FLOAT_KEYS = {"selection_rate", "mutation_priority", "crossover_priority"}
_BOOL_KEYS = {"stop_on_optimum"}
_STR_KEYS = {"problem", "policy"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _STR_KEYS


PRESETS: dict[str, ExperimentConfig] = {
    "ppeaks-8x32": ExperimentConfig(
        problem="ppeaks",
        ppeaks_peaks=100,
        ppeaks_length=64,
        islands=8,
        population_size=32,
        selection_rate=0.6,
        mutation_priority=2.0,
        crossover_priority=3.0,
        generations_to_migration=20,
        max_evaluations=1_000_000,
        policy="mk",
        replicates=30,
        master_seed=1234,
    ),
    "mmdp-k20": ExperimentConfig(
        problem="mmdp",
        mmdp_k=20,
        islands=8,
        population_size=256,
        selection_rate=0.2,
        mutation_priority=2.0,
        crossover_priority=3.0,
        generations_to_migration=20,
        max_evaluations=200_000,
        policy="mk",
        replicates=30,
        master_seed=1234,
    ),
}


def preset(name: str) -> ExperimentConfig:
    try:
        base = PRESETS[name]
    except KeyError:
        raise ConfigValidationError(
            "preset", f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None
    return replace(base)


def _coerce(key: str, raw: str, source: str, lineno: int):
    try:
        if key in _INT_KEYS:
            return int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        if key in _BOOL_KEYS:
            lowered = raw.lower()
            if lowered in ("true", "yes", "1"):
                return True
            if lowered in ("false", "no", "0"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        return raw
    except ValueError as exc:
        raise ConfigParseError(f"{source}:{lineno}: bad value for {key}: {exc}") from None


def parse_config_text(text: str, source: str = "<config>") -> ExperimentConfig:
    """Parse flat ``key = value`` config text into a validated config."""
    pairs: dict[str, object] = {}
    preset_name = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigParseError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key = key.strip()
        value = value.split("#", 1)[0].strip()
        if key == "preset":
            preset_name = value
            continue
        if key not in _ALL_KEYS:
            raise ConfigParseError(f"{source}:{lineno}: unknown key {key!r}")
        if key in pairs:
            raise ConfigParseError(f"{source}:{lineno}: duplicate key {key!r}")
        pairs[key] = _coerce(key, value, source, lineno)

    if preset_name is not None:
        cfg = preset(preset_name)
        cfg = replace(cfg, **pairs)
    else:
        missing = [
            f.name
            for f in fields(ExperimentConfig)
            if f.name not in pairs
            and f.name not in ("mmdp_k", "ppeaks_peaks", "ppeaks_length", "stop_on_optimum")
        ]
        if missing:
            raise ConfigValidationError(missing[0], "required key missing (no preset given)")
        cfg = ExperimentConfig(**pairs)  # type: ignore[arg-type]
    return cfg.validate()


def load_config(path) -> ExperimentConfig:
    """Load and validate a config file; FileNotFoundError propagates as-is."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_config_text(text, source=str(path))


def apply_overrides(cfg: ExperimentConfig, **overrides) -> ExperimentConfig:
    """Return a copy with non-None overrides applied, then re-validated."""
    supplied = {k: v for k, v in overrides.items() if v is not None}
    bad = set(supplied) - _ALL_KEYS
    if bad:
        raise ConfigValidationError(sorted(bad)[0], "unknown override")
    return replace(cfg, **supplied).validate()
