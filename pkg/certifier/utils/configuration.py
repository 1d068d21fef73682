import enum
from dataclasses import asdict, dataclass, field, fields
from typing import List, Optional

from .linalg import MAX_QUBITS


class ConfigError(Exception):
    pass


class OutputFormat(enum.Enum):
    JSON = "json"
    CSV = "csv"
    TEXT = "text"
    XLSX = "xlsx"

    @staticmethod
    def from_label(label: str) -> "OutputFormat":
        for output_format in OutputFormat:
            if output_format.value == label:
                return output_format
        raise ConfigError(f"unknown output format {label!r}")


def _parse_list(raw, item_type) -> list:
    if isinstance(raw, str):
        raw = [item.strip() for item in raw.split(",") if item.strip()]
    return [item_type(item) for item in raw]


def _parse_optional_str(raw) -> Optional[str]:
    if raw is None:
        return None
    raw = str(raw).strip()
    return raw or None


@dataclass
class Tolerances:
    unitarity: float = 1e-10
    algebra: float = 1e-12
    amplitude: float = 1e-10
    probability: float = 1e-10
    normalization: float = 1e-9
    eigen: float = 1e-9
    entanglement: float = 1e-8
    strict_margin: float = 1e-12

    @staticmethod
    def get_default() -> "Tolerances":
        return Tolerances()

    @staticmethod
    def names() -> List[str]:
        return [f.name for f in fields(Tolerances)]

    @staticmethod
    def from_dict(values: dict) -> "Tolerances":
        tolerances = Tolerances.get_default()
        for name, raw in values.items():
            if name not in Tolerances.names():
                raise ConfigError(f"unknown tolerance {name!r}")
            try:
                setattr(tolerances, name, float(raw))
            except (TypeError, ValueError):
                raise ConfigError(f"tolerance.{name} must be a number, got {raw!r}")
        return tolerances

    def to_json(self) -> dict:
        return asdict(self)


# key -> parser from the raw text of a config file, or from an already typed flag value
_PARSERS = {
    "t_max": int,
    "formula_t_max": int,
    "s_values": lambda raw: _parse_list(raw, int),
    "phase_kinds": lambda raw: _parse_list(raw, str),
    "seed": int,
    "random_instances": int,
    "n_values": lambda raw: _parse_list(raw, int),
    "epsilons": lambda raw: _parse_list(raw, float),
    "e_max": int,
    "trig_samples": int,
    "dense_qubits": int,
    "include": lambda raw: _parse_list(raw, str),
    "exclude": lambda raw: _parse_list(raw, str),
    "out": _parse_optional_str,
    "format": lambda raw: str(raw).strip(),
    "workers": int,
}

PHASE_KIND_LABELS = ("dyadic", "nondyadic", "mixed")


@dataclass
class RunConfig:
    t_max: int = 8
    formula_t_max: int = 10
    s_values: List[int] = field(default_factory=lambda: [1, 2])
    phase_kinds: List[str] = field(default_factory=lambda: ["mixed"])
    seed: int = 0
    random_instances: int = 1
    n_values: List[int] = field(default_factory=lambda: [1, 2, 3, 4])
    epsilons: List[float] = field(default_factory=lambda: [1.0, 0.5, 0.25, 0.1])
    e_max: int = 8192
    trig_samples: int = 10000
    dense_qubits: int = 8
    include: List[str] = field(default_factory=list)
    exclude: List[str] = field(default_factory=list)
    out: Optional[str] = None
    format: str = "json"
    workers: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances.get_default)

    @staticmethod
    def get_default() -> "RunConfig":
        return RunConfig()

    @staticmethod
    def keys() -> List[str]:
        return list(_PARSERS)

    @staticmethod
    def from_dict(values: dict) -> "RunConfig":
        """Builds a config from flat keys; `tolerance.<name>` keys set tolerances."""
        config = RunConfig.get_default()
        tolerance_values = {}

        for key, raw in values.items():
            if key.startswith("tolerance."):
                tolerance_values[key.split(".", 1)[1]] = raw
                continue

            if key not in _PARSERS:
                raise ConfigError(f"unknown configuration key {key!r}")

            try:
                setattr(config, key, _PARSERS[key](raw))
            except (TypeError, ValueError):
                raise ConfigError(f"{key} cannot be read from {raw!r}")

        config.tolerances = Tolerances.from_dict(tolerance_values)
        config.verify()
        return config

    def merged(self, values: dict) -> "RunConfig":
        current = {key: getattr(self, key) for key in _PARSERS}
        current.update({f"tolerance.{name}": value for name, value in self.tolerances.to_json().items()})
        current.update(values)
        return RunConfig.from_dict(current)

    def verify(self) -> None:
        if self.t_max < 1 or self.formula_t_max < 1:
            raise ConfigError("t_max and formula_t_max must be positive")

        if not self.s_values or min(self.s_values) < 1:
            raise ConfigError("s_values needs at least one positive register size")

        if self.t_max + max(self.s_values) > MAX_QUBITS:
            raise ConfigError(f"t_max + max(s_values) exceeds the {MAX_QUBITS}-qubit cap")

        if self.formula_t_max > MAX_QUBITS:
            raise ConfigError(f"formula_t_max exceeds the {MAX_QUBITS}-qubit cap")

        for kind in self.phase_kinds:
            if kind not in PHASE_KIND_LABELS:
                raise ConfigError(f"unknown phase kind {kind!r}")

        if not self.phase_kinds:
            raise ConfigError("phase_kinds must name at least one grid")

        if self.seed < 0:
            raise ConfigError("seed cannot be negative")

        if self.random_instances < 0:
            raise ConfigError("random_instances cannot be negative")

        if not self.n_values or min(self.n_values) < 1:
            raise ConfigError("n_values must be positive")

        # small ε would push t past the cap
        if not self.epsilons or min(self.epsilons) < 0.05 or max(self.epsilons) > 1:
            raise ConfigError("epsilons must lie in [0.05, 1]")

        if self.e_max < 2:
            raise ConfigError("e_max must be at least 2")

        if self.trig_samples < 2:
            raise ConfigError("trig_samples must be at least 2")

        if self.dense_qubits < 2 or self.dense_qubits > MAX_QUBITS:
            raise ConfigError(f"dense_qubits must lie in 2..{MAX_QUBITS}")

        if self.workers < 0:
            raise ConfigError("workers cannot be negative")

        OutputFormat.from_label(self.format)

        for name, value in self.tolerances.to_json().items():
            if not value > 0:
                raise ConfigError(f"tolerance.{name} must be positive")

    @property
    def output_format(self) -> OutputFormat:
        return OutputFormat.from_label(self.format)

    def to_json(self) -> dict:
        json = {key: getattr(self, key) for key in _PARSERS}
        json["tolerances"] = self.tolerances.to_json()
        return json
