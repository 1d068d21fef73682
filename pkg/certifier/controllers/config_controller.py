import logging
import os
from typing import Dict, Mapping, Optional

from ..utils.configuration import ConfigError, RunConfig, Tolerances
from ..utils.path import is_path_exists_or_creatable

logger = logging.getLogger(__name__)

SEED_VARIABLE = "QPE_CERTIFY_SEED"


class ConfigController:
    def __init__(self, path: Optional[str] = None):
        self.configuration_path = path

    def _read_pairs(self) -> Dict[str, str]:
        """Reads `key = value` lines; `#` starts a comment."""
        pairs = {}

        try:
            with open(self.configuration_path, "r", encoding="utf-8") as f:
                lines = f.readlines()
        except OSError as exc:
            raise ConfigError(f"cannot read configuration {self.configuration_path}: {exc.strerror}")

        for number, line in enumerate(lines, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue

            if "=" not in line:
                raise ConfigError(f"{self.configuration_path}:{number}: expected 'key = value'")

            key, value = (part.strip() for part in line.split("=", 1))
            if key in pairs:
                raise ConfigError(f"{self.configuration_path}:{number}: {key} is set twice")
            pairs[key] = value

        return pairs

    def _verify_configuration(self, configuration: dict) -> None:
        """Checks the keys before any value is parsed"""
        for key in configuration:
            if key.startswith("tolerance."):
                if key.split(".", 1)[1] not in Tolerances.names():
                    raise ConfigError(f"unknown tolerance {key!r}")
                continue

            if key not in RunConfig.keys():
                raise ConfigError(f"unknown configuration key {key!r}")

    def get_configuration(self, overrides: Optional[dict] = None, environ: Optional[Mapping[str, str]] = None) -> RunConfig:
        """Defaults, then the file, then the seed variable, then the flags in overrides."""
        environ = os.environ if environ is None else environ
        overrides = {key: value for key, value in (overrides or {}).items() if value is not None}

        values = {}
        if self.configuration_path is not None:
            values = self._read_pairs()
            self._verify_configuration(values)
            logger.debug("loaded %d keys from %s", len(values), self.configuration_path)

        if "seed" not in overrides and environ.get(SEED_VARIABLE):
            values["seed"] = environ[SEED_VARIABLE].strip()

        self._verify_configuration(overrides)
        values.update(overrides)

        configuration = RunConfig.get_default().merged(values)

        if configuration.out is not None and not is_path_exists_or_creatable(configuration.out):
            raise ConfigError(f"output path {configuration.out} is not writable")

        return configuration
