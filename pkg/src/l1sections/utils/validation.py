# src/l1sections/utils/validation.py
# Pydantic models in types.py carry most field checks; this module builds them
# from the merged config and holds the small integer predicates used everywhere.

from typing import Any, Dict, Optional
import logging

from pydantic import ValidationError

from ..constants import AssemblyMode, BentFamilyKind
from ..exceptions import ConfigurationError
from ..types import RunConfig

logger = logging.getLogger(__name__)


def build_run_config(command: str, config: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Merges config-file defaults with CLI overrides (None means "not given")
    and validates the result. Raises ConfigurationError on invalid values.
    """
    assembly = config.get("assembly", {})
    analysis = config.get("analysis", {})
    data: Dict[str, Any] = {
        "command": command,
        "eta": assembly.get("eta", 0.5),
        "beta0": assembly.get("beta0", 0.05),
        "epsilon_schedule": assembly.get("epsilon_schedule", 1 / 16),
        "delta": assembly.get("delta", 0.25),
        "min_N": assembly.get("min_N", 256),
        "xi0_assumed": config.get("boost", {}).get("xi0_assumed", 0.0),
        "bent_family": BentFamilyKind.from_string(config.get("kerdock", {}).get("bent_family", "kerdock")),
        "degree": config.get("seeded", {}).get("degree"),
        "max_analysis_n": analysis.get("max_n", 4096),
        "enum_budget": analysis.get("enum_budget", 1_000_000),
        "samples": analysis.get("samples", 10_000),
        "workers": config.get("concurrency", {}).get("workers", 4),
    }
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key == "mode" and isinstance(value, str):
            try:
                value = AssemblyMode.from_string(value)
            except ValueError as e:
                raise ConfigurationError(str(e)) from e
        data[key] = value
    try:
        return RunConfig(**data)
    except ValidationError as e:
        logger.error(f"Run configuration validation failed for command '{command}'. Errors: {e.errors()}")
        raise ConfigurationError(f"Invalid run configuration: {_first_message(e)}") from e


def _first_message(e: ValidationError) -> str:
    errors = e.errors()
    if not errors:
        return str(e)
    first = errors[0]
    where = ".".join(str(p) for p in first.get("loc", ())) or "config"
    return f"{where}: {first.get('msg')}"


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def is_power_of_four(n: int) -> bool:
    # single set bit at an even position
    return is_power_of_two(n) and (n.bit_length() - 1) % 2 == 0

