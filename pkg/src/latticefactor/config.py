"""Configuration management for latticefactor."""

import json
import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

logger = logging.getLogger(__name__)


class EngineConfig(BaseModel):
    """Size budgets for the enumeration engine."""
    product_budget: int = 6000
    isomorphism_budget: int = 1000
    transversal_budget: int = 2_000_000
    max_poset_size: int = 5000
    max_chain_length: int = 4

    @field_validator('product_budget', 'isomorphism_budget', 'transversal_budget',
                     'max_poset_size', 'max_chain_length')
    @classmethod
    def validate_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Budgets must be positive")
        return v

    @model_validator(mode='after')
    def validate_isomorphism_budget(self) -> 'EngineConfig':
        if self.isomorphism_budget > self.product_budget:
            raise ValueError("isomorphism_budget cannot exceed product_budget")
        return self


class SweepConfig(BaseModel):
    """Exhaustive and sampled sweep settings."""
    max_vertices: int = 5
    exhaustive: bool = False
    sample_size: int = 500
    seed: int = 0
    workers: int = 1
    long_running: bool = False

    @field_validator('max_vertices')
    @classmethod
    def validate_max_vertices(cls, v: int) -> int:
        if v < 1 or v > 8:
            raise ValueError("max_vertices must be between 1 and 8")
        return v

    @field_validator('workers')
    @classmethod
    def validate_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError("workers must be at least 1")
        return v


class OutputConfig(BaseModel):
    """Report output settings."""
    json_output: bool = Field(default=False, alias="json")
    indent: int = 2
    sort_keys: bool = True

    model_config = {"populate_by_name": True}


class Config(BaseModel):
    """Main configuration class."""
    engine: EngineConfig = Field(default_factory=EngineConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @classmethod
    def from_file(cls, config_path: Union[str, Path]) -> 'Config':
        """Load configuration from a JSON file.

        Args:
            config_path: Path to the configuration file

        Returns:
            Loaded Config instance
        """
        config_path = Path(config_path)
        if not config_path.exists():
            logger.warning("Config file %s not found, using defaults", config_path)
            return cls()

        with open(config_path, 'r') as f:
            config_data = json.load(f)

        return cls.model_validate(config_data)

    def save(self, config_path: Union[str, Path]) -> None:
        """Save configuration to a JSON file.

        Args:
            config_path: Path to save the configuration file
        """
        config_path = Path(config_path)
        config_path.parent.mkdir(parents=True, exist_ok=True)

        with open(config_path, 'w') as f:
            json.dump(self.model_dump(by_alias=True), f, indent=2)


def get_default_config_path() -> Path:
    """Get the default configuration file path.

    Returns:
        Path to the default configuration file
    """
    config_dir = Path.home() / ".config" / "latticefactor"
    return config_dir / "config.json"


def load_config(config_path: Optional[Union[str, Path]] = None) -> Config:
    """Load configuration from file or use defaults.

    Args:
        config_path: Optional path to config file. If None, uses default location.

    Returns:
        Loaded Config instance
    """
    if config_path is None:
        config_path = get_default_config_path()

    try:
        return Config.from_file(config_path)
    except Exception as e:
        logger.error("Error loading config from %s: %s", config_path, e)
        logger.info("Using default configuration")
        return Config()
