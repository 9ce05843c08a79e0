#!/usr/bin/env python3
"""
Configuration management for cliffverify
Handles the golden-table location, worker counts and log level.
"""

import os
import json
import logging
from pathlib import Path
from typing import Optional, Dict, Any
from dataclasses import dataclass, asdict

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass
class GoldenConfig:
    """Where the committed golden tables live."""
    golden_dir: str = "golden"


@dataclass
class ComputeConfig:
    """Worker pool settings for τ4, scans and derivation sweeps."""
    workers: int = 1

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")


@dataclass
class LoggingConfig:
    level: str = "WARNING"

    def __post_init__(self):
        self.level = self.level.upper()
        if self.level not in LOG_LEVELS:
            raise ValueError(f"Unknown log level: {self.level}")


@dataclass
class CliffverifyConfig:
    """Complete cliffverify configuration."""
    golden: GoldenConfig
    compute: ComputeConfig
    logging: LoggingConfig

    def __init__(self, **kwargs):
        # Nested sections
        golden_config = dict(kwargs.pop('golden', {}))
        compute_config = dict(kwargs.pop('compute', {}))
        logging_config = dict(kwargs.pop('logging', {}))

        # Flat keys land in whichever section declares them
        for key in list(kwargs):
            for section, fields in ((golden_config, GoldenConfig.__dataclass_fields__),
                                    (compute_config, ComputeConfig.__dataclass_fields__),
                                    (logging_config, {'level': None, 'log_level': None})):
                if key in fields:
                    section['level' if key == 'log_level' else key] = kwargs.pop(key)
                    break
        if kwargs:
            logger.warning(f"Ignoring unknown configuration keys: {sorted(kwargs)}")

        for name, section, cls in (('golden', golden_config, GoldenConfig),
                                   ('compute', compute_config, ComputeConfig),
                                   ('logging', logging_config, LoggingConfig)):
            unknown = sorted(set(section) - set(cls.__dataclass_fields__))
            if unknown:
                logger.warning(f"Ignoring unknown keys in '{name}': {unknown}")
                for key in unknown:
                    del section[key]

        self.golden = GoldenConfig(**golden_config)
        self.compute = ComputeConfig(**compute_config)
        self.logging = LoggingConfig(**logging_config)


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from None


class ConfigManager:
    """Manages configuration loading, saving, and environment variables."""

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = Path(config_file) if config_file else Path("cliffverify_config.json")
        self._config: Optional[CliffverifyConfig] = None

    def load_config(self) -> CliffverifyConfig:
        """Load configuration from defaults, then the JSON file, then the environment."""
        if self._config is not None:
            return self._config

        config_data: Dict[str, Any] = {}

        if self.config_file.exists():
            try:
                with open(self.config_file, 'r') as f:
                    config_data.update(json.load(f))
            except (OSError, json.JSONDecodeError) as e:
                logger.warning(f"Could not load config file {self.config_file}: {e}")

        env_config = self._load_from_env()
        for section, values in env_config.items():
            merged = dict(config_data.get(section, {}))
            merged.update(values)
            config_data[section] = merged

        self._config = CliffverifyConfig(**config_data)
        return self._config

    def _load_from_env(self) -> Dict[str, Dict[str, Any]]:
        """Load configuration from environment variables."""
        env_config: Dict[str, Dict[str, Any]] = {}

        if os.getenv('CLIFFVERIFY_GOLDEN_DIR'):
            env_config['golden'] = {'golden_dir': os.getenv('CLIFFVERIFY_GOLDEN_DIR')}

        workers = _env_int('CLIFFVERIFY_WORKERS')
        if workers is not None:
            env_config['compute'] = {'workers': workers}

        if os.getenv('CLIFFVERIFY_LOG_LEVEL'):
            env_config['logging'] = {'level': os.getenv('CLIFFVERIFY_LOG_LEVEL')}

        return env_config

    def save_config(self, config: CliffverifyConfig):
        """Save configuration to file."""
        config_data = {
            'golden': asdict(config.golden),
            'compute': asdict(config.compute),
            'logging': asdict(config.logging),
        }
        with open(self.config_file, 'w') as f:
            json.dump(config_data, f, indent=2)
        print(f"✅ Configuration saved to {self.config_file}")

    def create_default_config(self) -> CliffverifyConfig:
        """Create and save a default configuration file."""
        default_config = CliffverifyConfig()
        self.save_config(default_config)
        return default_config

    def print_config(self, config: CliffverifyConfig):
        """Print current configuration in a readable format."""
        print("\n📋 Current Configuration:")
        print("=" * 50)

        print("\n📁 Golden Tables:")
        print(f"  Golden Directory: {config.golden.golden_dir}")

        print("\n⚙️ Compute Settings:")
        print(f"  Workers: {config.compute.workers}")

        print("\n📝 Logging:")
        print(f"  Level: {config.logging.level}")

        print("=" * 50)


def get_config(config_file: Optional[str] = None) -> CliffverifyConfig:
    """Get the current configuration."""
    manager = ConfigManager(config_file)
    return manager.load_config()


def save_config(config: CliffverifyConfig, config_file: Optional[str] = None):
    """Save configuration to file."""
    manager = ConfigManager(config_file)
    manager.save_config(config)


def print_config(config_file: Optional[str] = None):
    """Print current configuration."""
    manager = ConfigManager(config_file)
    config = manager.load_config()
    manager.print_config(config)


def create_default_config(config_file: Optional[str] = None) -> CliffverifyConfig:
    """Create default configuration file."""
    manager = ConfigManager(config_file)
    return manager.create_default_config()


# Environment variable documentation
ENV_VARS_HELP = """
Environment Variables:
  CLIFFVERIFY_GOLDEN_DIR   Directory holding the golden tables (default: golden)
  CLIFFVERIFY_WORKERS      Worker processes for τ4 and scans (default: 1)
  CLIFFVERIFY_LOG_LEVEL    DEBUG, INFO, WARNING or ERROR (default: WARNING)

Example:
  export CLIFFVERIFY_GOLDEN_DIR=/data/cliffverify/golden
  export CLIFFVERIFY_WORKERS=8
  export CLIFFVERIFY_LOG_LEVEL=INFO
"""
