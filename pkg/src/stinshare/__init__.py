"""Monte Carlo simulator for spectrum sharing between a LEO satellite network
and a terrestrial cellular network."""

from .config import ConfigError, ScenarioConfig, emit_config, parse_config
from .deployment import Framework
from .engine import SweepSpec, compare, run, sweep
from .metrics import MetricsReport
from .spectrum import ScenarioId, SpectrumPlan

__all__ = [
    "ConfigError", "Framework", "MetricsReport", "ScenarioConfig", "ScenarioId", "SpectrumPlan",
    "SweepSpec", "compare", "emit_config", "parse_config", "run", "sweep",
]
__version__ = "0.1.0"
