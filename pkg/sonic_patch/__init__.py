"""Supersonic-sonic patch solver for 2-D steady isentropic irrotational flow."""

from sonic_patch.config import RunConfig, SolverParams, load_config
from sonic_patch.gas import GasParams
from sonic_patch.registry import get_preset, list_presets, register_preset

__version__ = "0.1.0"

__all__ = [
    "GasParams",
    "RunConfig",
    "SolverParams",
    "get_preset",
    "list_presets",
    "load_config",
    "register_preset",
]
