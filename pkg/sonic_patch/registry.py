from __future__ import annotations

"""Boundary preset registry.

A preset is a named, parameterized builder that returns a `BoundarySpec`. Presets
register themselves with the `register_preset` decorator when their module is
imported (see `sonic_patch.auto_import`).
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Literal

if TYPE_CHECKING:
    from sonic_patch.boundary.spec import BoundarySpec

PresetBuilder = Callable[..., "BoundarySpec"]


@dataclass
class PresetSpec:
    """Registry entry for a boundary preset.

    Attributes:
        preset_id: Unique identifier used in run configurations (e.g., "reference").
        builder: Callable taking keyword parameters and returning a BoundarySpec.
        category: "admissible" presets satisfy every hypothesis; "counterexample"
            presets violate one on purpose.
        description: Human-readable description of the wall and Mach data.
        violates: For counterexamples, the admissibility check expected to fail.
        defaults: Default keyword parameters of the builder.
    """

    preset_id: str
    builder: PresetBuilder
    category: Literal["admissible", "counterexample"]
    description: str = ""
    violates: str | None = None
    defaults: dict[str, float] = field(default_factory=dict)

    def build(self, **params: float) -> BoundarySpec:
        """Build the preset, overriding defaults with `params`."""
        unknown = set(params) - set(self.defaults)
        if unknown:
            raise ValueError(f"Unknown parameters for preset '{self.preset_id}': {sorted(unknown)}")
        merged = {**self.defaults, **params}
        spec = self.builder(**merged)
        spec.name = self.preset_id
        spec.params = merged
        return spec


_REGISTRY: dict[str, PresetSpec] = {}


def register_preset(
    preset_id: str,
    category: Literal["admissible", "counterexample"] = "admissible",
    description: str = "",
    violates: str | None = None,
    defaults: dict[str, float] | None = None,
) -> Callable[[PresetBuilder], PresetBuilder]:
    """Decorator to register a boundary builder as a preset.

    Usage:
        @register_preset(
            preset_id="reference",
            description="Parabolic wall with linearly decreasing varpi",
            defaults={"x2": 0.12},
        )
        def reference(x2: float) -> BoundarySpec:
            ...

    Raises:
        ValueError: If preset_id is already registered.
    """

    def decorator(builder: PresetBuilder) -> PresetBuilder:
        if preset_id in _REGISTRY:
            raise ValueError(f"Preset '{preset_id}' is already registered")
        if category == "counterexample" and violates is None:
            raise ValueError(f"Counterexample preset '{preset_id}' must name the check it violates")

        _REGISTRY[preset_id] = PresetSpec(
            preset_id=preset_id,
            builder=builder,
            category=category,
            description=description,
            violates=violates,
            defaults=dict(defaults or {}),
        )
        return builder

    return decorator


def get_preset(preset_id: str) -> PresetSpec:
    """Get a preset by ID.

    Raises:
        KeyError: If no preset with the given ID is registered.
    """
    if preset_id not in _REGISTRY:
        raise KeyError(f"Unknown preset: '{preset_id}' (available: {', '.join(get_all_preset_ids())})")
    return _REGISTRY[preset_id]


def list_presets(category: str | None = None) -> list[PresetSpec]:
    """List presets, optionally only those of one category."""
    return [spec for spec in _REGISTRY.values() if category is None or spec.category == category]


def get_all_preset_ids() -> list[str]:
    return sorted(_REGISTRY.keys())
