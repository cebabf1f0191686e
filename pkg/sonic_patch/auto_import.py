"""Populate the boundary preset registry.

Import this module (or call `ensure_registered`) before reading the registry so every
`@register_preset` decorator has run.
"""

# Track registration state
_REGISTERED = False


def ensure_registered() -> None:
    """Import every preset module exactly once. Safe to call repeatedly."""
    global _REGISTERED
    if _REGISTERED:
        return

    from sonic_patch.boundary import presets  # noqa: F401

    _REGISTERED = True
