import os

DEFAULT_MAX_ELEMENTS = 100_000
DEFAULT_MAX_RADIUS = 64


def max_elements():
    """Cap on closure sizes and enumerations; UIS_MAX_ELEMENTS overrides."""
    return int(os.environ.get("UIS_MAX_ELEMENTS", DEFAULT_MAX_ELEMENTS))


def max_radius():
    return int(os.environ.get("UIS_MAX_RADIUS", DEFAULT_MAX_RADIUS))
