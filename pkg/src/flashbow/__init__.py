"""Flashes (monochromatic walks) and rainbows in edge-coloured tournaments."""

from .detect import (UNBOUNDED, color_profiles, flash_table, longest_flash, longest_rainbow,
                     m_flash_colors)
from .model import (ColoredTournament, Tournament, new_transitive, parse, random_tournament,
                    serialize, walk_colors)

__version__ = "0.1.0"

__all__ = [
    "UNBOUNDED", "ColoredTournament", "Tournament", "color_profiles", "flash_table",
    "longest_flash", "longest_rainbow", "m_flash_colors", "new_transitive", "parse",
    "random_tournament", "serialize", "walk_colors",
]
