"""The element-category color palette driving segmentation."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError

CATEGORIES = (
    "green_space",
    "water",
    "road",
    "pavement",
    "building",
    "red_line",
    "city_road",
    "plant",
)

# default reference colors; layout plans are expected to use flat fills
# close to these
DEFAULT_COLORS = {
    "green_space": (34, 139, 34),
    "water": (0, 102, 204),
    "road": (128, 128, 128),
    "pavement": (210, 180, 140),
    "building": (178, 34, 34),
    "red_line": (255, 0, 0),
    "city_road": (64, 64, 64),
    "plant": (0, 200, 0),
}

DEFAULT_TOLERANCE = 20


@dataclass(frozen=True)
class PaletteEntry:
    category: str
    color: tuple[int, int, int]
    tolerance: int = DEFAULT_TOLERANCE


@dataclass(frozen=True)
class Palette:
    """Exactly one entry per category, with pairwise-disjoint color ranges."""

    entries: tuple[PaletteEntry, ...]

    def validate(self) -> None:
        seen = [e.category for e in self.entries]
        if sorted(seen) != sorted(CATEGORIES):
            raise ConfigError(
                f"palette must define each of {CATEGORIES} exactly once, got {seen}"
            )
        for e in self.entries:
            if not (0 <= e.tolerance <= 127):
                raise ConfigError(f"palette tolerance for {e.category} must be in [0, 127]")
            if len(e.color) != 3 or any(not (0 <= c <= 255) for c in e.color):
                raise ConfigError(f"palette color for {e.category} must be an RGB triple in [0, 255]")
        for i, a in enumerate(self.entries):
            for b in self.entries[i + 1 :]:
                if _ranges_overlap(a, b):
                    raise ConfigError(
                        f"palette ranges overlap between {a.category!r} and {b.category!r}"
                    )

    def entry(self, category: str) -> PaletteEntry:
        for e in self.entries:
            if e.category == category:
                return e
        raise KeyError(category)

    def colors(self) -> dict[str, tuple[int, int, int]]:
        return {e.category: e.color for e in self.entries}


def _ranges_overlap(a: PaletteEntry, b: PaletteEntry) -> bool:
    # axis-aligned boxes in RGB space intersect iff they overlap on every channel
    for ca, cb in zip(a.color, b.color):
        if ca + a.tolerance < cb - b.tolerance or cb + b.tolerance < ca - a.tolerance:
            return False
    return True


def default_palette() -> Palette:
    entries = tuple(
        PaletteEntry(category, DEFAULT_COLORS[category], DEFAULT_TOLERANCE)
        for category in CATEGORIES
    )
    palette = Palette(entries)
    palette.validate()
    return palette
