"""Triangular fuzzy number algebra and the qualitative linguistic scales.

All quantities flowing through the analysis are triangular fuzzy numbers
(TFNs): ordered triples (l, m, u) with l <= m <= u. Qualitative importance
and confidence are expressed on a five-level scale and fuzzified into TFNs.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class Level(enum.IntEnum):
    """Five-point ordinal scale used for importance, confidence and
    stakeholder weights."""

    VERY_LOW = 0
    LOW = 1
    MEDIUM = 2
    HIGH = 3
    VERY_HIGH = 4

    @property
    def label(self) -> str:
        return _LEVEL_LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "Level":
        key = text.strip().lower()
        try:
            return _LEVELS_BY_KEY[key]
        except KeyError:
            raise ValueError(
                f"unknown level {text!r}; expected one of "
                + ", ".join(_LEVEL_LABELS.values())
            ) from None


_LEVEL_LABELS = {
    Level.VERY_LOW: "VeryLow",
    Level.LOW: "Low",
    Level.MEDIUM: "Medium",
    Level.HIGH: "High",
    Level.VERY_HIGH: "VeryHigh",
}

_LEVELS_BY_KEY = {label.lower(): level for level, label in _LEVEL_LABELS.items()}


@dataclass(frozen=True)
class TFN:
    """Triangular fuzzy number (l, m, u) with l <= m <= u, all finite."""

    l: float
    m: float
    u: float

    def __post_init__(self) -> None:
        for c in (self.l, self.m, self.u):
            if not math.isfinite(c):
                raise ValueError(f"TFN components must be finite, got {self!r}")
        if not (self.l <= self.m <= self.u):
            raise ValueError(f"TFN components must satisfy l <= m <= u, got {self!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.l, self.m, self.u)

    def to_json(self) -> list[float]:
        return [self.l, self.m, self.u]

    @classmethod
    def from_json(cls, data) -> "TFN":
        if not isinstance(data, (list, tuple)) or len(data) != 3:
            raise ValueError(f"a TFN serializes as a three-element array, got {data!r}")
        return cls(float(data[0]), float(data[1]), float(data[2]))

    @classmethod
    def crisp(cls, value: float) -> "TFN":
        return cls(value, value, value)


ZERO = TFN(0.0, 0.0, 0.0)

#: Base TFNs for the five importance levels on [0, 1].
IMPORTANCE_SCALE: dict[Level, TFN] = {
    Level.VERY_LOW: TFN(0.0, 0.0, 0.25),
    Level.LOW: TFN(0.0, 0.25, 0.5),
    Level.MEDIUM: TFN(0.25, 0.5, 0.75),
    Level.HIGH: TFN(0.5, 0.75, 1.0),
    Level.VERY_HIGH: TFN(0.75, 1.0, 1.0),
}


def tfn_add(a: TFN, b: TFN) -> TFN:
    return TFN(a.l + b.l, a.m + b.m, a.u + b.u)


def tfn_scale(w: float, a: TFN) -> TFN:
    """Signed scalar multiplication; a negative factor swaps the bounds so
    the result stays ordered."""
    if not math.isfinite(w):
        raise ValueError("scale factor must be finite")
    if w >= 0:
        return TFN(w * a.l, w * a.m, w * a.u)
    return TFN(w * a.u, w * a.m, w * a.l)


def tfn_mul(a: TFN, b: TFN) -> TFN:
    """Componentwise product, defined for nonnegative TFNs only."""
    if a.l < 0 or b.l < 0:
        raise ValueError(f"tfn_mul requires nonnegative operands, got {a!r}, {b!r}")
    return TFN(a.l * b.l, a.m * b.m, a.u * b.u)


def tfn_distance(a: TFN, b: TFN) -> float:
    """Vertex distance: sqrt of the mean squared componentwise difference."""
    return math.sqrt(
        ((a.l - b.l) ** 2 + (a.m - b.m) ** 2 + (a.u - b.u) ** 2) / 3.0
    )


def defuzzify(a: TFN) -> float:
    """Centroid of the triangle: arithmetic mean of the three components."""
    return (a.l + a.m + a.u) / 3.0


def fuzzify(importance: Level, confidence: Level) -> TFN:
    """Map an importance level to its base TFN and narrow it around the mode
    according to the confidence level.

    VeryLow confidence keeps the full base range; VeryHigh confidence
    collapses the TFN to its mode.
    """
    base = IMPORTANCE_SCALE[importance]
    sigma = 1.0 - confidence / 4.0
    return TFN(
        base.m - sigma * (base.m - base.l),
        base.m,
        base.m + sigma * (base.u - base.m),
    )
