"""Model presets: harmonic oscillator and the quartic symmetric double well.

All potentials are nondimensional (energy in units of the harmonic quantum,
hbar = m = 1).  Coefficients are exact :class:`~fractions.Fraction` values in
the length parameter and only become floats when expanded into ladder form.

The double well with its basis origin at the bottom of the left well is

    H_left = p^2/2 + x^2/2 - x^3/(2 l) + x^4/(8 l^2),

with minima at 0 and 2l and a barrier of height l^2/8 at x = l.  Moving the
origin to the barrier top (x -> x + l) gives

    H_center = p^2/2 + l^2/8 - x^2/4 + x^4/(8 l^2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConfigError
from .ladder import LadderPoly, XPPoly, ladder_from_xp, normal_order

HARTREE_TO_CM = 219474.6313632  # CODATA 2018
OMEGA_HARTREE = 0.0091127
# 0.0091127 hartree, nominally "2000 cm-1"; the exact conversion is what
# reproduces the reference energies to 1e-4 cm-1.
DEFAULT_OMEGA = OMEGA_HARTREE * HARTREE_TO_CM
DEFAULT_LENGTH = 4


class Preset(enum.Enum):
    H0 = "h0"
    DWELL_LEFT = "dwell-left"
    DWELL_CENTER = "dwell-center"
    CUSTOM = "custom"


class Ordering(enum.Enum):
    NORMAL = "normal"
    UNORDERED = "unordered"


ORIGIN_OF = {
    Preset.H0: "custom",
    Preset.DWELL_LEFT: "left",
    Preset.DWELL_CENTER: "barrier",
    Preset.CUSTOM: "custom",
}


def _exact(length) -> Fraction:
    try:
        value = Fraction(length)
    except (TypeError, ValueError):
        raise ConfigError(f"length parameter must be a real number, got {length!r}") from None
    if value <= 0:
        raise ConfigError(f"length parameter must be positive, got {length}")
    return value


def _as_preset(value) -> Preset:
    try:
        return Preset(value)
    except ValueError:
        names = ", ".join(p.value for p in Preset)
        raise ConfigError(f"unknown model {value!r}; choose from {names}") from None


def harmonic() -> XPPoly:
    half = Fraction(1, 2)
    return XPPoly({"pp": half, "xx": half})


def double_well_left(length=DEFAULT_LENGTH) -> XPPoly:
    l = _exact(length)
    return harmonic() + XPPoly({"xxx": -1 / (2 * l), "xxxx": 1 / (8 * l * l)})


def double_well_center(length=DEFAULT_LENGTH) -> XPPoly:
    l = _exact(length)
    return harmonic() + XPPoly({"": l * l / 8, "xx": Fraction(-3, 4), "xxxx": 1 / (8 * l * l)})


def barrier_height(length=DEFAULT_LENGTH) -> Fraction:
    l = _exact(length)
    return l * l / 8


def barrier_width(length=DEFAULT_LENGTH) -> Fraction:
    return 2 * _exact(length)


def build_preset(preset: Preset | str, length=DEFAULT_LENGTH, poly: XPPoly | None = None) -> XPPoly:
    preset = _as_preset(preset)
    if preset is Preset.H0:
        return harmonic()
    if preset is Preset.DWELL_LEFT:
        return double_well_left(length)
    if preset is Preset.DWELL_CENTER:
        return double_well_center(length)
    if poly is None:
        raise ConfigError("custom model needs a polynomial")
    return poly


@dataclass(frozen=True)
class ModelSpec:
    xp_poly: XPPoly
    length: Fraction = Fraction(DEFAULT_LENGTH)
    omega: float = DEFAULT_OMEGA
    origin_label: str = "custom"
    name: str = "custom"
    _ladder_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.omega <= 0:
            raise ConfigError(f"energy scale must be positive, got {self.omega}")
        if self.length <= 0:
            raise ConfigError(f"length parameter must be positive, got {self.length}")
        if self.origin_label not in ("left", "barrier", "custom"):
            raise ConfigError(f"unknown origin label {self.origin_label!r}")

    def ladder(self, ordering: Ordering | str = Ordering.NORMAL) -> LadderPoly:
        """Ladder form: verbatim expansion, or its Wick normal order."""
        ordering = Ordering(ordering)
        if ordering not in self._ladder_cache:
            raw = ladder_from_xp(self.xp_poly)
            self._ladder_cache[ordering] = normal_order(raw) if ordering is Ordering.NORMAL else raw
        return self._ladder_cache[ordering]


def make_model(
    preset: Preset | str,
    length=DEFAULT_LENGTH,
    omega: float = DEFAULT_OMEGA,
    poly: XPPoly | None = None,
) -> ModelSpec:
    preset = _as_preset(preset)
    l = _exact(length)
    return ModelSpec(
        xp_poly=build_preset(preset, l, poly),
        length=l,
        omega=float(omega),
        origin_label=ORIGIN_OF[preset],
        name=preset.value,
    )
