"""Fraunhofer screen model: tabulated position distributions and sampling.

Positions are measured in dimensionless units of lambda*D/a (wavelength
times screen distance over slit width).  In this far-field limit a single
open slit produces the sinc^2 envelope regardless of which slit it is
(translation only adds a linear phase), while both slits open modulate the
envelope with cos^2 fringes of period a/d.  Screen position therefore
carries zero which-slit information, and only the fringes distinguish the
two cases -- the dichotomy the verification step exploits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadGeometry

__all__ = [
    "SlitGeometry",
    "ScreenPdf",
    "envelope_pdf",
    "doubleslit_pdf",
    "sample_position",
]


@dataclass(frozen=True)
class SlitGeometry:
    """Double-slit parameters; lengths in consistent units.

    ``screen_halfwidth`` is expressed in units of lambda*D/a, so the
    screen window is [-W, W] in the dimensionless coordinate.
    """

    slit_width: float = 1.0
    slit_separation: float = 5.0
    wavelength: float = 1.0
    screen_distance: float = 1.0
    screen_halfwidth: float = 2.05
    grid_points: int = 4001

    def __post_init__(self):
        if min(self.slit_width, self.slit_separation, self.wavelength,
               self.screen_distance) <= 0.0:
            raise BadGeometry("all lengths must be positive")
        if self.slit_separation <= self.slit_width:
            raise BadGeometry("slit separation must exceed slit width")
        if self.screen_halfwidth < 1.0:
            raise BadGeometry("screen halfwidth must be >= 1 (in lambda*D/a units)")
        if self.grid_points < 3:
            raise BadGeometry("grid needs at least 3 nodes")

    @property
    def separation_ratio(self) -> float:
        """d/a: fringes per envelope unit."""
        return self.slit_separation / self.slit_width

    @property
    def fringe_period(self) -> float:
        """Fringe period in dimensionless screen units: a/d."""
        return self.slit_width / self.slit_separation

    @classmethod
    def reference(cls) -> "SlitGeometry":
        """Demonstration geometry: d/a = 10, window [-2, 2]."""
        return cls(slit_width=1.0, slit_separation=10.0, screen_halfwidth=2.0)

    @classmethod
    def protocol_default(cls) -> "SlitGeometry":
        """Geometry frozen for protocol runs: d/a = 5, window [-2.05, 2.05].

        Calibrated so the verifier's fringe chi-square, with its
        period-matched binning, retains rejection power down to a few
        hundred disclosed positions.
        """
        return cls(slit_width=1.0, slit_separation=5.0, screen_halfwidth=2.05)


class ScreenPdf:
    """Tabulated screen distribution: grid, density, and CDF.

    The density is normalized so its trapezoidal integral over the grid is
    exactly 1; the CDF is the running trapezoidal integral with the last
    node snapped to 1.  Sampling and bin-mass lookups both interpolate this
    CDF linearly, so they agree with each other by construction.
    """

    __slots__ = ("grid", "density", "cdf")

    def __init__(self, grid: np.ndarray, raw_density: np.ndarray):
        grid = np.asarray(grid, dtype=float)
        dens = np.asarray(raw_density, dtype=float)
        if grid.ndim != 1 or grid.size < 3 or grid.shape != dens.shape:
            raise BadGeometry("grid and density must be matching 1-D arrays")
        if np.any(np.diff(grid) <= 0.0):
            raise BadGeometry("grid must be strictly ascending")
        if np.any(dens < 0.0) or not np.all(np.isfinite(dens)):
            raise BadGeometry("density must be finite and nonnegative")
        total = np.trapezoid(dens, grid)
        if total <= 0.0:
            raise BadGeometry("density integrates to zero")
        dens = dens / total
        steps = np.diff(grid) * 0.5 * (dens[1:] + dens[:-1])
        cdf = np.concatenate(([0.0], np.cumsum(steps)))
        cdf = cdf / cdf[-1]
        cdf[-1] = 1.0
        for arr in (grid, dens, cdf):
            arr.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "density", dens)
        object.__setattr__(self, "cdf", cdf)

    def __setattr__(self, *_):
        raise AttributeError("ScreenPdf is immutable")

    def cdf_at(self, x) -> np.ndarray:
        """CDF evaluated at arbitrary positions (clamped to the window)."""
        return np.interp(x, self.grid, self.cdf)

    def density_at(self, x) -> np.ndarray:
        return np.interp(x, self.grid, self.density)

    @property
    def support(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])


def _screen_grid(geom: SlitGeometry) -> np.ndarray:
    w = geom.screen_halfwidth
    return np.linspace(-w, w, geom.grid_points)


def envelope_pdf(geom: SlitGeometry) -> ScreenPdf:
    """Single-slit screen distribution: density proportional to sinc^2(pi x).

    Identical for the left and right slit in the Fraunhofer limit, so one
    envelope serves all single-slit events.
    """
    grid = _screen_grid(geom)
    return ScreenPdf(grid, np.sinc(grid) ** 2)


def doubleslit_pdf(geom: SlitGeometry) -> ScreenPdf:
    """Both-slits-open distribution: cos^2(pi (d/a) x) * sinc^2(pi x)."""
    grid = _screen_grid(geom)
    fringes = np.cos(np.pi * geom.separation_ratio * grid) ** 2
    return ScreenPdf(grid, fringes * np.sinc(grid) ** 2)


def sample_position(pdf: ScreenPdf, rng: np.random.Generator,
                    size: int | None = None):
    """Inverse-CDF draw(s) from a tabulated screen distribution.

    Uniform variates are mapped through the linearly interpolated CDF, so
    the draw sequence is a deterministic function of the generator state.
    ``size=None`` returns a scalar, otherwise an array of that length.
    """
    u = rng.random() if size is None else rng.random(size)
    x = np.interp(u, pdf.cdf, pdf.grid)
    return float(x) if size is None else x
