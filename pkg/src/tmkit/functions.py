"""Grid-sampled scalar functions (the continuous test functions at desk scale).

Values live at cell centers. On plane-model grids a function must vanish on
the outermost cell ring: that is the discrete stand-in for compact support /
vanishing at infinity. On masked grids values outside the active set are
forced to zero and never participate.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import FrameSupportError, GridMismatchError
from .grid import STRUCT8, GridSpec


@dataclass(eq=False)
class SampledFunction:
    values: np.ndarray
    grid: GridSpec

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise GridMismatchError("function values do not match grid shape")
        if self.grid.mask is not None:
            v = np.where(self.grid.mask, v, 0.0)
        if not self.grid.window_is_space:
            f = self.grid.frame()
            if np.abs(v[f]).max(initial=0.0) > 0:
                raise FrameSupportError(
                    "plane-model function must vanish on the frame ring"
                )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    # pointwise algebra; results stay on the same grid ------------------

    def __add__(self, other):
        return SampledFunction(self.values + _vals(other, self), self.grid)

    def __sub__(self, other):
        return SampledFunction(self.values - _vals(other, self), self.grid)

    def __mul__(self, other):
        return SampledFunction(self.values * _vals(other, self), self.grid)

    def __rmul__(self, scalar):
        return SampledFunction(float(scalar) * self.values, self.grid)

    def __neg__(self):
        return SampledFunction(-self.values, self.grid)

    def compose(self, phi):
        """phi applied to every sample; phi is any vectorized callable."""
        return SampledFunction(phi(self.values), self.grid)

    def positive_part(self):
        return SampledFunction(np.maximum(self.values, 0.0), self.grid)

    def negative_part(self):
        return SampledFunction(np.maximum(-self.values, 0.0), self.grid)

    def sup_norm(self):
        if self.grid.mask is not None:
            return float(np.abs(self.values[self.grid.mask]).max(initial=0.0))
        return float(np.abs(self.values).max(initial=0.0))

    def min_value(self):
        if self.grid.mask is not None:
            return float(self.values[self.grid.mask].min())
        return float(self.values.min())

    def max_value(self):
        if self.grid.mask is not None:
            return float(self.values[self.grid.mask].max())
        return float(self.values.max())

    def distinct_values(self):
        if self.grid.mask is not None:
            return np.unique(self.values[self.grid.mask])
        return np.unique(self.values)

    def le(self, other):
        return bool(np.all(self.values <= _vals(other, self) + 1e-15))

    # constructors ------------------------------------------------------

    @staticmethod
    def zero(grid):
        return SampledFunction(np.zeros(grid.shape), grid)

    @staticmethod
    def constant(grid, c):
        """Constant on the space; only valid where constants are admissible
        (window spaces, or c = 0 on the plane)."""
        return SampledFunction(np.full(grid.shape, float(c)), grid)

    @staticmethod
    def from_callable(grid, fn):
        X, Y = grid.cell_centers()
        return SampledFunction(np.asarray(fn(X, Y), dtype=float), grid)

    @staticmethod
    def cone(grid, cx, cy, radius, height=1.0):
        """height * max(0, 1 - dist/radius); classic compact-support bump."""
        X, Y = grid.cell_centers()
        d = np.sqrt((X - cx) ** 2 + (Y - cy) ** 2)
        return SampledFunction(height * np.clip(1.0 - d / radius, 0.0, None), grid)

    @staticmethod
    def plateau(region, ramp_rings=1, height=1.0):
        """Urysohn-style bump: `height` on the region eroded by ramp_rings,
        falling off linearly one ring at a time, zero outside the region."""
        cells = region.cells
        inside = ndimage.distance_transform_cdt(cells, metric="chessboard")
        vals = height * np.clip(inside / float(ramp_rings + 1), 0.0, 1.0)
        return SampledFunction(vals, region.grid)

    def quantized(self, quantum=1.0 / 64):
        """Snap values to multiples of `quantum` (keeps breakpoint counts
        small; powers of two stay exact in binary)."""
        return SampledFunction(np.round(self.values / quantum) * quantum, self.grid)


def _vals(other, like):
    if isinstance(other, SampledFunction):
        return other.values
    return np.full(like.grid.shape, float(other))


def supports_disjoint(f, g, gap_rings=1):
    """fg = 0 with at least `gap_rings` empty rings between the supports."""
    sf = f.values != 0
    sg = g.values != 0
    grown = ndimage.binary_dilation(sf, structure=STRUCT8, iterations=gap_rings)
    return not bool((grown & sg).any())
