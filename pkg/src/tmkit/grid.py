"""Rasterized grid model: spaces, regions, and set-level operations.

A space is a rectangular window of nx*ny cells, optionally restricted to an
active mask (the disk space keeps only cells inside the inscribed circle).
``window_is_space=True`` means the window itself is the (compact) space;
``window_is_space=False`` means the window is a finite viewport into the
plane, and anything touching the outermost cell ring counts as unbounded.

Regions are cell sets tagged 'open' or 'compact'. The tag drives which axioms
and connectivity apply, not the geometry: a cell set and its closure occupy
the same cells at grid resolution. Compact-kind sets are path-connected with
8-neighbor adjacency, open-kind sets with 4-neighbor adjacency; the split is
what makes a rasterized closed curve separate its complement (discrete Jordan
pairing).
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

from .errors import EmptyRegionError, GridMismatchError

OPEN = "open"
COMPACT = "compact"

# 8-neighborhood for compact-kind sets, 4-neighborhood for open-kind sets.
STRUCT8 = np.ones((3, 3), dtype=bool)
STRUCT4 = ndimage.generate_binary_structure(2, 1)


def _structure_for(kind):
    return STRUCT8 if kind == COMPACT else STRUCT4


def other_kind(kind):
    return COMPACT if kind == OPEN else OPEN


@dataclass(eq=False)
class GridSpec:
    """Geometry and model flags for one rasterized space."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    window_is_space: bool
    mask: Optional[np.ndarray] = None  # active cells; None means all

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ValueError("grid needs nx >= 4 and ny >= 4")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("degenerate window bounds")
        if self.mask is not None:
            self.mask = np.asarray(self.mask, dtype=bool)
            if self.mask.shape != (self.ny, self.nx):
                raise ValueError("mask shape mismatch")
            self.mask.setflags(write=False)

    # cell geometry -----------------------------------------------------

    @property
    def dx(self):
        return (self.x_max - self.x_min) / self.nx

    @property
    def dy(self):
        return (self.y_max - self.y_min) / self.ny

    @property
    def cell_area(self):
        return self.dx * self.dy

    @property
    def pitch(self):
        """Worst-axis cell pitch; the unit for one-cell tolerances."""
        return max(self.dx, self.dy)

    @property
    def shape(self):
        return (self.ny, self.nx)

    def active(self):
        if self.mask is not None:
            return self.mask
        return np.ones(self.shape, dtype=bool)

    def cell_centers(self):
        """(X, Y) arrays of cell-center coordinates, shape (ny, nx)."""
        xs = self.x_min + (np.arange(self.nx) + 0.5) * self.dx
        ys = self.y_min + (np.arange(self.ny) + 0.5) * self.dy
        return np.meshgrid(xs, ys)

    def cell_of(self, x, y):
        """(iy, ix) of the cell containing the point; clipped to the window."""
        ix = int(np.clip((x - self.x_min) / self.dx, 0, self.nx - 1))
        iy = int(np.clip((y - self.y_min) / self.dy, 0, self.ny - 1))
        return iy, ix

    def frame(self):
        """Outermost cell ring of the window (the 'unbounded' marker ring)."""
        f = np.zeros(self.shape, dtype=bool)
        f[0, :] = f[-1, :] = True
        f[:, 0] = f[:, -1] = True
        return f

    def boundary_ring(self):
        """Active cells adjacent to inactive/outside; for a disk space this is
        the rasterized bounding circle, for a plain window the frame ring."""
        act = self.active()
        inner = ndimage.binary_erosion(act, structure=STRUCT8, border_value=0)
        return act & ~inner

    def same_as(self, other):
        return (
            self.nx == other.nx
            and self.ny == other.ny
            and self.window_is_space == other.window_is_space
            and np.isclose(self.x_min, other.x_min)
            and np.isclose(self.x_max, other.x_max)
            and np.isclose(self.y_min, other.y_min)
            and np.isclose(self.y_max, other.y_max)
            and (
                (self.mask is None) == (other.mask is None)
                and (self.mask is None or bool(np.array_equal(self.mask, other.mask)))
            )
        )

    # constructors ------------------------------------------------------

    @staticmethod
    def window(nx, ny=None, bounds=(0.0, 1.0, 0.0, 1.0)):
        """Compact rectangular space (the whole window is the space)."""
        ny = nx if ny is None else ny
        x0, x1, y0, y1 = bounds
        return GridSpec(x0, x1, y0, y1, nx, ny, window_is_space=True)

    @staticmethod
    def disk(n, radius=1.0):
        """Compact disk space: cells inside the circle inscribed in
        [-radius, radius]^2. Cells outside the disk do not exist."""
        g = GridSpec(-radius, radius, -radius, radius, n, n, window_is_space=True)
        X, Y = g.cell_centers()
        mask = X * X + Y * Y <= radius * radius + 1e-12
        return GridSpec(-radius, radius, -radius, radius, n, n, True, mask)

    @staticmethod
    def plane(nx, ny=None, bounds=(-1.0, 1.0, -1.0, 1.0)):
        """Finite viewport into the plane; frame ring marks unboundedness."""
        ny = nx if ny is None else ny
        x0, x1, y0, y1 = bounds
        return GridSpec(x0, x1, y0, y1, nx, ny, window_is_space=False)


@dataclass(eq=False)
class Region:
    """A cell set with an open/compact tag on a specific grid."""

    cells: np.ndarray
    kind: str
    grid: GridSpec

    def __post_init__(self):
        if self.kind not in (OPEN, COMPACT):
            raise ValueError("kind must be 'open' or 'compact'")
        c = np.ascontiguousarray(np.asarray(self.cells, dtype=bool))
        if c.shape != self.grid.shape:
            raise GridMismatchError("region cells do not match grid shape")
        if self.grid.mask is not None:
            c = c & self.grid.mask
        c.setflags(write=False)
        object.__setattr__(self, "cells", c)

    # basic queries -----------------------------------------------------

    def is_empty(self):
        return not self.cells.any()

    def cell_count(self):
        return int(self.cells.sum())

    def area(self):
        return self.cell_count() * self.grid.cell_area

    def touches_frame(self):
        """True when the set meets the outermost cell ring. In the plane
        model this is the discrete reading of 'unbounded'."""
        c = self.cells
        return bool(c[0, :].any() or c[-1, :].any() or c[:, 0].any() or c[:, -1].any())

    def is_bounded(self):
        if self.grid.window_is_space:
            return True
        return not self.touches_frame()

    def key(self):
        """Hashable identity of (cells, kind); used by measure caches."""
        return (self.kind, self.cells.tobytes())

    def with_kind(self, kind):
        return Region(self.cells, kind, self.grid)

    def same_cells(self, other):
        return bool(np.array_equal(self.cells, other.cells))

    def __eq__(self, other):
        return (
            isinstance(other, Region)
            and self.kind == other.kind
            and self.same_cells(other)
        )

    def __hash__(self):
        return hash(self.key())

    # constructors ------------------------------------------------------

    @staticmethod
    def empty(grid, kind=COMPACT):
        return Region(np.zeros(grid.shape, dtype=bool), kind, grid)

    @staticmethod
    def full(grid, kind=COMPACT):
        return Region(grid.active().copy(), kind, grid)

    @staticmethod
    def from_disk(grid, cx, cy, radius, kind=COMPACT):
        X, Y = grid.cell_centers()
        cells = (X - cx) ** 2 + (Y - cy) ** 2 <= radius * radius + 1e-12
        return Region(cells, kind, grid)

    @staticmethod
    def from_box(grid, x0, x1, y0, y1, kind=COMPACT):
        X, Y = grid.cell_centers()
        cells = (X >= x0) & (X <= x1) & (Y >= y0) & (Y <= y1)
        return Region(cells, kind, grid)


@dataclass
class ComponentDecomposition:
    components: list
    bounded: list  # parallel flags; always all-True on window spaces

    def __len__(self):
        return len(self.components)


# ---------------------------------------------------------------------------
# set-level operations


def complement(region):
    """Complement within the active window; the kind flips. In the plane
    model the complement of a bounded set touches the frame ring, which is
    how unboundedness is represented (the tag still flips)."""
    g = region.grid
    return Region(g.active() & ~region.cells, other_kind(region.kind), g)


def connected_components(region):
    """Split into connected components. Compact-kind sets use 8-adjacency,
    open-kind sets 4-adjacency. Components keep the region's kind; a
    component is flagged unbounded exactly when the grid is a plane viewport
    and the component touches the frame ring."""
    g = region.grid
    labels, n = ndimage.label(region.cells, structure=_structure_for(region.kind))
    comps, flags = [], []
    for i in range(1, n + 1):
        cells = labels == i
        comp = Region(cells, region.kind, g)
        comps.append(comp)
        flags.append(g.window_is_space or not comp.touches_frame())
    return ComponentDecomposition(comps, flags)


def component_count(region):
    _, n = ndimage.label(region.cells, structure=_structure_for(region.kind))
    return n


def is_solid(region):
    """Connected with topologically trivial complement.

    Window space: the region and its complement are both connected.
    Plane model: connected, bounded, and every complement component is
    unbounded (no holes).
    """
    if region.is_empty():
        return False
    if component_count(region) != 1:
        return False
    comp = complement(region)
    if region.grid.window_is_space:
        return component_count(comp) <= 1
    if region.touches_frame():
        return False
    dec = connected_components(comp)
    return all(not b for b in dec.bounded)


def disjoint(a, b):
    return not bool((a.cells & b.cells).any())


def union(a, b, kind=None):
    if kind is None:
        if a.kind != b.kind:
            raise ValueError("kind needed for mixed-kind union")
        kind = a.kind
    return Region(a.cells | b.cells, kind, a.grid)


def intersection(a, b, kind=None):
    kind = kind if kind is not None else a.kind
    return Region(a.cells & b.cells, kind, a.grid)


def contains(outer, inner):
    return bool((inner.cells & ~outer.cells).sum() == 0)


def superlevel_set(f, t, strict):
    """Cells where f > t (strict, open kind) or f >= t (compact kind)."""
    vals = f.values
    cells = (vals > t) if strict else (vals >= t)
    kind = OPEN if strict else COMPACT
    return Region(cells & f.grid.active(), kind, f.grid)


def erode(region, rings=1):
    """Shrink by chessboard rings; inactive cells count as outside."""
    cells = region.cells
    if rings > 0:
        cells = ndimage.binary_erosion(
            cells, structure=STRUCT8, iterations=rings, border_value=0
        )
    return Region(cells, region.kind, region.grid)


def dilate(region, rings=1, kind=None):
    """Grow by chessboard rings, clipped to the active window."""
    g = region.grid
    cells = region.cells
    if rings > 0:
        cells = ndimage.binary_dilation(cells, structure=STRUCT8, iterations=rings)
    return Region(cells & g.active(), kind or region.kind, g)


def ring_neighborhood(a, b, rings=1):
    """True when a and b agree up to `rings` cell rings: each is contained
    in the other's dilation. The standard region-equality tolerance."""
    return contains(dilate(b, rings), a) and contains(dilate(a, rings), b)


def _convex_hull_max(points):
    """Max pairwise distance over the convex hull (monotone chain). Hulls of
    rasterized blobs are small, so the exact quadratic scan over hull
    vertices beats full rotating-calipers bookkeeping."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) == 1:
        return 0.0

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(seq):
        h = []
        for p in seq:
            while len(h) >= 2 and cross(h[-2], h[-1], p) <= 0:
                h.pop()
            h.append(p)
        return h

    hull = half(pts)[:-1] + half(reversed(pts))[:-1]
    arr = np.asarray(hull if hull else pts, dtype=float)
    d2 = (
        (arr[:, None, 0] - arr[None, :, 0]) ** 2
        + (arr[:, None, 1] - arr[None, :, 1]) ** 2
    )
    return float(np.sqrt(d2.max()))


def ring_stencil(grid, eps):
    """Centered boolean footprint of the rasterized circle of radius eps:
    the one-cell-thick inner boundary ring of the eps-disk, in cell-offset
    coordinates. Shared by the circle set functions and the morphological
    transforms so both rasterize the exact same ring."""
    if eps <= 0:
        raise ValueError("stencil needs eps > 0")
    hx = int(np.ceil(eps / grid.dx)) + 1
    hy = int(np.ceil(eps / grid.dy)) + 1
    jj, ii = np.meshgrid(np.arange(-hx, hx + 1), np.arange(-hy, hy + 1))
    disk = (jj * grid.dx) ** 2 + (ii * grid.dy) ** 2 <= eps * eps + 1e-9
    inner = ndimage.binary_erosion(disk, structure=STRUCT8, border_value=0)
    return disk & ~inner


def place_stencil(grid, stencil, cell):
    """Drop a centered stencil at a cell. Returns (cells, complete): the
    in-window part of the footprint and whether nothing was clipped away."""
    ny, nx = grid.shape
    hy, hx = stencil.shape[0] // 2, stencil.shape[1] // 2
    iy, ix = cell
    out = np.zeros((ny, nx), dtype=bool)
    y0, y1 = iy - hy, iy + hy + 1
    x0, x1 = ix - hx, ix + hx + 1
    sy0, sx0 = max(0, -y0), max(0, -x0)
    sy1 = stencil.shape[0] - max(0, y1 - ny)
    sx1 = stencil.shape[1] - max(0, x1 - nx)
    if sy0 < sy1 and sx0 < sx1:
        out[max(0, y0) : min(ny, y1), max(0, x0) : min(nx, x1)] = stencil[
            sy0:sy1, sx0:sx1
        ]
    if grid.mask is not None:
        out &= grid.mask
    complete = int(out.sum()) == int(stencil.sum())
    return out, complete


def diameter(region):
    """Max distance between cell centers. Brute pairwise for small sets,
    convex hull of boundary cells otherwise."""
    if region.is_empty():
        raise EmptyRegionError("diameter of empty region")
    g = region.grid
    iy, ix = np.nonzero(region.cells)
    xs = g.x_min + (ix + 0.5) * g.dx
    ys = g.y_min + (iy + 0.5) * g.dy
    if len(xs) <= 400:
        d2 = (xs[:, None] - xs[None, :]) ** 2 + (ys[:, None] - ys[None, :]) ** 2
        return float(np.sqrt(d2.max()))
    # boundary cells suffice for the hull
    inner = ndimage.binary_erosion(region.cells, structure=STRUCT8, border_value=0)
    by, bx = np.nonzero(region.cells & ~inner)
    pts = np.stack(
        [g.x_min + (bx + 0.5) * g.dx, g.y_min + (by + 0.5) * g.dy], axis=1
    )
    return _convex_hull_max(pts)
