"""Seeded generators of regions, region configurations, and test functions.

Everything is driven by numpy Generators so identical seeds reproduce
identical cases. Conventions baked in here:

- "disjoint" pairs keep at least one empty cell ring between the pieces
  (cell-disjoint but 8-adjacent sets are the discretization gray zone where
  a connected compact could straddle both halves);
- plane-model supports keep a margin of several rings from the window frame;
- sampled functions are quantized to multiples of 1/64 so breakpoint counts
  stay small and threshold comparisons stay exact in binary.
"""

import numpy as np
from scipy import ndimage

from .functions import SampledFunction
from .grid import (
    COMPACT,
    OPEN,
    Region,
    STRUCT8,
    complement,
    connected_components,
    dilate,
    erode,
    intersection,
    is_solid,
)

MARGIN_RINGS = 3
QUANTUM = 1.0 / 64


def _safe_box(grid):
    """Coordinate bounds keeping MARGIN_RINGS cells away from the frame."""
    mx = MARGIN_RINGS * grid.dx
    my = MARGIN_RINGS * grid.dy
    return grid.x_min + mx, grid.x_max - mx, grid.y_min + my, grid.y_max - my


def _interior_mask(grid):
    m = np.zeros(grid.shape, dtype=bool)
    m[1:-1, 1:-1] = True
    return m & grid.active()


def random_point(grid, rng):
    x0, x1, y0, y1 = _safe_box(grid)
    if grid.mask is not None:
        # stay well inside the disk
        r = 0.7 * min(x1 - x0, y1 - y0) / 2
        cx = (x0 + x1) / 2
        cy = (y0 + y1) / 2
        ang = rng.uniform(0, 2 * np.pi)
        rad = r * np.sqrt(rng.uniform())
        return cx + rad * np.cos(ang), cy + rad * np.sin(ang)
    return rng.uniform(x0, x1), rng.uniform(y0, y1)


def random_solid_region(grid, rng, kind=COMPACT, max_tries=40):
    """A random solid region: a disk, a box, or a hole-filled union of
    overlapping disks, kept clear of the frame on plane grids."""
    x0, x1, y0, y1 = _safe_box(grid)
    span = min(x1 - x0, y1 - y0)
    for _ in range(max_tries):
        style = rng.integers(0, 3)
        if style == 0:
            cx, cy = random_point(grid, rng)
            r = rng.uniform(0.08, 0.3) * span
            reg = Region.from_disk(grid, cx, cy, r, kind)
        elif style == 1:
            cx, cy = random_point(grid, rng)
            w = rng.uniform(0.1, 0.4) * span
            h = rng.uniform(0.1, 0.4) * span
            reg = Region.from_box(grid, cx - w / 2, cx + w / 2, cy - h / 2, cy + h / 2, kind)
        else:
            cx, cy = random_point(grid, rng)
            cells = np.zeros(grid.shape, dtype=bool)
            px, py = cx, cy
            for _ in range(int(rng.integers(2, 5))):
                r = rng.uniform(0.06, 0.18) * span
                cells |= Region.from_disk(grid, px, py, r, kind).cells
                px += rng.uniform(-r, r)
                py += rng.uniform(-r, r)
            cells = ndimage.binary_fill_holes(cells)
            reg = Region(cells, kind, grid)
        if not grid.window_is_space:
            reg = Region(reg.cells & _interior_mask(grid), kind, grid)
        if reg.is_empty():
            continue
        # keep the largest component, refill holes
        dec = connected_components(reg.with_kind(COMPACT))
        best = max(dec.components, key=lambda c: c.cell_count())
        cells = ndimage.binary_fill_holes(best.cells) & grid.active()
        if not grid.window_is_space:
            cells &= _interior_mask(grid)
        reg = Region(cells, kind, grid)
        if reg.cell_count() >= 9 and is_solid(reg):
            return reg
    # deterministic fallback
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    return Region.from_disk(grid, cx, cy, 0.2 * span, kind)


def random_region(grid, rng, kind=None, allow_holes=True):
    """General region: a solid, a union of separated solids, or a solid with
    a hole punched out."""
    if kind is None:
        kind = COMPACT if rng.random() < 0.5 else OPEN
    base = random_solid_region(grid, rng, kind)
    roll = rng.random()
    if roll < 0.4:
        return base
    if roll < 0.7 and allow_holes:
        inner = erode(base, 2)
        if not inner.is_empty():
            hole = erode(inner, 1)
            if not hole.is_empty():
                dec = connected_components(hole.with_kind(COMPACT))
                h = min(dec.components, key=lambda c: c.cell_count())
                cells = base.cells & ~h.cells
                return Region(cells, kind, grid)
        return base
    other = random_solid_region(grid, rng, kind)
    if not dilate(base, 1).cells[other.cells].any():
        return Region(base.cells | other.cells, kind, grid)
    return base


def separated_pair(grid, rng, kind=COMPACT, gap_rings=1, max_tries=40):
    """Two nonempty regions with >= gap_rings empty rings between them."""
    for _ in range(max_tries):
        a = random_solid_region(grid, rng, kind)
        b = random_solid_region(grid, rng, kind)
        if not dilate(a, gap_rings).cells[b.cells].any():
            return a, b
    # fallback: split a box
    x0, x1, y0, y1 = _safe_box(grid)
    mx = (x0 + x1) / 2
    gap = 2 * gap_rings * grid.dx
    a = Region.from_box(grid, x0, mx - gap, y0, y1, kind)
    b = Region.from_box(grid, mx + gap, x1, y0, y1, kind)
    return a, b


def nested_pair(grid, rng, kind=COMPACT):
    big = random_solid_region(grid, rng, kind)
    shrunk = erode(big, int(rng.integers(1, 3)))
    if shrunk.is_empty():
        return big, big
    dec = connected_components(shrunk.with_kind(kind))
    small = max(dec.components, key=lambda c: c.cell_count())
    return small.with_kind(kind), big


def half_space_split(grid, rng):
    """Window-space partition into a solid compact and its open complement."""
    X, Y = grid.cell_centers()
    ang = rng.uniform(0, 2 * np.pi)
    c = rng.uniform(-0.2, 0.2) * min(grid.x_max - grid.x_min, grid.y_max - grid.y_min)
    side = (np.cos(ang) * (X - (grid.x_min + grid.x_max) / 2)
            + np.sin(ang) * (Y - (grid.y_min + grid.y_max) / 2)) <= c
    a = Region(side & grid.active(), COMPACT, grid)
    return a, complement(a)


def annulus_split(grid, rng):
    """Plane-model mixed-kind split: open annulus + compact core, union an
    open disk. Exercises hole-filling additivity."""
    x0, x1, y0, y1 = _safe_box(grid)
    span = min(x1 - x0, y1 - y0)
    cx, cy = random_point(grid, rng)
    r2 = rng.uniform(0.18, 0.3) * span
    r1 = rng.uniform(0.35, 0.6) * r2
    whole = Region.from_disk(grid, cx, cy, r2, OPEN)
    core = Region.from_disk(grid, cx, cy, r1, COMPACT)
    ring = Region(whole.cells & ~core.cells, OPEN, grid)
    return whole, ring, core


def superadditive_case(grid, rng, k=None):
    outer = random_solid_region(grid, rng, COMPACT)
    room = erode(outer, 2)
    inners = []
    if not room.is_empty():
        k = int(rng.integers(2, 4)) if k is None else k
        iy, ix = np.nonzero(room.cells)
        for _ in range(k):
            if len(iy) == 0:
                break
            j = rng.integers(0, len(iy))
            cx = grid.x_min + (ix[j] + 0.5) * grid.dx
            cy = grid.y_min + (iy[j] + 0.5) * grid.dy
            r = rng.uniform(1.5, 4.0) * grid.pitch
            cand = intersection(Region.from_disk(grid, cx, cy, r, COMPACT), room, COMPACT)
            if cand.is_empty():
                continue
            if all(not dilate(c, 1).cells[cand.cells].any() for c in inners):
                dec = connected_components(cand)
                inners.append(max(dec.components, key=lambda c: c.cell_count()))
    return outer, inners


def dtm_axiom_cases(grid, seed):
    """Tagged case stream for check_dtm_axioms."""

    def sampler(trials):
        rng = np.random.default_rng(seed)
        kinds = ["disjoint_compacts", "disjoint_opens", "nested", "superadditive", "mixed_split"]
        for i in range(trials):
            tag = kinds[i % len(kinds)]
            if tag == "disjoint_compacts":
                a, b = separated_pair(grid, rng, COMPACT)
                yield (tag, a, b)
            elif tag == "disjoint_opens":
                a, b = separated_pair(grid, rng, OPEN)
                yield (tag, a, b)
            elif tag == "nested":
                s, b = nested_pair(grid, rng, COMPACT if rng.random() < 0.5 else OPEN)
                yield (tag, s, b)
            elif tag == "superadditive":
                outer, inners = superadditive_case(grid, rng)
                if inners:
                    yield (tag, outer, inners)
            else:
                if grid.window_is_space:
                    a, b = half_space_split(grid, rng)
                    yield (tag, Region.full(grid, COMPACT), b, a)
                else:
                    whole, ring, core = annulus_split(grid, rng)
                    yield (tag, whole, ring, core)

    return sampler


def solid_axiom_cases(grid, seed):
    """Tagged case stream for check_solid_axioms."""

    def sampler(trials):
        rng = np.random.default_rng(seed)
        kinds = ["nested_disjoint", "partition", "regular"]
        for i in range(trials):
            tag = kinds[i % len(kinds)]
            if tag == "nested_disjoint":
                outer, inners = superadditive_case(grid, rng)
                if inners:
                    yield (tag, outer, inners)
            elif tag == "partition":
                if grid.window_is_space:
                    a, b = half_space_split(grid, rng)
                    if is_solid(a) and is_solid(b):
                        yield (tag, a, b)
            else:
                kind = COMPACT if rng.random() < 0.5 else OPEN
                yield (tag, random_solid_region(grid, rng, kind))

    return sampler


def compact_pair_stream(grid, seed, include_tangent=None):
    """Compact pairs for subadditivity witness search: overlapping, tangent,
    and separated configurations. `include_tangent` may inject an explicit
    (a, b) pair first."""

    def sampler(trials):
        rng = np.random.default_rng(seed)
        if include_tangent is not None:
            yield include_tangent
        x0, x1, y0, y1 = _safe_box(grid)
        span = min(x1 - x0, y1 - y0)
        for _ in range(trials):
            cx, cy = random_point(grid, rng)
            r1 = rng.uniform(0.08, 0.2) * span
            r2 = rng.uniform(0.08, 0.2) * span
            d = rng.uniform(0.5, 1.4) * (r1 + r2)
            ang = rng.uniform(0, 2 * np.pi)
            a = Region.from_disk(grid, cx, cy, r1, COMPACT)
            b = Region.from_disk(grid, cx + d * np.cos(ang), cy + d * np.sin(ang), r2, COMPACT)
            if a.is_empty() or b.is_empty():
                continue
            yield a, b

    return sampler


# ---------------------------------------------------------------------------
# functions


def _bump(grid, rng, height=1.0):
    x0, x1, y0, y1 = _safe_box(grid)
    span = min(x1 - x0, y1 - y0)
    if rng.random() < 0.5:
        cx, cy = random_point(grid, rng)
        r = rng.uniform(0.1, 0.35) * span
        return SampledFunction.cone(grid, cx, cy, r, height)
    reg = random_solid_region(grid, rng, COMPACT)
    return SampledFunction.plateau(reg, ramp_rings=int(rng.integers(1, 3)), height=height)


def random_function(grid, rng, signed=False, quantum=QUANTUM):
    """Sum of one to three bumps, optionally minus a bump, quantized."""
    f = SampledFunction.zero(grid)
    for _ in range(int(rng.integers(1, 4))):
        f = f + _bump(grid, rng, height=float(rng.uniform(0.3, 1.0)))
    if signed and rng.random() < 0.6:
        f = f - _bump(grid, rng, height=float(rng.uniform(0.3, 1.0)))
    if not grid.window_is_space:
        f = SampledFunction(f.values * _interior_mask(grid), grid)
    return f.quantized(quantum)


def function_stream(grid, seed, n, signed=False):
    rng = np.random.default_rng(seed)
    return [random_function(grid, rng, signed=signed) for _ in range(n)]


def disjoint_support_pair(grid, rng, quantum=QUANTUM):
    """f, g >= 0 with a gap between the supports (fg = 0 robustly)."""
    for _ in range(40):
        a, b = separated_pair(grid, rng, COMPACT, gap_rings=2)
        f = SampledFunction.plateau(a, 1, float(rng.uniform(0.4, 1.0))).quantized(quantum)
        g = SampledFunction.plateau(b, 1, float(rng.uniform(0.4, 1.0))).quantized(quantum)
        if f.sup_norm() > 0 and g.sup_norm() > 0:
            return f, g
    raise RuntimeError("could not place disjoint supports")


def ascending_sequence(grid, rng, n=6):
    """f_k = (1 - 2^-k) f, an exactly ascending sequence with limit f."""
    f = random_function(grid, rng)
    return [SampledFunction((1.0 - 2.0 ** -(k + 1)) * f.values, grid) for k in range(n)], f


def adversarial_pairs(grid, seed, trials, focus_points=None, ring_cells=None, blob=None):
    """Function pairs engineered to break plain additivity for the
    non-subadditive catalog entries, mixed with random pairs.

    focus_points: marked points of a counting-style measure;
    ring_cells: the reference circle of a circle-contact measure;
    blob: the reference blob of the containment indicator.
    """
    rng = np.random.default_rng(seed)
    out = []
    if focus_points and len(focus_points) >= 2:
        (xa, ya), (xb, yb) = focus_points[0], focus_points[1]
        mx, my = (xa + xb) / 2, (ya + yb) / 2
        d = float(np.hypot(xb - xa, yb - ya))
        wide = SampledFunction.cone(grid, mx, my, 1.6 * d + 6 * grid.pitch)
        tight = SampledFunction.cone(grid, xa, ya, 0.35 * d)
        out.append((wide.quantized(QUANTUM), tight.quantized(QUANTUM)))
        # overlapping plateaus, one marked point each, connected union
        ca = Region.from_disk(grid, xa + 0.3 * (xb - xa), ya + 0.3 * (yb - ya), 0.45 * d)
        cb = Region.from_disk(grid, xb - 0.3 * (xb - xa), yb - 0.3 * (yb - ya), 0.45 * d)
        out.append(
            (
                SampledFunction.plateau(ca, 1, 1.0).quantized(QUANTUM),
                SampledFunction.plateau(cb, 1, 1.0).quantized(QUANTUM),
            )
        )
    if ring_cells is not None:
        thick = ndimage.binary_dilation(ring_cells, structure=STRUCT8, iterations=2)
        thick &= grid.active()
        X, _ = grid.cell_centers()
        xs = X[ring_cells]
        cut_lo = np.quantile(xs, 0.35)
        cut_hi = np.quantile(xs, 0.65)
        left = Region(thick & (X <= cut_hi), COMPACT, grid)
        right = Region(thick & (X >= cut_lo), COMPACT, grid)
        f = SampledFunction.plateau(dilate(left, 1), 1, 1.0)
        g = SampledFunction.plateau(dilate(right, 1), 1, 1.0)
        out.append((f.quantized(QUANTUM), g.quantized(QUANTUM)))
    if blob is not None:
        X, _ = grid.cell_centers()
        xs = X[blob.cells]
        mid = float(np.median(xs))
        wspan = float(xs.max() - xs.min()) + 4 * grid.pitch
        box = dilate(blob, 2)
        lcells = box.cells & (X <= mid + 0.3 * wspan)
        rcells = box.cells & (X >= mid - 0.3 * wspan)
        f = SampledFunction.plateau(Region(lcells, COMPACT, grid), 1, 1.0)
        g = SampledFunction.plateau(Region(rcells, COMPACT, grid), 1, 1.0)
        out.append((f.quantized(QUANTUM), g.quantized(QUANTUM)))
    while len(out) < trials:
        f = random_function(grid, rng)
        g = random_function(grid, rng)
        out.append((f, g))
    return out[:trials]


def it_case_stream(grid, seed):
    """Tagged configurations for transform axiom checks."""

    def sampler(trials):
        rng = np.random.default_rng(seed)
        tags = ["region", "nested", "disjoint_compacts", "disjoint_opens", "inner", "outer"]
        for i in range(trials):
            tag = tags[i % len(tags)]
            if tag == "region":
                yield (tag, random_region(grid, rng))
            elif tag == "nested":
                kind = COMPACT if rng.random() < 0.5 else OPEN
                s, b = nested_pair(grid, rng, kind)
                yield (tag, s, b)
            elif tag == "disjoint_compacts":
                a, b = separated_pair(grid, rng, COMPACT)
                yield (tag, a, b)
            elif tag == "disjoint_opens":
                a, b = separated_pair(grid, rng, OPEN)
                yield (tag, a, b)
            elif tag == "inner":
                yield (tag, random_solid_region(grid, rng, OPEN))
            else:
                yield (tag, random_solid_region(grid, rng, COMPACT))

    return sampler
