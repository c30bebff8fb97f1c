"""Set functions on regions: solid-set rules, their extension to all regions,
a catalog of worked examples, and axiom checkers.

The central construction: a rule defined only on solid regions extends to a
unique finitely-additive, regular set function on every open/compact region.
Evaluation uses complements and hole-filling only, never subadditivity, so
the extension faithfully realizes set functions that are additive without
being subadditive.

Extension recipe (window space):
  - solid region: rule directly;
  - connected compact C: total - sum of values of the open components of the
    complement (each is solid when the space has genus zero);
  - connected open U: complement route through X minus U;
  - several components: sum (compacts are ring-separated by construction,
    opens are additive componentwise).

Plane model: connected sets get hull subtraction, value(hull) minus the
values of the bounded complement components (the holes), recursing into
holes of holes; frame-touching sets are evaluated through their bounded
complement when one exists, else the evaluation is not finite.
"""

import threading
from dataclasses import dataclass
from typing import Callable

from .errors import NonFiniteError, UnsupportedShapeError
from .grid import (
    COMPACT,
    OPEN,
    Region,
    complement,
    connected_components,
    erode,
    is_solid,
    place_stencil,
    ring_stencil,
    union,
)
from .reports import AxiomReport


@dataclass
class SolidSetRule:
    """A set function defined on solid regions only."""

    evaluator: Callable[[Region], float]
    grid: object
    total_mass: float  # value on X for window spaces, supremum bound for plane
    name: str = ""

    def __call__(self, region):
        return float(self.evaluator(region))


class Measure:
    """A set function on all open/compact regions of one grid.

    Flags describe which axiom family the function is known to satisfy:
    `is_topological` means full additivity on admissible disjoint pairs of
    either kind; `is_deficient_only` restricts that to compact pairs;
    `is_simple` means the value range is {0, 1}. Evaluations are memoized
    (cell-set + kind keyed) behind a lock.
    """

    def __init__(
        self,
        evaluator,
        grid,
        total_mass,
        is_topological=False,
        is_simple=False,
        is_deficient_only=False,
        name="",
    ):
        self._evaluator = evaluator
        self.grid = grid
        self.total_mass = float(total_mass)
        self.is_topological = is_topological
        self.is_simple = is_simple
        self.is_deficient_only = is_deficient_only
        self.name = name
        self._cache = {}
        self._lock = threading.Lock()

    def __call__(self, region):
        key = region.key()
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        value = float(self._evaluator(region))
        with self._lock:
            if len(self._cache) > 4096:
                self._cache.clear()
            self._cache[key] = value
        return value

    def mass(self):
        return self.total_mass

    def scaled(self, c):
        return Measure(
            lambda r: c * self(r),
            self.grid,
            c * self.total_mass,
            is_topological=self.is_topological,
            is_simple=False,
            is_deficient_only=self.is_deficient_only,
            name=f"{c}*{self.name}",
        )


def combine_measures(coeffs, measures, name="combo"):
    """Nonnegative linear combination, additive in every argument."""
    grid = measures[0].grid
    total = float(sum(c * m.total_mass for c, m in zip(coeffs, measures)))

    def ev(region):
        return sum(c * m(region) for c, m in zip(coeffs, measures))

    return Measure(
        ev,
        grid,
        total,
        is_topological=all(m.is_topological for m in measures),
        is_simple=False,
        is_deficient_only=any(m.is_deficient_only for m in measures),
        name=name,
    )


# ---------------------------------------------------------------------------
# extension engine


def _bounded_components(decomp, region_grid):
    bounded, unbounded = [], []
    for comp, flag in zip(decomp.components, decomp.bounded):
        (bounded if flag else unbounded).append(comp)
    return bounded, unbounded


def _extended_evaluator(rule, grid):
    window = grid.window_is_space
    depth_limit = grid.nx * grid.ny

    def ev(region, depth=0):
        if depth > depth_limit:
            raise UnsupportedShapeError("nesting exceeds cell budget")
        if region.is_empty():
            return 0.0
        if not window and region.touches_frame():
            # unbounded set: resolve through the bounded complement
            comp = complement(region)
            if comp.is_empty():
                return _total(rule, grid)
            if comp.touches_frame():
                raise NonFiniteError(
                    "unbounded set with unbounded complement has no finite value"
                )
            return _total(rule, grid) - ev(comp, depth + 1)
        decomp = connected_components(region)
        if len(decomp) == 0:
            return 0.0
        if len(decomp) > 1:
            return float(sum(ev(c, depth + 1) for c in decomp.components))
        # connected from here on
        comp = complement(region)
        cdec = connected_components(comp)
        if window:
            if len(cdec) <= 1:
                return float(rule(region))  # solid
            if region.kind == COMPACT:
                # complement components are open solids in a genus-zero space
                return _total(rule, grid) - float(
                    sum(ev(c, depth + 1) for c in cdec.components)
                )
            return _total(rule, grid) - ev(comp, depth + 1)
        # plane model, bounded connected set: fill the holes
        holes, _ = _bounded_components(cdec, grid)
        if not holes:
            return float(rule(region))  # solid
        hull_cells = region.cells.copy()
        for h in holes:
            hull_cells = hull_cells | h.cells
        hull = Region(hull_cells, region.kind, grid)
        return float(rule(hull)) - float(sum(ev(h, depth + 1) for h in holes))

    return ev


def _total(rule, grid):
    if grid.window_is_space:
        return float(rule(Region.full(grid, COMPACT)))
    return float(rule.total_mass)


def extend_to_measure(rule, is_topological=True, is_simple=False, name=None):
    """Extend a solid-set rule to a measure on all regions of its grid."""
    grid = rule.grid
    ev = _extended_evaluator(rule, grid)
    if grid.window_is_space:
        total = _total(rule, grid)
    else:
        total = float(rule.total_mass)
    return Measure(
        ev,
        grid,
        total,
        is_topological=is_topological,
        is_simple=is_simple,
        is_deficient_only=False,
        name=name or rule.name or "extended",
    )


# ---------------------------------------------------------------------------
# catalog


def _points_to_cells(grid, points):
    out = []
    for (x, y) in points:
        out.append(grid.cell_of(x, y))
    return out


def _count_points_in(region, cell_list):
    c = region.cells
    return sum(1 for (iy, ix) in cell_list if c[iy, ix])


def two_point_lebesgue(grid, p1, p2, name="two_point"):
    """Plane-model set function: area weighted by how many of the two marked
    points the set holds (0, area, or twice the area). Additive but not
    subadditive; the canonical non-measure."""
    if grid.window_is_space:
        raise UnsupportedShapeError("two-point rule lives on the plane model")
    cells = _points_to_cells(grid, [p1, p2])
    area = grid.cell_area

    def rule(region):
        k = _count_points_in(region, cells)
        if k == 0:
            return 0.0
        return float(k) * region.cell_count() * area

    window_area = (grid.x_max - grid.x_min) * (grid.y_max - grid.y_min)
    srule = SolidSetRule(rule, grid, total_mass=2.0 * window_area, name=name)
    return extend_to_measure(srule, is_topological=True, name=name)


def odd_point_counting(grid, points, name="odd_points"):
    """i/n when the set holds 2i or 2i+1 of the 2n+1 marked points."""
    if len(points) % 2 == 0 or len(points) < 3:
        raise ValueError("need an odd number (>= 3) of marked points")
    n = (len(points) - 1) // 2
    cells = _points_to_cells(grid, points)
    if len(set(cells)) != len(cells):
        raise ValueError("marked points must land in distinct cells")

    def rule(region):
        return (_count_points_in(region, cells) // 2) / float(n)

    srule = SolidSetRule(rule, grid, total_mass=1.0, name=name)
    return extend_to_measure(srule, is_topological=True, is_simple=(n == 1), name=name)


def aarnes_circle(grid, p=None, eps=0.0, name="aarnes_circle"):
    """Simple set function built from a reference circle B and a marked
    point p: value 1 when the set contains all of B, or contains p and meets
    B; else 0.

    On a disk space B is the rasterized bounding circle and p defaults to
    the center. On a plane grid pass eps > 0: B is the circle of radius eps
    around p's cell center, rasterized through the shared ring stencil.
    """
    if grid.window_is_space:
        if grid.mask is None:
            raise UnsupportedShapeError("window variant expects a disk space")
        ring_cells = grid.boundary_ring()
        complete = True
        if p is None:
            p = (0.0, 0.0)
        pcell = grid.cell_of(*p)
    else:
        if eps <= 0:
            raise ValueError("plane variant needs eps > 0")
        if p is None:
            raise ValueError("plane variant needs the marked point")
        pcell = grid.cell_of(*p)
        ring_cells, complete = place_stencil(grid, ring_stencil(grid, eps), pcell)

    def rule(region):
        c = region.cells
        # containment only counts when the circle fits the viewport whole
        if complete and not (ring_cells & ~c).any():
            return 1.0
        if c[pcell] and bool((c & ring_cells).any()):
            return 1.0
        return 0.0

    srule = SolidSetRule(rule, grid, total_mass=1.0, name=name)
    return extend_to_measure(srule, is_topological=True, is_simple=True, name=name)


def blob_dtm(grid, blob, name="blob_dtm"):
    """Indicator of 'contains the reference blob': 1 iff the connected blob
    D sits inside the region. Additive on separated compact pairs but not on
    mixed open/compact splits, hence deficient-only. Defined on all regions
    directly (no extension step)."""
    from .grid import component_count

    if blob.cell_count() < 2 or component_count(blob.with_kind(COMPACT)) != 1:
        raise ValueError("reference blob must be connected with >= 2 cells")
    bcells = blob.cells

    def ev(region):
        return 1.0 if not (bcells & ~region.cells).any() else 0.0

    return Measure(
        ev,
        grid,
        1.0,
        is_topological=False,
        is_simple=True,
        is_deficient_only=True,
        name=name,
    )


def lebesgue(grid, name="lebesgue"):
    """Cell-counting area measure (genuinely subadditive)."""
    area = grid.cell_area

    def ev(region):
        return region.cell_count() * area

    if grid.window_is_space:
        total = float(Region.full(grid).cell_count()) * area
    else:
        total = (grid.x_max - grid.x_min) * (grid.y_max - grid.y_min)
    return Measure(ev, grid, total, is_topological=True, name=name)


def point_mass(grid, x, y, name="point_mass"):
    """Dirac mass at the cell holding (x, y)."""
    cell = grid.cell_of(x, y)

    def ev(region):
        return 1.0 if region.cells[cell] else 0.0

    m = Measure(ev, grid, 1.0, is_topological=True, is_simple=True, name=name)
    m.support_cell = cell
    return m


# ---------------------------------------------------------------------------
# axiom checkers


def check_solid_axioms(rule, sampler, trials=100, tol=1e-9):
    """Finite-grid reading of the solid-set-function axioms.

    - superadditivity over disjoint solid compacts nested in a solid compact;
    - partition additivity: value(X) = value(A) + value(X - A) for solid
      splits of a window space (vacuous on the plane model);
    - regularity: same-cells open/compact evaluations agree, and values along
      one-cell erosion/dilation chains are monotone in the set.
    """
    report = AxiomReport(f"solid_axioms[{rule.name}]")
    grid = rule.grid
    for case in sampler(trials):
        kind = case[0]
        if kind == "nested_disjoint":
            _, outer, inners = case
            lhs = sum(rule(c) for c in inners)
            rhs = rule(outer)
            report.checked += 1
            if lhs > rhs + tol:
                report.record("superadditive_nested", lhs, rhs, (outer, *inners))
        elif kind == "partition":
            _, part_a, part_b = case
            if not grid.window_is_space:
                continue
            lhs = rule(part_a) + rule(part_b)
            rhs = _total(rule, grid)
            report.checked += 1
            if abs(lhs - rhs) > tol:
                report.record("partition_additivity", lhs, rhs, (part_a, part_b))
        elif kind == "regular":
            _, region = case
            twin = region.with_kind(
                COMPACT if region.kind == OPEN else OPEN
            )
            report.checked += 1
            if abs(rule(region) - rule(twin)) > tol:
                report.record("same_cells_regularity", rule(region), rule(twin), (region,))
            chain = [region]
            for rings in (1, 2):
                shrunk = erode(region, rings).with_kind(COMPACT)
                if shrunk.is_empty() or not is_solid(shrunk):
                    break
                chain.append(shrunk)
            vals = [rule(r) for r in chain]
            report.checked += 1
            if any(vals[i] < vals[i + 1] - tol for i in range(len(vals) - 1)):
                report.record("erosion_monotone", min(vals), max(vals), (region,))
    return report


def check_dtm_axioms(m, sampler, trials=200, tol=1e-9):
    """Additivity on separated compact pairs, monotonicity, superadditivity;
    for topological measures also additivity on open pairs and on
    complement/hole-filling mixed-kind splits."""
    report = AxiomReport(f"dtm_axioms[{m.name}]")
    for case in sampler(trials):
        tag = case[0]
        if tag == "disjoint_compacts":
            _, a, b = case
            u = union(a, b, COMPACT)
            lhs, rhs = m(u), m(a) + m(b)
            report.checked += 1
            if abs(lhs - rhs) > tol:
                report.record("additive_compact_pair", lhs, rhs, (a, b))
        elif tag == "disjoint_opens":
            if not m.is_topological:
                continue
            _, a, b = case
            u = union(a, b, OPEN)
            lhs, rhs = m(u), m(a) + m(b)
            report.checked += 1
            if abs(lhs - rhs) > tol:
                report.record("additive_open_pair", lhs, rhs, (a, b))
        elif tag == "mixed_split":
            # open piece plus compact piece whose union is open or the space
            if not m.is_topological:
                continue
            _, whole, open_part, compact_part = case
            lhs = m(whole)
            rhs = m(open_part) + m(compact_part)
            report.checked += 1
            if abs(lhs - rhs) > tol:
                report.record("additive_mixed_split", lhs, rhs, (open_part, compact_part))
        elif tag == "nested":
            _, small, big = case
            report.checked += 1
            if m(small) > m(big) + tol:
                report.record("monotone", m(small), m(big), (small, big))
        elif tag == "superadditive":
            _, outer, inners = case
            lhs = sum(m(c) for c in inners)
            rhs = m(outer)
            report.checked += 1
            if lhs > rhs + tol:
                report.record("superadditive", lhs, rhs, (outer, *inners))
    return report


def subadditivity_witness(m, pair_sampler, trials=100, tol=1e-9):
    """First compact pair with value(C union K) > value(C) + value(K).
    Returns (C, K, lhs, rhs) or None. Measures proper never yield one; the
    non-subadditive catalog entries must."""
    for a, b in pair_sampler(trials):
        u = union(a, b, COMPACT)
        lhs = m(u)
        rhs = m(a) + m(b)
        if lhs > rhs + tol:
            return (a, b, lhs, rhs)
    return None


def simple_complement_law(m, regions, tol=1e-9):
    """For simple measures: value 1 on a set forces value 0 on the
    complement. Returns a report."""
    report = AxiomReport(f"simple_complement[{m.name}]")
    for r in regions:
        report.checked += 1
        v, w = m(r), m(complement(r))
        if v > 0.5 and w > tol:
            report.record("simple_complement", v + w, 1.0, (r,))
    return report


# ---------------------------------------------------------------------------
# config wiring (External interface: measure catalog from JSON)


def measure_from_config(grid, cfg):
    from .errors import BadConfigError

    try:
        kind = cfg["type"]
        if kind == "two_point":
            return two_point_lebesgue(grid, tuple(cfg["p1"]), tuple(cfg["p2"]))
        if kind == "odd_points":
            return odd_point_counting(grid, [tuple(p) for p in cfg["points"]])
        if kind == "aarnes_circle":
            return aarnes_circle(
                grid,
                tuple(cfg["p"]) if "p" in cfg else None,
                float(cfg.get("eps", 0.0)),
            )
        if kind == "blob_dtm":
            blob = Region.from_disk(grid, *cfg["center"], cfg["radius"], COMPACT)
            return blob_dtm(grid, blob)
        if kind == "lebesgue":
            return lebesgue(grid)
        if kind == "point_mass":
            return point_mass(grid, *cfg["at"])
        raise BadConfigError(f"unknown measure type {kind!r}")
    except (KeyError, TypeError) as e:
        raise BadConfigError(f"bad measure config: {e}") from e
