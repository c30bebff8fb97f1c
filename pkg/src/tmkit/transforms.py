"""Region-to-region transforms, their adjoints on set functions, and the
dictionary between transforms and cell-indexed families of simple set
functions.

A transform q maps regions of one grid to regions of another, preserving the
open/compact tag, sending the empty set to itself, monotone, respecting
erosion/dilation regularity, and additive over separated unions (compact
pairs only in the deficient variant). The two construction routes:

  - from a rule on solid regions, extended by complement and component
    decomposition (window spaces, where complements of connected sets split
    into solid pieces);
  - from a cell-indexed family w of simple set functions, via
    q(A) = {y : w_y(A) = 1}.

The adjoint pulls a set function on the codomain back through q:
(q^ nu)(A) = nu(q(A)). Pulling back the point mass at each codomain cell
recovers w, which makes the two routes mutually inverse.
"""

import numpy as np
from scipy.signal import fftconvolve

from .errors import (
    AmbiguousCoverError,
    BadConfigError,
    GridMismatchError,
    InvalidParamsError,
    UnsupportedShapeError,
)
from .grid import (
    COMPACT,
    OPEN,
    Region,
    complement,
    connected_components,
    contains,
    dilate,
    disjoint,
    erode,
    is_solid,
    ring_neighborhood,
    ring_stencil,
    union,
)
from .measures import Measure, aarnes_circle, lebesgue, odd_point_counting, point_mass
from .reports import AxiomReport
from .sampling import it_case_stream, random_region, random_solid_region


class ImageTransform:
    """A region-to-region map with memoized evaluation.

    The class itself enforces nothing beyond grid compatibility; whether an
    instance actually satisfies the transform axioms is what check_it_axioms
    decides (fault-injected instances are legitimate test subjects).
    """

    def __init__(self, apply_fn, domain_grid, codomain_grid, deficient_only=False, name=""):
        self._apply = apply_fn
        self.domain_grid = domain_grid
        self.codomain_grid = codomain_grid
        self.deficient_only = deficient_only
        self.name = name
        self._cache = {}

    def __call__(self, region):
        if not self.domain_grid.same_as(region.grid):
            raise GridMismatchError("region lives on a different grid")
        key = region.key()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = self._apply(region)
        if len(self._cache) > 2048:
            self._cache.clear()
        self._cache[key] = out
        return out

    apply = __call__


def compose(outer, inner, name=None):
    """outer after inner; grids must chain."""
    if not outer.domain_grid.same_as(inner.codomain_grid):
        raise GridMismatchError("composition grids do not chain")
    return ImageTransform(
        lambda r: outer(inner(r)),
        inner.domain_grid,
        outer.codomain_grid,
        deficient_only=outer.deficient_only or inner.deficient_only,
        name=name or f"{outer.name}*{inner.name}",
    )


def it_identity(grid, name="identity"):
    return ImageTransform(lambda r: r, grid, grid, name=name)


def it_preimage(uy, ux, domain_grid, codomain_grid, name="preimage"):
    """q(A) = u^{-1}(A) for a cell map u from codomain cells to domain cells.

    uy/ux give the domain cell hit by each codomain cell; entries outside
    the domain index range mark codomain cells whose image left the viewport
    (those never land in q(A), except for the full region, whose preimage is
    everything regardless of u).
    """
    uy = np.asarray(uy)
    ux = np.asarray(ux)
    if uy.shape != codomain_grid.shape or ux.shape != codomain_grid.shape:
        raise InvalidParamsError("cell map must cover the codomain grid")
    ny, nx = domain_grid.shape
    valid = (uy >= 0) & (uy < ny) & (ux >= 0) & (ux < nx)
    cy = np.clip(uy, 0, ny - 1)
    cx = np.clip(ux, 0, nx - 1)
    active = codomain_grid.active()
    full_cells = domain_grid.active()

    def apply(region):
        if np.array_equal(region.cells, full_cells):
            return Region.full(codomain_grid, region.kind)
        cells = region.cells[cy, cx] & valid & active
        return Region(cells, region.kind, codomain_grid)

    return ImageTransform(apply, domain_grid, codomain_grid, name=name)


def it_translation(grid, tx_cells, ty_cells, name=None):
    """Preimage of the shift by (tx, ty) cells; viewport truncation loses a
    frame strip, so use interior regions for exact identities."""
    if grid.window_is_space:
        raise UnsupportedShapeError("translations live on the plane model")
    jj, ii = np.meshgrid(np.arange(grid.nx), np.arange(grid.ny))
    return it_preimage(
        ii + ty_cells,
        jj + tx_cells,
        grid,
        grid,
        name=name or f"shift({tx_cells},{ty_cells})",
    )


def shift_region(region, tx_cells, ty_cells):
    """Grid-aligned translate of a region (cells moving by +tx, +ty)."""
    return it_translation(region.grid, -tx_cells, -ty_cells)(region)


# ---------------------------------------------------------------------------
# extension of solid rules


def _extend_solid_transform(rule_q, domain_grid, codomain_grid, name=""):
    """Extend a rule defined on solid regions to every region of a window
    space, mirroring the set-function extension: disconnected sets map to
    the union over components, connected non-solid sets resolve through the
    complement (whose components are solid in a genus-zero window)."""
    if not domain_grid.window_is_space:
        raise UnsupportedShapeError("solid-rule extension expects a window space")
    depth_limit = 8

    def ev(region, depth=0):
        if depth > depth_limit:
            raise UnsupportedShapeError("transform decomposition does not terminate")
        if region.is_empty():
            return Region.empty(codomain_grid, region.kind)
        if is_solid(region):
            out = rule_q(region)
            return Region(out.cells, region.kind, codomain_grid)
        decomp = connected_components(region)
        if len(decomp) > 1:
            cells = np.zeros(codomain_grid.shape, dtype=bool)
            for comp in decomp.components:
                cells |= ev(comp, depth + 1).cells
            return Region(cells, region.kind, codomain_grid)
        qc = ev(complement(region), depth + 1)
        cells = codomain_grid.active() & ~qc.cells
        return Region(cells, region.kind, codomain_grid)

    return ImageTransform(ev, domain_grid, codomain_grid, name=name)


def it_from_solid_rule(rule_q, domain_grid, codomain_grid=None, name="solid_rule"):
    return _extend_solid_transform(
        rule_q, domain_grid, codomain_grid or domain_grid, name=name
    )


# ---------------------------------------------------------------------------
# catalog


def it_two_point(grid, p1, p2, name="two_point_it"):
    """Solid A maps to nothing, itself, or everything according to how many
    of the two marked points it holds."""
    if not grid.window_is_space:
        raise InvalidParamsError("two-point transform lives on a window space")
    c1, c2 = grid.cell_of(*p1), grid.cell_of(*p2)
    if c1 == c2:
        raise InvalidParamsError("marked points must land in distinct cells")

    def rule(region):
        k = int(region.cells[c1]) + int(region.cells[c2])
        if k == 0:
            return Region.empty(grid, region.kind)
        if k == 2:
            return Region.full(grid, region.kind)
        return region

    return it_from_solid_rule(rule, grid, grid, name=name)


def it_boundary(grid, b_region=None, name="boundary_it"):
    """Solid A maps to nothing, itself, or everything according to whether it
    misses, meets, or swallows the reference closed set B. Defaults to the
    rim of a disk space; the adjoint then retracts set functions onto
    B-supported ones."""
    if not grid.window_is_space:
        raise InvalidParamsError("boundary transform lives on a window space")
    if b_region is None:
        if grid.mask is None:
            raise InvalidParamsError("default reference set needs a disk space")
        b_cells = grid.boundary_ring()
    else:
        if b_region.is_empty():
            raise InvalidParamsError("reference set must be nonempty")
        b_cells = b_region.cells

    def rule(region):
        c = region.cells
        if not (c & b_cells).any():
            return Region.empty(grid, region.kind)
        if not (b_cells & ~c).any():
            return Region.full(grid, region.kind)
        return region

    return it_from_solid_rule(rule, grid, grid, name=name)


def it_constant(mu0, codomain_grid, name="constant_it"):
    """Everything maps to the empty set or the whole codomain according to
    the 0/1 verdict of a fixed simple set function on the domain."""
    if not mu0.is_simple:
        raise InvalidParamsError("constant transform needs a simple set function")

    def apply(region):
        if mu0(region) >= 0.5:
            return Region.full(codomain_grid, region.kind)
        return Region.empty(codomain_grid, region.kind)

    return ImageTransform(
        apply,
        mu0.grid,
        codomain_grid,
        deficient_only=mu0.is_deficient_only,
        name=name,
    )


def it_measure_threshold(grid, eps, m=None, name=None):
    """Three-band transform through normalized mass: solid sets of small mass
    vanish, mid-band sets stay put, near-full sets blow up to everything.

    eps must stay off the attainable mass spectrum (multiples of one cell's
    normalized mass), otherwise the bands are ambiguous at cell granularity.
    """
    if not grid.window_is_space:
        raise InvalidParamsError("threshold transform lives on a window space")
    if not (0.0 < eps < 0.5):
        raise InvalidParamsError("eps must sit in (0, 1/2)")
    if m is None:
        m = lebesgue(grid)
    total = m.total_mass
    ncells = int(grid.active().sum())
    # spectrum guard: eps (hence 1-eps) must miss the k/ncells lattice
    if abs(eps * ncells - round(eps * ncells)) < 1e-9:
        raise InvalidParamsError("eps lies on the attainable mass spectrum")

    def rule(region):
        t = m(region) / total
        if t < eps:
            return Region.empty(grid, region.kind)
        if t < 1.0 - eps:
            return region
        return Region.full(grid, region.kind)

    return it_from_solid_rule(rule, grid, grid, name=name or f"mass_kill({eps})")


def _stencil_counts(cells, kernel):
    c = fftconvolve(cells.astype(np.float64), kernel, mode="same")
    return np.rint(c).astype(np.int64)


def it_resolution_kill(grid, eps, name=None):
    """Keep only the cells that a radius-eps probe circle confirms: p stays
    when its circle sits inside the set, or p is in the set and its circle
    meets the set. Sets of diameter below eps vanish entirely; sets of
    diameter at least 2*eps survive almost unchanged.

    eps = 0 is the identity. eps must otherwise exceed the cell pitch.
    """
    if grid.window_is_space:
        raise InvalidParamsError("resolution transform lives on the plane model")
    if eps == 0:
        return it_identity(grid, name=name or "res_kill(0)")
    if eps <= grid.pitch:
        raise InvalidParamsError("eps must exceed the cell pitch")
    stencil = ring_stencil(grid, eps)
    kernel = stencil.astype(np.float64)
    ssum = int(stencil.sum())
    active = grid.active()

    def solid_cells(cells):
        cnt = _stencil_counts(cells, kernel)
        ero = cnt >= ssum
        dil = cnt >= 1
        return ero | (cells & dil)

    depth_limit = 8

    def ev_cells(region, depth=0):
        if depth > depth_limit:
            raise UnsupportedShapeError("transform decomposition does not terminate")
        if region.is_empty():
            return np.zeros(grid.shape, dtype=bool)
        if region.touches_frame():
            comp = complement(region)
            if comp.is_empty():
                return active.copy()
            if comp.touches_frame():
                raise UnsupportedShapeError(
                    "unbounded set with unbounded complement"
                )
            return active & ~ev_cells(comp, depth + 1)
        decomp = connected_components(region)
        if len(decomp) > 1:
            cells = np.zeros(grid.shape, dtype=bool)
            for c in decomp.components:
                cells |= ev_cells(c, depth + 1)
            return cells
        holes = [
            c
            for c, b in zip(*_complement_split(region))
            if b
        ]
        if not holes:
            return solid_cells(region.cells)
        hull_cells = region.cells.copy()
        for h in holes:
            hull_cells |= h.cells
        out = solid_cells(hull_cells)
        for h in holes:
            out &= ~ev_cells(h, depth + 1)
        return out

    def apply(region):
        return Region(ev_cells(region), region.kind, grid)

    q = ImageTransform(apply, grid, grid, name=name or f"res_kill({eps})")
    q.eps = eps
    q.stencil = stencil
    return q


def _complement_split(region):
    dec = connected_components(complement(region))
    return dec.components, [b for b in dec.bounded]


# ---------------------------------------------------------------------------
# measure maps: the w side of the dictionary


class MeasureMap:
    """Cell-indexed family of set functions on a common domain grid: one
    measure per codomain cell. batch_eval returns the whole value field of
    one region at once; the default loops, constructions with a closed form
    (a backing transform) override it."""

    def __init__(
        self,
        measure_at,
        domain_grid,
        codomain_grid,
        all_simple=True,
        deficient_only=False,
        name="",
        batch=None,
    ):
        self._measure_at = measure_at
        self.domain_grid = domain_grid
        self.codomain_grid = codomain_grid
        self.all_simple = all_simple
        self.deficient_only = deficient_only
        self.name = name
        self._batch = batch
        self._cache = {}

    def measure(self, iy, ix):
        key = (iy, ix)
        m = self._cache.get(key)
        if m is None:
            m = self._measure_at(iy, ix)
            self._cache[key] = m
        return m

    def cells(self):
        iy, ix = np.nonzero(self.codomain_grid.active())
        return list(zip(iy.tolist(), ix.tolist()))

    def batch_eval(self, region):
        if self._batch is not None:
            return self._batch(region)
        out = np.zeros(self.codomain_grid.shape, dtype=float)
        for (iy, ix) in self.cells():
            out[iy, ix] = self.measure(iy, ix)(region)
        return out


def measure_map_from_it(q):
    """Pull the point mass at each codomain cell back through q. Every value
    is the 0/1 question 'does q(A) cover this cell', so the family is
    simple, and batch evaluation is just reading off q(A)."""

    def measure_at(iy, ix):
        def ev(region):
            return 1.0 if q(region).cells[iy, ix] else 0.0

        total = ev(Region.full(q.domain_grid, COMPACT))
        return Measure(
            ev,
            q.domain_grid,
            total,
            is_topological=not q.deficient_only,
            is_simple=True,
            is_deficient_only=q.deficient_only,
            name=f"w[{q.name}]@({iy},{ix})",
        )

    return MeasureMap(
        measure_at,
        q.domain_grid,
        q.codomain_grid,
        all_simple=True,
        deficient_only=q.deficient_only,
        name=f"w[{q.name}]",
        batch=lambda region: q(region).cells.astype(float),
    )


def it_from_measure_map(w, name=None):
    """q(A) = the set of codomain cells whose measure gives A the value 1."""
    if not w.all_simple:
        raise InvalidParamsError("transform construction needs simple values")
    active = w.codomain_grid.active()

    def apply(region):
        cells = (w.batch_eval(region) >= 0.5) & active
        return Region(cells, region.kind, w.codomain_grid)

    return ImageTransform(
        apply,
        w.domain_grid,
        w.codomain_grid,
        deficient_only=w.deficient_only,
        name=name or f"q[{w.name}]",
    )


def w_resolution_map(grid, eps):
    """The per-cell circle-measure family behind the resolution transform;
    batch evaluation routes through the morphological fast path."""
    q = it_resolution_kill(grid, eps)

    def measure_at(iy, ix):
        X, Y = grid.cell_centers()
        return aarnes_circle(grid, p=(X[iy, ix], Y[iy, ix]), eps=eps)

    return MeasureMap(
        measure_at,
        grid,
        grid,
        all_simple=True,
        name=f"w_circle({eps})",
        batch=lambda region: q(region).cells.astype(float),
    )


def axes_triple_map(grid):
    """Plane-model family: the cell at (x, y) carries the three-point
    counting measure on (x,0), (x,y), (y,0); degenerate triples collapse to
    the point mass at the doubled point."""
    if grid.window_is_space:
        raise InvalidParamsError("axes family lives on the plane model")
    X, Y = grid.cell_centers()

    def measure_at(iy, ix):
        x, y = X[iy, ix], Y[iy, ix]
        pts = [(x, 0.0), (x, y), (y, 0.0)]
        cells = [grid.cell_of(*p) for p in pts]
        if len(set(cells)) == 3:
            return odd_point_counting(grid, pts)
        counts = {}
        for c, p in zip(cells, pts):
            counts[c] = counts.get(c, 0) + 1
        doubled = max(counts, key=counts.get)
        px = grid.x_min + (doubled[1] + 0.5) * grid.dx
        py = grid.y_min + (doubled[0] + 0.5) * grid.dy
        return point_mass(grid, px, py)

    return MeasureMap(measure_at, grid, grid, all_simple=True, name="axes_triple")


# ---------------------------------------------------------------------------
# adjoint


def adjoint(q, nu, name=None):
    """Pull nu back through q: A maps to nu(q(A))."""
    if not nu.grid.same_as(q.codomain_grid):
        raise GridMismatchError("set function lives off the transform codomain")
    total = nu(q(Region.full(q.domain_grid, COMPACT)))
    return Measure(
        lambda region: nu(q(region)),
        q.domain_grid,
        total,
        is_topological=nu.is_topological and not q.deficient_only,
        is_simple=nu.is_simple,
        is_deficient_only=nu.is_deficient_only or q.deficient_only,
        name=name or f"{q.name}^{nu.name}",
    )


# ---------------------------------------------------------------------------
# checkers


def check_it_axioms(q, seed=0, trials=330, sampler=None):
    """Axiom sweep over sampled configurations: kind preservation, empty to
    empty, monotonicity, one-cell erosion/dilation regularity, and disjoint
    additivity with disjoint images (compact pairs always, open pairs only
    for full transforms)."""
    grid = q.domain_grid
    report = AxiomReport(f"it[{q.name}]")
    for kind in (OPEN, COMPACT):
        e = Region.empty(grid, kind)
        report.checked += 1
        if not q(e).is_empty():
            report.record("empty_to_empty", float(q(e).cell_count()), 0.0, (e,))
    cases = (sampler or it_case_stream(grid, seed))(trials)
    for case in cases:
        tag = case[0]
        if tag == "region":
            a = case[1]
            qa = q(a)
            report.checked += 1
            if qa.kind != a.kind:
                report.record("kind_preserved", 0.0, 1.0, (a,), note=qa.kind)
        elif tag == "nested":
            s, b = case[1], case[2]
            report.checked += 1
            if not contains(q(b), q(s)):
                report.record("monotone", float(q(s).cell_count()), float(q(b).cell_count()), (s, b))
        elif tag == "disjoint_compacts" or tag == "disjoint_opens":
            if tag == "disjoint_opens" and q.deficient_only:
                continue
            a, b = case[1], case[2]
            qa, qb = q(a), q(b)
            u = q(union(a, b))
            report.checked += 1
            if not disjoint(qa, qb):
                report.record("disjoint_images", 1.0, 0.0, (a, b))
            report.checked += 1
            if not np.array_equal(u.cells, qa.cells | qb.cells):
                report.record(
                    "disjoint_union",
                    float(u.cell_count()),
                    float(qa.cell_count() + qb.cell_count()),
                    (a, b),
                )
        elif tag == "inner":
            u_reg = case[1]
            qu = q(u_reg)
            k0 = u_reg.with_kind(COMPACT)
            report.checked += 1
            ok = True
            for j in (1, 2):
                kj = erode(u_reg, j).with_kind(COMPACT)
                if not kj.is_empty() and not contains(qu, q(kj)):
                    ok = False
            if not ring_neighborhood(q(k0), qu, 1):
                ok = False
            if not ok:
                report.record("inner_regular", 0.0, 1.0, (u_reg,))
        elif tag == "outer":
            k_reg = case[1]
            qk = q(k_reg)
            report.checked += 1
            ok = True
            for j in (1, 2):
                uj = dilate(k_reg, j, kind=OPEN)
                if not contains(q(uj), qk):
                    ok = False
            if not ring_neighborhood(q(k_reg.with_kind(OPEN)), qk, 1):
                ok = False
            if not ok:
                report.record("outer_regular", 0.0, 1.0, (k_reg,))
    return report


class InjectivityResult:
    def __init__(self, injective, witness):
        self.injective = injective
        self.witness = witness


def injectivity_check(q):
    """One-to-one exactly when no singleton maps to the empty set; the scan
    stops at the first annihilated cell."""
    grid = q.domain_grid
    iy, ix = np.nonzero(grid.active())
    for y, x in zip(iy.tolist(), ix.tolist()):
        cells = np.zeros(grid.shape, dtype=bool)
        cells[y, x] = True
        if q(Region(cells, COMPACT, grid)).is_empty():
            return InjectivityResult(False, (y, x))
    return InjectivityResult(True, None)


def inverse_function_check(q, region_trials=20, seed=0):
    """Recover the underlying cell map u with q = preimage-of-u, when one
    exists: the singleton images must tile the whole codomain. Overlapping
    singleton images violate disjointness and raise ambiguous-cover."""
    grid = q.domain_grid
    cod = q.codomain_grid
    owner_y = np.full(cod.shape, -1, dtype=np.int64)
    owner_x = np.full(cod.shape, -1, dtype=np.int64)
    iy, ix = np.nonzero(grid.active())
    for y, x in zip(iy.tolist(), ix.tolist()):
        cells = np.zeros(grid.shape, dtype=bool)
        cells[y, x] = True
        img = q(Region(cells, COMPACT, grid)).cells
        clash = img & (owner_y >= 0)
        if clash.any():
            cy, cx = np.argwhere(clash)[0]
            raise AmbiguousCoverError(
                f"codomain cell ({cy},{cx}) lies in two singleton images"
            )
        owner_y[img] = y
        owner_x[img] = x
    if (owner_y < 0)[cod.active()].any():
        return None
    rng = np.random.default_rng(seed)
    u = it_preimage(owner_y, owner_x, grid, cod, name=f"u[{q.name}]")
    for _ in range(region_trials):
        a = random_region(grid, rng)
        if not q(a).same_cells(u(a)):
            return None
    return owner_y, owner_x


# ---------------------------------------------------------------------------
# non-uniqueness of invariant set functions


def haar_nonuniqueness_demo(grid, eps_pair=None, seed=0, shifts=((3, 0), (0, 2), (2, 2)), trials=6):
    """Two resolution transforms pulled back over the cell-count area
    functional give two distinct shift-invariant set functions, so
    invariance pins down no unique normalization. The distinguishing set is
    a closed square whose diameter equals the smaller radius exactly: the
    smaller probe keeps its corners, the larger probe kills it outright."""
    if grid.window_is_space:
        raise InvalidParamsError("demo lives on the plane model")
    if abs(grid.dx - grid.dy) > 1e-12 * max(grid.dx, grid.dy):
        raise InvalidParamsError("demo expects square cells")
    m = lebesgue(grid)
    if eps_pair is None:
        side_cells = max(3, grid.nx // 16)
        eps1 = (side_cells - 1) * np.sqrt(2.0) * grid.dx
        eps2 = 2.0 * eps1
    else:
        eps1, eps2 = sorted(eps_pair)
        side_cells = int(np.ceil(eps1 / (np.sqrt(2.0) * grid.dx))) + 1
    diam = (side_cells - 1) * np.sqrt(2.0) * grid.dx
    if not (eps1 <= diam + 1e-9 and diam < min(2 * eps1, eps2 - grid.pitch)):
        raise InvalidParamsError("radii leave no distinguishing square")
    q1 = it_resolution_kill(grid, eps1)
    q2 = it_resolution_kill(grid, eps2)
    report = AxiomReport("haar_demo")

    # identity at radius zero
    rng = np.random.default_rng(seed)
    q0 = it_resolution_kill(grid, 0)
    a0 = random_solid_region(grid, rng, COMPACT)
    report.checked += 1
    if not q0(a0).same_cells(a0):
        report.record("identity_at_zero", float(q0(a0).cell_count()), float(a0.cell_count()), (a0,))

    # shift commutation and invariance of the pulled-back functional
    margin = q2.stencil.shape[0] // 2 + max(max(abs(t) for t in s) for s in shifts) + 2
    mx = margin * grid.dx
    my = margin * grid.dy
    x0, x1 = grid.x_min + mx, grid.x_max - mx
    y0, y1 = grid.y_min + my, grid.y_max - my
    if x0 >= x1 or y0 >= y1:
        raise InvalidParamsError("grid too small for the probe radii")
    for _ in range(trials):
        a = Region.from_disk(
            grid,
            rng.uniform(x0, x1),
            rng.uniform(y0, y1),
            rng.uniform(2.5, 6.5) * grid.dx,
            COMPACT,
        )
        for (tx, ty) in shifts:
            s_t = it_translation(grid, tx, ty)
            lhs = compose(q1, s_t)(a)
            rhs = compose(s_t, q1)(a)
            report.checked += 1
            if not lhs.same_cells(rhs):
                report.record("shift_commutes", float(lhs.cell_count()), float(rhs.cell_count()), (a,), note=f"t=({tx},{ty})")
            moved = shift_region(a, tx, ty)
            report.checked += 1
            v, vt = m(q1(a)), m(q1(moved))
            if v != vt:
                report.record("shift_invariant", v, vt, (a,), note=f"t=({tx},{ty})")

    # the distinguishing square, cell-exact so its diameter is exactly eps1
    j0 = (grid.nx - side_cells) // 2
    i0 = (grid.ny - side_cells) // 2
    sq_cells = np.zeros(grid.shape, dtype=bool)
    sq_cells[i0 : i0 + side_cells, j0 : j0 + side_cells] = True
    k_sq = Region(sq_cells, COMPACT, grid)
    v1 = m(q1(k_sq))
    v2 = m(q2(k_sq))
    vm = m(k_sq)
    report.checked += 1
    if not (v2 == 0.0 and 0.0 < v1 < vm):
        report.record("distinguishing_square", v1, v2, (k_sq,), note=f"m={vm}")
    payload = {
        "eps1": eps1,
        "eps2": eps2,
        "square": k_sq,
        "side_cells": side_cells,
        "value_small_probe": v1,
        "value_large_probe": v2,
        "value_area": vm,
    }
    return report, payload


# ---------------------------------------------------------------------------
# config wiring


def transform_from_config(grid, cfg):
    from .measures import measure_from_config

    kind = cfg.get("type")
    if kind == "identity":
        return it_identity(grid)
    if kind == "translation":
        return it_translation(grid, int(cfg.get("tx_cells", 0)), int(cfg.get("ty_cells", 0)))
    if kind == "two_point":
        return it_two_point(grid, tuple(cfg["p1"]), tuple(cfg["p2"]))
    if kind == "boundary":
        return it_boundary(grid)
    if kind == "constant":
        return it_constant(measure_from_config(grid, cfg["measure"]), grid)
    if kind == "measure_threshold":
        return it_measure_threshold(grid, float(cfg["eps"]))
    if kind == "resolution_kill":
        return it_resolution_kill(grid, float(cfg["eps"]))
    raise BadConfigError(f"unknown transform type: {kind!r}")
