"""Layer-cake functionals: the quasi-integral of a grid function against a
set function, distribution records, measure recovery, and the functional
property checkers.

The integral of f against m is the upper sum of t -> m({f > t}) over the
breakpoint partition (all distinct sampled values, 0, and the bracket
endpoints a = min(0, min f), b = max(0, max f)), plus a * mass. Both
superlevel families are step functions that only jump at sampled values, so
the sum is exact, and the strict/non-strict families give the same number
when the same-cells open/compact evaluations of m agree.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from .errors import (
    NonFiniteMeasureError,
    NotMonotoneError,
    RequiresTopologicalError,
)
from .functions import SampledFunction, supports_disjoint
from .grid import COMPACT, OPEN, Region, superlevel_set
from .measures import Measure
from .reports import AxiomReport
from .sampling import disjoint_support_pair


@dataclass
class DistributionFunction:
    """m({f > t}) and m({f >= t}) tabulated over the breakpoints."""

    breakpoints: np.ndarray
    r1: np.ndarray
    r2: Optional[np.ndarray]
    total_mass: float

    def r1_integral(self):
        dt = np.diff(self.breakpoints)
        return float(np.dot(self.r1[:-1], dt))

    def r2_integral(self):
        """Right-endpoint sum; the Stieltjes-consistent pairing for the
        non-strict family."""
        if self.r2 is None:
            raise ValueError("r2 was not tabulated")
        dt = np.diff(self.breakpoints)
        return float(np.dot(self.r2[1:], dt))


@dataclass
class QuasiIntegralValue:
    value: float
    lower: float  # a: lower bracket endpoint (<= 0)
    upper: float  # b: upper bracket endpoint (>= 0)
    dist: DistributionFunction


def _breakpoints(f, extra=None):
    vals = f.distinct_values()
    a = min(0.0, float(vals.min()))
    b = max(0.0, float(vals.max()))
    pts = [vals, np.array([a, 0.0, b])]
    if extra is not None:
        e = np.asarray(extra, dtype=float)
        pts.append(e[(e >= a) & (e <= b)])
    return a, b, np.unique(np.concatenate(pts))


def quasi_integral(m, f, extra_breakpoints=None, with_r2=False):
    """Integrate f against m by the layer-cake upper sum.

    extra_breakpoints may refine the partition (the value is invariant);
    with_r2 additionally tabulates the non-strict family.
    """
    if not np.isfinite(m.total_mass):
        raise NonFiniteMeasureError("integration needs a finite total mass")
    a, b, bp = _breakpoints(f, extra_breakpoints)
    r1 = np.array([m(superlevel_set(f, t, strict=True)) for t in bp])
    r2 = None
    if with_r2:
        r2 = np.array([m(superlevel_set(f, t, strict=False)) for t in bp])
    dist = DistributionFunction(bp, r1, r2, m.total_mass)
    value = dist.r1_integral() + a * m.total_mass
    return QuasiIntegralValue(float(value), a, b, dist)


def distribution(m, f):
    return quasi_integral(m, f, with_r2=True).dist


def quasi_integral_split(m, f):
    """Positive-part minus negative-part route; needs full additivity."""
    if not m.is_topological:
        raise RequiresTopologicalError("split route needs a topological measure")
    plus = quasi_integral(m, f.positive_part()).value
    minus = quasi_integral(m, f.negative_part()).value
    return float(plus - minus)


# ---------------------------------------------------------------------------
# recovery of the set function from its functional


def _ramp_inside(region, rings):
    """1 on the region eroded by `rings`, falling linearly to 0 at the
    region boundary; support is exactly the region."""
    dist = ndimage.distance_transform_cdt(region.cells, metric="chessboard")
    vals = np.clip(dist / float(rings), 0.0, 1.0)
    return SampledFunction(vals, region.grid)


def _ramp_outside(region, rings):
    """1 on the region, falling linearly over `rings` cell rings outside."""
    g = region.grid
    dist = ndimage.distance_transform_cdt(~region.cells, metric="chessboard")
    vals = np.clip(1.0 - dist / float(rings + 1), 0.0, 1.0)
    vals = np.where(g.active(), vals, 0.0)
    if not g.window_is_space:
        frame = g.frame()
        vals = np.where(frame, 0.0, vals)
    return SampledFunction(vals, g)


def recover_measure(rho, grid, name="recovered"):
    """Rebuild a set function from a functional: sup over inside-ramps on
    open regions, inf over outside-ramps on compact regions, best of ramp
    widths 1, 2, 4."""

    def ev(region):
        if region.is_empty():
            return 0.0
        if region.kind == OPEN:
            return max(rho(_ramp_inside(region, j)) for j in (1, 2, 4))
        return min(rho(_ramp_outside(region, j)) for j in (1, 2, 4))

    total = ev(Region.full(grid, COMPACT))
    return Measure(ev, grid, total, name=name)


# ---------------------------------------------------------------------------
# property checkers


def _monotone_phi(rng, lo, hi, allow_decreasing=False, max_knots=8):
    """Random piecewise-linear phi with phi(0) = 0; slopes >= 0 unless
    allow_decreasing."""
    k = int(rng.integers(2, max_knots + 1))
    span_lo = min(lo, 0.0) - 1.0
    span_hi = max(hi, 0.0) + 1.0
    xs = np.sort(rng.uniform(span_lo, span_hi, size=k))
    xs = np.unique(np.concatenate([[span_lo], xs, [span_hi], [0.0]]))
    if allow_decreasing:
        slopes = rng.uniform(-2.0, 2.0, size=len(xs) - 1)
    else:
        slopes = rng.uniform(0.0, 2.0, size=len(xs) - 1)
    ys = np.concatenate([[0.0], np.cumsum(slopes * np.diff(xs))])
    ys = ys - np.interp(0.0, xs, ys)  # anchor phi(0) = 0

    def phi(x):
        return np.interp(x, xs, ys)

    return phi


def check_functional_properties(
    m, fs, seed=0, tol=1e-9, adversarial=(), pair_count=12
):
    """Structural properties of f -> integral(f, m).

    Always: positive homogeneity, monotonicity, the sup-norm bound,
    orthogonal additivity over gap-separated supports, and linearity along
    monotone compositions of a fixed f. For topological measures additionally
    linearity along arbitrary piecewise-linear compositions and sign-free
    combinations. Plain additivity over function pairs is recorded under
    'plain_additivity'; measures pass it, the non-subadditive catalog entries
    must produce a witness.
    """
    rng = np.random.default_rng(seed)
    report = AxiomReport(f"functional[{m.name}]")
    rho = lambda g: quasi_integral(m, g).value
    scale = max(1.0, m.total_mass)

    for f in fs:
        fmin, fmax = f.min_value(), f.max_value()
        v = rho(f)
        # positive homogeneity
        c = float(rng.integers(0, 9)) / 4.0
        lhs, rhs = rho(c * f), c * v
        report.checked += 1
        if abs(lhs - rhs) > tol * scale:
            report.record("positive_homogeneity", lhs, rhs, (f,), note=f"c={c}")
        # monotonicity against a dominating function
        g = f + SampledFunction(
            np.where(f.values != 0, 0.25, 0.0), f.grid
        )
        report.checked += 1
        if v > rho(g) + tol * scale:
            report.record("monotone", v, rho(g), (f,))
        # sup-norm bound
        report.checked += 1
        if abs(v) > f.sup_norm() * m.total_mass + tol * scale:
            report.record("norm_bound", abs(v), f.sup_norm() * m.total_mass, (f,))
        # mass bracket
        report.checked += 1
        if not (
            m.total_mass * fmin - tol * scale
            <= v
            <= m.total_mass * fmax + tol * scale
        ):
            report.record("mass_bracket", v, m.total_mass * fmax, (f,))
        # linearity along monotone compositions of f
        phi1 = _monotone_phi(rng, fmin, fmax)
        phi2 = _monotone_phi(rng, fmin, fmax)
        a_c, b_c = float(rng.integers(0, 5)) / 2.0, float(rng.integers(0, 5)) / 2.0
        lhs = rho(f.compose(lambda x: a_c * phi1(x) + b_c * phi2(x)))
        rhs = a_c * rho(f.compose(phi1)) + b_c * rho(f.compose(phi2))
        report.checked += 1
        if abs(lhs - rhs) > tol * scale:
            report.record("cone_linearity", lhs, rhs, (f,))
        if m.is_topological:
            psi1 = _monotone_phi(rng, fmin, fmax, allow_decreasing=True)
            psi2 = _monotone_phi(rng, fmin, fmax, allow_decreasing=True)
            a_s = float(rng.integers(-4, 5)) / 2.0
            b_s = float(rng.integers(-4, 5)) / 2.0
            lhs = rho(f.compose(lambda x: a_s * psi1(x) + b_s * psi2(x)))
            rhs = a_s * rho(f.compose(psi1)) + b_s * rho(f.compose(psi2))
            report.checked += 1
            if abs(lhs - rhs) > tol * scale:
                report.record("composition_linearity", lhs, rhs, (f,))

    # orthogonal additivity over separated supports
    grid = m.grid
    for _ in range(6):
        f, g = disjoint_support_pair(grid, rng)
        assert supports_disjoint(f, g)
        lhs = rho(f + g)
        rhs = rho(f) + rho(g)
        report.checked += 1
        if abs(lhs - rhs) > tol * scale:
            report.record("orthogonal_additivity", lhs, rhs, (f, g))

    # plain additivity (fails exactly for the non-subadditive entries)
    from .sampling import random_function

    pairs = list(adversarial)
    while len(pairs) < pair_count:
        pairs.append((random_function(grid, rng), random_function(grid, rng)))
    for f, g in pairs[:pair_count]:
        lhs = rho(f + g)
        rhs = rho(f) + rho(g)
        report.checked += 1
        if abs(lhs - rhs) > tol * scale:
            report.record("plain_additivity", lhs, rhs, (f, g))
    return report


def additivity_witness(report):
    """The first recorded plain-additivity failure, or None."""
    for v in report.violations:
        if v.axiom_id == "plain_additivity":
            return v
    return None


def non_additivity_violations(report):
    """Violations other than plain additivity (must be empty for every
    catalog entry; plain additivity alone separates measures from the rest)."""
    return [v for v in report.violations if v.axiom_id != "plain_additivity"]


def check_simplicity(m, fs, seed=0, tol=1e-9):
    """The three equivalent marks of a simple (two-valued) set function:
    squaring commutes with the functional, monotone compositions commute,
    and the value is always one of the sampled values."""
    rng = np.random.default_rng(seed)
    report = AxiomReport(f"simplicity[{m.name}]")
    rho = lambda g: quasi_integral(m, g).value
    for f in fs:
        v = rho(f)
        sq = rho(f * f)
        report.checked += 1
        if abs(sq - v * v) > tol:
            report.record("square_multiplicative", sq, v * v, (f,))
        phi = _monotone_phi(rng, f.min_value(), f.max_value())
        lhs = rho(f.compose(phi))
        rhs = float(phi(v))
        report.checked += 1
        if abs(lhs - rhs) > tol:
            report.record("composition_commutes", lhs, rhs, (f,))
        vals = np.concatenate([f.distinct_values(), [0.0]])
        report.checked += 1
        gap = float(np.abs(vals - v).min())
        if gap > tol:
            report.record("value_in_range", v, float(vals[np.abs(vals - v).argmin()]), (f,))
    return report


def monotone_convergence_check(m, seq, limit, direction="up", tol=1e-9):
    """Values along a monotone function sequence move monotonically and land
    within the Lipschitz envelope of the limit."""
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    if direction == "down" and not m.is_topological:
        raise RequiresTopologicalError("descending route needs a topological measure")
    report = AxiomReport(f"monotone_convergence[{m.name}]")
    sign = 1.0 if direction == "up" else -1.0
    prev = None
    for f in seq:
        if prev is not None and not (
            np.all(sign * (f.values - prev.values) >= -1e-12)
        ):
            raise NotMonotoneError("sequence is not monotone cellwise")
        prev = f
    last = seq[-1]
    if not np.all(sign * (limit.values - last.values) >= -1e-12):
        raise NotMonotoneError("limit does not dominate the sequence")
    vals = [quasi_integral(m, f).value for f in seq]
    report.checked += 1
    if any(sign * (vals[i + 1] - vals[i]) < -tol for i in range(len(vals) - 1)):
        report.record("value_monotone", min(vals), max(vals))
    lim_val = quasi_integral(m, limit).value
    gap = float(np.abs(limit.values - last.values).max())
    envelope = max(tol, 2.0 * m.total_mass * gap)
    report.checked += 1
    if abs(vals[-1] - lim_val) > envelope:
        report.record("convergence_envelope", vals[-1], lim_val)
    return report
