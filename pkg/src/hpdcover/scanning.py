"""Grid-scan utilities: membership sets, sign-change roots, extremum refinement.

The credible-set endpoints are piecewise smooth with isolated jumps, so
measurable sets like {x : L(x) <= t <= U(x)} are found by scanning a dense
grid, refining every flag transition by bisection, and guarding against
near-tangent slivers by locating local extrema of the endpoint curves that
graze the target level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ScanSettings", "member_intervals", "sign_change_roots"]


@dataclass(frozen=True)
class ScanSettings:
    """Resolution controls for membership and inversion scans.

    n_base points cover the whole window, with n_dense extra points in a
    unit-halfwidth block around each special abscissa (band edges, atom
    threshold, target point).  tol_tail is the error-law mass allowed to
    fall outside truncated windows; bisect_tol is the abscissa accuracy of
    every refined boundary or root.
    """

    n_base: int = 4096
    n_dense: int = 512
    tol_tail: float = 1e-9
    bisect_tol: float = 1e-10

    def __post_init__(self):
        if self.n_base < 16 or self.n_dense < 0:
            raise ValueError("scan grid too small")
        if not 0.0 < self.tol_tail < 1.0:
            raise ValueError(f"tol_tail must lie in (0, 1), got {self.tol_tail}")
        if not 0.0 < self.bisect_tol < 1.0:
            raise ValueError("bisect_tol must lie in (0, 1)")


def build_grid(lo: float, hi: float, specials, scan: ScanSettings) -> np.ndarray:
    """Sorted deduplicated grid over [lo, hi] densified near special points."""
    if not lo < hi:
        raise ValueError(f"empty scan window [{lo}, {hi}]")
    parts = [np.linspace(lo, hi, scan.n_base)]
    for p in specials:
        if p is None or not math.isfinite(p):
            continue
        a, b = max(lo, p - 1.0), min(hi, p + 1.0)
        if a < b and scan.n_dense:
            parts.append(np.linspace(a, b, scan.n_dense))
        if lo <= p <= hi:
            parts.append(np.array([p]))
    return np.unique(np.concatenate(parts))


def _bisect_iters(width: float, tol: float) -> int:
    if width <= tol:
        return 1
    return min(80, int(math.ceil(math.log2(width / tol))) + 1)


def _refine_flag_boundaries(pred, lo, hi, lo_flag, iters: int) -> np.ndarray:
    """Vectorized boolean bisection: one transition point per (lo, hi) cell."""
    lo = lo.astype(float).copy()
    hi = hi.astype(float).copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        same = pred(mid) == lo_flag
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def graze_points(grid: np.ndarray, vals: np.ndarray, level: float, fn) -> list[float]:
    """Refined local extrema of fn that graze ``level`` between grid points.

    A local maximum of ``vals`` sitting just below ``level`` (or a local
    minimum just above) can hide a membership sliver narrower than the grid
    step.  Candidate cells are detected from slope sign changes and the
    extremum is located by golden-section search on fn.
    """
    out: list[float] = []
    dv = np.diff(vals)
    with np.errstate(invalid="ignore"):
        peaks = np.nonzero((dv[:-1] > 0) & (dv[1:] < 0))[0] + 1
        pits = np.nonzero((dv[:-1] < 0) & (dv[1:] > 0))[0] + 1
    for idx, maximize in ((peaks, True), (pits, False)):
        for i in idx:
            margin = level - vals[i] if maximize else vals[i] - level
            span = abs(dv[i - 1]) + abs(dv[i])
            if not (np.isfinite(margin) and np.isfinite(span)):
                continue
            if 0.0 <= margin < 4.0 * span:
                out.append(_golden_extremum(fn, grid[i - 1], grid[i + 1], maximize))
    return out


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_extremum(fn, a: float, b: float, maximize: bool, iters: int = 60) -> float:
    sgn = 1.0 if maximize else -1.0
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = sgn * float(fn(np.array([c]))[0])
    fd = sgn * float(fn(np.array([d]))[0])
    for _ in range(iters):
        if b - a < 1e-13 * (1.0 + abs(a)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = sgn * float(fn(np.array([c]))[0])
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = sgn * float(fn(np.array([d]))[0])
    return 0.5 * (a + b)


def member_intervals(
    pred,
    lo: float,
    hi: float,
    specials,
    scan: ScanSettings,
    graze=None,
) -> list[tuple[float, float]]:
    """Connected components of {x in [lo, hi] : pred(x)} via scan + bisection.

    pred is a vectorized boolean predicate.  graze, when given, maps the
    evaluated grid to extra abscissas worth sampling (sliver protection);
    the grid is rebuilt once with those points included.
    """
    grid = build_grid(lo, hi, specials, scan)
    flags = pred(grid)
    if graze is not None:
        extra = [p for p in graze(grid) if lo < p < hi]
        if extra:
            grid = np.unique(np.concatenate([grid, np.asarray(extra, float)]))
            flags = pred(grid)
    trans = np.nonzero(flags[1:] != flags[:-1])[0]
    if trans.size:
        iters = _bisect_iters(float(np.max(grid[trans + 1] - grid[trans])), scan.bisect_tol)
        cuts = _refine_flag_boundaries(pred, grid[trans], grid[trans + 1], flags[trans], iters)
    else:
        cuts = np.empty(0)
    edges = np.concatenate([[lo], cuts, [hi]])
    out = []
    state = bool(flags[0])
    for a, b in zip(edges[:-1], edges[1:]):
        if state and b > a:
            out.append((float(a), float(b)))
        state = not state
    return _merge_touching(out)


def _merge_touching(intervals):
    merged = []
    for a, b in intervals:
        if merged and a <= merged[-1][1] + 1e-15:
            merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return merged


def sign_change_roots(
    fn,
    lo: float,
    hi: float,
    specials,
    scan: ScanSettings,
    accept_tol: float,
) -> np.ndarray:
    """All simple roots of fn on [lo, hi] found by sign-change scanning.

    Cells whose endpoints have opposite finite signs are refined by
    bisection; converged points where |fn| exceeds accept_tol (jumps of a
    discontinuous fn, not roots) are dropped.  Tangent (even-order) roots
    between grid points are not detected.
    """
    grid = build_grid(lo, hi, specials, scan)
    vals = fn(grid)
    finite = np.isfinite(vals)
    exact = grid[finite & (vals == 0.0)]
    sign = np.sign(vals)
    cells = np.nonzero(finite[:-1] & finite[1:] & (sign[:-1] * sign[1:] < 0))[0]
    roots = [exact]
    if cells.size:
        lo_x = grid[cells].astype(float).copy()
        hi_x = grid[cells + 1].astype(float).copy()
        lo_s = sign[cells]
        iters = _bisect_iters(float(np.max(hi_x - lo_x)), scan.bisect_tol)
        for _ in range(iters):
            mid = 0.5 * (lo_x + hi_x)
            same = np.sign(fn(mid)) == lo_s
            lo_x = np.where(same, mid, lo_x)
            hi_x = np.where(same, hi_x, mid)
        cand = 0.5 * (lo_x + hi_x)
        ok = np.abs(fn(cand)) <= accept_tol
        roots.append(cand[ok])
    allr = np.sort(np.concatenate(roots))
    if allr.size > 1:
        keep = np.concatenate([[True], np.diff(allr) > 10.0 * scan.bisect_tol])
        allr = allr[keep]
    return allr
