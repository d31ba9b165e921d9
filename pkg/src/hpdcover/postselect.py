"""Post-selection confidence sets by inverting credible-set membership.

With w = 1 the credible set CS(y) given data y is a pure interval set, and
the map theta -> CS(theta) can be inverted: PS(x) = {theta : x in CS(theta)}.
Conditionally on the selection event |X| >= lam, PS covers the true mean
with probability at least 1 - alpha, because the conditional law of X given
selection has exactly the renormalized-slab form of the posterior, so
P(X in CS(theta0) | |X| >= lam) equals the posterior credibility of CS(theta0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hpd import hpd_set, lower_values, upper_values
from .posterior import PriorConfig
from .scanning import ScanSettings, graze_points, member_intervals

__all__ = [
    "PostSelectionSet",
    "post_selection_set",
    "credible_set_contains",
    "conditional_coverage_mc",
]


@dataclass(frozen=True)
class PostSelectionSet:
    """The inverted-membership set {theta : x in CS(theta)} as interval union."""

    x: float
    alpha: float
    lam: float
    intervals: tuple[tuple[float, float], ...]

    def contains(self, theta: float) -> bool:
        return any(a <= theta <= b for a, b in self.intervals)


def credible_set_contains(cfg: PriorConfig, data_values, x: float):
    """Vectorized indicator of x in CS(theta) with theta ranging over data_values.

    CS(theta) is the credible set computed as if theta were the observation.
    Requires w = 1 (no atom) and |x| >= lam, under which membership reduces
    to L(theta) <= x <= U(theta).
    """
    thetas = np.atleast_1d(np.asarray(data_values, float))
    up = upper_values(cfg, thetas)
    low = lower_values(cfg, thetas)
    with np.errstate(invalid="ignore"):
        return (low <= x) & (x <= up)


def _require_selected(cfg: PriorConfig, x: float):
    if cfg.w != 1.0:
        raise ValueError("post-selection sets are defined for w = 1 only")
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    if abs(x) < cfg.lam:
        raise ValueError(f"|x| = {abs(x)} < lam = {cfg.lam}: observation was not selected")


def post_selection_set(cfg: PriorConfig, x: float, scan: ScanSettings = ScanSettings()) -> PostSelectionSet:
    """Compute PS(x) = {theta : x in CS(theta)} by membership scan over theta.

    Any theta with x within the credible set it would generate belongs to
    PS(x); the set is a finite interval union found by the same scan plus
    bisection machinery used for coverage.
    """
    _require_selected(cfg, x)
    d = cfg.dist
    r3_sup = float(d.ppf_upper(cfg.alpha * float(d.cdf(-cfg.lam))))
    half = min(float(d.ppf_upper(scan.tol_tail / 2.0)), r3_sup + 0.5)
    lo, hi = x - half, x + half

    def pred(thetas):
        return credible_set_contains(cfg, thetas, x)

    def graze(grid):
        ups = upper_values(cfg, grid)
        lows = lower_values(cfg, grid)
        pts = graze_points(grid, ups, x, lambda ts: upper_values(cfg, ts))
        pts += graze_points(grid, lows, x, lambda ts: lower_values(cfg, ts))
        return pts

    specials = [cfg.lam, -cfg.lam, x, -x]
    intervals = member_intervals(pred, lo, hi, specials, scan, graze=graze)
    return PostSelectionSet(
        x=float(x),
        alpha=cfg.alpha,
        lam=cfg.lam,
        intervals=tuple((float(a), float(b)) for a, b in intervals),
    )


def conditional_coverage_mc(
    cfg: PriorConfig,
    theta0: float,
    n: int,
    seed: int,
    chunk: int = 1 << 20,
) -> tuple[float, float, float]:
    """Monte Carlo estimate of P(theta0 in PS(X) | |X| >= lam).

    Membership is evaluated through the defining identity
    theta0 in PS(x) <=> x in CS(theta0), so the fixed set CS(theta0) is
    assembled once and each retained draw is a pure interval test.  Returns
    (coverage estimate, binomial standard error, selection rate).
    """
    if cfg.w != 1.0:
        raise ValueError("post-selection coverage requires w = 1")
    if n < 10_000:
        raise ValueError(f"need at least 10000 draws, got {n}")
    cs = hpd_set(cfg, theta0)
    pieces = cs.intervals
    kept = 0
    covered = 0
    n_chunks = (n + chunk - 1) // chunk
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    for i in range(n_chunks):
        m = min(chunk, n - i * chunk)
        gen = np.random.Generator(np.random.Philox(children[i]))
        x = theta0 + cfg.dist.ppf(gen.random(m))
        sel = np.abs(x) >= cfg.lam
        kept += int(np.count_nonzero(sel))
        xs = x[sel]
        member = np.zeros(xs.shape, dtype=bool)
        for a, b in pieces:
            member |= (xs >= a) & (xs <= b)
        covered += int(np.count_nonzero(member))
    if kept == 0:
        raise RuntimeError("no draws passed the selection event |X| >= lam")
    c_hat = covered / kept
    stderr = math.sqrt(max(c_hat * (1.0 - c_hat), 1e-300) / kept)
    return c_hat, stderr, kept / n
