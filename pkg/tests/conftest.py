import numpy as np
import pytest

from hpdcover import PriorConfig, make_distribution

# The standard panel configurations exercised across the suite: three error
# laws at a narrow and a wide band (w = 1), plus one atom-carrying config.
PANEL_CONFIGS = [
    ("gaussian", 0.5, 1.0),
    ("gaussian", 5.0, 1.0),
    ("laplace", 0.5, 1.0),
    ("laplace", 5.0, 1.0),
    ("t3", 0.5, 1.0),
    ("t3", 5.0, 1.0),
]
EXTRA_CONFIGS = [("gaussian", 0.5, 0.25)]
ALL_CONFIGS = PANEL_CONFIGS + EXTRA_CONFIGS

ALPHA = 0.05

_DISTS = {}


def dist(name):
    if name not in _DISTS:
        _DISTS[name] = make_distribution(name)
    return _DISTS[name]


def config(name, lam, w, alpha=ALPHA):
    return PriorConfig(dist=dist(name), lam=lam, w=w, alpha=alpha)


@pytest.fixture(scope="session")
def laplace():
    return dist("laplace")


@pytest.fixture(scope="session")
def gaussian():
    return dist("gaussian")


def sample_x(cfg, n, seed, halfwidth=None):
    """Seeded x draws covering the scan window, excluding the atom region."""
    rng = np.random.default_rng(seed)
    b = halfwidth if halfwidth else cfg.lam + float(cfg.dist.ppf_upper(cfg.alpha / 2.0)) + 6.0
    xs = rng.uniform(-b, b, size=n)
    t = cfg.t_alpha
    if np.isfinite(t):
        xs = xs[np.abs(xs) > t + 1e-9]
    return xs
