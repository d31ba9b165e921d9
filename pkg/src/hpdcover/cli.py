"""Command-line interface: credible sets, coverage, bounds, post-selection, figures.

Subcommands mirror the library: ``hpd`` prints one credible set as JSON,
``coverage`` writes a CSV curve, ``bounds`` runs the coverage-bound report,
``postselect`` / ``postselect-coverage`` handle the inverted sets, and
``figure N`` (N = 1..5) emits the data behind the standard diagnostic
figures with a JSON sidecar.  A ``--config`` file in key=value form supplies
defaults that explicit flags override; HPD_THREADS caps parallelism.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .coverage import check_coverage_bounds, coverage_curve, coverage_mc
from .distributions import Distribution, make_distribution
from .figures import (
    coverage_panels_rows,
    endpoint_curves_rows,
    fmt,
    length_curves_rows,
    posterior_illustration_rows,
    radius_functions_rows,
)
from .hpd import hpd_set
from .posterior import PriorConfig
from .postselect import conditional_coverage_mc, post_selection_set
from .scanning import ScanSettings

__all__ = ["RunConfig", "parse_dist_spec", "parse_grid_spec", "cmd_figure", "main"]


def parse_dist_spec(spec: str) -> Distribution:
    """Parse a --dist value: gaussian | laplace | t3 | subexp:ETA."""
    name, _, tail = spec.strip().partition(":")
    if tail:
        return make_distribution(name, eta=float(tail))
    return make_distribution(name)


def parse_grid_spec(spec: str) -> np.ndarray:
    """Parse a:b:n into n evenly spaced points from a to b."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must look like a:b:n, got {spec!r}")
    a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    if n < 1 or not (math.isfinite(a) and math.isfinite(b)) or b < a:
        raise ValueError(f"bad grid spec {spec!r}")
    return np.linspace(a, b, n)


@dataclass
class RunConfig:
    """One run's full configuration; round-trips losslessly through key=value text."""

    dist: str = "laplace"
    lam: tuple[float, ...] = (0.5,)
    w: tuple[float, ...] = (1.0,)
    alpha: float = 0.05
    grid: str = ""
    x: float = math.nan
    theta0: float = math.nan
    method: str = "exact"
    n: int = 10**6
    seed: int = 0
    n_base: int = 4096
    n_dense: int = 512
    tol_tail: float = 1e-9
    threads: int = 0
    fig_grid_n: int = 800
    mirror: bool = True
    out: str = ""
    outdir: str = "."

    def scan_settings(self) -> ScanSettings:
        return ScanSettings(n_base=self.n_base, n_dense=self.n_dense, tol_tail=self.tol_tail)

    def first_dist(self) -> Distribution:
        return parse_dist_spec(self.dist.split(",")[0])

    def dists(self) -> list[Distribution]:
        return [parse_dist_spec(s) for s in self.dist.split(",")]

    def prior(self) -> PriorConfig:
        return PriorConfig(dist=self.first_dist(), lam=self.lam[0], w=self.w[0], alpha=self.alpha)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["lam"] = list(self.lam)
        d["w"] = list(self.w)
        return d

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                text = ",".join(repr(float(e)) for e in v)
            elif isinstance(v, float):
                text = repr(v)
            elif isinstance(v, bool):
                text = "true" if v else "false"
            else:
                text = str(v)
            lines.append(f"{f.name}={text}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        values = dict(data)
        for key in ("lam", "w"):
            if key in values:
                values[key] = tuple(float(v) for v in values[key])
        return cls(**values)

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        values: dict = {}
        fields = {f.name: f for f in dataclasses.fields(cls)}
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in fields:
                raise ValueError(f"unknown config key {key!r}")
            values[key] = _parse_field(fields[key], val)
        return cls(**values)


def _parse_field(f, val: str):
    if f.type in ("tuple[float, ...]",):
        return tuple(float(p) for p in val.split(",") if p)
    if f.type == "float":
        return float(val)
    if f.type == "int":
        return int(val)
    if f.type == "bool":
        return val.lower() in ("1", "true", "yes")
    return val


def _merge_args(rc: RunConfig, args: argparse.Namespace) -> RunConfig:
    updates: dict = {}
    for f in dataclasses.fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is None:
            continue
        if f.name in ("lam", "w") and isinstance(v, str):
            v = tuple(float(p) for p in v.split(","))
        updates[f.name] = v
    return dataclasses.replace(rc, **updates)


def _load_config(args: argparse.Namespace) -> RunConfig:
    base = RunConfig()
    if getattr(args, "config", None):
        base = RunConfig.from_text(Path(args.config).read_text())
    return _merge_args(base, args)


def _write_text(path: str, text: str):
    if path in ("", "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def _threads(rc: RunConfig) -> int | None:
    return rc.threads if rc.threads > 0 else None


# ---------------------------------------------------------------------------
# Subcommand implementations.


def _cmd_hpd(rc: RunConfig) -> int:
    if math.isnan(rc.x):
        raise ValueError("hpd requires --x")
    cs = hpd_set(rc.prior(), rc.x)
    payload = {
        "x": cs.x,
        "regime": cs.regime.name,
        "L": None if math.isnan(cs.lower) else cs.lower,
        "U": None if math.isnan(cs.upper) else cs.upper,
        "intervals": [[a, b] for a, b in cs.intervals],
        "length": cs.length,
        "atom": cs.atom_mass if cs.atom_included or cs.regime.name == "ATOM" else 0.0,
    }
    _write_text(rc.out, _json_text(payload))
    return 0


def _cmd_coverage(rc: RunConfig) -> int:
    if not rc.grid:
        raise ValueError("coverage requires --grid a:b:n")
    grid = parse_grid_spec(rc.grid)
    rc.first_dist()  # surface a bad --dist as a usage error, not a point failure
    failures = []
    reports: dict[tuple[float, float], object] = {}
    for lam in rc.lam:
        for w in rc.w:
            try:
                cfg = PriorConfig(dist=rc.first_dist(), lam=lam, w=w, alpha=rc.alpha)
                reports[(lam, w)] = coverage_curve(
                    cfg, grid, rc.scan_settings(), method=rc.method,
                    n=rc.n, seed=rc.seed, threads=_threads(rc),
                )
            except Exception as exc:  # noqa: BLE001 - enumerate and keep going
                failures.append((lam, w, str(exc)))
    tagged = len(rc.lam) > 1 or len(rc.w) > 1
    header = ["theta0", "C", "C_minus", "C_plus", "frac_I", "frac_II", "frac_III",
              "frac_IV", "method", "n", "seed"]
    if tagged:
        header = ["lambda", "w"] + header
    rows = []
    for lam in rc.lam:
        for w in rc.w:
            rep = reports.get((lam, w))
            if rep is None:
                continue
            for r in rep.rows():
                row = [r[k] for k in
                       ("theta0", "C", "C_minus", "C_plus", "frac_I", "frac_II",
                        "frac_III", "frac_IV", "method", "n", "seed")]
                if tagged:
                    row = [lam, w] + row
                rows.append(row)
    _write_text(rc.out, _csv_text(header, rows))
    for lam, w, msg in failures:
        print(f"coverage failed at lambda={lam} w={w}: {msg}", file=sys.stderr)
    return 1 if failures else 0


def _cmd_bounds(rc: RunConfig) -> int:
    if not rc.grid:
        raise ValueError("bounds requires --grid a:b:n")
    grid = parse_grid_spec(rc.grid)
    cfg = rc.prior()
    report = check_coverage_bounds(cfg, grid, rc.scan_settings(), threads=_threads(rc))
    _write_text(rc.out, _json_text(report.to_dict()))
    return 0 if report.passed else 1


def _cmd_postselect(rc: RunConfig) -> int:
    if math.isnan(rc.x):
        raise ValueError("postselect requires --x")
    ps = post_selection_set(rc.prior(), rc.x, rc.scan_settings())
    payload = {
        "x": ps.x,
        "alpha": ps.alpha,
        "lambda": ps.lam,
        "intervals": [[a, b] for a, b in ps.intervals],
    }
    _write_text(rc.out, _json_text(payload))
    return 0


def _cmd_postselect_coverage(rc: RunConfig) -> int:
    if math.isnan(rc.theta0):
        raise ValueError("postselect-coverage requires --theta0")
    c_hat, stderr, acc = conditional_coverage_mc(rc.prior(), rc.theta0, rc.n, rc.seed)
    payload = {"coverage": c_hat, "stderr": stderr, "acceptance_rate": acc,
               "theta0": rc.theta0, "n": rc.n, "seed": rc.seed}
    _write_text(rc.out, _json_text(payload))
    return 0


def cmd_figure(fig_id: int, rc: RunConfig) -> list[Path]:
    """Emit the CSV + JSON sidecar for one standard figure into rc.outdir."""
    outdir = Path(rc.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    scan = rc.scan_settings()
    side_extra: dict = {}
    if fig_id == 1:
        dists = rc.dists()
        ws = list(rc.w) if rc.w != (1.0,) else [0.125, 0.25, 0.5, 1.0]
        side_extra["w_sweep"] = ws
        side_extra["w_sweep_is_default_assumption"] = rc.w == (1.0,)
        header, rows = coverage_panels_rows(
            dists, list(rc.lam), ws, rc.alpha, rc.fig_grid_n, rc.mirror, scan, _threads(rc)
        )
        side = {}
    elif fig_id == 2:
        header, rows, side = posterior_illustration_rows(make_distribution("gaussian"), rc.alpha)
    elif fig_id == 3:
        header, rows = radius_functions_rows(rc.first_dist(), rc.alpha)
        side = {}
    elif fig_id == 4:
        header, rows = endpoint_curves_rows(rc.first_dist(), rc.alpha)
        side = {}
    elif fig_id == 5:
        header, rows = length_curves_rows(rc.first_dist(), rc.alpha)
        side = {}
    else:
        raise ValueError(f"unknown figure id {fig_id}; expected 1..5")
    csv_path = outdir / f"figure{fig_id}.csv"
    json_path = outdir / f"figure{fig_id}.json"
    csv_path.write_text(_csv_text(header, rows))
    sidecar = {
        "figure": fig_id,
        "library_version": __version__,
        "config": rc.to_dict(),
        "notes": side_extra,
        "series": side,
    }
    json_path.write_text(_json_text(sidecar))
    return [csv_path, json_path]


def _cmd_figure(rc: RunConfig, fig_id: int) -> int:
    paths = cmd_figure(fig_id, rc)
    print("\n".join(str(p) for p in paths))
    return 0


# ---------------------------------------------------------------------------
# Argument parsing.


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--dist", help="gaussian | laplace | t3 | subexp:ETA (comma list for figures)")
    p.add_argument("--lambda", dest="lam", help="band half-width (comma list allowed)")
    p.add_argument("--w", help="slab weight in (0, 1] (comma list allowed)")
    p.add_argument("--alpha", type=float, help="credibility tail level in (0, 1)")
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--n-base", dest="n_base", type=int, help="base scan grid size")
    p.add_argument("--n-dense", dest="n_dense", type=int, help="extra points near special abscissas")
    p.add_argument("--tol-tail", dest="tol_tail", type=float, help="mass allowed outside scan windows")
    p.add_argument("--threads", type=int, help="worker threads (HPD_THREADS caps this)")
    p.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hpdcover",
        description="HPD credible sets for banded spike-and-slab priors and their frequentist coverage",
    )
    parser.add_argument("--version", action="version", version=f"hpdcover {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hpd", help="credible set at one observation, as JSON")
    _add_common(p)
    p.add_argument("--x", type=float, help="observed value")

    p = sub.add_parser("coverage", help="coverage curve over a theta0 grid, as CSV")
    _add_common(p)
    p.add_argument("--grid", help="theta0 grid a:b:n")
    p.add_argument("--method", choices=("exact", "mc"), help="exact scan or Monte Carlo")
    p.add_argument("--seed", type=int, help="Monte Carlo seed")
    p.add_argument("--n", type=int, help="Monte Carlo draws per point")

    p = sub.add_parser("bounds", help="coverage-bound report over a theta0 grid, as JSON")
    _add_common(p)
    p.add_argument("--grid", help="theta0 grid a:b:n")

    p = sub.add_parser("postselect", help="post-selection set at one observation, as JSON")
    _add_common(p)
    p.add_argument("--x", type=float, help="observed (selected) value")

    p = sub.add_parser("postselect-coverage", help="conditional coverage by Monte Carlo, as JSON")
    _add_common(p)
    p.add_argument("--theta0", type=float, help="true mean")
    p.add_argument("--seed", type=int, help="Monte Carlo seed")
    p.add_argument("--n", type=int, help="Monte Carlo draws")

    p = sub.add_parser("figure", help="emit the data behind one standard figure")
    _add_common(p)
    p.add_argument("fig", type=int, choices=(1, 2, 3, 4, 5), help="figure number")
    p.add_argument("--outdir", help="directory for figureN.csv / figureN.json")
    p.add_argument("--fig-grid-n", dest="fig_grid_n", type=int, help="coverage grid density")
    p.add_argument("--no-mirror", dest="mirror", action="store_const", const=False,
                   help="positive theta0 axis only")

    return parser


_HANDLERS = {
    "hpd": _cmd_hpd,
    "coverage": _cmd_coverage,
    "bounds": _cmd_bounds,
    "postselect": _cmd_postselect,
    "postselect-coverage": _cmd_postselect_coverage,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = _load_config(args)
        if args.command == "figure":
            return _cmd_figure(rc, args.fig)
        return _HANDLERS[args.command](rc)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
