"""Re-derive the TMB model family parameters from path loss measurements.

The pipeline is:

1. robust regression of PL against ``10*log10(d)`` on the wall-free
   locations, giving ``L0`` and ``gamma``;
2. grid search of the per-wall attenuation ``k`` minimising the wall-factor
   RMSE over all locations;
3. ``wbar``, the mean of ``walls / distance`` over the measured locations;
4. RMSE of all six models under the resulting parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError, FitError, InsufficientDataError
from .pathloss import (
    DEFAULT_PARAMS,
    LinkGeometry,
    ModelId,
    PathLossParams,
    evaluate,
    params_from_text,
    params_to_text,
    parse_kv_text,
)

# Tukey bisquare tuning constant (95% efficiency under Gaussian noise).
BISQUARE_C = 4.685
# Converts a median absolute deviation to a Gaussian std-dev estimate.
MAD_TO_SIGMA = 1.4826

K_GRID_DB = np.arange(1001) / 100.0  # 0.00 .. 10.00 dB


@dataclass(frozen=True)
class PathLossSample:
    geom: LinkGeometry
    pl_db: float
    location_id: str = ""
    n_records: int = 1

    def __post_init__(self):
        if not math.isfinite(self.pl_db):
            raise ValueError(f"pl_db must be finite, got {self.pl_db!r}")


@dataclass(frozen=True)
class RobustFit:
    intercept: float
    slope: float
    weights: np.ndarray
    scale: float
    n_iter: int
    converged: bool


def _wls(X, y, w):
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(X * sw[:, None], y * sw, rcond=None)
    return coef


def robust_linear_fit(x, y, *, c=BISQUARE_C, max_iter=50, tol=1e-8) -> RobustFit:
    """Straight-line fit by IRLS with Tukey bisquare weights.

    Starts from ordinary least squares. The residual scale is re-estimated
    each iteration as ``1.4826 * MAD``; iteration stops when no coefficient
    moves by more than ``tol`` or after ``max_iter`` reweightings.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    if len(x) < 2:
        raise InsufficientDataError(f"need at least 2 points, got {len(x)}")
    if np.ptp(x) == 0:
        raise InsufficientDataError("all x values are equal; slope is unidentifiable")

    X = np.column_stack([np.ones_like(x), x])
    w = np.ones_like(x)
    coef = _wls(X, y, w)
    # floor on the scale so an exact fit does not divide by zero
    tiny = 1e-12 * max(1.0, float(np.max(np.abs(y))))
    scale = 0.0
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        r = y - X @ coef
        scale = MAD_TO_SIGMA * float(np.median(np.abs(r - np.median(r))))
        if scale <= tiny and np.all(np.abs(r) <= tiny):
            converged = True
            break
        u = r / (c * max(scale, tiny))
        w = np.where(np.abs(u) < 1.0, (1.0 - u**2) ** 2, 0.0)
        if np.count_nonzero(w) < 2 or np.ptp(x[w > 0]) == 0:
            break
        new = _wls(X, y, w)
        step = np.max(np.abs(new - coef))
        coef = new
        if step < tol:
            converged = True
            break
    return RobustFit(float(coef[0]), float(coef[1]), w, scale, it, converged)


def fit_log_distance(samples) -> tuple[float, float]:
    """Robust fit of ``pl = L0 + 10*gamma*log10(d)`` on wall-free samples.

    Returns ``(l0_db, gamma)``.
    """
    samples = list(samples)
    walled = [s.location_id or str(i) for i, s in enumerate(samples) if s.geom.walls > 0]
    if walled:
        raise ValueError(f"log-distance fit takes wall-free samples only; got walls at {', '.join(walled)}")
    if len(samples) < 2:
        raise InsufficientDataError(f"need at least 2 wall-free samples, got {len(samples)}")
    x = [10.0 * math.log10(s.geom.distance_m) for s in samples]
    y = [s.pl_db for s in samples]
    fit = robust_linear_fit(x, y)
    return fit.intercept, fit.slope


def k_search(samples, l0_db: float, gamma: float, grid=K_GRID_DB):
    """RMSE of the wall-factor model for every candidate ``k``.

    Returns ``(k_best, trace)`` where ``trace`` is a list of ``(k, rmse)``.
    The first (smallest) ``k`` attaining the minimum wins.
    """
    samples = list(samples)
    if not any(s.geom.walls > 0 for s in samples):
        raise InsufficientDataError("no sample traverses a wall; k is unidentifiable")
    d = np.array([s.geom.distance_m for s in samples])
    walls = np.array([s.geom.walls for s in samples], dtype=float)
    pl = np.array([s.pl_db for s in samples])
    base = l0_db + 10.0 * gamma * np.log10(d) - pl
    grid = np.asarray(grid, dtype=float)
    resid = base[None, :] + grid[:, None] * walls[None, :]
    rmse_k = np.sqrt(np.mean(resid**2, axis=1))
    best = int(np.argmin(rmse_k))
    return float(grid[best]), list(zip(grid.tolist(), rmse_k.tolist()))


def fit_wall_k(samples, l0_db: float, gamma: float) -> float:
    """Per-wall attenuation on a 0.01 dB grid over [0, 10] dB."""
    return k_search(samples, l0_db, gamma)[0]


def compute_wbar(geoms) -> float:
    """Average traversed walls per metre: mean of ``walls / distance``."""
    geoms = list(geoms)
    if not geoms:
        raise InsufficientDataError("compute_wbar needs at least one location")
    ratios = []
    for g in geoms:
        if not g.distance_m > 0:
            raise DomainError(f"distance_m must be > 0, got {g.distance_m!r}")
        ratios.append(g.walls / g.distance_m)
    return math.fsum(ratios) / len(ratios)


def rmse(model, samples, params: PathLossParams = DEFAULT_PARAMS) -> float:
    samples = list(samples)
    if not samples:
        raise InsufficientDataError("rmse of an empty sample set")
    sq = [(evaluate(model, s.geom, params) - s.pl_db) ** 2 for s in samples]
    return math.sqrt(math.fsum(sq) / len(sq))


@dataclass
class FitReport:
    params: PathLossParams
    rmse_by_model: dict = field(default_factory=dict)
    sample_count: int = 0
    k_search_trace: list = field(default_factory=list)

    def summary(self) -> str:
        p = self.params
        lines = [
            f"{'model':<14}{'L0':>10}{'gamma':>10}{'k':>8}{'Wbar':>9}{'RMSE (dB)':>12}",
        ]
        cols = {
            ModelId.LOG_DISTANCE: (f"{p.l0_db:.4f}", f"{p.gamma:.5f}", "-", "-"),
            ModelId.WALL_FACTOR: (f"{p.l0_db:.4f}", f"{p.gamma:.5f}", f"{p.k_db_per_wall:.2f}", "-"),
            ModelId.TMB: (f"{p.l0_db:.4f}", f"{p.gamma:.5f}", f"{p.k_db_per_wall:.2f}", f"{p.wbar_walls_per_m:.4f}"),
        }
        for m in ModelId:
            l0, g, k, wb = cols.get(m, ("", "", "", ""))
            err = self.rmse_by_model.get(m)
            err = f"{err:.4f}" if err is not None else "-"
            lines.append(f"{m.value:<14}{l0:>10}{g:>10}{k:>8}{wb:>9}{err:>12}")
        lines.append(f"samples: {self.sample_count}")
        return "\n".join(lines)

    def to_text(self) -> str:
        text = params_to_text(self.params)
        text += f"sample_count={self.sample_count}\n"
        for m, v in self.rmse_by_model.items():
            text += f"rmse.{ModelId(m).value}={v!r}\n"
        return text

    @classmethod
    def from_text(cls, text: str) -> FitReport:
        kv = parse_kv_text(text)
        params = params_from_text(text, ignore_unknown=True)
        errs = {ModelId.parse(k[5:]): float(v) for k, v in kv.items() if k.startswith("rmse.")}
        return cls(params=params, rmse_by_model=errs, sample_count=int(kv.get("sample_count", 0)))

    def trace_csv(self) -> str:
        return "k_db,rmse_db\n" + "".join(f"{k:.2f},{r!r}\n" for k, r in self.k_search_trace)


def fit_full(samples, base: PathLossParams = DEFAULT_PARAMS) -> FitReport:
    """Run the whole fitting pipeline.

    ``base`` supplies the coefficients that are not fitted (carrier
    frequency and the ITU terms). Failures are re-raised as
    :class:`FitError` naming the step.
    """
    samples = list(samples)
    if not samples:
        raise FitError("input", "no path loss samples")
    try:
        l0, gamma = fit_log_distance([s for s in samples if s.geom.walls == 0])
    except (ValueError, ArithmeticError) as e:
        raise FitError("fit_log_distance", str(e)) from e
    try:
        k, trace = k_search(samples, l0, gamma)
    except (ValueError, ArithmeticError) as e:
        raise FitError("fit_wall_k", str(e)) from e

    seen = {}
    for i, s in enumerate(samples):
        seen.setdefault(s.location_id or f"#{i}", s.geom)
    try:
        wbar = compute_wbar(seen.values())
        params = replace(base, l0_db=l0, gamma=gamma, k_db_per_wall=k, wbar_walls_per_m=wbar)
    except (ValueError, ArithmeticError) as e:
        raise FitError("compute_wbar", str(e)) from e

    errors = {m: rmse(m, samples, params) for m in ModelId}
    return FitReport(params=params, rmse_by_model=errors, sample_count=len(samples), k_search_trace=trace)
