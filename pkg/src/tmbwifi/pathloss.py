"""Indoor 5 GHz path loss evaluators and the PL <-> RSSI link budget.

Six model families are provided:

* ``residential`` / ``enterprise``: the 802.11ax TGax indoor channel models,
  location specific (need the wall and floor counts of every link).
* ``log-distance``: ``L0 + 10*gamma*log10(d)``.
* ``wall-factor``: log-distance plus ``k`` dB per traversed wall.
* ``tmb``: log-distance plus ``k * wbar * d``, i.e. the wall count replaced
  by an average wall density times distance. Needs no per-location data.
* ``itu``: ITU-R indoor site-general model with the frequency in MHz.

All evaluators are pure functions of a :class:`LinkGeometry` and a
:class:`PathLossParams` and return dB.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, fields, replace

from .errors import DomainError

__all__ = [
    "LinkGeometry",
    "PathLossParams",
    "ModelId",
    "LinkBudget",
    "DEFAULT_PARAMS",
    "pl_residential",
    "pl_enterprise",
    "pl_log_distance",
    "pl_wall_factor",
    "pl_tmb",
    "pl_itu",
    "evaluate",
    "rssi_at",
    "link_budget",
    "params_to_text",
    "params_from_text",
    "parse_kv_text",
]


@dataclass(frozen=True)
class LinkGeometry:
    """One AP-STA link. ``height_m`` is carried as metadata only."""

    distance_m: float
    walls: int = 0
    floors: int = 0
    height_m: float = 0.0

    def __post_init__(self):
        if not self.distance_m > 0 or not math.isfinite(self.distance_m):
            raise DomainError(f"distance_m must be > 0, got {self.distance_m!r}")
        if self.walls < 0 or self.floors < 0:
            raise DomainError("walls and floors must be non-negative")
        if int(self.walls) != self.walls or int(self.floors) != self.floors:
            raise DomainError("walls and floors must be integers")


@dataclass(frozen=True)
class PathLossParams:
    """Coefficients for every model family.

    Defaults are the values fitted on the reference campaign (L0, gamma, k, wbar), channel 36
    (5.18 GHz) and the ITU office coefficient N = 31 with no floor loss.
    """

    l0_db: float = 54.12
    gamma: float = 2.06067
    k_db_per_wall: float = 5.25
    wbar_walls_per_m: float = 0.1467
    fc_ghz: float = 5.18
    n_itu: float = 31.0
    lf_itu_db: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise DomainError(f"{f.name} must be finite")
        if not self.gamma > 0:
            raise DomainError(f"gamma must be > 0, got {self.gamma!r}")
        if self.k_db_per_wall < 0:
            raise DomainError("k_db_per_wall must be >= 0")
        if self.wbar_walls_per_m < 0:
            raise DomainError("wbar_walls_per_m must be >= 0")
        if not self.fc_ghz > 0:
            raise DomainError("fc_ghz must be > 0")

    def with_overrides(self, **kw) -> PathLossParams:
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw)


DEFAULT_PARAMS = PathLossParams()


class ModelId(str, enum.Enum):
    RESIDENTIAL = "residential"
    ENTERPRISE = "enterprise"
    LOG_DISTANCE = "log-distance"
    WALL_FACTOR = "wall-factor"
    TMB = "tmb"
    ITU = "itu"

    @classmethod
    def parse(cls, name: str) -> ModelId:
        key = name.strip().lower().replace("_", "-")
        aliases = {"ld": "log-distance", "wf": "wall-factor", "itu-r": "itu"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown model {name!r} (expected one of: {valid})") from None

    @property
    def location_specific(self) -> bool:
        return self in (ModelId.RESIDENTIAL, ModelId.ENTERPRISE, ModelId.WALL_FACTOR)


@dataclass(frozen=True)
class LinkBudget:
    ptx_dbm: float
    rssi_dbm: float
    pl_db: float


def _check_distance(geom: LinkGeometry) -> float:
    d = geom.distance_m
    if not d > 0:
        raise DomainError(f"distance_m must be > 0, got {d!r}")
    return d


def _tgax(d, fc_ghz, breakpoint_m):
    # Shared free-space-to-breakpoint part of the TGax indoor models.
    pl = 40.05 + 20.0 * math.log10(fc_ghz / 2.4) + 20.0 * math.log10(min(d, breakpoint_m))
    if d > breakpoint_m:
        pl += 35.0 * math.log10(d / breakpoint_m)
    return pl


def pl_residential(geom: LinkGeometry, params: PathLossParams = DEFAULT_PARAMS) -> float:
    """TGax residential model: 5 m breakpoint, 5 dB per wall, floor term.

    The floor term ``18.3 * F**((F+2)/(F+1) - 0.46)`` is taken as 0 for F = 0.
    """
    d = _check_distance(geom)
    pl = _tgax(d, params.fc_ghz, 5.0)
    f = geom.floors
    if f > 0:
        pl += 18.3 * f ** ((f + 2) / (f + 1) - 0.46)
    return pl + 5.0 * geom.walls


def pl_enterprise(geom: LinkGeometry, params: PathLossParams = DEFAULT_PARAMS) -> float:
    """TGax enterprise model: 10 m breakpoint, 7 dB per wall."""
    d = _check_distance(geom)
    return _tgax(d, params.fc_ghz, 10.0) + 7.0 * geom.walls


def pl_log_distance(geom: LinkGeometry, params: PathLossParams = DEFAULT_PARAMS) -> float:
    d = _check_distance(geom)
    return params.l0_db + 10.0 * params.gamma * math.log10(d)


def pl_wall_factor(geom: LinkGeometry, params: PathLossParams = DEFAULT_PARAMS) -> float:
    return pl_log_distance(geom, params) + params.k_db_per_wall * geom.walls


def pl_tmb(geom: LinkGeometry, params: PathLossParams = DEFAULT_PARAMS) -> float:
    """Log-distance plus a wall term proportional to distance.

    The per-location wall count is ignored; ``wbar_walls_per_m * d`` stands
    in for it.
    """
    d = _check_distance(geom)
    return (
        params.l0_db
        + 10.0 * params.gamma * math.log10(d)
        + params.k_db_per_wall * params.wbar_walls_per_m * d
    )


def pl_itu(geom: LinkGeometry, params: PathLossParams = DEFAULT_PARAMS) -> float:
    """ITU-R indoor site-general model, frequency in MHz."""
    d = _check_distance(geom)
    f_mhz = params.fc_ghz * 1000.0
    return 20.0 * math.log10(f_mhz) + params.n_itu * math.log10(d) + params.lf_itu_db - 28.0


_EVALUATORS = {
    ModelId.RESIDENTIAL: pl_residential,
    ModelId.ENTERPRISE: pl_enterprise,
    ModelId.LOG_DISTANCE: pl_log_distance,
    ModelId.WALL_FACTOR: pl_wall_factor,
    ModelId.TMB: pl_tmb,
    ModelId.ITU: pl_itu,
}


def evaluate(model: ModelId | str, geom: LinkGeometry, params: PathLossParams = DEFAULT_PARAMS) -> float:
    if not isinstance(model, ModelId):
        model = ModelId.parse(model)
    return _EVALUATORS[model](geom, params)


def rssi_at(
    model: ModelId | str,
    geom: LinkGeometry,
    params: PathLossParams = DEFAULT_PARAMS,
    ptx_dbm: float = 23.0,
) -> float:
    """Received power predicted by ``model`` for a transmit power in dBm."""
    return ptx_dbm - evaluate(model, geom, params)


def link_budget(model, geom, params=DEFAULT_PARAMS, ptx_dbm=23.0) -> LinkBudget:
    pl = evaluate(model, geom, params)
    return LinkBudget(ptx_dbm=ptx_dbm, rssi_dbm=ptx_dbm - pl, pl_db=pl)


# --- key=value documents -------------------------------------------------

PARAM_KEYS = tuple(f.name for f in fields(PathLossParams))


def parse_kv_text(text: str) -> dict[str, str]:
    """Parse ``key=value`` lines. Blank lines and ``#`` comments are skipped."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def params_to_text(params: PathLossParams) -> str:
    return "".join(f"{k}={v!r}\n" for k, v in asdict(params).items())


def params_from_text(text: str, base: PathLossParams = DEFAULT_PARAMS, *, ignore_unknown=False) -> PathLossParams:
    """Read a parameter document. Missing keys fall back to ``base``."""
    kv = parse_kv_text(text)
    values = {}
    for key, value in kv.items():
        if key not in PARAM_KEYS:
            if ignore_unknown:
                continue
            raise ValueError(f"unknown parameter key {key!r}")
        try:
            values[key] = float(value)
        except ValueError:
            raise ValueError(f"{key}: not a number: {value!r}") from None
    return replace(base, **values)
