"""Packet capture ingestion, per-location aggregation and signal-variance stats.

Capture files are CSV with the header::

    timestamp_s,location_id,rssi_dbm,mcs,nss,bw_mhz,ptx_dbm,channel

Location registries are CSV with ``location_id,distance_m,walls,floors,height_m``.
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field
from types import SimpleNamespace

from .errors import CaptureFormatError, InsufficientDataError, UnknownLocationError
from .fitting import PathLossSample
from .pathloss import LinkGeometry
from . import reference

CAPTURE_HEADER = ("timestamp_s", "location_id", "rssi_dbm", "mcs", "nss", "bw_mhz", "ptx_dbm", "channel")
REGISTRY_HEADER = ("location_id", "distance_m", "walls", "floors", "height_m")
VARIANCE_HEADER = ("kind", "location_id", "channel", "value_db")
VALID_BW_MHZ = (20, 40, 80)

# Inherent shadowing std-dev of the TGax indoor scenarios; used as the
# acceptance threshold for every variance statistic.
SHADOWING_SIGMA_DB = 5.0


def fmt_num(x) -> str:
    """Canonical number text: integers without a fraction, floats via repr."""
    if isinstance(x, int):
        return str(x)
    if math.isfinite(x) and x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


@dataclass(frozen=True, slots=True)
class PacketRecord:
    timestamp_s: float
    location_id: str
    rssi_dbm: float
    mcs: int
    nss: int
    bw_mhz: int
    ptx_dbm: float
    channel: int = 36

    def __post_init__(self):
        ok = (
            0 <= self.mcs <= 9
            and self.nss >= 1
            and self.bw_mhz in VALID_BW_MHZ
            and self.rssi_dbm < self.ptx_dbm
            and self.location_id
            and math.isfinite(self.timestamp_s)
            and math.isfinite(self.rssi_dbm)
            and math.isfinite(self.ptx_dbm)
        )
        if not ok:
            problems = _record_problems(self)
            raise ValueError("; ".join(f"{f}: {m}" for f, m in problems))


def _record_problems(r) -> list[tuple[str, str]]:
    out = []
    if not r.location_id:
        out.append(("location_id", "empty"))
    for name in ("timestamp_s", "rssi_dbm", "ptx_dbm"):
        if not math.isfinite(getattr(r, name)):
            out.append((name, "not finite"))
    if not 0 <= r.mcs <= 9:
        out.append(("mcs", f"{r.mcs} outside 0..9"))
    if r.nss < 1:
        out.append(("nss", f"{r.nss} < 1"))
    if r.bw_mhz not in VALID_BW_MHZ:
        out.append(("bw_mhz", f"{r.bw_mhz} not in {VALID_BW_MHZ}"))
    if not r.rssi_dbm < r.ptx_dbm:
        out.append(("rssi_dbm", f"{r.rssi_dbm} not below ptx_dbm {r.ptx_dbm}"))
    return out


@dataclass(frozen=True)
class RowError:
    row: int
    field: str
    message: str


@dataclass
class IngestSummary:
    records: list[PacketRecord]
    errors: list[RowError] = field(default_factory=list)

    @property
    def rejected_rows(self) -> int:
        return len({e.row for e in self.errors})

    def describe(self) -> str:
        lines = [f"accepted={len(self.records)} rejected={self.rejected_rows}"]
        lines += [f"row {e.row}: {e.field}: {e.message}" for e in self.errors]
        return "\n".join(lines)


def _as_text(stream):
    if isinstance(stream, str):
        return io.StringIO(stream)
    return stream


def read_capture(stream) -> IngestSummary:
    """Parse a capture CSV, collecting per-row errors instead of raising.

    ``stream`` is an open text file or the CSV content as a string. Row
    numbers count physical lines, the header being row 1.
    """
    reader = csv.reader(_as_text(stream))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != list(CAPTURE_HEADER):
        if header is not None and set(h.strip() for h in header) == set(CAPTURE_HEADER):
            order = [h.strip() for h in header]
        else:
            raise ValueError("capture file is missing the header line: " + ",".join(CAPTURE_HEADER))
    else:
        order = list(CAPTURE_HEADER)

    summary = IngestSummary(records=[])
    for row in reader:
        lineno = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(order):
            summary.errors.append(RowError(lineno, "row", f"expected {len(order)} fields, got {len(row)}"))
            continue
        raw = dict(zip(order, (c.strip() for c in row)))
        values, bad = {}, []
        for name, conv in (
            ("timestamp_s", float),
            ("location_id", str),
            ("rssi_dbm", float),
            ("mcs", int),
            ("nss", int),
            ("bw_mhz", int),
            ("ptx_dbm", float),
            ("channel", int),
        ):
            try:
                values[name] = conv(raw[name])
            except ValueError:
                bad.append(RowError(lineno, name, f"cannot parse {raw[name]!r}"))
        if not bad:
            bad = [RowError(lineno, f, m) for f, m in _record_problems(SimpleNamespace(**values))]
        if bad:
            summary.errors.extend(bad)
            continue
        summary.records.append(PacketRecord(**values))
    return summary


def parse_capture(stream) -> list[PacketRecord]:
    """Parse a capture CSV; raise :class:`CaptureFormatError` on any bad row."""
    summary = read_capture(stream)
    if summary.errors:
        raise CaptureFormatError(summary.errors)
    return summary.records


def write_capture(records, stream=None) -> str | None:
    """Write records as canonical capture CSV. Returns the text if no stream."""
    out = io.StringIO() if stream is None else stream
    w = csv.writer(out, lineterminator="\n")
    w.writerow(CAPTURE_HEADER)
    for r in records:
        w.writerow([
            fmt_num(r.timestamp_s), r.location_id, fmt_num(r.rssi_dbm), r.mcs, r.nss,
            r.bw_mhz, fmt_num(r.ptx_dbm), r.channel,
        ])
    return out.getvalue() if stream is None else None


# --- location registry ---------------------------------------------------


class LocationRegistry(Mapping):
    """Immutable mapping of location id to :class:`LinkGeometry`."""

    def __init__(self, entries):
        items = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        self._entries = {}
        for key, geom in items:
            key = str(key)
            if key in self._entries:
                raise ValueError(f"duplicate location id {key!r}")
            if not isinstance(geom, LinkGeometry):
                raise TypeError(f"location {key!r}: expected LinkGeometry")
            self._entries[key] = geom

    @classmethod
    def reference(cls) -> LocationRegistry:
        """The 21 reference campaign locations."""
        return cls(
            (loc, LinkGeometry(distance_m=d, walls=w, floors=0, height_m=h))
            for loc, h, d, w in reference.LOCATIONS
        )

    def __getitem__(self, key):
        return self._entries[key]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        return f"LocationRegistry({len(self)} locations)"


def read_registry(stream) -> LocationRegistry:
    reader = csv.DictReader(_as_text(stream))
    if reader.fieldnames is None or set(f.strip() for f in reader.fieldnames) != set(REGISTRY_HEADER):
        raise ValueError("registry file must have header: " + ",".join(REGISTRY_HEADER))
    entries = []
    for row in reader:
        row = {k.strip(): v.strip() for k, v in row.items()}
        try:
            geom = LinkGeometry(
                distance_m=float(row["distance_m"]),
                walls=int(row["walls"]),
                floors=int(row["floors"]),
                height_m=float(row["height_m"]),
            )
        except ValueError as e:
            raise ValueError(f"registry row {reader.line_num}: {e}") from None
        entries.append((row["location_id"], geom))
    return LocationRegistry(entries)


def write_registry(registry: LocationRegistry, stream=None) -> str | None:
    out = io.StringIO() if stream is None else stream
    w = csv.writer(out, lineterminator="\n")
    w.writerow(REGISTRY_HEADER)
    for loc, g in registry.items():
        w.writerow([loc, f"{g.distance_m:.3f}", g.walls, g.floors, f"{g.height_m:.3f}"])
    return out.getvalue() if stream is None else None


# --- aggregation ---------------------------------------------------------


def location_sort_key(loc: str):
    """Numeric ids sort numerically, others after them alphabetically."""
    return (0, int(loc), "") if loc.isdigit() else (1, 0, loc)


def _mean(values) -> float:
    # fsum is exactly rounded, hence independent of record order
    return math.fsum(values) / len(values)


def aggregate_path_loss(records, registry: Mapping, *, by_ptx: bool = False) -> list[PathLossSample]:
    """Per-location mean path loss, pooling bandwidths.

    Every record is converted to ``ptx - rssi`` before averaging, so groups
    mixing transmit powers stay unbiased. With ``by_ptx`` one sample per
    (location, PTX) is produced instead of one per location.
    """
    groups = defaultdict(list)
    for r in records:
        key = (r.location_id, r.ptx_dbm) if by_ptx else (r.location_id, None)
        groups[key].append(r.ptx_dbm - r.rssi_dbm)
    unknown = {loc for loc, _ in groups if loc not in registry}
    if unknown:
        raise UnknownLocationError(unknown)

    order = {loc: i for i, loc in enumerate(registry)}
    samples = []
    for (loc, ptx) in sorted(groups, key=lambda k: (order[k[0]], k[1] if k[1] is not None else 0.0)):
        pls = groups[(loc, ptx)]
        samples.append(PathLossSample(geom=registry[loc], pl_db=_mean(pls), location_id=loc, n_records=len(pls)))
    return samples


def _rssi_by(records, key):
    groups = defaultdict(list)
    for r in records:
        groups[key(r)].append(r.rssi_dbm)
    return groups


def _pstd(values) -> float:
    m = _mean(values)
    return math.sqrt(math.fsum((v - m) ** 2 for v in values) / len(values))


def time_variance(records) -> dict[str, float]:
    """Population std-dev of RSSI per location.

    Locations with fewer than two records are left out and reported through
    a ``UserWarning``.
    """
    groups = _rssi_by(records, lambda r: r.location_id)
    skipped = sorted((loc for loc, v in groups.items() if len(v) < 2), key=location_sort_key)
    if skipped:
        warnings.warn(f"time_variance: fewer than 2 records at location(s) {', '.join(skipped)}", stacklevel=2)
    return {loc: _pstd(groups[loc]) for loc in sorted(groups, key=location_sort_key) if len(groups[loc]) >= 2}


def grid_variance(records, grid_map: Mapping[str, str]) -> dict[str, float]:
    """Max |mean RSSI(point) - mean RSSI(centre)| per grid centre.

    ``grid_map`` maps each grid point id to its centre id. Points without
    records are ignored; a centre without records is an error.
    """
    means = {loc: _mean(v) for loc, v in _rssi_by(records, lambda r: r.location_id).items()}
    out = {}
    for center in sorted(set(grid_map.values()), key=location_sort_key):
        if center not in means:
            raise InsufficientDataError(f"no records for grid centre {center!r}")
        diffs = [
            abs(means[p] - means[center])
            for p, c in grid_map.items()
            if c == center and p != center and p in means
        ]
        out[center] = max(diffs, default=0.0)
    return out


def channel_variance(records, reference_channel: int = 36) -> dict[tuple[str, int], float]:
    """Mean RSSI per (location, channel) minus the reference channel's mean."""
    means = {k: _mean(v) for k, v in _rssi_by(records, lambda r: (r.location_id, r.channel)).items()}
    out = {}
    for loc in sorted({loc for loc, _ in means}, key=location_sort_key):
        ref = means.get((loc, reference_channel))
        if ref is None:
            raise InsufficientDataError(
                f"no reference channel {reference_channel} data at location {loc!r}"
            )
        for (l2, ch), m in sorted(means.items(), key=lambda kv: kv[0][1]):
            if l2 == loc:
                out[(loc, ch)] = m - ref
    return out


@dataclass
class VarianceReport:
    per_location_std_db: dict = field(default_factory=dict)
    grid_max_abs_diff_db: dict = field(default_factory=dict)
    per_channel_delta_db: dict = field(default_factory=dict)

    def rows(self):
        for loc, v in self.per_location_std_db.items():
            yield ("time_std", loc, None, v)
        for loc, v in self.grid_max_abs_diff_db.items():
            yield ("grid_max_abs_diff", loc, None, v)
        for (loc, ch), v in self.per_channel_delta_db.items():
            yield ("channel_delta", loc, ch, v)

    def exceeding(self, threshold_db: float = SHADOWING_SIGMA_DB):
        """Rows whose magnitude exceeds ``threshold_db``."""
        return [row for row in self.rows() if abs(row[3]) > threshold_db]

    def to_csv(self, stream=None) -> str | None:
        out = io.StringIO() if stream is None else stream
        w = csv.writer(out, lineterminator="\n")
        w.writerow(VARIANCE_HEADER)
        for kind, loc, ch, v in self.rows():
            w.writerow([kind, loc, "" if ch is None else ch, f"{v:.3f}"])
        return out.getvalue() if stream is None else None


def variance_report(records, *, grid_map=None, reference_channel=None) -> VarianceReport:
    """Collect whichever variance statistics the inputs allow.

    Time std-dev is always computed. Grid spread needs ``grid_map``; channel
    deltas need ``reference_channel``.
    """
    rep = VarianceReport(per_location_std_db=time_variance(records))
    if grid_map:
        rep.grid_max_abs_diff_db = grid_variance(records, grid_map)
    if reference_channel is not None:
        rep.per_channel_delta_db = channel_variance(records, reference_channel)
    return rep


def read_grid_map(stream) -> dict[str, str]:
    """Read a ``location_id,center_id`` CSV."""
    reader = csv.DictReader(_as_text(stream))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["location_id", "center_id"]:
        raise ValueError("grid map file must have header: location_id,center_id")
    out = {}
    for row in reader:
        pid = row["location_id"].strip()
        if pid in out:
            raise ValueError(f"grid point {pid!r} mapped twice")
        out[pid] = row["center_id"].strip()
    return out
