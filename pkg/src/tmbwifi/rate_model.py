"""Empirical MCS / spatial-stream distributions indexed by RSSI and AP config.

A :class:`McsDistributionTable` holds, for each (RSSI bin, BW, PTX) cell, the
relative frequency of every observed (MCS, NSS) pair. RSSI bins are 5 dB wide
half-open tiles ``[l, l+5)`` with ``l = -97, -92, ..., -27``. Queries return
the cell distribution, its mode and the expected VHT PHY rate; an empty cell
borrows from the nearest adjacent bin of the same BW/PTX.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

from .errors import InsufficientDataError, NoDataError, OutOfRangeError
from .measurements import fmt_num
from .pathloss import DEFAULT_PARAMS, rssi_at

BIN_WIDTH_DB = 5
FIRST_BIN_LOW = -97
N_BINS = 15
RSSI_MIN_DBM = FIRST_BIN_LOW
RSSI_MAX_DBM = FIRST_BIN_LOW + BIN_WIDTH_DB * N_BINS  # -22, exclusive

TABLE_HEADER = ("rssi_bin_low", "bw_mhz", "ptx_dbm", "mcs", "nss", "probability", "samples")
PREDICTION_HEADER = (
    "rssi_dbm", "rssi_bin_low", "source_bin_low", "borrowed", "bw_mhz", "ptx_dbm",
    "mode_mcs", "mode_nss", "mode_pct", "expected_rate_mbps",
)


@dataclass(frozen=True, order=True)
class RssiBin:
    lower_dbm: int

    def __post_init__(self):
        idx, rem = divmod(self.lower_dbm - FIRST_BIN_LOW, BIN_WIDTH_DB)
        if rem or not 0 <= idx < N_BINS:
            raise ValueError(f"invalid RSSI bin lower edge {self.lower_dbm}")

    @property
    def upper_dbm(self) -> int:
        return self.lower_dbm + BIN_WIDTH_DB

    @property
    def label(self) -> str:
        # integer-inclusive labelling used by the reference table
        return f"[{self.lower_dbm}, {self.upper_dbm - 1}]"

    def __contains__(self, rssi) -> bool:
        return self.lower_dbm <= rssi < self.upper_dbm


def rssi_bin(rssi_dbm: float) -> RssiBin:
    if not (RSSI_MIN_DBM <= rssi_dbm < RSSI_MAX_DBM):
        raise OutOfRangeError(
            f"RSSI {rssi_dbm} dBm outside the table range [{RSSI_MIN_DBM}, {RSSI_MAX_DBM}) dBm"
        )
    idx = int(math.floor((rssi_dbm - FIRST_BIN_LOW) / BIN_WIDTH_DB))
    idx = min(idx, N_BINS - 1)
    return RssiBin(FIRST_BIN_LOW + BIN_WIDTH_DB * idx)


ALL_BINS = tuple(RssiBin(FIRST_BIN_LOW + BIN_WIDTH_DB * i) for i in range(N_BINS))


# --- VHT PHY rates -------------------------------------------------------

# data subcarriers per bandwidth
N_SD = {20: 52, 40: 108, 80: 234}
# (coded bits per subcarrier, coding rate) per MCS
MCS_MODULATION = [
    (1, 1 / 2),
    (2, 1 / 2),
    (2, 3 / 4),
    (4, 1 / 2),
    (4, 3 / 4),
    (6, 2 / 3),
    (6, 3 / 4),
    (6, 5 / 6),
    (8, 3 / 4),
    (8, 5 / 6),
]
SYMBOL_TIME_US = {"long": 4.0, "short": 3.6}
# (bw, mcs) -> NSS values for which the VHT rate table has no entry
_INVALID_VHT = {(20, 9): {1, 2, 4, 5, 7, 8}, (80, 6): {3, 7}, (80, 9): {6}}


def is_valid_vht(mcs: int, nss: int, bw_mhz: int) -> bool:
    return (
        bw_mhz in N_SD
        and 0 <= mcs <= 9
        and 1 <= nss <= 8
        and nss not in _INVALID_VHT.get((bw_mhz, mcs), ())
    )


def phy_rate(mcs: int, nss: int, bw_mhz: int, guard: str = "long") -> float:
    """VHT data rate in Mbps."""
    if guard not in SYMBOL_TIME_US:
        raise ValueError(f"guard must be 'long' or 'short', got {guard!r}")
    if not is_valid_vht(mcs, nss, bw_mhz):
        raise ValueError(f"invalid VHT combination: MCS {mcs}, {nss} SS, {bw_mhz} MHz")
    bits, rate = MCS_MODULATION[mcs]
    return nss * N_SD[bw_mhz] * bits * rate / SYMBOL_TIME_US[guard]


_VALID_TRIPLES = frozenset(
    (m, s, bw) for m in range(10) for s in range(1, 9) for bw in N_SD if is_valid_vht(m, s, bw)
)


# --- table ---------------------------------------------------------------


@dataclass(frozen=True)
class McsEntry:
    mcs: int
    nss: int
    probability: float
    count: int = 0


def mode_of(entries) -> McsEntry:
    """Most probable entry; ties go to the lower MCS, then the lower NSS."""
    return max(entries, key=lambda e: (e.probability, -e.mcs, -e.nss))


@dataclass(frozen=True)
class McsDistributionTable:
    cells: dict = field(default_factory=dict)
    out_of_range: int = 0
    excluded: int = 0

    @property
    def sample_counts(self) -> dict:
        return {key: sum(e.count for e in entries) for key, entries in self.cells.items()}

    def cell(self, bin_low: int, bw_mhz: int, ptx_dbm: float):
        return self.cells.get((bin_low, bw_mhz, float(ptx_dbm)))

    def configs(self):
        return sorted({(bw, ptx) for _, bw, ptx in self.cells})

    @classmethod
    def from_counts(cls, counts, *, out_of_range=0, excluded=0) -> McsDistributionTable:
        """Build from ``{(bin_low, bw, ptx): Counter({(mcs, nss): n})}``."""
        cells = {}
        for (low, bw, ptx), ctr in counts.items():
            total = sum(ctr.values())
            if total == 0:
                continue
            cells[(int(low), int(bw), float(ptx))] = tuple(
                McsEntry(mcs, nss, n / total, n) for (mcs, nss), n in sorted(ctr.items()) if n > 0
            )
        return cls(dict(sorted(cells.items())), out_of_range, excluded)

    def to_csv(self, stream=None) -> str | None:
        out = io.StringIO() if stream is None else stream
        w = csv.writer(out, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        for (low, bw, ptx), entries in self.cells.items():
            for e in entries:
                w.writerow([low, bw, fmt_num(ptx), e.mcs, e.nss, repr(e.probability), e.count])
        return out.getvalue() if stream is None else None

    @classmethod
    def from_csv(cls, stream) -> McsDistributionTable:
        if isinstance(stream, str):
            stream = io.StringIO(stream)
        reader = csv.reader(stream)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != TABLE_HEADER:
            raise ValueError("MCS table file must have header: " + ",".join(TABLE_HEADER))
        cells = defaultdict(list)
        for row in reader:
            if not row:
                continue
            low, bw, ptx, mcs, nss, p, n = row
            key = (RssiBin(int(low)).lower_dbm, int(bw), float(ptx))
            entry = McsEntry(int(mcs), int(nss), float(p), int(n))
            if not 0.0 <= entry.probability <= 1.0:
                raise ValueError(f"line {reader.line_num}: probability outside [0, 1]")
            if not is_valid_vht(entry.mcs, entry.nss, key[1]):
                raise ValueError(f"line {reader.line_num}: invalid MCS {entry.mcs} / {entry.nss} SS at {key[1]} MHz")
            cells[key].append(entry)
        for key, entries in cells.items():
            total = math.fsum(e.probability for e in entries)
            if abs(total - 1.0) > 1e-9:
                raise ValueError(f"cell {key}: probabilities sum to {total}, not 1")
        return cls({k: tuple(v) for k, v in sorted(cells.items())})


def build_table(records) -> McsDistributionTable:
    """Relative frequency of each (MCS, NSS) per (RSSI bin, BW, PTX).

    Records outside the RSSI tiling are counted in ``out_of_range``; MCS 9 at
    20 MHz (no VHT rate) is counted in ``excluded``. Neither is binned.
    """
    flat = Counter()
    n = out_of_range = excluded = 0
    for r in records:
        n += 1
        rssi = r.rssi_dbm
        if not (RSSI_MIN_DBM <= rssi < RSSI_MAX_DBM):
            out_of_range += 1
            continue
        if (r.mcs, r.nss, r.bw_mhz) not in _VALID_TRIPLES:
            excluded += 1
            continue
        idx = min(int((rssi - FIRST_BIN_LOW) // BIN_WIDTH_DB), N_BINS - 1)
        flat[(FIRST_BIN_LOW + BIN_WIDTH_DB * idx, r.bw_mhz, float(r.ptx_dbm), r.mcs, r.nss)] += 1
    if n == 0:
        raise InsufficientDataError("cannot build an MCS table from no records")
    counts = defaultdict(Counter)
    for (low, bw, ptx, mcs, nss), c in flat.items():
        counts[(low, bw, ptx)][(mcs, nss)] = c
    return McsDistributionTable.from_counts(counts, out_of_range=out_of_range, excluded=excluded)


@dataclass(frozen=True)
class RatePrediction:
    rssi_dbm: float
    bin: RssiBin
    bw_mhz: int
    ptx_dbm: float
    distribution: tuple
    mode: McsEntry
    expected_phy_rate_mbps: float
    guard: str = "long"
    borrowed: bool = False
    source_bin: RssiBin | None = None

    def summary(self, full: bool = False) -> str:
        m = self.mode
        lines = [
            f"RSSI={self.rssi_dbm:.3f} dBm bin={self.bin.label} BW={self.bw_mhz} MHz PTX={fmt_num(self.ptx_dbm)} dBm",
        ]
        if self.borrowed:
            lines.append(f"note: bin {self.bin.label} has no data; borrowed from {self.source_bin.label}")
        lines.append(f"mode: MCS {m.mcs} / {m.nss}SS ({100 * m.probability:.2f}%)")
        lines.append(f"expected PHY rate: {self.expected_phy_rate_mbps:.3f} Mbps ({self.guard} GI)")
        if full:
            for e in self.distribution:
                lines.append(f"  MCS {e.mcs} / {e.nss}SS {100 * e.probability:6.2f}%")
        return "\n".join(lines)

    def csv_row(self) -> list:
        m = self.mode
        return [
            f"{self.rssi_dbm:.3f}", self.bin.lower_dbm, self.source_bin.lower_dbm, int(self.borrowed),
            self.bw_mhz, fmt_num(self.ptx_dbm), m.mcs, m.nss, f"{100 * m.probability:.2f}",
            f"{self.expected_phy_rate_mbps:.3f}",
        ]


def _neighbour(table, b: RssiBin, rssi, bw, ptx):
    # adjacent bins only; nearer edge wins, lower-RSSI side on ties
    candidates = []
    for step in (-1, 1):
        low = b.lower_dbm + step * BIN_WIDTH_DB
        if not RSSI_MIN_DBM <= low < RSSI_MAX_DBM:
            continue
        entries = table.cell(low, bw, ptx)
        if entries:
            nb = RssiBin(low)
            gap = rssi - nb.upper_dbm if step < 0 else nb.lower_dbm - rssi
            candidates.append((abs(gap), step, nb, entries))
    if not candidates:
        return None
    candidates.sort(key=lambda c: (c[0], c[1]))
    return candidates[0][2], candidates[0][3]


def query_by_rssi(table: McsDistributionTable, rssi_dbm: float, bw_mhz: int, ptx_dbm: float, guard: str = "long") -> RatePrediction:
    b = rssi_bin(rssi_dbm)
    entries = table.cell(b.lower_dbm, bw_mhz, ptx_dbm)
    source, borrowed = b, False
    if not entries:
        found = _neighbour(table, b, rssi_dbm, bw_mhz, ptx_dbm)
        if found is None:
            raise NoDataError(
                f"no data for bin {b.label} nor its neighbours at BW={bw_mhz} MHz, PTX={fmt_num(ptx_dbm)} dBm"
            )
        source, entries = found
        borrowed = True
    rate = math.fsum(e.probability * phy_rate(e.mcs, e.nss, bw_mhz, guard) for e in entries)
    return RatePrediction(
        rssi_dbm=rssi_dbm,
        bin=b,
        bw_mhz=bw_mhz,
        ptx_dbm=float(ptx_dbm),
        distribution=tuple(entries),
        mode=mode_of(entries),
        expected_phy_rate_mbps=rate,
        guard=guard,
        borrowed=borrowed,
        source_bin=source,
    )


def query_by_distance(table, model, params=DEFAULT_PARAMS, geom=None, bw_mhz=20, ptx_dbm=23.0, guard="long") -> RatePrediction:
    """Predict RSSI with a path loss model, then look up the MCS distribution."""
    rssi = rssi_at(model, geom, params, ptx_dbm)
    return query_by_rssi(table, rssi, bw_mhz, ptx_dbm, guard)
