"""Synthetic record sets used as fixtures and for the reference MCS table.

``mode_table_records`` builds packets whose per-cell empirical mode and mode
frequency equal the reference MCS table exactly. ``simulate_campaign``
emulates the reference path loss campaign: every location is measured
once per BW-PTX configuration, each packet's RSSI carrying Gaussian noise.
"""

from __future__ import annotations

import functools
from collections import Counter

import numpy as np

from . import reference
from .measurements import LocationRegistry, PacketRecord
from .pathloss import DEFAULT_PARAMS, ModelId, evaluate
from .rate_model import (
    BIN_WIDTH_DB,
    McsDistributionTable,
    is_valid_vht,
    query_by_rssi,
)
from .errors import NoDataError, OutOfRangeError

DEFAULT_SEED = 20190718
CAMPAIGN_CONFIGS = tuple((bw, ptx) for bw in (20, 40, 80) for ptx in (4.0, 10.0, 23.0))
PACKET_RATE_HZ = 85.0


def _cell_counts(mode_mcs, mode_nss, percent, bw, n):
    """Counts for one cell: the mode gets ``percent`` of ``n``, the rest is
    spread over the nearest other valid (MCS, NSS) pairs, each strictly below
    the mode count."""
    mode_n = round(percent * n / 100.0)
    if abs(mode_n * 100.0 / n - percent) > 1e-9:
        raise ValueError(f"{percent}% is not representable with {n} samples")
    ctr = Counter({(mode_mcs, mode_nss): mode_n})
    rest = n - mode_n
    cap = mode_n - 1
    others = sorted(
        ((m, s) for m in range(10) for s in (1, 2) if (m, s) != (mode_mcs, mode_nss) and is_valid_vht(m, s, bw)),
        key=lambda p: (abs(p[0] - mode_mcs), p[1] != mode_nss, p),
    )
    for pair in others:
        if rest == 0:
            break
        take = min(cap, rest)
        ctr[pair] = take
        rest -= take
    if rest:
        raise ValueError(f"cannot spread remainder below a {percent}% mode")
    return ctr


def mode_table_counts(n_per_cell: int = 10_000) -> dict:
    """``{(bin_low, bw, ptx): Counter}`` reproducing every reference cell mode."""
    return {
        (low, bw, float(ptx)): _cell_counts(mcs, nss, pct, bw, n_per_cell)
        for low, bw, ptx, mcs, nss, pct in reference.MCS_MODES
    }


def mode_table_records(n_per_cell: int = 10_000, channel: int = 36) -> list[PacketRecord]:
    """Packets whose binned statistics equal :func:`mode_table_counts`.

    RSSI values are spread evenly over each 5 dB bin.
    """
    offsets = (np.arange(n_per_cell) + 0.5) * (BIN_WIDTH_DB / n_per_cell)
    times = (np.arange(n_per_cell) / PACKET_RATE_HZ).tolist()
    records = []
    for (low, bw, ptx), ctr in mode_table_counts(n_per_cell).items():
        rssi = (low + offsets).tolist()
        i = 0
        for (mcs, nss), n in sorted(ctr.items()):
            records.extend(
                PacketRecord(times[j], "ref", rssi[j], mcs, nss, bw, ptx, channel) for j in range(i, i + n)
            )
            i += n
    return records


@functools.lru_cache(maxsize=1)
def reference_table() -> McsDistributionTable:
    """The MCS table matching the reference per-cell modes."""
    return McsDistributionTable.from_counts(mode_table_counts())


def simulate_campaign(
    registry=None,
    params=DEFAULT_PARAMS,
    *,
    model=ModelId.WALL_FACTOR,
    sigma_db: float = 2.0,
    packets_per_config: int = 20,
    configs=CAMPAIGN_CONFIGS,
    seed: int = DEFAULT_SEED,
    channel: int = 36,
    mcs_table: McsDistributionTable | None = None,
) -> list[PacketRecord]:
    """Packet records for every (location, BW, PTX) of a measurement campaign.

    RSSI is ``ptx - PL(model) + N(0, sigma_db)`` per packet, rounded to
    0.01 dB. MCS/NSS are drawn from ``mcs_table`` (the reference table by
    default) at the packet's RSSI, falling back to MCS 0 / 1 SS where the
    table has nothing.
    """
    registry = LocationRegistry.reference() if registry is None else registry
    table = reference_table() if mcs_table is None else mcs_table
    rng = np.random.default_rng(seed)
    draw_cache = {}

    def draw_mcs(rssi, bw, ptx):
        try:
            pred = query_by_rssi(table, rssi, bw, ptx)
        except (OutOfRangeError, NoDataError):
            return 0, 1
        key = (pred.source_bin.lower_dbm, bw, ptx)
        if key not in draw_cache:
            dist = pred.distribution
            draw_cache[key] = ([(e.mcs, e.nss) for e in dist], np.cumsum([e.probability for e in dist]))
        pairs, cdf = draw_cache[key]
        idx = min(int(np.searchsorted(cdf, rng.random(), side="right")), len(pairs) - 1)
        return pairs[idx]

    records = []
    for loc, geom in registry.items():
        pl = evaluate(model, geom, params)
        for rep, (bw, ptx) in enumerate(configs):
            noise = rng.normal(0.0, sigma_db, packets_per_config)
            for k, eps in enumerate(noise):
                rssi = round(ptx - pl + float(eps), 2)
                rssi = min(rssi, ptx - 0.01)
                mcs, nss = draw_mcs(rssi, bw, ptx)
                t = rep * 10.0 + k / PACKET_RATE_HZ
                records.append(PacketRecord(round(t, 6), loc, rssi, mcs, nss, bw, ptx, channel))
    return records
