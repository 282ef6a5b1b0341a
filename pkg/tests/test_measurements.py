import io

import numpy as np
import pytest

from tmbwifi import (
    CaptureFormatError,
    InsufficientDataError,
    LocationRegistry,
    PacketRecord,
    UnknownLocationError,
    aggregate_path_loss,
    channel_variance,
    grid_variance,
    parse_capture,
    time_variance,
)
from tmbwifi import reference
from tmbwifi.measurements import (
    CAPTURE_HEADER,
    SHADOWING_SIGMA_DB,
    read_capture,
    read_grid_map,
    read_registry,
    variance_report,
    write_capture,
    write_registry,
)

HEADER = ",".join(CAPTURE_HEADER) + "\n"


def rec(loc="7", rssi=-45.0, mcs=8, nss=2, bw=20, ptx=23.0, channel=36, t=0.0):
    return PacketRecord(t, loc, rssi, mcs, nss, bw, ptx, channel)


def test_parse_single_row():
    records = parse_capture(HEADER + "0.0,7,-44.5,8,2,20,23,36\n")
    assert records == [rec(rssi=-44.5)]


def test_row_error_names_field_and_row():
    text = HEADER + "0.0,7,-44.5,8,2,20,23,36\n0.1,7,-44.5,12,2,20,23,36\n"
    with pytest.raises(CaptureFormatError) as exc:
        parse_capture(text)
    (err,) = exc.value.errors
    assert (err.row, err.field) == (3, "mcs")
    assert "row 3: mcs" in str(exc.value)


def test_errors_are_collected_not_dropped():
    text = HEADER + (
        "0.0,7,-44.5,8,2,20,23,36\n"
        "0.1,7,abc,8,2,20,23,36\n"
        "0.2,7,-44.5,8,0,30,23,36\n"
        "0.3,7,25,8,2,20,23,36\n"
        "0.4,7,-44.5,8,2\n"
    )
    summary = read_capture(text)
    assert len(summary.records) == 1
    assert summary.rejected_rows == 4
    fields = {(e.row, e.field) for e in summary.errors}
    assert {(3, "rssi_dbm"), (4, "nss"), (4, "bw_mhz"), (5, "rssi_dbm"), (6, "row")} <= fields
    assert "accepted=1 rejected=4" in summary.describe()


def test_missing_header_is_file_level_error():
    with pytest.raises(ValueError, match="header"):
        parse_capture("0.0,7,-44.5,8,2,20,23,36\n")
    with pytest.raises(ValueError, match="header"):
        parse_capture("")


def test_reordered_header_is_accepted():
    text = "location_id,timestamp_s,rssi_dbm,mcs,nss,bw_mhz,ptx_dbm,channel\n7,0.5,-44,8,2,20,23,36\n"
    assert parse_capture(text) == [rec(rssi=-44.0, t=0.5)]


def test_record_invariants():
    with pytest.raises(ValueError):
        rec(mcs=10)
    with pytest.raises(ValueError):
        rec(bw=160)
    with pytest.raises(ValueError):
        rec(rssi=30.0, ptx=23.0)


def test_capture_round_trip_is_canonical():
    text = HEADER + "0,7,-44.5,8,2,20,23,36\n0.0117,10,-78.43,3,1,80,10,40\n12.5,18,-58,7,2,40,4,44\n"
    assert write_capture(parse_capture(text)) == text


def test_ten_second_capture_size():
    # ~85 packets/s for 10 s
    rows = "".join(f"{i / 85:.6f},7,-45,8,2,20,23,36\n" for i in range(850))
    assert len(parse_capture(HEADER + rows)) == 850


def test_aggregate_path_loss_mean():
    reg = LocationRegistry.reference()
    samples = aggregate_path_loss([rec(rssi=r) for r in (-44.0, -45.0, -46.0)], reg)
    (s,) = samples
    assert s.location_id == "7" and s.pl_db == pytest.approx(68.0, abs=1e-12)
    assert s.geom == reg["7"] and s.n_records == 3


def test_aggregate_reference_value_location_7():
    # records averaging -44.74 dBm at 23 dBm
    rs = [rec(rssi=-44.74 + d) for d in (-0.5, 0.0, 0.5)]
    (s,) = aggregate_path_loss(rs, LocationRegistry.reference())
    assert s.pl_db == pytest.approx(67.74, abs=1e-9)


def test_aggregate_mixed_ptx_converts_per_record():
    rs = [rec(rssi=-50.0, ptx=23.0), rec(rssi=-63.0, ptx=10.0, mcs=3, nss=1)]
    (s,) = aggregate_path_loss(rs, LocationRegistry.reference())
    assert s.pl_db == pytest.approx(73.0)
    split = aggregate_path_loss(rs, LocationRegistry.reference(), by_ptx=True)
    assert [x.pl_db for x in split] == [73.0, 73.0]


def test_aggregate_empty_and_unknown():
    assert aggregate_path_loss([], LocationRegistry.reference()) == []
    with pytest.raises(UnknownLocationError) as exc:
        aggregate_path_loss([rec(loc="99"), rec(loc="x")], LocationRegistry.reference())
    assert exc.value.ids == ["99", "x"]
    assert "99" in str(exc.value)


def test_time_variance():
    assert time_variance([rec(rssi=-50.0, t=i) for i in range(5)]) == {"7": 0.0}
    assert time_variance([rec(rssi=-50.0), rec(rssi=-52.0)])["7"] == pytest.approx(1.0)
    with pytest.warns(UserWarning, match="fewer than 2"):
        out = time_variance([rec(rssi=-50.0), rec(rssi=-52.0), rec(loc="10", rssi=-70.0)])
    assert set(out) == {"7"}


def test_time_variance_population_convention():
    rng = np.random.default_rng(4)
    vals = rng.normal(-60, 2.3, 500)
    got = time_variance([rec(rssi=float(v)) for v in vals])["7"]
    assert got == pytest.approx(np.std(vals, ddof=0), abs=1e-9)


def _grid(center_rssi, point_rssis, center="7"):
    rs = [rec(loc=center, rssi=center_rssi)]
    gmap = {center: center}
    for i, r in enumerate(point_rssis):
        pid = f"{center}-{i}"
        rs.append(rec(loc=pid, rssi=r))
        gmap[pid] = center
    return rs, gmap


def test_grid_variance():
    rs, gmap = _grid(-50.0, [-50.0] * 8)
    assert grid_variance(rs, gmap) == {"7": 0.0}
    rs, gmap = _grid(-50.0, [-53.0, -48.0, -49.0, -51.5])
    assert grid_variance(rs, gmap) == {"7": pytest.approx(3.0)}


def test_grid_variance_missing_center():
    rs, gmap = _grid(-50.0, [-52.0])
    with pytest.raises(InsufficientDataError, match="'7'"):
        grid_variance(rs[1:], gmap)


def _channel_records():
    rs = []
    for (loc, ch), m in reference.CHANNEL_MEANS.items():
        rs += [rec(loc=loc, channel=ch, rssi=m - 0.25), rec(loc=loc, channel=ch, rssi=m + 0.25)]
    return rs


def test_channel_variance_reference_table():
    out = channel_variance(_channel_records(), 36)
    assert out[("7", 40)] == pytest.approx(1.34, abs=1e-9)
    assert out[("7", 44)] == pytest.approx(3.78, abs=1e-9)
    assert out[("10", 40)] == pytest.approx(1.29, abs=1e-9)
    assert out[("10", 44)] == pytest.approx(0.59, abs=1e-9)
    assert out[("18", 40)] == pytest.approx(0.90, abs=1e-9)
    assert out[("18", 44)] == pytest.approx(-0.75, abs=1e-9)
    assert out[("7", 36)] == 0.0


def test_channel_variance_missing_reference():
    rs = [r for r in _channel_records() if not (r.location_id == "10" and r.channel == 36)]
    with pytest.raises(InsufficientDataError, match="'10'"):
        channel_variance(rs, 36)


@pytest.mark.filterwarnings("ignore:time_variance")
def test_variance_report_csv_and_threshold():
    rs, gmap = _grid(-50.0, [-56.0, -49.0])
    rs += [rec(loc="7", rssi=-50.0, channel=40)]
    rep = variance_report(rs, grid_map=gmap, reference_channel=36)
    text = rep.to_csv()
    lines = text.splitlines()
    assert lines[0] == "kind,location_id,channel,value_db"
    assert "grid_max_abs_diff,7,,6.000" in lines
    assert "channel_delta,7,40,0.000" in lines
    flagged = rep.exceeding(SHADOWING_SIGMA_DB)
    assert [f[0] for f in flagged] == ["grid_max_abs_diff"]


def test_reference_statistics_are_below_shadowing():
    for v in list(reference.TIME_STD_DB.values()) + list(reference.GRID_MAX_ABS_DIFF_DB.values()):
        assert v < SHADOWING_SIGMA_DB


def test_registry_reference_and_round_trip():
    reg = LocationRegistry.reference()
    assert len(reg) == 21
    assert reg["17"].distance_m == 24.304 and reg["17"].walls == 2
    assert min(g.distance_m for g in reg.values()) == 0.934
    assert max(g.walls for g in reg.values()) == 5
    text = write_registry(reg)
    assert text.splitlines()[0] == "location_id,distance_m,walls,floors,height_m"
    assert "17,24.304,2,0,0.505" in text.splitlines()
    back = read_registry(text)
    assert dict(back) == dict(reg)
    assert write_registry(back) == text


def test_registry_rejects_duplicates_and_bad_rows():
    with pytest.raises(ValueError, match="duplicate"):
        read_registry("location_id,distance_m,walls,floors,height_m\na,1,0,0,0\na,2,0,0,0\n")
    with pytest.raises(ValueError):
        read_registry("location_id,distance_m,walls,floors,height_m\na,0,0,0,0\n")


def test_grid_map_reader():
    gm = read_grid_map(io.StringIO("location_id,center_id\n7a,7\n7b,7\n"))
    assert gm == {"7a": "7", "7b": "7"}
    with pytest.raises(ValueError, match="twice"):
        read_grid_map("location_id,center_id\n7a,7\n7a,10\n")
