import math

import pytest
from mpmath import mp, mpf, log10

from tmbwifi import (
    DEFAULT_PARAMS,
    DomainError,
    LinkGeometry,
    ModelId,
    PathLossParams,
    evaluate,
    link_budget,
    pl_enterprise,
    pl_itu,
    pl_log_distance,
    pl_residential,
    pl_tmb,
    pl_wall_factor,
    rssi_at,
)
from tmbwifi.pathloss import params_from_text, params_to_text

# Golden values from a 30-digit mpmath evaluation of the closed-form models
# (see _oracle below), frozen to 3 decimals.
GOLDEN = [
    (ModelId.RESIDENTIAL, dict(distance_m=5), {}, 60.712),
    (ModelId.RESIDENTIAL, dict(distance_m=10, walls=2), {}, 81.248),
    (ModelId.ENTERPRISE, dict(distance_m=10), {}, 66.732),
    (ModelId.ENTERPRISE, dict(distance_m=1), dict(fc_ghz=2.4), 40.050),
    (ModelId.ENTERPRISE, dict(distance_m=20, walls=3), {}, 98.268),
    (ModelId.LOG_DISTANCE, dict(distance_m=1), {}, 54.120),
    (ModelId.LOG_DISTANCE, dict(distance_m=10), {}, 74.727),
    (ModelId.LOG_DISTANCE, dict(distance_m=100), {}, 95.333),
    (ModelId.WALL_FACTOR, dict(distance_m=11.141, walls=4), {}, 96.694),
    (ModelId.WALL_FACTOR, dict(distance_m=5.778, walls=2), {}, 80.318),
    (ModelId.TMB, dict(distance_m=1), {}, 54.890),
    (ModelId.TMB, dict(distance_m=10), {}, 82.428),
    (ModelId.ITU, dict(distance_m=1), {}, 46.287),
    (ModelId.ITU, dict(distance_m=10), {}, 77.287),
    (ModelId.ITU, dict(distance_m=1), dict(lf_itu_db=6.0), 52.287),
]


def _oracle(model, d, walls=0, floors=0, p=DEFAULT_PARAMS):
    mp.dps = 30
    d, fc = mpf(d), mpf(p.fc_ghz)
    l0, g, k, wb = mpf(p.l0_db), mpf(p.gamma), mpf(p.k_db_per_wall), mpf(p.wbar_walls_per_m)
    if model is ModelId.RESIDENTIAL:
        v = 40.05 + 20 * log10(fc / 2.4) + 20 * log10(min(d, 5))
        v += 35 * log10(d / 5) if d > 5 else 0
        v += 18.3 * mpf(floors) ** (mpf(floors + 2) / (floors + 1) - mpf("0.46")) if floors else 0
        return float(v + 5 * walls)
    if model is ModelId.ENTERPRISE:
        v = 40.05 + 20 * log10(fc / 2.4) + 20 * log10(min(d, 10))
        v += 35 * log10(d / 10) if d > 10 else 0
        return float(v + 7 * walls)
    if model is ModelId.LOG_DISTANCE:
        return float(l0 + 10 * g * log10(d))
    if model is ModelId.WALL_FACTOR:
        return float(l0 + 10 * g * log10(d) + k * walls)
    if model is ModelId.TMB:
        return float(l0 + 10 * g * log10(d) + k * wb * d)
    return float(20 * log10(fc * 1000) + mpf(p.n_itu) * log10(d) + mpf(p.lf_itu_db) - 28)


@pytest.mark.parametrize("model,geom,over,expected", GOLDEN, ids=lambda v: getattr(v, "value", None))
def test_golden_values(model, geom, over, expected):
    params = DEFAULT_PARAMS.with_overrides(**over)
    got = evaluate(model, LinkGeometry(**geom), params)
    assert got == pytest.approx(expected, abs=1e-3)
    assert got == pytest.approx(_oracle(model, geom["distance_m"], geom.get("walls", 0), p=params), abs=1e-9)


@pytest.mark.parametrize("model", list(ModelId))
@pytest.mark.parametrize("d", [0.3, 0.934, 4.999, 5.0, 7.5, 10.0, 24.304, 80.0])
@pytest.mark.parametrize("walls,floors", [(0, 0), (3, 0), (1, 2)])
def test_matches_high_precision_oracle(model, d, walls, floors):
    geom = LinkGeometry(d, walls, floors)
    assert evaluate(model, geom) == pytest.approx(_oracle(model, d, walls, floors), abs=1e-9)


def test_dispatch_is_identical_to_direct_call():
    g = LinkGeometry(7.267, 2, 1)
    direct = {
        ModelId.RESIDENTIAL: pl_residential,
        ModelId.ENTERPRISE: pl_enterprise,
        ModelId.LOG_DISTANCE: pl_log_distance,
        ModelId.WALL_FACTOR: pl_wall_factor,
        ModelId.TMB: pl_tmb,
        ModelId.ITU: pl_itu,
    }
    for model, fn in direct.items():
        assert evaluate(model, g) == fn(g, DEFAULT_PARAMS)
        assert evaluate(model.value, g) == fn(g, DEFAULT_PARAMS)


def test_residential_breakpoint_continuity():
    eps = 1e-4
    left = pl_residential(LinkGeometry(5 - eps))
    right = pl_residential(LinkGeometry(5 + eps))
    assert abs(left - right) < 0.01


def test_residential_floor_term():
    base = pl_residential(LinkGeometry(3.0))
    assert pl_residential(LinkGeometry(3.0, floors=1)) - base == pytest.approx(18.3, abs=1e-12)
    two = 18.3 * 2 ** (4 / 3 - 0.46)
    assert pl_residential(LinkGeometry(3.0, floors=2)) - base == pytest.approx(two, abs=1e-12)


def test_frequency_scaling():
    g = LinkGeometry(12.0, 1)
    lo = pl_residential(g, DEFAULT_PARAMS.with_overrides(fc_ghz=2.6))
    hi = pl_residential(g, DEFAULT_PARAMS.with_overrides(fc_ghz=5.2))
    assert hi - lo == pytest.approx(20 * math.log10(2), abs=1e-12)


def test_short_distances_are_not_clamped():
    # below 1 m the log term goes negative; no near-field correction
    assert pl_log_distance(LinkGeometry(0.5)) < DEFAULT_PARAMS.l0_db
    assert pl_enterprise(LinkGeometry(0.5)) < 40.05 + 20 * math.log10(5.18 / 2.4)


@pytest.mark.parametrize("model", list(ModelId))
def test_domain_error_on_non_positive_distance(model):
    with pytest.raises(DomainError):
        evaluate(model, LinkGeometry(0.0))
    with pytest.raises(DomainError):
        LinkGeometry(-1.0)


def test_geometry_validation():
    with pytest.raises(DomainError):
        LinkGeometry(3.0, walls=-1)
    with pytest.raises(DomainError):
        LinkGeometry(float("nan"))


def test_params_validation():
    with pytest.raises(DomainError):
        PathLossParams(gamma=0.0)
    with pytest.raises(DomainError):
        PathLossParams(k_db_per_wall=-1)
    with pytest.raises(DomainError):
        PathLossParams(fc_ghz=0)


def test_rssi_at_and_link_budget():
    g = LinkGeometry(10.0)
    assert rssi_at(ModelId.TMB, g, DEFAULT_PARAMS, 23.0) == pytest.approx(-59.428, abs=1e-3)
    lb = link_budget(ModelId.TMB, g, DEFAULT_PARAMS, 23.0)
    assert abs(lb.pl_db - (lb.ptx_dbm - lb.rssi_dbm)) <= 2 * math.ulp(lb.pl_db)


def test_measured_link_budget_location_7():
    # ch36 reference mean RSSI at location 7 with the AP at 23 dBm
    assert 23.0 - (-44.74) == pytest.approx(67.74, abs=1e-12)


def test_model_names():
    assert ModelId.parse("TMB") is ModelId.TMB
    assert ModelId.parse("log_distance") is ModelId.LOG_DISTANCE
    assert ModelId.parse("itu-r") is ModelId.ITU
    with pytest.raises(ValueError, match="unknown model"):
        ModelId.parse("hata")
    assert {m.location_specific for m in ModelId} == {True, False}


def test_params_text_round_trip():
    p = PathLossParams(l0_db=50.123456789, gamma=2.5, k_db_per_wall=3.3, wbar_walls_per_m=0.1, fc_ghz=5.2)
    text = params_to_text(p)
    assert text.splitlines()[0] == "l0_db=50.123456789"
    assert [line.split("=")[0] for line in text.splitlines()] == [
        "l0_db", "gamma", "k_db_per_wall", "wbar_walls_per_m", "fc_ghz", "n_itu", "lf_itu_db",
    ]
    assert params_from_text(text) == p


def test_params_text_partial_and_errors():
    assert params_from_text("# only k\nk_db_per_wall = 4\n") == DEFAULT_PARAMS.with_overrides(k_db_per_wall=4.0)
    with pytest.raises(ValueError, match="unknown parameter key"):
        params_from_text("L0=3\n")
    with pytest.raises(ValueError, match="not a number"):
        params_from_text("gamma=abc\n")
    with pytest.raises(ValueError, match="duplicate"):
        params_from_text("gamma=2\ngamma=3\n")
