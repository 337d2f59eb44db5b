import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hwmimo.model import validate
from hwmimo.instances import reference_config
from hwmimo.scenario import (
    Geometry,
    ShadowFadingModel,
    build_scenario,
    drop_ues,
    pathloss,
    read_scenario_csv,
    wrap_distance,
    write_scenario_csv,
)


@pytest.mark.parametrize("a, b, world, expected", [
    ((0, 0), (900, 0), 1000, 100.0),
    ((100, 100), (100, 100), 1000, 0.0),
    ((0, 0), (500, 500), 1000, math.sqrt(2) * 500),
])
def test_wrap_distance_examples(a, b, world, expected):
    assert wrap_distance(a, b, world) == pytest.approx(expected, rel=1e-12)


coord = st.floats(0, 999.999, allow_nan=False)
point = st.tuples(coord, coord)


@given(point, point, point)
def test_wrap_distance_is_a_metric(a, b, c):
    w = 1000.0
    ab, ba = wrap_distance(a, b, w), wrap_distance(b, a, w)
    assert ab == pytest.approx(ba)
    assert wrap_distance(a, a, w) == 0
    assert ab <= wrap_distance(a, c, w) + wrap_distance(c, b, w) + 1e-9
    assert ab <= w / math.sqrt(2) + 1e-9


def test_pathloss_examples():
    # 10**(0 - 1.53) / 35**3.76 evaluated by hand
    assert pathloss(35.0, 0.0) == pytest.approx(4.6164076628018106e-08, rel=1e-12)
    assert pathloss(70.0, 0.0) == pytest.approx(pathloss(35.0, 0.0) / 2**3.76, rel=1e-12)
    assert pathloss(50.0, 0.5) == pytest.approx(pathloss(50.0, 0.0) * 10**0.5, rel=1e-12)


def test_pathloss_rejects_short_distance():
    with pytest.raises(ValueError, match="min_distance"):
        pathloss(20.0, 0.0)


@given(st.floats(35, 2000), st.floats(35, 2000), st.floats(-2, 2), st.floats(-2, 2))
def test_pathloss_monotone(d1, d2, s1, s2):
    if d1 < d2 * (1 - 1e-12):
        assert pathloss(d1, 0.0) > pathloss(d2, 0.0)
    if s1 < s2 - 1e-12:
        assert pathloss(100.0, s1) < pathloss(100.0, s2)


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_drop_distances_within_cell(seed):
    geo = Geometry()
    ues = drop_ues(geo, seed)
    assert ues.shape == (16, 8, 2)
    d = np.hypot(*(ues - geo.bs_positions()[:, None]).transpose(2, 0, 1))
    assert d.min() >= 35.0
    assert d.max() <= 125 * math.sqrt(2)


def test_drop_one_user_per_sector():
    geo = Geometry()
    ues = drop_ues(geo, 3)
    rel = ues - geo.bs_positions()[:, None]
    sector = (np.mod(np.arctan2(rel[..., 1], rel[..., 0]), 2 * np.pi) // (np.pi / 4)).astype(int)
    assert np.array_equal(sector, np.broadcast_to(np.arange(8), (16, 8)))


def test_drop_single_sector_and_determinism():
    geo = Geometry(sectors_per_cell=1)
    assert drop_ues(geo, 5).shape == (16, 1, 2)
    assert np.array_equal(drop_ues(Geometry(), 11), drop_ues(Geometry(), 11))


def test_geometry_invariants():
    with pytest.raises(ValueError):
        Geometry(cell_side=60.0, min_distance=35.0)


def test_default_scenario_matches_reference_layout():
    scen = build_scenario(seed=0)
    assert scen.lam.shape == (16, 16, 8)
    assert np.allclose(scen.power, 10**-4.7)
    assert validate(reference_config(), scen) == []
    assert np.array_equal(scen.pilot_assignment[0], scen.pilot_assignment[1])
    for b in range(8):
        assert (scen.pilot_assignment == b).sum() == 16


def test_zero_shadowing_depends_only_on_distance():
    geo = Geometry()
    scen = build_scenario(geo, ShadowFadingModel(0.0), seed=4)
    ss = np.random.SeedSequence(4)
    ues = drop_ues(geo, ss.spawn(1)[0])
    d = wrap_distance(geo.bs_positions()[:, None, None], ues[None], geo.world_side)
    assert np.allclose(scen.lam, 10**-1.53 / d**3.76, rtol=1e-12)


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_shadow_exponent_statistics(seed):
    geo = Geometry()
    scen = build_scenario(geo, ShadowFadingModel(0.5), seed=seed)
    flat = build_scenario(geo, ShadowFadingModel(0.0), seed=seed)
    s = np.log10(scen.lam / flat.lam).ravel()
    # 2048 draws: mean within ~4 SE, std within ~10 %
    assert abs(s.mean()) < 4 * 0.5 / math.sqrt(s.size)
    assert 0.45 < s.std() < 0.55


def test_scenario_csv_round_trip(tmp_path):
    scen = build_scenario(Geometry(grid=2), seed=9)
    path = tmp_path / "scenario.csv"
    write_scenario_csv(scen, path)
    back = read_scenario_csv(path)
    assert np.array_equal(back.lam, scen.lam)
    assert np.array_equal(back.power, scen.power)
    assert np.array_equal(back.pilot_assignment, scen.pilot_assignment)
    header = path.read_text().splitlines()[0]
    assert header == "j,l,k,lambda,pilot_index,p"
