import numpy as np
import pytest
from hypothesis import given, strategies as st

from hwmimo.model import (
    HardwareProfile,
    Oscillator,
    PilotBook,
    ScalingExponents,
    Scenario,
    SystemConfig,
    dbm_per_hz_to_linear,
    validate,
)


def test_minimal_system_is_valid():
    cfg = SystemConfig(L=1, K=1, N=1, T=2, B=1, sigma2=1.0)
    scen = Scenario(np.ones((1, 1, 1)), np.ones((1, 1)), [[0]])
    assert validate(cfg, scen) == []


def test_more_users_than_pilots_is_reported():
    cfg = SystemConfig(L=1, K=9, N=4, T=20, B=8, sigma2=1.0)
    scen = Scenario(np.ones((1, 1, 9)), np.ones((1, 9)), [list(range(8)) + [0]])
    errors = validate(cfg, scen)
    assert "K <= B violated" in errors


def test_duplicate_in_cell_pilot_is_reported():
    cfg = SystemConfig(L=2, K=3, N=4, T=20, B=4, sigma2=1.0)
    scen = Scenario(np.ones((2, 2, 3)), np.ones((2, 3)), [[0, 2, 2], [0, 1, 2]])
    errors = validate(cfg, scen)
    assert errors == ["duplicate in-cell pilot in cell 0"]


def test_validate_reports_instead_of_raising_on_garbage():
    cfg = SystemConfig(L=2, K=2, N=0, T=3, B=5, sigma2=-1.0)
    scen = Scenario(np.ones((3, 1)), -np.ones((2,)), [[7]])
    errors = validate(cfg, scen)
    assert len(errors) >= 5


@pytest.mark.parametrize("dbm, expected", [
    (-47.0, 10**-4.7),
    (-174.0, 10**-17.4),
    (0.0, 1.0),
])
def test_dbm_conversion(dbm, expected):
    assert dbm_per_hz_to_linear(dbm) == pytest.approx(expected, rel=1e-15)


def test_dbm_conversion_vectorized():
    assert np.allclose(dbm_per_hz_to_linear([-47.0, 0.0]), [1.9952623149688786e-05, 1.0])


@given(st.integers(1, 24))
def test_dft_pilots_orthogonal_and_constant_modulus(B):
    seq = PilotBook.dft(B).sequences
    gram = seq.conj() @ seq.T
    assert np.allclose(np.abs(seq), 1.0, atol=1e-12)
    assert np.allclose(gram, B * np.eye(B), atol=1e-12)


def test_effective_pilot_power_matches_user_power():
    scen = Scenario(np.ones((2, 2, 3)), [[1.0, 2.0, 3.0], [0.5, 0.25, 4.0]], [[0, 1, 2], [2, 0, 1]])
    x = PilotBook.dft(4).effective(scen)
    assert np.allclose(np.abs(x) ** 2, scen.power[..., None])


def test_hardware_profile_invariants():
    with pytest.raises(ValueError):
        HardwareProfile(xi=0.9)
    with pytest.raises(ValueError):
        HardwareProfile(delta=-1e-3)
    assert HardwareProfile(oscillator="CLO").oscillator is Oscillator.CLO
    with pytest.raises(ValueError):
        HardwareProfile(oscillator="shared")


def test_scaling_exponents_invariants():
    with pytest.raises(ValueError):
        ScalingExponents(tau1=-0.1)
    with pytest.raises(ValueError):
        ScalingExponents(xi0=0.5)


def test_types_are_immutable():
    scen = Scenario(np.ones((1, 1, 1)), np.ones((1, 1)))
    with pytest.raises(ValueError):
        scen.lam[0, 0, 0] = 2.0
