import csv
import math

import pytest
from hypothesis import given, strategies as st

from hwmimo.circuits import (
    MIN_ADC_BITS,
    CircuitSpecs,
    adc_bits_for_kappa2,
    adc_kappa,
    adc_power,
    adc_scaled_bits,
    lna_power,
    lna_scaled_nf,
    lo_power,
    lo_variance,
    lo_zeta,
    noise_figure_db,
    power_report,
    total_adc_power,
    total_lna_power,
    total_lo_power,
    write_power_csv,
    xi_from_noise_figure,
)
from hwmimo.closed_form import apply_scaling
from hwmimo.model import ScalingExponents


def test_adc_examples():
    assert adc_kappa(8) == 2.0**-8
    assert adc_kappa(1) == 0.5
    kappas = [adc_kappa(b) for b in range(1, 40)]
    assert all(a > b > 0 for a, b in zip(kappas, kappas[1:]))
    assert adc_bits_for_kappa2(2.0**-16) == 8.0


def test_adc_bit_reduction():
    assert adc_scaled_bits(8, 256, 0.5) == 6.0
    assert adc_scaled_bits(8, 1, 0.5) == 8.0
    assert adc_scaled_bits(8, 2.0**40, 0.5) == MIN_ADC_BITS
    assert adc_scaled_bits(8, 2.0**40, 1.0) == MIN_ADC_BITS
    with pytest.raises(ValueError):
        adc_scaled_bits(8, 0.5, 0.5)


def test_adc_power_scaling():
    assert total_adc_power(300, 8, 0.0) == 300 * adc_power(8)
    assert total_adc_power(10_000, 8, 0.5) / total_adc_power(100, 8, 0.5) == pytest.approx(10.0, rel=1e-12)
    per_adc = total_adc_power(256, 8, 0.5) / 256
    assert adc_power(8) / per_adc == pytest.approx(16.0, rel=1e-12)


@given(st.floats(1, 1e6), st.floats(0, 1), st.floats(4, 16))
def test_adc_relaxation_reproduces_kappa_scaling(N, tau1, b0):
    bits = adc_scaled_bits(b0, N, tau1)
    if bits > MIN_ADC_BITS:
        assert adc_kappa(bits) ** 2 == pytest.approx(2.0 ** (-2 * b0) * N**tau1, rel=1e-10)
        assert total_adc_power(N, b0, tau1) / total_adc_power(1, b0, tau1) == pytest.approx(
            N ** (1 - tau1), rel=1e-10)
        scaled = apply_scaling(ScalingExponents(tau1=tau1, kappa0_sq=2.0 ** (-2 * b0)), N)
        assert scaled.kappa2 == pytest.approx(adc_kappa(bits) ** 2, rel=1e-10)


def test_lna_examples():
    assert lna_power(1.0, 2.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        lna_power(1.0, 1.0)
    assert xi_from_noise_figure(2.0) == pytest.approx(10**0.2, rel=1e-15)
    assert xi_from_noise_figure(2.0) == pytest.approx(1.585, abs=5e-4)
    assert noise_figure_db(10**0.2) == pytest.approx(2.0, rel=1e-14)
    assert lna_scaled_nf(2.0, 100, 0.5) - 2.0 == pytest.approx(10.0, rel=1e-14)


@given(st.floats(1, 1e6), st.floats(0, 1), st.floats(1, 10))
def test_lna_scaling_matches_substitution(N, tau2, xi0):
    nf = lna_scaled_nf(noise_figure_db(xi0), N, tau2)
    xi = apply_scaling(ScalingExponents(tau2=tau2, xi0=xi0), N).xi
    assert xi_from_noise_figure(nf) == pytest.approx(xi, rel=1e-10)


def test_lna_fom_holds_by_construction():
    for gain, xi, fom in [(10.0, 1.3, 2.0), (100.0, 3.0, 0.5)]:
        p = lna_power(gain, xi, fom)
        assert gain / ((xi - 1) * p) == pytest.approx(fom, rel=1e-14)


def test_total_lna_power_models():
    base = total_lna_power(1, 10**0.2, 0.5)
    assert total_lna_power(400, 10**0.2, 0.5) / base == pytest.approx(20.0, rel=1e-12)
    assert total_lna_power(50, 10**0.2, 0.0) == pytest.approx(50 * base, rel=1e-14)
    # the figure-of-merit model falls faster because xi - 1 grows faster than xi
    fom = total_lna_power(400, 10**0.2, 0.5, model="fom")
    assert fom < total_lna_power(400, 10**0.2, 0.5)
    with pytest.raises(ValueError):
        total_lna_power(4, 2.0, 0.5, model="other")


def test_lo_examples():
    assert lo_variance(2e9, 1e-7, 0.0) == 0.0
    assert lo_variance(4e9, 1e-7, 1e-17) == pytest.approx(4 * lo_variance(2e9, 1e-7, 1e-17), rel=1e-14)
    # 1.6e-4 / (4 pi^2 * 4e18 * 1e-7)
    assert lo_zeta(1.6e-4, 2e9, 1e-7) == pytest.approx(1.0132118364233778e-17, rel=1e-12)
    assert lo_power(0.25, 2.0) == 8.0
    with pytest.raises(ValueError):
        lo_power(0.0)


@given(st.floats(1e8, 1e11), st.floats(1e-9, 1e-5), st.floats(1e-20, 1e-10))
def test_lo_round_trip(fc, ts, zeta):
    assert lo_zeta(lo_variance(fc, ts, zeta), fc, ts) == pytest.approx(zeta, rel=1e-12)


def test_total_lo_power():
    p = lo_power(1e-17)
    assert total_lo_power(64, 1e-17, 0.0) == pytest.approx(64 * p, rel=1e-14)
    assert total_lo_power(math.e, 1e-17, 1.0) == pytest.approx(math.e * p / 2, rel=1e-14)
    for N in (1, 10, 10**4):
        assert total_lo_power(N, 1e-17, 0.0, oscillator="clo") == p
    with pytest.raises(ValueError):
        total_lo_power(10, 1e-17, 0.5, oscillator="clo")


def test_power_report_scalings():
    ns = [1, 100, 400, 10_000]
    flat = power_report(ns, CircuitSpecs(), ScalingExponents(), "slo")
    for row in flat:
        for comp in ("adc", "lna", "lo"):
            assert row[comp] == pytest.approx(row["N"] * flat[0][comp], rel=1e-12)
    sq = power_report(ns, CircuitSpecs(), ScalingExponents(0.5, 0.5, 0.0), "slo")
    for row in sq:
        for comp in ("adc", "lna"):
            assert row[comp] / sq[0][comp] == pytest.approx(math.sqrt(row["N"]), rel=1e-12)
    drift = power_report(ns, CircuitSpecs(), ScalingExponents(0, 0, 2.0), "slo")
    for row in drift:
        assert row["lo"] / drift[0]["lo"] == pytest.approx(row["N"] / (1 + 2 * math.log(row["N"])))
    clo = power_report(ns, CircuitSpecs(), ScalingExponents(0.5, 0.5, 0.0), "clo")
    assert len({row["lo"] for row in clo}) == 1 and clo[0]["mode"] == "clo"


def test_power_csv(tmp_path):
    rows = power_report([1, 4], CircuitSpecs(), ScalingExponents(0.5, 0.5, 0.0), "slo")
    path = tmp_path / "power.csv"
    write_power_csv(rows, path)
    with open(path, newline="") as fh:
        table = list(csv.reader(fh))
    assert table[0] == ["N", "component", "mode", "total_power"]
    assert len(table) == 1 + 2 * 3
    assert {r[1] for r in table[1:]} == {"adc", "lna", "lo"}
    assert float(table[-2][3]) == rows[1]["lna"]
