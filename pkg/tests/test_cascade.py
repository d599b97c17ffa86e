import math

import mpmath
import numpy as np
import pytest

from spurplan.cascade import (
    SensitivityInputs,
    cascade,
    cascade_report,
    dynamic_range,
    format_cascade_text,
    mds,
    narrowest_bandwidth_hz,
    retune_vga,
)
from spurplan.core import ChainStage, FrequencyBand, StageKind

BAND = FrequencyBand(50e6, 100e6)


def stage(name="s", kind=StageKind.AMPLIFIER, gain=10.0, nf=3.0,
          oip3=None, op1=None, grange=None):
    return ChainStage(name=name, kind=kind, gain_db=gain, nf_db=nf, band=BAND,
                      oip3_dbm=oip3, op1db_dbm=op1, gain_range_db=grange)


def friis_nf_db_reference(stages, dps=50):
    """Extended-precision Friis evaluation (independent oracle)."""
    with mpmath.workdps(dps):
        f_total = mpmath.mpf(0)
        g = mpmath.mpf(1)
        for i, s in enumerate(stages):
            f_k = mpmath.mpf(10) ** (mpmath.mpf(repr(s.nf_db)) / 10)
            if i == 0:
                f_total = f_k
            else:
                f_total += (f_k - 1) / g
            g *= mpmath.mpf(10) ** (mpmath.mpf(repr(s.gain_db)) / 10)
        return float(10 * mpmath.log10(f_total))


class TestCascade:
    def test_single_stage_identity(self):
        s = stage(gain=21.7, nf=1.4, oip3=33.9, op1=20.6)
        result = cascade([s])
        assert result.gain_db == 21.7
        assert result.nf_db == pytest.approx(1.4, abs=1e-12)
        assert result.oip3_dbm == pytest.approx(33.9, abs=1e-12)
        assert result.op1db_dbm == pytest.approx(20.6, abs=1e-12)
        assert result.iip3_dbm == pytest.approx(33.9 - 21.7, abs=1e-12)
        assert result.ip1db_dbm == pytest.approx(20.6 - 20.7, abs=1e-12)

    def test_two_stage_friis(self):
        # frozen from the extended-precision oracle:
        # 10 log10(10^0.14 + (10^0.27 - 1) / 10^2.17) = 1.4182987 dB
        stages = [stage("a", gain=21.7, nf=1.4), stage("b", gain=21.8, nf=2.7)]
        result = cascade(stages)
        assert result.nf_db == pytest.approx(1.4182987, abs=1e-6)
        assert result.nf_db == pytest.approx(friis_nf_db_reference(stages), abs=1e-9)

    def test_friis_matches_extended_precision_random(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            stages = [stage(f"s{i}",
                            gain=round(float(rng.uniform(-10, 25)), 3),
                            nf=round(float(rng.uniform(0.1, 12)), 3))
                      for i in range(10)]
            result = cascade(stages)
            assert abs(result.nf_db - friis_nf_db_reference(stages)) <= 1e-9

    def test_nf_never_below_first_stage(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            stages = [stage(f"s{i}",
                            gain=float(rng.uniform(-15, 25)),
                            nf=float(rng.uniform(0.0, 10)))
                      for i in range(int(rng.integers(1, 8)))]
            result = cascade(stages)
            assert result.nf_db >= stages[0].nf_db - 1e-12

    def test_appending_stage_monotone(self):
        rng = np.random.default_rng(13)
        stages = [stage("s0", gain=12.0, nf=2.0)]
        result = cascade(stages)
        for i in range(8):
            extra = stage(f"s{i + 1}", gain=float(rng.uniform(-12, 20)),
                          nf=float(rng.uniform(0.0, 9)))
            stages.append(extra)
            nxt = cascade(stages)
            assert nxt.nf_db >= result.nf_db - 1e-12
            assert nxt.gain_db == pytest.approx(result.gain_db + extra.gain_db)
            result = nxt

    def test_output_input_identities(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            stages = [stage(f"s{i}", gain=float(rng.uniform(-10, 22)),
                            nf=float(rng.uniform(0.1, 8)),
                            oip3=float(rng.uniform(10, 45)),
                            op1=float(rng.uniform(0, 30)))
                      for i in range(5)]
            result = cascade(stages)
            assert result.iip3_dbm == pytest.approx(result.oip3_dbm - result.gain_db)
            assert result.ip1db_dbm == pytest.approx(
                result.op1db_dbm - (result.gain_db - 1.0))

    def test_linear_stages_skipped_and_reported(self):
        stages = [stage("amp", gain=20, nf=3, oip3=30, op1=18),
                  stage("filt", kind=StageKind.FILTER, gain=-2, nf=2)]
        result = cascade(stages)
        assert result.no_oip3_stages == ("filt",)
        assert result.no_op1db_stages == ("filt",)
        # the filter contributes gain but no nonlinearity
        assert result.oip3_dbm == pytest.approx(30 - 2, abs=1e-12)

    def test_all_linear_chain_has_no_intercepts(self):
        result = cascade([stage("filt", kind=StageKind.FILTER, gain=-2, nf=2)])
        assert result.oip3_dbm is None
        assert result.op1db_dbm is None

    def test_running_partials(self):
        stages = [stage("a", gain=10, nf=2), stage("b", gain=5, nf=4)]
        result = cascade(stages)
        assert [r.stage_name for r in result.per_stage_running] == ["a", "b"]
        assert result.per_stage_running[0].gain_db == 10
        assert result.per_stage_running[-1].gain_db == result.gain_db
        assert result.per_stage_running[-1].nf_db == result.nf_db

    def test_empty_chain_rejected(self):
        with pytest.raises(ValueError):
            cascade([])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            cascade([stage(gain=math.inf)])


class TestMds:
    def test_receiver_sensitivity(self):
        # -174 + 2.5 + 10 log10(5e6) = -104.51 dBm
        value = mds(SensitivityInputs(nf_db=2.5, bandwidth_hz=5e6))
        assert value == pytest.approx(-104.51, abs=0.02)
        assert value == pytest.approx(-104.5103, abs=1e-3)

    def test_thermal_floor(self):
        assert mds(SensitivityInputs(nf_db=0.0, bandwidth_hz=1.0)) == -174.0

    def test_decade_rule(self):
        a = mds(SensitivityInputs(nf_db=3.0, bandwidth_hz=7e6))
        b = mds(SensitivityInputs(nf_db=3.0, bandwidth_hz=70e6))
        assert b - a == pytest.approx(10.0, abs=1e-9)

    def test_snr_offset(self):
        base = mds(SensitivityInputs(nf_db=3.0, bandwidth_hz=1e6))
        assert mds(SensitivityInputs(nf_db=3.0, bandwidth_hz=1e6, snr_min_db=12.0)) \
            == pytest.approx(base + 12.0)

    def test_bandwidth_validation(self):
        with pytest.raises(ValueError):
            SensitivityInputs(nf_db=3.0, bandwidth_hz=0.0)


class TestDynamicRange:
    def test_before_vga_reduction(self):
        assert dynamic_range(16.95, 54.4, -104.5) == pytest.approx(68.05, abs=1e-3)

    def test_after_vga_reduction(self):
        assert dynamic_range(16.93, 50.4, -104.5) == pytest.approx(72.03, abs=1e-3)

    def test_unity_gain(self):
        assert dynamic_range(10.0, 1.0, -100.0) == pytest.approx(110.0)

    def test_mds_decade_consistency(self):
        m1 = mds(SensitivityInputs(nf_db=2.0, bandwidth_hz=3e6))
        m2 = mds(SensitivityInputs(nf_db=2.0, bandwidth_hz=30e6))
        assert dynamic_range(10.0, 20.0, m2) == pytest.approx(
            dynamic_range(10.0, 20.0, m1) - 10.0, abs=1e-9)


class TestSbandChain:
    def test_totals_match_link_budget(self, sband_stages):
        result = cascade(sband_stages)
        assert result.gain_db == pytest.approx(54.4, abs=1e-9)
        assert result.nf_db == pytest.approx(2.49, abs=0.3)

    def test_narrowest_band(self, sband_stages):
        assert narrowest_bandwidth_hz(sband_stages) == pytest.approx(5e6)

    def test_retune_to_target(self, sband_stages):
        before = cascade(sband_stages)
        adjusted, after = retune_vga(sband_stages, 50.4)
        assert after.gain_db == pytest.approx(50.4, abs=1e-9)
        assert after.nf_db == pytest.approx(before.nf_db, abs=1e-12)
        vga = next(s for s in adjusted if s.kind is StageKind.VGA)
        assert vga.gain_db == pytest.approx(11.6)
        # lower gain, same compression ceiling: more dynamic range
        bw = narrowest_bandwidth_hz(sband_stages)
        dr_before = dynamic_range(before.op1db_dbm, before.gain_db,
                                  mds(SensitivityInputs(before.nf_db, bw)))
        dr_after = dynamic_range(after.op1db_dbm, after.gain_db,
                                 mds(SensitivityInputs(after.nf_db, bw)))
        assert dr_after > dr_before


class TestRetuneVga:
    def chain_with_vga(self):
        return [stage("a", gain=20, nf=2, oip3=30, op1=20),
                stage("v", kind=StageKind.VGA, gain=10, nf=7,
                      oip3=35, op1=22, grange=(-35, 23))]

    def test_noop(self):
        stages = self.chain_with_vga()
        adjusted, result = retune_vga(stages, 30.0)
        assert adjusted == stages
        assert result.gain_db == pytest.approx(30.0)

    def test_nf_unchanged_when_vga_last(self):
        stages = self.chain_with_vga()
        before = cascade(stages)
        _, after = retune_vga(stages, 25.0)
        assert abs(after.nf_db - before.nf_db) <= 0.01

    def test_no_vga(self):
        with pytest.raises(ValueError, match="no VGA"):
            retune_vga([stage("a")], 10.0)

    def test_multiple_vgas(self):
        stages = [stage("v1", kind=StageKind.VGA, gain=5, nf=6),
                  stage("v2", kind=StageKind.VGA, gain=5, nf=6)]
        with pytest.raises(ValueError, match="multiple"):
            retune_vga(stages, 12.0)

    def test_gain_range_enforced(self):
        with pytest.raises(ValueError, match="range"):
            retune_vga(self.chain_with_vga(), 60.0)


class TestReports:
    def test_report_fields(self, sband_stages):
        result = cascade(sband_stages)
        report = cascade_report(result, mds_dbm=-104.5, dynamic_range_db=70.0)
        for key in ("SystemNF_dB", "SystemPGain_dB", "SystemOutP1dB_dBm",
                    "MDS_dBm", "DynamicRange_dB"):
            assert key in report
        assert report["P1dBApproximate"] is True

    def test_text_report(self, sband_stages):
        result = cascade(sband_stages)
        text = format_cascade_text(result, mds_dbm=-104.54, dynamic_range_db=72.58)
        assert "SystemNF_dB" in text
        assert "SystemPGain_dB" in text
        assert "MDS_dBm" in text
        assert "DynamicRange_dB" in text
        for s in sband_stages:
            assert s.name in text
